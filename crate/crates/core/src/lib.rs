pub mod corep;
pub mod error;
pub mod group;
pub mod hopf;
pub mod io;
pub mod linalg;
pub mod lipnorm;
pub mod lp;
pub mod mk;
pub mod compress;
pub mod sampling;
pub mod sweep;
