//! Seeded random elements, vectors, states and isometries.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::hopf::{FiniteQuantumGroup, Functional};
use crate::linalg::{c, r, CMat, CVec};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut SeededRng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn complex_gaussian_vec(rng: &mut SeededRng, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| c(gaussian(rng), gaussian(rng))))
}

pub fn real_gaussian_vec(rng: &mut SeededRng, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| r(gaussian(rng))))
}

pub fn complex_gaussian_mat(rng: &mut SeededRng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Haar-distributed unit vector.
pub fn unit_vector(rng: &mut SeededRng, n: usize) -> CVec {
    loop {
        let v = complex_gaussian_vec(rng, n);
        let nrm = v.norm();
        if nrm > 1e-12 {
            return v / r(nrm);
        }
    }
}

/// Flat Dirichlet weights.
pub fn simplex_weights(rng: &mut SeededRng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Isometry `C^cols → C^rows` from the QR factor of a Gaussian matrix.
pub fn isometry(rng: &mut SeededRng, rows: usize, cols: usize) -> CMat {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let g = complex_gaussian_mat(rng, rows, cols);
    g.qr().q()
}

/// Random density matrix of full rank.
pub fn density(rng: &mut SeededRng, n: usize) -> CMat {
    let g = complex_gaussian_mat(rng, n, n);
    let p = &g * g.adjoint();
    let t = p.trace();
    p / t
}

/// Vector state `a ↦ ⟨ρ(a)ξ, ξ⟩` on the algebra.
pub fn vector_state(g: &FiniteQuantumGroup, xi: &CVec) -> Functional {
    Functional(CVec::from_iterator(
        g.dim(),
        g.rep_basis().iter().map(|m| xi.dotc(&(m * xi))),
    ))
}

/// States of the algebra: vector states at the basis of the representation space,
/// then random vector states interleaved with random convex mixtures.
/// The first `m` entries do not depend on `count`.
pub fn algebra_states(g: &FiniteQuantumGroup, count: usize, seed: u64) -> Vec<Functional> {
    let d0 = g.rep_dim();
    let mut rng = rng(seed);
    let mut out: Vec<Functional> = Vec::with_capacity(count);
    for i in 0..count {
        if i < d0 {
            out.push(vector_state(g, &crate::linalg::basis_vec(d0, i)));
        } else if i % 4 == 3 {
            let w = simplex_weights(&mut rng, 3);
            let mut f = CVec::zeros(g.dim());
            for wk in w {
                let j = rng.gen_range(0..i);
                f += &out[j].0 * r(wk);
            }
            out.push(Functional(f));
        } else {
            let xi = unit_vector(&mut rng, d0);
            out.push(vector_state(g, &xi));
        }
    }
    out
}

/// Random elements with complex Gaussian coefficients.
pub fn elements(n: usize, count: usize, seed: u64) -> Vec<CVec> {
    let mut rng = rng(seed);
    (0..count).map(|_| complex_gaussian_vec(&mut rng, n)).collect()
}
