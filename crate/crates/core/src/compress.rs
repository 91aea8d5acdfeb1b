//! Compressions `a ↦ P_Λ π(a) P_Λ` onto Peter-Weyl subspaces, the coactions they
//! inherit, symbol maps and states on the compressed operator systems.

use rand::Rng;

use crate::corep::{Corepresentation, PeterWeyl};
use crate::error::{Error, Result};
use crate::hopf::{FiniteQuantumGroup, Functional};
use crate::linalg::{
    eigh, kron, max_abs, max_abs_vec, null_space, numerical_rank, op_norm, pinv, r, rank, svd, unvectorize,
    vectorize, CMat, CVec, C64, ZERO,
};
use crate::sampling;

const RANK_TOL: f64 = 1e-10;

/// The operator system `A^(Λ) = τ(A) ⊆ B(H_Λ)` with an orthonormal (Hilbert-Schmidt)
/// basis `B_s` obtained from the singular value decomposition of `τ`.
#[derive(Clone, Debug)]
pub struct TruncatedSystem {
    lambda: Vec<usize>,
    basis_h: CMat,
    tau_ops: Vec<CMat>,
    sys_basis: Vec<CMat>,
    tau_sys: CMat,
    lift: CMat,
    kernel: CMat,
    unit: CVec,
    n: usize,
}

impl TruncatedSystem {
    pub fn new(g: &FiniteQuantumGroup, pw: &PeterWeyl, lambda: &[usize]) -> Result<Self> {
        let proj = pw.projector(lambda)?;
        let q = proj.basis;
        let n = g.dim();
        let rr = q.ncols();
        let tau_ops: Vec<CMat> = (0..n)
            .map(|i| q.adjoint() * pw.gns().op(g, &crate::linalg::basis_vec(n, i)) * &q)
            .collect();
        let mut tmat = CMat::zeros(rr * rr, n);
        for (i, t) in tau_ops.iter().enumerate() {
            tmat.set_column(i, &vectorize(t));
        }
        let dec = svd(&tmat);
        let k = numerical_rank(&dec.s, RANK_TOL);
        let uk = dec.u.columns(0, k).into_owned();
        let sys_basis = (0..k).map(|s| unvectorize(&uk.column(s).into_owned(), rr, rr)).collect();
        let tau_sys = uk.adjoint() * &tmat;
        let lift = pinv(&tau_sys, RANK_TOL);
        let kernel = dec.v.columns(k, n - k).into_owned();
        let mut sys = Self {
            lambda: proj.lambda,
            basis_h: q,
            tau_ops,
            sys_basis,
            tau_sys,
            lift,
            kernel,
            unit: CVec::zeros(k),
            n,
        };
        sys.unit = sys.coords(&CMat::identity(rr, rr));
        Ok(sys)
    }

    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    /// Dimension of the operator system.
    pub fn dim(&self) -> usize {
        self.sys_basis.len()
    }

    /// Dimension of `H_Λ`.
    pub fn hilbert_dim(&self) -> usize {
        self.basis_h.ncols()
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    /// Orthonormal basis of `H_Λ` inside the GNS space.
    pub fn hilbert_basis(&self) -> &CMat {
        &self.basis_h
    }

    pub fn system_basis(&self) -> &[CMat] {
        &self.sys_basis
    }

    /// Matrix `k x n` of `τ` in system coordinates.
    pub fn tau_matrix(&self) -> &CMat {
        &self.tau_sys
    }

    pub fn tau_basis(&self) -> &[CMat] {
        &self.tau_ops
    }

    /// Orthonormal basis of `ker τ`.
    pub fn kernel(&self) -> &CMat {
        &self.kernel
    }

    /// Coordinates of the unit `P_Λ`.
    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    /// `τ(a)` in system coordinates.
    pub fn compress(&self, a: &CVec) -> CVec {
        &self.tau_sys * a
    }

    /// `τ(a)` as an operator on `H_Λ`.
    pub fn compress_matrix(&self, a: &CVec) -> CMat {
        let rr = self.hilbert_dim();
        let mut m = CMat::zeros(rr, rr);
        for (i, t) in self.tau_ops.iter().enumerate() {
            if a[i] != ZERO {
                m += t * a[i];
            }
        }
        m
    }

    pub fn to_matrix(&self, x: &CVec) -> CMat {
        let rr = self.hilbert_dim();
        let mut m = CMat::zeros(rr, rr);
        for (s, b) in self.sys_basis.iter().enumerate() {
            m += b * x[s];
        }
        m
    }

    /// Hilbert-Schmidt projection of an operator onto the system, in coordinates.
    pub fn coords(&self, m: &CMat) -> CVec {
        CVec::from_iterator(self.dim(), self.sys_basis.iter().map(|b| b.dotc(m)))
    }

    /// Distance of an operator from the system in Hilbert-Schmidt norm.
    pub fn membership_residual(&self, m: &CMat) -> f64 {
        (self.to_matrix(&self.coords(m)) - m).norm()
    }

    /// Moore-Penrose right inverse of `τ`.
    pub fn lift(&self, x: &CVec) -> CVec {
        &self.lift * x
    }

    pub fn lift_matrix(&self) -> &CMat {
        &self.lift
    }

    pub fn norm(&self, x: &CVec) -> f64 {
        op_norm(&self.to_matrix(x))
    }

    pub fn star(&self, x: &CVec) -> CVec {
        self.coords(&self.to_matrix(x).adjoint())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `α^τ(τ(a)) = (τ ⊗ id)Δ(a)`.
    Right,
    /// `β^τ(τ(a)) = (id ⊗ τ)Δ(a)`.
    Left,
}

/// Induced coaction on the truncated system. Images of basis elements are stored as
/// `k x n` coefficient matrices with the system index first, for either side.
#[derive(Clone, Debug)]
pub struct InducedCoaction {
    side: Side,
    images: Vec<CMat>,
    well_definedness: f64,
}

/// Builds `α^τ` or `β^τ` and certifies `ker τ ⊆ ker (τ ⊗ id)Δ` (resp. `(id ⊗ τ)Δ`).
pub fn induced_coaction(
    g: &FiniteQuantumGroup,
    t: &TruncatedSystem,
    side: Side,
    tol: f64,
) -> Result<InducedCoaction> {
    let push = |a: &CVec| -> CMat {
        let d = g.comultiply(a);
        match side {
            Side::Right => t.tau_matrix() * d,
            Side::Left => t.tau_matrix() * d.transpose(),
        }
    };
    let mut well = 0.0f64;
    for z in t.kernel().column_iter() {
        well = well.max(max_abs(&push(&z.into_owned())));
    }
    if well > tol {
        return Err(Error::cert("coaction well-definedness", well, tol));
    }
    let images = (0..t.dim())
        .map(|s| push(&t.lift_matrix().column(s).into_owned()))
        .collect();
    Ok(InducedCoaction { side, images, well_definedness: well })
}

/// Residuals of the coaction identities from [`InducedCoaction::check`].
#[derive(Clone, Debug)]
pub struct CoactionReport {
    pub well_definedness: f64,
    pub coaction: f64,
    pub counit: f64,
    pub podles_rank: usize,
    pub podles_target: usize,
    pub fixed_point_dim: usize,
}

impl CoactionReport {
    pub fn max_residual(&self) -> f64 {
        self.well_definedness.max(self.coaction).max(self.counit)
    }
}

impl InducedCoaction {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn images(&self) -> &[CMat] {
        &self.images
    }

    pub fn well_definedness(&self) -> f64 {
        self.well_definedness
    }

    pub fn system_dim(&self) -> usize {
        self.images.len()
    }

    /// Coefficient matrix (`k x n`) of the coaction applied to `x`.
    pub fn apply(&self, x: &CVec) -> CMat {
        let (k, n) = self.images[0].shape();
        let mut m = CMat::zeros(k, n);
        for (s, a) in self.images.iter().enumerate() {
            if x[s] != ZERO {
                m += a * x[s];
            }
        }
        m
    }

    /// Slice by a functional on the system: `(φ ⊗ id)α(x)` or `(id ⊗ φ)β(x)`.
    pub fn slice_system(&self, phi: &CVec, x: &CVec) -> CVec {
        self.apply(x).transpose() * phi
    }

    /// Slice by a functional on the algebra: `(id ⊗ μ)α(x)` or `(μ ⊗ id)β(x)`.
    pub fn slice_algebra(&self, x: &CVec, mu: &Functional) -> CVec {
        self.apply(x) * &mu.0
    }

    /// Matrix (`k x k`) of `x ↦ (id ⊗ μ)α(x)`.
    pub fn slice_algebra_matrix(&self, mu: &Functional) -> CMat {
        let k = self.images.len();
        let mut m = CMat::zeros(k, k);
        for (s, a) in self.images.iter().enumerate() {
            m.set_column(s, &(a * &mu.0));
        }
        m
    }

    /// Coaction and counit identities, Podleś density rank, fixed-point dimension.
    pub fn check(&self, g: &FiniteQuantumGroup) -> CoactionReport {
        let k = self.images.len();
        let n = g.dim();
        let comult = g.comult_basis();
        let mut coaction = 0.0f64;
        let mut counit = 0.0f64;
        let eps = g.counit();
        for (tt, a_t) in self.images.iter().enumerate() {
            let e_t = crate::linalg::basis_vec(k, tt);
            counit = counit.max(max_abs_vec(&(a_t * &eps.0 - &e_t)));
            for u in 0..k {
                for l in 0..n {
                    for j in 0..n {
                        let mut lhs = ZERO;
                        let mut rhs = ZERO;
                        match self.side {
                            Side::Right => {
                                for s in 0..k {
                                    lhs += a_t[(s, j)] * self.images[s][(u, l)];
                                }
                                for m in 0..n {
                                    rhs += a_t[(u, m)] * comult[m][(l, j)];
                                }
                            }
                            Side::Left => {
                                // index order (A, A, X) = (l, j, u)
                                for s in 0..k {
                                    lhs += a_t[(s, l)] * self.images[s][(u, j)];
                                }
                                for m in 0..n {
                                    rhs += a_t[(u, m)] * comult[m][(l, j)];
                                }
                            }
                        }
                        coaction = coaction.max((lhs - rhs).norm());
                    }
                }
            }
        }

        let mut span = CMat::zeros(k * n, k * n);
        let lmul: Vec<CMat> = (0..n).map(|i| g.left_mult(&crate::linalg::basis_vec(n, i))).collect();
        for (tt, a_t) in self.images.iter().enumerate() {
            for (i, l) in lmul.iter().enumerate() {
                span.set_column(tt * n + i, &vectorize(&(a_t * l.transpose())));
            }
        }
        let podles_rank = rank(&span, RANK_TOL);

        let mut fix = CMat::zeros(k * n, k);
        for (tt, a_t) in self.images.iter().enumerate() {
            let e_t = crate::linalg::basis_vec(k, tt);
            let d = a_t - e_t * g.unit().transpose();
            fix.set_column(tt, &vectorize(&d));
        }
        let sv = crate::linalg::svd(&fix).s;
        let floor = RANK_TOL * sv.first().copied().unwrap_or(0.0).max(1.0);
        let fixed_point_dim = k - sv.iter().filter(|&&x| x > floor).count();
        CoactionReport {
            well_definedness: self.well_definedness,
            coaction,
            counit,
            podles_rank,
            podles_target: k * n,
            fixed_point_dim,
        }
    }
}

/// `(β ⊗ id)α = (id ⊗ α)β`, compared on every basis element.
pub fn cocommutation_residual(alpha: &InducedCoaction, beta: &InducedCoaction) -> f64 {
    assert_eq!(alpha.side, Side::Right);
    assert_eq!(beta.side, Side::Left);
    let k = alpha.images.len();
    let n = alpha.images[0].ncols();
    let mut worst = 0.0f64;
    for tt in 0..k {
        let m = &alpha.images[tt];
        let nn = &beta.images[tt];
        for a in 0..n {
            for u in 0..k {
                for b in 0..n {
                    let mut t1 = ZERO;
                    let mut t2 = ZERO;
                    for s in 0..k {
                        t1 += m[(s, b)] * beta.images[s][(u, a)];
                        t2 += nn[(s, a)] * alpha.images[s][(u, b)];
                    }
                    worst = worst.max((t1 - t2).norm());
                }
            }
        }
    }
    worst
}

/// `(τ ⊗ id)Δ(a)` as an operator on `H_Λ ⊗ H_0`.
pub fn pushed_operator(g: &FiniteQuantumGroup, t: &TruncatedSystem, a: &CVec) -> CMat {
    let d = g.comultiply(a);
    let rr = t.hilbert_dim();
    let d0 = g.rep_dim();
    let mut out = CMat::zeros(rr * d0, rr * d0);
    let n = g.dim();
    for l in 0..n {
        let mut left = CMat::zeros(rr, rr);
        let mut any = false;
        for j in 0..n {
            if d[(j, l)] != ZERO {
                left += &t.tau_basis()[j] * d[(j, l)];
                any = true;
            }
        }
        if any {
            out += kron(&left, &g.rep_basis()[l]);
        }
    }
    out
}

fn block2(m: [[CMat; 2]; 2]) -> CMat {
    let (p, q) = m[0][0].shape();
    let mut out = CMat::zeros(2 * p, 2 * q);
    for i in 0..2 {
        for j in 0..2 {
            out.view_mut((i * p, j * q), (p, q)).copy_from(&m[i][j]);
        }
    }
    out
}

/// `|‖(τ ⊗ id)Δ(a)‖ - ‖τ(a)‖|`.
pub fn isometry_residual(g: &FiniteQuantumGroup, t: &TruncatedSystem, a: &CVec) -> f64 {
    (op_norm(&pushed_operator(g, t, a)) - op_norm(&t.compress_matrix(a))).abs()
}

/// The same defect for a `2 x 2` matrix of elements.
pub fn isometry_residual_2x2(g: &FiniteQuantumGroup, t: &TruncatedSystem, a: &[[CVec; 2]; 2]) -> f64 {
    let pushed = block2([
        [pushed_operator(g, t, &a[0][0]), pushed_operator(g, t, &a[0][1])],
        [pushed_operator(g, t, &a[1][0]), pushed_operator(g, t, &a[1][1])],
    ]);
    let plain = block2([
        [t.compress_matrix(&a[0][0]), t.compress_matrix(&a[0][1])],
        [t.compress_matrix(&a[1][0]), t.compress_matrix(&a[1][1])],
    ]);
    (op_norm(&pushed) - op_norm(&plain)).abs()
}

/// A state on the truncated system, stored through a density operator on `H_Λ`.
#[derive(Clone, Debug)]
pub struct SystemState {
    density: CMat,
    values: CVec,
}

impl SystemState {
    /// Certifies `D ≥ 0`, `tr D = 1` and evaluates on the system basis.
    pub fn from_density(t: &TruncatedSystem, density: CMat, tol: f64) -> Result<Self> {
        let rr = t.hilbert_dim();
        if density.shape() != (rr, rr) {
            return Err(Error::Shape(format!("density must be {rr}x{rr}")));
        }
        let tr = density.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::State(format!("trace {tr} is not 1")));
        }
        if max_abs(&(&density - density.adjoint())) > tol {
            return Err(Error::State("density is not hermitian".into()));
        }
        let (vals, vecs) = eigh(&density);
        if vals[0] < -tol {
            let v: Vec<String> = vecs.column(0).iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
            return Err(Error::State(format!("negative weight {:.3e} at [{}]", vals[0], v.join(", "))));
        }
        let values = CVec::from_iterator(t.dim(), t.system_basis().iter().map(|b| (&density * b).trace()));
        Ok(Self { density, values })
    }

    /// Vector state at `ξ ∈ H_Λ`, normalised.
    pub fn vector(t: &TruncatedSystem, xi: &CVec) -> Result<Self> {
        let nrm = xi.norm();
        if !(nrm > 1e-14) || xi.len() != t.hilbert_dim() {
            return Err(Error::State("vector state needs a nonzero vector in H_Λ".into()));
        }
        let u = xi / r(nrm);
        Self::from_density(t, &u * u.adjoint(), 1e-9)
    }

    pub fn density(&self) -> &CMat {
        &self.density
    }

    /// Values on the system basis; `φ(x) = Σ_s φ_s x_s`.
    pub fn values(&self) -> &CVec {
        &self.values
    }

    pub fn eval(&self, x: &CVec) -> C64 {
        self.values.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    }

    /// `τ*φ = φ ∘ τ`.
    pub fn pullback(&self, t: &TruncatedSystem) -> Functional {
        Functional(CVec::from_iterator(
            t.algebra_dim(),
            t.tau_basis().iter().map(|m| (&self.density * m).trace()),
        ))
    }

    pub fn mix(t: &TruncatedSystem, parts: &[(&SystemState, f64)]) -> Result<Self> {
        let rr = t.hilbert_dim();
        let d = parts.iter().fold(CMat::zeros(rr, rr), |acc, (s, w)| acc + &s.density * r(*w));
        Self::from_density(t, d, 1e-9)
    }
}

/// Vector state at `P_Λ Λ(p_ε)` normalised, where `p_ε` is the counit support projection.
pub fn canonical_state(g: &FiniteQuantumGroup, pw: &PeterWeyl, t: &TruncatedSystem) -> Result<SystemState> {
    let p = g.counit_support_projection()?;
    let xi = t.hilbert_basis().adjoint() * pw.gns().vector(&p);
    if xi.norm() < 1e-12 {
        return Err(Error::Domain("counit projection is orthogonal to H_Λ".into()));
    }
    SystemState::vector(t, &xi)
}

/// `σ^φ(x) = (φ ⊗ id)α^τ(x)` as an `n x k` matrix.
pub fn symbol_map(alpha: &InducedCoaction, phi: &SystemState) -> CMat {
    assert_eq!(alpha.side, Side::Right, "symbol map is built from the right coaction");
    let k = alpha.images.len();
    let n = alpha.images[0].ncols();
    let mut m = CMat::zeros(n, k);
    for (s, a) in alpha.images.iter().enumerate() {
        m.set_column(s, &(a.transpose() * phi.values()));
    }
    m
}

/// `‖σ^φτ(a) − (τ*φ ⊗ id)Δ(a)‖_∞` on coefficients.
pub fn down_up_residual(
    g: &FiniteQuantumGroup,
    t: &TruncatedSystem,
    sigma: &CMat,
    phi: &SystemState,
    a: &CVec,
) -> f64 {
    let lhs = sigma * t.compress(a);
    let rhs = g.slice_left(&phi.pullback(t), &g.comultiply(a));
    max_abs_vec(&(lhs - rhs))
}

/// `‖τσ^φ(x) − (τ*φ ⊗ id)(id ⊗ τ)Δ(lift x)‖_∞` on coefficients.
pub fn up_down_residual(
    g: &FiniteQuantumGroup,
    t: &TruncatedSystem,
    sigma: &CMat,
    phi: &SystemState,
    x: &CVec,
) -> f64 {
    let lhs = t.compress(&(sigma * x));
    let d = g.comultiply(&t.lift(x));
    let inner = g.slice_left(&phi.pullback(t), &d);
    let rhs = t.compress(&inner);
    max_abs_vec(&(lhs - rhs))
}

/// `E_α = (id ⊗ h)α` as a `k x k` matrix.
pub fn conditional_expectation(g: &FiniteQuantumGroup, alpha: &InducedCoaction) -> CMat {
    alpha.slice_algebra_matrix(&g.haar())
}

/// The invariant state `h_X` read off from `E_α = 1 · h_X`. Fails unless `E_α` has rank one.
pub fn invariant_state(g: &FiniteQuantumGroup, t: &TruncatedSystem, alpha: &InducedCoaction) -> Result<CVec> {
    let e = conditional_expectation(g, alpha);
    let u = t.unit();
    let h = (u.adjoint() * &e).transpose() / r(u.norm_squared());
    let residual = max_abs(&(&e - u * h.transpose()));
    if residual > 1e-8 {
        return Err(Error::cert("conditional expectation onto scalars", residual, 1e-8));
    }
    Ok(h)
}

/// Solves `(h_X ⊗ id)α(x) = h_X(x)1` directly; the solution space must be one-dimensional.
pub fn invariant_state_by_solve(g: &FiniteQuantumGroup, t: &TruncatedSystem, alpha: &InducedCoaction) -> Result<CVec> {
    let k = alpha.images.len();
    let n = g.dim();
    let mut sys = CMat::zeros(k * n, k);
    for (tt, a) in alpha.images.iter().enumerate() {
        for j in 0..n {
            for s in 0..k {
                sys[(tt * n + j, s)] += a[(s, j)];
            }
            sys[(tt * n + j, tt)] -= g.unit()[j];
        }
    }
    let ker = null_space(&sys, RANK_TOL);
    if ker.ncols() != 1 {
        return Err(Error::Domain(format!("invariant functionals form a {}-dimensional space", ker.ncols())));
    }
    let h = ker.column(0).into_owned();
    let norm = h.dot(t.unit());
    Ok(h / norm)
}

/// `E_γ(x) = d_γ (id ⊗ h)((1 ⊗ χ_γ*) α(x))` as a `k x k` matrix.
pub fn isotypical_projection(g: &FiniteQuantumGroup, alpha: &InducedCoaction, u: &Corepresentation) -> CMat {
    let n = g.dim();
    let chi_star = g.star(&u.character());
    let h = g.haar();
    let v = CVec::from_iterator(
        n,
        (0..n).map(|j| h.eval(&g.product(&chi_star, &crate::linalg::basis_vec(n, j)))),
    );
    let k = alpha.images.len();
    let mut m = CMat::zeros(k, k);
    for (s, a) in alpha.images.iter().enumerate() {
        m.set_column(s, &(a * &v * r(u.dim() as f64)));
    }
    m
}

/// States on the truncated system: vector states at the compressed images of the
/// GNS basis, then random vector states interleaved with random mixtures.
/// The first `m` entries do not depend on `count`.
pub fn liftable_states(
    g: &FiniteQuantumGroup,
    pw: &PeterWeyl,
    t: &TruncatedSystem,
    count: usize,
    seed: u64,
) -> Vec<SystemState> {
    let rr = t.hilbert_dim();
    let n = g.dim();
    let mut rng = sampling::rng(seed);
    let mut out: Vec<SystemState> = Vec::with_capacity(count);
    let q = t.hilbert_basis();
    let mut localized = (0..n).filter_map(|i| {
        let v = q.adjoint() * pw.gns().vector(&crate::linalg::basis_vec(n, i));
        SystemState::vector(t, &v).ok()
    });
    while out.len() < count {
        let i = out.len();
        if let Some(s) = localized.next() {
            out.push(s);
            continue;
        }
        if i % 4 == 3 {
            let w = sampling::simplex_weights(&mut rng, 3);
            let picks: Vec<usize> = (0..3).map(|_| rng.gen_range(0..i)).collect();
            let parts: Vec<(&SystemState, f64)> = picks.iter().zip(&w).map(|(&j, &wk)| (&out[j], wk)).collect();
            let s = SystemState::mix(t, &parts).expect("mixture of states");
            out.push(s);
        } else {
            let xi = sampling::unit_vector(&mut rng, rr);
            out.push(SystemState::vector(t, &xi).expect("unit vector"));
        }
    }
    out
}

/// Random states of the truncated system from random density operators.
pub fn random_system_states(t: &TruncatedSystem, count: usize, seed: u64) -> Vec<SystemState> {
    let mut rng = sampling::rng(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                SystemState::vector(t, &sampling::unit_vector(&mut rng, t.hilbert_dim())).expect("unit vector")
            } else {
                SystemState::from_density(t, sampling::density(&mut rng, t.hilbert_dim()), 1e-9).expect("density")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn setup(n: usize, lambda: &[usize]) -> (FiniteQuantumGroup, PeterWeyl, TruncatedSystem) {
        let g = FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(n), Some(FiniteGroup::arc_metric(n))).unwrap();
        let pw = PeterWeyl::new(&g, 1e-9).unwrap();
        let t = TruncatedSystem::new(&g, &pw, lambda).unwrap();
        (g, pw, t)
    }

    #[test]
    fn lift_inverts_compression_on_sparse_frequency_sets() {
        let (_, _, t) = setup(8, &[1, 2, 3, 5]);
        let k = t.dim();
        assert_eq!(k, 8);
        assert!(max_abs(&(t.tau_matrix() * t.lift_matrix() - CMat::identity(k, k))) < 1e-12);
    }

    #[test]
    fn trivial_truncation_is_haar() {
        let (g, pw, t) = setup(5, &[0]);
        assert_eq!(t.dim(), 1);
        let a = g.real_element(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let m = t.compress_matrix(&a);
        assert!((m[(0, 0)] - r(3.0)).norm() < 1e-12);
        let phi = canonical_state(&g, &pw, &t).unwrap();
        assert!((phi.pullback(&t).0 - g.haar().0).norm() < 1e-12);
    }

    #[test]
    fn toeplitz_truncation_dimensions() {
        // frequencies {0, 1} in Z_4: 2x2 Toeplitz matrices, three free parameters
        let (_, _, t) = setup(4, &[0, 1]);
        assert_eq!(t.hilbert_dim(), 2);
        assert_eq!(t.dim(), 3);
        assert_eq!(t.kernel().ncols(), 1);
    }

    #[test]
    fn coactions_are_certified() {
        let (g, _, t) = setup(6, &[0, 1, 5]);
        let alpha = induced_coaction(&g, &t, Side::Right, 1e-9).unwrap();
        let beta = induced_coaction(&g, &t, Side::Left, 1e-9).unwrap();
        for c in [&alpha, &beta] {
            let rep = c.check(&g);
            assert!(rep.max_residual() < 1e-10, "{rep:?}");
            assert_eq!(rep.fixed_point_dim, 1);
            assert_eq!(rep.podles_rank, rep.podles_target);
        }
        assert!(cocommutation_residual(&alpha, &beta) < 1e-10);
    }

    #[test]
    fn invariant_state_is_normalised_trace() {
        let (g, _, t) = setup(4, &[0, 1]);
        let alpha = induced_coaction(&g, &t, Side::Right, 1e-9).unwrap();
        let h1 = invariant_state(&g, &t, &alpha).unwrap();
        let h2 = invariant_state_by_solve(&g, &t, &alpha).unwrap();
        assert!((&h1 - &h2).norm() < 1e-10);
        let x = CVec::from_iterator(3, (0..3).map(|i| r(i as f64 + 1.0)));
        let tr = t.to_matrix(&x).trace() / r(2.0);
        assert!((h1.dot(&x) - tr).norm() < 1e-10);
    }

    #[test]
    fn symbol_identities() {
        let (g, pw, t) = setup(6, &[0, 1, 5, 2]);
        let alpha = induced_coaction(&g, &t, Side::Right, 1e-9).unwrap();
        let phi = canonical_state(&g, &pw, &t).unwrap();
        let sigma = symbol_map(&alpha, &phi);
        for a in sampling::elements(6, 5, 1) {
            assert!(down_up_residual(&g, &t, &sigma, &phi, &a) < 1e-12);
            let x = t.compress(&a);
            assert!(up_down_residual(&g, &t, &sigma, &phi, &x) < 1e-12);
        }
    }

    #[test]
    fn isotypical_projections_sum_to_identity() {
        let (g, _, t) = setup(5, &[0, 1, 4]);
        let alpha = induced_coaction(&g, &t, Side::Right, 1e-9).unwrap();
        let k = t.dim();
        let mut total = CMat::zeros(k, k);
        for u in g.irreps() {
            let e = isotypical_projection(&g, &alpha, u);
            assert!(max_abs(&(&e * &e - &e)) < 1e-10);
            total += e;
        }
        assert!(max_abs(&(total - CMat::identity(k, k))) < 1e-10);
        let e0 = isotypical_projection(&g, &alpha, &g.irreps()[0]);
        assert!(max_abs(&(e0 - conditional_expectation(&g, &alpha))) < 1e-12);
    }

    #[test]
    fn isometry_on_z4() {
        let (g, _, t) = setup(4, &[0, 1]);
        for a in sampling::elements(4, 5, 3) {
            assert!(isometry_residual(&g, &t, &a) < 1e-10);
        }
    }

    #[test]
    fn liftable_states_prefix_stable() {
        let (g, pw, t) = setup(6, &[0, 1, 5]);
        let a = liftable_states(&g, &pw, &t, 20, 9);
        let b = liftable_states(&g, &pw, &t, 40, 9);
        for i in 0..20 {
            assert!(max_abs(&(a[i].density() - b[i].density())) == 0.0);
        }
    }
}
