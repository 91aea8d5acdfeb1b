//! Corepresentations, the GNS space of the Haar state, Peter-Weyl projections and
//! the multiplicative unitaries.

use crate::error::{Error, Result};
use crate::hopf::FiniteQuantumGroup;
use crate::linalg::{kron, max_abs, null_space, orthonormalize, CMat, CVec, C64, ZERO};

/// A `d x d` matrix over the algebra, stored row-major.
#[derive(Clone, Debug)]
pub struct Corepresentation {
    d: usize,
    entries: Vec<CVec>,
}

impl Corepresentation {
    pub fn new(d: usize, entries: Vec<CVec>) -> Result<Self> {
        if d == 0 || entries.len() != d * d {
            return Err(Error::Shape(format!("corepresentation of dimension {d} needs {} entries", d * d)));
        }
        Ok(Self { d, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &CVec {
        &self.entries[i * self.d + j]
    }

    pub fn entries(&self) -> &[CVec] {
        &self.entries
    }

    /// Character `Σ_i u_ii`.
    pub fn character(&self) -> CVec {
        let n = self.entries[0].len();
        (0..self.d).fold(CVec::zeros(n), |acc, i| acc + self.entry(i, i))
    }
}

/// Residuals from [`validate_corep`].
#[derive(Clone, Debug)]
pub struct CorepReport {
    pub unitarity: f64,
    pub comultiplicativity: f64,
    pub intertwiner_dim: usize,
}

/// Block matrix `[ρ(u_ij)]`.
fn rep_block(g: &FiniteQuantumGroup, u: &Corepresentation) -> CMat {
    let d = u.dim();
    let d0 = g.rep_dim();
    let mut big = CMat::zeros(d * d0, d * d0);
    for i in 0..d {
        for j in 0..d {
            big.view_mut((i * d0, j * d0), (d0, d0)).copy_from(&g.rep(u.entry(i, j)));
        }
    }
    big
}

/// Checks unitarity in `M_d(A)`, `Δ(u_ij) = Σ_k u_ik ⊗ u_kj`, and irreducibility
/// through the dimension of the self-intertwiner space.
pub fn validate_corep(g: &FiniteQuantumGroup, u: &Corepresentation, tol: f64) -> Result<CorepReport> {
    let d = u.dim();
    let n = g.dim();
    if u.entries().iter().any(|e| e.len() != n) {
        return Err(Error::Shape("corepresentation entries have the wrong length".into()));
    }
    let big = rep_block(g, u);
    let id = CMat::identity(big.nrows(), big.ncols());
    let unitarity = max_abs(&(big.adjoint() * &big - &id)).max(max_abs(&(&big * big.adjoint() - &id)));

    let mut comult = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let lhs = g.comultiply(u.entry(i, j));
            let mut rhs = CMat::zeros(n, n);
            for k in 0..d {
                rhs += u.entry(i, k) * u.entry(k, j).transpose();
            }
            comult = comult.max(max_abs(&(lhs - rhs)));
        }
    }
    let intertwiner_dim = intertwiner_dim(u, u);
    let report = CorepReport { unitarity, comultiplicativity: comult, intertwiner_dim };
    if unitarity > tol {
        return Err(Error::Corep(format!("not unitary, residual {unitarity:.3e}")));
    }
    if comult > tol {
        return Err(Error::Corep(format!("not comultiplicative, residual {comult:.3e}")));
    }
    if intertwiner_dim != 1 {
        return Err(Error::Corep(format!("not irreducible: self-intertwiners of dimension {intertwiner_dim}")));
    }
    Ok(report)
}

/// Dimension of `Mor(u, v)`: solutions of `Σ_k T_ik u_kj = Σ_k v_ik T_kj`.
pub fn intertwiner_dim(u: &Corepresentation, v: &Corepresentation) -> usize {
    let (du, dv) = (u.dim(), v.dim());
    let n = u.entries()[0].len();
    let unknowns = dv * du;
    let mut sys = CMat::zeros(dv * du * n, unknowns);
    for i in 0..dv {
        for j in 0..du {
            for m in 0..n {
                let row = (i * du + j) * n + m;
                for k in 0..du {
                    sys[(row, i * du + k)] += u.entry(k, j)[m];
                }
                for k in 0..dv {
                    sys[(row, k * du + j)] -= v.entry(i, k)[m];
                }
            }
        }
    }
    null_space(&sys, 1e-10).ncols()
}

/// `(ω_{ξ_i, ξ_j} ⊗ id)(U)` for the standard basis, listed with `i` major.
pub fn matrix_coefficients(u: &Corepresentation) -> Vec<CVec> {
    let d = u.dim();
    (0..d * d).map(|ij| u.entry(ij % d, ij / d).clone()).collect()
}

/// GNS space of the Haar state with `⟨Λ(a), Λ(b)⟩ = h(b* a)`, in orthonormal coordinates.
#[derive(Clone, Debug)]
pub struct Gns {
    gram: CMat,
    /// `Λ(a) = R a` in orthonormal coordinates.
    r: CMat,
    r_inv: CMat,
}

impl Gns {
    pub fn build(g: &FiniteQuantumGroup) -> Result<Self> {
        let gram = g.haar_gram();
        let herm = crate::linalg::hermitian_part(&gram);
        let chol = nalgebra::Cholesky::new(herm)
            .ok_or_else(|| Error::Haar("Haar state is not faithful; GNS Gram matrix not positive definite".into()))?;
        let r = chol.l().adjoint();
        let r_inv = r
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Haar("singular GNS Gram matrix".into()))?;
        Ok(Self { gram, r, r_inv })
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// `Λ(a)`.
    pub fn vector(&self, a: &CVec) -> CVec {
        &self.r * a
    }

    /// The element `a` with `Λ(a) = v`.
    pub fn element(&self, v: &CVec) -> CVec {
        &self.r_inv * v
    }

    pub fn inner(&self, a: &CVec, b: &CVec) -> C64 {
        b.dotc(&(&self.gram * a))
    }

    /// `π(a)` acting on the GNS space.
    pub fn op(&self, g: &FiniteQuantumGroup, a: &CVec) -> CMat {
        &self.r * g.left_mult(a) * &self.r_inv
    }

    /// Transports an operator given in the coefficient basis to orthonormal coordinates.
    pub fn conjugate_in(&self, m: &CMat) -> CMat {
        &self.r * m * &self.r_inv
    }
}

/// The validated Peter-Weyl decomposition of the GNS space.
#[derive(Clone, Debug)]
pub struct PeterWeyl {
    gns: Gns,
    blocks: Vec<CMat>,
    dims: Vec<usize>,
    orthogonality: f64,
}

/// Orthogonal projection onto `H_Λ` with an orthonormal basis of its range.
#[derive(Clone, Debug)]
pub struct PwProjection {
    pub lambda: Vec<usize>,
    /// Columns form an orthonormal basis of `H_Λ`.
    pub basis: CMat,
    pub projection: CMat,
}

impl PeterWeyl {
    /// Validates every supplied irreducible, Schur non-equivalence and completeness.
    pub fn new(g: &FiniteQuantumGroup, tol: f64) -> Result<Self> {
        let gns = Gns::build(g)?;
        let irreps = g.irreps();
        let n = g.dim();
        for u in irreps {
            validate_corep(g, u, tol)?;
        }
        for a in 0..irreps.len() {
            for b in a + 1..irreps.len() {
                if irreps[a].dim() == irreps[b].dim() && intertwiner_dim(&irreps[a], &irreps[b]) != 0 {
                    return Err(Error::Equivalent(a, b));
                }
            }
        }
        let total: usize = irreps.iter().map(|u| u.dim() * u.dim()).sum();
        if total != n {
            return Err(Error::Completeness { got: total, want: n });
        }

        let mut blocks = Vec::with_capacity(irreps.len());
        let mut orthogonality = 0.0f64;
        for u in irreps {
            let d = u.dim();
            let vecs: Vec<CVec> = u.entries().iter().map(|e| gns.vector(e)).collect();
            for (p, x) in vecs.iter().enumerate() {
                for (q, y) in vecs.iter().enumerate() {
                    let want = if p == q { 1.0 / d as f64 } else { 0.0 };
                    orthogonality = orthogonality.max((y.dotc(x) - C64::new(want, 0.0)).norm());
                }
            }
            let q = orthonormalize(&vecs, None, 1e-10);
            if q.ncols() != d * d {
                return Err(Error::Corep(format!(
                    "matrix coefficients of a {d}-dimensional irreducible span only {} dimensions",
                    q.ncols()
                )));
            }
            blocks.push(q);
        }
        let all = blocks.iter().fold(CMat::zeros(n, 0), |acc, b| {
            let mut m = CMat::zeros(n, acc.ncols() + b.ncols());
            m.view_mut((0, 0), (n, acc.ncols())).copy_from(&acc);
            m.view_mut((0, acc.ncols()), (n, b.ncols())).copy_from(b);
            m
        });
        let cross = max_abs(&(all.adjoint() * &all - CMat::identity(n, n)));
        if cross > 1e-8 {
            return Err(Error::Corep(format!("isotypic blocks are not orthogonal, residual {cross:.3e}")));
        }
        let dims = irreps.iter().map(|u| u.dim()).collect();
        Ok(Self { gns, blocks, dims, orthogonality })
    }

    pub fn gns(&self) -> &Gns {
        &self.gns
    }

    pub fn irrep_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block(&self, k: usize) -> &CMat {
        &self.blocks[k]
    }

    /// Largest deviation from `⟨Λ(u_ij), Λ(u_kl)⟩ = δ_ik δ_jl / d`; zero in the Kac case.
    pub fn orthogonality_residual(&self) -> f64 {
        self.orthogonality
    }

    pub fn projector(&self, lambda: &[usize]) -> Result<PwProjection> {
        if lambda.is_empty() {
            return Err(Error::Selection("empty set of irreducibles".into()));
        }
        let mut seen = vec![false; self.blocks.len()];
        for &k in lambda {
            if k >= self.blocks.len() {
                return Err(Error::Selection(format!(
                    "irrep index {k} out of range (have {})",
                    self.blocks.len()
                )));
            }
            if seen[k] {
                return Err(Error::Selection(format!("irrep index {k} repeated")));
            }
            seen[k] = true;
        }
        let n = self.gns.dim();
        let r: usize = lambda.iter().map(|&k| self.blocks[k].ncols()).sum();
        let mut basis = CMat::zeros(n, r);
        let mut col = 0;
        for &k in lambda {
            let b = &self.blocks[k];
            basis.view_mut((0, col), (n, b.ncols())).copy_from(b);
            col += b.ncols();
        }
        let projection = &basis * basis.adjoint();
        Ok(PwProjection { lambda: lambda.to_vec(), basis, projection })
    }
}

/// `W(Λ(a) ⊗ ξ) = (π ⊗ ρ)(Δa)(Λ(1) ⊗ ξ)` on `H ⊗ H_0`.
pub fn multiplicative_unitary_w(g: &FiniteQuantumGroup, gns: &Gns) -> CMat {
    let n = g.dim();
    let d0 = g.rep_dim();
    let mut raw = CMat::zeros(n * d0, n * d0);
    for (i, c) in g.comult_basis().iter().enumerate() {
        for j in 0..n {
            for k in 0..n {
                let s = c[(j, k)];
                if s == ZERO {
                    continue;
                }
                let rho = &g.rep_basis()[k];
                for p in 0..d0 {
                    for q in 0..d0 {
                        raw[(j * d0 + p, i * d0 + q)] += s * rho[(p, q)];
                    }
                }
            }
        }
    }
    let id0 = CMat::identity(d0, d0);
    kron(&gns.r, &id0) * raw * kron(&gns.r_inv, &id0)
}

/// `V(ξ ⊗ Λ(a)) = (ρ ⊗ π)(Δa)(ξ ⊗ Λ(1))` on `H_0 ⊗ H`.
pub fn multiplicative_unitary_v(g: &FiniteQuantumGroup, gns: &Gns) -> CMat {
    let n = g.dim();
    let d0 = g.rep_dim();
    let mut raw = CMat::zeros(d0 * n, d0 * n);
    for (i, c) in g.comult_basis().iter().enumerate() {
        for j in 0..n {
            for k in 0..n {
                let s = c[(j, k)];
                if s == ZERO {
                    continue;
                }
                let rho = &g.rep_basis()[j];
                for p in 0..d0 {
                    for q in 0..d0 {
                        raw[(p * n + k, q * n + i)] += s * rho[(p, q)];
                    }
                }
            }
        }
    }
    let id0 = CMat::identity(d0, d0);
    kron(&id0, &gns.r) * raw * kron(&id0, &gns.r_inv)
}

#[derive(Clone, Debug)]
pub struct UnitaryReport {
    pub unitarity_w: f64,
    pub unitarity_v: f64,
    pub implements_w: f64,
    pub implements_v: f64,
    pub commutes_w: f64,
    pub commutes_v: f64,
}

impl UnitaryReport {
    pub fn max(&self) -> f64 {
        [
            self.unitarity_w,
            self.unitarity_v,
            self.implements_w,
            self.implements_v,
            self.commutes_w,
            self.commutes_v,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Unitarity, implementation of `Δ`, and commutation with `P_Λ ⊗ 1` resp. `1 ⊗ P_Λ`.
pub fn check_multiplicative_unitaries(g: &FiniteQuantumGroup, gns: &Gns, projection: &CMat) -> UnitaryReport {
    let n = g.dim();
    let d0 = g.rep_dim();
    let w = multiplicative_unitary_w(g, gns);
    let v = multiplicative_unitary_v(g, gns);
    let id = CMat::identity(n * d0, n * d0);
    let id0 = CMat::identity(d0, d0);
    let unitarity_w = max_abs(&(w.adjoint() * &w - &id)).max(max_abs(&(&w * w.adjoint() - &id)));
    let unitarity_v = max_abs(&(v.adjoint() * &v - &id)).max(max_abs(&(&v * v.adjoint() - &id)));
    let mut implements_w = 0.0f64;
    let mut implements_v = 0.0f64;
    let pis: Vec<CMat> = (0..n).map(|j| gns.op(g, &crate::linalg::basis_vec(n, j))).collect();
    for i in 0..n {
        let pi = &pis[i];
        let c = &g.comult_basis()[i];
        let mut lhs_w = CMat::zeros(n * d0, n * d0);
        let mut lhs_v = CMat::zeros(n * d0, n * d0);
        for j in 0..n {
            for k in 0..n {
                if c[(j, k)] != ZERO {
                    lhs_w += kron(&pis[j], &g.rep_basis()[k]) * c[(j, k)];
                    lhs_v += kron(&g.rep_basis()[j], &pis[k]) * c[(j, k)];
                }
            }
        }
        implements_w = implements_w.max(max_abs(&(&w * kron(pi, &id0) * w.adjoint() - lhs_w)));
        implements_v = implements_v.max(max_abs(&(&v * kron(&id0, pi) * v.adjoint() - lhs_v)));
    }
    let pw = kron(projection, &id0);
    let pv = kron(&id0, projection);
    UnitaryReport {
        unitarity_w,
        unitarity_v,
        implements_w,
        implements_v,
        commutes_w: max_abs(&(&w * &pw - &pw * &w)),
        commutes_v: max_abs(&(&v * &pv - &pv * &v)),
    }
}

/// Trivial one-dimensional corepresentation `[1]`.
pub fn trivial_corep(g: &FiniteQuantumGroup) -> Corepresentation {
    Corepresentation { d: 1, entries: vec![g.unit().clone()] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::linalg::{c, r};

    fn z(n: usize) -> FiniteQuantumGroup {
        FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(n), None).unwrap()
    }

    #[test]
    fn trivial_corep_coefficients() {
        let g = z(4);
        let u = trivial_corep(&g);
        validate_corep(&g, &u, 1e-10).unwrap();
        let coeffs = matrix_coefficients(&u);
        assert_eq!(coeffs.len(), 1);
        assert!((&coeffs[0] - g.unit()).norm() < 1e-14);
    }

    #[test]
    fn character_of_z4() {
        let g = z(4);
        let chi = &g.irreps()[1];
        let want = CVec::from_vec(vec![r(1.0), c(0.0, 1.0), r(-1.0), c(0.0, -1.0)]);
        assert!((&matrix_coefficients(chi)[0] - want).norm() < 1e-12);
    }

    #[test]
    fn reducible_corep_rejected() {
        let g = z(3);
        let a = g.irreps()[0].entry(0, 0).clone();
        let b = g.irreps()[1].entry(0, 0).clone();
        let zero = CVec::zeros(3);
        let u = Corepresentation::new(2, vec![a, zero.clone(), zero, b]).unwrap();
        match validate_corep(&g, &u, 1e-10) {
            Err(Error::Corep(msg)) => assert!(msg.contains("irreducible")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn incomplete_irreps_rejected() {
        let mut g = z(4);
        let irreps = g.irreps()[..3].to_vec();
        g.set_irreps(irreps);
        assert!(matches!(PeterWeyl::new(&g, 1e-9), Err(Error::Completeness { got: 3, want: 4 })));
    }

    #[test]
    fn duplicate_irreps_rejected() {
        let mut g = z(4);
        let mut irreps = g.irreps().to_vec();
        irreps[3] = irreps[1].clone();
        g.set_irreps(irreps);
        assert!(matches!(PeterWeyl::new(&g, 1e-9), Err(Error::Equivalent(1, 3))));
    }

    #[test]
    fn projector_selection_errors() {
        let pw = PeterWeyl::new(&z(4), 1e-9).unwrap();
        assert!(matches!(pw.projector(&[]), Err(Error::Selection(_))));
        assert!(matches!(pw.projector(&[7]), Err(Error::Selection(_))));
        let full = pw.projector(&[0, 1, 2, 3]).unwrap();
        assert!(max_abs(&(full.projection - CMat::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn multiplicative_unitaries_on_s3() {
        let s3 = FiniteGroup::symmetric3();
        for g in [
            FiniteQuantumGroup::function_algebra(&s3, None).unwrap(),
            FiniteQuantumGroup::group_algebra(&s3, None).unwrap(),
        ] {
            let pw = PeterWeyl::new(&g, 1e-9).unwrap();
            assert!(pw.orthogonality_residual() < 1e-12);
            let p = pw.projector(&[0, 2]).unwrap();
            let rep = check_multiplicative_unitaries(&g, pw.gns(), &p.projection);
            assert!(rep.max() < 1e-10, "{rep:?}");
        }
    }
}
