//! Finite-dimensional Hopf *-algebras given by structure tensors, with a faithful
//! *-representation used for C*-norms.

use nalgebra::DMatrix;

use crate::corep::Corepresentation;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{eigh, max_abs, max_abs_vec, null_space, op_norm, r, rank, CMat, CVec, C64, ONE, ZERO};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Where an algebra came from. Group-derived algebras keep the group around.
#[derive(Clone, Debug)]
pub enum Carrier {
    /// Functions on a finite group, basis of point masses `δ_g`.
    Function(FiniteGroup),
    /// Group algebra, basis of translations `λ_g`.
    GroupAlgebra(FiniteGroup),
    Custom,
}

/// Raw structure tensors; see [`FiniteQuantumGroup::from_parts`].
#[derive(Clone, Debug)]
pub struct HopfData {
    /// `mult[i * n + j]` holds the coefficients of `e_i e_j`.
    pub mult: Vec<CVec>,
    pub unit: CVec,
    /// `a* = star · conj(a)`.
    pub star: CMat,
    /// `comult[i]` is the `n x n` coefficient matrix of `Δ(e_i)`.
    pub comult: Vec<CMat>,
    pub counit: CVec,
    pub antipode: CMat,
    /// Matrices `ρ(e_i)` of a faithful *-representation.
    pub rep: Vec<CMat>,
    pub irreps: Vec<Corepresentation>,
}

/// A linear functional `μ(a) = Σ μ_i a_i` on the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional(pub CVec);

impl Functional {
    pub fn eval(&self, a: &CVec) -> C64 {
        self.0.iter().zip(a.iter()).map(|(x, y)| x * y).sum()
    }

    pub fn coeffs(&self) -> &CVec {
        &self.0
    }
}

/// A functional certified positive and unital.
#[derive(Clone, Debug)]
pub struct State {
    functional: Functional,
    /// `gram[(i, j)] = μ(e_i* e_j)`; positive semidefinite for a state.
    gram: CMat,
    min_eig: f64,
}

impl State {
    pub fn certify(g: &FiniteQuantumGroup, f: Functional, tol: f64) -> Result<Self> {
        let n = g.dim();
        let unit_val = f.eval(g.unit());
        if (unit_val - ONE).norm() > tol {
            return Err(Error::State(format!("μ(1) = {unit_val}, expected 1")));
        }
        let gram = CMat::from_fn(n, n, |i, j| f.eval(&g.product(&g.star_basis(i), &crate::linalg::basis_vec(n, j))));
        let herm = max_abs(&(&gram - gram.adjoint()));
        if herm > tol {
            return Err(Error::State(format!("not hermitian, defect {herm:.3e}")));
        }
        let (vals, vecs) = eigh(&gram);
        let min_eig = vals[0];
        if min_eig < -tol {
            let v: Vec<String> = vecs.column(0).iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
            return Err(Error::State(format!(
                "μ(a*a) = {min_eig:.3e} < 0 at a = [{}]",
                v.join(", ")
            )));
        }
        Ok(Self { functional: f, gram, min_eig })
    }

    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    pub fn eval(&self, a: &CVec) -> C64 {
        self.functional.eval(a)
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eig
    }
}

#[derive(Clone, Debug)]
pub struct FiniteQuantumGroup {
    n: usize,
    mult: Vec<CVec>,
    /// Nonzero structure constants `(i, j, k, value)` of `e_i e_j`.
    mult_nz: Vec<(usize, usize, usize, C64)>,
    /// Left multiplication by `e_i`.
    lmul: Vec<CMat>,
    unit: CVec,
    star: CMat,
    comult: Vec<CMat>,
    counit: CVec,
    antipode: CMat,
    rep: Vec<CMat>,
    haar: CVec,
    irreps: Vec<Corepresentation>,
    carrier: Carrier,
    metric: Option<DMatrix<f64>>,
    length: Option<Vec<f64>>,
}

impl FiniteQuantumGroup {
    /// Checks shapes and solves for the Haar state. Axioms are checked separately by
    /// [`FiniteQuantumGroup::check_axioms`].
    pub fn from_parts(data: HopfData) -> Result<Self> {
        Self::assemble(data, Carrier::Custom)
    }

    fn assemble(data: HopfData, carrier: Carrier) -> Result<Self> {
        let n = data.unit.len();
        if n == 0 {
            return Err(Error::Shape("algebra of dimension 0".into()));
        }
        let shape = |what: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::Shape(format!("{what} has the wrong shape for dimension {n}")))
            }
        };
        shape("mult", data.mult.len() == n * n && data.mult.iter().all(|v| v.len() == n))?;
        shape("star", data.star.shape() == (n, n))?;
        shape("comult", data.comult.len() == n && data.comult.iter().all(|m| m.shape() == (n, n)))?;
        shape("counit", data.counit.len() == n)?;
        shape("antipode", data.antipode.shape() == (n, n))?;
        let d0 = data.rep.first().map(|m| m.nrows()).unwrap_or(0);
        shape("rep", data.rep.len() == n && d0 > 0 && data.rep.iter().all(|m| m.shape() == (d0, d0)))?;
        for (k, u) in data.irreps.iter().enumerate() {
            if u.entries().iter().any(|e| e.len() != n) {
                return Err(Error::Shape(format!("irrep {k} has entries of the wrong length")));
            }
        }

        let mut mult_nz = Vec::new();
        let mut lmul = vec![CMat::zeros(n, n); n];
        for i in 0..n {
            for j in 0..n {
                for (k, v) in data.mult[i * n + j].iter().enumerate() {
                    if *v != ZERO {
                        mult_nz.push((i, j, k, *v));
                        lmul[i][(k, j)] = *v;
                    }
                }
            }
        }

        let mut g = Self {
            n,
            mult: data.mult,
            mult_nz,
            lmul,
            unit: data.unit,
            star: data.star,
            comult: data.comult,
            counit: data.counit,
            antipode: data.antipode,
            rep: data.rep,
            haar: CVec::zeros(n),
            irreps: data.irreps,
            carrier,
            metric: None,
            length: None,
        };
        g.haar = g.solve_haar()?;
        Ok(g)
    }

    /// Functions on `G`: pointwise product, `Δδ_g = Σ_{ab=g} δ_a ⊗ δ_b`, counit at the
    /// identity, antipode `g ↦ g⁻¹`, diagonal representation on `ℓ²(G)`.
    pub fn function_algebra(group: &FiniteGroup, metric: Option<DMatrix<f64>>) -> Result<Self> {
        if let Some(d) = &metric {
            group.validate_metric(d)?;
        }
        let n = group.order();
        let mut mult = vec![CVec::zeros(n); n * n];
        for g in 0..n {
            mult[g * n + g][g] = ONE;
        }
        let mut comult = vec![CMat::zeros(n, n); n];
        for a in 0..n {
            for b in 0..n {
                comult[group.mul(a, b)][(a, b)] = ONE;
            }
        }
        let mut antipode = CMat::zeros(n, n);
        for g in 0..n {
            antipode[(group.inv(g), g)] = ONE;
        }
        let rep = (0..n)
            .map(|g| {
                let mut m = CMat::zeros(n, n);
                m[(g, g)] = ONE;
                m
            })
            .collect();
        let irreps = group
            .unitary_irreps()
            .into_iter()
            .map(|pi| {
                let d = pi[0].nrows();
                let entries = (0..d * d)
                    .map(|ij| CVec::from_iterator(n, (0..n).map(|g| pi[g][(ij / d, ij % d)])))
                    .collect();
                Corepresentation::new(d, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let data = HopfData {
            mult,
            unit: CVec::from_element(n, ONE),
            star: CMat::identity(n, n),
            comult,
            counit: crate::linalg::basis_vec(n, group.identity()),
            antipode,
            rep,
            irreps,
        };
        let mut out = Self::assemble(data, Carrier::Function(group.clone()))?;
        out.metric = metric;
        Ok(out)
    }

    /// Group algebra of `G`: `λ_g λ_h = λ_{gh}`, `λ_g* = λ_{g⁻¹}`, `Δλ_g = λ_g ⊗ λ_g`,
    /// left regular representation.
    pub fn group_algebra(group: &FiniteGroup, length: Option<Vec<f64>>) -> Result<Self> {
        if let Some(l) = &length {
            group.validate_length(l)?;
        }
        let n = group.order();
        let mut mult = vec![CVec::zeros(n); n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b][group.mul(a, b)] = ONE;
            }
        }
        let mut star = CMat::zeros(n, n);
        for g in 0..n {
            star[(group.inv(g), g)] = ONE;
        }
        let comult = (0..n)
            .map(|g| {
                let mut m = CMat::zeros(n, n);
                m[(g, g)] = ONE;
                m
            })
            .collect();
        let irreps = (0..n)
            .map(|g| Corepresentation::new(1, vec![crate::linalg::basis_vec(n, g)]))
            .collect::<Result<Vec<_>>>()?;
        let data = HopfData {
            mult,
            unit: crate::linalg::basis_vec(n, group.identity()),
            star: star.clone(),
            comult,
            counit: CVec::from_element(n, ONE),
            antipode: star,
            rep: (0..n).map(|g| group.left_regular(g)).collect(),
            irreps,
        };
        let mut out = Self::assemble(data, Carrier::GroupAlgebra(group.clone()))?;
        out.length = length;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        match &self.carrier {
            Carrier::Function(g) | Carrier::GroupAlgebra(g) => Some(g),
            Carrier::Custom => None,
        }
    }

    pub fn metric(&self) -> Option<&DMatrix<f64>> {
        self.metric.as_ref()
    }

    pub fn length(&self) -> Option<&[f64]> {
        self.length.as_deref()
    }

    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    pub fn counit(&self) -> Functional {
        Functional(self.counit.clone())
    }

    pub fn haar(&self) -> Functional {
        Functional(self.haar.clone())
    }

    pub fn irreps(&self) -> &[Corepresentation] {
        &self.irreps
    }

    pub fn set_irreps(&mut self, irreps: Vec<Corepresentation>) {
        self.irreps = irreps;
    }

    pub fn rep_dim(&self) -> usize {
        self.rep[0].nrows()
    }

    pub fn rep_basis(&self) -> &[CMat] {
        &self.rep
    }

    pub fn structure_constants(&self) -> &[CVec] {
        &self.mult
    }

    pub fn star_matrix(&self) -> &CMat {
        &self.star
    }

    pub fn comult_basis(&self) -> &[CMat] {
        &self.comult
    }

    pub fn antipode_matrix(&self) -> &CMat {
        &self.antipode
    }

    pub fn product(&self, a: &CVec, b: &CVec) -> CVec {
        let mut out = CVec::zeros(self.n);
        for &(i, j, k, v) in &self.mult_nz {
            out[k] += a[i] * b[j] * v;
        }
        out
    }

    /// Matrix of `b ↦ ab` on coefficient vectors.
    pub fn left_mult(&self, a: &CVec) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for (i, l) in self.lmul.iter().enumerate() {
            if a[i] != ZERO {
                m += l * a[i];
            }
        }
        m
    }

    pub fn star(&self, a: &CVec) -> CVec {
        &self.star * a.conjugate()
    }

    pub fn star_basis(&self, i: usize) -> CVec {
        self.star.column(i).into_owned()
    }

    /// `n x n` coefficient matrix of `Δ(a)`.
    pub fn comultiply(&self, a: &CVec) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for (i, c) in self.comult.iter().enumerate() {
            if a[i] != ZERO {
                m += c * a[i];
            }
        }
        m
    }

    pub fn antipode(&self, a: &CVec) -> CVec {
        &self.antipode * a
    }

    pub fn rep(&self, a: &CVec) -> CMat {
        let d = self.rep_dim();
        let mut m = CMat::zeros(d, d);
        for (i, p) in self.rep.iter().enumerate() {
            if a[i] != ZERO {
                m += p * a[i];
            }
        }
        m
    }

    /// C*-norm through the faithful representation.
    pub fn norm(&self, a: &CVec) -> f64 {
        op_norm(&self.rep(a))
    }

    /// Product in `A ⊗ A` of two coefficient matrices.
    pub fn tensor_product(&self, x: &CMat, y: &CMat) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for &(a, cc, p, v1) in &self.mult_nz {
            for &(b, d, q, v2) in &self.mult_nz {
                let s = x[(a, b)] * y[(cc, d)];
                if s != ZERO {
                    out[(p, q)] += s * v1 * v2;
                }
            }
        }
        out
    }

    /// `(μ ⊗ ν)Δ`.
    pub fn convolve(&self, mu: &Functional, nu: &Functional) -> Functional {
        Functional(CVec::from_iterator(
            self.n,
            self.comult.iter().map(|c| (c.transpose() * &mu.0).dot(&nu.0)),
        ))
    }

    /// `(μ ⊗ id)` applied to an element of `A ⊗ A`.
    pub fn slice_left(&self, mu: &Functional, t: &CMat) -> CVec {
        t.transpose() * &mu.0
    }

    /// `(id ⊗ μ)` applied to an element of `A ⊗ A`.
    pub fn slice_right(&self, t: &CMat, mu: &Functional) -> CVec {
        t * &mu.0
    }

    fn solve_haar(&self) -> Result<CVec> {
        let n = self.n;
        let mut sys = CMat::zeros(2 * n * n, n);
        for i in 0..n {
            let c = &self.comult[i];
            for j in 0..n {
                let row_r = i * n + j;
                let row_l = n * n + i * n + j;
                for k in 0..n {
                    sys[(row_r, k)] += c[(j, k)];
                    sys[(row_l, k)] += c[(k, j)];
                }
                sys[(row_r, i)] -= self.unit[j];
                sys[(row_l, i)] -= self.unit[j];
            }
        }
        let ker = null_space(&sys, 1e-10);
        if ker.ncols() != 1 {
            return Err(Error::Haar(format!(
                "invariance system has a {}-dimensional solution space",
                ker.ncols()
            )));
        }
        let h = ker.column(0).into_owned();
        let norm = h.dot(&self.unit);
        if norm.norm() < 1e-12 {
            return Err(Error::Haar("invariant functional vanishes on the unit".into()));
        }
        Ok(h / norm)
    }

    /// Gram matrix `G_ij = h(e_i* e_j)` of the Haar state.
    pub fn haar_gram(&self) -> CMat {
        let n = self.n;
        let h = self.haar();
        CMat::from_fn(n, n, |i, j| h.eval(&self.product(&self.star_basis(i), &crate::linalg::basis_vec(n, j))))
    }

    /// The projection `p` with `ap = ε(a)p`, `p = p* = p²`.
    pub fn counit_support_projection(&self) -> Result<CVec> {
        let n = self.n;
        let mut sys = CMat::zeros(n * n, n);
        for i in 0..n {
            let block = &self.lmul[i] - CMat::identity(n, n) * self.counit[i];
            sys.view_mut((i * n, 0), (n, n)).copy_from(&block);
        }
        let ker = null_space(&sys, 1e-10);
        if ker.ncols() != 1 {
            return Err(Error::Axiom {
                name: "counit support is not one-dimensional".into(),
                residual: ker.ncols() as f64,
            });
        }
        let v = ker.column(0).into_owned();
        let sq = self.product(&v, &v);
        let k = (0..n).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
        let lambda = sq[k] / v[k];
        let p = v / lambda;
        let defect = max_abs_vec(&(self.product(&p, &p) - &p)).max(max_abs_vec(&(self.star(&p) - &p)));
        if defect > 1e-8 {
            return Err(Error::Axiom { name: "counit support projection".into(), residual: defect });
        }
        Ok(p)
    }

    /// Residuals of every Hopf *-algebra identity, the Podleś density ranks,
    /// faithfulness of the representation and definiteness of the Haar Gram matrix.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.n;
        let e = |i: usize| crate::linalg::basis_vec(n, i);
        let mut rep = AxiomReport::default();
        let mut push = |name: &str, v: f64| rep.residuals.push((name.to_string(), v));

        let mut assoc = 0.0f64;
        let mut unit = 0.0f64;
        let mut star_anti = 0.0f64;
        let mut comult_mult = 0.0f64;
        let mut counit_mult = 0.0f64;
        let mut rep_mult = 0.0f64;
        for i in 0..n {
            unit = unit
                .max(max_abs_vec(&(self.product(&self.unit, &e(i)) - e(i))))
                .max(max_abs_vec(&(self.product(&e(i), &self.unit) - e(i))));
            for j in 0..n {
                let ij = &self.mult[i * n + j];
                for k in 0..n {
                    let lhs = self.product(ij, &e(k));
                    let rhs = self.product(&e(i), &self.mult[j * n + k]);
                    assoc = assoc.max(max_abs_vec(&(lhs - rhs)));
                }
                let lhs = self.star(ij);
                let rhs = self.product(&self.star_basis(j), &self.star_basis(i));
                star_anti = star_anti.max(max_abs_vec(&(lhs - rhs)));
                let dl = self.comultiply(ij);
                let dr = self.tensor_product(&self.comult[i], &self.comult[j]);
                comult_mult = comult_mult.max(max_abs(&(dl - dr)));
                counit_mult = counit_mult.max((self.counit.dot(ij) - self.counit[i] * self.counit[j]).norm());
                rep_mult = rep_mult.max(max_abs(&(self.rep(ij) - &self.rep[i] * &self.rep[j])));
            }
        }
        push("associativity", assoc);
        push("unit", unit);
        push("star antimultiplicative", star_anti);
        push("star involutive", max_abs(&(&self.star * self.star.conjugate() - CMat::identity(n, n))));

        let mut coassoc = 0.0f64;
        let mut counit_law = 0.0f64;
        let mut comult_star = 0.0f64;
        let mut antipode = 0.0f64;
        let mut counit_star = 0.0f64;
        for i in 0..n {
            let c = &self.comult[i];
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut t1 = ZERO;
                        let mut t2 = ZERO;
                        for m in 0..n {
                            t1 += c[(m, l)] * self.comult[m][(j, k)];
                            t2 += c[(j, m)] * self.comult[m][(k, l)];
                        }
                        coassoc = coassoc.max((t1 - t2).norm());
                    }
                }
            }
            counit_law = counit_law
                .max(max_abs_vec(&(c.transpose() * &self.counit - e(i))))
                .max(max_abs_vec(&(c * &self.counit - e(i))));
            let star_i = self.star_basis(i);
            let lhs = self.comultiply(&star_i);
            let rhs = &self.star * c.conjugate() * self.star.transpose();
            comult_star = comult_star.max(max_abs(&(lhs - rhs)));
            let target = &self.unit * self.counit[i];
            let mut left = CVec::zeros(n);
            let mut right = CVec::zeros(n);
            for a in 0..n {
                for b in 0..n {
                    if c[(a, b)] != ZERO {
                        left += self.product(&self.antipode(&e(a)), &e(b)) * c[(a, b)];
                        right += self.product(&e(a), &self.antipode(&e(b))) * c[(a, b)];
                    }
                }
            }
            antipode = antipode.max(max_abs_vec(&(left - &target))).max(max_abs_vec(&(right - &target)));
            counit_star = counit_star.max((self.counit.dot(&star_i) - self.counit[i].conj()).norm());
        }
        push("coassociativity", coassoc);
        push("counit", counit_law);
        push("comultiplication multiplicative", comult_mult);
        let one_one = &self.unit * self.unit.transpose();
        push("comultiplication unital", max_abs(&(self.comultiply(&self.unit) - one_one)));
        push("comultiplication star", comult_star);
        push("counit multiplicative", counit_mult);
        push("counit unital", (self.counit.dot(&self.unit) - ONE).norm());
        push("counit star", counit_star);
        push("antipode", antipode);

        let d0 = self.rep_dim();
        let mut rep_star = 0.0f64;
        for i in 0..n {
            rep_star = rep_star.max(max_abs(&(self.rep(&self.star_basis(i)) - self.rep[i].adjoint())));
        }
        push("representation multiplicative", rep_mult);
        push("representation unital", max_abs(&(self.rep(&self.unit) - CMat::identity(d0, d0))));
        push("representation star", rep_star);

        let h = self.haar();
        let mut haar_inv = 0.0f64;
        for i in 0..n {
            let c = &self.comult[i];
            let target = &self.unit * self.haar[i];
            haar_inv = haar_inv
                .max(max_abs_vec(&(c * &h.0 - &target)))
                .max(max_abs_vec(&(c.transpose() * &h.0 - &target)));
        }
        push("haar invariance", haar_inv);
        push("haar normalisation", (h.eval(&self.unit) - ONE).norm());

        let mut span_l = CMat::zeros(n * n, n * n);
        let mut span_r = CMat::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let c = &self.comult[j];
                let l = &self.lmul[i] * c;
                let rr = c * self.lmul[i].transpose();
                span_l.set_column(i * n + j, &crate::linalg::vectorize(&l));
                span_r.set_column(i * n + j, &crate::linalg::vectorize(&rr));
            }
        }
        rep.podles_ranks = (rank(&span_l, 1e-10), rank(&span_r, 1e-10));
        rep.podles_target = n * n;

        let mut rep_span = CMat::zeros(d0 * d0, n);
        for i in 0..n {
            rep_span.set_column(i, &crate::linalg::vectorize(&self.rep[i]));
        }
        rep.rep_rank = rank(&rep_span, 1e-10);
        rep.dim = n;

        let gram = self.haar_gram();
        let vals = eigh(&gram).0;
        rep.haar_gram_min_eig = vals[0];
        push("haar gram hermitian", max_abs(&(&gram - gram.adjoint())));
        rep
    }

    /// Element of `A` with coefficients given by a slice of reals.
    pub fn real_element(&self, coeffs: &[f64]) -> CVec {
        CVec::from_iterator(self.n, coeffs.iter().map(|&x| r(x)))
    }
}

/// Result of [`FiniteQuantumGroup::check_axioms`].
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub residuals: Vec<(String, f64)>,
    pub podles_ranks: (usize, usize),
    pub podles_target: usize,
    pub rep_rank: usize,
    pub dim: usize,
    pub haar_gram_min_eig: f64,
}

impl AxiomReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    /// First failing check, if any.
    pub fn failure(&self, tol: f64) -> Option<Error> {
        if let Some((name, v)) = self.residuals.iter().find(|(_, v)| !(*v <= tol)) {
            return Some(Error::Axiom { name: name.clone(), residual: *v });
        }
        let (l, rr) = self.podles_ranks;
        if l != self.podles_target || rr != self.podles_target {
            return Some(Error::Axiom {
                name: format!("Podleś density ranks ({l}, {rr}) below {}", self.podles_target),
                residual: (self.podles_target - l.min(rr)) as f64,
            });
        }
        if self.rep_rank != self.dim {
            return Some(Error::Axiom {
                name: format!("representation not faithful (rank {} of {})", self.rep_rank, self.dim),
                residual: (self.dim - self.rep_rank) as f64,
            });
        }
        if !(self.haar_gram_min_eig > tol) {
            return Some(Error::Axiom {
                name: "Haar state not faithful".into(),
                residual: -self.haar_gram_min_eig,
            });
        }
        None
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.failure(tol).is_none()
    }
}
