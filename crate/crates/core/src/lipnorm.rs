//! Lip-norms on the algebra, the numerical radius, the seminorms induced on truncated
//! systems through their coactions, and invariant upgrades.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DMatrix;

use crate::compress::{InducedCoaction, Side, SystemState, TruncatedSystem};
use crate::corep::PeterWeyl;
use crate::error::{Error, Result};
use crate::hopf::{Carrier, FiniteQuantumGroup};
use crate::linalg::{c, eigvalsh, max_abs, op_norm, r, rank, CMat, CVec, C64, ZERO};
use crate::sampling;

/// Certified two-sided enclosure of a value that is not computed exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct LipValueBracket {
    pub lower: f64,
    pub upper: f64,
    pub method: &'static str,
}

impl LipValueBracket {
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

/// Anything that evaluates a seminorm on algebra elements.
pub trait Seminorm {
    fn eval(&self, a: &CVec) -> f64;
}

/// `L(a) = max_i |ℓ_i(a)| / c_i`.
#[derive(Clone, Debug)]
pub struct PolyhedralSeminorm {
    functionals: Vec<CVec>,
    constants: Vec<f64>,
}

impl PolyhedralSeminorm {
    pub fn new(functionals: Vec<CVec>, constants: Vec<f64>) -> Result<Self> {
        if functionals.len() != constants.len() || functionals.is_empty() {
            return Err(Error::Seminorm("family and constants must be nonempty and of equal length".into()));
        }
        if let Some(c) = constants.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return Err(Error::Seminorm(format!("constant {c} is not positive")));
        }
        let n = functionals[0].len();
        if functionals.iter().any(|f| f.len() != n) {
            return Err(Error::Shape("functionals of different lengths".into()));
        }
        Ok(Self { functionals, constants })
    }

    /// `{(ev_g − ev_h, d(g, h)) : g < h}` on functions on a group.
    pub fn lip_from_metric(g: &FiniteQuantumGroup) -> Result<Self> {
        let group = match g.carrier() {
            Carrier::Function(group) => group,
            _ => return Err(Error::Unsupported("metric Lip-norm needs an algebra of functions on a group".into())),
        };
        let d = g.metric().ok_or_else(|| Error::Seminorm("no metric attached to the algebra".into()))?;
        group.validate_metric(d)?;
        Ok(Self::from_metric_unchecked(d))
    }

    /// Same family from any metric, without invariance checks.
    pub fn from_metric_unchecked(d: &DMatrix<f64>) -> Self {
        let n = d.nrows();
        let mut functionals = Vec::new();
        let mut constants = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut f = CVec::zeros(n);
                f[a] = r(1.0);
                f[b] = r(-1.0);
                functionals.push(f);
                constants.push(d[(a, b)]);
            }
        }
        Self { functionals, constants }
    }

    /// `{(x ↦ h(λ_g* x), 1/ℓ(g)) : g ≠ e}` on a group algebra.
    pub fn lip_fourier(g: &FiniteQuantumGroup) -> Result<Self> {
        let group = match g.carrier() {
            Carrier::GroupAlgebra(group) => group,
            _ => return Err(Error::Unsupported("Fourier Lip-norm needs a group algebra".into())),
        };
        let l = g.length().ok_or_else(|| Error::Seminorm("no length function attached to the algebra".into()))?;
        group.validate_length(l)?;
        let n = g.dim();
        let h = g.haar();
        let mut functionals = Vec::new();
        let mut constants = Vec::new();
        for x in 0..n {
            if x == group.identity() {
                continue;
            }
            let lam_star = g.star(&crate::linalg::basis_vec(n, x));
            let f = CVec::from_iterator(
                n,
                (0..n).map(|j| h.eval(&g.product(&lam_star, &crate::linalg::basis_vec(n, j)))),
            );
            functionals.push(f);
            constants.push(1.0 / l[x]);
        }
        Ok(Self { functionals, constants })
    }

    pub fn functionals(&self) -> &[CVec] {
        &self.functionals
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn eval(&self, a: &CVec) -> f64 {
        self.functionals
            .iter()
            .zip(&self.constants)
            .map(|(f, c)| f.iter().zip(a.iter()).map(|(x, y)| x * y).sum::<C64>().norm() / c)
            .fold(0.0, f64::max)
    }

    /// Kernel exactly the scalars and invariance under the involution.
    pub fn certify(&self, g: &FiniteQuantumGroup) -> Result<()> {
        let n = g.dim();
        let on_unit = self
            .functionals
            .iter()
            .map(|f| f.dot(g.unit()).norm())
            .fold(0.0, f64::max);
        if on_unit > 1e-10 {
            return Err(Error::Seminorm(format!("does not vanish on the unit ({on_unit:.3e})")));
        }
        let mut m = CMat::zeros(self.len(), n);
        for (i, f) in self.functionals.iter().enumerate() {
            m.set_row(i, &f.transpose());
        }
        let rk = rank(&m, 1e-10);
        if rk != n - 1 {
            return Err(Error::Kernel(format!("kernel has dimension {}, expected 1", n - rk)));
        }
        for (i, f) in self.functionals.iter().enumerate() {
            let starred: CVec = (g.star_matrix().transpose() * f).conjugate();
            let found = self.functionals.iter().zip(&self.constants).any(|(h, &c)| {
                if (c - self.constants[i]).abs() > 1e-12 * c.max(1.0) {
                    return false;
                }
                let k = (0..n).max_by(|&a, &b| h[a].norm().total_cmp(&h[b].norm())).unwrap();
                if h[k].norm() < 1e-14 {
                    return false;
                }
                let w = starred[k] / h[k];
                (w.norm() - 1.0).abs() < 1e-10 && (&starred - h * w).norm() < 1e-10 * f.norm().max(1.0)
            });
            if !found {
                return Err(Error::Seminorm(format!("family is not closed under the involution at member {i}")));
            }
        }
        Ok(())
    }
}

impl Seminorm for PolyhedralSeminorm {
    fn eval(&self, a: &CVec) -> f64 {
        PolyhedralSeminorm::eval(self, a)
    }
}

/// `L(a) = ‖[D, π(a)]‖` for a Hermitian `D` and a representation `π` on the same space.
#[derive(Clone, Debug)]
pub struct CommutatorSeminorm {
    d: CMat,
    reps: Vec<CMat>,
}

impl CommutatorSeminorm {
    pub fn new(d: CMat, reps: Vec<CMat>) -> Result<Self> {
        if max_abs(&(&d - d.adjoint())) > 1e-12 {
            return Err(Error::Seminorm("D is not hermitian".into()));
        }
        if reps.iter().any(|m| m.shape() != d.shape()) {
            return Err(Error::Shape("D and the representation act on different spaces".into()));
        }
        Ok(Self { d, reps })
    }

    /// `D` on the GNS space of the Haar state.
    pub fn on_gns(g: &FiniteQuantumGroup, pw: &PeterWeyl, d: CMat) -> Result<Self> {
        let n = g.dim();
        let reps = (0..n).map(|i| pw.gns().op(g, &crate::linalg::basis_vec(n, i))).collect();
        Self::new(d, reps)
    }

    /// Sum over pairs `g < h` of `C²` with `f ↦ diag(f(g), f(h))` and off-diagonal
    /// `D = 1/d(g,h)`; reproduces the metric Lip-norm exactly.
    pub fn from_metric(g: &FiniteQuantumGroup) -> Result<Self> {
        if !matches!(g.carrier(), Carrier::Function(_)) {
            return Err(Error::Unsupported("needs an algebra of functions on a group".into()));
        }
        let dm = g.metric().ok_or_else(|| Error::Seminorm("no metric attached".into()))?;
        let n = g.dim();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = 2 * pairs.len();
        let mut d = CMat::zeros(m, m);
        let mut reps = vec![CMat::zeros(m, m); n];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let w = r(1.0 / dm[(a, b)]);
            d[(2 * k, 2 * k + 1)] = w;
            d[(2 * k + 1, 2 * k)] = w;
            reps[a][(2 * k, 2 * k)] = r(1.0);
            reps[b][(2 * k + 1, 2 * k + 1)] = r(1.0);
        }
        Self::new(d, reps)
    }

    pub fn eval(&self, a: &CVec) -> f64 {
        let mut p = CMat::zeros(self.d.nrows(), self.d.ncols());
        for (i, m) in self.reps.iter().enumerate() {
            if a[i] != ZERO {
                p += m * a[i];
            }
        }
        op_norm(&(&self.d * &p - &p * &self.d))
    }
}

impl Seminorm for CommutatorSeminorm {
    fn eval(&self, a: &CVec) -> f64 {
        CommutatorSeminorm::eval(self, a)
    }
}

#[derive(PartialEq)]
struct Interval {
    upper: f64,
    t0: f64,
    t1: f64,
    h0: f64,
    h1: f64,
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

fn support(m: &CMat, theta: f64) -> f64 {
    let z = c(theta.cos(), theta.sin());
    let h = (m * z + m.adjoint() * z.conj()) * r(0.5);
    *eigvalsh(&h).last().unwrap()
}

/// Upper bound for `max_{θ∈[t0,t1]} h(θ)` from the two supporting lines at the ends.
fn interval_upper(t0: f64, t1: f64, h0: f64, h1: f64) -> f64 {
    let det = (t0 - t1).sin();
    if det.abs() < 1e-300 {
        return h0.max(h1);
    }
    // x cos t − y sin t = h at both ends
    let x = (-h0 * t1.sin() + h1 * t0.sin()) / det;
    let y = (h1 * t0.cos() - h0 * t1.cos()) / det;
    let radius = x.hypot(y);
    let arg = -(y.atan2(x));
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut phi = (arg - t0).rem_euclid(two_pi) + t0;
    if phi > t1 {
        phi -= two_pi;
    }
    if phi >= t0 && phi <= t1 {
        radius.max(h0).max(h1)
    } else {
        h0.max(h1)
    }
}

/// If the entries above `thr` only connect indices graded by `k_j − k_l = 1`, then
/// `diag(e^{ik_jφ}) M diag(e^{-ik_jφ}) = e^{iφ} M`, the field of values is a disk about the
/// origin and `w(M) = λ_max(Re M)`. Returns that value with the dropped mass.
fn circular_radius(m: &CMat, thr: f64) -> Option<(f64, f64)> {
    let n = m.nrows();
    let mut grade: Vec<Option<i64>> = vec![None; n];
    let mut dropped = 0.0f64;
    let mut kept = CMat::zeros(n, n);
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for j in 0..n {
        for l in 0..n {
            let v = m[(j, l)];
            if v.norm() <= thr {
                dropped += v.norm_sqr();
                continue;
            }
            if j == l {
                return None;
            }
            kept[(j, l)] = v;
            adj[j].push((l, -1));
            adj[l].push((j, 1));
        }
    }
    for s in 0..n {
        if grade[s].is_some() {
            continue;
        }
        grade[s] = Some(0);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let ku = grade[u].unwrap();
            for &(v, step) in &adj[u] {
                match grade[v] {
                    None => {
                        grade[v] = Some(ku + step);
                        stack.push(v);
                    }
                    Some(kv) if kv != ku + step => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let h = (&kept + kept.adjoint()) * r(0.5);
    Some((*eigvalsh(&h).last().unwrap(), dropped.sqrt()))
}

/// Certified bracket `lo ≤ w(M) ≤ hi` with `hi − lo ≤ tol`, where
/// `w(M) = max_θ λ_max(Re(e^{iθ} M))`. Stops early once `hi ≤ stop_below`.
pub fn numerical_radius_bracket(m: &CMat, tol: f64, stop_below: Option<f64>) -> (f64, f64) {
    if m.is_empty() {
        return (0.0, 0.0);
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return (0.0, 0.0);
    }
    if max_abs(&(m - m.adjoint())) <= 1e-15 * scale {
        let e = eigvalsh(m);
        let w = e[0].abs().max(e[e.len() - 1].abs());
        return (w, w);
    }
    if let Some((w, err)) = circular_radius(m, 1e-15 * scale) {
        if err <= tol {
            return ((w - err).max(0.0), w + err);
        }
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let k = 8;
    let thetas: Vec<f64> = (0..=k).map(|i| two_pi * i as f64 / k as f64).collect();
    let mut vals: Vec<f64> = thetas[..k].iter().map(|&t| support(m, t)).collect();
    vals.push(vals[0]);
    let mut best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut heap = BinaryHeap::new();
    for i in 0..k {
        let (t0, t1, h0, h1) = (thetas[i], thetas[i + 1], vals[i], vals[i + 1]);
        heap.push(Interval { upper: interval_upper(t0, t1, h0, h1), t0, t1, h0, h1 });
    }
    let mut iters = 0;
    while let Some(top) = heap.pop() {
        if top.upper <= best + tol || stop_below.is_some_and(|s| top.upper <= s) || iters > 100_000 {
            return (best.max(0.0), top.upper.max(best));
        }
        iters += 1;
        let mid = 0.5 * (top.t0 + top.t1);
        let hm = support(m, mid);
        best = best.max(hm);
        heap.push(Interval { upper: interval_upper(top.t0, mid, top.h0, hm), t0: top.t0, t1: mid, h0: top.h0, h1: hm });
        heap.push(Interval { upper: interval_upper(mid, top.t1, hm, top.h1), t0: mid, t1: top.t1, h0: hm, h1: top.h1 });
    }
    (best.max(0.0), best.max(0.0))
}

/// Numerical radius to within `tol` (from below).
pub fn numerical_radius(m: &CMat, tol: f64) -> f64 {
    numerical_radius_bracket(m, tol, None).0
}

pub const NR_TOL: f64 = 1e-11;

/// `max_i w(slice_i) / c_i` over a list of operators, pruning by Frobenius norm.
fn max_weighted_radius(ops: &[(CMat, f64)], tol: f64) -> f64 {
    let mut order: Vec<(f64, usize)> = ops.iter().enumerate().map(|(i, (m, c))| (m.norm() / c, i)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 0.0f64;
    for (frob, i) in order {
        if frob <= best {
            break;
        }
        let (m, c) = &ops[i];
        let (lo, _) = numerical_radius_bracket(m, tol * c, Some(best * c));
        best = best.max(lo / c);
    }
    best
}

/// Seminorm `L^α(x) = sup_φ L_A((φ ⊗ id)α(x))`, computed as `max_i w((id ⊗ ℓ_i)α(x)) / c_i`
/// (`(ℓ_i ⊗ id)β(x)` for a left coaction).
pub fn induced_lip(l: &PolyhedralSeminorm, coaction: &InducedCoaction, t: &TruncatedSystem, x: &CVec) -> f64 {
    induced_lip_tol(l, coaction, t, x, NR_TOL)
}

pub fn induced_lip_tol(
    l: &PolyhedralSeminorm,
    coaction: &InducedCoaction,
    t: &TruncatedSystem,
    x: &CVec,
    tol: f64,
) -> f64 {
    let m = coaction.apply(x);
    let ops: Vec<(CMat, f64)> = l
        .functionals()
        .iter()
        .zip(l.constants())
        .map(|(f, &c)| (t.to_matrix(&(&m * f)), c))
        .collect();
    max_weighted_radius(&ops, tol)
}

/// `max(L^α(x), L^β(x))`.
pub fn induced_lip_bi(
    l: &PolyhedralSeminorm,
    alpha: &InducedCoaction,
    beta: &InducedCoaction,
    t: &TruncatedSystem,
    x: &CVec,
) -> f64 {
    induced_lip(l, alpha, t, x).max(induced_lip(l, beta, t, x))
}

/// Bracket for the induced seminorm of a commutator Lip-norm: the lower end maximises
/// over sampled states, the upper end is `Σ_s ‖B_s‖ L_A(row_s)` from the basis expansion.
pub fn induced_lip_bracket(
    l: &CommutatorSeminorm,
    coaction: &InducedCoaction,
    t: &TruncatedSystem,
    x: &CVec,
    samples: usize,
    seed: u64,
) -> LipValueBracket {
    let m = coaction.apply(x);
    let mut lower = 0.0f64;
    for phi in crate::compress::random_system_states(t, samples, seed) {
        let y = m.transpose() * phi.values();
        lower = lower.max(l.eval(&y));
    }
    let mut upper = 0.0;
    for (s, b) in t.system_basis().iter().enumerate() {
        let row = m.row(s).transpose();
        upper += op_norm(b) * l.eval(&row);
    }
    LipValueBracket { lower, upper: upper.max(lower), method: "sampled states / basis expansion" }
}

/// Lower bound for `L^α(x)` over explicit states.
pub fn induced_lip_sampled<S: Seminorm>(l: &S, coaction: &InducedCoaction, x: &CVec, states: &[SystemState]) -> f64 {
    let m = coaction.apply(x);
    states
        .iter()
        .map(|phi| l.eval(&(m.transpose() * phi.values())))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpgradeSide {
    /// `L′(a) = sup_μ L(a_(0) μ(a_(1)))`.
    Right,
    /// `L″(a) = sup_μ L(μ(a_(0)) a_(1))`.
    Left,
    /// `L‴ = max(L′, L″)`.
    Both,
}

/// Invariant upgrade of a polyhedral Lip-norm.
#[derive(Clone, Debug)]
pub struct UpgradedSeminorm<'a> {
    base: &'a PolyhedralSeminorm,
    g: &'a FiniteQuantumGroup,
    side: UpgradeSide,
}

pub fn invariant_upgrade<'a>(
    l: &'a PolyhedralSeminorm,
    g: &'a FiniteQuantumGroup,
    side: UpgradeSide,
) -> UpgradedSeminorm<'a> {
    UpgradedSeminorm { base: l, g, side }
}

impl UpgradedSeminorm<'_> {
    pub fn eval(&self, a: &CVec) -> f64 {
        let d = self.g.comultiply(a);
        let build = |left: bool| -> Vec<(CMat, f64)> {
            self.base
                .functionals()
                .iter()
                .zip(self.base.constants())
                .map(|(f, &c)| {
                    let b = if left { d.transpose() * f } else { &d * f };
                    (self.g.rep(&b), c)
                })
                .collect()
        };
        let right = || max_weighted_radius(&build(true), NR_TOL);
        let left = || max_weighted_radius(&build(false), NR_TOL);
        match self.side {
            UpgradeSide::Right => right(),
            UpgradeSide::Left => left(),
            UpgradeSide::Both => right().max(left()),
        }
    }
}

impl Seminorm for UpgradedSeminorm<'_> {
    fn eval(&self, a: &CVec) -> f64 {
        UpgradedSeminorm::eval(self, a)
    }
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// Largest `L(slice) − L(a)` over sampled elements and states.
    pub sampled_violation: f64,
    /// Largest `L′(a) − L(a)` (or `L″`) over the sampled elements; polyhedral only.
    pub exact_violation: Option<f64>,
}

impl InvarianceReport {
    pub fn worst(&self) -> f64 {
        self.sampled_violation.max(self.exact_violation.unwrap_or(0.0))
    }
}

/// Sampled check of `L((id ⊗ μ)Δa) ≤ L(a)` (right) or `L((μ ⊗ id)Δa) ≤ L(a)` (left).
pub fn check_invariance<S: Seminorm>(
    l: &S,
    g: &FiniteQuantumGroup,
    side: Side,
    samples: usize,
    seed: u64,
) -> InvarianceReport {
    let states = sampling::algebra_states(g, samples.max(g.rep_dim()), seed);
    let elems = sampling::elements(g.dim(), samples, seed.wrapping_add(1));
    let mut worst = 0.0f64;
    for (i, a) in elems.iter().enumerate() {
        let base = l.eval(a);
        let d = g.comultiply(a);
        let mu = &states[i % states.len()];
        let s = match side {
            Side::Right => g.slice_right(&d, mu),
            Side::Left => g.slice_left(mu, &d),
        };
        worst = worst.max(l.eval(&s) - base);
    }
    InvarianceReport { sampled_violation: worst, exact_violation: None }
}

/// Sampled check plus the exact comparison with the invariant upgrade.
pub fn check_invariance_polyhedral(
    l: &PolyhedralSeminorm,
    g: &FiniteQuantumGroup,
    side: Side,
    samples: usize,
    seed: u64,
) -> InvarianceReport {
    let mut rep = check_invariance(l, g, side, samples, seed);
    let up = invariant_upgrade(
        l,
        g,
        match side {
            Side::Right => UpgradeSide::Right,
            Side::Left => UpgradeSide::Left,
        },
    );
    let elems = sampling::elements(g.dim(), samples, seed.wrapping_add(2));
    let exact = elems
        .iter()
        .map(|a| {
            let sa = (a + g.star(a)) * r(0.5);
            (up.eval(a) - l.eval(a)).max(up.eval(&sa) - l.eval(&sa))
        })
        .fold(0.0, f64::max);
    rep.exact_violation = Some(exact);
    rep
}

/// Errors unless the Lip-norm is invariant on both sides (to `tol`).
pub fn require_bi_invariant(l: &PolyhedralSeminorm, g: &FiniteQuantumGroup, tol: f64) -> Result<()> {
    for side in [Side::Right, Side::Left] {
        let rep = check_invariance_polyhedral(l, g, side, 24, 0x5eed);
        if rep.worst() > tol {
            return Err(Error::Seminorm(format!(
                "Lip-norm is not {}-invariant (violation {:.3e})",
                if side == Side::Right { "right" } else { "left" },
                rep.worst()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct TranslationSeminorms {
    pub lambda: f64,
    pub rho: f64,
}

impl TranslationSeminorms {
    /// `‖x‖_{λ,ρ} = max(‖x‖_λ, ‖x‖_ρ)`.
    pub fn both(&self) -> f64 {
        self.lambda.max(self.rho)
    }
}

/// `‖x‖_λ` and `‖x‖_ρ` with `‖x‖_λ = max_{g≠e} ‖λ_g x λ_g* − x‖ / d(g, e)` for left translations
/// and `‖x‖_ρ` the same for right translations, restricted to `H_Λ`.
pub fn group_case_seminorms(
    g: &FiniteQuantumGroup,
    pw: &PeterWeyl,
    t: &TruncatedSystem,
    x: &CVec,
) -> Result<TranslationSeminorms> {
    let group = match g.carrier() {
        Carrier::Function(group) => group,
        _ => return Err(Error::Unsupported("translation seminorms need a commutative algebra of functions".into())),
    };
    let d = g.metric().ok_or_else(|| Error::Seminorm("no metric attached".into()))?;
    let q = t.hilbert_basis();
    let xm = t.to_matrix(x);
    let e = group.identity();
    let mut lam = 0.0f64;
    let mut rho = 0.0f64;
    for h in 0..group.order() {
        if h == e {
            continue;
        }
        let ul = q.adjoint() * pw.gns().conjugate_in(&group.left_regular(h)) * q;
        let ur = q.adjoint() * pw.gns().conjugate_in(&group.right_regular(h)) * q;
        let dist = d[(h, e)];
        lam = lam.max(op_norm(&(&ul * &xm * ul.adjoint() - &xm)) / dist);
        rho = rho.max(op_norm(&(&ur * &xm * ur.adjoint() - &xm)) / dist);
    }
    Ok(TranslationSeminorms { lambda: lam, rho })
}

/// Evaluates `L_A` at `(φ ⊗ id)α(x)`.
pub fn slice_value<S: Seminorm>(l: &S, coaction: &InducedCoaction, phi: &SystemState, x: &CVec) -> f64 {
    l.eval(&coaction.slice_system(phi.values(), x))
}
