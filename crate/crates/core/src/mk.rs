//! Monge-Kantorovich distances by linear programming, truncation and criterion bounds,
//! the admissible sum Lip-norm, Hausdorff estimates and diameter brackets.

use nalgebra::DMatrix;

use crate::compress::{canonical_state, SystemState, TruncatedSystem};
use crate::corep::PeterWeyl;
use crate::error::{Error, Result};
use crate::hopf::{FiniteQuantumGroup, Functional};
use crate::linalg::{basis_vec, eigvalsh, op_norm, r, CMat, CVec, I};
use crate::lipnorm::{require_bi_invariant, LipValueBracket, PolyhedralSeminorm, Seminorm};
use crate::lp;
use crate::sampling;

/// Tolerance for the LP optimality certificate.
pub const LP_TOL: f64 = 1e-9;

const CUT_TOL: f64 = 1e-12;

/// Result of maximising a linear functional over the unit ball of a Lip-norm.
#[derive(Clone, Debug)]
pub struct MkResult {
    /// Attained by `witness`, which satisfies `L(witness) ≤ 1`.
    pub value: f64,
    /// Value of the last LP relaxation; `value ≤ sup ≤ upper`.
    pub upper: f64,
    pub witness: CVec,
    pub certificate: f64,
}

/// LP data for `sup{ f(x) : x = x*, L(x) ≤ 1 }` in coordinates of a self-adjoint basis of
/// `ker h`. Real members of the family give the rows `±a·t ≤ c`; complex members are cut
/// by the half planes `Re(e^{-iψ} ℓ(x)) ≤ c`, refined at the optimum until tight.
#[derive(Clone, Debug)]
pub struct MkSolver {
    n: usize,
    basis: Vec<CVec>,
    real_rows: Vec<(Vec<f64>, f64)>,
    complex: Vec<(Vec<f64>, Vec<f64>, f64)>,
    lip: PolyhedralSeminorm,
}

impl MkSolver {
    pub fn new(g: &FiniteQuantumGroup, l: &PolyhedralSeminorm) -> Result<Self> {
        l.certify(g)?;
        let n = g.dim();
        let h = g.haar();
        let unit = g.unit();
        let mut cands = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            let e = basis_vec(n, i);
            let es = g.star(&e);
            for (k, v) in [&e + &es, (&e - &es) * I].into_iter().enumerate() {
                let v = &v - unit * r(h.eval(&v).re);
                for j in 0..n {
                    cands[(j, 2 * i + k)] = v[j].re;
                    cands[(n + j, 2 * i + k)] = v[j].im;
                }
            }
        }
        let svd = cands.svd(true, false);
        let u = svd.u.expect("left singular vectors");
        let smax = svd.singular_values.max();
        let mut order: Vec<usize> = (0..2 * n).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let basis: Vec<CVec> = order
            .into_iter()
            .filter(|&k| svd.singular_values[k] > 1e-10 * smax)
            .map(|k| CVec::from_iterator(n, (0..n).map(|j| crate::linalg::c(u[(j, k)], u[(n + j, k)]))))
            .collect();
        if basis.len() != n - 1 {
            return Err(Error::Kernel(format!(
                "self-adjoint part modulo scalars has dimension {}, expected {}",
                basis.len(),
                n - 1
            )));
        }
        let mut real_rows = Vec::new();
        let mut complex = Vec::new();
        for (f, &c) in l.functionals().iter().zip(l.constants()) {
            let vals: Vec<_> = basis.iter().map(|s| f.iter().zip(s.iter()).map(|(a, b)| a * b).sum::<crate::linalg::C64>()).collect();
            let re: Vec<f64> = vals.iter().map(|z| z.re).collect();
            let im: Vec<f64> = vals.iter().map(|z| z.im).collect();
            let scale = re.iter().chain(&im).fold(0.0f64, |m, v| m.max(v.abs()));
            if im.iter().all(|v| v.abs() <= 1e-13 * scale.max(1e-300)) {
                real_rows.push((re, c));
            } else {
                complex.push((re, im, c));
            }
        }
        Ok(Self { n, basis, real_rows, complex, lip: l.clone() })
    }

    pub fn seminorm(&self) -> &PolyhedralSeminorm {
        &self.lip
    }

    /// Self-adjoint basis of `ker h` used as LP coordinates.
    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }

    fn element(&self, t: &[f64]) -> CVec {
        self.basis.iter().zip(t).fold(CVec::zeros(self.n), |acc, (s, &v)| acc + s * r(v))
    }

    /// `sup { Re f(x) : x = x*, L(x) ≤ 1 }`.
    pub fn maximize(&self, f: &CVec) -> Result<MkResult> {
        let k = self.basis.len();
        let obj: Vec<f64> = self
            .basis
            .iter()
            .map(|s| f.iter().zip(s.iter()).map(|(a, b)| a * b).sum::<crate::linalg::C64>().re)
            .collect();
        let mut cuts: Vec<Vec<f64>> = Vec::new();
        let mut bounds: Vec<f64> = Vec::new();
        for (a, c) in &self.real_rows {
            cuts.push(a.clone());
            cuts.push(a.iter().map(|v| -v).collect());
            bounds.extend([*c, *c]);
        }
        for (re, im, c) in &self.complex {
            for q in 0..8 {
                let psi = std::f64::consts::PI * q as f64 / 4.0;
                cuts.push(re.iter().zip(im).map(|(a, b)| psi.cos() * a + psi.sin() * b).collect());
                bounds.push(*c);
            }
        }
        let mut rounds = 0;
        loop {
            rounds += 1;
            let m = cuts.len();
            let mut a = DMatrix::<f64>::zeros(m, 2 * k);
            for (i, row) in cuts.iter().enumerate() {
                for j in 0..k {
                    a[(i, j)] = row[j];
                    a[(i, k + j)] = -row[j];
                }
            }
            let cost: Vec<f64> = obj.iter().cloned().chain(obj.iter().map(|v| -v)).collect();
            let sol = lp::maximize(&a, &bounds, &cost)?;
            if sol.residual > LP_TOL {
                return Err(Error::cert("LP optimality certificate", sol.residual, LP_TOL));
            }
            let t: Vec<f64> = (0..k).map(|j| sol.x[j] - sol.x[k + j]).collect();
            let mut worst = 0.0f64;
            let mut new_cuts = Vec::new();
            for (re, im, c) in &self.complex {
                let zr: f64 = re.iter().zip(&t).map(|(a, b)| a * b).sum();
                let zi: f64 = im.iter().zip(&t).map(|(a, b)| a * b).sum();
                let ratio = zr.hypot(zi) / c;
                worst = worst.max(ratio);
                if ratio > 1.0 + CUT_TOL {
                    let psi = zi.atan2(zr);
                    new_cuts.push((re.iter().zip(im).map(|(a, b)| psi.cos() * a + psi.sin() * b).collect(), *c));
                }
            }
            let witness = self.element(&t);
            let lval = self.lip.eval(&witness);
            if new_cuts.is_empty() || rounds > 400 {
                if rounds > 400 && worst > 1.0 + 1e-9 {
                    return Err(Error::cert("cutting planes did not converge", worst - 1.0, 1e-9));
                }
                let scale = lval.max(1.0);
                let witness = witness / r(scale);
                return Ok(MkResult {
                    value: sol.value / scale,
                    upper: sol.value,
                    witness,
                    certificate: sol.residual,
                });
            }
            for (row, c) in new_cuts {
                cuts.push(row);
                bounds.push(c);
            }
        }
    }

    /// `d^L(μ, ν) = sup{ |μ(x) − ν(x)| : L(x) ≤ 1 }`.
    pub fn distance(&self, mu: &Functional, nu: &Functional) -> Result<MkResult> {
        self.maximize(&(&mu.0 - &nu.0))
    }
}

/// `d^L(μ, ν)` for a polyhedral Lip-norm.
pub fn mk_distance(g: &FiniteQuantumGroup, l: &PolyhedralSeminorm, mu: &Functional, nu: &Functional) -> Result<f64> {
    Ok(MkSolver::new(g, l)?.distance(mu, nu)?.value)
}

/// A polyhedral Lip-norm certified to have kernel `ℂ1`, closed under `*`, and invariant on
/// both sides, together with its LP data.
#[derive(Clone, Debug)]
pub struct CertifiedLipNorm {
    solver: MkSolver,
}

impl CertifiedLipNorm {
    pub fn new(g: &FiniteQuantumGroup, l: &PolyhedralSeminorm, tol: f64) -> Result<Self> {
        let solver = MkSolver::new(g, l)?;
        require_bi_invariant(l, g, tol.max(1e-9))?;
        Ok(Self { solver })
    }

    pub fn solver(&self) -> &MkSolver {
        &self.solver
    }

    pub fn seminorm(&self) -> &PolyhedralSeminorm {
        self.solver.seminorm()
    }
}

/// `B(Λ, φ) = 2 d^{L_A}(τ*φ, ε)`.
pub fn truncation_bound(g: &FiniteQuantumGroup, t: &TruncatedSystem, l: &CertifiedLipNorm, phi: &SystemState) -> Result<f64> {
    let d = l.solver().distance(&phi.pullback(t), &g.counit())?;
    Ok(2.0 * d.value.max(0.0))
}

#[derive(Clone, Copy, Debug)]
pub struct CriterionInputs {
    pub diam_x: f64,
    pub diam_y: f64,
    pub c_phi: f64,
    pub c_psi: f64,
    pub eps_x: f64,
    pub eps_y: f64,
}

/// `r = max{diam_X |1 − 1/C_Φ| + ε_X/C_Φ, diam_Y |1 − 1/C_Ψ| + ε_Y/C_Ψ}`.
pub fn criterion_bound(c: &CriterionInputs) -> Result<f64> {
    let vals = [c.diam_x, c.diam_y, c.c_phi, c.c_psi, c.eps_x, c.eps_y];
    if vals.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!("criterion inputs must be finite and nonnegative: {vals:?}")));
    }
    if c.c_phi == 0.0 || c.c_psi == 0.0 {
        return Err(Error::Domain("Lipschitz constants of the morphisms must be positive".into()));
    }
    let x = c.diam_x * (1.0 - 1.0 / c.c_phi).abs() + c.eps_x / c.c_phi;
    let y = c.diam_y * (1.0 - 1.0 / c.c_psi).abs() + c.eps_y / c.c_psi;
    Ok(x.max(y))
}

/// `L(x, y) = max{L_X(x), L_Y(y), ‖y − Φ(x)‖/r, ‖x − Ψ(y)‖/r}` on `X ⊕ Y`.
pub struct AdmissibleSum<'a> {
    pub l_x: &'a dyn Fn(&CVec) -> f64,
    pub l_y: &'a dyn Fn(&CVec) -> f64,
    pub norm_x: &'a dyn Fn(&CVec) -> f64,
    pub norm_y: &'a dyn Fn(&CVec) -> f64,
    pub phi: &'a dyn Fn(&CVec) -> CVec,
    pub psi: &'a dyn Fn(&CVec) -> CVec,
    r: f64,
}

pub fn admissible_sum_lipnorm<'a>(
    l_x: &'a dyn Fn(&CVec) -> f64,
    l_y: &'a dyn Fn(&CVec) -> f64,
    norm_x: &'a dyn Fn(&CVec) -> f64,
    norm_y: &'a dyn Fn(&CVec) -> f64,
    phi: &'a dyn Fn(&CVec) -> CVec,
    psi: &'a dyn Fn(&CVec) -> CVec,
    r: f64,
) -> Result<AdmissibleSum<'a>> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("bridge constant r must be positive, got {r}")));
    }
    Ok(AdmissibleSum { l_x, l_y, norm_x, norm_y, phi, psi, r })
}

impl AdmissibleSum<'_> {
    pub fn r(&self) -> f64 {
        self.r
    }

    /// The four branches in order `L_X, L_Y, bridge Y, bridge X`.
    pub fn branches(&self, x: &CVec, y: &CVec) -> [f64; 4] {
        [
            (self.l_x)(x),
            (self.l_y)(y),
            (self.norm_y)(&(y - (self.phi)(x))) / self.r,
            (self.norm_x)(&(x - (self.psi)(y))) / self.r,
        ]
    }

    pub fn eval(&self, x: &CVec, y: &CVec) -> f64 {
        self.branches(x, y).into_iter().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HausdorffEstimate {
    /// Hausdorff distance of `A ∪ g(B)` and `B ∪ f(A)`.
    pub exact: f64,
    /// `max{sup_a d(a, f(a)), sup_b d(g(b), b)}`.
    pub bound: f64,
}

/// Hausdorff distance between finite samples closed under the supplied maps, and the
/// bound from the maps.
pub fn hausdorff_estimate<T>(
    set_a: &[T],
    set_b: &[T],
    f: impl Fn(&T) -> T,
    g: impl Fn(&T) -> T,
    dist: impl Fn(&T, &T) -> f64,
) -> Result<HausdorffEstimate> {
    if set_a.is_empty() || set_b.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    let fa: Vec<T> = set_a.iter().map(&f).collect();
    let gb: Vec<T> = set_b.iter().map(&g).collect();
    let bound = set_a
        .iter()
        .zip(&fa)
        .map(|(a, b)| dist(a, b))
        .chain(gb.iter().zip(set_b).map(|(a, b)| dist(a, b)))
        .fold(0.0, f64::max);
    let a_all: Vec<&T> = set_a.iter().chain(&gb).collect();
    let b_all: Vec<&T> = set_b.iter().chain(&fa).collect();
    Ok(HausdorffEstimate { exact: hausdorff(&a_all, &b_all, &dist), bound })
}

/// Hausdorff distance of two finite sets.
pub fn hausdorff<T>(a: &[&T], b: &[&T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    let one = |xs: &[&T], ys: &[&T], flip: bool| {
        xs.iter()
            .map(|x| {
                ys.iter()
                    .map(|y| if flip { dist(y, x) } else { dist(x, y) })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one(a, b, false).max(one(b, a, true))
}

fn is_diagonal(g: &FiniteQuantumGroup) -> bool {
    g.rep_basis().iter().all(|m| {
        let d = m.nrows();
        (0..d).all(|i| (0..d).all(|j| i == j || m[(i, j)].norm() == 0.0))
    })
}

/// Diameter of the state space. The lower end is the largest sampled distance. When the
/// algebra acts diagonally the pure states are the basis vector states, so the bracket
/// is exact; otherwise the upper end is `Σ_k T_k osc(s_k)` with `T_k = sup |t_k|` over
/// the unit ball and `osc` the spread of the spectrum.
pub fn diameter_bracket(g: &FiniteQuantumGroup, solver: &MkSolver, samples: usize, seed: u64) -> Result<LipValueBracket> {
    let d0 = g.rep_dim();
    let states = sampling::algebra_states(g, samples.max(d0), seed);
    let mut lower = 0.0f64;
    for i in 0..d0 {
        for j in i + 1..d0 {
            lower = lower.max(solver.distance(&states[i], &states[j])?.value);
        }
    }
    if is_diagonal(g) {
        return Ok(LipValueBracket { lower, upper: lower, method: "pure states of a diagonal algebra" });
    }
    for w in states[d0..].windows(2) {
        lower = lower.max(solver.distance(&w[0], &w[1])?.value);
    }
    for s in &states[d0..] {
        lower = lower.max(solver.distance(s, &states[0])?.value);
    }
    let mut upper = 0.0;
    for s in solver.basis() {
        // the basis is orthonormal over the reals, so conj(s) reads off its coordinate
        let tk = solver.maximize(&s.map(|z| z.conj()))?.upper;
        let e = eigvalsh(&g.rep(s));
        upper += tk * (e[e.len() - 1] - e[0]);
    }
    Ok(LipValueBracket { lower, upper: upper.max(lower), method: "sampled pairs / coordinate box" })
}

/// `max_x ‖μ_n(x) − ν_n(x)‖ / L(x)` over sampled elements: a lower bound for the matrix
/// Monge-Kantorovich distance.
pub fn matrix_mk_lower_bound<S: Seminorm + ?Sized>(
    l: &S,
    dim: usize,
    samples: usize,
    seed: u64,
    mu_n: impl Fn(&CVec) -> CMat,
    nu_n: impl Fn(&CVec) -> CMat,
    extra: &[CVec],
) -> f64 {
    let elems = sampling::elements(dim, samples, seed);
    elems
        .iter()
        .chain(extra)
        .filter_map(|x| {
            let lx = l.eval(x);
            (lx > 1e-12).then(|| op_norm(&(mu_n(x) - nu_n(x))) / lx)
        })
        .fold(0.0, f64::max)
}

/// Matrix state `a ↦ V* ρ(a) V` for an isometry `V`.
pub fn matrix_state<'a>(g: &'a FiniteQuantumGroup, v: &CMat) -> impl Fn(&CVec) -> CMat + 'a {
    let v = v.clone();
    move |a: &CVec| v.adjoint() * g.rep(a) * &v
}

/// State on the truncation minimising `B(Λ, φ)`: projected subgradient descent over unit
/// vectors in `H_Λ` from the canonical state and random starts. Never worse than the
/// canonical state.
pub fn optimized_state(
    g: &FiniteQuantumGroup,
    pw: &PeterWeyl,
    t: &TruncatedSystem,
    l: &CertifiedLipNorm,
    starts: usize,
    iters: usize,
    seed: u64,
) -> Result<(SystemState, f64)> {
    let canonical = canonical_state(g, pw, t)?;
    let eps = g.counit();
    let rr = t.hilbert_dim();
    let eval = |xi: &CVec| -> Result<(f64, CVec)> {
        let s = SystemState::vector(t, xi)?;
        let d = l.solver().distance(&s.pullback(t), &eps)?;
        Ok((d.value, d.witness))
    };
    let mut rng = sampling::rng(seed);
    let mut best_state = canonical.clone();
    let mut best = truncation_bound(g, t, l, &canonical)?;
    let first = {
        let (vals, vecs) = crate::linalg::eigh(canonical.density());
        vecs.column(vals.len() - 1).into_owned()
    };
    let mut starts_list = vec![first];
    for _ in 0..starts {
        starts_list.push(sampling::unit_vector(&mut rng, rr));
    }
    for mut xi in starts_list {
        let (mut val, mut wit) = eval(&xi)?;
        let mut step = 0.5;
        for _ in 0..iters {
            let op = t.compress_matrix(&wit);
            let oxi = &op * &xi;
            let grad = &oxi - &xi * xi.dotc(&oxi);
            if grad.norm() < 1e-12 {
                break;
            }
            let mut accepted = false;
            while step > 1e-8 {
                let cand = &xi - &grad * r(step);
                let cand = &cand / r(cand.norm());
                let (v, w) = eval(&cand)?;
                if v < val - 1e-14 {
                    xi = cand;
                    val = v;
                    wit = w;
                    accepted = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if 2.0 * val < best {
            best = 2.0 * val;
            best_state = SystemState::vector(t, &xi)?;
        }
    }
    Ok((best_state, best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn point(n: usize, i: usize) -> Functional {
        Functional(basis_vec(n, i))
    }

    #[test]
    fn point_masses_on_z4() {
        let g = FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(4), Some(FiniteGroup::arc_metric(4))).unwrap();
        let l = PolyhedralSeminorm::lip_from_metric(&g).unwrap();
        let s = MkSolver::new(&g, &l).unwrap();
        let d = s.distance(&point(4, 0), &point(4, 1)).unwrap();
        assert!((d.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((d.upper - d.value).abs() < 1e-12);
        assert!(s.distance(&point(4, 2), &point(4, 2)).unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn fourier_distance_uses_cuts() {
        let s3 = FiniteGroup::symmetric3();
        let len = s3.word_length(&[1, 2]).unwrap();
        let g = FiniteQuantumGroup::group_algebra(&s3, Some(len)).unwrap();
        let l = PolyhedralSeminorm::lip_fourier(&g).unwrap();
        let s = MkSolver::new(&g, &l).unwrap();
        let states = sampling::algebra_states(&g, 8, 3);
        for w in states.windows(2) {
            let d = s.distance(&w[0], &w[1]).unwrap();
            assert!(d.upper - d.value < 1e-9, "{d:?}");
            assert!(l.eval(&d.witness) <= 1.0 + 1e-12);
            let back = s.distance(&w[1], &w[0]).unwrap();
            assert!((back.value - d.value).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_seminorm_is_kernel_error() {
        let g = FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(3), None).unwrap();
        let mut f = CVec::zeros(3);
        f[0] = r(1.0);
        f[1] = r(-1.0);
        let l = PolyhedralSeminorm::new(vec![f], vec![1.0]).unwrap();
        assert!(matches!(MkSolver::new(&g, &l), Err(Error::Kernel(_))));
    }

    #[test]
    fn criterion_examples() {
        let base = CriterionInputs { diam_x: 5.0, diam_y: 7.0, c_phi: 1.0, c_psi: 1.0, eps_x: 0.2, eps_y: 0.3 };
        assert_eq!(criterion_bound(&base).unwrap(), 0.3);
        let two = CriterionInputs { diam_x: 2.0, diam_y: 2.0, c_phi: 2.0, c_psi: 2.0, eps_x: 0.1, eps_y: 0.1 };
        assert!((criterion_bound(&two).unwrap() - 1.05).abs() < 1e-15);
        let zero = CriterionInputs { c_phi: 0.0, ..base };
        assert!(matches!(criterion_bound(&zero), Err(Error::Domain(_))));
    }

    #[test]
    fn hausdorff_of_singletons() {
        let d = |a: &f64, b: &f64| (a - b).abs();
        let est = hausdorff_estimate(&[1.0], &[4.0], |_| 4.0, |_| 1.0, d).unwrap();
        assert_eq!(est.bound, 3.0);
        assert_eq!(est.exact, 3.0);
        assert!(matches!(hausdorff_estimate(&[], &[1.0], |x| *x, |x| *x, d), Err(Error::Domain(_))));
    }

    #[test]
    fn two_point_diameter() {
        let mut d = DMatrix::zeros(2, 2);
        d[(0, 1)] = 1.0;
        d[(1, 0)] = 1.0;
        let g = FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(2), Some(d)).unwrap();
        let l = PolyhedralSeminorm::lip_from_metric(&g).unwrap();
        let b = diameter_bracket(&g, &MkSolver::new(&g, &l).unwrap(), 10, 0).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noncommutative_diameter_bracket_is_ordered() {
        let s3 = FiniteGroup::symmetric3();
        let g = FiniteQuantumGroup::group_algebra(&s3, Some(s3.word_length(&[1, 2]).unwrap())).unwrap();
        let l = PolyhedralSeminorm::lip_fourier(&g).unwrap();
        let b = diameter_bracket(&g, &MkSolver::new(&g, &l).unwrap(), 20, 1).unwrap();
        assert!(b.lower > 0.0 && b.lower <= b.upper, "{b:?}");
    }
}
