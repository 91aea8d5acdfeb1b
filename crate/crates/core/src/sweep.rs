//! One truncation analysed end to end, and chains of truncations.

use std::time::Instant;

use crate::compress::{
    canonical_state, induced_coaction, liftable_states, symbol_map, InducedCoaction, Side, SystemState,
    TruncatedSystem,
};
use crate::corep::PeterWeyl;
use crate::error::{Error, Result};
use crate::hopf::{Carrier, FiniteQuantumGroup};
use crate::linalg::{r, CVec};
use crate::lipnorm::{induced_lip, induced_lip_bi, LipValueBracket};
use crate::mk::{admissible_sum_lipnorm, criterion_bound, optimized_state, truncation_bound, CertifiedLipNorm, CriterionInputs};
use crate::sampling;

#[derive(Clone, Debug, PartialEq)]
pub enum StateChoice {
    Canonical,
    Optimized,
    /// Vector state at a vector of `H_Λ`, normalised on use.
    Explicit(CVec),
}

#[derive(Clone, Debug)]
pub struct RowConfig {
    pub state: StateChoice,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub lambda: Vec<usize>,
    pub dim_sys: usize,
    pub bound_b: f64,
    pub criterion_r: f64,
    pub diam_lower: f64,
    pub diam_upper: f64,
    pub c1_max_residual: f64,
    pub n1_lower: f64,
    pub n2_lower: f64,
    pub runtime_ms: u128,
}

impl Row {
    pub const HEADER: &'static str = "lambda_id,dim_sys,bound_B,criterion_r,diam_lower,diam_upper,c1_max_residual,n1_hausdorff_lower,n2_hausdorff_lower,runtime_ms";

    pub fn lambda_id(&self) -> String {
        self.lambda.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";")
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.6e},{:.12e},{:.12e},{}",
            self.lambda_id(),
            self.dim_sys,
            self.bound_b,
            self.criterion_r,
            self.diam_lower,
            self.diam_upper,
            self.c1_max_residual,
            self.n1_lower,
            self.n2_lower,
            self.runtime_ms
        )
    }
}

/// Everything that does not depend on the truncation.
pub struct Context<'a> {
    pub g: &'a FiniteQuantumGroup,
    pub pw: &'a PeterWeyl,
    pub lip: &'a CertifiedLipNorm,
    pub diam_a: LipValueBracket,
}

impl<'a> Context<'a> {
    pub fn new(g: &'a FiniteQuantumGroup, pw: &'a PeterWeyl, lip: &'a CertifiedLipNorm, samples: usize, seed: u64) -> Result<Self> {
        let diam_a = crate::mk::diameter_bracket(g, lip.solver(), samples, seed)?;
        Ok(Self { g, pw, lip, diam_a })
    }
}

/// Truncation with both coactions, certified to `tol`.
pub struct Truncation {
    pub system: TruncatedSystem,
    pub alpha: InducedCoaction,
    pub beta: InducedCoaction,
}

impl Truncation {
    pub fn new(g: &FiniteQuantumGroup, pw: &PeterWeyl, lambda: &[usize], tol: f64) -> Result<Self> {
        let system = TruncatedSystem::new(g, pw, lambda)?;
        let alpha = induced_coaction(g, &system, Side::Right, tol)?;
        let beta = induced_coaction(g, &system, Side::Left, tol)?;
        for c in [&alpha, &beta] {
            let rep = c.check(g);
            if rep.max_residual() > tol {
                return Err(Error::cert("induced coaction identities", rep.max_residual(), tol));
            }
        }
        Ok(Self { system, alpha, beta })
    }
}

pub fn choose_state(
    ctx: &Context,
    tr: &Truncation,
    choice: &StateChoice,
    seed: u64,
) -> Result<(SystemState, f64)> {
    let t = &tr.system;
    match choice {
        StateChoice::Canonical => {
            let s = canonical_state(ctx.g, ctx.pw, t)?;
            let b = truncation_bound(ctx.g, t, ctx.lip, &s)?;
            Ok((s, b))
        }
        StateChoice::Optimized => optimized_state(ctx.g, ctx.pw, t, ctx.lip, 3, 25, seed),
        StateChoice::Explicit(v) => {
            if v.len() != t.hilbert_dim() {
                return Err(Error::Config(format!(
                    "explicit state vector has length {}, the truncation has dimension {}",
                    v.len(),
                    t.hilbert_dim()
                )));
            }
            let s = SystemState::vector(t, v)?;
            let b = truncation_bound(ctx.g, t, ctx.lip, &s)?;
            Ok((s, b))
        }
    }
}

/// Largest residual of the two bound inequalities over sampled elements:
/// `‖σ^φτ(a) − a‖ − B·L_A(a)` and `‖τσ^φ(x) − x‖ − B·L^β(x)`.
pub fn c1_residual(ctx: &Context, tr: &Truncation, phi: &SystemState, b: f64, samples: usize, seed: u64) -> f64 {
    let g = ctx.g;
    let t = &tr.system;
    let l = ctx.lip.seminorm();
    let sigma = symbol_map(&tr.alpha, phi);
    let mut worst = f64::NEG_INFINITY;
    for a in sampling::elements(g.dim(), samples, seed) {
        let back = &sigma * t.compress(&a);
        worst = worst.max(g.norm(&(back - &a)) - b * l.eval(&a));
    }
    for x in sampling::elements(t.dim(), samples, seed.wrapping_add(1)) {
        let there = t.compress(&(&sigma * &x));
        worst = worst.max(t.norm(&(there - &x)) - b * induced_lip(l, &tr.beta, t, &x));
    }
    worst
}

/// Sampled lower bounds for `sup_μ d^{L,n}(μ, Ψ*μ)` (n = 1, 2) in the admissible
/// Lip-norm on `A ⊕ A^(Λ)` with `Φ = τ`, `Ψ = σ^φ` and bridge constant `r`.
pub fn bridge_lower_bounds(
    ctx: &Context,
    tr: &Truncation,
    phi: &SystemState,
    r_bridge: f64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if r_bridge <= 1e-12 {
        return Ok((0.0, 0.0));
    }
    let g = ctx.g;
    let t = &tr.system;
    let l = ctx.lip.seminorm();
    let sigma = symbol_map(&tr.alpha, phi);
    let l_x = |a: &CVec| l.eval(a);
    let l_y = |y: &CVec| induced_lip_bi(l, &tr.alpha, &tr.beta, t, y);
    let norm_x = |a: &CVec| g.norm(a);
    let norm_y = |y: &CVec| t.norm(y);
    let phi_map = |a: &CVec| t.compress(a);
    let psi_map = |y: &CVec| &sigma * y;
    let adm = admissible_sum_lipnorm(&l_x, &l_y, &norm_x, &norm_y, &phi_map, &psi_map, r_bridge)?;

    let mut rng = sampling::rng(seed);
    let d0 = g.rep_dim();
    let count = (samples / 8).max(4);
    let states1: Vec<_> = sampling::algebra_states(g, 4, seed);
    let isos: Vec<_> = (0..3).map(|_| sampling::isometry(&mut rng, d0, 2.min(d0))).collect();
    let mut n1 = 0.0f64;
    let mut n2 = 0.0f64;
    for (i, a) in sampling::elements(g.dim(), count, seed.wrapping_add(7)).into_iter().enumerate() {
        let a = (&a + g.star(&a)) * r(0.5);
        let y = if i % 2 == 0 { t.compress(&a) } else { sampling::elements(t.dim(), 1, seed + i as u64).remove(0) };
        let lv = adm.eval(&a, &y);
        if lv < 1e-12 {
            continue;
        }
        let diff = &a - &sigma * &y;
        for mu in &states1 {
            n1 = n1.max(mu.eval(&diff).norm() / lv);
        }
        for v in &isos {
            let m = v.adjoint() * g.rep(&diff) * v;
            n2 = n2.max(crate::linalg::op_norm(&m) / lv);
        }
    }
    Ok((n1, n2))
}

/// Lower bound for the diameter of the truncation from pulled-back liftable states.
pub fn truncation_diameter_lower(ctx: &Context, tr: &Truncation, samples: usize, seed: u64) -> Result<f64> {
    let t = &tr.system;
    let states = liftable_states(ctx.g, ctx.pw, t, samples.max(2), seed);
    let pulled: Vec<_> = states.iter().map(|s| s.pullback(t)).collect();
    let head = pulled.len().min(ctx.g.dim()).min(12);
    let mut best = 0.0f64;
    for i in 0..head {
        for j in i + 1..head {
            best = best.max(ctx.lip.solver().distance(&pulled[i], &pulled[j])?.value);
        }
    }
    for w in pulled[head..].windows(2) {
        best = best.max(ctx.lip.solver().distance(&w[0], &w[1])?.value);
    }
    Ok(best)
}

pub fn analyse(ctx: &Context, lambda: &[usize], cfg: &RowConfig) -> Result<Row> {
    let start = Instant::now();
    let tr = Truncation::new(ctx.g, ctx.pw, lambda, cfg.tol)?;
    let (phi, b) = choose_state(ctx, &tr, &cfg.state, cfg.seed)?;
    let criterion_r = criterion_bound(&CriterionInputs {
        diam_x: ctx.diam_a.upper,
        diam_y: ctx.diam_a.upper + 2.0 * b,
        c_phi: 1.0,
        c_psi: 1.0,
        eps_x: b,
        eps_y: b,
    })?;
    let diam_lower = truncation_diameter_lower(ctx, &tr, cfg.samples, cfg.seed)?;
    let c1 = c1_residual(ctx, &tr, &phi, b, cfg.samples.min(100), cfg.seed);
    let (n1, n2) = bridge_lower_bounds(ctx, &tr, &phi, criterion_r, cfg.samples, cfg.seed)?;
    Ok(Row {
        lambda: lambda.to_vec(),
        dim_sys: tr.system.dim(),
        bound_b: b,
        criterion_r,
        diam_lower,
        diam_upper: ctx.diam_a.upper + 2.0 * b,
        c1_max_residual: c1,
        n1_lower: n1,
        n2_lower: n2,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Parses `all` or a comma separated list of irrep indices.
pub fn parse_lambda(spec: &str, count: usize) -> Result<Vec<usize>> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok((0..count).collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad irrep index {s:?} in {spec:?}")))
        })
        .collect()
}

/// `prefix`, `frequency` (cyclic groups), or explicit subsets separated by `;`.
pub fn parse_chain(spec: &str, g: &FiniteQuantumGroup) -> Result<Vec<Vec<usize>>> {
    let count = g.irreps().len();
    let chain: Vec<Vec<usize>> = match spec.trim() {
        "prefix" => (1..=count).map(|k| (0..k).collect()).collect(),
        "frequency" => frequency_chain(g)?,
        other => other.split(';').map(|s| parse_lambda(s, count)).collect::<Result<_>>()?,
    };
    validate_chain(&chain, count)?;
    Ok(chain)
}

/// `Λ_k = {χ_j : j ≡ −k..k mod n}` for `k = 0..⌊n/2⌋` on functions on `Z_n`.
pub fn frequency_chain(g: &FiniteQuantumGroup) -> Result<Vec<Vec<usize>>> {
    let group = match g.carrier() {
        Carrier::Function(group) if group.cyclic_generator() == Some(1) && g.irreps().len() == group.order() => group,
        _ => return Err(Error::Config("the frequency chain needs functions on a cyclic group Z_n".into())),
    };
    let n = group.order();
    Ok((0..=n / 2)
        .map(|k| {
            let mut s: Vec<usize> = (0..=k).flat_map(|j| [j % n, (n - j) % n]).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect())
}

pub fn validate_chain(chain: &[Vec<usize>], count: usize) -> Result<()> {
    if chain.is_empty() {
        return Err(Error::Config("empty chain".into()));
    }
    for (i, s) in chain.iter().enumerate() {
        if s.is_empty() || s.iter().any(|&k| k >= count) {
            return Err(Error::Config(format!("chain entry {i} is empty or out of range")));
        }
        if i > 0 {
            let prev = &chain[i - 1];
            if !prev.iter().all(|k| s.contains(k)) || s.len() <= prev.len() {
                return Err(Error::Config(format!("chain is not increasing at entry {i}")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn frequency_chain_on_z8() {
        let g = FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(8), None).unwrap();
        let chain = frequency_chain(&g).unwrap();
        assert_eq!(chain.len(), 5);
        assert_eq!(chain[1], vec![0, 1, 7]);
        assert_eq!(chain[4], (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn chain_must_increase() {
        let g = FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(4), None).unwrap();
        assert!(matches!(parse_chain("0,1;0", &g), Err(Error::Config(_))));
        assert!(matches!(parse_chain("0;1", &g), Err(Error::Config(_))));
        assert_eq!(parse_chain("0;0,1,3;all", &g).unwrap().len(), 3);
    }
}
