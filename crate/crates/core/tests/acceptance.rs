//! Acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::time::Instant;

use cqms::compress::{
    canonical_state, cocommutation_residual, induced_coaction, isometry_residual, isometry_residual_2x2,
    liftable_states, symbol_map, Side, TruncatedSystem,
};
use cqms::corep::PeterWeyl;
use cqms::group::FiniteGroup;
use cqms::hopf::{Carrier, FiniteQuantumGroup, Functional};
use cqms::linalg::{op_norm, r, CMat, CVec};
use cqms::lipnorm::{group_case_seminorms, induced_lip, induced_lip_bi, numerical_radius_bracket, PolyhedralSeminorm, NR_TOL};
use cqms::mk::{criterion_bound, mk_distance, truncation_bound, CertifiedLipNorm, CriterionInputs};
use cqms::sampling;
use cqms::sweep::{c1_residual, frequency_chain, Context, Truncation};

type Outcome = Result<String, String>;

fn cyclic(n: usize) -> FiniteQuantumGroup {
    FiniteQuantumGroup::function_algebra(&FiniteGroup::cyclic(n), Some(FiniteGroup::arc_metric(n))).unwrap()
}

fn functions_on_s3() -> FiniteQuantumGroup {
    let s3 = FiniteGroup::symmetric3();
    let len = s3.word_length(&[1, 2, 5]).unwrap();
    FiniteQuantumGroup::function_algebra(&s3, Some(s3.metric_from_length(&len))).unwrap()
}

fn group_algebra_s3() -> FiniteQuantumGroup {
    let s3 = FiniteGroup::symmetric3();
    let len = s3.word_length(&[1, 2]).unwrap();
    FiniteQuantumGroup::group_algebra(&s3, Some(len)).unwrap()
}

fn group_algebra_z4() -> FiniteQuantumGroup {
    let z4 = FiniteGroup::cyclic(4);
    let len = z4.word_length(&[1]).unwrap();
    FiniteQuantumGroup::group_algebra(&z4, Some(len)).unwrap()
}

struct Setup {
    g: FiniteQuantumGroup,
    pw: PeterWeyl,
    lip: CertifiedLipNorm,
}

fn setup(g: FiniteQuantumGroup) -> Setup {
    let pw = PeterWeyl::new(&g, 1e-9).unwrap();
    let l = match g.carrier() {
        Carrier::GroupAlgebra(_) => PolyhedralSeminorm::lip_fourier(&g).unwrap(),
        _ => PolyhedralSeminorm::lip_from_metric(&g).unwrap(),
    };
    let lip = CertifiedLipNorm::new(&g, &l, 1e-9).unwrap();
    Setup { g, pw, lip }
}

fn prefix_chain(g: &FiniteQuantumGroup) -> Vec<Vec<usize>> {
    (1..=g.irreps().len()).map(|k| (0..k).collect()).collect()
}

fn subsets(count: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << count)).map(|m| (0..count).filter(|&i| m & (1 << i) != 0).collect()).collect()
}

fn hopf_validation() -> Outcome {
    let start = Instant::now();
    let mut groups: Vec<(String, FiniteQuantumGroup)> =
        [2, 4, 8, 12].iter().map(|&n| (format!("F(Z{n})"), cyclic(n))).collect();
    groups.push(("F(S3)".into(), functions_on_s3()));
    groups.push(("C*(S3)".into(), group_algebra_s3()));
    groups.push(("C*(Z4)".into(), group_algebra_z4()));
    let mut worst = 0.0f64;
    for (name, g) in &groups {
        let res = g.check_axioms().max_residual();
        worst = worst.max(res);
        if res >= 1e-10 {
            return Err(format!("{name}: axiom residual {res:e}"));
        }
        let pw = PeterWeyl::new(g, 1e-9).map_err(|e| format!("{name}: {e}"))?;
        let total: usize = pw.irrep_dims().iter().map(|d| d * d).sum();
        if total != g.dim() {
            return Err(format!("{name}: Σd² = {total}, dim = {}", g.dim()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 5.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!("7 algebras, max residual {worst:.1e}, {secs:.2} s"))
}

fn kadison_sandwich() -> Outcome {
    let start = Instant::now();
    let mut rng = sampling::rng(11);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..200 {
        let n = 1 + i % 12;
        let mut m = sampling::complex_gaussian_mat(&mut rng, n, n);
        match i % 5 {
            // strictly upper triangular, including weighted shifts
            1 => m = CMat::from_fn(n, n, |a, b| if b > a { m[(a, b)] } else { r(0.0) }),
            2 => m = CMat::from_fn(n, n, |a, b| if b == a + 1 { m[(a, b)] } else { r(0.0) }),
            3 => m = &m + m.adjoint(),
            _ => {}
        }
        let (lo, hi) = numerical_radius_bracket(&m, NR_TOL, None);
        let norm = op_norm(&m);
        let sampled = common::sampled_numerical_radius(&m, 200, i as u64);
        if sampled > hi + 1e-9 {
            return Err(format!("matrix {i}: sampled radius {sampled} above bracket {hi}"));
        }
        let defect = (lo - norm).max(norm - 2.0 * lo);
        worst = worst.max(defect);
        if defect > 1e-5 {
            return Err(format!("matrix {i}: w = {lo}, ‖M‖ = {norm}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!("200 matrices, worst defect {worst:.1e}, {secs:.2} s"))
}

fn coaction_certificates() -> Outcome {
    let mut count = 0;
    let mut worst = 0.0f64;
    let mut worst_iso = 0.0f64;
    for (name, g) in [("F(Z8)", cyclic(8)), ("C*(S3)", group_algebra_s3())] {
        let pw = PeterWeyl::new(&g, 1e-9).unwrap();
        for lambda in subsets(g.irreps().len()) {
            let t = TruncatedSystem::new(&g, &pw, &lambda).map_err(|e| format!("{name} {lambda:?}: {e}"))?;
            let alpha = induced_coaction(&g, &t, Side::Right, 1e-9).map_err(|e| format!("{name} {lambda:?}: {e}"))?;
            let beta = induced_coaction(&g, &t, Side::Left, 1e-9).map_err(|e| format!("{name} {lambda:?}: {e}"))?;
            for c in [&alpha, &beta] {
                let rep = c.check(&g);
                worst = worst.max(rep.max_residual());
                if rep.max_residual() >= 1e-9 || rep.fixed_point_dim != 1 {
                    return Err(format!("{name} {lambda:?} {:?}: {rep:?}", c.side()));
                }
            }
            let co = cocommutation_residual(&alpha, &beta);
            worst = worst.max(co);
            if co >= 1e-9 {
                return Err(format!("{name} {lambda:?}: cocommutation {co:e}"));
            }
            let elems = sampling::elements(g.dim(), 53, lambda.len() as u64);
            for a in &elems[..49] {
                worst_iso = worst_iso.max(isometry_residual(&g, &t, a));
            }
            let block = [[elems[49].clone(), elems[50].clone()], [elems[51].clone(), elems[52].clone()]];
            worst_iso = worst_iso.max(isometry_residual_2x2(&g, &t, &block));
            if worst_iso >= 1e-8 {
                return Err(format!("{name} {lambda:?}: isometry defect {worst_iso:e}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} truncations, max residual {worst:.1e}, isometry {worst_iso:.1e}"))
}

fn contractivity() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (name, s, chain) in chains_for_morphisms() {
        let l = s.lip.seminorm();
        for lambda in chain {
            let t = TruncatedSystem::new(&s.g, &s.pw, &lambda).unwrap();
            let alpha = induced_coaction(&s.g, &t, Side::Right, 1e-9).unwrap();
            let phi = canonical_state(&s.g, &s.pw, &t).unwrap();
            let sigma = symbol_map(&alpha, &phi);
            for a in sampling::elements(s.g.dim(), 100, 3) {
                let d = induced_lip(l, &alpha, &t, &t.compress(&a)) - l.eval(&a);
                worst = worst.max(d);
                if d > 1e-6 {
                    return Err(format!("{name} {lambda:?}: L(τa) exceeds L(a) by {d:e}"));
                }
            }
            for x in sampling::elements(t.dim(), 100, 4) {
                let d = l.eval(&(&sigma * &x)) - induced_lip(l, &alpha, &t, &x);
                worst = worst.max(d);
                if d > 1e-6 {
                    return Err(format!("{name} {lambda:?}: L(σx) exceeds L(x) by {d:e}"));
                }
            }
        }
    }
    Ok(format!("worst excess {worst:.1e}"))
}

fn chains_for_morphisms() -> Vec<(&'static str, Setup, Vec<Vec<usize>>)> {
    let z8 = setup(cyclic(8));
    let z8_chain = frequency_chain(&z8.g).unwrap();
    let s3 = setup(group_algebra_s3());
    let s3_chain = prefix_chain(&s3.g);
    vec![("F(Z8)", z8, z8_chain), ("C*(S3)", s3, s3_chain)]
}

fn slice_estimate() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut total = 0;
    for (name, s, chain) in chains_for_morphisms() {
        let l = s.lip.seminorm();
        let states = sampling::algebra_states(&s.g, 200, 5);
        let truncations: Vec<_> = chain
            .iter()
            .map(|lambda| {
                let t = TruncatedSystem::new(&s.g, &s.pw, lambda).unwrap();
                let alpha = induced_coaction(&s.g, &t, Side::Right, 1e-9).unwrap();
                (t, alpha)
            })
            .collect();
        for i in 0..100 {
            let (t, alpha) = &truncations[i % truncations.len()];
            let x = sampling::elements(t.dim(), 1, 600 + i as u64).remove(0);
            let (mu, nu) = (&states[2 * i], &states[2 * i + 1]);
            let img = alpha.apply(&x);
            let lhs = t.norm(&(&img * &mu.0 - &img * &nu.0));
            let d = mk_distance(&s.g, l, mu, nu).map_err(|e| e.to_string())?;
            let gap = lhs - 2.0 * d * induced_lip(l, alpha, t, &x);
            worst = worst.max(gap);
            total += 1;
            if gap > 1e-6 {
                return Err(format!("{name} {:?}: slice estimate violated by {gap:e}", t.lambda()));
            }
        }
    }
    Ok(format!("{total} samples, worst gap {worst:.1e}"))
}

fn bound_inequalities() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (name, s) in [("F(Z12)", setup(cyclic(12))), ("C*(S3)", setup(group_algebra_s3()))] {
        let ctx = Context::new(&s.g, &s.pw, &s.lip, 200, 0).unwrap();
        for lambda in prefix_chain(&s.g) {
            let tr = Truncation::new(&s.g, &s.pw, &lambda, 1e-9).unwrap();
            let phi = canonical_state(&s.g, &s.pw, &tr.system).unwrap();
            let b = truncation_bound(&s.g, &tr.system, &s.lip, &phi).unwrap();
            let res = c1_residual(&ctx, &tr, &phi, b, 100, 9);
            worst = worst.max(res);
            if res > 1e-8 {
                return Err(format!("{name} {lambda:?}: residual {res:e}"));
            }
        }
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn convergence_reproduction() -> Outcome {
    let start = Instant::now();
    let s = setup(cyclic(16));
    let ctx = Context::new(&s.g, &s.pw, &s.lip, 200, 0).unwrap();
    let chain = frequency_chain(&s.g).unwrap();
    let mut values = Vec::new();
    let mut radii = Vec::new();
    for (k, lambda) in chain.iter().enumerate() {
        let t = TruncatedSystem::new(&s.g, &s.pw, lambda).unwrap();
        let phi = canonical_state(&s.g, &s.pw, &t).unwrap();
        let b = truncation_bound(&s.g, &t, &s.lip, &phi).map_err(|e| e.to_string())?;
        let oracle = common::fejer_bound(16, k);
        if !b.is_finite() || (b - oracle).abs() > 1e-8 {
            return Err(format!("k = {k}: B = {b}, closed form {oracle}"));
        }
        if k < 8 && b <= 0.0 {
            return Err(format!("k = {k}: B = {b} not positive"));
        }
        let rr = criterion_bound(&CriterionInputs {
            diam_x: ctx.diam_a.upper,
            diam_y: ctx.diam_a.upper + 2.0 * b,
            c_phi: 1.0,
            c_psi: 1.0,
            eps_x: b,
            eps_y: b,
        })
        .map_err(|e| e.to_string())?;
        values.push(b);
        radii.push(rr);
    }
    if values[8].abs() > 1e-8 || radii[8].abs() > 1e-8 {
        return Err(format!("B(Λ_8) = {}, r(Λ_8) = {}", values[8], radii[8]));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.2} s"));
    }
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    Ok(format!("B = [{}], {secs:.2} s", shown.join(", ")))
}

fn translation_sandwich() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (name, s) in [("F(Z8)", setup(cyclic(8))), ("F(S3)", setup(functions_on_s3()))] {
        let l = s.lip.seminorm();
        let chain = prefix_chain(&s.g);
        for i in 0..100 {
            let lambda = &chain[i % chain.len()];
            let tr = Truncation::new(&s.g, &s.pw, lambda, 1e-9).unwrap();
            let x = sampling::elements(tr.system.dim(), 1, 100 + i as u64).remove(0);
            let lip = induced_lip_bi(l, &tr.alpha, &tr.beta, &tr.system, &x);
            let both = group_case_seminorms(&s.g, &s.pw, &tr.system, &x).map_err(|e| e.to_string())?.both();
            let gap = (0.5 * both - lip).max(lip - both);
            worst = worst.max(gap);
            if gap > 1e-5 {
                return Err(format!("{name} {lambda:?}: L = {lip}, ‖x‖_λρ = {both}"));
            }
        }
    }
    Ok(format!("200 elements, worst gap {worst:.1e}"))
}

fn liftable_density() -> Outcome {
    let s = setup(cyclic(8));
    let chain = frequency_chain(&s.g).unwrap();
    let solver = s.lip.solver();
    let targets = sampling::algebra_states(&s.g, 10, 21);
    let mut finals = Vec::new();
    for (m, mu) in targets.iter().enumerate() {
        let mut prev = f64::INFINITY;
        let mut carried: Option<Functional> = None;
        for lambda in &chain {
            let t = TruncatedSystem::new(&s.g, &s.pw, lambda).unwrap();
            let phi = canonical_state(&s.g, &s.pw, &t).unwrap().pullback(&t);
            let mut candidates: Vec<Functional> =
                liftable_states(&s.g, &s.pw, &t, 498, 40 + m as u64).iter().map(|x| x.pullback(&t)).collect();
            candidates.push(s.g.convolve(mu, &phi));
            // the previous optimum must factor through this larger truncation as well
            if let Some(psi) = carried.take() {
                let leak = t.kernel().column_iter().map(|z| psi.0.dot(&z).norm()).fold(0.0, f64::max);
                if leak > 1e-9 {
                    return Err(format!("state {m}, {lambda:?}: earlier optimum not liftable ({leak:e})"));
                }
                candidates.push(psi);
            }
            let mut best = (f64::INFINITY, 0);
            for (i, c) in candidates.iter().enumerate() {
                let d = solver.distance(mu, c).map_err(|e| e.to_string())?.value;
                if d < best.0 {
                    best = (d, i);
                }
            }
            if best.0 > prev + 1e-9 {
                return Err(format!("state {m}, {lambda:?}: {} after {prev}", best.0));
            }
            prev = best.0;
            carried = Some(candidates.swap_remove(best.1));
        }
        if prev >= 1e-6 {
            return Err(format!("state {m}: {prev} at full Λ"));
        }
        finals.push(prev);
    }
    let worst = finals.iter().cloned().fold(0.0, f64::max);
    Ok(format!("10 states, max distance at full Λ {worst:.1e}"))
}

fn lp_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for (name, g) in [("F(Z8)", cyclic(8)), ("F(S3)", functions_on_s3())] {
        let l = PolyhedralSeminorm::lip_from_metric(&g).unwrap();
        let d = g.metric().unwrap();
        let n = g.dim();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| d[(i, j)]).collect()).collect();
        let mut rng = sampling::rng(77);
        for k in 0..50 {
            let p = common::probability_vector(&mut rng, n);
            let q = common::probability_vector(&mut rng, n);
            let as_functional = |v: &[f64]| Functional(CVec::from_iterator(n, v.iter().map(|&x| r(x))));
            let lp = mk_distance(&g, &l, &as_functional(&p), &as_functional(&q)).map_err(|e| e.to_string())?;
            let ot = common::transport_cost(&p, &q, &rows);
            worst = worst.max((lp - ot).abs());
            if (lp - ot).abs() > 1e-8 {
                return Err(format!("{name} pair {k}: LP {lp}, transport {ot}"));
            }
        }
    }
    Ok(format!("100 pairs, max difference {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("hopf validation", hopf_validation),
        ("kadison sandwich", kadison_sandwich),
        ("induced coaction certificates", coaction_certificates),
        ("morphism contractivity", contractivity),
        ("slice estimate", slice_estimate),
        ("bound inequalities", bound_inequalities),
        ("convergence on Z16", convergence_reproduction),
        ("translation sandwich", translation_sandwich),
        ("liftable state density", liftable_density),
        ("transport oracle", lp_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
