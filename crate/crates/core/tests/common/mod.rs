#![allow(dead_code)]

use std::f64::consts::PI;

use cqms::linalg::{CMat, C64};
use cqms::sampling;

/// Earth mover's distance between probability vectors by successive shortest paths on
/// the bipartite transport network.
pub fn transport_cost(p: &[f64], q: &[f64], d: &[Vec<f64>]) -> f64 {
    let n = p.len();
    let mut supply = p.to_vec();
    let mut demand = q.to_vec();
    // flow[i][j] on the i -> j arc; reverse residual capacity equals the flow
    let mut flow = vec![vec![0.0f64; n]; n];
    let eps = 1e-15;
    let mut total = 0.0;
    loop {
        // Bellman-Ford from a virtual source over sources 0..n and sinks n..2n
        let mut dist = vec![f64::INFINITY; 2 * n];
        let mut prev = vec![usize::MAX; 2 * n];
        for i in 0..n {
            if supply[i] > eps {
                dist[i] = 0.0;
            }
        }
        for _ in 0..2 * n {
            let mut changed = false;
            for i in 0..n {
                if dist[i].is_finite() {
                    for j in 0..n {
                        if dist[i] + d[i][j] < dist[n + j] - 1e-15 {
                            dist[n + j] = dist[i] + d[i][j];
                            prev[n + j] = i;
                            changed = true;
                        }
                    }
                }
            }
            for j in 0..n {
                if dist[n + j].is_finite() {
                    for i in 0..n {
                        if flow[i][j] > eps && dist[n + j] - d[i][j] < dist[i] - 1e-15 {
                            dist[i] = dist[n + j] - d[i][j];
                            prev[i] = n + j;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let sink = (0..n)
            .filter(|&j| demand[j] > eps && dist[n + j].is_finite())
            .min_by(|&a, &b| dist[n + a].total_cmp(&dist[n + b]));
        let Some(j) = sink else { break };
        let mut path = vec![n + j];
        let mut v = n + j;
        while prev[v] != usize::MAX {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        let start = path[0];
        let mut amount = supply[start].min(demand[j]);
        for w in path.windows(2) {
            if w[0] >= n {
                amount = amount.min(flow[w[1]][w[0] - n]);
            }
        }
        for w in path.windows(2) {
            if w[0] < n {
                flow[w[0]][w[1] - n] += amount;
                total += amount * d[w[0]][w[1] - n];
            } else {
                flow[w[1]][w[0] - n] -= amount;
                total -= amount * d[w[1]][w[0] - n];
            }
        }
        supply[start] -= amount;
        demand[j] -= amount;
    }
    total
}

/// Closed form `2 Σ_j |ξ_Λ(j)|² d(j, 0)` on `Z_n` with the arc metric and
/// `Λ_k = {−k..k} mod n`.
pub fn fejer_bound(n: usize, k: usize) -> f64 {
    let mut freqs: Vec<i64> = (-(k as i64)..=k as i64).map(|j| j.rem_euclid(n as i64)).collect();
    freqs.sort_unstable();
    freqs.dedup();
    let size = freqs.len() as f64;
    let mut total = 0.0;
    for j in 0..n {
        let mut s = C64::new(0.0, 0.0);
        for &f in &freqs {
            s += C64::from_polar(1.0, 2.0 * PI * (j as f64) * (f as f64) / n as f64);
        }
        let w = s.norm_sqr() / (n as f64 * size);
        let arc = 2.0 * PI * (j.min(n - j) as f64) / n as f64;
        total += w * arc;
    }
    2.0 * total
}

/// `max |⟨Mξ, ξ⟩|` over random unit vectors: a lower bound for the numerical radius.
pub fn sampled_numerical_radius(m: &CMat, samples: usize, seed: u64) -> f64 {
    let mut rng = sampling::rng(seed);
    let n = m.nrows();
    let mut best = 0.0f64;
    for _ in 0..samples {
        let xi = sampling::unit_vector(&mut rng, n);
        best = best.max(xi.dotc(&(m * &xi)).norm());
    }
    best
}

pub fn probability_vector(rng: &mut sampling::SeededRng, n: usize) -> Vec<f64> {
    use rand::Rng;
    let mut p: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
    if rng.gen_bool(0.3) {
        let zero = rng.gen_range(0..n);
        p[zero] = 0.0;
    }
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p
}
