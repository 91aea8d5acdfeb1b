//! Dense simplex for `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`, Bland's rule, and a
//! post-solve primal/dual certificate.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Multipliers of the inequality rows.
    pub dual: Vec<f64>,
    /// Largest of primal infeasibility, dual infeasibility and duality gap.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal,
    Unbounded,
}

/// Solves the LP from the slack basis. Returns `Error::Kernel` when unbounded.
pub fn maximize(a: &DMatrix<f64>, b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let (m, n) = a.shape();
    if b.len() != m || c.len() != n {
        return Err(Error::Shape(format!("LP with {m}x{n} matrix, {} bounds, {} costs", b.len(), c.len())));
    }
    if let Some(v) = b.iter().find(|v| **v < 0.0) {
        return Err(Error::Shape(format!("LP needs nonnegative bounds, got {v}")));
    }
    let width = n + m + 1;
    let mut tab = vec![0.0; (m + 1) * width];
    for i in 0..m {
        for j in 0..n {
            tab[i * width + j] = a[(i, j)];
        }
        tab[i * width + n + i] = 1.0;
        tab[i * width + n + m] = b[i];
    }
    // reduced costs c_j − z_j in the last row
    for j in 0..n {
        tab[m * width + j] = c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_iter = 50 * (n + m).max(10);
    let mut iter = 0;
    loop {
        iter += 1;
        if iter > max_iter {
            return Err(Error::Certification { what: "simplex iteration limit".into(), residual: f64::NAN, tol: 0.0 });
        }
        let Some(enter) = (0..n + m).find(|&j| tab[m * width + j] > PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let aij = tab[i * width + enter];
            if aij > PIVOT_EPS {
                let ratio = tab[i * width + n + m] / aij;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(p) = leave else {
            return Err(Error::Kernel("LP is unbounded; the seminorm has a kernel larger than the scalars".into()));
        };
        let piv = tab[p * width + enter];
        for j in 0..width {
            tab[p * width + j] /= piv;
        }
        for i in 0..=m {
            if i == p {
                continue;
            }
            let f = tab[i * width + enter];
            if f != 0.0 {
                for j in 0..width {
                    tab[i * width + j] -= f * tab[p * width + j];
                }
            }
        }
        basis[p] = enter;
    }

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i * width + n + m];
        }
    }
    let dual: Vec<f64> = (0..m).map(|i| -tab[m * width + n + i]).collect();
    let value: f64 = c.iter().zip(&x).map(|(c, x)| c * x).sum();
    let residual = certificate(a, b, c, &x, &dual);
    Ok(LpSolution { x, value, dual, residual })
}

/// Max of primal violation, negative duals, dual-constraint violation and gap.
pub fn certificate(a: &DMatrix<f64>, b: &[f64], c: &[f64], x: &[f64], y: &[f64]) -> f64 {
    let (m, n) = a.shape();
    let mut worst = 0.0f64;
    for i in 0..m {
        let row: f64 = (0..n).map(|j| a[(i, j)] * x[j]).sum();
        worst = worst.max(row - b[i]);
        worst = worst.max(-y[i]);
    }
    for j in 0..n {
        worst = worst.max(-x[j]);
        let col: f64 = (0..m).map(|i| a[(i, j)] * y[i]).sum();
        worst = worst.max(c[j] - col);
    }
    let primal: f64 = c.iter().zip(x).map(|(c, x)| c * x).sum();
    let dual: f64 = b.iter().zip(y).map(|(b, y)| b * y).sum();
    let scale = 1.0 + primal.abs();
    worst.max((dual - primal).abs() / scale)
}
