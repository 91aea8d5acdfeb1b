//! Finite groups given by Cayley tables, metrics and length functions on them,
//! and generation of unitary irreducible representations.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, r, CMat, C64, ONE};

const METRIC_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Table("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Table(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Table(format!("entry {bad} in row {i} is out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Table("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::Table(format!("element {g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    if table[table[a][b]][cc] != table[a][table[b][cc]] {
                        return Err(Error::Table(format!("associativity fails at ({a}, {b}, {cc})")));
                    }
                }
            }
        }
        Ok(Self { table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table")
    }

    /// Permutations of three letters in lexicographic order, identity first.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let (s, t) = (perms[a], perms[b]);
                        idx([s[t[0]], s[t[1]], s[t[2]]])
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("S3 table")
    }

    /// Symmetries of the square: element `2k + f` is `r^k s^f`.
    pub fn dihedral4() -> Self {
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (k1, f1) = (a / 2, a % 2);
                        let (k2, f2) = (b / 2, b % 2);
                        let k = if f1 == 0 { k1 + k2 } else { k1 + 4 - k2 } % 4;
                        2 * k + (f1 ^ f2)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("D4 table")
    }

    /// Quaternion units in the order 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion8() -> Self {
        let units: [[i32; 4]; 8] = [
            [1, 0, 0, 0],
            [-1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, -1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, -1, 0],
            [0, 0, 0, 1],
            [0, 0, 0, -1],
        ];
        let mul = |p: [i32; 4], q: [i32; 4]| {
            [
                p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
                p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
                p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
                p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
            ]
        };
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| units.iter().position(|u| *u == mul(units[a], units[b])).unwrap())
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("Q8 table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Smallest-index generator if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&g| self.element_order(g) == self.order())
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> =
                (0..n).map(|k| self.mul(self.mul(k, g), self.inv(k))).collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// `δ_h ↦ δ_{gh}`.
    pub fn left_regular(&self, g: usize) -> CMat {
        let n = self.order();
        let mut m = CMat::zeros(n, n);
        for h in 0..n {
            m[(self.mul(g, h), h)] = ONE;
        }
        m
    }

    /// `δ_h ↦ δ_{hg⁻¹}`.
    pub fn right_regular(&self, g: usize) -> CMat {
        let n = self.order();
        let mut m = CMat::zeros(n, n);
        for h in 0..n {
            m[(self.mul(h, self.inv(g)), h)] = ONE;
        }
        m
    }

    /// Word length with respect to `gens` (closed under inverses by construction).
    pub fn word_length(&self, gens: &[usize]) -> Result<Vec<f64>> {
        let n = self.order();
        let mut all: Vec<usize> = gens.iter().flat_map(|&s| [s, self.inv(s)]).collect();
        all.sort_unstable();
        all.dedup();
        let mut dist = vec![usize::MAX; n];
        dist[self.identity] = 0;
        let mut frontier = vec![self.identity];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &g in &frontier {
                for &s in &all {
                    let h = self.mul(g, s);
                    if dist[h] == usize::MAX {
                        dist[h] = dist[g] + 1;
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        if dist.contains(&usize::MAX) {
            return Err(Error::Metric("generators do not generate the group".into()));
        }
        Ok(dist.into_iter().map(|d| d as f64).collect())
    }

    /// `d(g, h) = ℓ(g⁻¹h)`.
    pub fn metric_from_length(&self, length: &[f64]) -> DMatrix<f64> {
        let n = self.order();
        DMatrix::from_fn(n, n, |g, h| length[self.mul(self.inv(g), h)])
    }

    /// Shortest-arc metric on the cyclic group `Z_n` as built by [`FiniteGroup::cyclic`].
    pub fn arc_metric(n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |a, b| {
            let k = if a > b { a - b } else { b - a };
            2.0 * std::f64::consts::PI * k.min(n - k) as f64 / n as f64
        })
    }

    /// Checks the metric axioms and invariance under left and right translation.
    pub fn validate_metric(&self, d: &DMatrix<f64>) -> Result<()> {
        let n = self.order();
        if d.shape() != (n, n) {
            return Err(Error::Shape(format!("metric is {:?}, expected {n}x{n}", d.shape())));
        }
        for g in 0..n {
            if d[(g, g)].abs() > METRIC_TOL {
                return Err(Error::Metric(format!("d({g},{g}) = {} is not zero", d[(g, g)])));
            }
            for h in 0..n {
                if g != h && !(d[(g, h)] > 0.0) {
                    return Err(Error::Metric(format!("d({g},{h}) = {} is not positive", d[(g, h)])));
                }
                if (d[(g, h)] - d[(h, g)]).abs() > METRIC_TOL {
                    return Err(Error::Metric(format!("not symmetric at ({g},{h})")));
                }
                for k in 0..n {
                    if d[(g, k)] > d[(g, h)] + d[(h, k)] + METRIC_TOL {
                        return Err(Error::Metric(format!("triangle inequality fails at ({g},{h},{k})")));
                    }
                    let left = d[(self.mul(k, g), self.mul(k, h))];
                    let right = d[(self.mul(g, k), self.mul(h, k))];
                    if (left - d[(g, h)]).abs() > METRIC_TOL || (right - d[(g, h)]).abs() > METRIC_TOL {
                        return Err(Error::Metric(format!(
                            "not bi-invariant: translating ({g},{h}) by {k} changes the distance"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Length function: zero exactly at the identity, symmetric, subadditive.
    pub fn validate_length(&self, l: &[f64]) -> Result<()> {
        let n = self.order();
        if l.len() != n {
            return Err(Error::Shape(format!("length has {} entries, expected {n}", l.len())));
        }
        for g in 0..n {
            if g == self.identity {
                if l[g].abs() > METRIC_TOL {
                    return Err(Error::Metric(format!("length of the identity is {}", l[g])));
                }
                continue;
            }
            if !(l[g] > 0.0) {
                return Err(Error::Metric(format!("length of {g} is not positive")));
            }
            if (l[g] - l[self.inv(g)]).abs() > METRIC_TOL {
                return Err(Error::Metric(format!("length not symmetric at {g}")));
            }
            for h in 0..n {
                if l[self.mul(g, h)] > l[g] + l[h] + METRIC_TOL {
                    return Err(Error::Metric(format!("length not subadditive at ({g},{h})")));
                }
            }
        }
        Ok(())
    }

    /// A complete list of pairwise inequivalent unitary irreducible representations,
    /// trivial first.
    ///
    /// Cyclic groups get the characters `g^j ↦ exp(2πi jk/n)` in the order `k = 0..n`.
    /// Otherwise the regular representation is split numerically: a generic central
    /// Hermitian element separates isotypic components and a generic element of the
    /// right regular action cuts each component into irreducible copies.
    pub fn unitary_irreps(&self) -> Vec<Vec<CMat>> {
        let n = self.order();
        if let Some(gen) = self.cyclic_generator() {
            let mut power = vec![0usize; n];
            let mut x = self.identity;
            for j in 0..n {
                power[x] = j;
                x = self.mul(x, gen);
            }
            return (0..n)
                .map(|k| {
                    (0..n)
                        .map(|g| {
                            let t = 2.0 * std::f64::consts::PI * (power[g] * k % n) as f64 / n as f64;
                            CMat::from_element(1, 1, c(t.cos(), t.sin()))
                        })
                        .collect()
                })
                .collect();
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x1dea);
        let lefts: Vec<CMat> = (0..n).map(|g| self.left_regular(g)).collect();
        let rights: Vec<CMat> = (0..n).map(|g| self.right_regular(g)).collect();

        let mut central = CMat::zeros(n, n);
        for class in self.conjugacy_classes() {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let mut z = CMat::zeros(n, n);
            for &g in &class {
                z += &lefts[g];
            }
            central += (&z + z.adjoint()) * r(a) + (&z - z.adjoint()) * c(0.0, b);
        }
        let (vals, vecs) = eigh(&central);

        let mut irreps: Vec<Vec<CMat>> = Vec::new();
        for (lo, hi) in clusters(&vals) {
            let w = vecs.columns(lo, hi - lo).into_owned();
            let mut k = CMat::zeros(n, n);
            for right in &rights {
                let a: f64 = rng.gen_range(-1.0..1.0);
                let b: f64 = rng.gen_range(-1.0..1.0);
                k += (right + right.adjoint()) * r(a) + (right - right.adjoint()) * c(0.0, b);
            }
            let kw = w.adjoint() * k * &w;
            let (kv, kvecs) = eigh(&kw);
            let (s0, s1) = clusters(&kv)[0];
            let e = &w * kvecs.columns(s0, s1 - s0);
            irreps.push(lefts.iter().map(|l| e.adjoint() * l * &e).collect());
        }

        let id = self.identity;
        let key = |rep: &Vec<CMat>| -> (usize, bool, Vec<i64>) {
            let d = rep[id].nrows();
            let trivial = d == 1 && rep.iter().all(|m| (m[(0, 0)] - ONE).norm() < 1e-8);
            let chars = rep
                .iter()
                .flat_map(|m| {
                    let t: C64 = m.trace();
                    [(t.re * 1e6).round() as i64, (t.im * 1e6).round() as i64]
                })
                .collect();
            (d, !trivial, chars)
        };
        irreps.sort_by_key(key);
        irreps
    }
}

/// Index ranges of eigenvalue clusters in an ascending list.
fn clusters(vals: &[f64]) -> Vec<(usize, usize)> {
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] > 1e-7 * scale {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// Residual of the homomorphism and unitarity identities for a group representation.
pub fn representation_residual(g: &FiniteGroup, rep: &[CMat]) -> f64 {
    let n = g.order();
    let d = rep[0].nrows();
    let mut worst = 0.0f64;
    for a in 0..n {
        let u = &rep[a];
        let unit = u.adjoint() * u - CMat::identity(d, d);
        worst = worst.max(unit.iter().map(|z| z.norm()).fold(0.0, f64::max));
        for b in 0..n {
            let diff = u * &rep[b] - &rep[g.mul(a, b)];
            worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables_validate() {
        for g in [
            FiniteGroup::cyclic(5),
            FiniteGroup::symmetric3(),
            FiniteGroup::dihedral4(),
            FiniteGroup::quaternion8(),
        ] {
            assert_eq!(g.identity(), 0);
            FiniteGroup::from_table(g.table().to_vec()).unwrap();
        }
        assert!(!FiniteGroup::symmetric3().is_abelian());
        assert!(!FiniteGroup::quaternion8().is_abelian());
        assert_eq!(FiniteGroup::dihedral4().conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::quaternion8().conjugacy_classes().len(), 5);
    }

    #[test]
    fn table_errors() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroup::from_table(bad), Err(Error::Table(_))));
        let ragged = vec![vec![0, 1], vec![1]];
        assert!(FiniteGroup::from_table(ragged).is_err());
    }

    #[test]
    fn irreps_complete_and_valid() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric3(),
            FiniteGroup::dihedral4(),
            FiniteGroup::quaternion8(),
        ] {
            let irreps = g.unitary_irreps();
            let total: usize = irreps.iter().map(|p| p[0].nrows().pow(2)).sum();
            assert_eq!(total, g.order());
            for p in &irreps {
                assert!(representation_residual(&g, p) < 1e-10);
            }
            assert!(irreps[0].iter().all(|m| m.nrows() == 1 && (m[(0, 0)] - ONE).norm() < 1e-12));
        }
    }

    #[test]
    fn s3_irrep_dimensions() {
        let dims: Vec<usize> = FiniteGroup::symmetric3().unitary_irreps().iter().map(|p| p[0].nrows()).collect();
        assert_eq!(dims, vec![1, 1, 2]);
    }

    #[test]
    fn metric_validation() {
        let g = FiniteGroup::cyclic(6);
        g.validate_metric(&FiniteGroup::arc_metric(6)).unwrap();
        let mut d = FiniteGroup::arc_metric(6);
        d[(0, 1)] = 5.0;
        assert!(matches!(g.validate_metric(&d), Err(Error::Metric(_))));
    }

    #[test]
    fn transposition_metric_is_biinvariant_on_s3() {
        let g = FiniteGroup::symmetric3();
        let l = g.word_length(&[1, 2, 5]).unwrap();
        g.validate_metric(&g.metric_from_length(&l)).unwrap();
        let l2 = g.word_length(&[1, 2]).unwrap();
        assert!(g.validate_metric(&g.metric_from_length(&l2)).is_err());
        g.validate_length(&l2).unwrap();
    }
}
