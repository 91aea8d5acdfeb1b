//! JSON input files: finite groups (with optional metric, length and irreducibles),
//! general finite quantum groups, and custom seminorm families.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::corep::Corepresentation;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hopf::{FiniteQuantumGroup, HopfData};
use crate::linalg::{c, CMat, CVec, C64};
use crate::lipnorm::PolyhedralSeminorm;

/// A complex number written either as a real number or as `[re, im]`.
#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Pair([f64; 2]),
}

impl Num {
    pub fn value(self) -> C64 {
        match self {
            Num::Real(x) => c(x, 0.0),
            Num::Pair([x, y]) => c(x, y),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    /// Functions on the group.
    Function,
    /// The group algebra.
    Group,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepFile {
    pub dim: usize,
    /// `d x d` array of coefficient vectors of the entries `u_ij`.
    #[serde(rename = "matrices_over_A")]
    pub matrices_over_a: Vec<Vec<Vec<Num>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub mult_table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<IrrepFile>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumGroupFile {
    pub dim: usize,
    /// `mult[i][j]` are the coefficients of `e_i e_j`.
    pub mult: Vec<Vec<Vec<Num>>>,
    /// `comult[i][j][k]` is the coefficient of `e_j ⊗ e_k` in `Δ(e_i)`.
    pub comult: Vec<Vec<Vec<Num>>>,
    pub unit: Vec<Num>,
    pub star: Vec<Vec<Num>>,
    pub counit: Vec<Num>,
    pub antipode: Vec<Vec<Num>>,
    pub rep: Vec<Vec<Vec<Num>>>,
    #[serde(default)]
    pub irreps: Option<Vec<IrrepFile>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub functionals: Vec<Vec<Num>>,
    pub constants: Vec<f64>,
}

/// A parsed input file.
#[derive(Clone, Debug)]
pub enum Input {
    Group(GroupFile),
    Quantum(QuantumGroupFile),
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), strip_position(&e))))
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(k) => s[..k].to_string(),
        None => s,
    }
}

/// Parses an input file, telling groups from quantum groups by their keys.
pub fn parse_input(text: &str) -> Result<Input> {
    let value: serde_json::Value = parse(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("line 1, column 1: expected a JSON object".into()))?;
    if obj.contains_key("mult_table") {
        Ok(Input::Group(parse(text)?))
    } else if obj.contains_key("dim") {
        Ok(Input::Quantum(parse(text)?))
    } else {
        Err(Error::Parse("expected a group file (\"mult_table\") or a quantum-group file (\"dim\")".into()))
    }
}

pub fn read_input(path: &std::path::Path) -> Result<Input> {
    let text = std::fs::read_to_string(path)?;
    parse_input(&text)
}

fn vector(v: &[Num], n: usize, what: &str) -> Result<CVec> {
    if v.len() != n {
        return Err(Error::Shape(format!("{what} has length {}, expected {n}", v.len())));
    }
    Ok(CVec::from_iterator(n, v.iter().map(|x| x.value())))
}

fn matrix(m: &[Vec<Num>], rows: usize, cols: usize, what: &str) -> Result<CMat> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("{what} must be {rows}x{cols}")));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| m[i][j].value()))
}

fn irreps(list: &[IrrepFile], n: usize) -> Result<Vec<Corepresentation>> {
    list.iter()
        .enumerate()
        .map(|(k, u)| {
            let d = u.dim;
            if u.matrices_over_a.len() != d || u.matrices_over_a.iter().any(|row| row.len() != d) {
                return Err(Error::Shape(format!("irrep {k} must be a {d}x{d} array")));
            }
            let entries = u
                .matrices_over_a
                .iter()
                .flatten()
                .map(|e| vector(e, n, &format!("entry of irrep {k}")))
                .collect::<Result<Vec<_>>>()?;
            Corepresentation::new(d, entries)
        })
        .collect()
}

impl GroupFile {
    pub fn group(&self) -> Result<FiniteGroup> {
        if self.mult_table.len() != self.order {
            return Err(Error::Table(format!(
                "order {} but the table has {} rows",
                self.order,
                self.mult_table.len()
            )));
        }
        FiniteGroup::from_table(self.mult_table.clone())
    }

    pub fn metric_matrix(&self) -> Result<Option<DMatrix<f64>>> {
        self.metric
            .as_ref()
            .map(|m| {
                let n = self.order;
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(Error::Shape(format!("metric must be {n}x{n}")));
                }
                Ok(DMatrix::from_fn(n, n, |i, j| m[i][j]))
            })
            .transpose()
    }

    /// Builds `F(G)` or `C*(G)`; the `algebra` field wins over `default`.
    pub fn build(&self, default: AlgebraKind) -> Result<FiniteQuantumGroup> {
        let group = self.group()?;
        let mut g = match self.algebra.unwrap_or(default) {
            AlgebraKind::Function => FiniteQuantumGroup::function_algebra(&group, self.metric_matrix()?)?,
            AlgebraKind::Group => FiniteQuantumGroup::group_algebra(&group, self.length.clone())?,
        };
        if let Some(list) = &self.irreps {
            g.set_irreps(irreps(list, g.dim())?);
        }
        Ok(g)
    }

    pub fn from_group(group: &FiniteGroup) -> Self {
        Self {
            order: group.order(),
            mult_table: group.table().to_vec(),
            metric: None,
            length: None,
            algebra: None,
            irreps: None,
        }
    }
}

impl QuantumGroupFile {
    pub fn build(&self) -> Result<FiniteQuantumGroup> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Shape("dim must be positive".into()));
        }
        if self.mult.len() != n || self.mult.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("mult must be {n}x{n}x{n}")));
        }
        let mult = self
            .mult
            .iter()
            .flatten()
            .map(|v| vector(v, n, "mult entry"))
            .collect::<Result<Vec<_>>>()?;
        if self.comult.len() != n {
            return Err(Error::Shape(format!("comult must list {n} matrices")));
        }
        let comult = self
            .comult
            .iter()
            .map(|m| matrix(m, n, n, "comult entry"))
            .collect::<Result<Vec<_>>>()?;
        let d0 = self.rep.first().map(|m| m.len()).unwrap_or(0);
        if self.rep.len() != n {
            return Err(Error::Shape(format!("rep must list {n} matrices")));
        }
        let rep = self
            .rep
            .iter()
            .map(|m| matrix(m, d0, d0, "rep matrix"))
            .collect::<Result<Vec<_>>>()?;
        let data = HopfData {
            mult,
            unit: vector(&self.unit, n, "unit")?,
            star: matrix(&self.star, n, n, "star")?,
            comult,
            counit: vector(&self.counit, n, "counit")?,
            antipode: matrix(&self.antipode, n, n, "antipode")?,
            rep,
            irreps: match &self.irreps {
                Some(list) => irreps(list, n)?,
                None => Vec::new(),
            },
        };
        FiniteQuantumGroup::from_parts(data)
    }

    /// Structure tensors of an existing quantum group.
    pub fn from_quantum_group(g: &FiniteQuantumGroup) -> Self {
        let n = g.dim();
        let num = |z: C64| if z.im == 0.0 { Num::Real(z.re) } else { Num::Pair([z.re, z.im]) };
        let vec = |v: &CVec| v.iter().map(|z| num(*z)).collect::<Vec<_>>();
        let mat = |m: &CMat| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| num(m[(i, j)])).collect()).collect::<Vec<_>>();
        let sc = g.structure_constants();
        Self {
            dim: n,
            mult: (0..n).map(|i| (0..n).map(|j| vec(&sc[i * n + j])).collect()).collect(),
            comult: g.comult_basis().iter().map(mat).collect(),
            unit: vec(g.unit()),
            star: mat(g.star_matrix()),
            counit: vec(&g.counit().0),
            antipode: mat(g.antipode_matrix()),
            rep: g.rep_basis().iter().map(mat).collect(),
            irreps: Some(
                g.irreps()
                    .iter()
                    .map(|u| {
                        let d = u.dim();
                        IrrepFile {
                            dim: d,
                            matrices_over_a: (0..d).map(|i| (0..d).map(|j| vec(u.entry(i, j))).collect()).collect(),
                        }
                    })
                    .collect(),
            ),
        }
    }
}

impl Input {
    pub fn build(&self, default: AlgebraKind) -> Result<FiniteQuantumGroup> {
        match self {
            Input::Group(f) => f.build(default),
            Input::Quantum(f) => f.build(),
        }
    }
}

impl FamilyFile {
    pub fn seminorm(&self, n: usize) -> Result<PolyhedralSeminorm> {
        let functionals = self
            .functionals
            .iter()
            .map(|f| vector(f, n, "functional"))
            .collect::<Result<Vec<_>>>()?;
        PolyhedralSeminorm::new(functionals, self.constants.clone())
    }
}

pub fn read_family(path: &std::path::Path) -> Result<FamilyFile> {
    parse(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_file_round_trip() {
        let mut f = GroupFile::from_group(&FiniteGroup::cyclic(4));
        f.metric = Some((0..4).map(|i| (0..4).map(|j| FiniteGroup::arc_metric(4)[(i, j)]).collect()).collect());
        let text = serde_json::to_string(&f).unwrap();
        let g = parse_input(&text).unwrap().build(AlgebraKind::Function).unwrap();
        assert_eq!(g.dim(), 4);
        assert!((g.metric().unwrap()[(0, 2)] - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn quantum_file_round_trip() {
        let g = FiniteQuantumGroup::group_algebra(&FiniteGroup::symmetric3(), None).unwrap();
        let text = serde_json::to_string(&QuantumGroupFile::from_quantum_group(&g)).unwrap();
        let h = parse_input(&text).unwrap().build(AlgebraKind::Function).unwrap();
        assert!(h.check_axioms().passed(1e-12));
        assert_eq!(h.irreps().len(), 6);
        assert!((h.haar().0 - g.haar().0).norm() < 1e-14);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_input("{\n  \"order\": 2,\n  \"mult_table\": [[0, 1], [1 0]]\n}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.starts_with("line 3, column"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(matches!(parse_input("{\"order\": 1, \"mult_table\": [[0]], \"colour\": 3}"), Err(Error::Parse(_))));
    }
}
