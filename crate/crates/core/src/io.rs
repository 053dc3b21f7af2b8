//! File records for Lie algebras, matrices and certificates.
//!
//! All records are JSON with scalars in the string encoding of [`Scalar`].
//! Forms use the record defined on [`Multivector`]. Indices in files are
//! 1-based.

use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::scalar::{FieldMode, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<(String, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraRecord {
    pub field: FieldMode,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketRecord>,
    /// Optional codimension-one Abelian ideal: `dim − 1` vectors in basis
    /// coordinates. Bypasses the ideal search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<Vec<Scalar>>>,
}

impl LieAlgebraRecord {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let names = g.names().to_vec();
        let brackets = g
            .nonzero_brackets()
            .into_iter()
            .map(|(i, j, v)| BracketRecord {
                i: i + 1,
                j: j + 1,
                coeffs: v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (names[k].clone(), c)).collect(),
            })
            .collect();
        LieAlgebraRecord { field: g.field(), dim: g.dim(), basis: names, brackets, ideal: g.declared_ideal().cloned() }
    }

    /// Build the algebra; structural problems are `Parse` errors, field
    /// violations and bracket conflicts are `InvalidAlgebra`. The Jacobi
    /// identity is not checked here.
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(Error::Parse(format!("basis lists {} names for dim {n}", self.basis.len())));
        }
        let index = |name: &str| {
            self.basis.iter().position(|b| b == name).ok_or_else(|| Error::Parse(format!("unknown basis name {name:?}")))
        };
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(Error::Parse(format!("bracket indices ({}, {}) out of range 1..={n}", b.i, b.j)));
            }
            let mut v = vec![Scalar::zero(); n];
            for (name, c) in &b.coeffs {
                if !self.field.admits(c) {
                    return Err(Error::InvalidAlgebra(format!("coefficient {c} is not in the {} field", self.field.as_str())));
                }
                let k = index(name)?;
                v[k] = &v[k] + c;
            }
            brackets.push((b.i - 1, b.j - 1, v));
        }
        let mut g = LieAlgebra::from_brackets(n, self.field, &brackets)?.with_names(self.basis.clone())?;
        if let Some(ideal) = &self.ideal {
            if ideal.len() + 1 != n || ideal.iter().any(|v| v.len() != n) {
                return Err(Error::Parse(format!("ideal must list {} vectors of length {n}", n.saturating_sub(1))));
            }
            g = g.with_ideal(ideal.clone());
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub field: FieldMode,
    pub rows: Vec<Vec<Scalar>>,
}

impl MatrixRecord {
    pub fn new(field: FieldMode, m: &Matrix) -> Self {
        MatrixRecord { field, rows: m.to_rows() }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.rows.len() != 6 || self.rows.iter().any(|r| r.len() != 6) {
            return Err(Error::Parse("matrix files hold 6 rows of 6 scalars".into()));
        }
        let m = Matrix::from_rows(self.rows.clone())?;
        m.check_field(self.field)?;
        Ok(m)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_lie_algebra(path: &Path) -> Result<LieAlgebra> {
    read_json::<LieAlgebraRecord>(path)?.to_algebra()
}

pub fn read_matrix(path: &Path) -> Result<(FieldMode, Matrix)> {
    let r: MatrixRecord = read_json(path)?;
    Ok((r.field, r.to_matrix()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::build_certificate;
    use crate::g2::Kind;

    #[test]
    fn lie_record_round_trip() {
        let mut f = Matrix::zeros(6, 6);
        f.set(0, 1, Scalar::one());
        f.set(2, 2, Scalar::ratio(-3, 4));
        let g = LieAlgebra::from_matrix(&f, FieldMode::Rational).unwrap();
        let rec = LieAlgebraRecord::from_algebra(&g);
        let back: LieAlgebraRecord = from_json(&to_json(&rec).unwrap()).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.to_algebra().unwrap(), g);
    }

    #[test]
    fn lie_record_rejects_bad_input() {
        let text = r#"{"field":"rational","dim":2,"basis":["a","b"],"brackets":[{"i":2,"j":1,"coeffs":[["a","1/1"]]}]}"#;
        let rec: LieAlgebraRecord = from_json(text).unwrap();
        assert!(matches!(rec.to_algebra(), Err(Error::InvalidAlgebra(_))));
        let text = r#"{"field":"rational","dim":2,"basis":["a","b"],"brackets":[{"i":1,"j":2,"coeffs":[["a","1/1+1/1*i"]]}]}"#;
        let rec: LieAlgebraRecord = from_json(text).unwrap();
        assert!(matches!(rec.to_algebra(), Err(Error::InvalidAlgebra(_))));
        let text = r#"{"field":"rational","dim":2,"basis":["a","b"],"brackets":[{"i":1,"j":2,"coeffs":[["c","1/1"]]}]}"#;
        let rec: LieAlgebraRecord = from_json(text).unwrap();
        assert!(matches!(rec.to_algebra(), Err(Error::Parse(_))));
    }

    #[test]
    fn matrix_and_certificate_round_trip() {
        let m = Matrix::identity(6).scale(&Scalar::ratio(1, 3));
        let rec = MatrixRecord::new(FieldMode::Rational, &m);
        let back: MatrixRecord = from_json(&to_json(&rec).unwrap()).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
        let cert = build_certificate(&Matrix::zeros(6, 6), Kind::G2, FieldMode::Rational).unwrap();
        let back: crate::certificate::Certificate = from_json(&to_json(&cert).unwrap()).unwrap();
        assert_eq!(back, cert);
    }
}
