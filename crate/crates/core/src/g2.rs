//! Standard G₂, G₂* and complex G₂ forms, the induced bilinear form of a
//! three-form, recognition by signature, and Hodge stars.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{blades, Multivector, Variance, Volume};
use crate::matrix::{Matrix, Signature};
use crate::scalar::Scalar;

/// The three structure types handled by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "G2")]
    G2,
    #[serde(rename = "G2STAR")]
    G2Star,
    #[serde(rename = "G2C")]
    G2C,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::G2 => "G2",
            Kind::G2Star => "G2STAR",
            Kind::G2C => "G2C",
        }
    }

    /// The sign in the Hodge-dual pattern of the standard structure.
    pub fn default_epsilon(self) -> i8 {
        match self {
            Kind::G2 | Kind::G2C => 1,
            Kind::G2Star => -1,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G2" => Ok(Kind::G2),
            "G2STAR" | "G2*" => Ok(Kind::G2Star),
            "G2C" => Ok(Kind::G2C),
            _ => Err(Error::Parse(format!("unknown structure kind `{s}`"))),
        }
    }
}

/// Result of recognizing a three-form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "G2")]
    G2,
    #[serde(rename = "G2STAR")]
    G2Star,
    #[serde(rename = "G2C")]
    G2C,
    #[serde(rename = "NONE")]
    None,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::G2 => "G2",
            Classification::G2Star => "G2STAR",
            Classification::G2C => "G2C",
            Classification::None => "NONE",
        })
    }
}

/// A standard structure: its kind and the sign `ε` of its Hodge-dual pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StandardFormSpec {
    pub kind: Kind,
    pub epsilon: i8,
}

impl StandardFormSpec {
    pub fn new(kind: Kind, epsilon: i8) -> Result<Self> {
        let ok = match kind {
            Kind::G2 => epsilon == 1,
            Kind::G2Star => epsilon == -1,
            Kind::G2C => epsilon == 1 || epsilon == -1,
        };
        if !ok {
            return Err(Error::Unsupported(format!("epsilon {epsilon} is not admissible for {kind}")));
        }
        Ok(StandardFormSpec { kind, epsilon })
    }

    pub fn of(kind: Kind) -> Self {
        StandardFormSpec { kind, epsilon: kind.default_epsilon() }
    }
}

const G2_THREE: [(&[usize], i64); 7] = [
    (&[1, 2, 7], 1),
    (&[3, 4, 7], 1),
    (&[5, 6, 7], 1),
    (&[1, 3, 5], 1),
    (&[1, 4, 6], -1),
    (&[2, 3, 6], -1),
    (&[2, 4, 5], -1),
];

const G2STAR_THREE: [(&[usize], i64); 7] = [
    (&[1, 2, 7], -1),
    (&[3, 4, 7], -1),
    (&[5, 6, 7], 1),
    (&[1, 3, 5], 1),
    (&[1, 4, 6], -1),
    (&[2, 3, 6], -1),
    (&[2, 4, 5], -1),
];

/// Standard three-form in the canonical basis. For `G2C` with `ε = −1` the
/// split pattern is used (the two real forms share one complex orbit).
pub fn standard_three_form(spec: StandardFormSpec) -> Multivector {
    let terms: &[(&[usize], i64)] = if spec.epsilon > 0 { &G2_THREE } else { &G2STAR_THREE };
    Multivector::from_int_terms(7, Variance::Form, terms)
}

/// Companion volume of a standard structure: `e^{1…7}` in all cases.
pub fn standard_volume() -> Volume {
    Volume::standard(7, Variance::Form)
}

/// `ε(e^{1256}+e^{3456}) + e^{1234} − e^{2467} + e^{2357} + e^{1457} + e^{1367}`.
pub fn hodge_dual_pattern(epsilon: i8) -> Multivector {
    let e = epsilon as i64;
    Multivector::from_int_terms(
        7,
        Variance::Form,
        &[
            (&[1, 2, 5, 6], e),
            (&[3, 4, 5, 6], e),
            (&[1, 2, 3, 4], 1),
            (&[2, 4, 6, 7], -1),
            (&[2, 3, 5, 7], 1),
            (&[1, 4, 5, 7], 1),
            (&[1, 3, 6, 7], 1),
        ],
    )
}

pub fn standard_hodge_dual(spec: StandardFormSpec) -> Multivector {
    hodge_dual_pattern(spec.epsilon)
}

/// Gram matrix of `(v⌟φ)∧(w⌟φ)∧φ = 6·gram[v][w]·ref_vol` in the canonical basis.
pub fn induced_bilinear(phi: &Multivector, ref_vol: &Volume) -> Result<Matrix> {
    if phi.dim() != 7 || phi.grade() != 3 || phi.variance() != Variance::Form {
        return Err(Error::Dimension("induced_bilinear needs a three-form in dimension 7".into()));
    }
    let denom = &ref_vol.coeff() * &Scalar::from_i64(6);
    let contractions: Vec<Multivector> =
        (0..7).map(|i| phi.contract(&Multivector::basis(7, Variance::Vector, &[i]))).collect();
    let mut g = Matrix::zeros(7, 7);
    for v in 0..7 {
        let vphi = contractions[v].wedge(phi);
        for w in v..7 {
            let top = vphi.wedge(&contractions[w]).top_coeff();
            let val = &top / &denom;
            g.set(v, w, val.clone());
            g.set(w, v, val);
        }
    }
    Ok(g)
}

/// Recognize a three-form: by signature in real mode, by nondegeneracy in
/// complex mode (`complex = true`, or any non-real coefficient).
pub fn classify_three_form(phi: &Multivector, complex: bool) -> Result<Classification> {
    let g = induced_bilinear(phi, &standard_volume())?;
    if complex || !phi.is_real() {
        return Ok(if g.det().is_zero() { Classification::None } else { Classification::G2C });
    }
    Ok(match g.signature()? {
        Signature { positive: 7, .. } | Signature { negative: 7, .. } => Classification::G2,
        Signature { positive: 3, negative: 4, .. } | Signature { positive: 4, negative: 3, .. } => Classification::G2Star,
        _ => Classification::None,
    })
}

/// Hodge star of `psi` for the metric with Gram matrix `gram` (on vectors,
/// canonical basis) and metric volume `vol`, from the defining identity
/// `ψ ∧ β = g(★ψ, β) vol`:
/// `(★ψ)_L = Σ_J det(gram[L,J]) · top(ψ ∧ e^J) / vol`.
pub fn hodge_star(psi: &Multivector, gram: &Matrix, vol: &Volume) -> Result<Multivector> {
    let n = psi.dim();
    if gram.rows() != n || vol.dim() != n || psi.variance() != Variance::Form {
        return Err(Error::Dimension("hodge_star: inconsistent dimensions".into()));
    }
    if gram.det().is_zero() {
        return Err(Error::Dimension("hodge_star: degenerate metric".into()));
    }
    let k = n - psi.grade();
    let cinv = vol.coeff().inv().unwrap();
    let js = blades(n, k);
    let pairings: Vec<Scalar> = js
        .iter()
        .map(|&j| {
            let ej = Multivector::basis(n, Variance::Form, &crate::exterior::blade_indices(j));
            &psi.wedge(&ej).top_coeff() * &cinv
        })
        .collect();
    let minors = crate::exterior::compound(gram, k);
    let coords: Vec<Scalar> = minors
        .iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (d, p) in row.iter().zip(&pairings) {
                if !p.is_zero() && !d.is_zero() {
                    acc += &(d * p);
                }
            }
            acc
        })
        .collect();
    Ok(Multivector::from_coords(n, k, Variance::Form, &coords))
}

/// Metric data determined by a stable three-form.
#[derive(Debug, Clone)]
pub enum MetricData {
    /// `g = b / λ`, `vol = λ e^{1…7}` with `λ = det(b)^{1/9}` rational.
    Exact { gram: Matrix, vol: Volume },
    /// `λ` is irrational; the gram and volume coefficient are floating point.
    Numeric { gram: Vec<Vec<f64>>, vol_coeff: f64 },
}

/// Exact rational ninth root, if any.
fn rational_ninth_root(r: &BigRational) -> Option<BigRational> {
    let root = |n: &BigInt| -> Option<BigInt> {
        let neg = n.is_negative();
        let a = n.abs();
        let x = a.nth_root(9);
        if x.pow(9) == a {
            Some(if neg { -x } else { x })
        } else {
            None
        }
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

/// Metric and volume of a real three-form, normalized so that
/// `(v⌟φ)∧(w⌟φ)∧φ = 6 g(v,w) vol`.
pub fn metric_of_three_form(phi: &Multivector) -> Result<MetricData> {
    if !phi.is_real() {
        return Err(Error::Unsupported("metric normalization is only defined over the reals".into()));
    }
    let b = induced_bilinear(phi, &standard_volume())?;
    let d = b.det();
    if d.is_zero() {
        return Err(Error::Dimension("three-form is not stable".into()));
    }
    let dr = d.re().clone();
    if let Some(lambda) = rational_ninth_root(&dr) {
        let l = Scalar::real(lambda);
        let gram = b.scale(&l.inv().unwrap());
        let vol = Volume::scaled(7, Variance::Form, l)?;
        return Ok(MetricData::Exact { gram, vol });
    }
    let df = d.to_complex().re;
    let lambda = df.signum() * df.abs().powf(1.0 / 9.0);
    let gram = b.to_complex().iter().map(|r| r.iter().map(|z| z.re / lambda).collect()).collect();
    Ok(MetricData::Numeric { gram, vol_coeff: lambda })
}

/// Hodge star induced by a real stable three-form; numeric when the metric
/// normalization is irrational.
#[derive(Debug, Clone)]
pub enum HodgeStar {
    Exact(Multivector),
    Numeric(Vec<(Vec<usize>, Complex64)>),
}

pub fn hodge_star_of_three_form(phi: &Multivector, psi: &Multivector) -> Result<HodgeStar> {
    match metric_of_three_form(phi)? {
        MetricData::Exact { gram, vol } => Ok(HodgeStar::Exact(hodge_star(psi, &gram, &vol)?)),
        MetricData::Numeric { gram, vol_coeff } => {
            let n = 7;
            let k = n - psi.grade();
            let js = blades(n, k);
            let pair: Vec<Complex64> = js
                .iter()
                .map(|&j| {
                    let ej = Multivector::basis(n, Variance::Form, &crate::exterior::blade_indices(j));
                    psi.wedge(&ej).top_coeff().to_complex() / vol_coeff
                })
                .collect();
            let mut out = Vec::new();
            for &l in &js {
                let li = crate::exterior::blade_indices(l);
                let mut acc = Complex64::zero();
                for (&j, p) in js.iter().zip(&pair) {
                    let jj = crate::exterior::blade_indices(j);
                    let sub: Vec<Vec<f64>> = li.iter().map(|&a| jj.iter().map(|&b| gram[a][b]).collect()).collect();
                    acc += p * det_f64(sub);
                }
                if acc.norm() > 1e-12 {
                    out.push((li.iter().map(|i| i + 1).collect(), acc));
                }
            }
            Ok(HodgeStar::Numeric(out))
        }
    }
}

fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    det
}

/// Gram matrix of the dual metric on covectors (the inverse gram).
pub fn dual_gram(gram: &Matrix) -> Result<Matrix> {
    gram.inverse()
}

/// `g(α, α)` for a covector `α` under the dual metric.
pub fn covector_norm(dual: &Matrix, alpha: &[Scalar]) -> Scalar {
    let ga = dual.mul_vec(alpha);
    alpha.iter().zip(&ga).map(|(a, b)| a * b).sum()
}

/// `ψ = Ω + ρ ∧ α` relative to a complement of the covector `α`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Part without `α`, in the coordinates `c¹…c⁶` of the complement.
    pub omega: Multivector,
    pub rho: Multivector,
    /// Rows `c¹…c⁶, α` written in the original coordinates.
    pub basis: Matrix,
}

/// Decompose `psi` along `alpha`, using as complement the standard covectors
/// other than the first one on which `alpha` has a nonzero coefficient.
pub fn decompose_along(psi: &Multivector, alpha: &[Scalar]) -> Result<Decomposition> {
    let n = psi.dim();
    if alpha.len() != n || psi.variance() != Variance::Form {
        return Err(Error::Dimension("decompose_along: covector length differs from dimension".into()));
    }
    let p = alpha.iter().position(|a| !a.is_zero()).ok_or_else(|| Error::Dimension("zero covector".into()))?;
    let mut rows: Vec<Vec<Scalar>> = (0..n)
        .filter(|&j| j != p)
        .map(|j| {
            let mut r = vec![Scalar::zero(); n];
            r[j] = Scalar::one();
            r
        })
        .collect();
    rows.push(alpha.to_vec());
    let basis = Matrix::from_rows(rows)?;
    let change = basis.inverse()?.transpose();
    let (omega, rho) = psi.pushforward(&change).split_last();
    Ok(Decomposition { omega, rho, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grams() {
        let vol = standard_volume();
        let g = induced_bilinear(&standard_three_form(StandardFormSpec::of(Kind::G2)), &vol).unwrap();
        assert_eq!(g, Matrix::identity(7));
        let g = induced_bilinear(&standard_three_form(StandardFormSpec::of(Kind::G2Star)), &vol).unwrap();
        let d: Vec<Scalar> = [-1, -1, -1, -1, 1, 1, 1].iter().map(|&x| Scalar::from_i64(x)).collect();
        assert_eq!(g, Matrix::diagonal(&d));
    }

    #[test]
    fn classification_of_standard_and_degenerate_forms() {
        assert_eq!(classify_three_form(&standard_three_form(StandardFormSpec::of(Kind::G2)), false).unwrap(), Classification::G2);
        assert_eq!(
            classify_three_form(&standard_three_form(StandardFormSpec::of(Kind::G2Star)), false).unwrap(),
            Classification::G2Star
        );
        assert_eq!(classify_three_form(&standard_three_form(StandardFormSpec::of(Kind::G2)), true).unwrap(), Classification::G2C);
        let deg = Multivector::from_int_terms(7, Variance::Form, &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)]);
        assert_eq!(classify_three_form(&deg, false).unwrap(), Classification::None);
        let e123 = Multivector::from_int_terms(7, Variance::Form, &[(&[1, 2, 3], 1)]);
        assert!(induced_bilinear(&e123, &standard_volume()).unwrap().rank() < 7);
    }

    #[test]
    fn standard_hodge_duals() {
        for kind in [Kind::G2, Kind::G2Star] {
            let spec = StandardFormSpec::of(kind);
            let phi = standard_three_form(spec);
            match hodge_star_of_three_form(&phi, &phi).unwrap() {
                HodgeStar::Exact(s) => assert_eq!(s, standard_hodge_dual(spec)),
                HodgeStar::Numeric(_) => panic!("standard metric must be exact"),
            }
        }
    }
}
