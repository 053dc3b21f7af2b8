//! Certificates: explicit closed Hodge-dual four-forms with an exhibited
//! adapted basis, and their independent verification.
//!
//! Every certificate is exact over the input field. Length-3 witnesses are put
//! into the standard shape by a Darboux basis of the dual 2-vector; the
//! leading scale is absorbed by rescaling the witness and three basis
//! covectors, so no roots are ever taken. Length-2 witnesses are matched
//! with the part of the standard split Hodge dual that avoids a fixed null
//! covector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{dual_iso_inverse, Multivector, Variance, Volume};
use crate::g2::{
    classify_three_form, decompose_along, hodge_dual_pattern, hodge_star, induced_bilinear, standard_three_form,
    Classification, Kind, StandardFormSpec,
};
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::oracle::{closed_fourform_space, max_length_in_space};
use crate::scalar::{FieldMode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificatePath {
    /// The standard pattern is already closed.
    Canonical,
    Length3,
    Length2,
}

impl fmt::Display for CertificatePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificatePath::Canonical => "canonical",
            CertificatePath::Length3 => "length3",
            CertificatePath::Length2 => "length2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarSystem {
    Rational,
    GaussianRational,
}

/// Rows `b¹…b⁷` of the adapted coframe in the coordinates `e¹…e⁷`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhibitedBasis {
    pub scalar_system: ScalarSystem,
    pub entries: Vec<Vec<Scalar>>,
}

impl ExhibitedBasis {
    pub fn matrix(&self) -> Result<Matrix> {
        Matrix::from_rows(self.entries.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: Kind,
    pub path: CertificatePath,
    pub psi: Multivector,
    pub omega_part: Multivector,
    pub exhibited_basis: ExhibitedBasis,
    pub epsilon: i8,
    /// Factor by which the closed witness four-form was rescaled.
    pub scale: Scalar,
    pub checks: Vec<String>,
}

/// Null covector of the standard split metric used by the length-2 path.
pub const NULL_COVECTOR: [i64; 7] = [1, 0, 0, 0, 1, 0, 0];

/// `f^k = Σ_{i≤6} R[k][i] ŷ^i + R[k][7] α`, where `α` is [`NULL_COVECTOR`] and
/// the part of the standard split Hodge dual free of `α` equals
/// `ŷ^{1234} + ŷ^{1256}`. Regenerate with
/// `cargo run -p cocal-core --example null_transport`.
pub const NULL_TRANSPORT: [[&str; 7]; 7] = [
    ["0/1", "0/1", "0/1", "0/1", "-1/1", "0/1", "1/1"],
    ["-1/1", "0/1", "0/1", "-1/1", "0/1", "0/1", "0/1"],
    ["0/1", "0/1", "0/1", "0/1", "0/1", "-1/1", "0/1"],
    ["0/1", "1/1", "-1/1", "0/1", "0/1", "0/1", "0/1"],
    ["0/1", "0/1", "0/1", "0/1", "1/1", "0/1", "0/1"],
    ["0/1", "0/1", "0/1", "1/1", "0/1", "0/1", "0/1"],
    ["0/1", "0/1", "-1/1", "0/1", "0/1", "0/1", "0/1"],
];

/// Darboux data of a four-form on a 6-space: covectors `w¹…w⁶` (rows, in
/// the original coordinates) and `D` with `Ω = D·Σ` of the standard blocks.
struct Darboux {
    rows: Vec<Vec<Scalar>>,
    det: Scalar,
    length: usize,
}

/// For a four-form `Ω` on a 6-space with dual 2-vector `X = Σ v_{2i-1}∧v_{2i}`:
/// with `V = (v₁ … v₆)` and `D = det V`, `Ω = D·δ_v(X)` where `δ_v` is the
/// dual isomorphism in the coframe `v¹…v⁶` (rows of `V⁻¹`).
fn darboux_of_fourform(omega: &Multivector) -> Result<Darboux> {
    let vol = Volume::standard(6, Variance::Form);
    let x = dual_iso_inverse(omega, &vol)?;
    let sb = x.symplectic_basis();
    let v = Matrix::from_columns(&sb.vectors);
    let det = v.det();
    let inv = v.inverse()?;
    Ok(Darboux { rows: inv.to_rows(), det, length: sb.length })
}

/// Covector rows `ŷ¹…ŷ⁶` with `Ω = ŷ^{1234} + ŷ^{1256}` for a length-2 form.
fn length2_standard_rows(omega: &Multivector) -> Result<Vec<Vec<Scalar>>> {
    let d = darboux_of_fourform(omega)?;
    if d.length != 2 {
        return Err(Error::Verification(format!("expected a length-2 four-form, got length {}", d.length)));
    }
    // Ω = D(v^{3456} + v^{1256}); reorder to (5,6,1,2,3,4) and absorb D.
    let order = [4, 5, 0, 1, 2, 3];
    let mut rows: Vec<Vec<Scalar>> = order.iter().map(|&i| d.rows[i].clone()).collect();
    rows[0] = rows[0].iter().map(|x| x * &d.det).collect();
    Ok(rows)
}

/// Recompute [`NULL_TRANSPORT`] from the standard split Hodge dual.
pub fn derive_null_transport() -> Result<Matrix> {
    let psi = hodge_dual_pattern(-1);
    let alpha: Vec<Scalar> = NULL_COVECTOR.iter().map(|&x| Scalar::from_i64(x)).collect();
    let dec = decompose_along(&psi, &alpha)?;
    let y = Matrix::from_rows(length2_standard_rows(&dec.omega)?)?;
    // f = C⁻¹ c (C = dec.basis), c^i = Σ_l (Y⁻¹)_{il} ŷ^l for i ≤ 6
    let cinv = dec.basis.inverse()?;
    let yinv = y.inverse()?;
    let mut r = Matrix::zeros(7, 7);
    for k in 0..7 {
        for l in 0..6 {
            let v: Scalar = (0..6).map(|i| cinv.get(k, i) * yinv.get(i, l)).sum();
            r.set(k, l, v);
        }
        r.set(k, 6, cinv.get(k, 6).clone());
    }
    Ok(r)
}

pub fn null_transport() -> Matrix {
    Matrix::from_rows(NULL_TRANSPORT.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()).unwrap()
}

fn embed_row(row: &[Scalar]) -> Vec<Scalar> {
    let mut r = row.to_vec();
    r.push(Scalar::zero());
    r
}

fn e7_row() -> Vec<Scalar> {
    let mut r = vec![Scalar::zero(); 7];
    r[6] = Scalar::one();
    r
}

fn scalar_system(rows: &[Vec<Scalar>]) -> ScalarSystem {
    if rows.iter().flatten().all(Scalar::is_real) {
        ScalarSystem::Rational
    } else {
        ScalarSystem::GaussianRational
    }
}

fn assemble(kind: Kind, path: CertificatePath, epsilon: i8, rows: Vec<Vec<Scalar>>, scale: Scalar) -> Result<Certificate> {
    let m = Matrix::from_rows(rows.clone())?;
    let psi = hodge_dual_pattern(epsilon).pushforward(&m.transpose());
    let (omega_part, _) = psi.split_last();
    Ok(Certificate {
        kind,
        path,
        psi,
        omega_part,
        exhibited_basis: ExhibitedBasis { scalar_system: scalar_system(&rows), entries: rows },
        epsilon,
        scale,
        checks: Vec::new(),
    })
}

fn canonical_omega(epsilon: i8) -> Multivector {
    hodge_dual_pattern(epsilon).split_last().0
}

/// Length-3 path: coframe `b` with `D·Ω = b^{1234} + ε(b^{1256} + b^{3456})`.
fn length3(kind: Kind, epsilon: i8, witness: &Multivector) -> Result<Certificate> {
    let mut omega = witness.clone();
    let mut d = darboux_of_fourform(&omega)?;
    if d.det.real_sign() == Some(std::cmp::Ordering::Less) {
        omega = omega.neg();
        d = darboux_of_fourform(&omega)?;
    }
    if d.length != 3 {
        return Err(Error::Verification(format!("expected a length-3 witness, got length {}", d.length)));
    }
    let mut rows = d.rows;
    if epsilon < 0 {
        for i in [1, 3] {
            rows[i] = rows[i].iter().map(|x| -x).collect();
        }
    }
    for i in [0, 2, 4] {
        rows[i] = rows[i].iter().map(|x| x * &d.det).collect();
    }
    let mut full: Vec<Vec<Scalar>> = rows.iter().map(|r| embed_row(r)).collect();
    full.push(e7_row());
    let cert = assemble(kind, CertificatePath::Length3, epsilon, full, d.det.clone())?;
    if cert.omega_part != omega.scale(&d.det) {
        return Err(Error::Verification("length-3 coframe does not reproduce the witness".into()));
    }
    Ok(cert)
}

/// Length-2 path: transport the standard split Hodge dual so that its
/// null-free part becomes the witness and the null covector becomes `e⁷`.
fn length2(kind: Kind, witness: &Multivector) -> Result<Certificate> {
    let w = length2_standard_rows(witness)?;
    let r = null_transport();
    let rows: Vec<Vec<Scalar>> = (0..7)
        .map(|k| {
            let mut row: Vec<Scalar> = (0..6).map(|j| (0..6).map(|l| r.get(k, l) * &w[l][j]).sum()).collect();
            row.push(r.get(k, 6).clone());
            row
        })
        .collect();
    let cert = assemble(kind, CertificatePath::Length2, -1, rows, Scalar::one())?;
    if cert.omega_part != *witness {
        return Err(Error::Verification("length-2 transport does not reproduce the witness".into()));
    }
    Ok(cert)
}

/// Build and verify a certificate for `kind` on the semidirect model of `F`.
pub fn build_certificate(f: &Matrix, kind: Kind, field: FieldMode) -> Result<Certificate> {
    if f.rows() != 6 || !f.is_square() {
        return Err(Error::Dimension("certificates need a 6×6 matrix".into()));
    }
    f.check_field(field)?;
    if field == FieldMode::GaussianRational && kind != Kind::G2C && !f.is_real() {
        return Err(Error::Unsupported(format!("{kind} certificates need a real matrix")));
    }
    let epsilons: &[i8] = match kind {
        Kind::G2 => &[1],
        Kind::G2Star => &[-1],
        Kind::G2C => &[1, -1],
    };
    let mut cert = None;
    for &eps in epsilons {
        if Multivector::derivation_action(f, &canonical_omega(eps)).is_zero() {
            let mut rows: Vec<Vec<Scalar>> = Matrix::identity(7).to_rows();
            rows.truncate(7);
            cert = Some(assemble(kind, CertificatePath::Canonical, eps, rows, Scalar::one())?);
            break;
        }
    }
    let cert = match cert {
        Some(c) => c,
        None => {
            let space = closed_fourform_space(f);
            let (ml, witness) = max_length_in_space(&space);
            match (ml.maxlen, witness) {
                (3, Some(w)) => length3(kind, kind.default_epsilon(), &w)?,
                (2, Some(w)) if kind != Kind::G2 => length2(kind, &w)?,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "no cocalibrated {kind}-structure: closed four-forms reach length {} only",
                        ml.maxlen
                    )))
                }
            }
        }
    };
    let report = verify_certificate(&cert, f)?;
    if !report.passed() {
        return Err(Error::Verification(format!("freshly built certificate fails: {}", report.failures().join("; "))));
    }
    Ok(Certificate { checks: report.passed_names(), ..cert })
}

/// One named verification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Signature `(positive, negative)` of the recognized metric, real kinds only.
    pub signature: Option<(usize, usize)>,
    pub classification: Option<Classification>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_names(&self) -> Vec<String> {
        self.checks.iter().filter(|c| c.passed).map(|c| c.name.clone()).collect()
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
    }
}

/// Independent verification of a certificate against `F`:
/// closedness on the semidirect model, the Hodge-dual pattern in the
/// exhibited coframe, recognition of the companion three-form, and
/// `★φ φ = Ψ` for the metric that three-form induces.
pub fn verify_certificate(cert: &Certificate, f: &Matrix) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| checks.push(Check { name: name.into(), passed, detail });
    let field = if f.is_real() && cert.psi.is_real() { FieldMode::Rational } else { FieldMode::GaussianRational };
    let g = LieAlgebra::from_matrix(f, field)?;
    if cert.psi.dim() != 7 || cert.psi.grade() != 4 || cert.psi.variance() != Variance::Form {
        return Err(Error::Verification("psi must be a four-form in dimension 7".into()));
    }
    let dpsi = g.ce_differential(&cert.psi);
    push("closed", dpsi.is_zero(), if dpsi.is_zero() { String::new() } else { format!("dpsi = {dpsi}") });

    let admissible = StandardFormSpec::new(cert.kind, cert.epsilon).is_ok();
    push("epsilon", admissible, if admissible { String::new() } else { format!("epsilon {} for {}", cert.epsilon, cert.kind) });

    let m = cert.exhibited_basis.matrix()?;
    if m.rows() != 7 || m.cols() != 7 {
        return Err(Error::Verification("exhibited basis must be 7×7".into()));
    }
    let det = m.det();
    if det.is_zero() {
        push("basis", false, "exhibited basis is singular".into());
        return Ok(VerificationReport { checks, signature: None, classification: None });
    }
    let system_ok = match cert.exhibited_basis.scalar_system {
        ScalarSystem::Rational => m.is_real(),
        ScalarSystem::GaussianRational => true,
    };
    push("scalar_system", system_ok, if system_ok { String::new() } else { "non-real entry in a rational basis".into() });

    let in_basis = cert.psi.pushforward(&m.inverse()?.transpose());
    let pattern = hodge_dual_pattern(cert.epsilon);
    let pattern_ok = in_basis == pattern;
    push("pattern", pattern_ok, if pattern_ok { String::new() } else { format!("psi in exhibited basis = {in_basis}") });

    let omega_ok = cert.psi.split_last().0 == cert.omega_part;
    push("omega_part", omega_ok, if omega_ok { String::new() } else { "omega_part differs from psi restricted to the ideal".into() });

    let spec = StandardFormSpec { kind: cert.kind, epsilon: cert.epsilon };
    let phi = standard_three_form(spec).pushforward(&m.transpose());
    let vol = Volume::scaled(7, Variance::Form, det)?;
    let gram = induced_bilinear(&phi, &vol)?;
    let mut signature = None;
    let classification;
    match cert.kind {
        Kind::G2 | Kind::G2Star => {
            let sig = if gram.is_real() { gram.signature().ok() } else { None };
            signature = sig.map(|s| (s.positive, s.negative));
            let expected = if cert.kind == Kind::G2 { (7, 0) } else { (3, 4) };
            let ok = signature == Some(expected);
            classification = Some(classify_three_form(&phi, false)?);
            push("recognition", ok, if ok { String::new() } else { format!("signature {signature:?}, expected {expected:?}") });
        }
        Kind::G2C => {
            classification = Some(classify_three_form(&phi, true)?);
            let ok = classification == Some(Classification::G2C);
            push("recognition", ok, if ok { String::new() } else { "induced complex bilinear form is degenerate".into() });
        }
    }
    let star = hodge_star(&phi, &gram, &vol)?;
    let star_ok = star == cert.psi;
    push("hodge_dual", star_ok, if star_ok { String::new() } else { format!("star phi = {star}") });
    Ok(VerificationReport { checks, signature, classification })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nilpotent(sizes: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(6, 6);
        let mut off = 0;
        for &s in sizes {
            for k in 0..s - 1 {
                m.set(off + k, off + k + 1, Scalar::one());
            }
            off += s;
        }
        m
    }

    #[test]
    fn null_transport_constant_is_current() {
        assert_eq!(derive_null_transport().unwrap(), null_transport());
    }

    #[test]
    fn zero_matrix_gives_standard_certificate() {
        let c = build_certificate(&Matrix::zeros(6, 6), Kind::G2, FieldMode::Rational).unwrap();
        assert_eq!(c.path, CertificatePath::Canonical);
        assert_eq!(c.psi, hodge_dual_pattern(1));
        assert_eq!(c.scale, Scalar::one());
        assert_eq!(c.exhibited_basis.matrix().unwrap(), Matrix::identity(7));
    }

    #[test]
    fn perturbed_certificate_fails_pattern() {
        let f = Matrix::zeros(6, 6);
        let mut c = build_certificate(&f, Kind::G2, FieldMode::Rational).unwrap();
        let bump = Multivector::from_int_terms(7, Variance::Form, &[(&[1, 2, 3, 4], 1)]);
        c.psi = c.psi.add(&bump);
        let r = verify_certificate(&c, &f).unwrap();
        assert!(!r.passed());
        assert!(r.failures().iter().any(|s| s.starts_with("pattern")));
    }

    #[test]
    fn nilpotent_certificates() {
        for sizes in [&[6][..], &[2, 2, 2], &[4, 2]] {
            let c = build_certificate(&nilpotent(sizes), Kind::G2, FieldMode::Rational).unwrap();
            assert!(c.checks.contains(&"recognition".to_string()));
        }
        for sizes in [&[5, 1][..], &[3, 2, 1], &[3, 1, 1, 1]] {
            assert!(build_certificate(&nilpotent(sizes), Kind::G2, FieldMode::Rational).is_err());
            let c = build_certificate(&nilpotent(sizes), Kind::G2Star, FieldMode::Rational).unwrap();
            assert_eq!(c.epsilon, -1);
        }
    }

    #[test]
    fn split_only_example() {
        let d: Vec<Scalar> = [2, 2, 2, 2, -2, -2].iter().map(|&x| Scalar::from_i64(x)).collect();
        let f = Matrix::diagonal(&d);
        let c = build_certificate(&f, Kind::G2Star, FieldMode::Rational).unwrap();
        assert_eq!(verify_certificate(&c, &f).unwrap().signature, Some((3, 4)));
        assert!(build_certificate(&f, Kind::G2C, FieldMode::Rational).is_ok());
        assert!(build_certificate(&f, Kind::G2, FieldMode::Rational).is_err());
    }
}
