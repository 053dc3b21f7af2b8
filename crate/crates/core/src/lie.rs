//! Lie algebras given by structure constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{blade_indices, Multivector, Variance};
use crate::matrix::Matrix;
use crate::poly::invariant_factors;
use crate::scalar::{FieldMode, Scalar};

/// A Lie algebra with basis `e_1…e_n` and bracket `[e_i,e_j] = Σ_k c_{ij}^k e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    field: FieldMode,
    names: Vec<String>,
    /// `c[(i*n + j)*n + k] = c_{ij}^k`, antisymmetric in `i, j`.
    c: Vec<Scalar>,
    ideal: Option<Vec<Vec<Scalar>>>,
}

/// A codimension-one Abelian ideal `u`, a complement vector `e7` and
/// `F = ad(e7)|_u` in the ideal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CodimOneData {
    pub ideal_basis: Vec<Vec<Scalar>>,
    pub e7: Vec<Scalar>,
    pub f: Matrix,
}

/// Outcome of the ideal search.
#[derive(Debug, Clone)]
pub struct IdealSearch {
    pub data: Option<CodimOneData>,
    /// False when the bounded grid scan was used (ambiguous annihilator).
    pub exhaustive: bool,
    pub warnings: Vec<String>,
}

impl LieAlgebra {
    /// The Abelian algebra of dimension `n`.
    pub fn abelian(n: usize, field: FieldMode) -> Self {
        LieAlgebra {
            field,
            names: (1..=n).map(|i| format!("e{i}")).collect(),
            c: vec![Scalar::zero(); n * n * n],
            ideal: None,
        }
    }

    /// Build from brackets `[e_i, e_j] = v` for `i < j` (0-based); other pairs
    /// follow by antisymmetry or are zero.
    pub fn from_brackets(n: usize, field: FieldMode, brackets: &[(usize, usize, Vec<Scalar>)]) -> Result<Self> {
        let mut g = LieAlgebra::abelian(n, field);
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= n {
                return Err(Error::InvalidAlgebra(format!("bracket pair ({}, {}) must satisfy i < j ≤ {n}", i + 1, j + 1)));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidAlgebra(format!("bracket pair ({}, {}) listed twice", i + 1, j + 1)));
            }
            if v.len() != n {
                return Err(Error::Dimension("bracket vector length differs from dimension".into()));
            }
            for (k, x) in v.iter().enumerate() {
                if !field.admits(x) {
                    return Err(Error::Parse("non-real structure constant in a rational-field algebra".into()));
                }
                g.c[(i * n + j) * n + k] = x.clone();
                g.c[(j * n + i) * n + k] = -x;
            }
        }
        Ok(g)
    }

    /// The semidirect model `𝔽⁶ ⋊ 𝔽e₇` with `[e₇, e_j] = Σ_i F_ij e_i`.
    pub fn from_matrix(f: &Matrix, field: FieldMode) -> Result<Self> {
        let m = f.rows();
        if !f.is_square() {
            return Err(Error::Dimension("from_matrix needs a square matrix".into()));
        }
        f.check_field(field)?;
        let n = m + 1;
        let brackets: Vec<(usize, usize, Vec<Scalar>)> = (0..m)
            .map(|j| {
                let mut v: Vec<Scalar> = (0..m).map(|i| -f.get(i, j)).collect();
                v.push(Scalar::zero());
                (j, m, v)
            })
            .collect();
        LieAlgebra::from_brackets(n, field, &brackets)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim() {
            return Err(Error::Dimension("basis name count differs from dimension".into()));
        }
        self.names = names;
        Ok(self)
    }

    /// Supply a codimension-one Abelian ideal instead of searching for one.
    pub fn with_ideal(mut self, ideal: Vec<Vec<Scalar>>) -> Self {
        self.ideal = Some(ideal);
        self
    }

    pub fn declared_ideal(&self) -> Option<&Vec<Vec<Scalar>>> {
        self.ideal.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn field(&self) -> FieldMode {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.c[(i * n + j) * n + k]
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.dim();
        self.c[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *o += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// Pairs `i < j` with a nonzero bracket, 0-based.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|x| !x.is_zero()) {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Check the Jacobi identity exactly; the error names the first violating
    /// triple (1-based, in lexicographic order).
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let e = |i: usize| -> Vec<Scalar> {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&self.bracket_basis(i, j), &e(k));
                    let b = self.bracket(&self.bracket_basis(j, k), &e(i));
                    let c = self.bracket(&self.bracket_basis(k, i), &e(j));
                    if (0..n).any(|m| !(&(&a[m] + &b[m]) + &c[m]).is_zero()) {
                        return Err(Error::InvalidAlgebra(format!(
                            "Jacobi identity fails on ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `d e^m = −Σ_{i<j} c_{ij}^m e^{ij}`.
    pub fn differential_of_dual(&self, m: usize) -> Multivector {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = self.structure_constant(i, j, m);
                if !c.is_zero() {
                    terms.push((vec![i, j], -c));
                }
            }
        }
        if terms.is_empty() {
            return Multivector::zero(n, 2, Variance::Form);
        }
        Multivector::from_indices(n, Variance::Form, &terms).unwrap()
    }

    /// Chevalley–Eilenberg differential, extended from one-forms as an
    /// antiderivation.
    pub fn ce_differential(&self, rho: &Multivector) -> Multivector {
        let n = self.dim();
        assert!(rho.dim() == n && rho.variance() == Variance::Form);
        let k = rho.grade();
        if k >= n {
            return Multivector::zero(n, n, Variance::Form);
        }
        let de: Vec<Multivector> = (0..n).map(|m| self.differential_of_dual(m)).collect();
        let mut out = Multivector::zero(n, k + 1, Variance::Form);
        for (b, c) in rho.terms() {
            let idx = blade_indices(*b);
            for p in 0..idx.len() {
                if de[idx[p]].is_zero() {
                    continue;
                }
                let left = Multivector::basis(n, Variance::Form, &idx[..p]);
                let right = Multivector::basis(n, Variance::Form, &idx[p + 1..]);
                let mut t = left.wedge(&de[idx[p]]).wedge(&right).scale(c);
                if p % 2 == 1 {
                    t = t.neg();
                }
                out = out.add(&t);
            }
        }
        out
    }

    /// Derived algebra `[g,g]` as a list of spanning vectors (rref rows).
    pub fn derived_algebra(&self) -> Vec<Vec<Scalar>> {
        let rows: Vec<Vec<Scalar>> = self.nonzero_brackets().into_iter().map(|b| b.2).collect();
        if rows.is_empty() {
            return Vec::new();
        }
        let m = Matrix::from_rows(rows).unwrap();
        let (r, p) = m.rref();
        (0..p.len()).map(|i| r.row(i)).collect()
    }

    /// True when `span(basis)` is Abelian.
    pub fn is_abelian_subspace(&self, basis: &[Vec<Scalar>]) -> bool {
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                if self.bracket(&basis[a], &basis[b]).iter().any(|x| !x.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    fn codim_one_from_covector(&self, xi: &[Scalar]) -> Option<CodimOneData> {
        let n = self.dim();
        let row = Matrix::from_rows(vec![xi.to_vec()]).unwrap();
        let basis = row.kernel_basis();
        if basis.len() != n - 1 || !self.is_abelian_subspace(&basis) {
            return None;
        }
        let j = (0..n).rev().find(|&j| !xi[j].is_zero())?;
        let mut e7 = vec![Scalar::zero(); n];
        e7[j] = Scalar::one();
        self.codim_one_data(basis, e7).ok()
    }

    /// Assemble `CodimOneData` for a given ideal basis and complement vector,
    /// checking that the subspace is an Abelian ideal.
    pub fn codim_one_data(&self, ideal_basis: Vec<Vec<Scalar>>, e7: Vec<Scalar>) -> Result<CodimOneData> {
        let n = self.dim();
        if ideal_basis.len() + 1 != n || ideal_basis.iter().any(|v| v.len() != n) || e7.len() != n {
            return Err(Error::Dimension("ideal basis must have dim-1 vectors of length dim".into()));
        }
        let u = Matrix::from_columns(&ideal_basis);
        if u.rank() != n - 1 {
            return Err(Error::NoIdeal("ideal basis is linearly dependent".into()));
        }
        let mut full = ideal_basis.clone();
        full.push(e7.clone());
        if Matrix::from_columns(&full).rank() != n {
            return Err(Error::NoIdeal("complement vector lies in the ideal".into()));
        }
        if !self.is_abelian_subspace(&ideal_basis) {
            return Err(Error::NoIdeal("declared ideal is not Abelian".into()));
        }
        let mut f = Matrix::zeros(n - 1, n - 1);
        for (k, v) in ideal_basis.iter().enumerate() {
            let w = self.bracket(&e7, v);
            let coords = u.solve(&w).ok_or_else(|| Error::NoIdeal("declared subspace is not an ideal".into()))?;
            for (i, c) in coords.into_iter().enumerate() {
                f.set(i, k, c);
            }
        }
        Ok(CodimOneData { ideal_basis, e7, f })
    }

    /// Search for a codimension-one Abelian ideal. Every hyperplane containing
    /// `[g,g]` is an ideal, so candidates are kernels of covectors in
    /// `Ann([g,g])`; each candidate is checked exactly for commutativity.
    pub fn find_codim1_abelian_ideal(&self) -> IdealSearch {
        let n = self.dim();
        let mut warnings = Vec::new();
        if let Some(ideal) = &self.ideal {
            // complement: last standard vector outside the declared span
            let e7 = (0..n).rev().map(|j| {
                let mut v = vec![Scalar::zero(); n];
                v[j] = Scalar::one();
                v
            });
            for cand in e7 {
                let mut full = ideal.clone();
                full.push(cand.clone());
                if Matrix::from_columns(&full).rank() == n {
                    return match self.codim_one_data(ideal.clone(), cand) {
                        Ok(d) => IdealSearch { data: Some(d), exhaustive: true, warnings },
                        Err(e) => {
                            warnings.push(format!("declared ideal rejected: {e}"));
                            IdealSearch { data: None, exhaustive: true, warnings }
                        }
                    };
                }
            }
            warnings.push("declared ideal does not have codimension one".into());
            return IdealSearch { data: None, exhaustive: true, warnings };
        }
        let d = self.derived_algebra();
        if d.len() >= n {
            return IdealSearch { data: None, exhaustive: true, warnings: vec!["[g,g] = g".into()] };
        }
        let ann: Vec<Vec<Scalar>> = if d.is_empty() {
            (0..n)
                .map(|i| {
                    let mut v = vec![Scalar::zero(); n];
                    v[i] = Scalar::one();
                    v
                })
                .collect()
        } else {
            Matrix::from_rows(d).unwrap().kernel_basis()
        };
        if ann.len() == 1 {
            let data = self.codim_one_from_covector(&ann[0]);
            return IdealSearch { data, exhaustive: true, warnings };
        }
        let ann_m = Matrix::from_columns(&ann);
        // standard covectors e^n, …, e^1 that annihilate [g,g] come first
        for j in (0..n).rev() {
            let mut xi = vec![Scalar::zero(); n];
            xi[j] = Scalar::one();
            if ann_m.solve(&xi).is_some() {
                if let Some(data) = self.codim_one_from_covector(&xi) {
                    return IdealSearch { data: Some(data), exhaustive: false, warnings };
                }
            }
        }
        for coeffs in projective_grid(ann.len(), 2) {
            let xi: Vec<Scalar> = (0..n)
                .map(|k| ann.iter().zip(&coeffs).map(|(a, &c)| &a[k] * &Scalar::from_i64(c)).sum())
                .collect();
            if let Some(data) = self.codim_one_from_covector(&xi) {
                return IdealSearch { data: Some(data), exhaustive: false, warnings };
            }
        }
        warnings.push("bounded grid scan found no codimension-one Abelian ideal".into());
        IdealSearch { data: None, exhaustive: false, warnings }
    }
}

/// Nonzero integer vectors with entries in `[-b, b]` and first nonzero entry
/// positive (one per projective point up to sign), ordered by max-norm.
pub fn projective_grid(dim: usize, b: i64) -> Vec<Vec<i64>> {
    let side = (2 * b + 1) as usize;
    let total = side.pow(dim as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            v.push((code % side) as i64 - b);
            code /= side;
        }
        match v.iter().find(|&&x| x != 0) {
            Some(&x) if x > 0 => out.push(v),
            _ => {}
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap(), v.iter().filter(|&&x| x != 0).count()));
    out
}

/// Jordan block sizes (descending) of a nilpotent square matrix; `None` when
/// the matrix is not nilpotent.
pub fn nilpotent_partition(f: &Matrix) -> Option<Vec<usize>> {
    let n = f.rows();
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    for _ in 0..=n {
        p = p.mul(f);
        ranks.push(p.rank());
    }
    if ranks[n] != 0 {
        return None;
    }
    let mut parts = Vec::new();
    for k in 1..=n {
        let count = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
        for _ in 0..count {
            parts.push(k);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Some(parts)
}

/// `A ~ B` over the coefficient field: equal invariant factors.
pub fn similar(a: &Matrix, b: &Matrix) -> bool {
    a.rows() == b.rows() && invariant_factors(a) == invariant_factors(b)
}

/// Result of an isomorphism test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoResult {
    pub isomorphic: bool,
    pub exact: bool,
    /// A scaling `γ` with `F ~ γF'`, when one was found.
    pub gamma: Option<Scalar>,
    pub method: String,
}

/// Decide whether `F ~ γF'` for some nonzero `γ` in the field.
pub fn iso_test_matrices(f: &Matrix, g: &Matrix, field: FieldMode, cluster_tol: f64, numeric_tol: f64) -> IsoResult {
    let res = |iso: bool, exact: bool, gamma: Option<Scalar>, method: &str| IsoResult {
        isomorphic: iso,
        exact,
        gamma,
        method: method.into(),
    };
    if f.rows() != g.rows() {
        return res(false, true, None, "dimension");
    }
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return res(true, true, Some(Scalar::one()), "zero"),
        (true, false) | (false, true) => return res(false, true, None, "zero"),
        _ => {}
    }
    match (nilpotent_partition(f), nilpotent_partition(g)) {
        (Some(a), Some(b)) => return res(a == b, true, if a == b { Some(Scalar::one()) } else { None }, "nilpotent_partition"),
        (Some(_), None) | (None, Some(_)) => return res(false, true, None, "nilpotent_partition"),
        _ => {}
    }
    let rf = f.charpoly().roots(cluster_tol);
    let rg = g.charpoly().roots(cluster_tol);
    let mu: Vec<Scalar> = rf.roots.iter().filter_map(|r| r.exact.clone()).filter(|x| !x.is_zero()).collect();
    let nu: Vec<Scalar> = rg.roots.iter().filter_map(|r| r.exact.clone()).filter(|x| !x.is_zero()).collect();
    let (inv_f, inv_g) = (invariant_factors(f), invariant_factors(g));
    let mut tried = Vec::new();
    for m in &mu {
        for v in &nu {
            let gamma = m / v;
            if tried.contains(&gamma) || !field.admits(&gamma) {
                continue;
            }
            tried.push(gamma.clone());
            if inv_f.len() == inv_g.len() && inv_f.iter().zip(&inv_g).all(|(a, b)| *a == b.scale_variable(&gamma)) {
                return res(true, rf.exact && rg.exact, Some(gamma), "invariant_factors");
            }
        }
    }
    if rf.exact && rg.exact {
        return res(false, true, None, "invariant_factors");
    }
    // numeric advisory: compare scaled spectra and rank profiles
    let fz: Vec<num_complex::Complex64> = spectrum(&rf);
    let gz: Vec<num_complex::Complex64> = spectrum(&rg);
    let Some(&m0) = fz.iter().find(|z| z.norm() > cluster_tol) else {
        return res(false, false, None, "numeric_spectrum");
    };
    for &v in gz.iter().filter(|z| z.norm() > cluster_tol) {
        let gamma = m0 / v;
        if field == FieldMode::Rational && gamma.im.abs() > cluster_tol {
            continue;
        }
        let scaled: Vec<_> = gz.iter().map(|z| z * gamma).collect();
        if multiset_close(&fz, &scaled, cluster_tol.max(numeric_tol))
            && rank_profile_close(f, g, gamma, &fz, numeric_tol)
        {
            return res(true, false, None, "numeric_spectrum");
        }
    }
    res(false, false, None, "numeric_spectrum")
}

fn spectrum(r: &crate::poly::Roots) -> Vec<num_complex::Complex64> {
    r.roots.iter().flat_map(|x| std::iter::repeat_n(x.approx, x.multiplicity)).collect()
}

fn multiset_close(a: &[num_complex::Complex64], b: &[num_complex::Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (j, y) in b.iter().enumerate() {
            if !used[j] && (x - y).norm() < tol * (1.0 + x.norm()) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn rank_profile_close(f: &Matrix, g: &Matrix, gamma: num_complex::Complex64, eig: &[num_complex::Complex64], tol: f64) -> bool {
    let n = f.rows();
    let fc = f.to_complex();
    let gc: Vec<Vec<num_complex::Complex64>> = g.to_complex().iter().map(|r| r.iter().map(|z| z * gamma).collect()).collect();
    for &lambda in eig {
        let a = shift_c(&fc, lambda);
        let b = shift_c(&gc, lambda);
        let (mut pa, mut pb) = (a.clone(), b.clone());
        for _ in 0..n {
            if crate::matrix::numeric_rank(pa.clone(), tol) != crate::matrix::numeric_rank(pb.clone(), tol) {
                return false;
            }
            pa = mul_c(&pa, &a);
            pb = mul_c(&pb, &b);
        }
    }
    true
}

pub(crate) fn shift_c(a: &[Vec<num_complex::Complex64>], l: num_complex::Complex64) -> Vec<Vec<num_complex::Complex64>> {
    a.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, &z)| if i == j { z - l } else { z }).collect()).collect()
}

pub(crate) fn mul_c(a: &[Vec<num_complex::Complex64>], b: &[Vec<num_complex::Complex64>]) -> Vec<Vec<num_complex::Complex64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// Isomorphism test for two algebras that both have codimension-one Abelian ideals.
pub fn iso_test(g: &LieAlgebra, h: &LieAlgebra, cluster_tol: f64, numeric_tol: f64) -> Result<IsoResult> {
    let a = g.find_codim1_abelian_ideal().data.ok_or_else(|| Error::NoIdeal("first algebra".into()))?;
    let b = h.find_codim1_abelian_ideal().data.ok_or_else(|| Error::NoIdeal("second algebra".into()))?;
    let field = if g.field() == FieldMode::GaussianRational || h.field() == FieldMode::GaussianRational {
        FieldMode::GaussianRational
    } else {
        FieldMode::Rational
    };
    Ok(iso_test_matrices(&a.f, &b.f, field, cluster_tol, numeric_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64]) -> Matrix {
        Matrix::diagonal(&d.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>())
    }

    fn jordan(sizes: &[usize]) -> Matrix {
        let n: usize = sizes.iter().sum();
        let mut m = Matrix::zeros(n, n);
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
    fn jacobi_violation_is_reported() {
        let e = |k: usize| {
            let mut v = vec![Scalar::zero(); 3];
            v[k] = Scalar::one();
            v
        };
        let g = LieAlgebra::from_brackets(3, FieldMode::Rational, &[(0, 1, e(0)), (1, 2, e(1))]).unwrap();
        let err = g.validate().unwrap_err().to_string();
        assert!(err.contains("(1, 2, 3)"), "{err}");
        let h = LieAlgebra::from_brackets(7, FieldMode::Rational, &[(0, 1, [e(2), vec![Scalar::zero(); 4]].concat())]).unwrap();
        assert!(h.validate().is_ok());
    }

    #[test]
    fn semidirect_differential() {
        let mut f = Matrix::zeros(6, 6);
        f.set(0, 0, Scalar::one());
        let g = LieAlgebra::from_matrix(&f, FieldMode::Rational).unwrap();
        let e1 = Multivector::from_int_terms(7, Variance::Form, &[(&[1], 1)]);
        assert_eq!(g.ce_differential(&e1), Multivector::from_int_terms(7, Variance::Form, &[(&[1, 7], 1)]));
        let e7 = Multivector::from_int_terms(7, Variance::Form, &[(&[7], 1)]);
        assert!(g.ce_differential(&e7).is_zero());
    }

    #[test]
    fn ideal_recovery() {
        let g = LieAlgebra::abelian(7, FieldMode::Rational);
        let d = g.find_codim1_abelian_ideal().data.unwrap();
        assert!(d.f.is_zero());
        assert_eq!(d.e7[6], Scalar::one());
        let f = jordan(&[3, 2, 1]);
        let g = LieAlgebra::from_matrix(&f, FieldMode::Rational).unwrap();
        let d = g.find_codim1_abelian_ideal().data.unwrap();
        assert_eq!(d.f, f);
    }

    #[test]
    fn heisenberg_plus_abelian_has_an_ideal() {
        let mut v = vec![Scalar::zero(); 7];
        v[2] = Scalar::one();
        let g = LieAlgebra::from_brackets(7, FieldMode::Rational, &[(0, 1, v)]).unwrap();
        let s = g.find_codim1_abelian_ideal();
        let d = s.data.unwrap();
        assert!(g.is_abelian_subspace(&d.ideal_basis));
        assert_eq!(nilpotent_partition(&d.f), Some(vec![2, 1, 1, 1, 1]));
    }

    #[test]
    fn partitions() {
        assert_eq!(nilpotent_partition(&jordan(&[6])), Some(vec![6]));
        assert_eq!(nilpotent_partition(&jordan(&[2, 2, 1, 1])), Some(vec![2, 2, 1, 1]));
        assert_eq!(nilpotent_partition(&diag(&[1, 0, 0, 0, 0, 0])), None);
    }

    #[test]
    fn iso_examples() {
        let r = iso_test_matrices(&diag(&[1, 2, 3, 4, 5, 6]), &diag(&[2, 4, 6, 8, 10, 12]), FieldMode::Rational, 1e-7, 1e-9);
        assert!(r.isomorphic && r.exact);
        assert_eq!(r.gamma, Some(Scalar::ratio(1, 2)));
        let r = iso_test_matrices(&diag(&[1, 0, 0, 0, 0, 0]), &jordan(&[2, 1, 1, 1, 1]), FieldMode::Rational, 1e-7, 1e-9);
        assert!(!r.isomorphic);
    }
}
