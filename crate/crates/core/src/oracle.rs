//! Brute-force decisions from the space of closed four-forms on the ideal.
//!
//! A form `ρ ∈ Λᵏ u*` is closed on the semidirect model iff `F.ρ = 0`, so the
//! closed four-forms are the kernel of a 15×15 linear map. Lengths of their
//! duals decide the existence questions without touching eigenvalues.

use serde::{Deserialize, Serialize};

use crate::exterior::{blades, dual_iso_inverse, Multivector, Variance, Volume};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Kernel of `ρ ↦ F.ρ` on `Λᵏ` of the dual space.
pub fn invariant_forms(f: &Matrix, grade: usize) -> Vec<Multivector> {
    let n = f.rows();
    let basis = blades(n, grade);
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|&b| {
            let idx = crate::exterior::blade_indices(b);
            Multivector::derivation_action(f, &Multivector::basis(n, Variance::Form, &idx)).coords()
        })
        .collect();
    let m = Matrix::from_columns(&cols);
    m.kernel_basis()
        .into_iter()
        .map(|v| Multivector::from_coords(n, grade, Variance::Form, &v))
        .collect()
}

/// Closed four-forms on the ideal together with their dual 2-vectors.
#[derive(Debug, Clone)]
pub struct ClosedFourFormSpace {
    pub basis: Vec<Multivector>,
    pub duals: Vec<Multivector>,
    pub volume: Volume,
}

pub fn closed_fourform_space(f: &Matrix) -> ClosedFourFormSpace {
    let n = f.rows();
    let volume = Volume::standard(n, Variance::Form);
    let basis = invariant_forms(f, 4);
    let duals = basis.iter().map(|b| dual_iso_inverse(b, &volume).unwrap()).collect();
    ClosedFourFormSpace { basis, duals, volume }
}

/// Largest length in the span of some 2-vectors (or 2-forms), with a witness.
#[derive(Debug, Clone)]
pub struct MaxLength {
    pub maxlen: usize,
    /// Coefficients over the input list of an element of length `maxlen`.
    pub witness: Option<Vec<Scalar>>,
}

/// Grid `{0,1,2,3}^m` without the origin, in lexicographic order.
fn grid(m: usize) -> impl Iterator<Item = Vec<i64>> {
    let total = 4usize.pow(m as u32);
    (1..total).map(move |mut code| {
        let mut v = vec![0i64; m];
        for x in v.iter_mut().rev() {
            *x = (code % 4) as i64;
            code /= 4;
        }
        v
    })
}

fn combine(xs: &[Multivector], idx: &[usize], c: &[i64]) -> Multivector {
    let mut acc = Multivector::zero(xs[0].dim(), xs[0].grade(), xs[0].variance());
    for (&i, &k) in idx.iter().zip(c) {
        if k != 0 {
            acc = acc.add(&xs[i].scale(&Scalar::from_i64(k)));
        }
    }
    acc
}

/// Length `l` is reached in the span iff some symmetrized `l`-fold wedge of
/// spanning elements is nonzero (polarization of `c ↦ (Σ cᵢXᵢ)^l`). The
/// witness is searched on the grid `{0,…,3}` over the at most three
/// elements involved; a nonzero polynomial of degree ≤ 3 cannot vanish on it.
pub fn max_length(xs: &[Multivector]) -> MaxLength {
    let nonzero: Vec<usize> = (0..xs.len()).filter(|&i| !xs[i].is_zero()).collect();
    if nonzero.is_empty() {
        return MaxLength { maxlen: 0, witness: None };
    }
    let witness = |idx: Vec<usize>, power: usize| -> Vec<Scalar> {
        for c in grid(idx.len()) {
            if !combine(xs, &idx, &c).wedge_power(power).is_zero() {
                let mut full = vec![Scalar::zero(); xs.len()];
                for (&i, &k) in idx.iter().zip(&c) {
                    full[i] = &full[i] + &Scalar::from_i64(k);
                }
                return full;
            }
        }
        unreachable!("grid search must find a witness for a nonzero polarization")
    };
    let pairs: Vec<(usize, usize, Multivector)> = nonzero
        .iter()
        .flat_map(|&i| nonzero.iter().filter(move |&&j| j >= i).map(move |&j| (i, j)))
        .map(|(i, j)| (i, j, xs[i].wedge(&xs[j])))
        .collect();
    for (i, j, w) in &pairs {
        if w.is_zero() {
            continue;
        }
        for &k in nonzero.iter().filter(|&&k| k >= *j) {
            if !w.wedge(&xs[k]).is_zero() {
                let mut idx = vec![*i, *j, k];
                idx.dedup();
                return MaxLength { maxlen: 3, witness: Some(witness(idx, 3)) };
            }
        }
    }
    if let Some((i, j, _)) = pairs.iter().find(|(_, _, w)| !w.is_zero()) {
        let mut idx = vec![*i, *j];
        idx.dedup();
        return MaxLength { maxlen: 2, witness: Some(witness(idx, 2)) };
    }
    let mut full = vec![Scalar::zero(); xs.len()];
    full[nonzero[0]] = Scalar::one();
    MaxLength { maxlen: 1, witness: Some(full) }
}

/// Maximal dual length in the closed space, with the witness four-form.
pub fn max_length_in_space(space: &ClosedFourFormSpace) -> (MaxLength, Option<Multivector>) {
    let ml = max_length(&space.duals);
    let witness = ml.witness.as_ref().map(|c| {
        let mut acc = Multivector::zero(6, 4, Variance::Form);
        for (b, k) in space.basis.iter().zip(c) {
            if !k.is_zero() {
                acc = acc.add(&b.scale(k));
            }
        }
        acc
    });
    (ml, witness)
}

/// The oracle's answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDecision {
    pub g2: bool,
    pub g2star: bool,
    pub maxlen: usize,
    pub closed_dim: usize,
}

pub fn oracle_decide(f: &Matrix) -> OracleDecision {
    let space = closed_fourform_space(f);
    let ml = max_length(&space.duals);
    OracleDecision { g2: ml.maxlen == 3, g2star: ml.maxlen >= 2, maxlen: ml.maxlen, closed_dim: space.basis.len() }
}

/// A nondegenerate two-form `ω` with `ω(Fx,y) + ω(x,Fy) = 0`, if one exists.
pub fn invariant_symplectic_form(f: &Matrix) -> Option<Multivector> {
    let forms = invariant_forms(f, 2);
    let ml = max_length(&forms);
    if ml.maxlen * 2 < f.rows() {
        return None;
    }
    let c = ml.witness?;
    let mut acc = Multivector::zero(f.rows(), 2, Variance::Form);
    for (b, k) in forms.iter().zip(&c) {
        if !k.is_zero() {
            acc = acc.add(&b.scale(k));
        }
    }
    Some(acc)
}
