//! Seeded generators for property tests: conjugated Jordan block models,
//! invertible integer matrices, random forms.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{blades, Multivector, Variance};
use crate::matrix::Matrix;
use crate::scalar::{FieldMode, Scalar};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a named suite.
pub fn suite_rng(seed: u64, name: &str) -> TestRng {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    rng(seed ^ h)
}

/// Random invertible integer matrix with entries in `[-bound, bound]`.
pub fn invertible(rng: &mut TestRng, n: usize, bound: i64) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| Scalar::from_i64(rng.random_range(-bound..=bound))).collect()).collect();
        let m = Matrix::from_rows(rows).unwrap();
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn small_rational(rng: &mut TestRng) -> Scalar {
    let n = rng.random_range(-6i64..=6);
    let d = *[1i64, 1, 1, 2, 3].choose(rng).unwrap();
    Scalar::ratio(n, d)
}

pub fn nonzero_rational(rng: &mut TestRng) -> Scalar {
    loop {
        let x = small_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn small_gaussian(rng: &mut TestRng) -> Scalar {
    Scalar::gaussian(rng.random_range(-2..=2), rng.random_range(-2..=2))
}

fn non_real_gaussian(rng: &mut TestRng) -> Scalar {
    loop {
        let x = small_gaussian(rng);
        if !x.is_real() {
            return x;
        }
    }
}

/// A Jordan matrix described by its blocks. Over the rational field the
/// block list is closed under conjugation and non-real pairs are realified.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockModel {
    pub field: FieldMode,
    pub blocks: Vec<(Scalar, usize)>,
    pub template: &'static str,
}

impl BlockModel {
    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    /// Upper-triangular Jordan form; for the rational field each pair of
    /// conjugate blocks `a ± bi` of size `k` becomes the real block with
    /// `[[a, −b], [b, a]]` on the diagonal and identities above it.
    pub fn matrix(&self) -> Matrix {
        let n = self.size();
        let mut m = Matrix::zeros(n, n);
        let mut off = 0;
        let mut pending: Vec<(Scalar, usize)> = Vec::new();
        for (lambda, k) in &self.blocks {
            let (lambda, k) = (lambda.clone(), *k);
            if self.field == FieldMode::GaussianRational || lambda.is_real() {
                for i in 0..k {
                    m.set(off + i, off + i, lambda.clone());
                    if i + 1 < k {
                        m.set(off + i, off + i + 1, Scalar::one());
                    }
                }
                off += k;
                continue;
            }
            if let Some(p) = pending.iter().position(|(l, s)| *s == k && *l == lambda.conj()) {
                pending.remove(p);
                let lambda = if lambda.im() > &num_rational::BigRational::default() { lambda } else { lambda.conj() };
                let a = Scalar::real(lambda.re().clone());
                let b = Scalar::real(lambda.im().clone());
                for i in 0..k {
                    let r = off + 2 * i;
                    m.set(r, r, a.clone());
                    m.set(r + 1, r + 1, a.clone());
                    m.set(r, r + 1, -&b);
                    m.set(r + 1, r, b.clone());
                    if i + 1 < k {
                        m.set(r, r + 2, Scalar::one());
                        m.set(r + 1, r + 3, Scalar::one());
                    }
                }
                off += 2 * k;
            } else {
                pending.push((lambda, k));
            }
        }
        assert!(pending.is_empty(), "block model is not closed under conjugation");
        m
    }
}

fn eigen(rng: &mut TestRng, field: FieldMode) -> Scalar {
    match field {
        FieldMode::Rational => nonzero_rational(rng),
        FieldMode::GaussianRational => {
            if rng.random_bool(0.6) {
                non_real_gaussian(rng)
            } else {
                nonzero_rational(rng)
            }
        }
    }
}

/// `±λ` pairs with matching blocks and paired odd zero blocks.
fn symplectic_template(rng: &mut TestRng, field: FieldMode) -> Vec<(Scalar, usize)> {
    let mut out = Vec::new();
    let mut rem = 6usize;
    while rem > 0 {
        match rng.random_range(0..5) {
            0 if rem >= 2 => {
                let k = 2 * rng.random_range(1..=rem / 2);
                out.push((Scalar::zero(), k));
                rem -= k;
            }
            1 if rem >= 2 => {
                let k = rng.random_range(1..=rem / 2);
                out.push((Scalar::zero(), k));
                out.push((Scalar::zero(), k));
                rem -= 2 * k;
            }
            2 if rem >= 2 => {
                let k = rng.random_range(1..=rem / 2);
                let l = eigen(rng, field);
                out.push((l.clone(), k));
                out.push((-&l, k));
                rem -= 2 * k;
            }
            3 if rem >= 2 => {
                let k = rng.random_range(1..=rem / 2);
                let b = Scalar::from_i64(*[-2i64, -1, 1, 2].choose(rng).unwrap());
                let l = &b * &Scalar::i();
                out.push((l.clone(), k));
                out.push((-&l, k));
                rem -= 2 * k;
            }
            4 if rem >= 4 => {
                let l = non_real_gaussian(rng);
                if l.re().numer() == &0.into() {
                    continue;
                }
                for v in [l.clone(), -&l, l.conj(), -&l.conj()] {
                    out.push((v, 1));
                }
                rem -= 4;
            }
            _ if rem == 1 => {
                // a lone size-1 zero block breaks the pairing; restart
                out.clear();
                rem = 6;
            }
            _ => {}
        }
    }
    out
}

/// Diagonal spectra `a, s−a, b, s−b, c, −2s−c` that satisfy the sum condition.
fn sum_template(rng: &mut TestRng, field: FieldMode) -> Vec<(Scalar, usize)> {
    let pick = |rng: &mut TestRng| match field {
        FieldMode::Rational => small_rational(rng),
        FieldMode::GaussianRational => {
            if rng.random_bool(0.5) {
                small_gaussian(rng)
            } else {
                small_rational(rng)
            }
        }
    };
    let s = pick(rng);
    let (a, b, c) = (pick(rng), pick(rng), pick(rng));
    let two = Scalar::from_i64(2);
    let vals = [a.clone(), &s - &a, b.clone(), &s - &b, c.clone(), &(-&(&two * &s)) - &c];
    vals.into_iter().map(|v| (v, 1)).collect()
}

/// Random block sizes with eigenvalues drawn from a small pool.
fn generic_template(rng: &mut TestRng, field: FieldMode) -> Vec<(Scalar, usize)> {
    let pool: Vec<Scalar> = (0..3).map(|_| small_rational(rng)).collect();
    let mut out = Vec::new();
    let mut rem = 6usize;
    if field == FieldMode::Rational && rng.random_bool(0.3) {
        let l = non_real_gaussian(rng);
        let k = rng.random_range(1..=2);
        out.push((l.clone(), k));
        out.push((l.conj(), k));
        rem -= 2 * k;
    }
    while rem > 0 {
        let k = rng.random_range(1..=rem.min(4));
        let l = if field == FieldMode::GaussianRational && rng.random_bool(0.4) {
            small_gaussian(rng)
        } else {
            pool.choose(rng).unwrap().clone()
        };
        out.push((l, k));
        rem -= k;
    }
    out
}

fn nilpotent_template(rng: &mut TestRng) -> Vec<(Scalar, usize)> {
    let parts = partitions_of(6);
    parts.choose(rng).unwrap().iter().map(|&k| (Scalar::zero(), k)).collect()
}

/// All partitions of `n` in descending lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn block_model(rng: &mut TestRng, field: FieldMode) -> BlockModel {
    let (template, blocks) = match rng.random_range(0..8) {
        0..=2 => ("symplectic", symplectic_template(rng, field)),
        3..=4 => ("sum", sum_template(rng, field)),
        5..=6 => ("generic", generic_template(rng, field)),
        _ => ("nilpotent", nilpotent_template(rng)),
    };
    BlockModel { field, blocks, template }
}

/// `P·M·P⁻¹` with `P` an invertible integer matrix, entries in `[-3, 3]`.
pub fn conjugate(rng: &mut TestRng, m: &Matrix) -> Matrix {
    let p = invertible(rng, m.rows(), 3);
    p.mul(m).mul(&p.inverse().unwrap())
}

/// A random model matrix and the field it lives in; about one in four is
/// genuinely over the Gaussian rationals.
pub fn random_model_matrix(rng: &mut TestRng) -> (BlockModel, Matrix) {
    let field = if rng.random_bool(0.25) { FieldMode::GaussianRational } else { FieldMode::Rational };
    let model = block_model(rng, field);
    let f = conjugate(rng, &model.matrix());
    (model, f)
}

/// Random form with small integer coefficients on about `density` of the blades.
pub fn random_form(rng: &mut TestRng, dim: usize, grade: usize, variance: Variance, density: f64) -> Multivector {
    let coords: Vec<Scalar> = blades(dim, grade)
        .iter()
        .map(|_| if rng.random_bool(density) { Scalar::from_i64(rng.random_range(-3i64..=3)) } else { Scalar::zero() })
        .collect();
    Multivector::from_coords(dim, grade, variance, &coords)
}

/// Random rational vector with entries in `[-bound, bound]`.
pub fn random_vector(rng: &mut TestRng, n: usize, bound: i64) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::from_i64(rng.random_range(-bound..=bound))).collect()
}

pub fn random_matrix(rng: &mut TestRng, n: usize, bound: i64) -> Matrix {
    Matrix::from_rows((0..n).map(|_| random_vector(rng, n, bound)).collect()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::segre_data;
    use crate::lie::similar;

    #[test]
    fn eleven_partitions() {
        let p = partitions_of(6);
        assert_eq!(p.len(), 11);
        assert_eq!(p[0], vec![6]);
        assert_eq!(p[10], vec![1; 6]);
    }

    #[test]
    fn realified_pair_has_gaussian_spectrum() {
        let m = BlockModel {
            field: FieldMode::Rational,
            blocks: vec![(Scalar::gaussian(1, 2), 2), (Scalar::gaussian(1, -2), 2), (Scalar::from_i64(3), 2)],
            template: "test",
        };
        let s = segre_data(&m.matrix(), 1e-7, 1e-9);
        assert!(s.exact);
        assert_eq!(s.entries.len(), 3);
        assert!(s.entries.iter().all(|e| e.blocks == vec![2]));
    }

    #[test]
    fn models_are_conjugation_closed_and_seeded() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..50 {
            let (ma, fa) = random_model_matrix(&mut a);
            let (mb, fb) = random_model_matrix(&mut b);
            assert_eq!(ma, mb);
            assert_eq!(fa, fb);
            assert_eq!(ma.size(), 6);
            assert!(similar(&fa, &ma.matrix()));
            if ma.field == FieldMode::Rational {
                assert!(fa.is_real());
            }
        }
    }
}
