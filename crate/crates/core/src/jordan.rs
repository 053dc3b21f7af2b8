//! Jordan data and the eigenvalue-level decision procedures.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{mul_c, shift_c};
use crate::poly::invariant_factors;
use crate::matrix::{numeric_rank, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvalue {
    Exact(Scalar),
    Approx(Complex64),
}

impl Eigenvalue {
    pub fn approx(&self) -> Complex64 {
        match self {
            Eigenvalue::Exact(s) => s.to_complex(),
            Eigenvalue::Approx(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&Scalar> {
        match self {
            Eigenvalue::Exact(s) => Some(s),
            Eigenvalue::Approx(_) => None,
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Exact(s) => write!(f, "{s}"),
            Eigenvalue::Approx(z) => write!(f, "~{:.9}{:+.9}i", z.re, z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegreEntry {
    pub eigenvalue: Eigenvalue,
    /// Block sizes, descending.
    pub blocks: Vec<usize>,
}

/// Jordan block sizes per eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SegreData {
    pub entries: Vec<SegreEntry>,
    pub exact: bool,
}

fn blocks_from_ranks(ranks: &[usize], max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..=max {
        let count = (ranks[k - 1] + ranks[k + 1]).saturating_sub(2 * ranks[k]);
        out.extend(std::iter::repeat_n(k, count));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Segre data from exact ranks of `(F − λI)^k`; numeric ranks at `numeric_tol`
/// for eigenvalues that could not be certified.
pub fn segre_data(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> SegreData {
    let n = f.rows();
    let roots = f.charpoly().roots(cluster_tol);
    let mut entries = Vec::new();
    for r in &roots.roots {
        let m = r.multiplicity;
        let mut ranks = vec![n];
        match &r.exact {
            Some(lambda) => {
                let a = f.shift(lambda);
                let mut p = Matrix::identity(n);
                for _ in 0..=m {
                    if ranks.len() > 1 && ranks[ranks.len() - 1] == n - m {
                        ranks.push(n - m);
                        continue;
                    }
                    p = p.mul(&a);
                    ranks.push(p.rank());
                }
                entries.push(SegreEntry { eigenvalue: Eigenvalue::Exact(lambda.clone()), blocks: blocks_from_ranks(&ranks, m) });
            }
            None => {
                let a = shift_c(&f.to_complex(), r.approx);
                let mut p = a.clone();
                for _ in 0..=m {
                    ranks.push(numeric_rank(p.clone(), numeric_tol));
                    p = mul_c(&p, &a);
                }
                let mut blocks = blocks_from_ranks(&ranks, m);
                if blocks.iter().sum::<usize>() != m {
                    // numeric ranks were inconsistent with the multiplicity
                    blocks = vec![1; m];
                }
                entries.push(SegreEntry { eigenvalue: Eigenvalue::Approx(r.approx), blocks });
            }
        }
    }
    SegreData { entries, exact: roots.exact }
}

/// Counts of zero-eigenvalue blocks by size, from exact ranks of `F^k`.
pub fn zero_block_counts(f: &Matrix) -> Vec<usize> {
    let n = f.rows();
    let mut ranks = vec![n];
    let mut p = Matrix::identity(n);
    for _ in 0..=n {
        let k = ranks.len();
        // the rank sequence is constant once two consecutive terms agree
        if k > 1 && ranks[k - 1] == ranks[k - 2] {
            ranks.push(ranks[k - 1]);
            continue;
        }
        p = p.mul(f);
        ranks.push(p.rank());
    }
    (1..=n).map(|k| (ranks[k - 1] + ranks[k + 1]).saturating_sub(2 * ranks[k])).collect()
}

/// Outcome of the symplectic-similarity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpSimilar {
    pub value: bool,
    pub route_a: bool,
    /// Literal block pairing on exact Segre data; `None` when the spectrum is numeric.
    pub route_b: Option<bool>,
    /// Block pairing on numeric Segre data (advisory only).
    pub route_b_numeric: Option<bool>,
}

/// Route A: `F ~ −F` and, for every odd size, an even number of
/// zero-eigenvalue blocks of that size. Needs no eigenvalues.
pub fn sp_similar_route_a(f: &Matrix) -> bool {
    let minus = -Scalar::one();
    if invariant_factors(f).iter().any(|d| d.scale_variable(&minus) != *d) {
        return false;
    }
    zero_block_counts(f).iter().enumerate().all(|(k, &c)| (k + 1) % 2 == 0 || c % 2 == 0)
}

/// Route B: blocks at `λ` and `−λ` match size by size and odd-size blocks at
/// zero come in pairs.
pub fn sp_similar_route_b(s: &SegreData, tol: f64) -> bool {
    let is_zero = |e: &Eigenvalue| match e {
        Eigenvalue::Exact(x) => x.is_zero(),
        Eigenvalue::Approx(z) => z.norm() < tol,
    };
    let negates = |a: &Eigenvalue, b: &Eigenvalue| match (a, b) {
        (Eigenvalue::Exact(x), Eigenvalue::Exact(y)) => (x + y).is_zero(),
        _ => (a.approx() + b.approx()).norm() < tol,
    };
    for e in &s.entries {
        if is_zero(&e.eigenvalue) {
            let mut sizes = e.blocks.clone();
            sizes.dedup();
            for k in sizes {
                if k % 2 == 1 && e.blocks.iter().filter(|&&b| b == k).count() % 2 == 1 {
                    return false;
                }
            }
            continue;
        }
        match s.entries.iter().find(|o| negates(&e.eigenvalue, &o.eigenvalue)) {
            Some(o) if o.blocks == e.blocks => {}
            _ => return false,
        }
    }
    true
}

/// `F` is similar to an element of `sp(6)`. Both routes run; on exact
/// spectra they must agree.
pub fn sp_similar(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> Result<SpSimilar> {
    sp_similar_with(f, &segre_data(f, cluster_tol, numeric_tol), cluster_tol)
}

/// [`sp_similar`] with Segre data already computed for `f`.
pub fn sp_similar_with(f: &Matrix, s: &SegreData, cluster_tol: f64) -> Result<SpSimilar> {
    let a = sp_similar_route_a(f);
    let b = sp_similar_route_b(s, cluster_tol);
    if s.exact {
        if a != b {
            return Err(Error::CrossCheck(format!("symplectic similarity routes disagree (A: {a}, B: {b})")));
        }
        Ok(SpSimilar { value: a, route_a: a, route_b: Some(b), route_b_numeric: None })
    } else {
        Ok(SpSimilar { value: a, route_a: a, route_b: None, route_b_numeric: Some(b) })
    }
}

/// Diagonal of a Jordan normal form with the block index of each position.
#[derive(Debug, Clone, PartialEq)]
pub struct JnfLayout {
    pub lambdas: Vec<Eigenvalue>,
    pub jb: Vec<usize>,
    pub exact: bool,
}

impl JnfLayout {
    pub fn from_segre(s: &SegreData) -> Self {
        let mut lambdas = Vec::new();
        let mut jb = Vec::new();
        let mut block = 0;
        for e in &s.entries {
            for &size in &e.blocks {
                for _ in 0..size {
                    lambdas.push(e.eigenvalue.clone());
                    jb.push(block);
                }
                block += 1;
            }
        }
        JnfLayout { lambdas, jb, exact: s.exact }
    }

    /// Layout with one block per listed size, all carrying the given eigenvalues.
    pub fn from_blocks(blocks: &[(Scalar, usize)]) -> Self {
        let mut lambdas = Vec::new();
        let mut jb = Vec::new();
        for (b, (l, size)) in blocks.iter().enumerate() {
            for _ in 0..*size {
                lambdas.push(Eigenvalue::Exact(l.clone()));
                jb.push(b);
            }
        }
        JnfLayout { lambdas, jb, exact: true }
    }
}

/// Three disjoint index pairs covering `{1,…,6}` (stored 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairPartition {
    pub i1: [usize; 2],
    pub i2: [usize; 2],
    pub i3: [usize; 2],
}

impl PairPartition {
    /// All 45 candidates (15 pairings × choice of the distinguished `I3`),
    /// in lexicographic order of `(I1, I2, I3)` with `I1 < I2`.
    pub fn enumerate() -> Vec<PairPartition> {
        let pairs: Vec<[usize; 2]> = (0..6).flat_map(|a| (a + 1..6).map(move |b| [a, b])).collect();
        let mut out = Vec::new();
        for &p in &pairs {
            for &q in &pairs {
                if q <= p || q.iter().any(|x| p.contains(x)) {
                    continue;
                }
                let rest: Vec<usize> = (0..6).filter(|x| !p.contains(x) && !q.contains(x)).collect();
                out.push(PairPartition { i1: p, i2: q, i3: [rest[0], rest[1]] });
            }
        }
        out.sort_by_key(|x| (x.i1, x.i2, x.i3));
        out
    }

    /// 1-based index lists, for reports.
    pub fn one_based(&self) -> [[usize; 2]; 3] {
        let f = |p: [usize; 2]| [p[0] + 1, p[1] + 1];
        [f(self.i1), f(self.i2), f(self.i3)]
    }
}

impl Serialize for PairPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [a, b, c] = self.one_based();
        #[derive(Serialize)]
        struct P {
            i1: [usize; 2],
            i2: [usize; 2],
            i3: [usize; 2],
        }
        P { i1: a, i2: b, i3: c }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct P {
            i1: [usize; 2],
            i2: [usize; 2],
            i3: [usize; 2],
        }
        let p = P::deserialize(d)?;
        let z = |x: [usize; 2]| -> std::result::Result<[usize; 2], D::Error> {
            if x[0] == 0 || x[1] == 0 || x[0] > 6 || x[1] > 6 {
                return Err(serde::de::Error::custom("partition indices are 1-based in 1..=6"));
            }
            Ok([x[0] - 1, x[1] - 1])
        };
        Ok(PairPartition { i1: z(p.i1)?, i2: z(p.i2)?, i3: z(p.i3)? })
    }
}

/// Arithmetic on layout values: exact or within a tolerance.
trait Value: Clone {
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn half(&self) -> Self;
    fn eq(&self, o: &Self, tol: f64) -> bool;
}

impl Value for Scalar {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn half(&self) -> Self {
        self * &Scalar::ratio(1, 2)
    }
    fn eq(&self, o: &Self, _tol: f64) -> bool {
        self == o
    }
}

impl Value for Complex64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn half(&self) -> Self {
        self * 0.5
    }
    fn eq(&self, o: &Self, tol: f64) -> bool {
        (self - o).norm() < tol * (1.0 + self.norm().max(o.norm()))
    }
}

fn partition_ok<V: Value>(l: &[V], jb: &[usize], p: &PairPartition, tol: f64) -> bool {
    let sum = |i: [usize; 2]| l[i[0]].add(&l[i[1]]);
    let (s1, s2, s3) = (sum(p.i1), sum(p.i2), sum(p.i3));
    // (i)
    if !s1.eq(&s2, tol) || !s1.eq(&s3.neg(), tol) {
        return false;
    }
    let h = s3.neg().half();
    // (ii)
    for a in 0..2 {
        for b in 0..2 {
            let (i1, i2) = (p.i1[a], p.i2[b]);
            let (j1, j2) = (p.i1[1 - a], p.i2[1 - b]);
            if jb[i1] == jb[i2] && !(l[i1].eq(&h, tol) && l[i2].eq(&h, tol)) && jb[j1] != jb[j2] {
                return false;
            }
        }
    }
    // (iii)
    let i1_in_block_of_i2 = p.i2.iter().any(|&i2| p.i1.iter().all(|&j| jb[j] == jb[i2]));
    let i2_in_block_of_i1 = p.i1.iter().any(|&i1| p.i2.iter().all(|&j| jb[j] == jb[i1]));
    if i1_in_block_of_i2 || i2_in_block_of_i1 {
        let four = [p.i1[0], p.i1[1], p.i2[0], p.i2[1]];
        if !four.iter().all(|&j| l[j].eq(&h, tol)) || !four.iter().all(|&j| jb[j] == jb[four[0]]) {
            return false;
        }
    }
    true
}

/// First pair partition (in the fixed enumeration order) satisfying the
/// sum, block-sharing and single-block conditions.
pub fn partition_search(layout: &JnfLayout, tol: f64) -> Option<PairPartition> {
    if layout.lambdas.len() != 6 {
        return None;
    }
    let exact: Option<Vec<Scalar>> = layout.lambdas.iter().map(|e| e.exact().cloned()).collect();
    match exact {
        Some(l) => PairPartition::enumerate().into_iter().find(|p| partition_ok(&l, &layout.jb, p, tol)),
        None => {
            let l: Vec<Complex64> = layout.lambdas.iter().map(Eigenvalue::approx).collect();
            PairPartition::enumerate().into_iter().find(|p| partition_ok(&l, &layout.jb, p, tol))
        }
    }
}

/// The Jordan-route decisions for a single matrix.
#[derive(Debug, Clone)]
pub struct JordanDecisions {
    pub sp: SpSimilar,
    pub segre: SegreData,
    pub partition: Option<PairPartition>,
}

impl JordanDecisions {
    pub fn compute(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> Result<Self> {
        if f.rows() != 6 || !f.is_square() {
            return Err(Error::Dimension("decisions need a 6×6 matrix".into()));
        }
        let segre = segre_data(f, cluster_tol, numeric_tol);
        let sp = sp_similar_with(f, &segre, cluster_tol)?;
        let partition = partition_search(&JnfLayout::from_segre(&segre), cluster_tol);
        Ok(JordanDecisions { sp, segre, partition })
    }

    /// G₂, and (G₂)_ℂ with nondegenerate ideal.
    pub fn g2(&self) -> bool {
        self.sp.value
    }

    /// G₂*, and (G₂)_ℂ.
    pub fn g2star(&self) -> bool {
        self.partition.is_some()
    }

    /// Whether the G₂* answer rests on exact eigenvalues.
    pub fn g2star_exact(&self) -> bool {
        self.segre.exact
    }
}

pub fn decide_g2(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> Result<bool> {
    Ok(sp_similar(f, cluster_tol, numeric_tol)?.value)
}

pub fn decide_g2c_nondeg(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> Result<bool> {
    decide_g2(f, cluster_tol, numeric_tol)
}

pub fn decide_g2star(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> Result<bool> {
    Ok(JordanDecisions::compute(f, cluster_tol, numeric_tol)?.g2star())
}

pub fn decide_g2c(f: &Matrix, cluster_tol: f64, numeric_tol: f64) -> Result<bool> {
    decide_g2star(f, cluster_tol, numeric_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64]) -> Matrix {
        Matrix::diagonal(&d.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>())
    }

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
    fn segre_examples() {
        let s = segre_data(&nilpotent(&[6]), 1e-7, 1e-9);
        assert!(s.exact);
        assert_eq!(s.entries, vec![SegreEntry { eigenvalue: Eigenvalue::Exact(Scalar::zero()), blocks: vec![6] }]);
        let s = segre_data(&diag(&[2, 2, 2, 2, -2, -2]), 1e-7, 1e-9);
        assert_eq!(s.entries.len(), 2);
        assert_eq!(s.entries[0].blocks, vec![1, 1]);
        assert_eq!(s.entries[1].blocks, vec![1, 1, 1, 1]);
    }

    #[test]
    fn sp_examples() {
        assert!(sp_similar(&diag(&[1, -1, 2, -2, 0, 0]), 1e-7, 1e-9).unwrap().value);
        assert!(!sp_similar(&nilpotent(&[5, 1]), 1e-7, 1e-9).unwrap().value);
        assert!(!sp_similar(&Matrix::identity(6), 1e-7, 1e-9).unwrap().value);
        assert!(sp_similar(&nilpotent(&[2, 2, 2]), 1e-7, 1e-9).unwrap().value);
        assert!(!sp_similar(&nilpotent(&[3, 2, 1]), 1e-7, 1e-9).unwrap().value);
    }

    #[test]
    fn enumeration_order_and_size() {
        let all = PairPartition::enumerate();
        assert_eq!(all.len(), 45);
        assert_eq!(all[0], PairPartition { i1: [0, 1], i2: [2, 3], i3: [4, 5] });
    }

    #[test]
    fn partition_examples() {
        let two = Scalar::from_i64(2);
        let m2 = Scalar::from_i64(-2);
        let layout = JnfLayout::from_blocks(&[(two.clone(), 1), (two.clone(), 1), (two.clone(), 1), (two, 1), (m2.clone(), 1), (m2, 1)]);
        assert_eq!(partition_search(&layout, 1e-7), Some(PairPartition { i1: [0, 1], i2: [2, 3], i3: [4, 5] }));
        let ones = JnfLayout::from_blocks(&vec![(Scalar::one(), 1); 6]);
        assert_eq!(partition_search(&ones, 1e-7), None);
        let one_block = JnfLayout::from_blocks(&[(Scalar::zero(), 6)]);
        assert_eq!(partition_search(&one_block, 1e-7), Some(PairPartition { i1: [0, 1], i2: [2, 3], i3: [4, 5] }));
    }
}
