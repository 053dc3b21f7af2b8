//! Sparse exterior algebra over ℚ(i).
//!
//! Basis blades are bitmasks (bit `i` ↔ index `i`, 0-based); the file format
//! and [`Multivector::from_indices`] convert from 1-based index lists.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub type Blade = u32;

pub const MAX_DIM: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Vector,
    Form,
}

impl Variance {
    pub fn dual(self) -> Variance {
        match self {
            Variance::Vector => Variance::Form,
            Variance::Form => Variance::Vector,
        }
    }
}

/// Indices (0-based, ascending) of a blade.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..MAX_DIM).filter(|i| b >> i & 1 == 1).collect()
}

pub fn blade_from_indices(idx: &[usize]) -> Blade {
    idx.iter().fold(0, |b, &i| b | 1 << i)
}

/// Sign of `e_a ∧ e_b = ±e_{a∪b}` for disjoint blades: parity of pairs
/// `(i ∈ a, j ∈ b)` with `i > j`.
pub fn concat_sign(a: Blade, b: Blade) -> i64 {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 31 { 0 } else { a & !((1u32 << (j + 1)) - 1) };
        count += above.count_ones();
    }
    if count.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All blades of the given grade in dimension `dim`, in lexicographic order
/// of their index tuples.
/// The `k`-th compound of a square matrix: `out[a][b] = det m[I_a, J_b]` over
/// [`blades`]`(n, k)`, by Laplace expansion along the first row, level by level.
pub fn compound(m: &Matrix, k: usize) -> Vec<Vec<Scalar>> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "compound needs a square matrix");
    let mut prev: HashMap<(Blade, Blade), Scalar> = HashMap::new();
    prev.insert((0, 0), Scalar::one());
    for r in 1..=k {
        let subsets = blades(n, r);
        let mut next = HashMap::with_capacity(subsets.len() * subsets.len());
        for &rows in &subsets {
            let top = rows.trailing_zeros() as usize;
            let rest = rows & (rows - 1);
            for &cols in &subsets {
                let mut acc = Scalar::zero();
                for (t, c) in blade_indices(cols).into_iter().enumerate() {
                    let a = m.get(top, c);
                    if a.is_zero() {
                        continue;
                    }
                    let minor = &prev[&(rest, cols & !(1 << c))];
                    if minor.is_zero() {
                        continue;
                    }
                    let term = a * minor;
                    if t % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                next.insert((rows, cols), acc);
            }
        }
        prev = next;
    }
    let bs = blades(n, k);
    bs.iter().map(|&i| bs.iter().map(|&j| prev[&(i, j)].clone()).collect()).collect()
}

pub fn blades(dim: usize, grade: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..grade).collect();
    if grade > dim {
        return out;
    }
    loop {
        out.push(blade_from_indices(&idx));
        let mut k = grade;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < dim - grade + k {
                idx[k] += 1;
                for m in k + 1..grade {
                    idx[m] = idx[m - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A homogeneous element of `Λᵏ V` or `Λᵏ V*`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    dim: usize,
    grade: usize,
    variance: Variance,
    terms: BTreeMap<Blade, Scalar>,
}

impl Multivector {
    pub fn zero(dim: usize, grade: usize, variance: Variance) -> Self {
        assert!(dim <= MAX_DIM && grade <= dim, "grade {grade} out of range for dimension {dim}");
        Multivector { dim, grade, variance, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, variance: Variance, c: Scalar) -> Self {
        let mut m = Multivector::zero(dim, 0, variance);
        m.add_term(0, c);
        m
    }

    /// A single basis blade from 0-based indices in any order (sign applied).
    pub fn basis(dim: usize, variance: Variance, idx: &[usize]) -> Self {
        Multivector::from_indices(dim, variance, &[(idx.to_vec(), Scalar::one())]).expect("valid basis indices")
    }

    /// Build from `(0-based indices, coefficient)` pairs; indices may be unsorted
    /// (the permutation sign is applied) and repeated indices give zero.
    pub fn from_indices(dim: usize, variance: Variance, terms: &[(Vec<usize>, Scalar)]) -> Result<Self> {
        let grade = terms.first().map_or(0, |t| t.0.len());
        if dim > MAX_DIM || grade > dim {
            return Err(Error::Dimension(format!("grade {grade} in dimension {dim}")));
        }
        let mut m = Multivector::zero(dim, grade, variance);
        for (idx, c) in terms {
            if idx.len() != grade {
                return Err(Error::Dimension("mixed grades in one multivector".into()));
            }
            if idx.iter().any(|&i| i >= dim) {
                return Err(Error::Dimension(format!("index out of range for dimension {dim}")));
            }
            let mut s = idx.clone();
            let mut sign = 1i64;
            // bubble sort keeps track of the permutation parity
            for a in 0..s.len() {
                for b in 0..s.len() - 1 - a {
                    if s[b] > s[b + 1] {
                        s.swap(b, b + 1);
                        sign = -sign;
                    }
                }
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let c = if sign < 0 { -c } else { c.clone() };
            m.add_term(blade_from_indices(&s), c);
        }
        Ok(m)
    }

    /// Shorthand with 1-based integer indices and integer coefficients.
    pub fn from_int_terms(dim: usize, variance: Variance, terms: &[(&[usize], i64)]) -> Self {
        let t: Vec<(Vec<usize>, Scalar)> =
            terms.iter().map(|(idx, c)| (idx.iter().map(|i| i - 1).collect(), Scalar::from_i64(*c))).collect();
        Multivector::from_indices(dim, variance, &t).expect("valid literal")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    /// Coefficient of the top blade (for grade = dim).
    pub fn top_coeff(&self) -> Scalar {
        self.coeff(((1u64 << self.dim) - 1) as Blade)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    fn add_term(&mut self, b: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    fn same_space(&self, o: &Multivector) -> Result<()> {
        if self.dim != o.dim || self.variance != o.variance {
            return Err(Error::Dimension("multivectors live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Multivector) -> Multivector {
        self.same_space(o).expect("add: incompatible spaces");
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.grade, o.grade, "add: grade mismatch");
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Multivector) -> Multivector {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Multivector {
        self.scale(&Scalar::from_i64(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Multivector {
        let mut out = Multivector::zero(self.dim, self.grade, self.variance);
        if s.is_zero() {
            return out;
        }
        for (b, c) in &self.terms {
            out.terms.insert(*b, c * s);
        }
        out
    }

    /// Exterior product. Panics on mismatched spaces; see [`Multivector::try_wedge`].
    pub fn wedge(&self, o: &Multivector) -> Multivector {
        self.try_wedge(o).expect("wedge of incompatible multivectors")
    }

    pub fn try_wedge(&self, o: &Multivector) -> Result<Multivector> {
        self.same_space(o)?;
        let grade = self.grade + o.grade;
        if grade > self.dim {
            return Ok(Multivector { dim: self.dim, grade: self.dim, variance: self.variance, terms: BTreeMap::new() });
        }
        let mut out = Multivector::zero(self.dim, grade, self.variance);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let p = ca * cb;
                let p = if concat_sign(*a, *b) < 0 { -p } else { p };
                out.add_term(a | b, p);
            }
        }
        Ok(out)
    }

    /// `self^k` under the wedge product.
    pub fn wedge_power(&self, k: usize) -> Multivector {
        let mut acc = Multivector::scalar(self.dim, self.variance, Scalar::one());
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Interior product `x ⌟ self` of an element of the opposite variance,
    /// contracting into the leading slots: `e_I ⌟ e^J = sign(I, J∖I) e^{J∖I}`.
    pub fn interior(x: &Multivector, rho: &Multivector) -> Result<Multivector> {
        if x.dim != rho.dim || x.variance != rho.variance.dual() {
            return Err(Error::Dimension("interior product needs opposite variances".into()));
        }
        if x.grade > rho.grade {
            return Ok(Multivector::zero(rho.dim, 0, rho.variance));
        }
        let mut out = Multivector::zero(rho.dim, rho.grade - x.grade, rho.variance);
        for (i, ci) in &x.terms {
            for (j, cj) in &rho.terms {
                if i & j != *i {
                    continue;
                }
                let rest = j & !i;
                let p = ci * cj;
                let p = if concat_sign(*i, rest) < 0 { -p } else { p };
                out.add_term(rest, p);
            }
        }
        Ok(out)
    }

    /// `alpha ⌟ self` for a one-form or vector `alpha` of opposite variance.
    pub fn contract(&self, alpha: &Multivector) -> Multivector {
        Multivector::interior(alpha, self).expect("contract: incompatible spaces")
    }

    /// Full pairing `⟨form, vector⟩` of equal grades, with `e^I(e_I) = 1`.
    pub fn pair(&self, o: &Multivector) -> Scalar {
        assert!(self.dim == o.dim && self.variance != o.variance && self.grade == o.grade);
        self.terms.iter().map(|(b, c)| c * &o.coeff(*b)).sum()
    }

    /// Induced action `f_*` on each factor: `f_*(e_I) = Σ_J det(f[J,I]) e_J`.
    /// For forms the same matrix acts on the underlying covector space.
    pub fn pushforward(&self, f: &Matrix) -> Multivector {
        assert!(f.rows() == self.dim && f.cols() == self.dim, "pushforward: matrix size mismatch");
        let mut out = Multivector::zero(self.dim, self.grade, self.variance);
        let targets = blades(self.dim, self.grade);
        for (i, ci) in &self.terms {
            let ii = blade_indices(*i);
            for j in &targets {
                let jj = blade_indices(*j);
                let d = f.submatrix(&jj, &ii).det();
                if !d.is_zero() {
                    out.add_term(*j, &d * ci);
                }
            }
        }
        out
    }

    /// Natural action of `f ∈ gl(V)` on a form:
    /// `(f.ρ)(v₁,…,v_k) = −Σᵢ ρ(v₁,…,f vᵢ,…,v_k)`.
    pub fn derivation_action(f: &Matrix, rho: &Multivector) -> Multivector {
        assert_eq!(rho.variance, Variance::Form, "derivation action is defined on forms");
        let n = rho.dim;
        assert!(f.rows() == n && f.cols() == n);
        let mut out = Multivector::zero(n, rho.grade, Variance::Form);
        for (b, c) in &rho.terms {
            let idx = blade_indices(*b);
            for (pos, &p) in idx.iter().enumerate() {
                // e^p ∘ f = Σ_j f[p][j] e^j, substituted in slot `pos`
                for j in 0..n {
                    let fpj = f.get(p, j);
                    if fpj.is_zero() {
                        continue;
                    }
                    let mut new_idx = idx.clone();
                    new_idx[pos] = j;
                    let Some((blade, sign)) = sorted_blade(&new_idx) else { continue };
                    let v = &(fpj * c) * &Scalar::from_i64(-sign);
                    out.add_term(blade, v);
                }
            }
        }
        out
    }

    /// Rank of `X`: dimension of the image of `α ↦ α ⌟ X` on degree-one
    /// elements of the dual. The support is spanned by the vectors
    /// `A ⌟ X` over (k−1)-blades `A`.
    pub fn rank_support(&self) -> (usize, Vec<Vec<Scalar>>) {
        if self.is_zero() || self.grade == 0 {
            return (0, Vec::new());
        }
        let dual = self.variance.dual();
        let mut rows = Vec::new();
        for a in blades(self.dim, self.grade - 1) {
            let x = Multivector { dim: self.dim, grade: self.grade - 1, variance: dual, terms: [(a, Scalar::one())].into() };
            let v = Multivector::interior(&x, self).unwrap();
            rows.push((0..self.dim).map(|i| v.coeff(1 << i)).collect::<Vec<_>>());
        }
        let m = Matrix::from_rows(rows).unwrap();
        let (r, pivots) = m.rref();
        let basis: Vec<Vec<Scalar>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        (basis.len(), basis)
    }

    /// Length of a 2-vector or 2-form: the `l` with `X^l ≠ 0 = X^{l+1}`.
    pub fn length_grade2(&self) -> usize {
        assert_eq!(self.grade, 2, "length_grade2 needs grade 2");
        let mut acc = Multivector::scalar(self.dim, self.variance, Scalar::one());
        let mut l = 0;
        loop {
            acc = acc.wedge(self);
            if acc.is_zero() {
                return l;
            }
            l += 1;
        }
    }

    /// Length of a grade-(n−2) element, via its dual 2-form or 2-vector.
    pub fn length_cograde2(&self, vol: &Volume) -> Result<usize> {
        if self.grade + 2 != self.dim {
            return Err(Error::Dimension("length_cograde2 needs grade dim-2".into()));
        }
        Ok(dual_iso(self, vol)?.length_grade2())
    }

    /// Write a 2-vector (or 2-form) as `Σ v_{2i−1} ∧ v_{2i}` with `2l` exact
    /// vectors, completed by standard basis vectors to a basis of the space.
    pub fn symplectic_basis(&self) -> SymplecticBasis {
        assert_eq!(self.grade, 2, "symplectic_basis needs grade 2");
        let n = self.dim;
        let dual = self.variance.dual();
        let mut x = self.clone();
        let mut vecs: Vec<Vec<Scalar>> = Vec::new();
        while let Some((&b, _)) = x.terms.iter().next() {
            let idx = blade_indices(b);
            let alpha = Multivector::basis(n, dual, &[idx[0]]);
            let beta = Multivector::basis(n, dual, &[idx[1]]);
            let u = Multivector::interior(&alpha, &x).unwrap();
            let w = Multivector::interior(&beta, &x).unwrap();
            let c = Multivector::interior(&beta, &u).unwrap().coeff(0);
            let w = w.scale(&c.inv().expect("nonzero pairing"));
            x = x.sub(&u.wedge(&w));
            vecs.push((0..n).map(|i| u.coeff(1 << i)).collect());
            vecs.push((0..n).map(|i| w.coeff(1 << i)).collect());
        }
        let length = vecs.len() / 2;
        // complete with standard vectors
        for i in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[i] = Scalar::one();
            let mut trial = vecs.clone();
            trial.push(e);
            if Matrix::from_rows(trial.clone()).unwrap().rank() == trial.len() {
                vecs = trial;
            }
            if vecs.len() == n {
                break;
            }
        }
        SymplecticBasis { length, vectors: vecs }
    }

    /// The same terms viewed in dimension `dim`; fails if an index does not fit.
    pub fn reembed(&self, dim: usize) -> Result<Multivector> {
        if dim > MAX_DIM || self.grade > dim || self.terms.keys().any(|b| (*b as u64) >> dim != 0) {
            return Err(Error::Dimension(format!("cannot view element in dimension {dim}")));
        }
        Ok(Multivector { dim, grade: self.grade, variance: self.variance, terms: self.terms.clone() })
    }

    /// Split along the last basis index: `self = a + b ∧ e^n`, with `a` and
    /// `b` living in dimension `n − 1`.
    pub fn split_last(&self) -> (Multivector, Multivector) {
        let n = self.dim;
        assert!(n > 0 && self.grade > 0);
        let last: Blade = 1 << (n - 1);
        let mut a = Multivector::zero(n - 1, self.grade.min(n - 1), self.variance);
        let mut b = Multivector::zero(n - 1, self.grade - 1, self.variance);
        for (blade, c) in &self.terms {
            if blade & last == 0 {
                a.terms.insert(*blade, c.clone());
            } else {
                b.terms.insert(blade & !last, c.clone());
            }
        }
        (a, b)
    }

    pub fn vector_from_coords(coords: &[Scalar], variance: Variance) -> Multivector {
        let mut m = Multivector::zero(coords.len(), 1, variance);
        for (i, c) in coords.iter().enumerate() {
            m.add_term(1 << i, c.clone());
        }
        m
    }

    pub fn coords(&self) -> Vec<Scalar> {
        blades(self.dim, self.grade).into_iter().map(|b| self.coeff(b)).collect()
    }

    pub fn from_coords(dim: usize, grade: usize, variance: Variance, coords: &[Scalar]) -> Multivector {
        let mut m = Multivector::zero(dim, grade, variance);
        for (b, c) in blades(dim, grade).into_iter().zip(coords) {
            m.add_term(b, c.clone());
        }
        m
    }
}

/// Sort indices, returning the blade and permutation sign; `None` on repeats.
fn sorted_blade(idx: &[usize]) -> Option<(Blade, i64)> {
    let mut s = idx.to_vec();
    let mut sign = 1;
    for a in 0..s.len() {
        for b in 0..s.len().saturating_sub(1 + a) {
            if s[b] > s[b + 1] {
                s.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((blade_from_indices(&s), sign))
}

/// Output of [`Multivector::symplectic_basis`].
#[derive(Debug, Clone)]
pub struct SymplecticBasis {
    pub length: usize,
    /// `vectors[0..2·length]` are the Darboux pairs, the rest a completion.
    pub vectors: Vec<Vec<Scalar>>,
}

/// A nonzero top-degree element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume(Multivector);

impl Volume {
    pub fn new(m: Multivector) -> Result<Self> {
        if m.grade != m.dim || m.is_zero() {
            return Err(Error::Dimension("a volume element must be a nonzero top-degree element".into()));
        }
        Ok(Volume(m))
    }

    /// `c · e^{1…n}` (or `c · e_{1…n}`).
    pub fn scaled(dim: usize, variance: Variance, c: Scalar) -> Result<Self> {
        let idx: Vec<usize> = (0..dim).collect();
        Volume::new(Multivector::basis(dim, variance, &idx).scale(&c))
    }

    pub fn standard(dim: usize, variance: Variance) -> Self {
        Volume::scaled(dim, variance, Scalar::one()).unwrap()
    }

    pub fn coeff(&self) -> Scalar {
        self.0.top_coeff()
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn variance(&self) -> Variance {
        self.0.variance
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// The dual volume `ν` with `ν(vol) = 1`.
    pub fn dual(&self) -> Volume {
        Volume::scaled(self.dim(), self.variance().dual(), self.coeff().inv().unwrap()).unwrap()
    }
}

/// `δ(X) = X ⌟ vol`, so that `δ(X)(Y) = vol(X ∧ Y)`.
pub fn dual_iso(x: &Multivector, vol: &Volume) -> Result<Multivector> {
    if x.variance == vol.variance() {
        return Err(Error::Dimension("dual_iso needs a volume of the opposite variance".into()));
    }
    Multivector::interior(x, vol.as_multivector())
}

/// Inverse of [`dual_iso`]: the unique `X` with `X ⌟ vol = ψ`.
pub fn dual_iso_inverse(psi: &Multivector, vol: &Volume) -> Result<Multivector> {
    if psi.variance != vol.variance() || psi.dim != vol.dim() {
        return Err(Error::Dimension("dual_iso_inverse needs an element of the volume's space".into()));
    }
    let n = psi.dim;
    let full: Blade = ((1u64 << n) - 1) as Blade;
    let cinv = vol.coeff().inv().unwrap();
    let mut out = Multivector::zero(n, n - psi.grade, psi.variance.dual());
    for (j, c) in &psi.terms {
        let comp = full & !j;
        let v = c * &cinv;
        out.add_term(comp, if concat_sign(comp, *j) < 0 { -v } else { v });
    }
    Ok(out)
}

fn fmt_blade(b: Blade, variance: Variance) -> String {
    let idx: String = blade_indices(b).iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
    match variance {
        Variance::Vector => format!("e_{{{idx}}}"),
        Variance::Form => format!("e^{{{idx}}}"),
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, c)| format!("({c}){}", fmt_blade(*b, self.variance))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    indices: Vec<usize>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct FormRecord {
    dim: usize,
    grade: usize,
    variance: Variance,
    terms: Vec<TermRecord>,
}

impl Serialize for Multivector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRecord {
            dim: self.dim,
            grade: self.grade,
            variance: self.variance,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| TermRecord { indices: blade_indices(*b).iter().map(|i| i + 1).collect(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = FormRecord::deserialize(d)?;
        if r.dim > MAX_DIM || r.grade > r.dim {
            return Err(D::Error::custom("grade exceeds dimension"));
        }
        let mut m = Multivector::zero(r.dim, r.grade, r.variance);
        for t in r.terms {
            if t.indices.len() != r.grade {
                return Err(D::Error::custom("term length differs from grade"));
            }
            if t.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(D::Error::custom("term indices must be strictly increasing"));
            }
            if t.indices.iter().any(|&i| i == 0 || i > r.dim) {
                return Err(D::Error::custom("term index out of range (indices are 1-based)"));
            }
            let idx: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
            m.add_term(blade_from_indices(&idx), t.coeff);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compound_matches_submatrix_determinants() {
        let mut rng = crate::random::rng(7);
        let m = crate::random::random_matrix(&mut rng, 5, 3);
        for k in 0..=5 {
            let c = compound(&m, k);
            let bs = blades(5, k);
            for (a, &i) in bs.iter().enumerate() {
                for (b, &j) in bs.iter().enumerate() {
                    assert_eq!(c[a][b], m.submatrix(&blade_indices(i), &blade_indices(j)).det(), "k={k}");
                }
            }
        }
    }

    fn v(dim: usize, t: &[(&[usize], i64)]) -> Multivector {
        Multivector::from_int_terms(dim, Variance::Vector, t)
    }

    fn f(dim: usize, t: &[(&[usize], i64)]) -> Multivector {
        Multivector::from_int_terms(dim, Variance::Form, t)
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(v(3, &[(&[1], 1)]).wedge(&v(3, &[(&[2], 1)])), v(3, &[(&[1, 2], 1)]));
        assert!(v(3, &[(&[1, 2], 1)]).wedge(&v(3, &[(&[1, 3], 1)])).is_zero());
        let x = v(6, &[(&[1, 2], 1), (&[3, 4], 1), (&[5, 6], 1)]);
        assert_eq!(x.wedge_power(3), v(6, &[(&[1, 2, 3, 4, 5, 6], 6)]));
    }

    #[test]
    fn unsorted_indices_carry_sign() {
        assert_eq!(v(3, &[(&[2, 1], 1)]), v(3, &[(&[1, 2], -1)]));
        assert!(v(3, &[(&[2, 2], 1)]).is_zero());
    }

    #[test]
    fn contraction_slot_one() {
        let x = v(3, &[(&[1, 2, 3], 1)]);
        assert_eq!(x.contract(&f(3, &[(&[1], 1)])), v(3, &[(&[2, 3], 1)]));
        assert_eq!(x.contract(&f(3, &[(&[2], 1)])), v(3, &[(&[1, 3], -1)]));
        assert!(v(4, &[(&[1, 2, 3], 1)]).contract(&f(4, &[(&[4], 1)])).is_zero());
    }

    #[test]
    fn dual_iso_examples() {
        let vol = Volume::standard(6, Variance::Form);
        assert_eq!(dual_iso(&v(6, &[(&[1, 2, 3], 1)]), &vol).unwrap(), f(6, &[(&[4, 5, 6], 1)]));
        let y = v(6, &[(&[3, 4, 5, 6], 1), (&[1, 2, 5, 6], 1)]);
        assert_eq!(dual_iso(&y, &vol).unwrap(), f(6, &[(&[1, 2], 1), (&[3, 4], 1)]));
        for k in 0..=6 {
            for b in blades(6, k) {
                let x = Multivector { dim: 6, grade: k, variance: Variance::Vector, terms: [(b, Scalar::ratio(3, 2))].into() };
                let vol2 = Volume::scaled(6, Variance::Form, Scalar::from_i64(-5)).unwrap();
                assert_eq!(dual_iso_inverse(&dual_iso(&x, &vol2).unwrap(), &vol2).unwrap(), x);
            }
        }
    }

    #[test]
    fn derivation_action_examples() {
        let id = Matrix::identity(4);
        let rho = f(4, &[(&[1, 2], 3), (&[2, 4], -1)]);
        assert_eq!(Multivector::derivation_action(&id, &rho), rho.scale(&Scalar::from_i64(-2)));
        let mut e11 = Matrix::zeros(4, 4);
        e11.set(0, 0, Scalar::one());
        assert_eq!(Multivector::derivation_action(&e11, &f(4, &[(&[1], 1)])), f(4, &[(&[1], -1)]));
    }

    #[test]
    fn lengths_and_ranks() {
        assert_eq!(v(6, &[(&[1, 2], 1), (&[3, 4], 1), (&[5, 6], 1)]).length_grade2(), 3);
        assert_eq!(v(6, &[(&[1, 2], 1), (&[1, 3], 1)]).length_grade2(), 1);
        assert_eq!(Multivector::zero(6, 2, Variance::Vector).length_grade2(), 0);
        assert_eq!(v(4, &[(&[1, 2, 3], 1)]).rank_support().0, 3);
        assert_eq!(Multivector::zero(4, 2, Variance::Vector).rank_support().0, 0);
        let vol = Volume::standard(6, Variance::Form);
        assert_eq!(v(6, &[(&[3, 4, 5, 6], 1), (&[1, 2, 5, 6], 1)]).length_cograde2(&vol).unwrap(), 2);
        assert_eq!(v(6, &[(&[3, 4, 5, 6], 1), (&[1, 2, 5, 6], 1), (&[1, 2, 3, 4], 1)]).length_cograde2(&vol).unwrap(), 3);
        assert_eq!(v(6, &[(&[1, 2, 3, 4], 1)]).length_cograde2(&vol).unwrap(), 1);
    }

    #[test]
    fn symplectic_basis_rewedges() {
        let x = v(6, &[(&[1, 2], 2), (&[1, 3], 1), (&[4, 6], -3), (&[2, 5], 1)]);
        let sb = x.symplectic_basis();
        assert_eq!(sb.length, x.length_grade2());
        assert_eq!(sb.vectors.len(), 6);
        let mut y = Multivector::zero(6, 2, Variance::Vector);
        for i in 0..sb.length {
            let a = Multivector::vector_from_coords(&sb.vectors[2 * i], Variance::Vector);
            let b = Multivector::vector_from_coords(&sb.vectors[2 * i + 1], Variance::Vector);
            y = y.add(&a.wedge(&b));
        }
        assert_eq!(y, x);
        assert_eq!(Matrix::from_rows(sb.vectors).unwrap().rank(), 6);
    }

    #[test]
    fn form_record_round_trip() {
        let x = f(7, &[(&[1, 2, 7], 1), (&[3, 4, 7], -2)]);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"indices\":[1,2,7]"));
        let y: Multivector = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<Multivector>(r#"{"dim":3,"grade":2,"variance":"form","terms":[{"indices":[2,1],"coeff":"1"}]}"#).is_err());
    }
}
