//! Univariate polynomials over ℚ(i), Smith normal form over K[x], and root finding.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::matrix::Matrix;
use crate::scalar::{rationalize, Scalar};

/// A polynomial with coefficients stored lowest degree first. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    /// `x - a`.
    pub fn linear(a: &Scalar) -> Self {
        Poly::new(vec![-a, Scalar::one()])
    }

    pub fn x() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder. Panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * dc);
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic `p(x/γ)`: the invariant factors of `γA` from those of `A`.
    pub fn scale_variable(&self, gamma: &Scalar) -> Poly {
        let inv = gamma.inv().expect("nonzero scale");
        let mut power = Scalar::one();
        let mut coeffs = Vec::with_capacity(self.coeffs().len());
        for c in self.coeffs() {
            coeffs.push(c * &power);
            power = &power * &inv;
        }
        Poly::new(coeffs).monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_i64(k as i64))
                .collect(),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn divides(&self, o: &Poly) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.rem(self).is_zero()
    }

    /// Yun's square-free decomposition of a monic polynomial:
    /// returns `(f_k, k)` with `self = ∏ f_k^k`, each `f_k` square-free,
    /// pairwise coprime and nonconstant.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.divrem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// Numeric roots (with multiplicity) of the polynomial; see [`roots`].
    pub fn roots(&self, cluster_tol: f64) -> Roots {
        roots(self, cluster_tol)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A root of a polynomial. `exact` is set when the root was certified in ℚ(i).
#[derive(Debug, Clone)]
pub struct Root {
    pub exact: Option<Scalar>,
    pub approx: Complex64,
    pub multiplicity: usize,
}

/// All roots of a polynomial, grouped with multiplicities.
#[derive(Debug, Clone)]
pub struct Roots {
    pub roots: Vec<Root>,
    /// True when every root is exact.
    pub exact: bool,
}

impl Roots {
    /// Exact root values, when all are exact.
    pub fn exact_values(&self) -> Option<Vec<(Scalar, usize)>> {
        self.roots.iter().map(|r| r.exact.clone().map(|v| (v, r.multiplicity))).collect()
    }
}

/// Roots of `p` in ℚ(i) where certifiable, numeric elsewhere.
///
/// Multiplicities are exact (square-free decomposition). Each square-free
/// factor is solved numerically; candidate roots are rationalized, verified by
/// exact evaluation and divided out. A quadratic remainder is solved with an
/// exact square root when possible. Whatever is left stays numeric, and
/// numeric roots closer than `cluster_tol` are merged.
pub fn roots(p: &Poly, cluster_tol: f64) -> Roots {
    let mut out: Vec<Root> = Vec::new();
    let mut all_exact = true;
    for (factor, mult) in p.square_free_decomposition() {
        let (exact, rest) = exact_roots_of_squarefree(&factor);
        for r in exact {
            out.push(Root { approx: r.to_complex(), exact: Some(r), multiplicity: mult });
        }
        if rest.degree().unwrap_or(0) > 0 {
            all_exact = false;
            for z in numeric_roots(&rest) {
                out.push(Root { exact: None, approx: z, multiplicity: mult });
            }
        }
    }
    // merge numeric roots that collapse under the tolerance
    let mut merged: Vec<Root> = Vec::new();
    for r in out {
        if r.exact.is_none() {
            if let Some(m) = merged
                .iter_mut()
                .find(|m| m.exact.is_none() && (m.approx - r.approx).norm() < cluster_tol)
            {
                m.multiplicity += r.multiplicity;
                continue;
            }
        }
        merged.push(r);
    }
    merged.sort_by(|a, b| match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x.lex_cmp(y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a
            .approx
            .re
            .total_cmp(&b.approx.re)
            .then(a.approx.im.total_cmp(&b.approx.im)),
    });
    Roots { roots: merged, exact: all_exact }
}

fn candidates(x: f64) -> Vec<num_rational::BigRational> {
    let mut v = Vec::new();
    for den in [1i64, 12, 720, 100_000, 10_000_000, 1_000_000_000] {
        if let Some(r) = rationalize(x, den) {
            if !v.contains(&r) {
                v.push(r);
            }
        }
    }
    v
}

/// Split a square-free polynomial into certified ℚ(i) roots and a cofactor.
fn exact_roots_of_squarefree(f: &Poly) -> (Vec<Scalar>, Poly) {
    let mut found = Vec::new();
    let mut rest = f.monic();
    let mut changed = true;
    while changed && rest.degree().unwrap_or(0) > 0 {
        changed = false;
        match rest.degree() {
            Some(1) => {
                found.push(-&rest.coeff(0));
                rest = Poly::one();
                break;
            }
            Some(2) => {
                // x² + bx + c: roots (-b ± √(b²-4c))/2
                let b = rest.coeff(1);
                let c = rest.coeff(0);
                let disc = &(&b * &b) - &(&Scalar::from_i64(4) * &c);
                if let Some(s) = disc.sqrt() {
                    let two = Scalar::from_i64(2);
                    found.push(&(&(-&b) + &s) / &two);
                    found.push(&(&(-&b) - &s) / &two);
                    rest = Poly::one();
                    break;
                }
            }
            _ => {}
        }
        for z in numeric_roots(&rest) {
            let res = candidates(z.re);
            let ims = if z.im.abs() < 1e-12 { vec![num_rational::BigRational::zero()] } else { candidates(z.im) };
            'outer: for re in &res {
                for im in &ims {
                    let cand = Scalar::new(re.clone(), im.clone());
                    if rest.eval(&cand).is_zero() {
                        rest = rest.divrem(&Poly::linear(&cand)).0;
                        found.push(cand);
                        changed = true;
                        break 'outer;
                    }
                }
            }
            if changed {
                break;
            }
        }
    }
    (found, rest)
}

/// Numeric roots via the Aberth iteration followed by Newton polishing.
pub fn numeric_roots(p: &Poly) -> Vec<Complex64> {
    let p = p.monic();
    let n = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let c: Vec<Complex64> = p.coeffs.iter().map(Scalar::to_complex).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    let dc: Vec<Complex64> = (1..=n).map(|k| c[k] * k as f64).collect();
    let eval = |cs: &[Complex64], z: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * z + k);
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(bound.min(1e6) * 0.5 + 0.1, t)
        })
        .collect();
    for _ in 0..2000 {
        let mut maxstep: f64 = 0.0;
        for i in 0..n {
            let pv = eval(&c, z[i]);
            let dv = eval(&dc, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                maxstep = maxstep.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if maxstep < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..5 {
            let d = eval(&dc, *zi);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(&c, *zi) / d;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Invariant factors of a square matrix, via the Smith normal form of `xI - M`
/// over K[x]. Only the nonconstant factors are returned, monic and ordered so
/// that each divides the next.
pub fn invariant_factors(m: &Matrix) -> Vec<Poly> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "invariant factors need a square matrix");
    let mut a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -m.get(i, j);
                    if i == j {
                        Poly::new(vec![c, Scalar::one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        loop {
            // pivot of minimal degree in the trailing block
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(d) = a[i][j].degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let mut dirty = false;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divrem(&a[k][k]);
                for j in k..n {
                    let t = q.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = a[k][j].divrem(&a[k][k]);
                for row in a.iter_mut().skip(k) {
                    let t = q.mul(&row[k]);
                    row[j] = row[j].sub(&t);
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: pivot must divide the whole trailing block
            let mut bad = None;
            'scan: for i in k + 1..n {
                for j in k + 1..n {
                    if !a[k][k].divides(&a[i][j]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in k..n {
                        let t = a[i][j].clone();
                        a[k][j] = a[k][j].add(&t);
                    }
                }
                None => break,
            }
        }
    }
    (0..n)
        .map(|k| a[k][k].monic())
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_variable_gives_invariant_factors_of_scaled_matrix() {
        let mut rng = crate::random::rng(3);
        for _ in 0..5 {
            let (_, m) = crate::random::random_model_matrix(&mut rng);
            for gamma in [Scalar::from_i64(-1), Scalar::from_i64(3), Scalar::gaussian(1, 2)] {
                let direct = invariant_factors(&m.scale(&gamma));
                let mapped: Vec<Poly> = invariant_factors(&m).iter().map(|d| d.scale_variable(&gamma)).collect();
                assert_eq!(direct, mapped);
            }
        }
    }

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| Scalar::from_i64(x)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[1, -3, 0, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn square_free_parts() {
        // (x-1)^3 (x+2)^2 (x^2+1)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[-1, 1])).mul(&p(&[2, 1])).mul(&p(&[2, 1])).mul(&p(&[1, 0, 1]));
        let sf = f.square_free_decomposition();
        let mut prod = Poly::one();
        for (g, k) in &sf {
            for _ in 0..*k {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, f.monic());
        assert_eq!(sf.iter().map(|s| s.1).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn exact_gaussian_and_rational_roots() {
        // (x - 1/2)^2 (x^2 + 4) (x - 3)
        let f = p(&[-1, 2]).mul(&p(&[-1, 2])).mul(&p(&[4, 0, 1])).mul(&p(&[-3, 1]));
        let r = f.roots(1e-7);
        assert!(r.exact);
        let vals = r.exact_values().unwrap();
        assert_eq!(
            vals,
            vec![
                (Scalar::gaussian(0, -2), 1),
                (Scalar::gaussian(0, 2), 1),
                (Scalar::ratio(1, 2), 2),
                (Scalar::from_i64(3), 1)
            ]
        );
    }

    #[test]
    fn irrational_roots_stay_numeric() {
        let f = p(&[-2, 0, 1]).mul(&p(&[-1, 1]));
        let r = f.roots(1e-7);
        assert!(!r.exact);
        assert_eq!(r.roots.len(), 3);
        assert!(r.roots.iter().any(|x| x.exact == Some(Scalar::one())));
    }

    #[test]
    fn invariant_factors_of_jordan_blocks() {
        // J_2(0) ⊕ J_1(0) ⊕ diag(1)
        let m = Matrix::from_i64(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1]]);
        let f = invariant_factors(&m);
        assert_eq!(f, vec![p(&[0, 1]), p(&[0, 0, -1, 1])]);
    }
}
