//! Companion matrices of linear recurrences and their powers.
//!
//! A recurrence `F_{n+m} = Σ_k α_k F_{n+k}` is generated by the companion
//! matrix with top row `(α_{m-1}, ..., α_0)` and ones on the subdiagonal,
//! acting on windows ordered newest first, `(F_{n+m-1}, ..., F_n)`.
//! By Cayley–Hamilton `A^m = Σ_k α_k A^k`.
//!
//! Everything is generic over the scalar so the same code runs in exact
//! rational arithmetic (`BigRational`) and in complex floating point.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, Zero};
use serde::Serialize;

use crate::chebyshev::constrained_variables;
use crate::hyperbolic::eval_h;
use crate::{Error, Result};

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T: Clone + Debug + PartialEq + Num + Neg<Output = T>> Scalar for T {}

fn from_usize<T: Scalar>(k: usize) -> T {
    (0..k).fold(T::zero(), |acc, _| acc + T::one())
}

/// Coefficients `α_0 .. α_{m-1}` and seeds `F_0 .. F_{m-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSpec<T> {
    alphas: Vec<T>,
    seeds: Vec<T>,
}

impl<T: Scalar> RecurrenceSpec<T> {
    pub fn new(alphas: Vec<T>, seeds: Vec<T>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Domain("a recurrence needs order m >= 1".into()));
        }
        if seeds.len() != alphas.len() {
            return Err(Error::Dimension { expected: alphas.len(), got: seeds.len() });
        }
        Ok(Self { alphas, seeds })
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    pub fn seeds(&self) -> &[T] {
        &self.seeds
    }

    /// `F_0 ..= F_{n_max}`.
    pub fn sequence(&self, n_max: usize) -> Vec<T> {
        let m = self.order();
        let mut f: Vec<T> = self.seeds.iter().take(n_max + 1).cloned().collect();
        while f.len() <= n_max {
            let base = f.len() - m;
            let next = self
                .alphas
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (k, a)| acc + a.clone() * f[base + k].clone());
            f.push(next);
        }
        f
    }

    /// `F_{-depth} ..= F_{n_max}`, running the recurrence backwards for the
    /// negative indices. Needs an invertible `α_0`.
    pub fn sequence_from(&self, depth: usize, n_max: usize) -> Result<IndexedSequence<T>> {
        let m = self.order();
        let mut forward = self.sequence(n_max.max(m));
        if depth > 0 && self.alphas[0].is_zero() {
            return Err(Error::Domain("backward extension needs α_0 != 0".into()));
        }
        let mut back: Vec<T> = Vec::with_capacity(depth);
        for j in 1..=depth {
            // F_{-j} = (F_{m-j} - Σ_{k>=1} α_k F_{k-j}) / α_0
            let get = |i: i64, back: &Vec<T>| -> T {
                if i >= 0 {
                    forward[i as usize].clone()
                } else {
                    back[(-i - 1) as usize].clone()
                }
            };
            let j = j as i64;
            let mut acc = get(m as i64 - j, &back);
            for k in 1..m {
                acc = acc - self.alphas[k].clone() * get(k as i64 - j, &back);
            }
            back.push(acc / self.alphas[0].clone());
        }
        forward.truncate(n_max + 1);
        back.reverse();
        back.extend(forward);
        Ok(IndexedSequence { offset: depth as i64, values: back })
    }
}

/// A sequence stored with a negative starting index.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedSequence<T> {
    offset: i64,
    values: Vec<T>,
}

impl<T: Clone> IndexedSequence<T> {
    pub fn get(&self, n: i64) -> Option<T> {
        let i = n + self.offset;
        if i < 0 {
            return None;
        }
        self.values.get(i as usize).cloned()
    }
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension { expected: n, got: r.len() });
            }
            data.extend(r);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k).clone() * rhs.get(k, j).clone();
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * v[k].clone()))
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Square-and-multiply.
    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity(self.n);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Gaussian elimination, pivoting on the first nonzero entry.
    pub fn determinant(&self) -> T {
        let n = self.n;
        let mut a = self.rows();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return T::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det = det * pivot.clone();
            for r in (col + 1)..n {
                let f = a[r][col].clone() / pivot.clone();
                for c in col..n {
                    let v = a[col][c].clone();
                    a[r][c] = a[r][c].clone() - f.clone() * v;
                }
            }
        }
        det
    }

    /// Sum of the principal 2×2 minors.
    pub fn principal_minor_sum_2(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                acc = acc + self.get(i, i).clone() * self.get(j, j).clone()
                    - self.get(i, j).clone() * self.get(j, i).clone();
            }
        }
        acc
    }

    /// Coefficients `c_0 .. c_n` of `det(λI - A) = Σ c_k λ^k` (Faddeev–LeVerrier).
    pub fn characteristic_polynomial(&self) -> Vec<T> {
        let n = self.n;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut m_k = Self::zeros(n);
        for k in 1..=n {
            let prev = coeffs[n - k + 1].clone();
            m_k = self.mul(&m_k).add(&Self::identity(n).scale(&prev));
            let c = -(self.mul(&m_k).trace()) / from_usize::<T>(k);
            coeffs[n - k] = c;
        }
        coeffs
    }
}

impl Matrix<Complex64> {
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionMatrix<T> {
    alphas: Vec<T>,
    matrix: Matrix<T>,
}

impl<T: Scalar> CompanionMatrix<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// `A^m - Σ_k α_k A^k`.
    pub fn cayley_hamilton_residual(&self) -> Matrix<T> {
        let m = self.order();
        let mut rhs = Matrix::zeros(m);
        let mut power = Matrix::identity(m);
        for a in &self.alphas {
            rhs = rhs.add(&power.scale(a));
            power = power.mul(&self.matrix);
        }
        power.sub(&rhs)
    }

    /// `x^m - Σ α_k x^k` as coefficients `c_0 .. c_m`.
    pub fn expected_characteristic(&self) -> Vec<T> {
        let mut c: Vec<T> = self.alphas.iter().map(|a| -a.clone()).collect();
        c.push(T::one());
        c
    }
}

pub fn build_companion<T: Scalar>(spec: &RecurrenceSpec<T>) -> CompanionMatrix<T> {
    let m = spec.order();
    let mut matrix = Matrix::zeros(m);
    for (j, a) in spec.alphas.iter().rev().enumerate() {
        matrix.data[j] = a.clone();
    }
    for i in 1..m {
        matrix.data[i * m + i - 1] = T::one();
    }
    CompanionMatrix { alphas: spec.alphas.clone(), matrix }
}

/// One application of the companion matrix to a newest-first window.
pub fn step<T: Scalar>(spec: &RecurrenceSpec<T>, state: &[T]) -> Result<Vec<T>> {
    let m = spec.order();
    if state.len() != m {
        return Err(Error::Dimension { expected: m, got: state.len() });
    }
    let newest = spec
        .alphas
        .iter()
        .rev()
        .zip(state)
        .fold(T::zero(), |acc, (a, s)| acc + a.clone() * s.clone());
    let mut next = Vec::with_capacity(m);
    next.push(newest);
    next.extend(state[..m - 1].iter().cloned());
    Ok(next)
}

/// The seed window `(F_{m-1}, ..., F_0)`.
pub fn seed_window<T: Scalar>(spec: &RecurrenceSpec<T>) -> Vec<T> {
    spec.seeds.iter().rev().cloned().collect()
}

/// Windows `(F_{n+m-1}, ..., F_n)` for `n = 0 ..= n_max`, by iteration.
pub fn orbit<T: Scalar>(spec: &RecurrenceSpec<T>, n_max: usize) -> Vec<Vec<T>> {
    let mut state = seed_window(spec);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(state.clone());
    for _ in 0..n_max {
        state = step(spec, &state).expect("window length is the order");
        out.push(state.clone());
    }
    out
}

pub fn power<T: Scalar>(a: &CompanionMatrix<T>, n: u64) -> Matrix<T> {
    a.matrix.pow(n)
}

// ---------------------------------------------------------------------------
// closed forms of A^n

/// Outcome of comparing `A^n` with the Fibonacci-style closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub m: usize,
    pub n_max: u64,
    /// `(shift, first n where the shifted template disagrees with A^n)`;
    /// `None` means it agreed for every `n` in `0 ..= n_max`.
    pub shifts: Vec<(i64, Option<u64>)>,
    /// The smallest-magnitude shift under which every `n` agrees.
    pub matching_shift: Option<i64>,
}

impl ClosedFormReport {
    pub fn unshifted_indices_hold(&self) -> bool {
        self.shifts.iter().any(|&(s, bad)| s == 0 && bad.is_none())
    }
}

/// Candidate index shifts tried by [`closed_form_check`].
pub const SHIFT_CANDIDATES: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];

/// The template entries for `A^n` in terms of `F`, with every index lowered
/// by `shift`.
fn closed_form_template(m: usize, alphas: &[BigRational], f: &IndexedSequence<BigRational>, n: i64) -> Option<Vec<Vec<BigRational>>> {
    let g = |i: i64| f.get(i);
    match m {
        2 => {
            let q = -alphas[0].clone();
            Some(vec![
                vec![g(n + 2)?, -q.clone() * g(n + 1)?],
                vec![g(n + 1)?, -q * g(n)?],
            ])
        }
        3 => {
            let (q, r) = (alphas[1].clone(), alphas[0].clone());
            let mid = |i: i64| -> Option<BigRational> { Some(q.clone() * g(i)? + r.clone() * g(i - 1)?) };
            Some(vec![
                vec![g(n + 2)?, mid(n + 1)?, r.clone() * g(n + 1)?],
                vec![g(n + 1)?, mid(n)?, r.clone() * g(n)?],
                vec![g(n)?, mid(n - 1)?, r * g(n - 1)?],
            ])
        }
        _ => None,
    }
}

/// Compares exact powers of the companion matrix with the closed forms
///
/// ```text
/// m = 2:  A^n = [[F_{n+2}, -Q F_{n+1}], [F_{n+1}, -Q F_n]]
/// m = 3:  A^n = [[F_{n+2}, Q F_{n+1} + R F_n,     R F_{n+1}],
///                [F_{n+1}, Q F_n + R F_{n-1},     R F_n    ],
///                [F_n,     Q F_{n-1} + R F_{n-2}, R F_{n-1}]]
/// ```
///
/// under each candidate uniform index shift, for `n = 0 ..= n_max`.
/// Negative indices come from running the recurrence backwards.
pub fn closed_form_check(spec: &RecurrenceSpec<BigRational>, n_max: u64) -> Result<ClosedFormReport> {
    let m = spec.order();
    if m != 2 && m != 3 {
        return Err(Error::Domain(format!("closed forms exist for m = 2 and m = 3, got {m}")));
    }
    let depth = 8;
    let f = spec.sequence_from(depth, n_max as usize + 8)?;
    let a = build_companion(spec);
    let powers: Vec<Matrix<BigRational>> = (0..=n_max).map(|n| a.matrix.pow(n)).collect();

    let mut shifts = Vec::new();
    for &shift in &SHIFT_CANDIDATES {
        let mut first_bad = None;
        for (n, p) in powers.iter().enumerate() {
            let idx = n as i64 - shift;
            let ok = closed_form_template(m, spec.alphas(), &f, idx)
                .map(|t| Matrix::from_rows(t).map(|t| &t == p).unwrap_or(false))
                .unwrap_or(false);
            if !ok {
                first_bad = Some(n as u64);
                break;
            }
        }
        shifts.push((shift, first_bad));
    }
    let matching_shift = shifts.iter().find(|(_, bad)| bad.is_none()).map(|(s, _)| *s);
    Ok(ClosedFormReport { m, n_max, shifts, matching_shift })
}

/// Recurrence specs that reproduce Tchebysheff polynomials.
///
/// For `m = 2`: `z^2 = 2x z - 1` with `x = cosh α`, seeds `(2, 2x)`, so the
/// orbit is `2 T_n(x) = 2 cosh(nα)`.
/// For `m = 3`: characteristic roots `e^{ω^k α}`, i.e. `P = 3x`,
/// `Q = -3x*`, `R = 1`, seeds `(3, 3x, 3(3x² - 2x*))`, so the orbit is
/// `3 h_0(nα)`.
pub fn chebyshev_generator(m: usize, alpha: Complex64) -> Result<RecurrenceSpec<Complex64>> {
    match m {
        2 => {
            let x = eval_h(2, 0, alpha)?;
            RecurrenceSpec::new(vec![Complex64::new(-1.0, 0.0), 2.0 * x], vec![Complex64::new(2.0, 0.0), 2.0 * x])
        }
        3 => {
            let [x, xs, _] = constrained_variables(alpha)?;
            RecurrenceSpec::new(
                vec![Complex64::new(1.0, 0.0), -3.0 * xs, 3.0 * x],
                vec![Complex64::new(3.0, 0.0), 3.0 * x, 3.0 * (3.0 * x * x - 2.0 * xs)],
            )
        }
        _ => Err(Error::Domain(format!("Tchebysheff generators are defined for m = 2, 3; got {m}"))),
    }
}

/// Parses `-3`, `7/4` or `1.25` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Domain(format!("not a rational number: `{text}`"));
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            s => s.parse().map_err(|_| bad())?,
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = BigRational::new(int_part * &den + frac_part, den);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{binet_eval, classical_t};
    use crate::scaled_residual;

    fn q(n: i64) -> BigRational {
        rational(n)
    }

    fn fib_spec() -> RecurrenceSpec<BigRational> {
        RecurrenceSpec::new(vec![q(1), q(1)], vec![q(0), q(1)]).unwrap()
    }

    #[test]
    fn layouts() {
        // m = 2 with z^2 = Pz - Q: α_1 = P, α_0 = -Q
        let (p, qq) = (q(5), q(3));
        let a = build_companion(&RecurrenceSpec::new(vec![-qq.clone(), p.clone()], vec![q(0), q(1)]).unwrap());
        assert_eq!(a.matrix().rows(), vec![vec![p.clone(), -qq], vec![q(1), q(0)]]);
        let a3 = build_companion(&RecurrenceSpec::new(vec![q(7), q(2), q(4)], vec![q(0), q(1), q(1)]).unwrap());
        assert_eq!(
            a3.matrix().rows(),
            vec![vec![q(4), q(2), q(7)], vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]
        );
        let a1 = build_companion(&RecurrenceSpec::new(vec![q(3)], vec![q(1)]).unwrap());
        assert_eq!(a1.matrix().rows(), vec![vec![q(3)]]);
        assert_eq!(power(&a1, 4).rows(), vec![vec![q(81)]]);
    }

    #[test]
    fn spec_validation() {
        assert!(RecurrenceSpec::<BigRational>::new(vec![], vec![]).is_err());
        assert!(matches!(
            RecurrenceSpec::new(vec![q(1), q(1)], vec![q(0)]),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn stepping() {
        let spec = fib_spec();
        assert_eq!(step(&spec, &[q(1), q(0)]).unwrap(), vec![q(1), q(1)]);
        assert_eq!(step(&spec, &[q(0), q(0)]).unwrap(), vec![q(0), q(0)]);
        assert!(step(&spec, &[q(0)]).is_err());
        let trib = RecurrenceSpec::new(vec![q(1), q(1), q(1)], vec![q(0), q(1), q(1)]).unwrap();
        let seq = trib.sequence(8);
        assert_eq!(seq, [0, 1, 1, 2, 4, 7, 13, 24, 44].map(q).to_vec());
    }

    #[test]
    fn fibonacci_fifth_power() {
        let a = build_companion(&fib_spec());
        assert_eq!(power(&a, 0), Matrix::identity(2));
        // oracle: repeated multiplication
        let mut rep = Matrix::identity(2);
        for _ in 0..5 {
            rep = rep.mul(a.matrix());
        }
        assert_eq!(rep.rows(), vec![vec![q(8), q(5)], vec![q(5), q(3)]]);
        assert_eq!(power(&a, 5), rep);
    }

    #[test]
    fn invariants_of_m3_companion() {
        let (p, qq, r) = (q(2), q(-5), q(7));
        let a = build_companion(&RecurrenceSpec::new(vec![r.clone(), qq.clone(), p.clone()], vec![q(0), q(1), q(1)]).unwrap());
        assert_eq!(a.matrix().trace(), p);
        assert_eq!(a.matrix().determinant(), r);
        assert_eq!(a.matrix().principal_minor_sum_2(), -qq);
    }

    #[test]
    fn determinant_sign_alternates() {
        for m in 1..=5 {
            let alphas: Vec<_> = (0..m).map(|k| q(k as i64 + 2)).collect();
            let a = build_companion(&RecurrenceSpec::new(alphas.clone(), vec![q(0); m]).unwrap());
            let sign = if (m - 1) % 2 == 0 { q(1) } else { q(-1) };
            assert_eq!(a.matrix().determinant(), sign * alphas[0].clone());
            assert_eq!(a.matrix().trace(), alphas[m - 1].clone());
            assert_eq!(a.matrix().characteristic_polynomial(), a.expected_characteristic());
            assert!(a.cayley_hamilton_residual().is_zero());
        }
    }

    #[test]
    fn backward_extension() {
        let f = fib_spec().sequence_from(3, 5).unwrap();
        // F_{-1} = 1, F_{-2} = -1, F_{-3} = 2
        assert_eq!(f.get(-1), Some(q(1)));
        assert_eq!(f.get(-2), Some(q(-1)));
        assert_eq!(f.get(-3), Some(q(2)));
        assert_eq!(f.get(-4), None);
        assert_eq!(f.get(5), Some(q(5)));
        let singular = RecurrenceSpec::new(vec![q(0), q(1)], vec![q(0), q(1)]).unwrap();
        assert!(singular.sequence_from(1, 3).is_err());
    }

    #[test]
    fn fibonacci_closed_form_needs_unit_shift() {
        let report = closed_form_check(&fib_spec(), 12).unwrap();
        assert!(!report.unshifted_indices_hold());
        assert_eq!(report.shifts[0], (0, Some(0)));
        assert_eq!(report.matching_shift, Some(1));
    }

    #[test]
    fn tribonacci_closed_form_needs_unit_shift() {
        let trib = RecurrenceSpec::new(vec![q(1), q(1), q(1)], vec![q(0), q(1), q(1)]).unwrap();
        let report = closed_form_check(&trib, 12).unwrap();
        assert_eq!(report.matching_shift, Some(1));
        assert!(!report.unshifted_indices_hold());
    }

    #[test]
    fn m3_closed_form_depends_on_seeds() {
        // seeds (0, 1, 1) only fit when F_2 = P F_1, i.e. P = 1
        let off = RecurrenceSpec::new(vec![q(3), q(-2), q(2)], vec![q(0), q(1), q(1)]).unwrap();
        assert_eq!(closed_form_check(&off, 12).unwrap().matching_shift, None);
        let fitted = RecurrenceSpec::new(vec![q(3), q(-2), q(2)], vec![q(0), q(1), q(2)]).unwrap();
        assert_eq!(closed_form_check(&fitted, 12).unwrap().matching_shift, Some(1));
        let unit = RecurrenceSpec::new(vec![q(3), q(-2), q(2)], vec![q(0), q(0), q(1)]).unwrap();
        assert!(closed_form_check(&unit, 12).unwrap().unshifted_indices_hold());
    }

    #[test]
    fn m2_closed_form_any_p_q() {
        for (p, qq) in [(1, -1), (3, 2), (-2, 5), (4, -7)] {
            let spec = RecurrenceSpec::new(vec![q(-qq), q(p)], vec![q(0), q(1)]).unwrap();
            assert_eq!(closed_form_check(&spec, 12).unwrap().matching_shift, Some(1));
        }
    }

    #[test]
    fn closed_form_rejects_other_orders() {
        let spec = RecurrenceSpec::new(vec![q(1); 4], vec![q(0); 4]).unwrap();
        assert!(closed_form_check(&spec, 4).is_err());
    }

    #[test]
    fn orbit_matches_powers() {
        let spec = RecurrenceSpec::new(vec![q(2), q(-1), q(3)], vec![q(1), q(0), q(2)]).unwrap();
        let a = build_companion(&spec);
        let seq = spec.sequence(40);
        for (n, w) in orbit(&spec, 30).iter().enumerate() {
            assert_eq!(w, &vec![seq[n + 2].clone(), seq[n + 1].clone(), seq[n].clone()]);
            assert_eq!(&power(&a, n as u64).mul_vec(&seed_window(&spec)), w);
        }
    }

    #[test]
    fn chebyshev_generator_m2() {
        let t = 0.7;
        let spec = chebyshev_generator(2, Complex64::new(t, 0.0)).unwrap();
        let x = f64::cosh(t);
        for (n, v) in spec.sequence(15).iter().enumerate() {
            let expected = 2.0 * classical_t(n as u32, x);
            assert!(scaled_residual(*v, Complex64::new(expected, 0.0)) < 1e-10);
        }
    }

    #[test]
    fn chebyshev_generator_m3() {
        let alpha = Complex64::new(0.6, -0.8);
        let spec = chebyshev_generator(3, alpha).unwrap();
        for (n, v) in spec.sequence(15).iter().enumerate() {
            let b = binet_eval(3, alpha, n as u32).unwrap();
            assert!(scaled_residual(v / 3.0, b) < 1e-9, "n={n}");
        }
        let flat = chebyshev_generator(3, Complex64::new(0.0, 0.0)).unwrap();
        for v in flat.sequence(10) {
            assert!((v - 3.0).norm() < 1e-12);
        }
        assert!(chebyshev_generator(4, alpha).is_err());
    }

    #[test]
    fn float_mode_cayley_hamilton() {
        let spec = chebyshev_generator(3, Complex64::new(1.1, 0.3)).unwrap();
        let a = build_companion(&spec);
        assert!(a.cayley_hamilton_residual().max_norm() <= 1e-10);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3").unwrap(), q(-3));
        assert_eq!(parse_rational("7/4").unwrap(), BigRational::new(7.into(), 4.into()));
        assert_eq!(parse_rational("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }
}
