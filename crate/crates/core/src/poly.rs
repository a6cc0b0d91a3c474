//! Exact sparse multivariate polynomials with big-integer coefficients.
//!
//! Terms are stored in a map from exponent vector to coefficient; zero
//! coefficients are never stored. The canonical text form orders terms by
//! total degree (descending), then by exponent shape (the exponent vector
//! sorted descending, compared descending), then lexicographically
//! (descending), so that `x^3 + y^3 + z^3 - 3*x*y*z` prints pure powers
//! first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl SparsePoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Self { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c.into());
        p
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, 1)
    }

    /// The polynomial consisting of the single variable `vars[index]`.
    pub fn var<S: AsRef<str>>(vars: &[S], index: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut e = vec![0; p.vars.len()];
        e[index] = 1;
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms<S: AsRef<str>>(vars: &[S], terms: impl IntoIterator<Item = (BigInt, Exponents)>) -> Self {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length must match variable count");
            p.add_term(e, c);
        }
        p
    }

    /// Parses the canonical text form (`-3*x^2*y + 2*z - 1`).
    pub fn parse<S: AsRef<str>>(vars: &[S], text: &str) -> Result<Self> {
        let mut p = Self::zero(vars);
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Domain("empty polynomial text".into()));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'-') => (-1, &piece[1..]),
                Some(b'+') => (1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(Error::Domain(format!("dangling sign in `{text}`")));
            }
            let mut coeff = BigInt::from(sign);
            let mut exps = vec![0u32; p.vars.len()];
            for factor in body.split('*') {
                if let Ok(n) = factor.parse::<BigInt>() {
                    coeff *= n;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((name, e)) => (
                        name,
                        e.parse::<u32>()
                            .map_err(|_| Error::Domain(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = p
                    .vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::Domain(format!("unknown variable `{name}`")))?;
                exps[idx] += power;
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero(&self.vars);
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Same polynomial under new variable names (positions unchanged).
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        Self { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), terms: self.terms.clone() }
    }

    /// Substitutes `x_i -> x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.vars.len());
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; e.len()];
            for (i, &p) in perm.iter().enumerate() {
                ne[p] += e[i];
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len(), "point dimension must match variable count");
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: Complex64 = e
                    .iter()
                    .zip(point)
                    .filter(|(k, _)| **k > 0)
                    .map(|(&k, v)| v.powu(k))
                    .product();
                mono * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    pub fn eval_exact(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize))
            })
            .sum()
    }

    /// Terms in canonical display order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| canonical_order(a.0, b.0));
        v
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variable lists");
    }
}

/// Canonical term order; `Less` means "printed earlier".
pub fn canonical_order(a: &[u32], b: &[u32]) -> Ordering {
    let deg = |e: &[u32]| e.iter().sum::<u32>();
    let shape = |e: &[u32]| {
        let mut s = e.to_vec();
        s.sort_unstable_by(|x, y| y.cmp(x));
        s
    };
    deg(b)
        .cmp(&deg(a))
        .then_with(|| shape(b).cmp(&shape(a)))
        .then_with(|| b.cmp(a))
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let factors: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: Self) -> SparsePoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: Self) -> SparsePoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        SparsePoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> SparsePoly {
        self.check_vars(rhs);
        let mut out = SparsePoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn canonical_text_puts_pure_powers_first() {
        let x = SparsePoly::var(&XYZ, 0);
        let y = SparsePoly::var(&XYZ, 1);
        let z = SparsePoly::var(&XYZ, 2);
        let xyz = &(&x * &y) * &z;
        let p = &(&(&x.pow(3) + &y.pow(3)) + &z.pow(3)) - &xyz.scale(&BigInt::from(3));
        assert_eq!(p.to_string(), "x^3 + y^3 + z^3 - 3*x*y*z");
        let q = &x.pow(2) + &(&y * &z).scale(&BigInt::from(2));
        assert_eq!(q.to_string(), "x^2 + 2*y*z");
    }

    #[test]
    fn zero_and_constants() {
        assert_eq!(SparsePoly::zero(&XYZ).to_string(), "0");
        assert_eq!(SparsePoly::constant(&XYZ, -7).to_string(), "-7");
        let x = SparsePoly::var(&XYZ, 0);
        assert!((&x - &x).is_zero());
        assert_eq!((&x - &SparsePoly::one(&XYZ)).to_string(), "x - 1");
    }

    #[test]
    fn parse_reads_canonical_and_loose_forms() {
        let p = SparsePoly::parse(&XYZ, "x^3 + y^3 + z^3 - 3*x*y*z").unwrap();
        assert_eq!(p.coeff(&[1, 1, 1]), BigInt::from(-3));
        let q = SparsePoly::parse(&XYZ, "-x*x + 2*x^2 - 1 + 1").unwrap();
        assert_eq!(q.to_string(), "x^2");
        assert!(SparsePoly::parse(&XYZ, "w^2").is_err());
        assert!(SparsePoly::parse(&XYZ, "x^").is_err());
        assert!(SparsePoly::parse(&XYZ, "").is_err());
    }

    #[test]
    fn permute_vars_relabels() {
        let p = SparsePoly::parse(&XYZ, "x^2*y + 5*z").unwrap();
        let q = p.permute_vars(&[1, 2, 0]);
        assert_eq!(q, SparsePoly::parse(&XYZ, "y^2*z + 5*x").unwrap());
    }

    #[test]
    fn exact_and_float_evaluation_agree() {
        let p = SparsePoly::parse(&XYZ, "x^3 + y^3 + z^3 - 3*x*y*z").unwrap();
        let pt = [BigInt::from(2), BigInt::from(-1), BigInt::from(4)];
        let exact = p.eval_exact(&pt);
        assert_eq!(exact, BigInt::from(8 - 1 + 64 + 24));
        let fl = p.eval(&[Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(4.0, 0.0)]);
        assert_eq!(fl, Complex64::new(95.0, 0.0));
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec((-50i64..50, prop::collection::vec(0u32..4, 3)), 0..8)
            .prop_map(|ts| SparsePoly::from_terms(&XYZ, ts.into_iter().map(|(c, e)| (BigInt::from(c), e))))
    }

    proptest! {
        #[test]
        fn text_round_trip(p in arb_poly()) {
            let back = SparsePoly::parse(&XYZ, &p.to_string()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&(&a + &b) - &b) == a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in -3i64..3, y in -3i64..3, z in -3i64..3) {
            let pt = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
            prop_assert_eq!((&a * &b).eval_exact(&pt), a.eval_exact(&pt) * b.eval_exact(&pt));
            prop_assert_eq!((&a + &b).eval_exact(&pt), a.eval_exact(&pt) + b.eval_exact(&pt));
        }
    }
}
