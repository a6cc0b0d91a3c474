//! Roots of unity, truncated power series and the `Z_m` spectral operators.
//!
//! The rotation operator acts on a series by `(Ωf)(z) = f(ωz)`; the
//! projections `Δ_k = (1/m) Σ_s ω^{-ks} Ω^s` split a series into the parts
//! whose exponents are congruent to `k` modulo `m`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Cached powers `ω^0 .. ω^{m-1}` of the primitive root `ω = exp(2πi/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootOfUnityTable {
    m: usize,
    powers: Vec<Complex64>,
}

impl RootOfUnityTable {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("order m must be at least 2, got {m}")));
        }
        let powers = (0..m)
            .map(|s| {
                // Exact values at the quarter turns keep m = 2 and m = 4 free of
                // spurious imaginary parts.
                match (4 * s) % m {
                    0 => match (4 * s) / m {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    },
                    _ => Complex64::from_polar(1.0, 2.0 * PI * s as f64 / m as f64),
                }
            })
            .collect();
        Ok(Self { m, powers })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn powers(&self) -> &[Complex64] {
        &self.powers
    }

    /// `ω^e` for any integer exponent, reduced modulo `m`.
    pub fn pow(&self, e: i64) -> Complex64 {
        self.powers[e.rem_euclid(self.m as i64) as usize]
    }

    /// The primitive root `ω` itself.
    pub fn omega(&self) -> Complex64 {
        self.powers[1]
    }
}

/// Power series `c_0 + c_1 z + ... + c_N z^N` truncated at order `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    /// `exp(z)` to order `N`: coefficients `1/j!`.
    pub fn exp(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = 1.0;
        for j in 0..=order {
            if j > 0 {
                c /= j as f64;
            }
            coeffs.push(Complex64::new(c, 0.0));
        }
        Self { coeffs }
    }

    /// `1/(1-z)` to order `N`: every coefficient is one.
    pub fn geometric(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(1.0, 0.0); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient-wise comparison with absolute tolerance `tol` scaled by the
    /// larger of the two maximum coefficient magnitudes (and at least one).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| (a - b).norm() <= tol * scale)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Self { coeffs: (0..n).map(|j| f(self.coeffs[j], rhs.coeffs[j])).collect() }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Cauchy product; terms beyond the common truncation order are dropped.
impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|j| (0..=j).map(|i| self.coeffs[i] * rhs.coeffs[j - i]).sum())
            .collect();
        TruncatedSeries { coeffs }
    }
}

/// `Ω^s f`, i.e. the series of `f(ω^s z)`.
pub fn apply_omega(f: &TruncatedSeries, w: &RootOfUnityTable, s: usize) -> TruncatedSeries {
    let s = s as i64;
    TruncatedSeries {
        coeffs: f
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * w.pow(s * j as i64))
            .collect(),
    }
}

/// `Δ_k f` by index masking: keeps the coefficients at `j ≡ k (mod m)`.
pub fn project_delta(f: &TruncatedSeries, w: &RootOfUnityTable, k: usize) -> TruncatedSeries {
    let m = w.order();
    let k = k % m;
    TruncatedSeries {
        coeffs: f
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % m == k { c } else { Complex64::new(0.0, 0.0) })
            .collect(),
    }
}

/// `Δ_k f` through the literal operator sum `(1/m) Σ_s ω^{-ks} Ω^s f`.
///
/// Kept as an independent route for cross-checking [`project_delta`].
pub fn project_delta_by_sum(f: &TruncatedSeries, w: &RootOfUnityTable, k: usize) -> TruncatedSeries {
    let m = w.order();
    let inv_m = Complex64::new(1.0 / m as f64, 0.0);
    let mut acc = TruncatedSeries::zero(f.order());
    for s in 0..m {
        let weight = w.pow(-((k * s) as i64)) * inv_m;
        acc = &acc + &apply_omega(f, w, s).scale(weight);
    }
    acc
}

/// Series of the hyperbolic function `h_k` of order `m`:
/// coefficient `1/j!` at `j ≡ k (mod m)`, zero elsewhere.
pub fn hyperbolic_series(m: usize, k: usize, order: usize) -> Result<TruncatedSeries> {
    let w = RootOfUnityTable::new(m)?;
    if k >= m {
        return Err(Error::Domain(format!("grade k = {k} must be below m = {m}")));
    }
    Ok(project_delta(&TruncatedSeries::exp(order), &w, k))
}

/// Series of the m-geometric function `g_k`: ones at `j ≡ k (mod m)`.
pub fn geometric_series(m: usize, k: usize, order: usize) -> Result<TruncatedSeries> {
    let w = RootOfUnityTable::new(m)?;
    if k >= m {
        return Err(Error::Domain(format!("grade k = {k} must be below m = {m}")));
    }
    Ok(project_delta(&TruncatedSeries::geometric(order), &w, k))
}
