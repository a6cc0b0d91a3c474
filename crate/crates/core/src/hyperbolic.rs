//! Pointwise evaluation of the hyperbolic functions of order `m`.
//!
//! `h_k(z) = (1/m) Σ_j ω^{-kj} exp(ω^j z)` are the `Z_m`-graded parts of
//! `exp`; for `m = 2` they are `cosh` and `sinh`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectral::RootOfUnityTable;
use crate::{Error, Result};

/// Largest real part accepted by `exp` before the result overflows `f64`.
const EXP_LIMIT: f64 = 709.0;

/// Below this modulus the power series is summed directly. The Euler form
/// loses relative accuracy on the small grades there (`h_k(z) ~ z^k/k!`).
const SERIES_RADIUS: f64 = 1.0;

const SERIES_TERMS: usize = 40;

/// The vector `(h_0(α), ..., h_{m-1}(α))`.
///
/// It is the first row of the circulant de Moivre matrix `H(α)` and a point
/// on the volume-one hyperbolon surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub m: usize,
    pub alpha: Complex64,
    pub h: Vec<Complex64>,
}

impl HyperbolicPoint {
    pub fn component(&self, k: usize) -> Complex64 {
        self.h[k % self.m]
    }

    pub fn sum(&self) -> Complex64 {
        self.h.iter().sum()
    }
}

fn check_order(m: usize, k: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("order m must be at least 2, got {m}")));
    }
    if k >= m {
        return Err(Error::Domain(format!("grade k = {k} must be below m = {m}")));
    }
    Ok(())
}

/// `exp(ω^j z)` for every `j`, or a range error if any of them overflows.
fn rotated_exponentials(w: &RootOfUnityTable, z: Complex64) -> Result<Vec<Complex64>> {
    w.powers()
        .iter()
        .map(|&p| {
            let arg = p * z;
            if arg.re > EXP_LIMIT {
                Err(Error::Range(format!("exp({arg}) overflows f64")))
            } else {
                Ok(arg.exp())
            }
        })
        .collect()
}

fn series_grades(m: usize, z: Complex64) -> Vec<Complex64> {
    let mut grades = vec![Complex64::new(0.0, 0.0); m];
    let mut term = Complex64::new(1.0, 0.0);
    for j in 0..SERIES_TERMS {
        if j > 0 {
            term = term * z / j as f64;
        }
        grades[j % m] += term;
    }
    grades
}

fn euler_grades(w: &RootOfUnityTable, z: Complex64) -> Result<Vec<Complex64>> {
    let m = w.order();
    let exps = rotated_exponentials(w, z)?;
    let inv_m = 1.0 / m as f64;
    Ok((0..m)
        .map(|k| {
            let s: Complex64 = exps
                .iter()
                .enumerate()
                .map(|(j, e)| w.pow(-((k * j) as i64)) * e)
                .sum();
            s * inv_m
        })
        .collect())
}

fn all_grades(w: &RootOfUnityTable, z: Complex64) -> Result<Vec<Complex64>> {
    if z.norm() <= SERIES_RADIUS {
        Ok(series_grades(w.order(), z))
    } else {
        euler_grades(w, z)
    }
}

/// `h_k(z)` for the order-`m` family.
pub fn eval_h(m: usize, k: usize, z: Complex64) -> Result<Complex64> {
    check_order(m, k)?;
    let w = RootOfUnityTable::new(m)?;
    Ok(all_grades(&w, z)?[k])
}

/// All `m` components at once; shares the exponentials between grades.
pub fn eval_point(m: usize, alpha: Complex64) -> Result<HyperbolicPoint> {
    check_order(m, 0)?;
    let w = RootOfUnityTable::new(m)?;
    let h = all_grades(&w, alpha)?;
    let point = HyperbolicPoint { m, alpha, h };
    debug_assert!(
        (point.sum() - alpha.exp()).norm() <= 1e-9 * alpha.exp().norm().max(1.0),
        "grades of exp do not sum to exp at {alpha}"
    );
    Ok(point)
}

/// `|h_k(α+β) - Σ_i h_i(α) h_{(k-i) mod m}(β)|`.
pub fn convolution_check(m: usize, alpha: Complex64, beta: Complex64, k: usize) -> Result<f64> {
    check_order(m, k)?;
    let a = eval_point(m, alpha)?;
    let b = eval_point(m, beta)?;
    let sum = eval_point(m, alpha + beta)?;
    let conv: Complex64 = (0..m).map(|i| a.h[i] * b.h[(k + m - i) % m]).sum();
    Ok((sum.h[k] - conv).norm())
}

/// `|Σ_k h_0(α + ω^k β) - m h_0(α) h_0(β)|`.
pub fn product_identity_check(m: usize, alpha: Complex64, beta: Complex64) -> Result<f64> {
    check_order(m, 0)?;
    let w = RootOfUnityTable::new(m)?;
    let mut lhs = Complex64::new(0.0, 0.0);
    for &p in w.powers() {
        lhs += eval_h(m, 0, alpha + p * beta)?;
    }
    let rhs = eval_h(m, 0, alpha)? * eval_h(m, 0, beta)? * m as f64;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::hyperbolic_series;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cosh_of_one_matches_series_oracle() {
        // Σ_{j even} 1/j!, summed here independently of the library.
        let mut oracle = 0.0;
        let mut fact = 1.0;
        for j in 0..30 {
            if j > 0 {
                fact *= j as f64;
            }
            if j % 2 == 0 {
                oracle += 1.0 / fact;
            }
        }
        let v = eval_h(2, 0, c(1.0, 0.0)).unwrap();
        assert!((v.re - oracle).abs() < 1e-15);
        assert!((v.re - 1.5430806348).abs() < 1e-10);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(eval_h(3, 1, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(eval_h(3, 0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let p = eval_point(3, c(0.0, 0.0)).unwrap();
        assert_eq!(p.h, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn m2_reduces_to_cosh_sinh() {
        for a in [c(0.3, 0.0), c(-2.5, 0.0), c(1.2, 0.7), c(2.9, -1.1)] {
            let p = eval_point(2, a).unwrap();
            assert!((p.h[0] - a.cosh()).norm() < 1e-13 * a.cosh().norm().max(1.0));
            assert!((p.h[1] - a.sinh()).norm() < 1e-13 * a.sinh().norm().max(1.0));
        }
    }

    #[test]
    fn components_sum_to_exp() {
        let p = eval_point(3, c(1.0, 0.0)).unwrap();
        assert!((p.sum() - c(std::f64::consts::E, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn euler_form_matches_series_inside_box() {
        let zs = [0.05, 0.5, 1.5, 2.2, 3.0, -3.0, -1.7];
        for m in 2..=5 {
            for k in 0..m {
                let series = hyperbolic_series(m, k, 80).unwrap();
                for &x in &zs {
                    let z = c(x, 0.0);
                    let s = series.eval(z);
                    let e = eval_h(m, k, z).unwrap();
                    assert!((e - s).norm() <= 1e-12 * s.norm().max(1.0), "m={m} k={k} z={x}");
                }
            }
        }
    }

    #[test]
    fn small_grades_keep_relative_accuracy() {
        // h_4(z) ≈ z^4/24 for m = 5 and tiny z
        let z = c(1e-3, 0.0);
        let v = eval_h(5, 4, z).unwrap();
        let leading = 1e-12 / 24.0;
        assert!(((v.re - leading) / leading).abs() < 1e-9);
    }

    #[test]
    fn overflow_is_reported() {
        let err = eval_h(3, 0, c(800.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
        assert!(eval_point(4, c(0.0, 750.0)).is_err());
    }

    #[test]
    fn invalid_orders() {
        assert!(matches!(eval_h(1, 0, c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(eval_h(3, 3, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn grading_under_rotation() {
        for m in 2..=5 {
            let w = RootOfUnityTable::new(m).unwrap();
            for z in [c(0.4, 0.2), c(1.7, -0.9), c(-2.1, 1.3)] {
                for k in 0..m {
                    let lhs = eval_h(m, k, w.omega() * z).unwrap();
                    let rhs = w.pow(k as i64) * eval_h(m, k, z).unwrap();
                    assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn derivative_shifts_grade_down() {
        let step = 1e-6;
        for m in 2..=4 {
            for z in [c(0.8, 0.0), c(-1.3, 0.4), c(2.0, 1.0)] {
                for k in 0..m {
                    let d = (eval_h(m, k, z + step).unwrap() - eval_h(m, k, z - step).unwrap()) / (2.0 * step);
                    let expected = eval_h(m, (k + m - 1) % m, z).unwrap();
                    assert!((d - expected).norm() < 1e-5, "m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let r = convolution_check(2, c(0.9, 0.0), c(-1.4, 0.0), 0).unwrap();
        assert!(r < 1e-13);
        assert!(convolution_check(3, c(0.7, 0.0), c(-0.3, 0.0), 2).unwrap() <= 1e-10);
        for k in 0..3 {
            assert!(convolution_check(3, c(1.9, -0.6), c(0.0, 0.0), k).unwrap() < 1e-14);
        }
    }

    #[test]
    fn product_identity_examples() {
        assert!(product_identity_check(2, c(0.5, 0.1), c(-1.2, 0.3)).unwrap() < 1e-13);
        assert!(product_identity_check(3, c(1.1, 0.0), c(0.4, 0.0)).unwrap() <= 1e-10);
        for m in 2..=6 {
            assert!(product_identity_check(m, c(2.3, -0.4), c(0.0, 0.0)).unwrap() < 1e-13);
        }
    }
}
