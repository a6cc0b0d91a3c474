//! Symmetric and cyclic-symmetric functions of polynomial roots.
//!
//! For the roots `a, b, c` of `x^3 = P x^2 + Q x + R`:
//!
//! ```text
//! V_n = a^n + b^n + c^n
//! U_n = (a^n + ω b^n + ω² c^n) / (a + ω b + ω² c)
//! W_n = (a^n + ω² b^n + ω c^n) / (a + ω² b + ω c)
//! ```
//!
//! all obey `F_{n+3} = P F_{n+2} + Q F_{n+1} + R F_n`. `V_n` is symmetric in
//! the roots, `U_n` and `W_n` only under cyclic permutations.
//!
//! Sign convention: `P = a + b + c`, `Q = -(ab + bc + ca)`, `R = abc`, which
//! is what makes every root satisfy `x^3 = P x^2 + Q x + R`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::demoivre::{circulant_mul, demoivre_matrix, CirculantMatrix};
use crate::hyperbolic::eval_h;
use crate::spectral::RootOfUnityTable;
use crate::{scaled_residual, Error, Result};

/// Relative size below which an ω-weighted root combination counts as zero.
const DEGENERACY_TOL: f64 = 1e-12;

fn omega3() -> RootOfUnityTable {
    RootOfUnityTable::new(3).expect("m = 3")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicRoots {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl CubicRoots {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if a == b && b == c {
            return Err(Error::Domain("the triple root a = b = c is excluded".into()));
        }
        Ok(Self { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0))
    }

    /// `(b, c, a)`
    pub fn rotated(&self) -> Self {
        Self { a: self.b, b: self.c, c: self.a }
    }

    /// `(b, a, c)`
    pub fn transposed(&self) -> Self {
        Self { a: self.b, b: self.a, c: self.c }
    }

    fn as_array(&self) -> [Complex64; 3] {
        [self.a, self.b, self.c]
    }

    fn scale(&self) -> f64 {
        self.as_array().iter().map(|r| r.norm()).fold(1.0, f64::max)
    }
}

/// Coefficients of `x^3 = P x^2 + Q x + R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoefficients {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
}

impl CubicCoefficients {
    /// `x^3 - P x^2 - Q x - R`
    pub fn characteristic(&self, x: Complex64) -> Complex64 {
        x * x * x - self.p * x * x - self.q * x - self.r
    }
}

pub fn roots_to_pqr(roots: &CubicRoots) -> CubicCoefficients {
    let CubicRoots { a, b, c } = *roots;
    CubicCoefficients { p: a + b + c, q: -(a * b + a * c + b * c), r: a * b * c }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootFunction {
    V,
    U,
    W,
}

impl RootFunction {
    pub const ALL: [RootFunction; 3] = [RootFunction::V, RootFunction::U, RootFunction::W];

    /// Weights `(w_a, w_b, w_c)` applied to `(a^n, b^n, c^n)`.
    fn weights(self) -> [Complex64; 3] {
        let w = omega3();
        match self {
            Self::V => [w.pow(0); 3],
            Self::U => [w.pow(0), w.pow(1), w.pow(2)],
            Self::W => [w.pow(0), w.pow(2), w.pow(1)],
        }
    }
}

impl fmt::Display for RootFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::V => "V",
            Self::U => "U",
            Self::W => "W",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for RootFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" | "v" => Ok(Self::V),
            "U" | "u" => Ok(Self::U),
            "W" | "w" => Ok(Self::W),
            _ => Err(Error::Domain(format!("root function must be V, U or W, got `{s}`"))),
        }
    }
}

fn weighted_power_sum(roots: &CubicRoots, weights: &[Complex64; 3], n: u32) -> Complex64 {
    roots.as_array().iter().zip(weights).map(|(r, w)| w * r.powu(n)).sum()
}

/// Denominator of `U`/`W` (one for `V`), or an error when it vanishes.
fn normaliser(roots: &CubicRoots, which: RootFunction) -> Result<Complex64> {
    if which == RootFunction::V {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let d = weighted_power_sum(roots, &which.weights(), 1);
    if d.norm() <= DEGENERACY_TOL * roots.scale() {
        return Err(Error::Degenerate(format!("{which}: ω-weighted root sum vanishes for {roots:?}")));
    }
    Ok(d)
}

/// Closed-form value from root powers.
pub fn vuw_direct(roots: &CubicRoots, which: RootFunction, n: u32) -> Result<Complex64> {
    let d = normaliser(roots, which)?;
    Ok(weighted_power_sum(roots, &which.weights(), n) / d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootFunctionSequence {
    pub which: RootFunction,
    pub values: Vec<Complex64>,
}

/// Seeds `F_0, F_1, F_2` followed by the order-3 recurrence.
pub fn vuw_recurrent(roots: &CubicRoots, which: RootFunction, n_max: usize) -> Result<RootFunctionSequence> {
    if n_max < 3 {
        return Err(Error::Domain(format!("n_max must be at least 3, got {n_max}")));
    }
    let CubicCoefficients { p, q, r } = roots_to_pqr(roots);
    let mut values = match which {
        RootFunction::V => {
            let [a, b, c] = roots.as_array();
            vec![Complex64::new(3.0, 0.0), a + b + c, a * a + b * b + c * c]
        }
        _ => {
            let d = normaliser(roots, which)?;
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                weighted_power_sum(roots, &which.weights(), 2) / d,
            ]
        }
    };
    for n in 3..=n_max {
        let next = p * values[n - 1] + q * values[n - 2] + r * values[n - 3];
        values.push(next);
    }
    Ok(RootFunctionSequence { which, values })
}

// ---------------------------------------------------------------------------
// m = 2

/// Roots of `z^2 = P z - Q`, so `P = a + b`, `Q = ab`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticRoots {
    pub a: Complex64,
    pub b: Complex64,
}

impl QuadraticRoots {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn p(&self) -> Complex64 {
        self.a + self.b
    }

    pub fn q(&self) -> Complex64 {
        self.a * self.b
    }

    pub fn v(&self, n: u32) -> Complex64 {
        self.a.powu(n) + self.b.powu(n)
    }

    pub fn u(&self, n: u32) -> Result<Complex64> {
        let d = self.a - self.b;
        if d.norm() <= DEGENERACY_TOL * self.a.norm().max(self.b.norm()).max(1.0) {
            return Err(Error::Degenerate("U_n(a, b) needs a != b".into()));
        }
        Ok((self.a.powu(n) - self.b.powu(n)) / d)
    }

    /// `F_{n+2} = P F_{n+1} - Q F_n` from the given seeds.
    pub fn recurrent(&self, seeds: [Complex64; 2], n_max: usize) -> Vec<Complex64> {
        let (p, q) = (self.p(), self.q());
        let mut values = seeds.to_vec();
        while values.len() <= n_max {
            let l = values.len();
            values.push(p * values[l - 1] - q * values[l - 2]);
        }
        values.truncate(n_max + 1);
        values
    }
}

/// Residuals of the classical Lucas formulae and of the de Moivre group
/// they induce. `√Δ` is taken as `a - b`, the branch for which
/// `U_n = 2 Q^{n/2} sinh((n/2) ln(a/b)) / √Δ` holds for either root order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LucasM2Residuals {
    /// `V_n = 2 Q^{n/2} cosh((n/2) ln(a/b))`
    pub v_formula: f64,
    /// `U_n = 2 Q^{n/2} sinh((n/2) ln(a/b)) / √Δ`
    pub u_formula: f64,
    /// `[[a(n), b(n)], [b(n), a(n)]] = [[a(1), b(1)], [b(1), a(1)]]^n`
    pub group_power: f64,
    /// `(a(n), b(n)) = (cosh nα, sinh nα)` with `α = (ln a - ln b)/2`
    pub hyperbolic: f64,
    /// `a(n)^2 - b(n)^2 = 1`
    pub volume: f64,
}

impl LucasM2Residuals {
    pub fn max(&self) -> f64 {
        [self.v_formula, self.u_formula, self.group_power, self.hyperbolic, self.volume]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Rescaled pair `(a_α(n), b_α(n)) = Q^{-n/2} (V_n / 2, √Δ U_n / 2)`.
fn rescaled_m2(a: f64, b: f64, n: u32) -> (f64, f64) {
    let q = a * b;
    let v = a.powi(n as i32) + b.powi(n as i32);
    let u = (a.powi(n as i32) - b.powi(n as i32)) / (a - b);
    let s = q.powf(-(n as f64) / 2.0);
    (s * v / 2.0, s * (a - b) * u / 2.0)
}

pub fn lucas_formulae_m2(a: f64, b: f64, n: u32) -> Result<LucasM2Residuals> {
    if !(a > 0.0 && b > 0.0) || a == b {
        return Err(Error::Domain(format!("Lucas formulae need distinct positive roots, got ({a}, {b})")));
    }
    let re = |v: f64| Complex64::new(v, 0.0);
    let roots = QuadraticRoots::new(re(a), re(b));
    let q = a * b;
    let half_log = 0.5 * n as f64 * (a / b).ln();
    let qn2 = q.powf(n as f64 / 2.0);
    let sqrt_delta = a - b;

    let v_formula = scaled_residual(re(2.0 * qn2 * half_log.cosh()), roots.v(n));
    let u_formula = scaled_residual(re(2.0 * qn2 * half_log.sinh() / sqrt_delta), roots.u(n)?);

    let (an, bn) = rescaled_m2(a, b, n);
    let (a1, b1) = rescaled_m2(a, b, 1);
    let generator = CirculantMatrix::new(vec![re(a1), re(b1)]);
    let mut power = CirculantMatrix::identity(2);
    for _ in 0..n {
        power = circulant_mul(&power, &generator)?;
    }
    let group_power = scaled_residual(power.row()[0], re(an)).max(scaled_residual(power.row()[1], re(bn)));

    let alpha = 0.5 * (a.ln() - b.ln());
    let h = demoivre_matrix(2, re(alpha), n as i64)?;
    let hyperbolic = scaled_residual(h.row()[0], re(an)).max(scaled_residual(h.row()[1], re(bn)));
    // a_n^2 - b_n^2 cancels catastrophically for large n; scale by its condition
    let volume = (an * an - bn * bn - 1.0).abs() / (an * an + bn * bn).max(1.0);

    Ok(LucasM2Residuals { v_formula, u_formula, group_power, hyperbolic, volume })
}

// ---------------------------------------------------------------------------
// identifications with the de Moivre group

/// One named residual in an identification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub id: String,
    pub residual: f64,
}

/// Both sides of the root-function / de Moivre identifications for `m = 3`.
///
/// `α = (ln a + ω ln b + ω² ln c)/3` and `A = exp(α)`, with `A^ω := exp(ωα)`
/// and `A^{ω²} := exp(ω²α)`, so `A^3 = a b^ω c^{ω²}` under principal logs.
///
/// Residual ids:
/// * `A^3` the defining relation of `A`.
/// * `a/unnormalised` `a_α(n)` against `R^{-n/3} V_n(A, A^ω, A^{ω²}) / 3`.
/// * `a/unit-product` the same with the roots rescaled to `abc = 1`
///   (which leaves `α` and `A` unchanged and makes `R^{-n/3} = 1`).
/// * `c/unnormalised`, `b/unnormalised` the `U·h_1/3` and `W·h_2/3` forms.
/// * `c/regraded`, `b/regraded` `c_α(n) = U_n h_2(ln A)` and
///   `b_α(n) = W_n h_1(ln A)` on unit-product roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identification {
    pub n: u32,
    pub alpha: Complex64,
    pub big_a: Complex64,
    pub product: f64,
    /// `V_n, U_n, W_n` of `(A, A^ω, A^{ω²})`.
    pub v: Complex64,
    pub u: Complex64,
    pub w: Complex64,
    /// `(a_α(n), b_α(n), c_α(n))`, the first row of `H(nα)`.
    pub demoivre_row: [Complex64; 3],
    pub residuals: Vec<IdentityResidual>,
}

impl Identification {
    pub fn residual(&self, id: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.id == id).map(|r| r.residual)
    }
}

fn positive_real(roots: &[Complex64]) -> Result<Vec<f64>> {
    roots
        .iter()
        .map(|r| {
            if r.im == 0.0 && r.re > 0.0 {
                Ok(r.re)
            } else {
                Err(Error::Domain(format!("identification needs positive real roots, got {r}")))
            }
        })
        .collect()
}

/// `α = (1/3)(ln a + ω ln b + ω² ln c)` for positive real roots.
pub fn identification_angle(roots: &CubicRoots) -> Result<Complex64> {
    let r = positive_real(&roots.as_array())?;
    let w = omega3();
    Ok((w.pow(0) * r[0].ln() + w.pow(1) * r[1].ln() + w.pow(2) * r[2].ln()) / 3.0)
}

/// `(A, A^ω, A^{ω²}) = (e^α, e^{ωα}, e^{ω²α})` as a root triple.
pub fn exponential_roots(alpha: Complex64) -> Result<CubicRoots> {
    let w = omega3();
    CubicRoots::new(alpha.exp(), (w.pow(1) * alpha).exp(), (w.pow(2) * alpha).exp())
}

pub fn identify_m3(roots: &CubicRoots, n: u32) -> Result<Identification> {
    let r = positive_real(&roots.as_array())?;
    let w = omega3();
    let product = r[0] * r[1] * r[2];
    let alpha = identification_angle(roots)?;
    let big_a = alpha.exp();
    let triple = exponential_roots(alpha)?;

    let v = vuw_direct(&triple, RootFunction::V, n)?;
    let u = vuw_direct(&triple, RootFunction::U, n)?;
    let wv = vuw_direct(&triple, RootFunction::W, n)?;
    let row = demoivre_matrix(3, alpha, n as i64)?;
    let (a_n, b_n, c_n) = (row.row()[0], row.row()[1], row.row()[2]);
    let h1 = eval_h(3, 1, alpha)?;
    let h2 = eval_h(3, 2, alpha)?;

    let cube_rhs = Complex64::new(r[0], 0.0) * (w.pow(1) * r[1].ln()).exp() * (w.pow(2) * r[2].ln()).exp();
    let factor = product.powf(-(n as f64) / 3.0);

    // Rescaling the roots to unit product leaves α unchanged; recompute it
    // to make that part of the check rather than an assumption.
    let s = product.cbrt();
    let unit = CubicRoots::real(r[0] / s, r[1] / s, r[2] / s)?;
    let unit_alpha = identification_angle(&unit)?;
    let unit_triple = exponential_roots(unit_alpha)?;
    let unit_factor = (r[0] / s * r[1] / s * r[2] / s).powf(-(n as f64) / 3.0);
    let unit_v = vuw_direct(&unit_triple, RootFunction::V, n)?;
    let unit_u = vuw_direct(&unit_triple, RootFunction::U, n)?;
    let unit_w = vuw_direct(&unit_triple, RootFunction::W, n)?;

    let entry = |id: &str, value: Complex64, reference: Complex64| IdentityResidual {
        id: id.to_string(),
        residual: scaled_residual(value, reference),
    };
    let residuals = vec![
        entry("A^3", big_a.powu(3), cube_rhs),
        entry("a/unnormalised", factor * v / 3.0, a_n),
        entry("a/unit-product", unit_factor * unit_v / 3.0, a_n),
        entry("c/unnormalised", factor * u / 3.0 * h1, c_n),
        entry("b/unnormalised", factor * wv / 3.0 * h2, b_n),
        entry("c/regraded", unit_factor * unit_u * h2, c_n),
        entry("b/regraded", unit_factor * unit_w * h1, b_n),
    ];
    Ok(Identification { n, alpha, big_a, product, v, u, w: wv, demoivre_row: [a_n, b_n, c_n], residuals })
}

/// The `m = 2` counterpart of [`identify_m3`] for roots `a, b > 0`:
/// `α = (ln a - ln b)/2`, `A = e^α`, `A^ω = e^{-α}`.
///
/// Residual ids: `A^2`, `a/unnormalised` (`Q^{-n/2} V_n(A, A^ω)/2`),
/// `a/unit-product`, `b/unnormalised` (`Q^{-n/2} U_n(A, A^ω) h_1(ln A)/2`),
/// `b/unit-product` (`U_n(A, A^ω) h_1(ln A)` with `ab = 1`).
pub fn identify_m2(a: f64, b: f64, n: u32) -> Result<Identification> {
    if !(a > 0.0 && b > 0.0) || a == b {
        return Err(Error::Domain(format!("identification needs distinct positive roots, got ({a}, {b})")));
    }
    let re = |v: f64| Complex64::new(v, 0.0);
    let q = a * b;
    let alpha = re(0.5 * (a.ln() - b.ln()));
    let big_a = alpha.exp();
    let pair = QuadraticRoots::new(big_a, (-alpha).exp());
    let v = pair.v(n);
    let u = pair.u(n)?;
    let row = demoivre_matrix(2, alpha, n as i64)?;
    let (a_n, b_n) = (row.row()[0], row.row()[1]);
    let h1 = eval_h(2, 1, alpha)?;
    let factor = q.powf(-(n as f64) / 2.0);

    let s = q.sqrt();
    let unit_alpha = re(0.5 * ((a / s).ln() - (b / s).ln()));
    let unit_pair = QuadraticRoots::new(unit_alpha.exp(), (-unit_alpha).exp());
    let unit_factor = ((a / s) * (b / s)).powf(-(n as f64) / 2.0);

    let entry = |id: &str, value: Complex64, reference: Complex64| IdentityResidual {
        id: id.to_string(),
        residual: scaled_residual(value, reference),
    };
    let residuals = vec![
        entry("A^2", big_a * big_a, re(a) * re(b).powf(-1.0)),
        entry("a/unnormalised", factor * v / 2.0, a_n),
        entry("a/unit-product", unit_factor * unit_pair.v(n) / 2.0, a_n),
        entry("b/unnormalised", factor * u / 2.0 * h1, b_n),
        entry("b/unit-product", unit_factor * unit_pair.u(n)? * h1, b_n),
    ];
    Ok(Identification {
        n,
        alpha,
        big_a,
        product: q,
        v,
        u,
        w: Complex64::new(0.0, 0.0),
        demoivre_row: [a_n, b_n, Complex64::new(0.0, 0.0)],
        residuals,
    })
}

/// `(F(A, A^ω, A^{ω²}), F(a, b, c))` for `F = V, U, W` at index `n`.
pub fn inequality_witnesses(roots: &CubicRoots, n: u32) -> Result<Vec<(RootFunction, Complex64, Complex64)>> {
    let triple = exponential_roots(identification_angle(roots)?)?;
    RootFunction::ALL
        .iter()
        .map(|&f| Ok((f, vuw_direct(&triple, f, n)?, vuw_direct(roots, f, n)?)))
        .collect()
}
