//! Randomised and fixed identity checks, grouped into named suites.
//!
//! Every suite draws from its own ChaCha stream derived from the seed, so a
//! report depends only on `(seed, tol)` and not on scheduling. Suites run on
//! separate threads; cases are sorted by id before the report is returned.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chebyshev::{
    binet_eval, binet_stream, classical_identities_check, delta_selector, delta_selector_by_roots,
    eval_expansion_on_surface, genfun, recurrence_eval, stream_eval, symbolic_streams, ExpansionKind, StreamIndex,
};
use crate::companion::{
    build_companion, chebyshev_generator, closed_form_check, orbit, power, rational, seed_window, Matrix,
    RecurrenceSpec,
};
use crate::demoivre::{circulant_mul, demoivre_matrix, hyperbolon_invariant, surface_var_names, CirculantMatrix};
use crate::hyperbolic::{convolution_check, eval_h, eval_point, product_identity_check};
use crate::lucas::{
    identify_m3, inequality_witnesses, lucas_formulae_m2, vuw_direct, vuw_recurrent, CubicRoots, RootFunction,
};
use crate::spectral::{
    apply_omega, hyperbolic_series, project_delta, project_delta_by_sum, RootOfUnityTable, TruncatedSeries,
};
use crate::{scaled_residual, Error, Result};

pub const SUITES: [&str; 6] = ["spectral", "hyperbolic", "demoivre", "chebyshev", "lucas", "companion"];

/// Series order used by the projection checks.
pub const SERIES_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub params: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<String>,
    pub seed: u64,
    pub tol: f64,
    pub cases: Vec<Case>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.cases.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Expands `all` and checks every name.
pub fn parse_suites(names: &[String]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for name in names.iter().flat_map(|n| n.split(',')).map(str::trim).filter(|n| !n.is_empty()) {
        if name == "all" {
            out.extend(SUITES);
            continue;
        }
        match SUITES.iter().find(|s| **s == name) {
            Some(s) => out.push(*s),
            None => return Err(Error::UnknownSuite(name.to_string())),
        }
    }
    if out.is_empty() {
        out.extend(SUITES);
    }
    out.sort_by_key(|s| SUITES.iter().position(|t| t == s));
    out.dedup();
    Ok(out)
}

pub fn run(suites: &[&str], seed: u64, tol: f64) -> Result<VerifyReport> {
    for s in suites {
        if !SUITES.contains(s) {
            return Err(Error::UnknownSuite(s.to_string()));
        }
    }
    let start = Instant::now();
    let results: Vec<Result<Vec<Case>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&name| scope.spawn(move || run_suite(name, seed, tol)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut cases = Vec::new();
    for r in results {
        cases.extend(r?);
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerifyReport {
        suites: suites.iter().map(|s| s.to_string()).collect(),
        seed,
        tol,
        cases,
        wall_time: start.elapsed(),
    })
}

pub fn run_suite(name: &str, seed: u64, tol: f64) -> Result<Vec<Case>> {
    let index = SUITES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    let mut out = Cases { suite: name, tol, cases: Vec::new() };
    match name {
        "spectral" => spectral_suite(&mut rng, &mut out)?,
        "hyperbolic" => hyperbolic_suite(&mut rng, &mut out)?,
        "demoivre" => demoivre_suite(&mut rng, &mut out)?,
        "chebyshev" => chebyshev_suite(&mut rng, &mut out)?,
        "lucas" => lucas_suite(&mut rng, &mut out)?,
        _ => companion_suite(&mut rng, &mut out)?,
    }
    Ok(out.cases)
}

struct Cases<'a> {
    suite: &'a str,
    tol: f64,
    cases: Vec<Case>,
}

impl Cases<'_> {
    fn push(&mut self, identity: &str, i: usize, params: String, residual: f64) {
        self.cases.push(Case {
            id: format!("{}/{}/{:03}", self.suite, identity, i),
            params,
            residual,
            pass: residual.is_finite() && residual <= self.tol,
        });
    }

    fn exact(&mut self, identity: &str, i: usize, params: String, holds: bool) {
        self.push(identity, i, params, if holds { 0.0 } else { 1.0 });
    }
}

fn complex_in_box(rng: &mut ChaCha8Rng, half: f64) -> Complex64 {
    Complex64::new(rng.random_range(-half..=half), rng.random_range(-half..=half))
}

fn complex_in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6},{:.6}", z.re, z.im)
}

fn series_residual(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    (a - b).max_abs() / b.max_abs().max(a.max_abs()).max(1e-300)
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> TruncatedSeries {
    TruncatedSeries::new((0..order).map(|_| complex_in_box(rng, 1.0)).collect())
}

fn spectral_suite(rng: &mut ChaCha8Rng, out: &mut Cases) -> Result<()> {
    for i in 0..24 {
        let m = rng.random_range(2..=5);
        let w = RootOfUnityTable::new(m)?;
        let f = random_series(rng, SERIES_ORDER);
        let scale = f.max_abs();
        let mut worst: f64 = 0.0;
        let mut sum = TruncatedSeries::zero(SERIES_ORDER);
        for a in 0..m {
            let pa = project_delta(&f, &w, a);
            sum = &sum + &pa;
            for b in 0..m {
                let pab = project_delta(&pa, &w, b);
                let expected = if a == b { pa.clone() } else { TruncatedSeries::zero(SERIES_ORDER) };
                worst = worst.max((&pab - &expected).max_abs() / scale);
            }
        }
        worst = worst.max((&sum - &f).max_abs() / scale);
        out.push("projection-algebra", i, format!("m={m}"), worst);
    }
    for i in 0..12 {
        let m = rng.random_range(2..=5);
        let k = rng.random_range(0..m);
        let w = RootOfUnityTable::new(m)?;
        let f = random_series(rng, SERIES_ORDER);
        let r = (&project_delta(&f, &w, k) - &project_delta_by_sum(&f, &w, k)).max_abs() / f.max_abs();
        out.push("projection-by-rotation-sum", i, format!("m={m} k={k}"), r);
    }
    for i in 0..12 {
        let m = rng.random_range(2..=5);
        let w = RootOfUnityTable::new(m)?;
        let s = rng.random_range(1..m);
        let mut worst: f64 = 0.0;
        let mut sum = TruncatedSeries::zero(SERIES_ORDER);
        for k in 0..m {
            let h = hyperbolic_series(m, k, SERIES_ORDER)?;
            // Ω^s h_k = ω^{ks} h_k
            let rotated = apply_omega(&h, &w, s);
            worst = worst.max(series_residual(&rotated, &h.scale(w.pow((k * s) as i64))));
            sum = &sum + &h;
        }
        worst = worst.max(series_residual(&sum, &TruncatedSeries::exp(SERIES_ORDER)));
        out.push("hyperbolic-grading", i, format!("m={m} s={s}"), worst);
    }
    Ok(())
}

fn hyperbolic_suite(rng: &mut ChaCha8Rng, out: &mut Cases) -> Result<()> {
    for i in 0..30 {
        let m = rng.random_range(2..=4);
        let k = rng.random_range(0..m);
        let (a, b) = (complex_in_box(rng, 3.0), complex_in_box(rng, 3.0));
        let r = convolution_check(m, a, b, k)?;
        out.push("convolution", i, format!("m={m} k={k} alpha={} beta={}", fmt_c(a), fmt_c(b)), r);
    }
    for i in 0..20 {
        let m = rng.random_range(2..=4);
        let (a, b) = (complex_in_box(rng, 3.0), complex_in_box(rng, 3.0));
        let r = product_identity_check(m, a, b)?;
        out.push("exponential-product", i, format!("m={m} alpha={} beta={}", fmt_c(a), fmt_c(b)), r);
    }
    for i in 0..10 {
        let m = rng.random_range(2..=5);
        let k = rng.random_range(0..m);
        let z = complex_in_box(rng, 2.0);
        let series = hyperbolic_series(m, k, 60)?.eval(z);
        let r = scaled_residual(eval_h(m, k, z)?, series);
        out.push("closed-form-vs-series", i, format!("m={m} k={k} z={}", fmt_c(z)), r);
    }
    for i in 0..8 {
        let m = rng.random_range(2..=5);
        let z = complex_in_box(rng, 3.0);
        let p = eval_point(m, z)?;
        let r = scaled_residual(p.sum(), z.exp());
        out.push("components-sum-to-exp", i, format!("m={m} z={}", fmt_c(z)), r);
    }
    Ok(())
}

fn demoivre_suite(rng: &mut ChaCha8Rng, out: &mut Cases) -> Result<()> {
    for i in 0..20 {
        let m = rng.random_range(2..=4);
        let (a, b) = (complex_in_box(rng, 1.5), complex_in_box(rng, 1.5));
        let lhs = circulant_mul(&demoivre_matrix(m, a, 1)?, &demoivre_matrix(m, b, 1)?)?;
        let rhs = demoivre_matrix(m, a + b, 1)?;
        let scale = rhs.row().iter().map(|z| z.norm()).fold(1.0, f64::max);
        out.push("group-law", i, format!("m={m} alpha={} beta={}", fmt_c(a), fmt_c(b)), lhs.max_diff(&rhs) / scale);
    }
    let invariants = [hyperbolon_invariant(2)?, hyperbolon_invariant(3)?, hyperbolon_invariant(4)?];
    for i in 0..20 {
        let m = rng.random_range(2..=4);
        let a = complex_in_box(rng, 1.0);
        let p = eval_point(m, a)?;
        let r = (invariants[m - 2].eval(&p.h) - 1.0).norm();
        out.push("volume-one", i, format!("m={m} alpha={}", fmt_c(a)), r);
    }
    for i in 0..8 {
        let m = rng.random_range(2..=6);
        let c = CirculantMatrix::new((0..m).map(|_| complex_in_box(rng, 1.0)).collect());
        let r = scaled_residual(c.determinant(), c.determinant_dense());
        out.push("eigenvalue-determinant", i, format!("m={m}"), r);
    }
    for i in 0..6 {
        let m = rng.random_range(2..=4);
        let a = complex_in_box(rng, 0.5);
        let n = rng.random_range(-4..=6i64);
        let direct = demoivre_matrix(m, a, n)?;
        let base = demoivre_matrix(m, a, n.signum())?;
        let mut iterated = CirculantMatrix::identity(m);
        for _ in 0..n.unsigned_abs() {
            iterated = circulant_mul(&iterated, &base)?;
        }
        let scale = direct.row().iter().map(|z| z.norm()).fold(1.0, f64::max);
        out.push("de-moivre-power", i, format!("m={m} n={n} alpha={}", fmt_c(a)), direct.max_diff(&iterated) / scale);
    }
    let cubic = invariants[1].with_vars(&surface_var_names(3)).to_string();
    out.exact("symbolic-cubic", 0, "m=3".into(), cubic == "x^3 + y^3 + z^3 - 3*x*y*z");
    Ok(())
}

fn chebyshev_suite(rng: &mut ChaCha8Rng, out: &mut Cases) -> Result<()> {
    const N: usize = 12;
    for i in 0..20 {
        let a = complex_in_disc(rng, 1.0);
        let seq = recurrence_eval(3, a, N)?;
        let mut worst: f64 = 0.0;
        for s in 0..3 {
            for n in 0..=N as i64 {
                let idx = StreamIndex { n, s };
                let direct = stream_eval(3, a, idx)?;
                let rec = seq.get(idx).expect("index within range");
                let binet = binet_stream(3, a, idx)?;
                worst = worst.max(scaled_residual(rec, direct)).max(scaled_residual(binet, direct));
            }
        }
        out.push("three-way-agreement", i, format!("alpha={}", fmt_c(a)), worst);
    }
    for i in 0..10 {
        let a = complex_in_disc(rng, 1.0);
        let seq = recurrence_eval(3, a, N)?;
        let vars = [seq.x, seq.xstar, seq.xstarstar];
        let mut worst: f64 = 0.0;
        for s in 0..3 {
            let coeffs = genfun(s)?.substitute(vars).series(N + 1);
            for (n, c) in coeffs.iter().enumerate() {
                worst = worst.max(scaled_residual(*c, seq.streams[s][n]));
            }
        }
        out.push("genfun-numeric", i, format!("alpha={}", fmt_c(a)), worst);
    }
    let symbolic = symbolic_streams(N);
    for (s, expected) in symbolic.iter().enumerate() {
        let series = genfun(s)?.series(N + 1);
        out.exact("genfun-symbolic", s, format!("stream={s}"), &series == expected);
    }
    for i in 0..12 {
        let kind = ExpansionKind::ALL[i % 3];
        let n = rng.random_range(0..=10);
        let a = complex_in_disc(rng, 1.0);
        let r = eval_expansion_on_surface(kind, n, a)?;
        out.push("expansion-on-surface", i, format!("kind={} n={n} alpha={}", kind.index(), fmt_c(a)), r);
    }
    for i in 0..8 {
        let (n, m, r) = (rng.random_range(0..8), rng.random_range(0..8), rng.random_range(0..4));
        let x = rng.random_range(1.0..1.8);
        let res = classical_identities_check(n, m, r, x)?.max();
        out.push("classical-m2", i, format!("n={n} m={m} r={r} x={x:.6}"), res);
    }
    for i in 0..6 {
        let a = complex_in_disc(rng, 1.0);
        let n = rng.random_range(0..=12u32);
        let r = scaled_residual(binet_eval(3, a, n)?, stream_eval(3, a, StreamIndex::main(n as i64))?);
        out.push("binet", i, format!("n={n} alpha={}", fmt_c(a)), r);
    }
    let mut partition = true;
    for i in 0..30i64 {
        for k in 0..30i64 {
            let sum: u8 = ExpansionKind::ALL.iter().map(|kind| kind.selector(i, k)).sum();
            let by_roots = (delta_selector_by_roots(i, k) - f64::from(delta_selector(i, k))).norm() < 1e-12;
            partition &= sum == 1 && by_roots;
        }
    }
    out.exact("selector-partition", 0, "0<=i,k<30".into(), partition);
    Ok(())
}

fn random_roots(rng: &mut ChaCha8Rng) -> CubicRoots {
    loop {
        let roots = CubicRoots::new(complex_in_box(rng, 2.0), complex_in_box(rng, 2.0), complex_in_box(rng, 2.0));
        if let Ok(r) = roots {
            if RootFunction::ALL.iter().all(|&f| vuw_direct(&r, f, 1).is_ok()) {
                return r;
            }
        }
    }
}

fn lucas_suite(rng: &mut ChaCha8Rng, out: &mut Cases) -> Result<()> {
    const N: usize = 15;
    for i in 0..15 {
        let roots = random_roots(rng);
        let mut worst: f64 = 0.0;
        for f in RootFunction::ALL {
            let rec = vuw_recurrent(&roots, f, N)?;
            for (n, v) in rec.values.iter().enumerate() {
                worst = worst.max(scaled_residual(*v, vuw_direct(&roots, f, n as u32)?));
            }
        }
        let p = format!("a={} b={} c={}", fmt_c(roots.a), fmt_c(roots.b), fmt_c(roots.c));
        out.push("direct-vs-recurrent", i, p, worst);
    }
    for i in 0..10 {
        let (a, b) = loop {
            let (a, b): (f64, f64) = (rng.random_range(0.2..3.0), rng.random_range(0.2..3.0));
            if (a - b).abs() > 1e-3 {
                break (a, b);
            }
        };
        let n = rng.random_range(0..=12);
        let r = lucas_formulae_m2(a, b, n)?.max();
        out.push("lucas-m2", i, format!("a={a:.6} b={b:.6} n={n}"), r);
    }
    for i in 0..12 {
        let roots = loop {
            let (a, b, c) = (rng.random_range(0.2..4.0), rng.random_range(0.2..4.0), rng.random_range(0.2..4.0));
            if let Ok(r) = CubicRoots::real(a, b, c) {
                break r;
            }
        };
        let n = rng.random_range(0..=10);
        let id = identify_m3(&roots, n)?;
        let r = id.residual("a/unit-product").expect("residual is always reported");
        let p = format!("a={:.6} b={:.6} c={:.6} n={n}", roots.a.re, roots.b.re, roots.c.re);
        out.push("identification-unit-product", i, p, r);
    }
    let roots = CubicRoots::real(1.0, 2.0, 4.0)?;
    // U_1 = W_1 = 1 for every triple, so witnesses start at n = 2
    for n in 2..=4u32 {
        let witnesses = inequality_witnesses(&roots, n)?;
        let strict = witnesses.iter().all(|(_, lhs, rhs)| scaled_residual(*lhs, *rhs) > 1e-6);
        out.exact("inequality-witness", n as usize, format!("roots=1,2,4 n={n}"), strict);
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.random_range(-9..=9i64).into(), rng.random_range(1..=5i64).into())
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let q = random_rational(rng);
        if q != rational(0) {
            return q;
        }
    }
}

fn fmt_q(v: &[BigRational]) -> String {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

fn companion_suite(rng: &mut ChaCha8Rng, out: &mut Cases) -> Result<()> {
    for i in 0..15 {
        let m = rng.random_range(1..=5);
        let alphas: Vec<_> = (0..m).map(|_| random_rational(rng)).collect();
        let spec = RecurrenceSpec::new(alphas.clone(), vec![rational(0); m])?;
        let a = build_companion(&spec);
        let holds = a.cayley_hamilton_residual().is_zero()
            && a.matrix().characteristic_polynomial() == a.expected_characteristic();
        out.exact("cayley-hamilton", i, format!("alphas={}", fmt_q(&alphas)), holds);
    }
    for i in 0..10 {
        let m = rng.random_range(1..=4);
        let alphas: Vec<_> = (0..m).map(|_| random_rational(rng)).collect();
        let seeds: Vec<_> = (0..m).map(|_| random_rational(rng)).collect();
        let spec = RecurrenceSpec::new(alphas.clone(), seeds.clone())?;
        let a = build_companion(&spec);
        let window = seed_window(&spec);
        let holds = orbit(&spec, 30)
            .iter()
            .enumerate()
            .all(|(n, w)| &power(&a, n as u64).mul_vec(&window) == w);
        out.exact("orbit-vs-power", i, format!("alphas={} seeds={}", fmt_q(&alphas), fmt_q(&seeds)), holds);
    }
    let fib = RecurrenceSpec::new(vec![rational(1), rational(1)], vec![rational(0), rational(1)])?;
    let expected = Matrix::from_rows(vec![vec![rational(8), rational(5)], vec![rational(5), rational(3)]])?;
    out.exact("fibonacci-fifth-power", 0, "alphas=1,1".into(), power(&build_companion(&fib), 5) == expected);
    for i in 0..6 {
        let (p, q) = (nonzero_rational(rng), nonzero_rational(rng));
        let spec = RecurrenceSpec::new(vec![-q.clone(), p.clone()], vec![rational(0), rational(1)])?;
        let report = closed_form_check(&spec, 12)?;
        out.exact("closed-form-m2", i, format!("P={p} Q={q}"), report.matching_shift.is_some());
    }
    for i in 0..6 {
        let (q, r) = (random_rational(rng), nonzero_rational(rng));
        let spec = RecurrenceSpec::new(vec![r.clone(), q.clone(), rational(1)], vec![rational(0), rational(1), rational(1)])?;
        let report = closed_form_check(&spec, 12)?;
        out.exact("closed-form-m3", i, format!("P=1 Q={q} R={r}"), report.matching_shift.is_some());
    }
    for i in 0..8 {
        let m = 2 + i % 2;
        let a = complex_in_disc(rng, 1.0);
        let spec = chebyshev_generator(m, a)?;
        let worst = spec
            .sequence(15)
            .iter()
            .enumerate()
            .map(|(n, v)| Ok(scaled_residual(v / m as f64, binet_eval(m, a, n as u32)?)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push("chebyshev-generator", i, format!("m={m} alpha={}", fmt_c(a)), worst);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_and_are_deterministic() {
        let first = run(&SUITES, 7, 1e-9).unwrap();
        for c in first.failures() {
            eprintln!("{c:?}");
        }
        assert!(first.passed());
        assert!(first.cases.len() >= 200, "{}", first.cases.len());
        let second = run(&SUITES, 7, 1e-9).unwrap();
        assert_eq!(first.cases, second.cases);
    }

    #[test]
    fn seeds_change_parameters() {
        let a = run_suite("hyperbolic", 1, 1e-9).unwrap();
        let b = run_suite("hyperbolic", 2, 1e-9).unwrap();
        assert_ne!(a[0].params, b[0].params);
    }

    #[test]
    fn suite_names() {
        assert_eq!(parse_suites(&["all".into()]).unwrap(), SUITES.to_vec());
        assert_eq!(parse_suites(&["lucas,spectral".into()]).unwrap(), vec!["spectral", "lucas"]);
        assert!(matches!(parse_suites(&["nope".into()]), Err(Error::UnknownSuite(_))));
        assert!(run(&["nope"], 1, 1e-9).is_err());
    }

    #[test]
    fn tolerance_below_float_noise_fails() {
        let tight = run(&["lucas"], 7, 1e-15).unwrap();
        assert!(!tight.passed());
    }
}
