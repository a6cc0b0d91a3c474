use std::fmt::Write;

use hypercheb::chebyshev::{
    constrained_variables, expand_poly, expand_poly_m2, genfun as rational_genfun, recurrence_eval, stream_eval,
    ExpansionKind, StreamIndex,
};
use hypercheb::companion::{build_companion, chebyshev_generator, closed_form_check, power, RecurrenceSpec};
use hypercheb::demoivre::{hyperbolon_invariant, reconcile_invariant, surface_var_names, REFERENCE_QUARTIC};
use hypercheb::hyperbolic::eval_point;
use hypercheb::lucas::{identify_m2, identify_m3, vuw_direct, vuw_recurrent, CubicRoots, QuadraticRoots, RootFunction};
use hypercheb::poly::SparsePoly;
use hypercheb::verify::{self, parse_suites};
use hypercheb::{BigRational, Complex64};
use serde::Serialize;
use serde_json::json;

use crate::parse::{complex, complex_cols, complex_list, rational_list, real};
use crate::{ChebArgs, CliError, CompanionArgs, Format, GenfunArgs, LucasArgs, SurfaceArgs, VerifyArgs};

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents contain only finite-structure data")
}

/// Returns the document and the number of failed cases.
pub fn verify(a: &VerifyArgs) -> Result<(String, usize), CliError> {
    let suites = parse_suites(std::slice::from_ref(&a.suites))?;
    let report = verify::run(&suites, a.seed, a.tol)?;
    eprintln!("hypercheb: verify finished in {:.3} s", report.wall_time.as_secs_f64());
    let failures = report.failures().count();
    if a.json {
        return Ok((to_json(&report), failures));
    }
    let mut s = String::new();
    writeln!(s, "# verify seed={} tol={:e} suites={}", report.seed, report.tol, report.suites.join(",")).unwrap();
    for c in &report.cases {
        let status = if c.pass { "PASS" } else { "FAIL" };
        writeln!(s, "{status} {} residual={} {}", c.id, real(c.residual), c.params).unwrap();
    }
    write!(
        s,
        "# cases={} failed={} max_residual={}",
        report.cases.len(),
        failures,
        real(report.max_residual())
    )
    .unwrap();
    Ok((s, failures))
}

fn expansion(m: usize, kind: u8, n: u32) -> Result<SparsePoly, CliError> {
    match m {
        2 if kind == 0 => Ok(expand_poly_m2(n)),
        2 => Err(CliError::Usage("m = 2 has only expansion kind 0".into())),
        3 => Ok(expand_poly(ExpansionKind::from_index(kind)?, n)),
        _ => Err(CliError::Usage(format!("exact expansions exist for m = 2 and m = 3, got {m}"))),
    }
}

pub fn cheb(a: &ChebArgs) -> Result<String, CliError> {
    if a.coeffs {
        return Ok(expansion(a.m, a.kind, a.n)?.to_string());
    }
    if a.genfun {
        if a.m != 3 {
            return Err(CliError::Usage("generating functions are available for m = 3".into()));
        }
        let args = GenfunArgs { stream: a.stream, terms: a.terms, alpha: Some(a.alpha.clone()), json: false };
        return genfun(&args);
    }
    let alpha = complex(&a.alpha)?;
    if a.table {
        let seq = recurrence_eval(a.m, alpha, (a.n as usize).max(2))?;
        let mut s = String::from("n,stream,re,im");
        for n in 0..=a.n as usize {
            for (st, values) in seq.streams.iter().enumerate() {
                write!(s, "\n{n},{st},{}", complex_cols(values[n])).unwrap();
            }
        }
        return Ok(s);
    }
    if a.stream >= a.m {
        return Err(CliError::Usage(format!("stream must be below m = {}", a.m)));
    }
    let v = stream_eval(a.m, alpha, StreamIndex { n: a.n as i64, s: a.stream })?;
    Ok(complex_cols(v))
}

pub fn genfun(a: &GenfunArgs) -> Result<String, CliError> {
    let gf = rational_genfun(a.stream)?;
    let strings = |ps: &[SparsePoly]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let numeric = match &a.alpha {
        Some(text) => Some(gf.substitute(constrained_variables(complex(text)?)?).series(a.terms)),
        None => None,
    };
    let symbolic = gf.series(a.terms);
    if a.json {
        let series = match &numeric {
            Some(vals) => json!(vals),
            None => json!(strings(&symbolic)),
        };
        let doc = json!({
            "stream": a.stream,
            "variables": ["x", "xs", "xss"],
            "numerator": strings(&gf.numerator),
            "denominator": strings(&gf.denominator),
            "series": series,
        });
        return Ok(to_json(&doc));
    }
    let mut s = format!("# stream {} in (x, xs, xss); coefficients of z^k", a.stream);
    for (label, ps) in [("numerator", &gf.numerator), ("denominator", &gf.denominator)] {
        write!(s, "\n{label}").unwrap();
        for (k, p) in ps.iter().enumerate() {
            write!(s, "\n{k}: {p}").unwrap();
        }
    }
    s.push_str("\nseries");
    match numeric {
        Some(vals) => {
            for (k, v) in vals.iter().enumerate() {
                write!(s, "\n{k}: {}", complex_cols(*v)).unwrap();
            }
        }
        None => {
            for (k, p) in symbolic.iter().enumerate() {
                write!(s, "\n{k}: {p}").unwrap();
            }
        }
    }
    Ok(s)
}

pub fn surface(a: &SurfaceArgs) -> Result<String, CliError> {
    let names = surface_var_names(a.m);
    if a.reconcile {
        if a.m != 4 {
            return Err(CliError::Usage("reconciliation compares quartics; use --m 4".into()));
        }
        let exact = hyperbolon_invariant(4)?.with_vars(&names);
        let reference = SparsePoly::parse(&names, REFERENCE_QUARTIC)?;
        let relabelings = reconcile_invariant(&exact, &reference);
        let doc = json!({
            "exact": exact.to_string(),
            "reference": reference.to_string(),
            "identical": exact == reference,
            "relabelings": relabelings,
        });
        return Ok(to_json(&doc));
    }
    let invariant = hyperbolon_invariant(a.m)?.with_vars(&names);
    if !a.points {
        return Ok(invariant.to_string());
    }
    if a.grid == 0 || !(a.radius.is_finite() && a.radius >= 0.0) {
        return Err(CliError::Usage("--grid must be positive and --radius finite and non-negative".into()));
    }
    let step = if a.grid > 1 { 2.0 * a.radius / (a.grid - 1) as f64 } else { 0.0 };
    let start = if a.grid > 1 { -a.radius } else { 0.0 };
    let mut points = Vec::with_capacity(a.grid * a.grid);
    for i in 0..a.grid {
        for j in 0..a.grid {
            let alpha = Complex64::new(start + i as f64 * step, start + j as f64 * step);
            let p = eval_point(a.m, alpha)?;
            let value = invariant.eval(&p.h);
            points.push(json!({ "alpha": alpha, "h": p.h, "invariant": value }));
        }
    }
    Ok(to_json(&json!({ "m": a.m, "variables": names, "points": points })))
}

fn selected(which: &str) -> Result<Vec<RootFunction>, CliError> {
    if which.eq_ignore_ascii_case("all") {
        return Ok(RootFunction::ALL.to_vec());
    }
    which.split(',').map(|w| w.trim().parse().map_err(|e: hypercheb::Error| CliError::Usage(e.to_string()))).collect()
}

#[derive(Serialize)]
struct LucasRow {
    n: u32,
    function: String,
    direct: Complex64,
    recurrent: Complex64,
}

pub fn lucas(a: &LucasArgs) -> Result<String, CliError> {
    let roots = complex_list(&a.roots)?;
    let reals = || -> Result<Vec<f64>, CliError> {
        roots
            .iter()
            .map(|z| if z.im == 0.0 { Ok(z.re) } else { Err(CliError::Usage("identification needs real roots".into())) })
            .collect()
    };
    if a.identify {
        let r = reals()?;
        let id = match r.as_slice() {
            [x, y] => identify_m2(*x, *y, a.n)?,
            [x, y, z] => identify_m3(&CubicRoots::real(*x, *y, *z)?, a.n)?,
            _ => return Err(CliError::Usage("give two or three roots".into())),
        };
        return Ok(match a.format {
            Format::Json => to_json(&id),
            Format::Csv => {
                let mut s = String::from("id,residual");
                for r in &id.residuals {
                    write!(s, "\n{},{}", r.id, real(r.residual)).unwrap();
                }
                s
            }
        });
    }
    let rows: Vec<LucasRow> = match roots.as_slice() {
        [x, y] => {
            let q = QuadraticRoots::new(*x, *y);
            let v = q.recurrent([Complex64::new(2.0, 0.0), q.p()], a.n as usize);
            let u = q.recurrent([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], a.n as usize);
            let mut rows = Vec::new();
            for n in 0..=a.n {
                rows.push(LucasRow { n, function: "V".into(), direct: q.v(n), recurrent: v[n as usize] });
                rows.push(LucasRow { n, function: "U".into(), direct: q.u(n)?, recurrent: u[n as usize] });
            }
            rows
        }
        [x, y, z] => {
            let cubic = CubicRoots::new(*x, *y, *z)?;
            let funcs = selected(&a.which)?;
            let seqs = funcs
                .iter()
                .map(|&f| vuw_recurrent(&cubic, f, (a.n as usize).max(3)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut rows = Vec::new();
            for n in 0..=a.n {
                for (f, seq) in funcs.iter().zip(&seqs) {
                    rows.push(LucasRow {
                        n,
                        function: f.to_string(),
                        direct: vuw_direct(&cubic, *f, n)?,
                        recurrent: seq.values[n as usize],
                    });
                }
            }
            rows
        }
        _ => return Err(CliError::Usage("give two or three roots".into())),
    };
    Ok(match a.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("n,function,direct_re,direct_im,recurrent_re,recurrent_im");
            for r in &rows {
                write!(s, "\n{},{},{},{}", r.n, r.function, complex_cols(r.direct), complex_cols(r.recurrent)).unwrap();
            }
            s
        }
    })
}

pub fn companion(a: &CompanionArgs) -> Result<String, CliError> {
    if a.float || a.chebyshev.is_some() {
        let spec = match a.chebyshev {
            Some(m) => chebyshev_generator(m, complex(&a.alpha)?)?,
            None => {
                let (alphas, seeds) = required_lists(a)?;
                RecurrenceSpec::new(complex_list(alphas)?, complex_list(seeds)?)?
            }
        };
        return companion_float(a, &spec);
    }
    let (alphas, seeds) = required_lists(a)?;
    let spec = RecurrenceSpec::new(rational_list(alphas)?, rational_list(seeds)?)?;
    if a.closed_form {
        return Ok(to_json(&closed_form_check(&spec, a.n as u64)?));
    }
    if let Some(k) = a.matrix_power {
        let m = power(&build_companion(&spec), k);
        let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(BigRational::to_string).collect()).collect();
        return Ok(to_json(&json!({ "n": k, "matrix": rows })));
    }
    let mut s = String::from("n,F");
    for (n, v) in spec.sequence(a.n as usize).iter().enumerate() {
        write!(s, "\n{n},{v}").unwrap();
    }
    Ok(s)
}

fn required_lists(a: &CompanionArgs) -> Result<(&str, &str), CliError> {
    match (&a.alphas, &a.seeds) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(CliError::Usage("--alphas and --seeds are required".into())),
    }
}

fn companion_float(a: &CompanionArgs, spec: &RecurrenceSpec<Complex64>) -> Result<String, CliError> {
    if a.closed_form {
        return Err(CliError::Usage("closed-form checks run in exact arithmetic; drop --float".into()));
    }
    if let Some(k) = a.matrix_power {
        let m = power(&build_companion(spec), k);
        return Ok(to_json(&json!({ "n": k, "matrix": m.rows() })));
    }
    let mut s = String::from("n,re,im");
    for (n, v) in spec.sequence(a.n as usize).iter().enumerate() {
        write!(s, "\n{n},{}", complex_cols(*v)).unwrap();
    }
    Ok(s)
}
