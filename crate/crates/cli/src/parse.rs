//! Flag value parsing and number formatting.

use hypercheb::companion::parse_rational;
use hypercheb::{BigRational, Complex64};

use crate::CliError;

/// `re,im` or a bare real.
pub fn complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("expected a complex literal `re,im`, got `{text}`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

/// `1,2,3` as reals, or `1,0;0,1;2,0` as complex pairs.
pub fn complex_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    if text.contains(';') {
        text.split(';').map(complex).collect()
    } else {
        text.split(',').map(complex).collect()
    }
}

pub fn rational_list(text: &str) -> Result<Vec<BigRational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

/// 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn complex_cols(z: Complex64) -> String {
    format!("{},{}", real(z.re), real(z.im))
}
