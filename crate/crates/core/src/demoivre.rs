//! Circulant de Moivre matrices and the volume-one hyperbolon invariant.
//!
//! `H(α)` is the circulant matrix whose first row is
//! `(h_0(α), ..., h_{m-1}(α))`; entry `(i, j)` is `row[(j - i) mod m]`.
//! These matrices form a one-parameter group, `H(α) H(β) = H(α + β)`, and
//! every member has determinant one.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hyperbolic::eval_point;
use crate::poly::SparsePoly;
use crate::spectral::RootOfUnityTable;
use crate::{Error, Result};

/// Largest order for which the symbolic determinant is expanded.
pub const MAX_SYMBOLIC_ORDER: usize = 6;

/// The `m = 4` surface in the form quoted in the literature, variables
/// `(x, y, z, t)`. It is not the circulant determinant in the natural
/// labelling; see [`reconcile_invariant`].
pub const REFERENCE_QUARTIC: &str =
    "-x^4 + y^4 - z^4 + t^4 + 4*x^2*y*t - 4*x*y^2*z + 4*z^2*y*t - 4*t^2*x*z + 2*x^2*z^2 - 2*y^2*t^2";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantMatrix {
    row: Vec<Complex64>,
}

impl CirculantMatrix {
    pub fn new(row: Vec<Complex64>) -> Self {
        assert!(!row.is_empty(), "circulant matrix needs at least one entry");
        Self { row }
    }

    pub fn identity(m: usize) -> Self {
        let mut row = vec![Complex64::new(0.0, 0.0); m];
        row[0] = Complex64::new(1.0, 0.0);
        Self { row }
    }

    /// The cyclic shift generator, first row `(0, 1, 0, ..., 0)`.
    pub fn shift(m: usize) -> Self {
        let mut row = vec![Complex64::new(0.0, 0.0); m];
        row[1 % m] = Complex64::new(1.0, 0.0);
        Self { row }
    }

    pub fn order(&self) -> usize {
        self.row.len()
    }

    pub fn row(&self) -> &[Complex64] {
        &self.row
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let m = self.order();
        self.row[(j + m - i % m) % m]
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let m = self.order();
        (0..m).map(|i| (0..m).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// `λ_k = Σ_j ω^{kj} row[j]`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let m = self.order();
        if m == 1 {
            return vec![self.row[0]];
        }
        let w = RootOfUnityTable::new(m).expect("m >= 2");
        (0..m)
            .map(|k| self.row.iter().enumerate().map(|(j, r)| w.pow((k * j) as i64) * r).sum())
            .collect()
    }

    /// Determinant as the product of eigenvalues.
    pub fn determinant(&self) -> Complex64 {
        self.eigenvalues().into_iter().product()
    }

    /// Determinant by Gaussian elimination on the dense matrix.
    pub fn determinant_dense(&self) -> Complex64 {
        let mut a = self.to_dense();
        let m = a.len();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..m {
            let pivot = (col..m)
                .max_by(|&p, &q| a[p][col].norm().total_cmp(&a[q][col].norm()))
                .unwrap();
            if a[pivot][col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col];
            det *= p;
            for r in (col + 1)..m {
                let factor = a[r][col] / p;
                for c in col..m {
                    let v = a[col][c];
                    a[r][c] -= factor * v;
                }
            }
        }
        det
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.order());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = circulant_mul(&acc, &base).expect("same order");
            }
            base = circulant_mul(&base, &base).expect("same order");
            n >>= 1;
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.row.iter().zip(&other.row).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Product of two circulants: cyclic convolution of their first rows.
pub fn circulant_mul(a: &CirculantMatrix, b: &CirculantMatrix) -> Result<CirculantMatrix> {
    let m = a.order();
    if b.order() != m {
        return Err(Error::Dimension { expected: m, got: b.order() });
    }
    let row = (0..m)
        .map(|k| (0..m).map(|i| a.row[i] * b.row[(k + m - i) % m]).sum())
        .collect();
    Ok(CirculantMatrix { row })
}

/// `H(nα)`, equal to `H(α)^n` (and to `H(-α)^{-n}` for negative `n`).
pub fn demoivre_matrix(m: usize, alpha: Complex64, n: i64) -> Result<CirculantMatrix> {
    let point = eval_point(m, alpha * n as f64)?;
    Ok(CirculantMatrix { row: point.h })
}

/// Variable names `x0 .. x{m-1}` used by [`hyperbolon_invariant`].
pub fn index_var_names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("x{i}")).collect()
}

/// Conventional coordinate names: `(x, y)`, `(x, y, z)`, `(x, y, z, t)`,
/// falling back to `x0 ..` for larger orders.
pub fn surface_var_names(m: usize) -> Vec<String> {
    match m {
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        4 => vec!["x".into(), "y".into(), "z".into(), "t".into()],
        _ => index_var_names(m),
    }
}

/// Determinant of the symbolic circulant with first row `(x0, ..., x{m-1})`,
/// expanded exactly over the integers by the Leibniz formula.
pub fn hyperbolon_invariant(m: usize) -> Result<SparsePoly> {
    if !(2..=MAX_SYMBOLIC_ORDER).contains(&m) {
        return Err(Error::Domain(format!("symbolic invariant supports 2 <= m <= {MAX_SYMBOLIC_ORDER}, got {m}")));
    }
    let mut acc: HashMap<Vec<u32>, i64> = HashMap::new();
    for_each_permutation(m, |perm, sign| {
        let mut exps = vec![0u32; m];
        for (i, &j) in perm.iter().enumerate() {
            exps[(j + m - i) % m] += 1;
        }
        *acc.entry(exps).or_insert(0) += sign;
    });
    let names = index_var_names(m);
    Ok(SparsePoly::from_terms(&names, acc.into_iter().map(|(e, c)| (BigInt::from(c), e))))
}

/// Heap's algorithm; `sign` is the permutation parity as `±1`.
fn for_each_permutation(m: usize, mut visit: impl FnMut(&[usize], i64)) {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut counters = vec![0usize; m];
    let mut sign = 1i64;
    visit(&perm, sign);
    let mut i = 0;
    while i < m {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            visit(&perm, sign);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// The invariant paired with an evaluation routine, for membership tests on
/// many points.
#[derive(Debug, Clone)]
pub struct HyperbolonSurface {
    m: usize,
    invariant: SparsePoly,
}

impl HyperbolonSurface {
    pub fn new(m: usize) -> Result<Self> {
        Ok(Self { m, invariant: hyperbolon_invariant(m)? })
    }

    pub fn invariant(&self) -> &SparsePoly {
        &self.invariant
    }

    pub fn value(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.m {
            return Err(Error::Dimension { expected: self.m, got: point.len() });
        }
        Ok(self.invariant.eval(point))
    }

    pub fn contains(&self, point: &[Complex64], tol: f64) -> Result<bool> {
        Ok((self.value(point)? - 1.0).norm() <= tol)
    }
}

/// `|invariant(point) - 1| <= tol`.
pub fn on_surface(m: usize, point: &[Complex64], tol: f64) -> Result<bool> {
    HyperbolonSurface::new(m)?.contains(point, tol)
}

/// A relabelling `x_i -> x_{perm[i]}` and an overall sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relabeling {
    pub perm: Vec<usize>,
    pub sign: i32,
}

/// Every variable permutation and sign with `sign * candidate∘perm == exact`.
pub fn reconcile_invariant(exact: &SparsePoly, candidate: &SparsePoly) -> Vec<Relabeling> {
    let m = exact.vars().len();
    assert_eq!(candidate.vars().len(), m);
    let candidate = candidate.with_vars(exact.vars());
    let mut found = Vec::new();
    for_each_permutation(m, |perm, _| {
        let relabeled = candidate.permute_vars(perm);
        for sign in [1, -1] {
            let signed = if sign == 1 { relabeled.clone() } else { -&relabeled };
            if &signed == exact {
                found.push(Relabeling { perm: perm.to_vec(), sign });
            }
        }
    });
    found.sort_by(|a, b| a.perm.cmp(&b.perm).then(b.sign.cmp(&a.sign)));
    found
}
