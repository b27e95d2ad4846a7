//! Square matrices whose entries are univariate polynomials, stored as a
//! stack of coefficient matrices `M(x) = A_0 + A_1 x + ... + A_d x^d`.

mod exact;

pub use exact::{det_poly_exact, IntPoly};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Deserialize)]
struct MatrixPolynomialRepr {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    stack: Vec<Vec<f64>>,
}

/// `N x N` matrix polynomial as a degree-indexed stack of row-major real
/// coefficient matrices. The top matrix is nonzero unless `d = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixPolynomialRepr")]
pub struct MatrixPolynomial {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    stack: Vec<Vec<f64>>,
}

impl TryFrom<MatrixPolynomialRepr> for MatrixPolynomial {
    type Error = Error;

    fn try_from(repr: MatrixPolynomialRepr) -> Result<Self> {
        if repr.stack.len() != repr.d + 1 {
            return Err(Error::DimensionMismatch {
                expected: repr.d + 1,
                got: repr.stack.len(),
            });
        }
        let mp = MatrixPolynomial::new(repr.n, repr.stack)?;
        if mp.d != repr.d {
            return Err(Error::InvalidArgument(format!(
                "declared degree {} but top coefficient matrix is zero",
                repr.d
            )));
        }
        Ok(mp)
    }
}

impl MatrixPolynomial {
    /// Builds from row-major coefficient matrices `A_0..A_d`; trailing
    /// all-zero matrices are dropped.
    pub fn new(n: usize, mut stack: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = stack.iter().find(|a| a.len() != n * n) {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: bad.len(),
            });
        }
        while stack.len() > 1 && stack.last().is_some_and(|a| a.iter().all(|&v| v == 0.0)) {
            stack.pop();
        }
        if stack.is_empty() {
            stack.push(vec![0.0; n * n]);
        }
        Ok(MatrixPolynomial {
            n,
            d: stack.len() - 1,
            stack,
        })
    }

    /// Builds from per-entry coefficient lists, `entries[r][c][l]` being the
    /// coefficient of `x^l` at `(r, c)`.
    pub fn from_entries(entries: &[Vec<Vec<f64>>]) -> Result<Self> {
        let n = entries.len();
        let mut degree = 0;
        for row in entries {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for e in row {
                degree = degree.max(e.len().saturating_sub(1));
            }
        }
        let mut stack = vec![vec![0.0; n * n]; degree + 1];
        for (r, row) in entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                for (l, &a) in e.iter().enumerate() {
                    stack[l][r * n + c] = a;
                }
            }
        }
        Self::new(n, stack)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry_degree(&self) -> usize {
        self.d
    }

    pub fn stack(&self) -> &[Vec<f64>] {
        &self.stack
    }

    /// Coefficient of `x^l` in entry `(r, c)`.
    pub fn coeff(&self, l: usize, r: usize, c: usize) -> f64 {
        self.stack[l][r * self.n + c]
    }

    /// Entrywise Horner evaluation at `z`.
    pub fn evaluate_at(&self, z: Complex64) -> ComplexMatrix {
        let nn = self.n * self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); nn];
        for a in self.stack.iter().rev() {
            for (acc, &coef) in data.iter_mut().zip(a) {
                *acc = *acc * z + coef;
            }
        }
        ComplexMatrix { n: self.n, data }
    }

    pub fn is_integer(&self) -> bool {
        self.stack
            .iter()
            .flatten()
            .all(|v| v.is_finite() && v.fract() == 0.0)
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(n, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        ComplexMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n + c] = v;
    }

    /// Column `col` with row `skip_row` removed.
    pub fn column_without(&self, col: usize, skip_row: usize) -> Vec<Complex64> {
        (0..self.n)
            .filter(|&r| r != skip_row)
            .map(|r| self.get(r, col))
            .collect()
    }

    /// The `(n-1) x (n-1)` matrix obtained by deleting `row` and `col`.
    pub fn minor(&self, row: usize, col: usize) -> ComplexMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for r in (0..n).filter(|&r| r != row) {
            for c in (0..n).filter(|&c| c != col) {
                data.push(self.get(r, c));
            }
        }
        ComplexMatrix { n: n - 1, data }
    }

    /// Copy with column `col` replaced by `values`.
    pub fn with_column(&self, col: usize, values: &[Complex64]) -> ComplexMatrix {
        let mut out = self.clone();
        for (r, &v) in values.iter().enumerate() {
            out.set(r, col, v);
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.n {
                self.data.swap(a * self.n + c, b * self.n + c);
            }
        }
    }

    pub fn det(&self) -> Complex64 {
        det_complex(self)
    }
}

/// Determinant by LU elimination with partial pivoting (largest modulus).
pub fn det_complex(m: &ComplexMatrix) -> Complex64 {
    let mut scratch = m.data.clone();
    det_in_place(&mut scratch, m.n)
}

/// Determinant of the row-major `n x n` matrix in `a`, destroying it.
pub fn det_in_place(a: &mut [Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (pivot_row, pivot_mag) = (k..n)
            .map(|r| (r, a[r * n + k].norm_sqr()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot_row != k {
            for c in k..n {
                a.swap(k * n + c, pivot_row * n + c);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        let inv_pivot = pivot.inv();
        for r in k + 1..n {
            let factor = a[r * n + k] * inv_pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in k + 1..n {
                let upper = a[k * n + c];
                a[r * n + c] -= factor * upper;
            }
        }
    }
    det
}
