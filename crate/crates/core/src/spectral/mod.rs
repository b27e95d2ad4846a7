//! Determinant-polynomial recovery by sampling on the unit circle.
//!
//! `M(x)` is evaluated at the `k+1` roots of unity `x_j = exp(-2 pi i j / (k+1))`
//! by a forward DFT along the degree axis of its coefficient stack; the
//! determinants of those slices are then mapped back to the coefficients of
//! `det M(x)` by the inverse DFT. No Vandermonde system is ever formed.

mod dft;

pub use dft::{unit_root, Dft, Direction};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix_poly::{det_complex, ComplexMatrix, MatrixPolynomial};

/// Default relative tolerance for [`trim`].
pub const DEFAULT_TRIM_TOL: f64 = 1e-12;

/// Dense complex polynomial `c_0 + c_1 x + ... + c_k x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Complex64>,
}

impl UnivariatePolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        UnivariatePolynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of stored coefficients minus one.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Largest `|Im c_l|` relative to `max |c_l|`.
    pub fn relative_imaginary(&self) -> f64 {
        let max = self.max_abs_coeff();
        if max == 0.0 {
            return 0.0;
        }
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.im.abs())) / max
    }

    /// Drops imaginary parts after checking they are below `rel_tol`.
    pub fn into_real(self, rel_tol: f64) -> Result<Self> {
        let rel = self.relative_imaginary();
        if rel > rel_tol {
            return Err(Error::NonRealCoefficients(rel));
        }
        Ok(Self::new(
            self.coeffs
                .into_iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        ))
    }
}

/// Determinant values at the `k+1` unit-circle sampling points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleVector {
    values: Vec<Complex64>,
}

impl SampleVector {
    pub fn new(values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty(), "need at least one sample");
        SampleVector { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// The degree bound `k` (one less than the number of samples).
    pub fn k(&self) -> usize {
        self.values.len() - 1
    }
}

/// `x_j = exp(-2 pi i j / (k+1))` for `j = 0..=k`.
pub fn sampling_points(k: usize) -> Vec<Complex64> {
    (0..=k).map(|j| unit_root(j, k + 1, Direction::Forward)).collect()
}

/// Evaluates `mp` at every point of [`sampling_points`]`(k)` at once by a
/// length-`k+1` DFT of each entry's zero-padded coefficient sequence.
pub fn batched_eval(mp: &MatrixPolynomial, k: usize) -> Result<Vec<ComplexMatrix>> {
    let d = mp.entry_degree();
    if k < d {
        return Err(Error::DegreeAliasing {
            k_plus_one: k + 1,
            degree: d,
        });
    }
    let n = mp.size();
    let len = k + 1;
    let plan = Dft::new(len, Direction::Forward);
    let mut slices = vec![vec![Complex64::new(0.0, 0.0); n * n]; len];
    let mut seq = vec![Complex64::new(0.0, 0.0); len];
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for entry in 0..n * n {
        seq.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
        for (l, a) in mp.stack().iter().enumerate() {
            seq[l] = Complex64::new(a[entry], 0.0);
        }
        plan.process(&seq, &mut out);
        for (slice, &v) in slices.iter_mut().zip(&out) {
            slice[entry] = v;
        }
    }
    slices
        .into_iter()
        .map(|data| ComplexMatrix::new(n, data))
        .collect()
}

/// Determinant of every slice returned by [`batched_eval`], in sample order.
pub fn determinant_samples(mp: &MatrixPolynomial, k: usize) -> Result<SampleVector> {
    let slices = batched_eval(mp, k)?;
    Ok(SampleVector::new(slices.iter().map(det_complex).collect()))
}

/// `c_l = 1/(k+1) sum_j y_j exp(2 pi i j l / (k+1))`.
pub fn recover_coefficients(samples: &SampleVector) -> UnivariatePolynomial {
    let len = samples.values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    Dft::new(len, Direction::Inverse).process(&samples.values, &mut out);
    let scale = 1.0 / len as f64;
    out.iter_mut().for_each(|c| *c *= scale);
    UnivariatePolynomial::new(out)
}

/// Coefficients of `det M(x)` assuming its degree is at most `k`.
pub fn determinant_polynomial(mp: &MatrixPolynomial, k: usize) -> Result<UnivariatePolynomial> {
    Ok(recover_coefficients(&determinant_samples(mp, k)?))
}

/// Removes trailing coefficients with `|c_l| <= rel_tol * max |c_j|`,
/// always keeping the constant term.
pub fn trim(p: &UnivariatePolynomial, rel_tol: f64) -> UnivariatePolynomial {
    let threshold = rel_tol * p.max_abs_coeff();
    let mut keep = p.coeffs.len();
    while keep > 1 && p.coeffs[keep - 1].norm() <= threshold {
        keep -= 1;
    }
    UnivariatePolynomial::new(p.coeffs[..keep].to_vec())
}
