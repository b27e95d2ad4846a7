//! Exact determinant polynomials over `Z[x]`.
//!
//! Test and offline oracle only; the online solver never calls into here.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::MatrixPolynomial;
use crate::error::{Error, Result};

/// Dense integer polynomial, ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let len = self.0.len().max(rhs.0.len());
        let zero = BigInt::zero();
        IntPoly::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) - rhs.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Exact division; panics if `divisor` does not divide `self` in `Z[x]`.
    fn div_exact(&self, divisor: &IntPoly) -> IntPoly {
        let db = divisor.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        assert!(da >= db, "inexact polynomial division");
        let lead = &divisor.0[db];
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); da - db + 1];
        for shift in (0..=da - db).rev() {
            let top = &rem[shift + db];
            if top.is_zero() {
                continue;
            }
            assert!((top % lead).is_zero(), "inexact polynomial division");
            let q = top / lead;
            for (i, b) in divisor.0.iter().enumerate() {
                rem[shift + i] -= &q * b;
            }
            quot[shift] = q;
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        IntPoly::new(quot)
    }

    pub fn is_negative_leading(&self) -> bool {
        self.0.last().is_some_and(|c| c.is_negative())
    }
}

/// Exact determinant of an integer matrix polynomial by fraction-free
/// (Bareiss) elimination over `Z[x]`.
pub fn det_poly_exact(mp: &MatrixPolynomial) -> Result<IntPoly> {
    if !mp.is_integer() {
        return Err(Error::InvalidArgument(
            "exact determinant requires integer coefficient matrices".into(),
        ));
    }
    let n = mp.size();
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let mut m: Vec<Vec<IntPoly>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    IntPoly::new(
                        (0..=mp.entry_degree())
                            .map(|l| BigInt::from(mp.coeff(l, r, c) as i64))
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();

    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(IntPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev);
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}
