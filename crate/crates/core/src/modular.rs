//! Univariate polynomials and polynomial matrices over a prime field `Z_p`.
//!
//! Used by the offline stage to decide coprimality of determinant
//! polynomials exactly.

use crate::error::{Error, Result};
use crate::matrix_poly::MatrixPolynomial;

/// Two 31-bit primes, `2^31 - 1` and `2^31 - 19`.
pub const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero");
    pow_mod(a, p - 2, p)
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Reduces an integer-valued float into `[0, p)`.
pub fn reduce(v: f64, p: u64) -> u64 {
    debug_assert!(v.fract() == 0.0);
    (v as i128).rem_euclid(p as i128) as u64
}

/// Dense polynomial over `Z_p`, ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        coeffs.iter_mut().for_each(|c| *c %= p);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
                .collect(),
        )
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// Remainder of `self` divided by nonzero `divisor`.
    pub fn rem(&self, divisor: &ModPoly) -> ModPoly {
        let p = self.p;
        let db = divisor.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(divisor.coeffs[db], p);
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let q = mul_mod(r[top], lead_inv, p);
            if q != 0 {
                let shift = top - db;
                for (i, &b) in divisor.coeffs.iter().enumerate() {
                    r[shift + i] = sub_mod(r[shift + i], mul_mod(q, b, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly::new(p, r)
    }

    fn monic(mut self) -> ModPoly {
        if let Some(&lead) = self.coeffs.last() {
            let inv = inv_mod(lead, self.p);
            self.coeffs.iter_mut().for_each(|c| *c = mul_mod(*c, inv, self.p));
        }
        self
    }

    /// Monic greatest common divisor by the Euclidean algorithm;
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        assert_eq!(self.p, other.p, "moduli differ");
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Interpolating polynomial through `(xs[i], ys[i])`, distinct `xs`.
    pub fn interpolate(p: u64, xs: &[u64], ys: &[u64]) -> ModPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        // Newton divided differences.
        let mut dd = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = sub_mod(dd[i], dd[i - 1], p);
                let den = sub_mod(xs[i], xs[i - level], p);
                dd[i] = mul_mod(num, inv_mod(den, p), p);
            }
        }
        // Horner expansion of the Newton form.
        let mut coeffs = vec![0u64; n.max(1)];
        for (len, i) in (0..n).rev().enumerate() {
            // coeffs = coeffs * (x - xs[i]) + dd[i]
            let mut next = vec![0u64; len + 1];
            for (j, &c) in coeffs[..len].iter().enumerate() {
                next[j + 1] = (next[j + 1] + c) % p;
                next[j] = sub_mod(next[j], mul_mod(c, xs[i], p), p);
            }
            next[0] = (next[0] + dd[i]) % p;
            coeffs[..=len].copy_from_slice(&next);
        }
        ModPoly::new(p, coeffs)
    }
}

/// Determinant of a row-major `n x n` matrix over `Z_p`, destroying it.
pub fn det_mod(a: &mut [u64], n: usize, p: u64) -> u64 {
    let mut det = 1;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| a[r * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = (p - det) % p;
        }
        let pivot = a[k * n + k];
        det = mul_mod(det, pivot, p);
        let inv = inv_mod(pivot, p);
        for r in k + 1..n {
            let f = mul_mod(a[r * n + k], inv, p);
            if f == 0 {
                continue;
            }
            for c in k..n {
                a[r * n + c] = sub_mod(a[r * n + c], mul_mod(f, a[k * n + c], p), p);
            }
        }
    }
    det
}

/// Matrix polynomial with coefficients in `Z_p`, as a degree-indexed stack
/// of row-major residue matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolyMatrix {
    p: u64,
    n: usize,
    stack: Vec<Vec<u64>>,
}

impl ModularPolyMatrix {
    /// Reduces an integer-valued matrix polynomial modulo `p`.
    pub fn from_integer(mp: &MatrixPolynomial, p: u64) -> Result<Self> {
        if !mp.is_integer() {
            return Err(Error::InvalidArgument(
                "modular reduction requires integer coefficients".into(),
            ));
        }
        Ok(ModularPolyMatrix {
            p,
            n: mp.size(),
            stack: mp
                .stack()
                .iter()
                .map(|a| a.iter().map(|&v| reduce(v, p)).collect())
                .collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn entry_degree(&self) -> usize {
        self.stack.len() - 1
    }

    /// Evaluates every entry at `x`.
    pub fn evaluate(&self, x: u64) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.n * self.n];
        for a in self.stack.iter().rev() {
            for (acc, &c) in out.iter_mut().zip(a) {
                *acc = (mul_mod(*acc, x, p) + c) % p;
            }
        }
        out
    }

    /// Sample points `0..=N*d`, enough for the determinant and every minor.
    pub fn sample_points(&self) -> Vec<u64> {
        (0..=(self.n * self.entry_degree()) as u64).collect()
    }

    /// `det M(x)` exactly, by evaluation and interpolation.
    pub fn det_poly(&self) -> ModPoly {
        let xs = self.sample_points();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| det_mod(&mut self.evaluate(x), self.n, self.p))
            .collect();
        ModPoly::interpolate(self.p, &xs, &ys)
    }

    /// Determinant of the minor with `row` and `col` deleted.
    pub fn minor_det_poly(&self, row: usize, col: usize) -> ModPoly {
        let xs = self.sample_points();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                let mut m = minor(&self.evaluate(x), self.n, row, col);
                det_mod(&mut m, self.n - 1, self.p)
            })
            .collect();
        ModPoly::interpolate(self.p, &xs, &ys)
    }
}

pub(crate) fn minor(a: &[u64], n: usize, row: usize, col: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for r in (0..n).filter(|&r| r != row) {
        for c in (0..n).filter(|&c| c != col) {
            out.push(a[r * n + c]);
        }
    }
    out
}
