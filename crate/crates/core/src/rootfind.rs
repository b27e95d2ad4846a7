//! Polynomial roots as eigenvalues of the balanced companion matrix.
//!
//! The companion matrix is already upper Hessenberg, so after diagonal
//! balancing it goes straight into a single-shift complex QR iteration with
//! Wilkinson shifts and deflation on negligible subdiagonal entries.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::UnivariatePolynomial;

/// Default relative imaginary-part tolerance for [`real_candidates`].
pub const DEFAULT_IM_TOL: f64 = 1e-6;

const MAX_ITERATIONS_PER_ROOT: usize = 60;

/// Unordered complex roots of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RootList {
    pub roots: Vec<Complex64>,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// All complex roots of `p`. Trailing exactly-zero coefficients are ignored;
/// callers wanting tolerance-based trimming should apply
/// [`crate::spectral::trim`] first.
pub fn roots(p: &UnivariatePolynomial) -> Result<RootList> {
    let coeffs = p.coeffs();
    let mut k = coeffs.len() - 1;
    while k > 0 && coeffs[k] == Complex64::new(0.0, 0.0) {
        k -= 1;
    }
    if k == 0 {
        return Err(Error::NoRoots);
    }
    let lead = coeffs[k];
    if k == 1 {
        return Ok(RootList {
            roots: vec![-coeffs[0] / lead],
        });
    }

    // First row holds -c_{k-1}/c_k .. -c_0/c_k, ones on the subdiagonal.
    let mut h = vec![Complex64::new(0.0, 0.0); k * k];
    for j in 0..k {
        h[j] = -coeffs[k - 1 - j] / lead;
    }
    for i in 1..k {
        h[i * k + i - 1] = Complex64::new(1.0, 0.0);
    }
    balance(&mut h, k);
    let roots = hessenberg_eigenvalues(&mut h, k)?;
    Ok(RootList { roots })
}

/// Keeps roots with `|Im z| <= im_tol * (1 + |Re z|)`, returning real parts
/// in input order.
pub fn real_candidates(rl: &RootList, im_tol: f64) -> Vec<f64> {
    rl.roots
        .iter()
        .filter(|z| z.im.abs() <= im_tol * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Radix-2 diagonal similarity scaling that equalizes row and column norms.
fn balance(a: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                c += a[j * n + i].norm();
                r += a[i * n + j].norm();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] *= inv;
                }
                for j in 0..n {
                    a[j * n + i] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

fn two_by_two_eigenvalues(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> (Complex64, Complex64) {
    let mean = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let (p, q) = (mean + disc, mean - disc);
    let (big, small) = if p.norm() >= q.norm() { (p, q) } else { (q, p) };
    if big == Complex64::new(0.0, 0.0) {
        return (big, small);
    }
    (big, (a * d - b * c) / big)
}

/// Eigenvalues of the upper Hessenberg matrix `h`, destroying it.
fn hessenberg_eigenvalues(h: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let idx = |r: usize, c: usize| r * n + c;
    let eps = f64::EPSILON;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n as isize - 1;
    let mut iter = 0;
    let mut rotations: Vec<(Complex64, Complex64)> = Vec::with_capacity(n);

    while hi >= 0 {
        let hu = hi as usize;
        // Locate the top of the active unreduced block.
        let mut lo = hu;
        while lo > 0 {
            let s = l1(h[idx(lo - 1, lo - 1)]) + l1(h[idx(lo, lo)]);
            let sub = l1(h[idx(lo, lo - 1)]);
            if sub <= eps * s || (s == 0.0 && sub == 0.0) {
                h[idx(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hu {
            eig[hu] = h[idx(hu, hu)];
            hi -= 1;
            iter = 0;
            continue;
        }
        if lo + 1 == hu {
            let (e1, e2) = two_by_two_eigenvalues(
                h[idx(lo, lo)],
                h[idx(lo, hu)],
                h[idx(hu, lo)],
                h[idx(hu, hu)],
            );
            eig[lo] = e1;
            eig[hu] = e2;
            hi -= 2;
            iter = 0;
            continue;
        }

        iter += 1;
        if iter > MAX_ITERATIONS_PER_ROOT {
            return Err(Error::NoConvergence);
        }
        let shift = if iter % 10 == 0 {
            // Exceptional shift breaks cycles.
            h[idx(hu, hu)] + Complex64::new(0.75 * h[idx(hu, hu - 1)].norm(), 0.0)
        } else {
            let d = h[idx(hu, hu)];
            let (e1, e2) = two_by_two_eigenvalues(
                h[idx(hu - 1, hu - 1)],
                h[idx(hu - 1, hu)],
                h[idx(hu, hu - 1)],
                d,
            );
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };

        for j in lo..=hu {
            h[idx(j, j)] -= shift;
        }
        // H - sI = QR: left rotations zero the subdiagonal.
        rotations.clear();
        for j in lo..hu {
            let a = h[idx(j, j)];
            let b = h[idx(j + 1, j)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (ca, cb) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            rotations.push((ca, cb));
            for c in j..=hu {
                let x = h[idx(j, c)];
                let y = h[idx(j + 1, c)];
                h[idx(j, c)] = ca.conj() * x + cb.conj() * y;
                h[idx(j + 1, c)] = -cb * x + ca * y;
            }
        }
        // RQ: apply the adjoint rotations from the right.
        for (j, &(ca, cb)) in (lo..hu).zip(&rotations) {
            let last_row = (j + 2).min(hu);
            for r in lo..=last_row {
                let x = h[idx(r, j)];
                let y = h[idx(r, j + 1)];
                h[idx(r, j)] = x * ca + y * cb;
                h[idx(r, j + 1)] = -x * cb.conj() + y * ca.conj();
            }
        }
        for j in lo..=hu {
            h[idx(j, j)] += shift;
        }
    }
    Ok(eig)
}
