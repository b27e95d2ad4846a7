//! Intersection of two plane conics.
//!
//! Each conic is a symmetric 3x3 matrix `C` acting on `(x, y, 1)`. Hiding
//! `y`, both conics are quadratics in `x` and the 4x4 Sylvester matrix gives
//! `M(y)` over the basis `(x^3, x^2, x, 1)`.

use nalgebra::DMatrix;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::sylvester::{sylvester, SylvesterMatrix};
use super::random_prime;
use crate::error::{Error, Result};
use crate::matrix_poly::MatrixPolynomial;
use crate::poly::{ExponentVector, MultivariatePolynomial, PolynomialSystem};

pub const ID: &str = "conic";
pub const N_VARS: usize = 2;
pub const HIDDEN: usize = 1;
pub const SIZE: usize = 4;
pub const SOLUTIONS: usize = 4;

/// Relative size below which a leading `x^2` coefficient counts as zero.
const LEADING_TOL: f64 = 1e-10;

/// Two homogeneous conics, row-major, symmetric, Frobenius-normalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConicRepr")]
pub struct ConicPairData {
    #[serde(rename = "C1")]
    c1: [f64; 9],
    #[serde(rename = "C2")]
    c2: [f64; 9],
}

#[derive(Deserialize)]
struct ConicRepr {
    #[serde(rename = "C1")]
    c1: [f64; 9],
    #[serde(rename = "C2")]
    c2: [f64; 9],
}

impl TryFrom<ConicRepr> for ConicPairData {
    type Error = Error;

    fn try_from(r: ConicRepr) -> Result<Self> {
        ConicPairData::new(r.c1, r.c2)
    }
}

fn normalized(c: [f64; 9]) -> Result<[f64; 9]> {
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidArgument("conic must be finite and nonzero".into()));
    }
    for (a, b) in [(1, 3), (2, 6), (5, 7)] {
        if (c[a] - c[b]).abs() > 1e-12 * norm {
            return Err(Error::InvalidArgument("conic matrix is not symmetric".into()));
        }
    }
    if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(c);
    }
    Ok(c.map(|v| v / norm))
}

/// `[x y 1] C [x y 1]^T` as a polynomial in `(x, y)`.
pub fn conic_polynomial(c: &[f64; 9]) -> MultivariatePolynomial {
    let terms = [
        (c[0], [2, 0]),
        (c[1] + c[3], [1, 1]),
        (c[4], [0, 2]),
        (c[2] + c[6], [1, 0]),
        (c[5] + c[7], [0, 1]),
        (c[8], [0, 0]),
    ];
    MultivariatePolynomial::new(
        vec!["x".into(), "y".into()],
        terms.iter().map(|(v, e)| (*v, ExponentVector(e.to_vec()))),
    )
    .expect("two variables")
}

/// Symmetric matrix of `a x^2 + b xy + c y^2 + d x + e y + f`.
fn from_coefficients(v: [f64; 6]) -> [f64; 9] {
    let [a, b, c, d, e, f] = v;
    [a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f]
}

impl ConicPairData {
    pub fn new(c1: [f64; 9], c2: [f64; 9]) -> Result<Self> {
        Ok(ConicPairData {
            c1: normalized(c1)?,
            c2: normalized(c2)?,
        })
    }

    pub fn c1(&self) -> &[f64; 9] {
        &self.c1
    }

    pub fn c2(&self) -> &[f64; 9] {
        &self.c2
    }

    /// The same conics expressed in coordinates rotated by `angle`:
    /// a point `p` on the original conics maps to `R(angle) p`.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        // With p = H^T p' for the homogeneous rotation H, the conic becomes H C H^T.
        let h = [c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0];
        let transform = |m: &[f64; 9]| {
            let mut out = [0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    out[i * 3 + j] = (0..3)
                        .flat_map(|a| (0..3).map(move |b| (a, b)))
                        .map(|(a, b)| h[i * 3 + a] * m[a * 3 + b] * h[j * 3 + b])
                        .sum();
                }
            }
            out
        };
        ConicPairData::new(transform(&self.c1), transform(&self.c2)).expect("rotation preserves validity")
    }
}

pub fn original_equations(data: &ConicPairData) -> PolynomialSystem {
    PolynomialSystem::new(vec![conic_polynomial(&data.c1), conic_polynomial(&data.c2)])
        .expect("two equations in two unknowns")
}

fn build_unchecked(c1: &[f64; 9], c2: &[f64; 9]) -> Result<SylvesterMatrix> {
    sylvester(&conic_polynomial(c1), &conic_polynomial(c2), HIDDEN)
}

/// `M(y)`: the Sylvester matrix of the two conics as quadratics in `x`.
pub fn conic_build(data: &ConicPairData) -> Result<MatrixPolynomial> {
    if data.c1[0].abs() <= LEADING_TOL || data.c2[0].abs() <= LEADING_TOL {
        return Err(Error::RotateCoordinates);
    }
    Ok(build_unchecked(&data.c1, &data.c2)?.matrix)
}

/// Sylvester matrix with row multipliers, for consistency checks.
pub fn conic_sylvester(data: &ConicPairData) -> Result<SylvesterMatrix> {
    conic_build(data)?;
    build_unchecked(&data.c1, &data.c2)
}

pub fn basis() -> Vec<ExponentVector> {
    (0..SIZE as u32).rev().map(|e| ExponentVector(vec![e])).collect()
}

/// Conic coefficients `(x^2, xy, y^2, x, y, 1)` vanishing at all `points`.
fn pencil_through(points: &[[f64; 2]; 4]) -> [[f64; 6]; 2] {
    let mut a = DMatrix::<f64>::zeros(6, 6);
    for (i, [x, y]) in points.iter().enumerate() {
        let row = [x * x, x * y, y * y, *x, *y, 1.0];
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let row = |k: usize| {
        let mut out = [0.0; 6];
        for (j, o) in out.iter_mut().enumerate() {
            *o = v_t[(order[k], j)];
        }
        out
    };
    [row(0), row(1)]
}

/// Random conic pair through four random points of `[-1, 1]^2`, with the
/// points (as `(x, y)`) as ground truth.
pub fn generate(rng: &mut dyn RngCore) -> (ConicPairData, Vec<Vec<f64>>) {
    loop {
        let mut points = [[0.0; 2]; 4];
        for p in points.iter_mut() {
            *p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        }
        let [n1, n2] = pencil_through(&points);
        let mix = |rng: &mut dyn RngCore| {
            let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let mut v = [0.0; 6];
            for j in 0..6 {
                v[j] = a * n1[j] + b * n2[j];
            }
            from_coefficients(v)
        };
        let (c1, c2) = (mix(rng), mix(rng));
        let Ok(data) = ConicPairData::new(c1, c2) else {
            continue;
        };
        let truth = points.iter().map(|p| p.to_vec()).collect();
        if conic_build(&data).is_ok() {
            return (data, truth);
        }
        // Leading coefficient vanished: rotate and carry the truth along.
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let rotated = data.rotated(angle);
        if conic_build(&rotated).is_ok() {
            let (s, c) = angle.sin_cos();
            let truth = points
                .iter()
                .map(|[x, y]| vec![c * x - s * y, s * x + c * y])
                .collect();
            return (rotated, truth);
        }
    }
}

/// `M(y)` with all twelve conic coefficients set to random primes.
pub fn random_integer(rng: &mut dyn RngCore) -> Result<MatrixPolynomial> {
    let mut conic = || from_coefficients([(); 6].map(|_| random_prime(rng) as f64));
    let (c1, c2) = (conic(), conic());
    Ok(build_unchecked(&c1, &c2)?.matrix)
}
