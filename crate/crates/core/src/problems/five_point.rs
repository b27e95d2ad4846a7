//! Calibrated relative pose from five point correspondences.
//!
//! The essential matrix is parameterized as `E = x E1 + y E2 + z E3 + E4`
//! over the nullspace of the epipolar constraints. The ten cubic constraints
//! `det E = 0` and `2 E E^T E - tr(E E^T) E = 0` are linear in the ten
//! monomials of degree <= 3 in `(x, y)` once `z` is hidden, giving a 10x10
//! `M(z)` with entries of degree <= 3.

use nalgebra::{DMatrix, Matrix3, Rotation3, Unit, Vector3};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::random_prime;
use crate::error::{Error, Result};
use crate::matrix_poly::MatrixPolynomial;
use crate::poly::{ExponentVector, MultivariatePolynomial, PolynomialSystem};

pub const ID: &str = "five_point";
pub const N_VARS: usize = 3;
pub const HIDDEN: usize = 2;
pub const SIZE: usize = 10;
pub const SOLUTIONS: usize = 10;

/// Ratio `sigma_5 / sigma_1` below which the epipolar matrix is not rank 5.
const RANK_TOL: f64 = 1e-10;

/// Column monomials in `(x, y)`.
pub const BASIS: [[u32; 2]; 10] = [
    [3, 0],
    [0, 3],
    [2, 1],
    [1, 2],
    [2, 0],
    [0, 2],
    [1, 1],
    [1, 0],
    [0, 1],
    [0, 0],
];

pub fn basis() -> Vec<ExponentVector> {
    BASIS.iter().map(|e| ExponentVector(e.to_vec())).collect()
}

/// Five correspondences of unit-norm homogeneous image points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FivePointRepr")]
pub struct FivePointData {
    pts_a: [[f64; 3]; 5],
    pts_b: [[f64; 3]; 5],
}

#[derive(Deserialize)]
struct FivePointRepr {
    pts_a: [[f64; 3]; 5],
    pts_b: [[f64; 3]; 5],
}

impl TryFrom<FivePointRepr> for FivePointData {
    type Error = Error;

    fn try_from(r: FivePointRepr) -> Result<Self> {
        FivePointData::new(r.pts_a, r.pts_b)
    }
}

fn unit(p: [f64; 3]) -> Result<[f64; 3]> {
    let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidArgument("image point must be finite and nonzero".into()));
    }
    if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(p);
    }
    Ok(p.map(|v| v / n))
}

impl FivePointData {
    pub fn new(pts_a: [[f64; 3]; 5], pts_b: [[f64; 3]; 5]) -> Result<Self> {
        let mut a = [[0.0; 3]; 5];
        let mut b = [[0.0; 3]; 5];
        for i in 0..5 {
            a[i] = unit(pts_a[i])?;
            b[i] = unit(pts_b[i])?;
        }
        Ok(FivePointData { pts_a: a, pts_b: b })
    }

    pub fn pts_a(&self) -> &[[f64; 3]; 5] {
        &self.pts_a
    }

    pub fn pts_b(&self) -> &[[f64; 3]; 5] {
        &self.pts_b
    }

    /// Orthonormal basis `E1..E4` (row-major) of the matrices satisfying
    /// `p_b^T E p_a = 0` for all five correspondences.
    pub fn nullspace(&self) -> Result<[[f64; 9]; 4]> {
        let mut q = DMatrix::<f64>::zeros(9, 9);
        for (i, (a, b)) in self.pts_a.iter().zip(&self.pts_b).enumerate() {
            for r in 0..3 {
                for c in 0..3 {
                    q[(i, 3 * r + c)] = b[r] * a[c];
                }
            }
        }
        let svd = q.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let s = &svd.singular_values;
        let mut order: Vec<usize> = (0..9).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        // Negated so that NaN singular values also count as degenerate.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(s[order[4]] > RANK_TOL * s[order[0]]) {
            return Err(Error::DegenerateCorrespondences);
        }
        let mut out = [[0.0; 9]; 4];
        for (k, e) in out.iter_mut().enumerate() {
            for (j, v) in e.iter_mut().enumerate() {
                *v = v_t[(order[5 + k], j)];
            }
        }
        Ok(out)
    }
}

fn names() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

/// The ten essential-matrix constraints on `x E1 + y E2 + z E3 + E4`.
pub fn constraints(basis: &[[f64; 9]; 4]) -> Vec<MultivariatePolynomial> {
    let e: Vec<MultivariatePolynomial> = (0..9)
        .map(|idx| {
            MultivariatePolynomial::new(
                names(),
                (0..4).map(|k| {
                    let exp = if k < 3 {
                        ExponentVector::unit(3, k)
                    } else {
                        ExponentVector::zeros(3)
                    };
                    (basis[k][idx], exp)
                }),
            )
            .expect("three variables")
        })
        .collect();
    let at = |r: usize, c: usize| &e[3 * r + c];

    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(at(r1, c1) * at(r2, c2)) - &(at(r1, c2) * at(r2, c1))
    };
    let det = &(&(at(0, 0) * &minor(1, 2, 1, 2)) - &(at(0, 1) * &minor(1, 2, 0, 2)))
        + &(at(0, 2) * &minor(1, 2, 0, 1));

    let zero = MultivariatePolynomial::zero(names());
    let mut eet = vec![zero.clone(); 9];
    for i in 0..3 {
        for j in i..3 {
            let v = (0..3).fold(zero.clone(), |acc, k| &acc + &(at(i, k) * at(j, k)));
            eet[3 * j + i] = v.clone();
            eet[3 * i + j] = v;
        }
    }
    let trace = &(&eet[0] + &eet[4]) + &eet[8];

    let mut out = Vec::with_capacity(10);
    out.push(det);
    for i in 0..3 {
        for j in 0..3 {
            let eete = (0..3).fold(zero.clone(), |acc, k| &acc + &(&eet[3 * i + k] * at(k, j)));
            out.push(&eete.scale(2.0) - &(&trace * at(i, j)));
        }
    }
    out
}

/// `M(z)` from a nullspace basis, rows in the order of [`constraints`].
pub fn build_from_basis(basis: &[[f64; 9]; 4]) -> Result<MatrixPolynomial> {
    let equations = constraints(basis);
    let columns = self::basis();
    let mut entries = vec![vec![Vec::new(); SIZE]; SIZE];
    for (row, f) in equations.iter().enumerate() {
        let hidden = f.hide_variable(HIDDEN)?;
        for (col, mono) in columns.iter().enumerate() {
            entries[row][col] = hidden.coefficient(mono).to_vec();
        }
    }
    MatrixPolynomial::from_entries(&entries)
}

pub fn five_point_build(data: &FivePointData) -> Result<MatrixPolynomial> {
    build_from_basis(&data.nullspace()?)
}

pub fn original_equations(data: &FivePointData) -> Result<PolynomialSystem> {
    PolynomialSystem::new(constraints(&data.nullspace()?))
}

/// `(x, y, z)` of `e` in the parameterization over `basis`, assuming `e`
/// lies in its span.
pub fn coordinates(basis: &[[f64; 9]; 4], e: &[f64; 9]) -> Option<[f64; 3]> {
    let dot = |b: &[f64; 9]| b.iter().zip(e).map(|(u, v)| u * v).sum::<f64>();
    let a = [dot(&basis[0]), dot(&basis[1]), dot(&basis[2]), dot(&basis[3])];
    if a[3] == 0.0 {
        return None;
    }
    Some([a[0] / a[3], a[1] / a[3], a[2] / a[3]])
}

/// Relative pose and scene used to synthesize correspondences.
#[derive(Clone, Debug)]
pub struct Scene {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
    pub points: Vec<Vector3<f64>>,
}

impl Scene {
    pub fn random(rng: &mut dyn RngCore) -> Scene {
        let axis = Unit::new_normalize(Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ));
        let angle = rng.random_range(-0.5..0.5);
        let rotation = *Rotation3::from_axis_angle(&axis, angle).matrix();
        let translation = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let points = (0..5)
            .map(|_| {
                let depth = rng.random_range(2.0..6.0);
                Vector3::new(
                    rng.random_range(-0.5..0.5) * depth,
                    rng.random_range(-0.5..0.5) * depth,
                    depth,
                )
            })
            .collect();
        Scene {
            rotation,
            translation,
            points,
        }
    }

    /// `[t]_x R`, row-major and unit Frobenius norm.
    pub fn essential(&self) -> [f64; 9] {
        let t = self.translation;
        let skew = Matrix3::new(0.0, -t.z, t.y, t.z, 0.0, -t.x, -t.y, t.x, 0.0);
        let e = skew * self.rotation;
        let norm = e.norm();
        let mut out = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                out[3 * r + c] = e[(r, c)] / norm;
            }
        }
        out
    }

    /// Projections into both cameras, or `None` if a point is behind one.
    pub fn project(&self) -> Option<FivePointData> {
        let mut a = [[0.0; 3]; 5];
        let mut b = [[0.0; 3]; 5];
        for (i, x) in self.points.iter().enumerate() {
            let xb = self.rotation * x + self.translation;
            if x.z <= 0.0 || xb.z <= 0.0 {
                return None;
            }
            a[i] = [x.x, x.y, x.z];
            b[i] = [xb.x, xb.y, xb.z];
        }
        FivePointData::new(a, b).ok()
    }
}

/// Random five-point instance with its true `(x, y, z)`.
pub fn generate(rng: &mut dyn RngCore) -> (FivePointData, Vec<Vec<f64>>) {
    loop {
        let scene = Scene::random(rng);
        let Some(data) = scene.project() else {
            continue;
        };
        let Ok(basis) = data.nullspace() else {
            continue;
        };
        if let Some(xyz) = coordinates(&basis, &scene.essential()) {
            return (data, vec![xyz.to_vec()]);
        }
    }
}

/// `M(z)` with the 36 entries of `E1..E4` set to random primes.
pub fn random_integer(rng: &mut dyn RngCore) -> Result<MatrixPolynomial> {
    let mut basis = [[0.0; 9]; 4];
    for e in basis.iter_mut() {
        for v in e.iter_mut() {
            *v = random_prime(rng) as f64;
        }
    }
    build_from_basis(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ground_truth_satisfies_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (data, truth) = generate(&mut rng);
        let sys = original_equations(&data).unwrap();
        assert_eq!((sys.len(), sys.n_vars()), (10, 3));
        for v in sys.eval(&truth[0]).unwrap() {
            assert!(v.abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn matrix_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (data, _) = generate(&mut rng);
        let mp = five_point_build(&data).unwrap();
        assert_eq!(mp.size(), 10);
        assert_eq!(mp.entry_degree(), 3);
    }

    #[test]
    fn repeated_correspondence_is_degenerate() {
        let p = [0.1, 0.2, 1.0];
        let q = [0.3, -0.1, 1.0];
        let data = FivePointData::new([p; 5], [q; 5]).unwrap();
        assert!(matches!(data.nullspace(), Err(Error::DegenerateCorrespondences)));
    }

    #[test]
    fn integer_specialization_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mp = random_integer(&mut rng).unwrap();
        assert!(mp.is_integer());
        assert!(mp.stack().iter().flatten().all(|v| v.abs() < 2f64.powi(52)));
    }
}
