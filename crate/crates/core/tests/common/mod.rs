//! Independent reference computations used as test oracles.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use resultant_core::matrix_poly::MatrixPolynomial;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(a: &[Complex64], n: usize) -> Complex64 {
    if n == 1 {
        return a[0];
    }
    let mut total = c(0.0, 0.0);
    for col in 0..n {
        let mut sub = Vec::with_capacity((n - 1) * (n - 1));
        for r in 1..n {
            for cc in (0..n).filter(|&cc| cc != col) {
                sub.push(a[r * n + cc]);
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += a[col] * cofactor_det(&sub, n - 1) * sign;
    }
    total
}

/// `sum_l A_l z^l` entrywise, by explicit powers.
pub fn power_sum(mp: &MatrixPolynomial, z: Complex64) -> Vec<Complex64> {
    let n = mp.size();
    let mut out = vec![c(0.0, 0.0); n * n];
    for (l, a) in mp.stack().iter().enumerate() {
        let zl = z.powu(l as u32);
        for (o, v) in out.iter_mut().zip(a) {
            *o += zl * v;
        }
    }
    out
}

/// `X_k = sum_j x_j exp(sign 2 pi i j k / n)` by direct summation.
pub fn direct_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, v)| {
                    let t = sign * 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, t)
                })
                .sum()
        })
        .collect()
}

/// Horner evaluation of a complex-coefficient polynomial, lowest degree first.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &v| acc * z + v)
}

/// Solution of `a x = b` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn gauss_solve(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|r| {
            let mut row = a[r * n..(r + 1) * n].to_vec();
            row.push(b[r]);
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .unwrap();
        m.swap(k, p);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..=n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for k in (0..n).rev() {
        let s: Complex64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        x[k] = (m[k][n] - s) / m[k][k];
    }
    x
}

pub type QPoly = Vec<BigRational>;

fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|v| v.is_zero()) {
        p.pop();
    }
    p
}

pub fn q_from_ints(v: &[i64]) -> QPoly {
    q_trim(v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
}

pub fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

pub fn q_add(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    q_trim(out)
}

pub fn q_neg(a: &QPoly) -> QPoly {
    a.iter().map(|v| -v).collect()
}

/// Determinant of a matrix over `Q[x]` by cofactor expansion along the first row.
pub fn q_cofactor_det(entries: &[QPoly], n: usize) -> QPoly {
    if n == 1 {
        return entries[0].clone();
    }
    let mut total = Vec::new();
    for col in 0..n {
        let sub: Vec<QPoly> = (1..n)
            .flat_map(|r| (0..n).filter(move |&cc| cc != col).map(move |cc| r * n + cc))
            .map(|i| entries[i].clone())
            .collect();
        let term = q_mul(&entries[col], &q_cofactor_det(&sub, n - 1));
        total = q_add(&total, &if col % 2 == 0 { term } else { q_neg(&term) });
    }
    total
}

/// Entries of an integer matrix polynomial as polynomials over `Q`.
pub fn q_entries(mp: &MatrixPolynomial) -> Vec<QPoly> {
    let n = mp.size();
    (0..n * n)
        .map(|i| {
            let ints: Vec<i64> = mp.stack().iter().map(|a| a[i] as i64).collect();
            q_from_ints(&ints)
        })
        .collect()
}

fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / &lead;
        let shift = r.len() - b.len();
        for (i, v) in b.iter().enumerate() {
            r[shift + i] -= &f * v;
        }
        r = q_trim(r);
    }
    r
}

/// Monic GCD over the rationals by the Euclidean algorithm.
pub fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (q_trim(a.clone()), q_trim(b.clone()));
    while !b.is_empty() {
        let r = q_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for v in a.iter_mut() {
            *v /= &lead;
        }
    }
    a
}

pub fn q_degree(p: &QPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn q_one() -> QPoly {
    vec![BigRational::one()]
}

/// Random integer matrix polynomial with entries in `[-bound, bound]`.
pub fn random_int_mp(rng: &mut dyn RngCore, n: usize, d: usize, bound: i64) -> MatrixPolynomial {
    let stack = (0..=d)
        .map(|_| (0..n * n).map(|_| rng.random_range(-bound..=bound) as f64).collect())
        .collect();
    MatrixPolynomial::new(n, stack).unwrap()
}

/// `deg` roots, pairwise at least `sep` apart, in the annulus
/// `0.5 <= |z| <= 1.5`, closed under conjugation when `real_coeffs`.
pub fn separated_roots(rng: &mut dyn RngCore, deg: usize, sep: f64, real_coeffs: bool) -> Vec<Complex64> {
    let mut roots: Vec<Complex64> = Vec::with_capacity(deg);
    let far = |roots: &[Complex64], z: Complex64| roots.iter().all(|r| (r - z).norm() > sep);
    while roots.len() < deg {
        let radius = rng.random_range(0.5..1.5);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let mut z = Complex64::from_polar(radius, angle);
        if real_coeffs {
            if deg - roots.len() == 1 || rng.random_bool(0.3) {
                z = c(z.re, 0.0);
                if far(&roots, z) {
                    roots.push(z);
                }
                continue;
            }
            if z.im.abs() < sep / 2.0 {
                continue;
            }
            if far(&roots, z) && far(&roots, z.conj()) {
                roots.push(z);
                roots.push(z.conj());
            }
        } else if far(&roots, z) {
            roots.push(z);
        }
    }
    roots
}

/// Smallest-distance matching error: for each expected root, the distance
/// to its nearest unused computed root.
pub fn matched_error(expected: &[Complex64], computed: &[Complex64]) -> f64 {
    let mut used = vec![false; computed.len()];
    let mut worst = 0.0_f64;
    for e in expected {
        let (idx, dist) = computed
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, z)| (i, (z - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("as many computed roots as expected");
        used[idx] = true;
        worst = worst.max(dist);
    }
    worst
}

pub fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()))
}

/// Symmetric conic matrices `a C1 + b C2` of the pencil through four points,
/// for the given mixing weights.
pub fn conics_through(points: &[[f64; 2]; 4], mix: [[f64; 2]; 2]) -> ([f64; 9], [f64; 9]) {
    let mut a = nalgebra::DMatrix::<f64>::zeros(6, 6);
    for (i, [x, y]) in points.iter().enumerate() {
        for (j, v) in [x * x, x * y, y * y, *x, *y, 1.0].iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let null = |k: usize| -> Vec<f64> { (0..6).map(|j| v_t[(order[k], j)]).collect() };
    let (n1, n2) = (null(0), null(1));
    let conic = |[s, t]: [f64; 2]| {
        let v: Vec<f64> = (0..6).map(|j| s * n1[j] + t * n2[j]).collect();
        let [a, b, c, d, e, f] = [v[0], v[1], v[2], v[3], v[4], v[5]];
        [a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f]
    };
    (conic(mix[0]), conic(mix[1]))
}
