//! Arbitrary-length discrete Fourier transform.
//!
//! Mixed-radix decimation in time: the length is split by its smallest prime
//! factor and each prime-length stage is done as a direct DFT.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X_j = sum_l x_l exp(-2 pi i j l / n)`
    Forward,
    /// `x_l = sum_j X_j exp(+2 pi i j l / n)` (unscaled)
    Inverse,
}

/// `exp(sign * 2 pi i t / n)`, exact at multiples of a quarter turn.
pub fn unit_root(t: usize, n: usize, direction: Direction) -> Complex64 {
    let t = t % n;
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    if (4 * t).is_multiple_of(n) {
        return match 4 * t / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -sign),
        };
    }
    let angle = 2.0 * PI * t as f64 / n as f64;
    Complex64::new(angle.cos(), sign * angle.sin())
}

/// A reusable transform of fixed length and direction.
#[derive(Clone, Debug)]
pub struct Dft {
    n: usize,
    twiddles: Vec<Complex64>,
}

impl Dft {
    pub fn new(n: usize, direction: Direction) -> Self {
        assert!(n > 0, "transform length must be positive");
        Dft {
            n,
            twiddles: (0..n).map(|t| unit_root(t, n, direction)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Transforms `input` (length `n`) into `output`.
    pub fn process(&self, input: &[Complex64], output: &mut [Complex64]) {
        assert_eq!(input.len(), self.n);
        assert_eq!(output.len(), self.n);
        self.recurse(input, 0, 1, self.n, output);
    }

    fn recurse(
        &self,
        input: &[Complex64],
        offset: usize,
        stride: usize,
        n: usize,
        out: &mut [Complex64],
    ) {
        let step = self.n / n;
        let p = smallest_factor(n);
        if p == n {
            for (j, o) in out.iter_mut().enumerate() {
                *o = (0..n)
                    .map(|l| input[offset + l * stride] * self.twiddles[(j * l * step) % self.n])
                    .sum();
            }
            return;
        }
        let m = n / p;
        let mut sub = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..p {
            self.recurse(
                input,
                offset + r * stride,
                stride * p,
                m,
                &mut sub[r * m..(r + 1) * m],
            );
        }
        for q in 0..p {
            for j in 0..m {
                let idx = j + q * m;
                out[idx] = (0..p)
                    .map(|r| sub[r * m + j] * self.twiddles[(r * idx * step) % self.n])
                    .sum();
            }
        }
    }
}

fn smallest_factor(n: usize) -> usize {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 2;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
        let n = input.len();
        let sign = if direction == Direction::Forward { -1.0 } else { 1.0 };
        (0..n)
            .map(|j| {
                input
                    .iter()
                    .enumerate()
                    .map(|(l, &x)| {
                        let a = sign * 2.0 * PI * (j * l) as f64 / n as f64;
                        x * Complex64::new(a.cos(), a.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_for_many_lengths() {
        for n in 1..=72 {
            let input: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
                .collect();
            for dir in [Direction::Forward, Direction::Inverse] {
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                Dft::new(n, dir).process(&input, &mut out);
                let want = naive(&input, dir);
                for (a, b) in out.iter().zip(&want) {
                    assert!((a - b).norm() < 1e-12, "n={n} {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn quarter_turns_exact() {
        assert_eq!(unit_root(1, 4, Direction::Forward), Complex64::new(0.0, -1.0));
        assert_eq!(unit_root(3, 4, Direction::Forward), Complex64::new(0.0, 1.0));
        assert_eq!(unit_root(2, 8, Direction::Inverse), Complex64::new(0.0, 1.0));
    }
}
