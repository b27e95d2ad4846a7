//! Rank diagnostics for `M` at a root. Not used by the default solve path.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix_poly::ComplexMatrix;

/// `sigma_min / sigma_max` of `M` and of `M` with the deletion pair removed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankWitness {
    pub full: f64,
    pub submatrix: f64,
}

/// Ratio of smallest to largest singular value; `0` for a zero matrix.
pub fn singular_value_ratio(m: &ComplexMatrix) -> f64 {
    let n = m.size();
    if n == 0 {
        return 0.0;
    }
    let a = DMatrix::<Complex64>::from_row_slice(n, n, m.as_slice());
    let s = a.singular_values();
    let max = s.max();
    if max > 0.0 {
        s.min() / max
    } else {
        0.0
    }
}

pub fn rank_witness(m: &ComplexMatrix, deletion_pair: (usize, usize)) -> RankWitness {
    let (i, j) = deletion_pair;
    RankWitness {
        full: singular_value_ratio(m),
        submatrix: singular_value_ratio(&m.minor(i, j)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_ratio() {
        let m = ComplexMatrix::from_real(2, &[4.0, 0.0, 0.0, -1.0]).unwrap();
        assert!((singular_value_ratio(&m) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn singular_full_matrix() {
        let m = ComplexMatrix::from_real(2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let w = rank_witness(&m, (0, 0));
        assert!(w.full < 1e-15);
        assert_eq!(w.submatrix, 1.0);
    }
}
