//! Sylvester resultant matrix of two bivariate polynomials.

use crate::error::{Error, Result};
use crate::matrix_poly::MatrixPolynomial;
use crate::poly::{ExponentVector, HiddenPolynomial, MultivariatePolynomial};

/// Sylvester matrix of `f` and `g` with respect to the non-hidden variable,
/// with entries polynomial in the hidden one.
#[derive(Clone, Debug)]
pub struct SylvesterMatrix {
    pub matrix: MatrixPolynomial,
    /// Column monomials `x^{m+n-1}, ..., x, 1` over the eliminated variable.
    pub basis: Vec<ExponentVector>,
    /// Row `r` is `x^{shifts[r].1} * (f if shifts[r].0 == 0 else g)`.
    pub shifts: Vec<(usize, u32)>,
}

fn leading(h: &HiddenPolynomial, degree: u32) -> &[f64] {
    h.coefficient(&ExponentVector(vec![degree]))
}

/// Builds the Sylvester matrix of two polynomials in two variables, hiding
/// variable `hidden` and eliminating the other.
pub fn sylvester(
    f: &MultivariatePolynomial,
    g: &MultivariatePolynomial,
    hidden: usize,
) -> Result<SylvesterMatrix> {
    if f.n_vars() != 2 || g.n_vars() != 2 {
        return Err(Error::InvalidArgument(
            "Sylvester elimination needs two bivariate polynomials".into(),
        ));
    }
    if hidden > 1 {
        return Err(Error::IndexOutOfRange {
            index: hidden,
            n_vars: 2,
        });
    }
    let x = 1 - hidden;
    let (m, n) = (f.degree_in(x), g.degree_in(x));
    if m + n == 0 {
        return Err(Error::InvalidArgument(
            "both polynomials are free of the eliminated variable".into(),
        ));
    }
    let hf = f.hide_variable(hidden)?;
    let hg = g.hide_variable(hidden)?;
    if leading(&hf, m).iter().all(|&c| c == 0.0) || leading(&hg, n).iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidArgument("zero leading coefficient".into()));
    }

    let size = (m + n) as usize;
    let mut entries = vec![vec![Vec::new(); size]; size];
    let mut shifts = Vec::with_capacity(size);
    for s in (0..n).rev() {
        shifts.push((0, s));
    }
    for s in (0..m).rev() {
        shifts.push((1, s));
    }
    let top = m + n - 1;
    for (row, &(which, shift)) in shifts.iter().enumerate() {
        let h = if which == 0 { &hf } else { &hg };
        for (e, coeffs) in &h.terms {
            let col = (top - (e.0[0] + shift)) as usize;
            entries[row][col] = coeffs.clone();
        }
    }
    Ok(SylvesterMatrix {
        matrix: MatrixPolynomial::from_entries(&entries)?,
        basis: (0..=top).rev().map(|e| ExponentVector(vec![e])).collect(),
        shifts,
    })
}
