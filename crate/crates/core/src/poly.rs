//! Sparse multivariate polynomials with real coefficients.
//!
//! Terms are kept in a canonical form: merged by exponent, zero coefficients
//! dropped, and sorted in descending graded-lexicographic order. The zero
//! polynomial is the empty term list.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of a monomial, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The exponent vector of `x_var`.
    pub fn unit(n: usize, var: usize) -> Self {
        let mut e = vec![0; n];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self - other`, or `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Evaluates the monomial at `point`. Lengths must agree.
    pub fn eval_monomial(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(point)
            .map(|(&e, &x)| x.powi(e as i32))
            .product()
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExponentVector {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;

    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "c")]
    pub coeff: f64,
    #[serde(rename = "e")]
    pub exponent: ExponentVector,
}

#[derive(Deserialize)]
struct PolynomialRepr {
    vars: Vec<String>,
    terms: Vec<Term>,
}

/// A polynomial over named real variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialRepr")]
pub struct MultivariatePolynomial {
    #[serde(rename = "vars")]
    var_names: Vec<String>,
    terms: Vec<Term>,
}

impl TryFrom<PolynomialRepr> for MultivariatePolynomial {
    type Error = Error;

    fn try_from(repr: PolynomialRepr) -> Result<Self> {
        MultivariatePolynomial::new(
            repr.vars,
            repr.terms.into_iter().map(|t| (t.coeff, t.exponent)),
        )
    }
}

impl MultivariatePolynomial {
    /// Builds a polynomial from `(coefficient, exponent)` pairs, merging
    /// duplicate exponents and dropping zeros.
    pub fn new<I>(var_names: Vec<String>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, ExponentVector)>,
    {
        let n = var_names.len();
        let mut merged: BTreeMap<ExponentVector, f64> = BTreeMap::new();
        for (c, e) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            *merged.entry(e).or_insert(0.0) += c;
        }
        Ok(Self::from_merged(var_names, merged))
    }

    fn from_merged(var_names: Vec<String>, merged: BTreeMap<ExponentVector, f64>) -> Self {
        let terms = merged
            .into_iter()
            .rev()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponent, coeff)| Term { coeff, exponent })
            .collect();
        MultivariatePolynomial { var_names, terms }
    }

    pub fn zero(var_names: Vec<String>) -> Self {
        MultivariatePolynomial {
            var_names,
            terms: Vec::new(),
        }
    }

    pub fn constant(var_names: Vec<String>, c: f64) -> Self {
        let n = var_names.len();
        Self::from_merged(var_names, BTreeMap::from([(ExponentVector::zeros(n), c)]))
    }

    /// The polynomial `x_var`.
    pub fn variable(var_names: Vec<String>, var: usize) -> Result<Self> {
        let n = var_names.len();
        if var >= n {
            return Err(Error::IndexOutOfRange {
                index: var,
                n_vars: n,
            });
        }
        Ok(Self::from_merged(
            var_names,
            BTreeMap::from([(ExponentVector::unit(n, var), 1.0)]),
        ))
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponent.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponent.0[var])
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coefficient(&self, exponent: &ExponentVector) -> f64 {
        self.terms
            .iter()
            .find(|t| &t.exponent == exponent)
            .map_or(0.0, |t| t.coeff)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.var_names.clone(),
            self.terms.iter().map(|t| (t.coeff * s, t.exponent.clone())),
        )
        .expect("same variable count")
    }

    /// Evaluates at `point`, which must have one entry per variable.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars(),
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.coeff * t.exponent.eval_monomial(point))
            .sum())
    }

    fn combine(&self, rhs: &Self, sign: f64) -> Self {
        assert_eq!(self.var_names, rhs.var_names, "variable orderings differ");
        let mut merged: BTreeMap<ExponentVector, f64> = BTreeMap::new();
        for t in &self.terms {
            *merged.entry(t.exponent.clone()).or_insert(0.0) += t.coeff;
        }
        for t in &rhs.terms {
            *merged.entry(t.exponent.clone()).or_insert(0.0) += sign * t.coeff;
        }
        Self::from_merged(self.var_names.clone(), merged)
    }

    /// Rewrites the polynomial as a polynomial in the remaining variables
    /// whose coefficients are univariate polynomials in `x_hidden`.
    pub fn hide_variable(&self, hidden: usize) -> Result<HiddenPolynomial> {
        let n = self.n_vars();
        if hidden >= n {
            return Err(Error::IndexOutOfRange {
                index: hidden,
                n_vars: n,
            });
        }
        let mut grouped: BTreeMap<ExponentVector, Vec<f64>> = BTreeMap::new();
        for t in &self.terms {
            let h = t.exponent.0[hidden] as usize;
            let mut rest = t.exponent.0.clone();
            rest.remove(hidden);
            let coeffs = grouped.entry(ExponentVector(rest)).or_default();
            if coeffs.len() <= h {
                coeffs.resize(h + 1, 0.0);
            }
            coeffs[h] += t.coeff;
        }
        let mut var_names = self.var_names.clone();
        let hidden_name = var_names.remove(hidden);
        Ok(HiddenPolynomial {
            hidden_name,
            var_names,
            terms: grouped.into_iter().rev().collect(),
        })
    }
}

impl Add for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn add(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn sub(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn neg(self) -> MultivariatePolynomial {
        self.scale(-1.0)
    }
}

impl Mul for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn mul(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        assert_eq!(self.var_names, rhs.var_names, "variable orderings differ");
        let mut merged: BTreeMap<ExponentVector, f64> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                *merged.entry(&a.exponent + &b.exponent).or_insert(0.0) += a.coeff * b.coeff;
            }
        }
        MultivariatePolynomial::from_merged(self.var_names.clone(), merged)
    }
}

impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            for (name, &e) in self.var_names.iter().zip(&t.exponent.0) {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// A polynomial in the non-hidden variables whose coefficients are dense
/// univariate polynomials (ascending degree) in the hidden variable.
#[derive(Clone, Debug, PartialEq)]
pub struct HiddenPolynomial {
    pub hidden_name: String,
    pub var_names: Vec<String>,
    pub terms: Vec<(ExponentVector, Vec<f64>)>,
}

impl HiddenPolynomial {
    /// Univariate coefficient of the monomial `exponent` (empty if absent).
    pub fn coefficient(&self, exponent: &ExponentVector) -> &[f64] {
        self.terms
            .iter()
            .find(|(e, _)| e == exponent)
            .map_or(&[], |(_, c)| c.as_slice())
    }

    /// Evaluates at hidden value `hidden` and remaining-variable point `rest`.
    pub fn eval(&self, hidden: f64, rest: &[f64]) -> Result<f64> {
        if rest.len() != self.var_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.var_names.len(),
                got: rest.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let coeff = c.iter().rev().fold(0.0, |acc, &a| acc * hidden + a);
                coeff * e.eval_monomial(rest)
            })
            .sum())
    }
}

/// `m` polynomials sharing one variable ordering, `m >= n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSystem {
    polynomials: Vec<MultivariatePolynomial>,
    n_vars: usize,
}

impl PolynomialSystem {
    pub fn new(polynomials: Vec<MultivariatePolynomial>) -> Result<Self> {
        let first = polynomials
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty polynomial system".into()))?;
        let names = first.var_names().to_vec();
        if polynomials.iter().any(|p| p.var_names() != names) {
            return Err(Error::InvalidArgument(
                "polynomials do not share one variable ordering".into(),
            ));
        }
        if polynomials.len() < names.len() {
            return Err(Error::InvalidArgument(format!(
                "{} equations for {} unknowns",
                polynomials.len(),
                names.len()
            )));
        }
        Ok(PolynomialSystem {
            n_vars: names.len(),
            polynomials,
        })
    }

    pub fn polynomials(&self) -> &[MultivariatePolynomial] {
        &self.polynomials
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.polynomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polynomials.is_empty()
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.polynomials.iter().map(|p| p.eval(point)).collect()
    }

    /// `max_i |f_i(x)| / ||x||_2`, or the unnormalized maximum when `x = 0`.
    pub fn normalized_residual(&self, point: &[f64]) -> Result<f64> {
        let max = self
            .eval(point)?
            .into_iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let norm = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(if norm > 0.0 { max / norm } else { max })
    }

    pub fn hide_variable(&self, hidden: usize) -> Result<HiddenSystem> {
        let polynomials = self
            .polynomials
            .iter()
            .map(|p| p.hide_variable(hidden))
            .collect::<Result<Vec<_>>>()?;
        Ok(HiddenSystem {
            hidden_index: hidden,
            polynomials,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HiddenSystem {
    pub hidden_index: usize,
    pub polynomials: Vec<HiddenPolynomial>,
}

impl HiddenSystem {
    pub fn eval(&self, hidden: f64, rest: &[f64]) -> Result<Vec<f64>> {
        self.polynomials.iter().map(|p| p.eval(hidden, rest)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn p(vars: &[&str], terms: &[(f64, &[u32])]) -> MultivariatePolynomial {
        MultivariatePolynomial::new(
            names(vars),
            terms.iter().map(|(c, e)| (*c, ExponentVector(e.to_vec()))),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = p(&["x1", "x2"], &[(1.0, &[2, 0]), (2.0, &[0, 1])]);
        assert_eq!(f.eval(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(f.eval(&[3.0, 1.0]).unwrap(), 11.0);
        let g = p(&["x1", "x2"], &[(1.0, &[1, 1]), (-1.0, &[0, 0])]);
        assert_eq!(g.eval(&[2.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let f = p(&["x1", "x2"], &[(1.0, &[2, 0])]);
        assert!(matches!(
            f.eval(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn merging_and_zero_removal() {
        let f = p(&["x"], &[(1.0, &[1]), (-1.0, &[1]), (2.0, &[0])]);
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.coefficient(&ExponentVector(vec![0])), 2.0);
        let z = p(&["x"], &[(1.0, &[3]), (-1.0, &[3])]);
        assert!(z.is_zero());
    }

    #[test]
    fn hide_first_variable() {
        // x1^2 x2 + x2 + 1
        let f = p(
            &["x1", "x2"],
            &[(1.0, &[2, 1]), (1.0, &[0, 1]), (1.0, &[0, 0])],
        );
        let g = f.hide_variable(0).unwrap();
        assert_eq!(g.hidden_name, "x1");
        assert_eq!(g.var_names, names(&["x2"]));
        assert_eq!(g.coefficient(&ExponentVector(vec![1])), &[1.0, 0.0, 1.0]);
        assert_eq!(g.coefficient(&ExponentVector(vec![0])), &[1.0]);
    }

    #[test]
    fn hide_middle_variable() {
        let f = p(
            &["x1", "x2", "x3"],
            &[(1.0, &[1, 0, 0]), (1.0, &[0, 1, 0]), (1.0, &[0, 0, 1])],
        );
        let g = f.hide_variable(1).unwrap();
        assert_eq!(g.coefficient(&ExponentVector(vec![1, 0])), &[1.0]);
        assert_eq!(g.coefficient(&ExponentVector(vec![0, 1])), &[1.0]);
        assert_eq!(g.coefficient(&ExponentVector(vec![0, 0])), &[0.0, 1.0]);
    }

    #[test]
    fn hide_out_of_range() {
        let f = p(&["x"], &[(1.0, &[1])]);
        assert!(matches!(
            f.hide_variable(1),
            Err(Error::IndexOutOfRange { index: 1, n_vars: 1 })
        ));
    }

    #[test]
    fn json_shape() {
        let f = p(&["x1", "x2"], &[(2.0, &[1, 0])]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"vars":["x1","x2"],"terms":[{"c":2.0,"e":[1,0]}]}"#);
        let back: MultivariatePolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"vars":["x1","x2"],"terms":[{"c":2.0,"e":[1]}]}"#;
        assert!(serde_json::from_str::<MultivariatePolynomial>(bad).is_err());
    }

    #[test]
    fn system_requires_enough_equations() {
        let f = p(&["x", "y"], &[(1.0, &[1, 0])]);
        assert!(PolynomialSystem::new(vec![f.clone()]).is_err());
        assert!(PolynomialSystem::new(vec![f.clone(), f]).is_ok());
    }
}
