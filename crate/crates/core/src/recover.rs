//! Online stage: determinant polynomial by unit-circle sampling, its roots,
//! and back-substitution of the remaining variables by determinant ratios.
//!
//! Only determinants are evaluated here; no linear system is solved by
//! factorization or inversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{rank_witness, RankWitness};
use crate::error::{Error, Result};
use crate::matrix_poly::{det_complex, ComplexMatrix, MatrixPolynomial};
use crate::offline::SolverTemplate;
use crate::poly::PolynomialSystem;
use crate::problems::{Problem, ProblemData};
use crate::rootfind::{real_candidates, roots, DEFAULT_IM_TOL};
use crate::spectral::{batched_eval, recover_coefficients, trim, SampleVector, DEFAULT_TRIM_TOL};

/// Normalized residual above which a candidate is rejected.
pub const ACCEPT_TOL: f64 = 1e-3;

/// Smallest `|det|` of the reduced matrix still treated as nonsingular.
pub const SINGULAR_TOL: f64 = 1e-300;

const RESIDUAL_TIE_TOL: f64 = 1e-15;
const DUPLICATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub trim_tol: f64,
    pub im_tol: f64,
    pub accept_tol: f64,
    /// Attach singular-value ratios of `M` and `M'` to accepted solutions.
    pub rank_witness: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            trim_tol: DEFAULT_TRIM_TOL,
            im_tol: DEFAULT_IM_TOL,
            accept_tol: ACCEPT_TOL,
            rank_witness: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSolution {
    pub x: Vec<f64>,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<RankWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    /// At most `r` solutions, sorted by residual.
    pub accepted: Vec<CandidateSolution>,
    /// Real candidate roots that did not produce an accepted solution.
    pub rejected_count: usize,
    pub failed: bool,
    /// Number of complex roots of the trimmed determinant polynomial.
    pub candidate_roots: usize,
}

/// Serialized form of a [`SolutionSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionOutput {
    pub solutions: Vec<CandidateSolution>,
    pub failed: bool,
    pub roots_found: usize,
    pub candidate_roots: usize,
}

impl SolutionSet {
    fn empty() -> Self {
        SolutionSet {
            accepted: Vec::new(),
            rejected_count: 0,
            failed: true,
            candidate_roots: 0,
        }
    }

    pub fn output(&self) -> SolutionOutput {
        SolutionOutput {
            solutions: self.accepted.clone(),
            failed: self.failed,
            roots_found: self.accepted.len(),
            candidate_roots: self.candidate_roots,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.output())? + "\n")
    }
}

/// `det(mp with column col replaced by rhs) / det(mp)`.
pub fn cramer_ratio(mp: &ComplexMatrix, rhs: &[Complex64], col: usize) -> Result<Complex64> {
    let n = mp.size();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    if col >= n {
        return Err(Error::InvalidArgument(format!("column {col} out of range for size {n}")));
    }
    let den = det_complex(mp);
    if den.norm() < SINGULAR_TOL {
        return Err(Error::SingularSubmatrix);
    }
    Ok(det_complex(&mp.with_column(col, rhs)) / den)
}

/// Index of column `c` of `M` in `M'` after deleting column `deleted`.
fn shifted(c: usize, deleted: usize) -> usize {
    if c > deleted {
        c - 1
    } else {
        c
    }
}

/// `x_w` at the root where `m` was evaluated, as the ratio of the two
/// column-replaced determinants of the reduced system `M' b' = -m'_j`.
pub fn recover_variable(m: &ComplexMatrix, template: &SolverTemplate, w: usize) -> Result<Complex64> {
    let (i, j) = template.deletion_pair;
    let reduced = m.minor(i, j);
    let rhs: Vec<Complex64> = m.column_without(j, i).into_iter().map(|v| -v).collect();
    if det_complex(&reduced).norm() < SINGULAR_TOL {
        return Err(Error::SingularSubmatrix);
    }
    recover_from_reduced(&reduced, &rhs, template, w)
}

fn recover_from_reduced(
    reduced: &ComplexMatrix,
    rhs: &[Complex64],
    template: &SolverTemplate,
    w: usize,
) -> Result<Complex64> {
    let &(j1, j2) = template.recovery_pairs.get(&w).ok_or(Error::IndexOutOfRange {
        index: w,
        n_vars: template.n_vars,
    })?;
    let j = template.deletion_pair.1;
    // The deleted column's monomial is the normalization, so its ratio is 1.
    let replaced = |c: usize| {
        if c == j {
            det_complex(reduced)
        } else {
            det_complex(&reduced.with_column(shifted(c, j), rhs))
        }
    };
    Ok(replaced(j1) / replaced(j2))
}

fn is_real(z: Complex64, im_tol: f64) -> bool {
    z.im.abs() <= im_tol * (1.0 + z.re.abs())
}

/// Full solution vector for one real root of the hidden variable, or `None`
/// if back-substitution fails or yields a non-real coordinate.
fn back_substitute(
    mp: &MatrixPolynomial,
    template: &SolverTemplate,
    root: f64,
    im_tol: f64,
) -> Option<(Vec<f64>, ComplexMatrix)> {
    let m = mp.evaluate_at(Complex64::new(root, 0.0));
    let (i, j) = template.deletion_pair;
    let reduced = m.minor(i, j);
    if det_complex(&reduced).norm() < SINGULAR_TOL {
        return None;
    }
    let rhs: Vec<Complex64> = m.column_without(j, i).into_iter().map(|v| -v).collect();
    let mut x = vec![0.0; template.n_vars];
    for (w, xw) in x.iter_mut().enumerate() {
        if w == template.hidden_index {
            *xw = root;
            continue;
        }
        let z = recover_from_reduced(&reduced, &rhs, template, w).ok()?;
        if !(z.re.is_finite() && z.im.is_finite() && is_real(z, im_tol)) {
            return None;
        }
        *xw = z.re;
    }
    Some((x, m))
}

fn sort_candidates(c: &mut [CandidateSolution]) {
    let lex = |a: &CandidateSolution, b: &CandidateSolution| {
        a.x.iter()
            .zip(&b.x)
            .map(|(u, v)| u.total_cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    c.sort_by(|a, b| a.residual.total_cmp(&b.residual).then_with(|| lex(a, b)));
    // Runs of residuals within the tie tolerance are ordered lexicographically.
    let mut start = 0;
    while start < c.len() {
        let mut end = start + 1;
        while end < c.len() && c[end].residual - c[end - 1].residual <= RESIDUAL_TIE_TOL {
            end += 1;
        }
        c[start..end].sort_by(lex);
        start = end;
    }
}

fn is_duplicate(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()));
    diff < DUPLICATE_TOL * (1.0 + scale)
}

/// Online stage for an already assembled `M(x)` and the system it came from.
pub fn solve_matrix(
    template: &SolverTemplate,
    mp: &MatrixPolynomial,
    system: &PolynomialSystem,
    options: &SolveOptions,
) -> Result<SolutionSet> {
    if mp.size() != template.size {
        return Err(Error::DimensionMismatch {
            expected: template.size,
            got: mp.size(),
        });
    }
    if system.n_vars() != template.n_vars {
        return Err(Error::DimensionMismatch {
            expected: template.n_vars,
            got: system.n_vars(),
        });
    }
    let slices = batched_eval(mp, template.k)?;
    let samples = SampleVector::new(slices.iter().map(det_complex).collect());
    let p = trim(&recover_coefficients(&samples).into_real(1e-10)?, options.trim_tol);
    let root_list = match roots(&p) {
        Ok(r) => r,
        Err(Error::NoRoots) => return Ok(SolutionSet::empty()),
        Err(e) => return Err(e),
    };
    let real = real_candidates(&root_list, options.im_tol);

    let mut candidates = Vec::with_capacity(real.len());
    for &root in &real {
        let Some((x, m)) = back_substitute(mp, template, root, options.im_tol) else {
            continue;
        };
        if !x.iter().all(|v| v.is_finite()) {
            continue;
        }
        let residual = system.normalized_residual(&x)?;
        if !residual.is_finite() {
            continue;
        }
        let witness = options
            .rank_witness
            .then(|| rank_witness(&m, template.deletion_pair));
        candidates.push(CandidateSolution { x, residual, witness });
    }
    sort_candidates(&mut candidates);

    let mut accepted: Vec<CandidateSolution> = Vec::new();
    for c in candidates {
        if accepted.len() == template.r || c.residual > options.accept_tol {
            break;
        }
        if accepted.iter().any(|a| is_duplicate(&a.x, &c.x)) {
            continue;
        }
        accepted.push(c);
    }
    Ok(SolutionSet {
        failed: accepted.is_empty(),
        rejected_count: real.len() - accepted.len(),
        accepted,
        candidate_roots: root_list.len(),
    })
}

/// Online stage for a built-in problem instance.
pub fn solve_online(template: &SolverTemplate, data: &ProblemData) -> Result<SolutionSet> {
    solve_online_with(template, data, &SolveOptions::default())
}

pub fn solve_online_with(
    template: &SolverTemplate,
    data: &ProblemData,
    options: &SolveOptions,
) -> Result<SolutionSet> {
    let problem: Problem = template.problem_id.parse()?;
    let mp = problem.build(data).map_err(|e| match e {
        Error::DegenerateCorrespondences => {
            Error::DegenerateInstance("correspondences do not have rank 5".into())
        }
        other => other,
    })?;
    let system = problem.original_equations(data)?;
    solve_matrix(template, &mp, &system, options)
}
