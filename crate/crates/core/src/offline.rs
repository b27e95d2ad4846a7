//! Once-per-problem template construction.
//!
//! Determines the degree `k` of `det M(x)`, picks a row/column deletion pair
//! whose minor is coprime to the full determinant, and selects the monomial
//! index pairs used to read each non-hidden variable off Cramer ratios.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_poly::MatrixPolynomial;
use crate::modular::{ModPoly, ModularPolyMatrix, PRIMES};
use crate::poly::ExponentVector;
use crate::spectral::{determinant_polynomial, trim, DEFAULT_TRIM_TOL};

/// Number of random instances used by [`emit_template`] to detect `k`.
pub const DEGREE_TRIALS: usize = 20;

const SPECIALIZATION_ATTEMPTS: usize = 16;

/// Source of random instances of a problem's matrix `M(x)`.
pub trait MatrixBuilder {
    /// Matrix size `N`.
    fn size(&self) -> usize;

    /// `M(x)` for random problem data.
    fn random_numeric(&self, rng: &mut dyn RngCore) -> Result<MatrixPolynomial>;

    /// `M(x)` with every data-dependent coefficient specialized to a random
    /// prime. All coefficients of the result must be exact integers.
    fn random_integer(&self, rng: &mut dyn RngCore) -> Result<MatrixPolynomial>;
}

/// Everything the offline stage needs to know about a problem.
pub trait ProblemDescription: MatrixBuilder {
    fn id(&self) -> &str;
    fn n_vars(&self) -> usize;
    fn hidden_index(&self) -> usize;
    /// Monomials (over the non-hidden variables) indexing the columns of `M`.
    fn basis(&self) -> Vec<ExponentVector>;
    /// Number of solutions `r`, counted with multiplicity.
    fn expected_solutions(&self) -> usize;
}

/// A builder that always returns the same integer matrix polynomial.
#[derive(Clone, Debug)]
pub struct FixedBuilder(pub MatrixPolynomial);

impl MatrixBuilder for FixedBuilder {
    fn size(&self) -> usize {
        self.0.size()
    }

    fn random_numeric(&self, _rng: &mut dyn RngCore) -> Result<MatrixPolynomial> {
        Ok(self.0.clone())
    }

    fn random_integer(&self, _rng: &mut dyn RngCore) -> Result<MatrixPolynomial> {
        Ok(self.0.clone())
    }
}

/// Offline output consumed by the online solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverTemplate {
    #[serde(rename = "problem")]
    pub problem_id: String,
    pub n_vars: usize,
    #[serde(rename = "hidden")]
    pub hidden_index: usize,
    #[serde(rename = "N")]
    pub size: usize,
    pub k: usize,
    pub r: usize,
    pub basis: Vec<ExponentVector>,
    #[serde(rename = "deletion")]
    pub deletion_pair: (usize, usize),
    /// Original variable index -> indices `(j1, j2)` into `basis` with
    /// `basis[j1] / basis[j2] = x_w`.
    #[serde(rename = "recovery")]
    pub recovery_pairs: BTreeMap<usize, (usize, usize)>,
}

impl SolverTemplate {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::DegenerateTemplate(msg));
        if !(self.k >= self.r && self.r >= 1) {
            return bad(format!("need k >= r >= 1, got k={} r={}", self.k, self.r));
        }
        if self.hidden_index >= self.n_vars {
            return bad(format!("hidden index {} out of range", self.hidden_index));
        }
        if self.basis.len() != self.size {
            return bad(format!("basis has {} monomials for N={}", self.basis.len(), self.size));
        }
        let (i, j) = self.deletion_pair;
        if i >= self.size || j >= self.size {
            return bad(format!("deletion pair ({i}, {j}) out of range"));
        }
        for w in (0..self.n_vars).filter(|&w| w != self.hidden_index) {
            let Some(&(j1, j2)) = self.recovery_pairs.get(&w) else {
                return bad(format!("no recovery pair for variable {w}"));
            };
            let pos = reduced_index(w, self.hidden_index);
            let ok = j1 < self.size
                && j2 < self.size
                && j1 != j2
                && self.basis[j1].checked_sub(&self.basis[j2])
                    == Some(ExponentVector::unit(self.n_vars - 1, pos));
            if !ok {
                return bad(format!("invalid recovery pair ({j1}, {j2}) for variable {w}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: SolverTemplate = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Position of original variable `w` among the non-hidden variables.
pub fn reduced_index(w: usize, hidden: usize) -> usize {
    if w < hidden {
        w
    } else {
        w - 1
    }
}

/// Degree of `det M(x)`: the trimmed degree over `trials` random instances,
/// sampled at `N d + 1` points. The maximum must also be the majority value.
pub fn detect_degree(builder: &dyn MatrixBuilder, trials: usize, rng_seed: u64) -> Result<usize> {
    if trials < 3 {
        return Err(Error::InvalidArgument(format!(
            "degree detection needs at least 3 trials, got {trials}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut degrees = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mp = builder.random_numeric(&mut rng)?;
        let bound = mp.size() * mp.entry_degree();
        let det = determinant_polynomial(&mp, bound)?;
        degrees.push(trim(&det, DEFAULT_TRIM_TOL).degree());
    }
    let max = *degrees.iter().max().expect("trials >= 3");
    let at_max = degrees.iter().filter(|&&d| d == max).count();
    if 2 * at_max <= trials {
        return Err(Error::DegenerateTemplate(format!(
            "determinant degrees disagree across trials: {degrees:?}"
        )));
    }
    Ok(max)
}

/// One exact specialization of `M(x)` over `Z_p` with its determinant.
struct Specialization {
    matrix: ModularPolyMatrix,
    det: ModPoly,
}

fn specialize(
    builder: &dyn MatrixBuilder,
    k: usize,
    p: u64,
    rng: &mut dyn RngCore,
) -> Result<Specialization> {
    for _ in 0..SPECIALIZATION_ATTEMPTS {
        let matrix = ModularPolyMatrix::from_integer(&builder.random_integer(rng)?, p)?;
        let det = matrix.det_poly();
        if det.degree() == Some(k) {
            return Ok(Specialization { matrix, det });
        }
    }
    Err(Error::DegenerateTemplate(format!(
        "no specialization modulo {p} reached determinant degree {k}"
    )))
}

/// Whether the minor obtained by deleting `(row, col)` has a determinant
/// coprime to `det`.
pub fn is_coprime_deletion(m: &ModularPolyMatrix, det: &ModPoly, row: usize, col: usize) -> bool {
    let minor = m.minor_det_poly(row, col);
    det.gcd(&minor).degree() == Some(0)
}

/// Columns by ascending total degree of their monomial, ties by index.
/// Deleting a column whose monomial cannot vanish keeps `M'` well
/// conditioned at solutions where some coordinates are near zero.
pub fn column_order(basis: &[ExponentVector]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&j| (basis[j].total_degree(), j));
    order
}

/// First deletion pair, scanning rows in order and within each row the
/// columns in `columns` order, whose minor determinant is coprime to
/// `det M(x)` under two independent prime specializations.
pub fn find_deletion_pair(
    builder: &dyn MatrixBuilder,
    k: usize,
    columns: &[usize],
    rng_seed: u64,
) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let specs = PRIMES
        .iter()
        .map(|&p| specialize(builder, k, p, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let n = builder.size();
    if columns.len() != n || columns.iter().any(|&j| j >= n) {
        return Err(Error::InvalidArgument("column order must cover every column".into()));
    }
    for i in 0..n {
        for &j in columns {
            if specs
                .iter()
                .all(|s| is_coprime_deletion(&s.matrix, &s.det, i, j))
            {
                return Ok((i, j));
            }
        }
    }
    Err(Error::NoValidDeletionPair)
}

/// For each non-hidden variable `w`, the pair `(j1, j2)` of basis indices
/// with `basis[j1] - basis[j2] = e_w`, skipping column `avoid` if given.
/// Lowest total degree wins, then lexicographic order.
pub fn select_recovery_pairs(
    basis: &[ExponentVector],
    avoid: Option<usize>,
    hidden_index: usize,
) -> Result<BTreeMap<usize, (usize, usize)>> {
    let n_rest = basis.first().map_or(0, ExponentVector::len);
    let mut out = BTreeMap::new();
    for pos in 0..n_rest {
        let w = if pos < hidden_index { pos } else { pos + 1 };
        let unit = ExponentVector::unit(n_rest, pos);
        let usable = move |j: usize| Some(j) != avoid;
        let best = (0..basis.len())
            .filter(|&j1| usable(j1))
            .flat_map(|j1| {
                (0..basis.len())
                    .filter(move |&j2| j2 != j1 && usable(j2))
                    .map(move |j2| (j1, j2))
            })
            .filter(|&(j1, j2)| basis[j1].checked_sub(&basis[j2]).as_ref() == Some(&unit))
            .min_by_key(|&(j1, j2)| (basis[j1].total_degree(), j1, j2))
            .ok_or(Error::BasisInsufficient(w))?;
        out.insert(w, best);
    }
    Ok(out)
}

/// Runs the full offline stage for a problem.
pub fn emit_template(problem: &dyn ProblemDescription, rng_seed: u64) -> Result<SolverTemplate> {
    let builder: &dyn MatrixBuilder = problem;
    let k = detect_degree(builder, DEGREE_TRIALS, rng_seed)?;
    let basis = problem.basis();
    let deletion_pair = find_deletion_pair(builder, k, &column_order(&basis), rng_seed.wrapping_add(1))?;
    let recovery_pairs = select_recovery_pairs(&basis, None, problem.hidden_index())?;
    let template = SolverTemplate {
        problem_id: problem.id().to_string(),
        n_vars: problem.n_vars(),
        hidden_index: problem.hidden_index(),
        size: problem.size(),
        k,
        r: problem.expected_solutions(),
        basis,
        deletion_pair,
        recovery_pairs,
    };
    template.validate()?;
    Ok(template)
}
