//! Built-in minimal problems.
//!
//! Each problem supplies a data-to-`M(x)` builder, the original equations
//! used for residual checks, and a generator of synthetic instances with
//! known solutions.

pub mod conic;
pub mod five_point;
pub mod sylvester;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use conic::{conic_build, ConicPairData};
pub use five_point::{five_point_build, FivePointData};

use crate::error::{Error, Result};
use crate::matrix_poly::MatrixPolynomial;
use crate::offline::{MatrixBuilder, ProblemDescription};
use crate::poly::{ExponentVector, PolynomialSystem};

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// A prime below 1000, used to specialize symbolic coefficients.
pub(crate) fn random_prime(rng: &mut dyn RngCore) -> u32 {
    loop {
        let c: u32 = rng.random_range(2..1000);
        if SMALL_PRIMES.iter().all(|&p| p == c || !c.is_multiple_of(p)) {
            return c;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Conic,
    FivePoint,
}

impl Problem {
    pub const ALL: [Problem; 2] = [Problem::Conic, Problem::FivePoint];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Conic => conic::ID,
            Problem::FivePoint => five_point::ID,
        }
    }

    /// Builds `M(x)` for the given data.
    pub fn build(self, data: &ProblemData) -> Result<MatrixPolynomial> {
        match (self, data) {
            (Problem::Conic, ProblemData::Conic(d)) => conic_build(d),
            (Problem::FivePoint, ProblemData::FivePoint(d)) => five_point_build(d),
            _ => Err(self.mismatch(data)),
        }
    }

    /// The system whose common roots are the problem's solutions.
    pub fn original_equations(self, data: &ProblemData) -> Result<PolynomialSystem> {
        match (self, data) {
            (Problem::Conic, ProblemData::Conic(d)) => Ok(conic::original_equations(d)),
            (Problem::FivePoint, ProblemData::FivePoint(d)) => five_point::original_equations(d),
            _ => Err(self.mismatch(data)),
        }
    }

    fn mismatch(self, data: &ProblemData) -> Error {
        Error::ProblemMismatch {
            template: self.as_str().into(),
            data: data.problem().as_str().into(),
        }
    }

    pub fn generate_with(self, rng: &mut dyn RngCore) -> Instance {
        let (data, ground_truth) = match self {
            Problem::Conic => {
                let (d, t) = conic::generate(rng);
                (ProblemData::Conic(d), t)
            }
            Problem::FivePoint => {
                let (d, t) = five_point::generate(rng);
                (ProblemData::FivePoint(d), t)
            }
        };
        Instance { data, ground_truth }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            conic::ID => Ok(Problem::Conic),
            five_point::ID | "five-point" => Ok(Problem::FivePoint),
            other => Err(Error::UnknownProblem(other.into())),
        }
    }
}

impl MatrixBuilder for Problem {
    fn size(&self) -> usize {
        match self {
            Problem::Conic => conic::SIZE,
            Problem::FivePoint => five_point::SIZE,
        }
    }

    fn random_numeric(&self, rng: &mut dyn RngCore) -> Result<MatrixPolynomial> {
        self.build(&self.generate_with(rng).data)
    }

    fn random_integer(&self, rng: &mut dyn RngCore) -> Result<MatrixPolynomial> {
        match self {
            Problem::Conic => conic::random_integer(rng),
            Problem::FivePoint => five_point::random_integer(rng),
        }
    }
}

impl ProblemDescription for Problem {
    fn id(&self) -> &str {
        self.as_str()
    }

    fn n_vars(&self) -> usize {
        match self {
            Problem::Conic => conic::N_VARS,
            Problem::FivePoint => five_point::N_VARS,
        }
    }

    fn hidden_index(&self) -> usize {
        match self {
            Problem::Conic => conic::HIDDEN,
            Problem::FivePoint => five_point::HIDDEN,
        }
    }

    fn basis(&self) -> Vec<ExponentVector> {
        match self {
            Problem::Conic => conic::basis(),
            Problem::FivePoint => five_point::basis(),
        }
    }

    fn expected_solutions(&self) -> usize {
        match self {
            Problem::Conic => conic::SOLUTIONS,
            Problem::FivePoint => five_point::SOLUTIONS,
        }
    }
}

/// Input data of one problem instance. The JSON shape identifies the problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemData {
    Conic(ConicPairData),
    FivePoint(FivePointData),
}

impl ProblemData {
    pub fn problem(&self) -> Problem {
        match self {
            ProblemData::Conic(_) => Problem::Conic,
            ProblemData::FivePoint(_) => Problem::FivePoint,
        }
    }
}

/// Synthetic data together with solutions known by construction.
#[derive(Clone, Debug)]
pub struct Instance {
    pub data: ProblemData,
    pub ground_truth: Vec<Vec<f64>>,
}

/// Deterministic synthetic instance for `seed`.
pub fn generate_instance(problem: Problem, rng_seed: u64) -> Instance {
    problem.generate_with(&mut ChaCha8Rng::seed_from_u64(rng_seed))
}
