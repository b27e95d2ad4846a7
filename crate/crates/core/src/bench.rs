//! Stability and timing statistics over many synthetic instances.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::offline::SolverTemplate;
use crate::problems::{Instance, Problem};
use crate::recover::{solve_online, SolutionSet};

pub const CSV_HEADER: &str =
    "problem,trials,mean_log10,median_log10,fail_pct,mean_us,mean_roots,best_mean_log10";

pub const HIST_BINS: usize = 40;
pub const HIST_MIN: f64 = -16.0;
pub const HIST_MAX: f64 = 0.0;

/// Residuals are floored here before taking `log10`.
pub const RESIDUAL_FLOOR: f64 = 1e-20;

/// Random stream of trial `trial` under `seed`, independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn trial_instance(problem: Problem, seed: u64, trial: u64) -> Instance {
    problem.generate_with(&mut trial_rng(seed, trial))
}

/// Outcome of one trial. `solution` is `None` when `solve_online` errored.
#[derive(Clone, Debug)]
pub struct TrialResult {
    pub solution: Option<SolutionSet>,
    pub time_us: f64,
}

impl TrialResult {
    pub fn failed(&self) -> bool {
        self.solution.as_ref().is_none_or(|s| s.failed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub problem_id: String,
    pub trials: usize,
    pub mean_log10_residual: f64,
    pub median_log10_residual: f64,
    pub fail_percent: f64,
    pub mean_time_us: f64,
    pub mean_roots: f64,
    /// Mean over successful trials of the best accepted residual.
    pub best_mean_log10: f64,
    /// `log10` of every accepted residual, in trial order.
    pub log10_residuals: Vec<f64>,
}

impl BenchReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{:.4},{:.3},{:.4},{:.6}",
            self.problem_id,
            self.trials,
            self.mean_log10_residual,
            self.median_log10_residual,
            self.fail_percent,
            self.mean_time_us,
            self.mean_roots,
            self.best_mean_log10
        )
    }

    pub fn csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.csv_row())
    }

    pub fn histogram(&self) -> Histogram {
        Histogram::new(&self.log10_residuals)
    }
}

/// Counts over [`HIST_BINS`] equal bins of `[HIST_MIN, HIST_MAX]`; values
/// outside the range land in the edge bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: &[f64]) -> Self {
        let width = (HIST_MAX - HIST_MIN) / HIST_BINS as f64;
        let edges = (0..=HIST_BINS).map(|b| HIST_MIN + b as f64 * width).collect();
        let mut counts = vec![0; HIST_BINS];
        for &v in values {
            let b = ((v - HIST_MIN) / width).floor();
            let b = if b.is_nan() { 0.0 } else { b.clamp(0.0, (HIST_BINS - 1) as f64) };
            counts[b as usize] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (b, count) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{:.1},{:.1},{}", self.edges[b], self.edges[b + 1], count);
        }
        out
    }
}

pub fn log10_residual(r: f64) -> f64 {
    r.max(RESIDUAL_FLOOR).log10()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        (s[m - 1] + s[m]) / 2.0
    }
}

/// Runs one trial: instance generation is untimed, `solve_online` is timed.
pub fn run_trial(template: &SolverTemplate, problem: Problem, seed: u64, trial: u64) -> TrialResult {
    let instance = trial_instance(problem, seed, trial);
    let start = Instant::now();
    let solution = solve_online(template, &instance.data).ok();
    let time_us = start.elapsed().as_secs_f64() * 1e6;
    TrialResult { solution, time_us }
}

pub fn aggregate(problem_id: &str, results: &[TrialResult]) -> BenchReport {
    let trials = results.len();
    let mut log10_residuals = Vec::new();
    let mut best = Vec::new();
    let mut times = Vec::new();
    let mut roots = 0usize;
    let mut failures = 0usize;
    for t in results {
        if t.failed() {
            failures += 1;
        }
        let Some(s) = &t.solution else { continue };
        times.push(t.time_us);
        roots += s.accepted.len();
        log10_residuals.extend(s.accepted.iter().map(|c| log10_residual(c.residual)));
        if let Some(first) = s.accepted.first() {
            best.push(log10_residual(first.residual));
        }
    }
    BenchReport {
        problem_id: problem_id.to_string(),
        trials,
        mean_log10_residual: mean(&log10_residuals),
        median_log10_residual: median(&log10_residuals),
        fail_percent: 100.0 * failures as f64 / trials as f64,
        mean_time_us: mean(&times),
        mean_roots: roots as f64 / trials as f64,
        best_mean_log10: mean(&best),
        log10_residuals,
    }
}

/// Runs `trials` seeded trials on `jobs` worker threads (all cores if `None`).
pub fn run_bench(
    template: &SolverTemplate,
    problem: Problem,
    trials: usize,
    seed: u64,
    jobs: Option<usize>,
) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<TrialResult> = pool.install(|| {
        (0..trials as u64)
            .into_par_iter()
            .map(|t| run_trial(template, problem, seed, t))
            .collect()
    });
    Ok(aggregate(problem.as_str(), &results))
}
