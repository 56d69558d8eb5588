//! Heuristic search for point configurations with small dispersion.
//!
//! Strict-decrease hill climbing with restarts: the objective is piecewise
//! constant in the point positions, so temperature-based acceptance adds
//! noise without benefit at this scale; restarts handle local minima.
//! Every candidate is scored by the full exact solver, and the final best
//! value is re-verified by an independent solver call. Results are
//! deterministic in the seed regardless of how many threads run the
//! restarts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::lower_bounds;
use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};
use crate::sampling::unit_f64;
use crate::solver::dispersion_exact;

/// Capacity guideline for repeated exact evaluation.
pub const MAX_OPTIMIZER_N: usize = 24;
pub const MAX_OPTIMIZER_D: usize = 4;

/// Configuration of one search run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub d: usize,
    pub restarts: usize,
    /// Iterations per restart.
    pub iterations: usize,
    pub initial_step: f64,
    /// Step-size multiplier applied every `n` iterations, in `(0, 1)`.
    pub cooling: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            restarts: 4,
            iterations: 1000,
            initial_step: 0.25,
            cooling: 0.9,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::InvalidParameter("need n >= 1 and d >= 1".into()));
        }
        if self.restarts == 0 || self.iterations == 0 {
            return Err(Error::InvalidParameter(
                "need at least one restart and one iteration".into(),
            ));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::InvalidParameter("cooling must lie in (0, 1)".into()));
        }
        if self.initial_step <= 0.0 || self.initial_step.is_nan() {
            return Err(Error::InvalidParameter("step must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a search run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub best_set: PointSet,
    pub best_disp: f64,
    pub per_restart_best: Vec<f64>,
    /// Total number of exact-solver evaluations.
    pub evaluations: u64,
}

/// Minimizes the dispersion of `n` points in `[0,1]^d`, enforcing the
/// capacity guideline (`n <= 24`, `d <= 4`).
pub fn minimize_dispersion(cfg: &SearchConfig) -> Result<SearchTrace> {
    if cfg.n > MAX_OPTIMIZER_N || cfg.d > MAX_OPTIMIZER_D {
        return Err(Error::CapacityExceeded {
            boxes: (cfg.n * cfg.d) as u128,
            cap: (MAX_OPTIMIZER_N * MAX_OPTIMIZER_D) as u128,
        });
    }
    minimize_dispersion_unchecked(cfg)
}

/// Same search without the capacity guard.
pub fn minimize_dispersion_unchecked(cfg: &SearchConfig) -> Result<SearchTrace> {
    cfg.validate()?;

    let runs: Vec<RestartResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| run_restart(cfg, restart))
        .collect();

    // Minimum value wins; ties go to the lowest restart index.
    let mut best_idx = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value < runs[best_idx].value {
            best_idx = i;
        }
    }
    let per_restart_best: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let mut evaluations: u64 = runs.iter().map(|r| r.evaluations).sum();

    let best_set = runs[best_idx].set.clone();
    let verified = dispersion_exact(&best_set).value;
    evaluations += 1;
    if verified != runs[best_idx].value {
        return Err(Error::InternalInvariant(format!(
            "re-verification disagrees: {} vs {}",
            verified, runs[best_idx].value
        )));
    }
    let floor = if cfg.d >= 2 {
        lower_bounds(cfg.n as u64, cfg.d as u32)?.best
    } else {
        1.0 / (cfg.n as f64 + 1.0)
    };
    if verified < floor {
        return Err(Error::InternalInvariant(format!(
            "search value {verified} violates the proven floor {floor}"
        )));
    }

    Ok(SearchTrace {
        best_set,
        best_disp: verified,
        per_restart_best,
        evaluations,
    })
}

struct RestartResult {
    set: PointSet,
    value: f64,
    evaluations: u64,
}

fn run_restart(cfg: &SearchConfig, restart: usize) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
    let mut rows: Vec<Vec<f64>> = if restart == 0 {
        structured_init(cfg.n, cfg.d)
    } else {
        (0..cfg.n)
            .map(|_| (0..cfg.d).map(|_| unit_f64(&mut rng)).collect())
            .collect()
    };

    let mut evaluations = 0u64;
    let mut current = score(&rows, cfg.d);
    evaluations += 1;

    let mut step = cfg.initial_step;
    for it in 0..cfg.iterations {
        let idx = rng.random_range(0..cfg.n);
        let mut new_row = rows[idx].clone();
        for slot in &mut new_row {
            let noise = (2.0 * unit_f64(&mut rng) - 1.0) * step;
            *slot = (*slot + noise).clamp(0.0, 1.0);
        }
        let old_row = std::mem::replace(&mut rows[idx], new_row);
        let candidate = score(&rows, cfg.d);
        evaluations += 1;
        if candidate < current {
            current = candidate;
        } else {
            rows[idx] = old_row;
        }
        if (it + 1) % cfg.n == 0 {
            step *= cfg.cooling;
        }
    }

    let set = PointSet::from_rows(cfg.d, &rows).expect("rows stay in [0, 1]");
    RestartResult {
        set,
        value: current,
        evaluations,
    }
}

fn score(rows: &[Vec<f64>], d: usize) -> f64 {
    let set = PointSet::new(
        d,
        rows.iter()
            .map(|r| Point::new(r.clone()).expect("coordinates stay clamped"))
            .collect(),
    )
    .expect("dimensions agree");
    dispersion_exact(&set).value
}

/// Restart 0 starts from a structured configuration: a Hammersley-style set
/// in two dimensions, a stratified grid otherwise.
fn structured_init(n: usize, d: usize) -> Vec<Vec<f64>> {
    if d == 2 {
        return (0..n)
            .map(|i| {
                let x = i as f64 / n as f64;
                let y = (i as u64).reverse_bits() as f64 / 2.0f64.powi(64);
                vec![x, y]
            })
            .collect();
    }
    // Stratified grid: cell midpoints of the coarsest grid with >= n cells.
    let mut side = 1usize;
    while side.pow(d as u32) < n {
        side += 1;
    }
    (0..n)
        .map(|i| {
            let mut rest = i;
            (0..d)
                .map(|_| {
                    let cell = rest % side;
                    rest /= side;
                    (cell as f64 + 0.5) / side as f64
                })
                .collect()
        })
        .collect()
}

/// Runs [`minimize_dispersion`] for each `n` in `n_list` and reports the
/// empirical upper envelope `n * best_disp` of the rate constant.
pub fn cd_trace(d: usize, n_list: &[usize], template: &SearchConfig) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cfg = SearchConfig {
            n,
            d,
            ..template.clone()
        };
        let trace = minimize_dispersion(&cfg)?;
        out.push((n, n as f64 * trace.best_disp));
    }
    Ok(out)
}
