//! Simulated-annealing solver: random-sample initial temperature, best
//! random initial solution, geometric cooling, Metropolis acceptance, and
//! three neighborhood moves (shift, exchange, 2-opt). Constraints are
//! handled through the penalized scalar objective, so infeasible candidates
//! are explored but dominated.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluation::{evaluate, scalar_objective, Evaluation, PenaltyConfig};
use crate::exact::{decode_flat, flatten};
use crate::model::{Instance, ObjectiveSpec, Solution};

/// Identifier of the seedable generator driving every run, recorded in
/// results so runs are replayable across implementations.
pub const RNG_ALGORITHM: &str = "chacha12";

#[derive(Debug, Error)]
pub enum SaError {
    #[error("initial temperature requires at least one sampled objective")]
    EmptySample,
    #[error("invalid SA configuration: {0}")]
    BadConfig(String),
}

/// Tunable parameters of one annealing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaConfig {
    /// Geometric cooling coefficient, strictly between 0 and 1.
    pub delta: f64,
    /// Number of temperature levels (outer loop length).
    pub outer_iterations: usize,
    /// Moves attempted per temperature level.
    pub inner_iterations: usize,
    /// Random solutions sampled for the initial temperature and the initial
    /// solution.
    pub init_samples: usize,
    pub seed: u64,
    /// Penalty multiplier; `None` derives it from the instance diameter.
    pub penalty: Option<PenaltyConfig>,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            delta: 0.98,
            outer_iterations: 300,
            inner_iterations: 50,
            init_samples: 50,
            seed: 1,
            penalty: None,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), SaError> {
        if !self.delta.is_finite() || self.delta <= 0.0 || self.delta >= 1.0 {
            return Err(SaError::BadConfig(format!(
                "delta must lie strictly between 0 and 1, found {}",
                self.delta
            )));
        }
        if self.outer_iterations < 1 || self.inner_iterations < 1 || self.init_samples < 1 {
            return Err(SaError::BadConfig(
                "iteration and sample counts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one annealing run. `best_eval.feasible` decides
/// `feasible_found`; the trace records the best penalized objective after
/// each temperature level.
#[derive(Debug, Clone)]
pub struct SaResult {
    pub best_solution: Solution,
    pub best_eval: Evaluation,
    pub feasible_found: bool,
    pub objective_trace: Vec<(usize, f64)>,
    pub temperatures: Vec<f64>,
    pub elapsed: Duration,
    pub rng_algorithm: &'static str,
}

/// Initial temperature from a sample of scalar objectives:
/// `f_min + 0.1 * (f_max - f_min)`. The raw value may be nonpositive when
/// objectives are negative (success maximization); the solver clamps it.
pub fn initial_temperature(objectives: &[f64]) -> Result<f64, SaError> {
    if objectives.is_empty() {
        return Err(SaError::EmptySample);
    }
    let f_max = objectives.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let f_min = objectives.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(f_min + 0.1 * (f_max - f_min))
}

fn clamp_temperature(raw: f64, span: f64) -> f64 {
    if raw > 0.0 {
        raw
    } else if span > 0.0 {
        0.1 * span
    } else {
        1.0
    }
}

/// A uniformly random solution string: shuffle the customers together with
/// the K-1 separators and decode. The partition invariant holds by
/// construction; capacity or side constraints may be violated.
pub fn random_solution<R: Rng>(instance: &Instance, rng: &mut R) -> Solution {
    let mut symbols: Vec<usize> = vec![0; instance.fleet_size() - 1];
    symbols.extend(1..=instance.n_customers());
    symbols.shuffle(rng);
    decode_flat(&symbols)
}

/// Relocate one random customer to a different position in the flattened
/// solution string (possibly another route).
pub fn shift_move<R: Rng>(solution: &Solution, rng: &mut R) -> Solution {
    let mut flat = flatten(solution);
    let positions: Vec<usize> = (0..flat.len()).filter(|&i| flat[i] != 0).collect();
    if positions.is_empty() || flat.len() < 2 {
        return solution.clone();
    }
    let from = positions[rng.gen_range(0..positions.len())];
    let symbol = flat.remove(from);
    // flat.len()+1 insertion slots; slot `from` recreates the original.
    let mut to = rng.gen_range(0..flat.len());
    if to >= from {
        to += 1;
    }
    flat.insert(to, symbol);
    decode_flat(&flat)
}

/// Swap the positions of two distinct random customers (within or across
/// routes). No-op when fewer than two customers exist.
pub fn exchange_move<R: Rng>(solution: &Solution, rng: &mut R) -> Solution {
    let mut flat = flatten(solution);
    let positions: Vec<usize> = (0..flat.len()).filter(|&i| flat[i] != 0).collect();
    if positions.len() < 2 {
        return solution.clone();
    }
    let a = rng.gen_range(0..positions.len());
    let mut b = rng.gen_range(0..positions.len() - 1);
    if b >= a {
        b += 1;
    }
    flat.swap(positions[a], positions[b]);
    decode_flat(&flat)
}

/// Reverse a random segment within one random route (replacing two arcs
/// with two new ones). No-op when no route has at least two customers.
pub fn two_opt_move<R: Rng>(solution: &Solution, rng: &mut R) -> Solution {
    let candidates: Vec<usize> = (0..solution.routes.len())
        .filter(|&r| solution.routes[r].len() >= 2)
        .collect();
    if candidates.is_empty() {
        return solution.clone();
    }
    let r = candidates[rng.gen_range(0..candidates.len())];
    let mut out = solution.clone();
    let route = &mut out.routes[r].customers;
    let i = rng.gen_range(0..route.len() - 1);
    let j = rng.gen_range(i + 1..route.len());
    route[i..=j].reverse();
    out
}

/// Metropolis acceptance: improvements always, deteriorations with
/// probability exp(-delta / temperature).
pub fn metropolis_accept<R: Rng>(delta: f64, temperature: f64, rng: &mut R) -> bool {
    if delta <= 0.0 {
        return true;
    }
    if temperature <= 0.0 {
        return false;
    }
    rng.gen::<f64>() < (-delta / temperature).exp()
}

const TIE_EPS: f64 = 1e-9;

/// Tie-break key matching the exhaustive solver: among equal-cost solutions
/// prefer higher total success, among equal-success solutions prefer lower
/// cost. Without it the reported orientation of a route (which leaves cost
/// unchanged but not the success rates) would depend on the random walk.
fn secondary_key(spec: &ObjectiveSpec, eval: &Evaluation) -> f64 {
    match spec {
        ObjectiveSpec::MinCost { .. } => -eval.total_success,
        ObjectiveSpec::MaxSuccess { .. } => eval.total_cost,
    }
}

struct BestTracker {
    solution: Solution,
    eval: Evaluation,
    objective: f64,
    secondary: f64,
}

impl BestTracker {
    /// Feasible solutions rank strictly above infeasible ones regardless of
    /// penalized value; near-ties on the penalized objective fall back to
    /// the secondary key.
    fn offer(&mut self, solution: &Solution, eval: &Evaluation, objective: f64, secondary: f64) {
        let better = match (eval.feasible, self.eval.feasible) {
            (true, false) => true,
            (false, true) => false,
            _ => {
                if objective < self.objective - TIE_EPS {
                    true
                } else if objective <= self.objective + TIE_EPS {
                    secondary < self.secondary - TIE_EPS
                } else {
                    false
                }
            }
        };
        if better {
            self.solution = solution.clone();
            self.eval = eval.clone();
            self.objective = objective;
            self.secondary = secondary;
        }
    }
}

/// Run simulated annealing. Fully deterministic given `config.seed`
/// (excluding `elapsed`).
pub fn solve_sa(
    instance: &Instance,
    spec: &ObjectiveSpec,
    config: &SaConfig,
) -> Result<SaResult, SaError> {
    config.validate()?;
    let start = Instant::now();
    let penalty = config
        .penalty
        .unwrap_or_else(|| PenaltyConfig::for_instance(instance));
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);

    // Initial sample: temperature from the objective spread, starting
    // solution from the best sample.
    let mut objectives = Vec::with_capacity(config.init_samples);
    let mut current: Option<(Solution, Evaluation, f64)> = None;
    let mut best: Option<BestTracker> = None;
    for _ in 0..config.init_samples {
        let solution = random_solution(instance, &mut rng);
        let eval = evaluate(instance, &solution, spec).expect("random solutions are partitions");
        let objective = scalar_objective(&eval, spec, &penalty);
        objectives.push(objective);
        let secondary = secondary_key(spec, &eval);
        match &mut best {
            None => {
                best = Some(BestTracker {
                    solution: solution.clone(),
                    eval: eval.clone(),
                    objective,
                    secondary,
                })
            }
            Some(tracker) => tracker.offer(&solution, &eval, objective, secondary),
        }
        if current.as_ref().map_or(true, |(_, _, f)| objective < *f) {
            current = Some((solution, eval, objective));
        }
    }
    let raw_t0 = initial_temperature(&objectives)?;
    let span = objectives.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - objectives.iter().copied().fold(f64::INFINITY, f64::min);
    let t0 = clamp_temperature(raw_t0, span);

    let (mut current_solution, _, mut current_objective) = current.expect("init_samples >= 1");
    let mut tracker = best.expect("init_samples >= 1");
    // The trace follows the raw best-ever penalized objective; the reported
    // solution additionally ranks feasible above infeasible.
    let mut best_objective = objectives.iter().copied().fold(f64::INFINITY, f64::min);

    let mut temperatures = Vec::with_capacity(config.outer_iterations);
    let mut trace = Vec::with_capacity(config.outer_iterations + 1);
    trace.push((0usize, best_objective));

    for level in 0..config.outer_iterations {
        let temperature = t0 * config.delta.powi(level as i32);
        temperatures.push(temperature);
        for _ in 0..config.inner_iterations {
            let candidate = match rng.gen_range(0..3) {
                0 => shift_move(&current_solution, &mut rng),
                1 => exchange_move(&current_solution, &mut rng),
                _ => two_opt_move(&current_solution, &mut rng),
            };
            let eval =
                evaluate(instance, &candidate, spec).expect("moves preserve the partition");
            let objective = scalar_objective(&eval, spec, &penalty);
            tracker.offer(&candidate, &eval, objective, secondary_key(spec, &eval));
            best_objective = best_objective.min(objective);
            let delta = objective - current_objective;
            if metropolis_accept(delta, temperature, &mut rng) {
                current_solution = candidate;
                current_objective = objective;
            }
        }
        trace.push(((level + 1) * config.inner_iterations, best_objective));
    }

    let feasible_found = tracker.eval.feasible;
    Ok(SaResult {
        best_solution: tracker.solution,
        best_eval: tracker.eval,
        feasible_found,
        objective_trace: trace,
        temperatures,
        elapsed: start.elapsed(),
        rng_algorithm: RNG_ALGORITHM,
    })
}
