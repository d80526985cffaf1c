//! Exhaustive exact solver over the solution-string encoding: every
//! distinct permutation of the customers plus K-1 route separators is
//! decoded, evaluated, and the best feasible decoding kept.

use thiserror::Error;

use crate::evaluation::{evaluate, Evaluation};
use crate::model::{Instance, NodeId, ObjectiveSpec, Route, Solution};

/// Largest string length (customers + separators) the enumerator accepts by
/// default; above this the search space is impractical and the SA solver
/// should be used instead.
pub const DEFAULT_SYMBOL_LIMIT: usize = 13;

const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error(
        "exhaustive enumeration needs a solution string of {needed} symbols, above the limit of \
         {limit}; use the simulated-annealing solver for instances this large"
    )]
    TooLarge { needed: usize, limit: usize },
    #[error("malformed solution string: {0}")]
    Malformed(String),
}

/// One symbol of a solution string: a customer id or a route separator.
///
/// The derived ordering (separator first) defines the lexicographic order
/// used for deterministic tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    Separator,
    Customer(NodeId),
}

/// Flat encoding of a multi-vehicle solution: a permutation of all customer
/// ids with K-1 separators splitting it into K route segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionString {
    pub symbols: Vec<Symbol>,
}

impl SolutionString {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SolutionString { symbols }
    }

    /// Split at separators into routes. Checks that the string contains
    /// every customer `1..=n_customers` exactly once.
    pub fn decode(&self, n_customers: usize) -> Result<Solution, ExactError> {
        let separators = self
            .symbols
            .iter()
            .filter(|s| matches!(s, Symbol::Separator))
            .count();
        if self.symbols.len() != n_customers + separators {
            return Err(ExactError::Malformed(format!(
                "expected {} customer symbols, found {}",
                n_customers,
                self.symbols.len() - separators
            )));
        }
        let mut seen = vec![false; n_customers + 1];
        let mut routes = Vec::with_capacity(separators + 1);
        let mut current = Vec::new();
        for symbol in &self.symbols {
            match *symbol {
                Symbol::Separator => {
                    routes.push(Route::new(std::mem::take(&mut current)));
                }
                Symbol::Customer(c) => {
                    if c == 0 || c > n_customers {
                        return Err(ExactError::Malformed(format!("customer id {c} out of range")));
                    }
                    if seen[c] {
                        return Err(ExactError::Malformed(format!("customer {c} repeated")));
                    }
                    seen[c] = true;
                    current.push(c);
                }
            }
        }
        routes.push(Route::new(current));
        Ok(Solution::new(routes))
    }
}

// Internal flat encoding used by the enumerator and the SA moves: 0 is a
// separator, nonzero entries are customer ids.
pub(crate) fn decode_flat(symbols: &[usize]) -> Solution {
    let mut routes = Vec::new();
    let mut current = Vec::new();
    for &s in symbols {
        if s == 0 {
            routes.push(Route::new(std::mem::take(&mut current)));
        } else {
            current.push(s);
        }
    }
    routes.push(Route::new(current));
    Solution::new(routes)
}

pub(crate) fn flatten(solution: &Solution) -> Vec<usize> {
    let mut flat = Vec::new();
    for (i, route) in solution.routes.iter().enumerate() {
        if i > 0 {
            flat.push(0);
        }
        flat.extend_from_slice(&route.customers);
    }
    flat
}

/// Classic in-place next-permutation in lexicographic order; returns false
/// once the sequence is the last (descending) permutation. Duplicate
/// symbols (the separators) are handled correctly, so exactly the distinct
/// multiset permutations are visited.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Result of an exact solve: either the optimum or a proof (by exhaustion)
/// that no feasible solution exists. Infeasibility is a reportable outcome,
/// not an error.
#[derive(Debug, Clone)]
pub enum ExactOutcome {
    Solved {
        solution: Solution,
        eval: Evaluation,
    },
    Infeasible,
}

/// Primary/secondary minimization keys: MinCost minimizes cost and breaks
/// ties by maximal total success; MaxSuccess maximizes success and breaks
/// ties by minimal cost. Remaining ties go to the lexicographically
/// smallest string, which falls out of the enumeration order.
fn objective_key(eval: &Evaluation, spec: &ObjectiveSpec) -> (f64, f64) {
    match spec {
        ObjectiveSpec::MinCost { .. } => (eval.total_cost, -eval.total_success),
        ObjectiveSpec::MaxSuccess { .. } => (-eval.total_success, eval.total_cost),
    }
}

/// Exhaustively solve with the default symbol-count limit.
pub fn solve_exact(instance: &Instance, spec: &ObjectiveSpec) -> Result<ExactOutcome, ExactError> {
    solve_exact_limited(instance, spec, DEFAULT_SYMBOL_LIMIT)
}

/// Exhaustively solve, refusing strings longer than `limit` symbols.
///
/// Deterministic: enumeration runs in lexicographic order (separators sort
/// before customers) and only strict improvements replace the incumbent.
pub fn solve_exact_limited(
    instance: &Instance,
    spec: &ObjectiveSpec,
    limit: usize,
) -> Result<ExactOutcome, ExactError> {
    let n = instance.n_customers();
    let k = instance.fleet_size();
    let needed = n + k - 1;
    if needed > limit {
        return Err(ExactError::TooLarge { needed, limit });
    }

    // Ascending start = lexicographically smallest string.
    let mut symbols: Vec<usize> = vec![0; k - 1];
    symbols.extend(1..=n);

    let mut best: Option<(f64, f64, Solution, Evaluation)> = None;
    loop {
        let solution = decode_flat(&symbols);
        let eval = evaluate(instance, &solution, spec)
            .expect("decoded solution strings are valid partitions");
        if eval.feasible {
            let (primary, secondary) = objective_key(&eval, spec);
            let improves = match &best {
                None => true,
                Some((bp, bs, _, _)) => {
                    primary < bp - TIE_EPS
                        || ((primary - bp).abs() <= TIE_EPS && secondary < bs - TIE_EPS)
                }
            };
            if improves {
                best = Some((primary, secondary, solution, eval));
            }
        }
        if !next_permutation(&mut symbols) {
            break;
        }
    }

    Ok(match best {
        Some((_, _, solution, eval)) => ExactOutcome::Solved { solution, eval },
        None => ExactOutcome::Infeasible,
    })
}
