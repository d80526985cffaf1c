//! The evaluation kernel: route costs, per-customer fulfillment success
//! rates, feasibility checks, and the penalized scalar objective used by
//! both solvers.
//!
//! A customer's success rate is the product of arc success probabilities
//! along the route prefix from the depot up to that customer; the return
//! arc to the depot never enters it.

use serde::{Deserialize, Serialize};

use crate::model::{Instance, NodeId, ObjectiveSpec, Route, Solution, SolutionError};

/// Tolerance below which a constraint excess is treated as zero, so that
/// e.g. a budget exactly equal to the optimal cost stays feasible despite
/// floating-point summation noise.
pub const FEASIBILITY_EPS: f64 = 1e-9;

/// Penalty multiplier M for constraint violations. Infeasible candidates
/// get `M * (capacity_violation + constraint_violation)` added to their
/// scalar objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig {
    pub big_m: f64,
}

impl PenaltyConfig {
    pub fn new(big_m: f64) -> Self {
        PenaltyConfig { big_m }
    }

    /// Default multiplier: 1e6 times the instance diameter, so any
    /// infeasibility dominates any cost difference.
    pub fn for_instance(instance: &Instance) -> Self {
        PenaltyConfig {
            big_m: 1e6 * instance.diameter().max(1.0),
        }
    }
}

/// Per-solution evaluation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub total_cost: f64,
    /// Success rate per node id; entry 0 (the depot) is fixed at 1.
    pub node_success: Vec<f64>,
    pub total_success: f64,
    pub capacity_violation: f64,
    pub constraint_violation: f64,
    pub feasible: bool,
}

impl Evaluation {
    /// Smallest success rate over all customers.
    pub fn min_customer_success(&self) -> f64 {
        self.node_success[1..]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Cost of one route: depot -> customers in order -> depot, summing rounded
/// arc costs. An empty route costs nothing.
pub fn route_cost(instance: &Instance, route: &Route) -> f64 {
    if route.is_empty() {
        return 0.0;
    }
    let mut cost = instance.arc_cost(0, route.customers[0]);
    for pair in route.customers.windows(2) {
        cost += instance.arc_cost(pair[0], pair[1]);
    }
    cost + instance.arc_cost(*route.customers.last().unwrap(), 0)
}

/// Success rate of every customer on the route, in visit order: the k-th
/// customer gets the product of the first k arc probabilities from the
/// depot.
pub fn node_success(instance: &Instance, route: &Route) -> Vec<(NodeId, f64)> {
    let mut out = Vec::with_capacity(route.len());
    let mut prob = 1.0;
    let mut prev = 0;
    for &c in &route.customers {
        prob *= instance.success(prev, c);
        out.push((c, prob));
        prev = c;
    }
    out
}

/// Evaluate a solution against an objective specification.
///
/// Capacity violations and the mode-dependent side constraint are reported
/// as nonnegative excesses (for penalty-driven search); a broken partition
/// is a programming error and returned as `Err`.
pub fn evaluate(
    instance: &Instance,
    solution: &Solution,
    spec: &ObjectiveSpec,
) -> Result<Evaluation, SolutionError> {
    solution.validate(instance)?;

    let mut total_cost = 0.0;
    let mut capacity_violation = 0.0;
    let mut success = vec![1.0; instance.n_nodes()];
    for route in &solution.routes {
        total_cost += route_cost(instance, route);
        let excess = route.load(instance) - instance.capacity();
        if excess > FEASIBILITY_EPS {
            capacity_violation += excess;
        }
        for (node, phi) in node_success(instance, route) {
            success[node] = phi;
        }
    }
    let total_success: f64 = success[1..].iter().sum();

    let constraint_violation = match *spec {
        ObjectiveSpec::MinCost { alpha } => success[1..]
            .iter()
            .map(|&phi| {
                let short = alpha - phi;
                if short > FEASIBILITY_EPS {
                    short
                } else {
                    0.0
                }
            })
            .sum(),
        ObjectiveSpec::MaxSuccess { beta } => {
            let over = total_cost - beta;
            if over > FEASIBILITY_EPS {
                over
            } else {
                0.0
            }
        }
    };

    Ok(Evaluation {
        total_cost,
        node_success: success,
        total_success,
        capacity_violation,
        constraint_violation,
        feasible: capacity_violation == 0.0 && constraint_violation == 0.0,
    })
}

/// Collapse an evaluation to the minimization scalar both solvers compare:
/// cost (MinCost) or negated total success (MaxSuccess), plus
/// `M * (capacity_violation + constraint_violation)`.
pub fn scalar_objective(eval: &Evaluation, spec: &ObjectiveSpec, penalty: &PenaltyConfig) -> f64 {
    let base = match spec {
        ObjectiveSpec::MinCost { .. } => eval.total_cost,
        ObjectiveSpec::MaxSuccess { .. } => -eval.total_success,
    };
    base + penalty.big_m * (eval.capacity_violation + eval.constraint_violation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::reference_instance;

    fn sol(routes: &[&[NodeId]]) -> Solution {
        Solution::new(routes.iter().map(|r| Route::new(r.to_vec())).collect())
    }

    #[test]
    fn route_cost_examples() {
        let inst = reference_instance();
        assert!((route_cost(&inst, &Route::new(vec![6, 1, 7])) - 51.61).abs() < 0.01);
        assert_eq!(route_cost(&inst, &Route::new(vec![])), 0.0);
        let total = route_cost(&inst, &Route::new(vec![8, 2, 4, 3, 5]))
            + route_cost(&inst, &Route::new(vec![6, 1, 7]));
        assert!((total - 211.25).abs() < 0.01);
    }

    #[test]
    fn node_success_published_rates() {
        let inst = reference_instance();
        // 0 -> 6 -> 5 -> 1 -> 7
        let phis = node_success(&inst, &Route::new(vec![6, 5, 1, 7]));
        let expected = [(6, 0.982), (5, 0.96236), (1, 0.92675), (7, 0.91471)];
        for ((node, phi), (en, ep)) in phis.iter().zip(expected) {
            assert_eq!(*node, en);
            assert!((phi - ep).abs() < 5e-4, "node {node}: {phi} vs {ep}");
        }
        // 0 -> 8 -> 2 -> 3 -> 4 -> 5
        let phis = node_success(&inst, &Route::new(vec![8, 2, 3, 4, 5]));
        let expected = [
            (8, 0.972),
            (2, 0.93506),
            (3, 0.91823),
            (4, 0.88701),
            (5, 0.82758),
        ];
        for ((node, phi), (en, ep)) in phis.iter().zip(expected) {
            assert_eq!(*node, en);
            assert!((phi - ep).abs() < 5e-4, "node {node}: {phi} vs {ep}");
        }
        assert!(node_success(&inst, &Route::new(vec![])).is_empty());
    }

    #[test]
    fn evaluate_reference_optimum() {
        let inst = reference_instance();
        let spec = ObjectiveSpec::min_cost(0.0).unwrap();
        let eval = evaluate(&inst, &sol(&[&[8, 2, 4, 3, 5], &[6, 1, 7]]), &spec).unwrap();
        assert!((eval.total_cost - 211.25).abs() < 0.01);
        assert!((eval.total_success - 7.42).abs() < 0.01);
        assert!(eval.feasible);
    }

    #[test]
    fn evaluate_alpha_floor() {
        let inst = reference_instance();
        let spec = ObjectiveSpec::min_cost(0.90).unwrap();
        let eval = evaluate(&inst, &sol(&[&[6, 5, 1, 7], &[8, 4, 3, 2]]), &spec).unwrap();
        assert!((eval.total_cost - 248.55).abs() < 0.01);
        assert!(eval.feasible);
        assert!(eval.min_customer_success() >= 0.90);
        assert!((eval.min_customer_success() - 0.909).abs() < 0.001);
    }

    #[test]
    fn evaluate_beta_budget() {
        let inst = reference_instance();
        let spec = ObjectiveSpec::max_success(220.0).unwrap();
        let eval = evaluate(&inst, &sol(&[&[6, 1, 7], &[8, 2, 3, 4, 5]]), &spec).unwrap();
        assert!((eval.total_success - 7.44).abs() < 0.01);
        assert!((eval.total_cost - 212.89).abs() < 0.01);
        assert!(eval.feasible);
    }

    #[test]
    fn evaluate_reports_violations() {
        let inst = reference_instance();
        // One route carrying everything blows the 180 capacity (load 308).
        let spec = ObjectiveSpec::min_cost(0.0).unwrap();
        let eval = evaluate(&inst, &sol(&[&[1, 2, 3, 4, 5, 6, 7, 8], &[]]), &spec).unwrap();
        assert!((eval.capacity_violation - 128.0).abs() < 1e-9);
        assert!(!eval.feasible);

        // Tight budget in MaxSuccess mode.
        let spec = ObjectiveSpec::max_success(100.0).unwrap();
        let eval = evaluate(&inst, &sol(&[&[8, 2, 4, 3, 5], &[6, 1, 7]]), &spec).unwrap();
        assert!(eval.constraint_violation > 100.0);
        assert!(!eval.feasible);
    }

    #[test]
    fn evaluate_rejects_broken_partition() {
        let inst = reference_instance();
        let spec = ObjectiveSpec::min_cost(0.0).unwrap();
        assert!(evaluate(&inst, &sol(&[&[1, 2, 3]]), &spec).is_err());
    }

    #[test]
    fn scalar_objective_examples() {
        let spec = ObjectiveSpec::min_cost(0.0).unwrap();
        let penalty = PenaltyConfig::new(1e6);
        let feasible = Evaluation {
            total_cost: 211.25,
            node_success: vec![1.0],
            total_success: 7.42,
            capacity_violation: 0.0,
            constraint_violation: 0.0,
            feasible: true,
        };
        assert_eq!(scalar_objective(&feasible, &spec, &penalty), 211.25);

        let max_spec = ObjectiveSpec::max_success(220.0).unwrap();
        let succ = Evaluation {
            total_success: 7.44,
            ..feasible.clone()
        };
        assert_eq!(scalar_objective(&succ, &max_spec, &penalty), -7.44);

        let violated = Evaluation {
            total_cost: 200.0,
            capacity_violation: 5.0,
            feasible: false,
            ..feasible
        };
        assert_eq!(scalar_objective(&violated, &spec, &penalty), 5_000_200.0);
    }

    #[test]
    fn reversal_keeps_cost_may_change_success() {
        let inst = reference_instance();
        let fwd = Route::new(vec![8, 2, 4, 3, 5]);
        let rev = Route::new(vec![5, 3, 4, 2, 8]);
        assert!((route_cost(&inst, &fwd) - route_cost(&inst, &rev)).abs() < 1e-12);
        let sum = |r: &Route| -> f64 { node_success(&inst, r).iter().map(|(_, p)| p).sum() };
        assert!((sum(&fwd) - sum(&rev)).abs() > 1e-6);
    }

    #[test]
    fn prefix_monotonicity() {
        let inst = reference_instance();
        for route in [vec![6, 5, 1, 7], vec![8, 2, 3, 4, 5], vec![1, 2, 3, 4, 5, 6, 7, 8]] {
            let phis = node_success(&inst, &Route::new(route));
            for pair in phis.windows(2) {
                assert!(pair[1].1 <= pair[0].1 + 1e-15);
            }
        }
    }

    #[test]
    fn all_certain_arcs_give_full_success() {
        let n = 5;
        let inst = Instance::new(
            (0..=n).map(|i| (i as f64, 0.0)).collect(),
            std::iter::once(0.0).chain((1..=n).map(|_| 1.0)).collect(),
            2,
            10.0,
            vec![vec![1.0; n + 1]; n + 1],
        )
        .unwrap();
        let spec = ObjectiveSpec::min_cost(1.0).unwrap();
        let eval = evaluate(&inst, &sol(&[&[1, 2, 3], &[4, 5]]), &spec).unwrap();
        assert_eq!(eval.total_success, n as f64);
        assert!(eval.feasible);
    }
}
