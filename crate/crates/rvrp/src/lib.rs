//! Robust capacitated vehicle routing on networks where arcs may be
//! interdicted by an attacker.
//!
//! Each arc carries a success probability; a customer's fulfillment success
//! is the product of arc probabilities along its route prefix from the depot.
//! Two objectives are supported: minimize total travel cost subject to a
//! per-customer success floor, or maximize total fulfillment success subject
//! to a cost budget. Two backends solve either form: an exhaustive
//! solution-string enumerator for small instances and a simulated-annealing
//! metaheuristic for large ones.

pub mod annealing;
pub mod bench;
pub mod evaluation;
pub mod exact;
pub mod generator;
pub mod model;

pub use evaluation::{evaluate, Evaluation, PenaltyConfig};
pub use model::{Instance, ObjectiveSpec, Route, Solution};
