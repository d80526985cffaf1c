//! Random instance generator for scalability experiments: coordinates
//! uniform on [0,100]^2 (depot included), integer demands uniform on
//! [20,50], arc success rates uniform on [0.9,0.99] drawn per unordered
//! pair, and capacity ceil(1.02 * total demand / fleet size).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Instance;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("customer count must be at least 1")]
    BadCustomerCount,
    #[error("fleet size must be at least 1")]
    BadFleetSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_customers: usize,
    pub fleet_size: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n_customers: usize, fleet_size: usize, seed: u64) -> Result<Self, GenError> {
        if n_customers < 1 {
            return Err(GenError::BadCustomerCount);
        }
        if fleet_size < 1 {
            return Err(GenError::BadFleetSize);
        }
        Ok(GenSpec {
            n_customers,
            fleet_size,
            seed,
        })
    }
}

/// Vehicle capacity for a realized total demand: ceil(1.02 * sum / k).
/// Together with the 2% slack this guarantees k * Q >= total demand.
pub fn capacity_for(total_demand: f64, fleet_size: usize) -> f64 {
    (1.02 * total_demand / fleet_size as f64).ceil()
}

/// Draw a random instance. Deterministic given the seed.
pub fn generate(spec: &GenSpec) -> Instance {
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let n = spec.n_customers;

    let nodes: Vec<(f64, f64)> = (0..=n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let mut demand = vec![0.0];
    demand.extend((0..n).map(|_| rng.gen_range(20..=50) as f64));

    let mut success = vec![vec![1.0; n + 1]; n + 1];
    for i in 0..=n {
        for j in (i + 1)..=n {
            let p = rng.gen_range(0.9..0.99);
            success[i][j] = p;
            success[j][i] = p;
        }
    }

    let capacity = capacity_for(demand.iter().sum(), spec.fleet_size);
    Instance::new(nodes, demand, spec.fleet_size, capacity, success)
        .expect("generated instances satisfy all invariants")
}
