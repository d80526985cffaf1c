//! Domain types: instances, routes, solutions, objective specifications,
//! plus the built-in reference instance and instance file I/O.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node index into an [`Instance`]. Index 0 is always the depot; customers
/// are `1..=n_customers`.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("instance must contain the depot and at least one customer")]
    TooFewNodes,
    #[error("node ids must run 0..=N in order; found id {found} at position {position}")]
    BadNodeId { found: usize, position: usize },
    #[error("{field} for node {node} is not a finite number")]
    NotFinite { field: &'static str, node: usize },
    #[error("depot demand must be 0, found {0}")]
    DepotDemand(f64),
    #[error("demand for node {node} is negative: {value}")]
    NegativeDemand { node: usize, value: f64 },
    #[error("fleet size must be at least 1")]
    BadFleetSize,
    #[error("vehicle capacity must be positive, found {0}")]
    BadCapacity(f64),
    #[error("success matrix has {rows} rows, expected {expected}")]
    MatrixRows { rows: usize, expected: usize },
    #[error("success matrix row {row} has {len} entries; expected {full} (full row) or {upper} (upper triangle)")]
    MatrixRowLen {
        row: usize,
        len: usize,
        full: usize,
        upper: usize,
    },
    #[error("success[{i}][{j}] = {value} is outside [0, 1]")]
    BadProbability { i: usize, j: usize, value: f64 },
    #[error("success matrix is asymmetric at ({i},{j}): {forward} vs {backward}")]
    AsymmetricSuccess {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    #[error("success[{i}][{i}] must be 1, found {value}")]
    BadDiagonal { i: usize, value: f64 },
    #[error("alpha must lie in [0, 1], found {0}")]
    BadAlpha(f64),
    #[error("beta must be nonnegative, found {0}")]
    BadBeta(f64),
}

/// A routing network: node coordinates, demands, a homogeneous fleet, and a
/// symmetric per-arc success-probability matrix.
///
/// Immutable after construction; safe to share read-only across solver
/// workers.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    nodes: Vec<(f64, f64)>,
    demand: Vec<f64>,
    fleet_size: usize,
    capacity: f64,
    success: Vec<Vec<f64>>,
}

impl Instance {
    /// Build an instance, checking every invariant: depot demand zero,
    /// nonnegative demands, probabilities in [0,1], symmetric matrix with
    /// unit diagonal, positive capacity and fleet size.
    pub fn new(
        nodes: Vec<(f64, f64)>,
        demand: Vec<f64>,
        fleet_size: usize,
        capacity: f64,
        success: Vec<Vec<f64>>,
    ) -> Result<Self, ModelError> {
        let n = nodes.len();
        if n < 2 {
            return Err(ModelError::TooFewNodes);
        }
        if demand.len() != n {
            return Err(ModelError::MatrixRows {
                rows: demand.len(),
                expected: n,
            });
        }
        for (i, &(x, y)) in nodes.iter().enumerate() {
            if !x.is_finite() {
                return Err(ModelError::NotFinite { field: "x", node: i });
            }
            if !y.is_finite() {
                return Err(ModelError::NotFinite { field: "y", node: i });
            }
        }
        if !demand[0].is_finite() || demand[0] != 0.0 {
            return Err(ModelError::DepotDemand(demand[0]));
        }
        for (i, &d) in demand.iter().enumerate() {
            if !d.is_finite() {
                return Err(ModelError::NotFinite {
                    field: "demand",
                    node: i,
                });
            }
            if d < 0.0 {
                return Err(ModelError::NegativeDemand { node: i, value: d });
            }
        }
        if fleet_size < 1 {
            return Err(ModelError::BadFleetSize);
        }
        if !capacity.is_finite() || capacity <= 0.0 {
            return Err(ModelError::BadCapacity(capacity));
        }
        if success.len() != n {
            return Err(ModelError::MatrixRows {
                rows: success.len(),
                expected: n,
            });
        }
        for (i, row) in success.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::MatrixRowLen {
                    row: i,
                    len: row.len(),
                    full: n,
                    upper: n - i,
                });
            }
            for (j, &p) in row.iter().enumerate() {
                if !p.is_finite() {
                    return Err(ModelError::NotFinite {
                        field: "success",
                        node: i,
                    });
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(ModelError::BadProbability { i, j, value: p });
                }
            }
            if success[i][i] != 1.0 {
                return Err(ModelError::BadDiagonal {
                    i,
                    value: success[i][i],
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if success[i][j] != success[j][i] {
                    return Err(ModelError::AsymmetricSuccess {
                        i,
                        j,
                        forward: success[i][j],
                        backward: success[j][i],
                    });
                }
            }
        }
        Ok(Instance {
            nodes,
            demand,
            fleet_size,
            capacity,
            success,
        })
    }

    /// Total node count including the depot.
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Customer count N (nodes excluding the depot).
    pub fn n_customers(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn coord(&self, i: NodeId) -> (f64, f64) {
        self.nodes[i]
    }

    pub fn demand(&self, i: NodeId) -> f64 {
        self.demand[i]
    }

    pub fn total_demand(&self) -> f64 {
        self.demand.iter().sum()
    }

    /// Success probability of traversing arc (i, j) without interdiction.
    pub fn success(&self, i: NodeId, j: NodeId) -> f64 {
        self.success[i][j]
    }

    /// Euclidean distance between nodes i and j at full floating precision.
    pub fn distance(&self, i: NodeId, j: NodeId) -> f64 {
        let (xi, yi) = self.nodes[i];
        let (xj, yj) = self.nodes[j];
        ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt()
    }

    /// Travel cost of arc (i, j): the Euclidean distance rounded to two
    /// decimals. Route costs are sums of these rounded arc costs.
    pub fn arc_cost(&self, i: NodeId, j: NodeId) -> f64 {
        (self.distance(i, j) * 100.0).round() / 100.0
    }

    /// Largest arc cost in the instance; used to scale penalty multipliers.
    pub fn diameter(&self) -> f64 {
        let n = self.n_nodes();
        let mut d = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                d = d.max(self.arc_cost(i, j));
            }
        }
        d
    }
}

/// The 8-customer network of the built-in reference instance: depot at
/// (7,47), two vehicles of capacity 180, and the arc success-rate table.
pub fn reference_instance() -> Instance {
    let nodes = vec![
        (7.0, 47.0),
        (28.0, 45.0),
        (21.0, 1.0),
        (38.0, 10.0),
        (48.0, 0.0),
        (44.0, 31.0),
        (17.0, 35.0),
        (12.0, 47.0),
        (3.0, 12.0),
    ];
    let demand = vec![0.0, 47.0, 35.0, 47.0, 33.0, 28.0, 43.0, 39.0, 36.0];
    let success = vec![
        vec![1.0, 0.961, 0.949, 0.941, 0.952, 0.948, 0.982, 0.949, 0.972],
        vec![0.961, 1.0, 0.937, 0.932, 0.963, 0.963, 0.985, 0.987, 0.976],
        vec![0.949, 0.937, 1.0, 0.982, 0.956, 0.952, 0.937, 0.973, 0.962],
        vec![0.941, 0.932, 0.982, 1.0, 0.966, 0.987, 0.955, 0.962, 0.970],
        vec![0.952, 0.963, 0.956, 0.966, 1.0, 0.933, 0.981, 0.975, 0.986],
        vec![0.948, 0.963, 0.952, 0.987, 0.933, 1.0, 0.980, 0.977, 0.978],
        vec![0.982, 0.985, 0.937, 0.955, 0.981, 0.980, 1.0, 0.958, 0.984],
        vec![0.949, 0.987, 0.973, 0.962, 0.975, 0.977, 0.958, 1.0, 0.920],
        vec![0.972, 0.976, 0.962, 0.970, 0.986, 0.978, 0.984, 0.920, 1.0],
    ];
    Instance::new(nodes, demand, 2, 180.0, success).expect("reference instance is valid")
}

/// Ordered customer visits for one vehicle. The depot is implicit at both
/// ends; an empty route is an unused vehicle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub customers: Vec<NodeId>,
}

impl Route {
    pub fn new(customers: Vec<NodeId>) -> Self {
        Route { customers }
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }

    pub fn len(&self) -> usize {
        self.customers.len()
    }

    /// Demand carried by the vehicle serving this route.
    pub fn load(&self, instance: &Instance) -> f64 {
        self.customers.iter().map(|&c| instance.demand(c)).sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("solution has {used} routes but the fleet has only {fleet} vehicles")]
    TooManyRoutes { used: usize, fleet: usize },
    #[error("node {0} is not a customer of this instance")]
    BadCustomer(NodeId),
    #[error("customer {0} appears more than once")]
    DuplicateCustomer(NodeId),
    #[error("customer {0} is not covered by any route")]
    MissingCustomer(NodeId),
}

/// A set of routes partitioning the customers among at most `fleet_size`
/// vehicles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub routes: Vec<Route>,
}

impl Solution {
    pub fn new(routes: Vec<Route>) -> Self {
        Solution { routes }
    }

    /// Check the partition property (every customer in exactly one route)
    /// and the fleet bound.
    pub fn validate(&self, instance: &Instance) -> Result<(), SolutionError> {
        if self.routes.len() > instance.fleet_size() {
            return Err(SolutionError::TooManyRoutes {
                used: self.routes.len(),
                fleet: instance.fleet_size(),
            });
        }
        let n = instance.n_customers();
        let mut seen = vec![false; n + 1];
        for route in &self.routes {
            for &c in &route.customers {
                if c == 0 || c > n {
                    return Err(SolutionError::BadCustomer(c));
                }
                if seen[c] {
                    return Err(SolutionError::DuplicateCustomer(c));
                }
                seen[c] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&c| !seen[c]) {
            return Err(SolutionError::MissingCustomer(missing));
        }
        Ok(())
    }
}

/// Which of the two robust objectives to solve.
///
/// `MinCost` minimizes total travel cost subject to every customer's
/// fulfillment success being at least `alpha`. `MaxSuccess` maximizes total
/// fulfillment success subject to total cost at most `beta`. `alpha` is a
/// fraction in [0,1]; the CLI accepts percentages and divides by 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ObjectiveSpec {
    MinCost { alpha: f64 },
    MaxSuccess { beta: f64 },
}

impl ObjectiveSpec {
    pub fn min_cost(alpha: f64) -> Result<Self, ModelError> {
        if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
            return Err(ModelError::BadAlpha(alpha));
        }
        Ok(ObjectiveSpec::MinCost { alpha })
    }

    pub fn max_success(beta: f64) -> Result<Self, ModelError> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(ModelError::BadBeta(beta));
        }
        Ok(ObjectiveSpec::MaxSuccess { beta })
    }
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: usize,
    x: f64,
    y: f64,
    demand: f64,
}

#[derive(Serialize, Deserialize)]
struct FleetRecord {
    count: usize,
    capacity: f64,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    nodes: Vec<NodeRecord>,
    fleet: FleetRecord,
    success: Vec<Vec<f64>>,
}

/// Parse an instance file (see `docs/instance_format.md`). The success
/// matrix may be given in full or as the upper triangle (row i holding the
/// entries for j >= i); symmetry is completed automatically in the latter
/// case and enforced in the former.
pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance, ModelError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ModelError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|source| ModelError::Parse {
        path: path.display().to_string(),
        source,
    })?;

    let n = file.nodes.len();
    for (position, node) in file.nodes.iter().enumerate() {
        if node.id != position {
            return Err(ModelError::BadNodeId {
                found: node.id,
                position,
            });
        }
    }
    let nodes: Vec<(f64, f64)> = file.nodes.iter().map(|r| (r.x, r.y)).collect();
    let demand: Vec<f64> = file.nodes.iter().map(|r| r.demand).collect();

    if file.success.len() != n {
        return Err(ModelError::MatrixRows {
            rows: file.success.len(),
            expected: n,
        });
    }
    let upper = file.success.iter().enumerate().all(|(i, row)| row.len() == n - i);
    let success = if upper && n > 1 {
        let mut full = vec![vec![0.0; n]; n];
        for (i, row) in file.success.iter().enumerate() {
            for (off, &p) in row.iter().enumerate() {
                let j = i + off;
                full[i][j] = p;
                full[j][i] = p;
            }
        }
        full
    } else {
        for (i, row) in file.success.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::MatrixRowLen {
                    row: i,
                    len: row.len(),
                    full: n,
                    upper: n - i,
                });
            }
        }
        file.success
    };

    Instance::new(nodes, demand, file.fleet.count, file.fleet.capacity, success)
}

/// Serialize an instance so that `load_instance` recovers it bit-exactly
/// (JSON numbers are written in shortest round-trip form).
pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    let file = InstanceFile {
        nodes: (0..instance.n_nodes())
            .map(|i| {
                let (x, y) = instance.coord(i);
                NodeRecord {
                    id: i,
                    x,
                    y,
                    demand: instance.demand(i),
                }
            })
            .collect(),
        fleet: FleetRecord {
            count: instance.fleet_size(),
            capacity: instance.capacity(),
        },
        success: (0..instance.n_nodes())
            .map(|i| (0..instance.n_nodes()).map(|j| instance.success(i, j)).collect())
            .collect(),
    };
    let text = serde_json::to_string_pretty(&file).expect("instance serializes");
    fs::write(path, text).map_err(|source| ModelError::Write {
        path: path.display().to_string(),
        source,
    })
}
