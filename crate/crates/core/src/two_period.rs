//! The 2-period (optionally balanced) TSP expressed as a 2VRP.
//!
//! Customers required in both periods are duplicated, one copy fixed to each
//! vehicle; single-period customers stay free. The balance constraint (period
//! visit counts differ by at most 1) is encoded with unit demands on the
//! free customers and capacities of half their count rounded up, which makes
//! capacity feasibility and balance coincide exactly.

use crate::model::{
    Cost, CostModel, Fleet, Instance, ModelError, NodeId, SegmentCustomer,
    TwoRouteSolution, Vehicle, SWITCH_ID,
};

/// A 2-period TSP over point customers identified by node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPeriodInstance {
    pub depot: usize,
    /// Customers visited in both periods (may include the depot itself).
    pub both_periods: Vec<usize>,
    /// Customers visited in exactly one period.
    pub single_period: Vec<usize>,
    pub dim: usize,
    pub distances: Vec<Cost>,
    pub balanced: bool,
    /// Euclidean coordinates when the instance came from (or is written to)
    /// a coordinate file.
    pub coords: Option<Vec<(i64, i64)>>,
}

impl TwoPeriodInstance {
    pub fn distance(&self, from: usize, to: usize) -> Cost {
        self.distances[from * self.dim + to]
    }

    /// Capacity used by the balance encoding.
    pub fn balanced_capacity(&self) -> u64 {
        (self.single_period.len() as u64).div_ceil(2)
    }
}

/// Node id of each 2VRP customer, indexed by customer id - 1. Both-period
/// customers contribute two consecutive copies, then the single-period
/// customers follow, everything in ascending node order.
pub fn customer_origin(tp: &TwoPeriodInstance) -> Vec<usize> {
    let mut origin = Vec::with_capacity(2 * tp.both_periods.len() + tp.single_period.len());
    let mut both = tp.both_periods.clone();
    both.sort_unstable();
    for &b in &both {
        origin.push(b);
        origin.push(b);
    }
    let mut single = tp.single_period.clone();
    single.sort_unstable();
    origin.extend(single);
    origin
}

/// Encodes the 2-period TSP as a 2VRP with n + 2m point customers.
pub fn build_instance(tp: &TwoPeriodInstance) -> Result<Instance, ModelError> {
    let n_single = tp.single_period.len() as u64;
    let capacity = if tp.balanced { tp.balanced_capacity() } else { n_single };
    let fleet = Fleet {
        capacity: [capacity, capacity],
        v1_start: NodeId(tp.depot),
        v1_end: NodeId(tp.depot),
        v2_start: NodeId(tp.depot),
        v2_end: NodeId(tp.depot),
    };
    let costs = CostModel::shared(tp.dim, tp.distances.clone())?;

    let origin = customer_origin(tp);
    let m = tp.both_periods.len();
    let customers = origin
        .iter()
        .enumerate()
        .map(|(k, &node)| {
            let id = k + 1;
            let (demand, fixed_to) = if k < 2 * m {
                (0, Some(if k % 2 == 0 { Vehicle::One } else { Vehicle::Two }))
            } else {
                (u64::from(tp.balanced), None)
            };
            SegmentCustomer::point(id, NodeId(node), demand, fixed_to)
        })
        .collect();
    Instance::new(fleet, costs, customers)
}

/// The two period tours of a 2VRP solution, as node sequences starting at the
/// depot (the closing arc back to the depot is implicit). Copies are renamed
/// to their original nodes.
pub fn extract_tours(sol: &TwoRouteSolution, tp: &TwoPeriodInstance) -> [Vec<usize>; 2] {
    let origin = customer_origin(tp);
    let mut tours = [vec![tp.depot], vec![tp.depot]];
    let mut period = 0;
    for &(id, _) in &sol.visits {
        if id == SWITCH_ID {
            period = 1;
            continue;
        }
        tours[period].push(origin[id - 1]);
    }
    tours
}

/// Closed-tour length under the 2-period distance matrix.
pub fn tour_length(tp: &TwoPeriodInstance, tour: &[usize]) -> Cost {
    if tour.len() < 2 {
        return Cost::ZERO;
    }
    let mut total = Cost::ZERO;
    for w in tour.windows(2) {
        total += tp.distance(w[0], w[1]);
    }
    total + tp.distance(tour[tour.len() - 1], tour[0])
}

/// True when the period visit counts (depot excluded) differ by at most one.
pub fn check_balance(tours: &[Vec<usize>; 2], _tp: &TwoPeriodInstance) -> bool {
    let c1 = tours[0].len() as i64 - 1;
    let c2 = tours[1].len() as i64 - 1;
    (c1 - c2).abs() <= 1
}
