//! Exact solver for bounded-size 2VRP instances.
//!
//! The solver extends the classic subset dynamic program for the TSP to two
//! vehicles: a state is (customer, entry orientation, set of customers still
//! to visit), and its value is the cheapest way to traverse the customer,
//! serve the remaining set, and finish at vehicle 2's end depot. Vehicle 1 is
//! active while the switch customer is still in the remaining set; once it is
//! gone, vehicle 2 pays all costs. Capacity and fixed-vehicle constraints are
//! verified per state without extra dimensions: the vehicle-2 branch requires
//! the remaining demand to fit its capacity, and the switch transition
//! additionally requires everything already served to fit vehicle 1.

use thiserror::Error;

use crate::model::{
    Cost, CustomerId, Instance, ModelError, Orientation, TwoRouteSolution,
    Vehicle, Visit, SWITCH_ID,
};

const INF: u64 = u64::MAX;

#[derive(Debug, Clone)]
pub struct DpOptions {
    /// Maximum number of customers including the switch.
    pub cap: usize,
    /// Permit the switch in last position, i.e. an empty second route.
    pub allow_empty_second: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { cap: 20, allow_empty_second: false }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("{count} customers including the switch exceed the solver cap {cap}")]
    TooManyCustomers { count: usize, cap: usize },
    #[error("no assignment of customers to vehicles satisfies capacities and fixed items")]
    Infeasible,
    #[error("forbidden arcs leave no finite-cost route")]
    NoFiniteRoute,
    #[error("corrupt parent chain during path reconstruction")]
    CorruptParentChain,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Traversal of `from` plus the arc from its exit node to `to`'s entry node,
/// paid by vehicle `vehicle`.
pub fn transition_cost(inst: &Instance, from: Visit, to: Visit, vehicle: Vehicle) -> Cost {
    let a = inst.customer(from.0);
    let b = inst.customer(to.0);
    a.traverse_cost(vehicle, from.1) + inst.costs.arc(vehicle, a.exit_node(from.1), b.entry_node(to.1))
}

/// Reusable workspace for repeated exact solves. The value and parent tables
/// grow to the largest instance seen and are recycled across solves.
pub struct DpSolver {
    value: Vec<u64>,
    parent: Vec<u8>,
    weight: Vec<u64>,
    trans: Vec<u64>,
}

impl DpSolver {
    pub fn new() -> DpSolver {
        DpSolver { value: Vec::new(), parent: Vec::new(), weight: Vec::new(), trans: Vec::new() }
    }

    /// Solves the instance to optimality under the adopted route convention.
    pub fn solve(&mut self, inst: &Instance, opts: &DpOptions) -> Result<TwoRouteSolution, SolveError> {
        let n = inst.num_customers();
        let m = n + 1; // dp customers including the switch at bit 0
        if m > opts.cap {
            return Err(SolveError::TooManyCustomers { count: m, cap: opts.cap });
        }
        if m > 30 {
            return Err(SolveError::TooManyCustomers { count: m, cap: 30 });
        }
        if n == 0 {
            return Err(SolveError::Infeasible);
        }

        let masks = 1usize << m;
        let cells = masks * m * 2;
        // Every live cell is written before it is read (masks are processed
        // in increasing order and children are strict submasks), so stale
        // contents from previous solves need no zeroing.
        if self.value.len() < cells {
            self.value.resize(cells, 0);
        }
        if self.parent.len() < cells {
            self.parent.resize(cells, 0);
        }

        // Subset demand sums, switch included with weight 0.
        if self.weight.len() < masks {
            self.weight.resize(masks, 0);
        }
        self.weight[0] = 0;
        for mask in 1..masks {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let w_low = if low == 0 { 0 } else { inst.customers[low - 1].demand };
            self.weight[mask] = self.weight[rest] + w_low;
        }
        let total_demand: u64 = inst.total_demand();
        let [cap1, cap2] = inst.fleet.capacity;

        let mut fixed1_mask = 0usize;
        let mut fixed2_mask = 0usize;
        for c in &inst.customers {
            match c.fixed_to {
                Some(Vehicle::One) => fixed1_mask |= 1 << c.id,
                Some(Vehicle::Two) => fixed2_mask |= 1 << c.id,
                None => {}
            }
        }

        // Folded transition costs: traversal of i plus the arc to j's entry,
        // per vehicle and orientation pair.
        self.trans.clear();
        self.trans.resize(2 * m * m * 4, INF);
        let orients = [Orientation::FromLeft, Orientation::FromRight];
        for v in [Vehicle::One, Vehicle::Two] {
            for i in 0..m {
                for j in 0..m {
                    for (a, &oi) in orients.iter().enumerate() {
                        for (b, &oj) in orients.iter().enumerate() {
                            let c = transition_cost(inst, (i, oi), (j, oj), v);
                            self.trans[Self::trans_idx(v.index(), m, i, j, a, b)] = c.value();
                        }
                    }
                }
            }
        }

        // Boundary: final customer, then straight to vehicle 2's end depot.
        let mut tail = [[INF; 2]; 32];
        for (i, slot) in tail.iter_mut().enumerate().take(m) {
            let c = inst.customer(i);
            for (a, &o) in orients.iter().enumerate() {
                let t = c.traverse_cost(Vehicle::Two, o)
                    + inst.costs.arc(Vehicle::Two, c.exit_node(o), inst.fleet.v2_end);
                slot[a] = t.value();
            }
        }

        // Customers indifferent to orientation (coinciding entry nodes,
        // equal traversal costs) carry identical VL/VR columns; compute one
        // and mirror it.
        let mut symmetric = 0usize;
        for i in 0..m {
            let c = inst.customer(i);
            if c.left == c.right && c.traverse[0][0] == c.traverse[0][1] && c.traverse[1][0] == c.traverse[1][1]
            {
                symmetric |= 1 << i;
            }
        }

        let full = masks - 1;
        for mask in 0..masks {
            let vehicle_one = mask & 1 != 0;
            let w_mask = self.weight[mask];
            // With the switch gone, a remaining set touching a vehicle-1
            // fixed item or overflowing vehicle 2 can never be completed.
            let dead_v2_set =
                !vehicle_one && ((mask & fixed1_mask) != 0 || w_mask > cap2);
            let mut free = !mask & full;
            while free != 0 {
                let i = free.trailing_zeros() as usize;
                free &= free - 1;
                let base = (mask * m + i) * 2;

                let infeasible_head = if vehicle_one {
                    fixed2_mask & (1 << i) != 0
                } else {
                    dead_v2_set
                        || fixed1_mask & (1 << i) != 0
                        || w_mask + head_demand(inst, i) > cap2
                        || (i == SWITCH_ID && total_demand - w_mask > cap1)
                        || (i == SWITCH_ID && mask == 0 && !opts.allow_empty_second)
                };
                if infeasible_head {
                    self.value[base] = INF;
                    self.value[base + 1] = INF;
                    continue;
                }

                if mask == 0 {
                    self.value[base] = tail[i][0];
                    self.value[base + 1] = tail[i][1];
                    continue;
                }

                let v = if vehicle_one { 0 } else { 1 };
                let head_orients = if symmetric & (1 << i) != 0 { 1 } else { 2 };
                let mut best = [INF; 2];
                let mut best_parent = [0u8; 2];
                let mut rest = mask;
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let child = (((mask ^ (1 << j)) * m) + j) * 2;
                    let cv_l = self.value[child];
                    let t = Self::trans_idx(v, m, i, j, 0, 0);
                    // Orientation pairs in (j asc, L before R) order so the
                    // first strict minimum is the lexicographic tie-break.
                    if symmetric & (1 << j) != 0 {
                        for a in 0..head_orients {
                            let value = self.trans[t + 2 * a].saturating_add(cv_l);
                            if value < best[a] {
                                best[a] = value;
                                best_parent[a] = (j as u8) << 1;
                            }
                        }
                    } else {
                        let cv_r = self.value[child + 1];
                        for a in 0..head_orients {
                            let vl = self.trans[t + 2 * a].saturating_add(cv_l);
                            if vl < best[a] {
                                best[a] = vl;
                                best_parent[a] = (j as u8) << 1;
                            }
                            let vr = self.trans[t + 2 * a + 1].saturating_add(cv_r);
                            if vr < best[a] {
                                best[a] = vr;
                                best_parent[a] = ((j as u8) << 1) | 1;
                            }
                        }
                    }
                }
                if head_orients == 1 {
                    best[1] = best[0];
                    best_parent[1] = best_parent[0];
                }
                self.value[base] = best[0];
                self.value[base + 1] = best[1];
                self.parent[base] = best_parent[0];
                self.parent[base + 1] = best_parent[1];
            }
        }

        // Top level: the switch can never start the route.
        let mut best = INF;
        let mut start = (0usize, 0usize);
        for i in 1..m {
            let c = inst.customer(i);
            for (a, &o) in orients.iter().enumerate() {
                let open = inst.costs.arc(Vehicle::One, inst.fleet.v1_start, c.entry_node(o));
                let v = open.value().saturating_add(self.value[((full ^ (1 << i)) * m + i) * 2 + a]);
                if v < best {
                    best = v;
                    start = (i, a);
                }
            }
        }

        if best == INF {
            return Err(if self.partition_exists(inst, fixed1_mask, fixed2_mask, opts) {
                SolveError::NoFiniteRoute
            } else {
                SolveError::Infeasible
            });
        }

        let visits = self.reconstruct_visits(m, start)?;
        let solution = TwoRouteSolution::evaluated(inst, visits)?;
        if solution.cost.value() != best {
            return Err(SolveError::CorruptParentChain);
        }
        Ok(solution)
    }

    #[inline]
    fn trans_idx(v: usize, m: usize, i: usize, j: usize, oi: usize, oj: usize) -> usize {
        ((v * m + i) * m + j) * 4 + oi * 2 + oj
    }

    fn reconstruct_visits(&self, m: usize, start: (usize, usize)) -> Result<Vec<Visit>, SolveError> {
        let orients = [Orientation::FromLeft, Orientation::FromRight];
        let full = (1usize << m) - 1;
        let (mut i, mut a) = start;
        let mut mask = full ^ (1 << i);
        let mut visits: Vec<Visit> = Vec::with_capacity(m);
        visits.push((i as CustomerId, orients[a]));
        for _ in 1..m {
            let p = self.parent[(mask * m + i) * 2 + a];
            let j = (p >> 1) as usize;
            let b = (p & 1) as usize;
            if mask & (1 << j) == 0 {
                return Err(SolveError::CorruptParentChain);
            }
            visits.push((j as CustomerId, orients[b]));
            mask ^= 1 << j;
            i = j;
            a = b;
        }
        if mask != 0 {
            return Err(SolveError::CorruptParentChain);
        }
        Ok(visits)
    }

    /// Whether any split of the customers over the two vehicles satisfies
    /// capacities, fixed items and the non-empty-route rules. Distinguishes a
    /// genuinely infeasible instance from one whose routes are all blocked by
    /// forbidden arcs.
    fn partition_exists(
        &self,
        inst: &Instance,
        fixed1_mask: usize,
        fixed2_mask: usize,
        opts: &DpOptions,
    ) -> bool {
        let n = inst.num_customers();
        let m = n + 1;
        let full_real = ((1usize << m) - 1) & !1;
        let total = inst.total_demand();
        let [cap1, cap2] = inst.fleet.capacity;
        let mut s = full_real;
        loop {
            // `s` is the candidate vehicle-1 set, iterated over all submasks.
            let ok = s != 0
                && (s != full_real || opts.allow_empty_second)
                && fixed1_mask & !s == 0
                && fixed2_mask & s == 0
                && self.weight[s] <= cap1
                && total - self.weight[s] <= cap2;
            if ok {
                return true;
            }
            if s == 0 {
                return false;
            }
            s = (s - 1) & full_real;
        }
    }
}

impl Default for DpSolver {
    fn default() -> Self {
        DpSolver::new()
    }
}

#[inline]
fn head_demand(inst: &Instance, i: usize) -> u64 {
    if i == SWITCH_ID {
        0
    } else {
        inst.customers[i - 1].demand
    }
}

/// One-shot exact solve; allocates fresh tables. Use [`DpSolver`] directly
/// when solving many instances.
pub fn solve_exact(inst: &Instance, opts: &DpOptions) -> Result<TwoRouteSolution, SolveError> {
    DpSolver::new().solve(inst, opts)
}
