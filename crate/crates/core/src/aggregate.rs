//! Sub-path aggregation: replace runs of a solution by synthetic segment
//! customers, build the small 2VRP of a disassembly step, and lift small
//! solutions back to full ones.
//!
//! The small instance shares the fleet and cost matrices of the original, so
//! a synthetic customer's entry/exit nodes are real nodes of its first/last
//! member and every small-solution cost re-evaluates exactly as the lifted
//! full solution. The disassembly keeps the small problem at a fixed size of
//! 2s+6 customers (switch included): the two freed windows contribute 2s
//! atomic customers and the remaining runs are cut into exactly five
//! aggregated pieces.

use thiserror::Error;

use crate::model::{
    Cost, CustomerId, Instance, ModelError, Orientation, SegmentCustomer, TwoRouteSolution,
    Vehicle, Visit, SWITCH_ID,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AggregationError {
    #[error("cannot aggregate an empty path")]
    EmptyPath,
    #[error("path members are fixed to different vehicles")]
    MixedFixedVehicles,
    #[error("subset size {s} does not fit routes of {n} customers")]
    SubsetsTooLarge { s: usize, n: usize },
    #[error("illegal window positions ({pos1}, {pos2})")]
    IllegalPositions { pos1: usize, pos2: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Aggregates a consecutive sub-path into one synthetic segment customer.
///
/// The left node is the entry of the first member under its orientation and
/// the right node the exit of the last; the left-to-right traversal cost sums
/// member traversals and connecting arcs per vehicle, and the right-to-left
/// cost is the same computed over the reversed path with flipped
/// orientations.
pub fn aggregate_subpath(
    inst: &Instance,
    path: &[Visit],
    id: CustomerId,
) -> Result<SegmentCustomer, AggregationError> {
    if path.is_empty() {
        return Err(AggregationError::EmptyPath);
    }
    let mut fixed_to: Option<Vehicle> = None;
    let mut demand = 0u64;
    for &(member, _) in path {
        let c = inst.customer(member);
        demand += c.demand;
        if let Some(v) = c.fixed_to {
            if fixed_to.is_some() && fixed_to != Some(v) {
                return Err(AggregationError::MixedFixedVehicles);
            }
            fixed_to = Some(v);
        }
    }

    let directed_cost = |vehicle: Vehicle, visits: &mut dyn Iterator<Item = Visit>| -> Cost {
        let mut total = Cost::ZERO;
        let mut prev_exit = None;
        for (member, orientation) in visits {
            let c = inst.customer(member);
            if let Some(exit) = prev_exit {
                total += inst.costs.arc(vehicle, exit, c.entry_node(orientation));
            }
            total += c.traverse_cost(vehicle, orientation);
            prev_exit = Some(c.exit_node(orientation));
        }
        total
    };

    let first = inst.customer(path[0].0);
    let last = inst.customer(path[path.len() - 1].0);
    let mut traverse = [[Cost::ZERO; 2]; 2];
    for vehicle in [Vehicle::One, Vehicle::Two] {
        traverse[vehicle.index()][0] = directed_cost(vehicle, &mut path.iter().copied());
        traverse[vehicle.index()][1] =
            directed_cost(vehicle, &mut path.iter().rev().map(|&(m, o)| (m, o.flipped())));
    }

    Ok(SegmentCustomer {
        id,
        left: first.entry_node(path[0].1),
        right: last.exit_node(path[path.len() - 1].1),
        traverse,
        demand,
        fixed_to,
        members: path.to_vec(),
    })
}

/// The small 2VRP of one disassembly step plus the bookkeeping needed to
/// expand its solutions back to the original customer set.
#[derive(Debug, Clone)]
pub struct Disassembly {
    pub small: Instance,
    /// Member list of each small customer, indexed by small id - 1.
    pub mapping: Vec<Vec<Visit>>,
    /// The solution the step was cut from.
    pub origin: TwoRouteSolution,
    /// Small ids in original tour order on vehicle 1's side.
    route1_ids: Vec<CustomerId>,
    /// Small ids in original tour order on vehicle 2's side.
    route2_ids: Vec<CustomerId>,
}

/// One contiguous piece of the solution remainder during a disassembly.
struct Piece {
    start: usize,
    members: Vec<Visit>,
    between_windows: bool,
}

/// Cuts `sol` into the small 2VRP of window positions (`pos1`, `pos2`).
///
/// Positions are 1-based over the solution with the switch removed. The
/// first window must contain a vehicle-1 customer and the second a vehicle-2
/// customer; both windows hold `s` consecutive customers. The windows become
/// atomic customers, the remaining runs (never spanning the old switch) are
/// aggregated and cut into exactly five pieces, so the small instance always
/// has 2s+6 customers counting the switch.
pub fn disassemble(
    sol: &TwoRouteSolution,
    inst: &Instance,
    s: usize,
    pos1: usize,
    pos2: usize,
) -> Result<Disassembly, AggregationError> {
    let switch_at = sol.switch_position();
    let tour: Vec<Visit> = sol
        .visits
        .iter()
        .copied()
        .filter(|&(id, _)| id != SWITCH_ID)
        .collect();
    let n = tour.len();
    let k1 = switch_at; // customers before the switch
    if s == 0 || n < 2 * s + 5 {
        return Err(AggregationError::SubsetsTooLarge { s, n });
    }
    let legal = pos1 >= 1
        && pos1 <= k1
        && pos2 >= pos1 + s
        && pos2 + s - 1 <= n
        && pos2 + s > k1 + 1;
    if !legal {
        return Err(AggregationError::IllegalPositions { pos1, pos2 });
    }

    let s1 = (pos1 - 1)..(pos1 - 1 + s);
    let s2 = (pos2 - 1)..(pos2 - 1 + s);

    // Remainder runs, split at the old vehicle boundary.
    let mut pieces: Vec<Piece> = Vec::new();
    let mut push_run = |range: std::ops::Range<usize>, between: bool| {
        if range.is_empty() {
            return;
        }
        let (r1, r2) = if range.start < k1 && range.end > k1 {
            (range.start..k1, k1..range.end)
        } else {
            (range.clone(), range.end..range.end)
        };
        for r in [r1, r2] {
            if !r.is_empty() {
                pieces.push(Piece {
                    start: r.start,
                    members: tour[r].to_vec(),
                    between_windows: between,
                });
            }
        }
    };
    push_run(0..s1.start, false);
    push_run(s1.end..s2.start, true);
    push_run(s2.end..n, false);

    // Cut runs until exactly five pieces remain; prefer the single run
    // separating the windows, otherwise the longest one.
    while pieces.len() < 5 {
        let single_separator = {
            let mut it = pieces.iter().enumerate().filter(|(_, p)| p.between_windows);
            match (it.next(), it.next()) {
                (Some((k, p)), None) if p.members.len() >= 2 => Some(k),
                _ => None,
            }
        };
        let target = single_separator.or_else(|| {
            pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| p.members.len() >= 2)
                .max_by(|(ka, a), (kb, b)| {
                    a.members.len().cmp(&b.members.len()).then(kb.cmp(ka))
                })
                .map(|(k, _)| k)
        });
        let Some(k) = target else {
            return Err(AggregationError::SubsetsTooLarge { s, n });
        };
        let tail = pieces[k].members.pop().expect("piece has at least two members");
        let tail_piece = Piece {
            start: pieces[k].start + pieces[k].members.len(),
            members: vec![tail],
            between_windows: pieces[k].between_windows,
        };
        pieces.insert(k + 1, tail_piece);
    }

    // Assemble all entities (pieces and window atoms) in tour order.
    let mut entities: Vec<(usize, Vec<Visit>)> = pieces
        .into_iter()
        .map(|p| (p.start, p.members))
        .chain(s1.clone().map(|i| (i, vec![tour[i]])))
        .chain(s2.clone().map(|i| (i, vec![tour[i]])))
        .collect();
    entities.sort_by_key(|&(start, _)| start);

    let mut customers = Vec::with_capacity(entities.len());
    let mut mapping = Vec::with_capacity(entities.len());
    let mut route1_ids = Vec::new();
    let mut route2_ids = Vec::new();
    for (next_id, (start, members)) in entities.into_iter().enumerate() {
        let id = next_id + 1;
        customers.push(aggregate_subpath(inst, &members, id)?);
        mapping.push(members);
        if start < k1 {
            route1_ids.push(id);
        } else {
            route2_ids.push(id);
        }
    }

    let small = Instance::new(inst.fleet.clone(), inst.costs.clone(), customers)?;
    Ok(Disassembly { small, mapping, origin: sol.clone(), route1_ids, route2_ids })
}

impl Disassembly {
    /// The small-instance visit sequence that reproduces the original
    /// solution unchanged.
    pub fn identity_visits(&self) -> Vec<Visit> {
        let mut visits: Vec<Visit> = Vec::with_capacity(self.mapping.len() + 1);
        visits.extend(self.route1_ids.iter().map(|&id| (id, Orientation::FromLeft)));
        visits.push((SWITCH_ID, Orientation::FromLeft));
        visits.extend(self.route2_ids.iter().map(|&id| (id, Orientation::FromLeft)));
        visits
    }

    /// Number of small-instance customers counting the switch.
    pub fn size_with_switch(&self) -> usize {
        self.small.num_customers() + 1
    }
}

/// Expands a small-instance solution to the original customer set. A
/// synthetic customer visited from the right emits its members in reverse
/// order with flipped orientations.
pub fn lift_solution(
    inst: &Instance,
    d: &Disassembly,
    small_sol: &TwoRouteSolution,
) -> Result<TwoRouteSolution, ModelError> {
    let mut visits: Vec<Visit> = Vec::with_capacity(d.origin.visits.len());
    for &(id, orientation) in &small_sol.visits {
        if id == SWITCH_ID {
            visits.push((SWITCH_ID, orientation));
            continue;
        }
        let members = &d.mapping[id - 1];
        match orientation {
            Orientation::FromLeft => visits.extend(members.iter().copied()),
            Orientation::FromRight => {
                visits.extend(members.iter().rev().map(|&(m, o)| (m, o.flipped())))
            }
        }
    }
    TwoRouteSolution::evaluated(inst, visits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_feasibility, evaluate_solution, NodeId};
    use crate::testfix::{line_instance, segment_instance, visits};

    #[test]
    fn two_point_path() {
        let inst = line_instance([3, 3]);
        let path = visits(&[1, 2]);
        let agg = aggregate_subpath(&inst, &path, 1).unwrap();
        assert_eq!(agg.left, NodeId(1));
        assert_eq!(agg.right, NodeId(2));
        assert_eq!(agg.demand, 2);
        for v in 0..2 {
            assert_eq!(agg.traverse[v][0], Cost::new(1));
            assert_eq!(agg.traverse[v][1], Cost::new(1));
        }
    }

    #[test]
    fn single_member_orientation_folds() {
        let inst = segment_instance();
        let c = inst.customer(1).clone();
        let agg = aggregate_subpath(&inst, &[(1, Orientation::FromRight)], 1).unwrap();
        assert_eq!(agg.left, c.right);
        assert_eq!(agg.right, c.left);
        for v in 0..2 {
            assert_eq!(agg.traverse[v][0], c.traverse[v][1]);
            assert_eq!(agg.traverse[v][1], c.traverse[v][0]);
        }
    }

    #[test]
    fn infinity_propagates_into_reverse_length() {
        // A segment whose right-to-left traversal is forbidden: aggregating it
        // forward makes the aggregate's reverse traversal infinite.
        let mut inst = segment_instance();
        inst.customers[0].traverse[0][1] = Cost::INFINITE;
        let agg = aggregate_subpath(&inst, &visits(&[1, 2]), 1).unwrap();
        assert!(agg.traverse[0][0].is_finite());
        assert_eq!(agg.traverse[0][1], Cost::INFINITE);
    }

    #[test]
    fn mixed_fixed_members_rejected() {
        let mut inst = segment_instance();
        inst.customers[0].fixed_to = Some(Vehicle::One);
        inst.customers[1].fixed_to = Some(Vehicle::Two);
        assert_eq!(
            aggregate_subpath(&inst, &visits(&[1, 2]), 1),
            Err(AggregationError::MixedFixedVehicles)
        );
    }

    fn chain_instance(n: usize) -> Instance {
        // Point customers 1..=n on a line, all depots at node 0.
        let dim = n + 1;
        let mut m = vec![Cost::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                m[i * dim + j] = Cost::new((i as i64 - j as i64).unsigned_abs());
            }
        }
        let costs = crate::model::CostModel::shared(dim, m).unwrap();
        let fleet = crate::model::Fleet {
            capacity: [n as u64, n as u64],
            v1_start: NodeId(0),
            v1_end: NodeId(0),
            v2_start: NodeId(0),
            v2_end: NodeId(0),
        };
        let customers = (1..=n)
            .map(|id| SegmentCustomer::point(id, NodeId(id), 1, None))
            .collect();
        Instance::new(fleet, costs, customers).unwrap()
    }

    #[test]
    fn first_step_has_fixed_size_and_identity_cost() {
        let n = 14;
        let inst = chain_instance(n);
        let mut seq: Vec<CustomerId> = (1..=7).collect();
        seq.push(SWITCH_ID);
        seq.extend(8..=n);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&seq)).unwrap();

        for s in 1..=3 {
            // First sweep step: windows at the start and straddling the switch.
            let pos1 = 1;
            let pos2 = 7 - s + 2;
            let d = disassemble(&sol, &inst, s, pos1, pos2).unwrap();
            assert_eq!(d.size_with_switch(), 2 * s + 6);

            let small_sol =
                TwoRouteSolution::evaluated(&d.small, d.identity_visits()).unwrap();
            assert_eq!(small_sol.cost, sol.cost);
            let lifted = lift_solution(&inst, &d, &small_sol).unwrap();
            assert_eq!(lifted.cost, sol.cost);
            assert_eq!(lifted.visits, sol.visits);
        }
    }

    #[test]
    fn partition_covers_all_customers() {
        let n = 16;
        let inst = chain_instance(n);
        let mut seq: Vec<CustomerId> = (1..=9).collect();
        seq.push(SWITCH_ID);
        seq.extend(10..=n);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&seq)).unwrap();
        let d = disassemble(&sol, &inst, 2, 3, 9).unwrap();
        let mut covered: Vec<CustomerId> =
            d.mapping.iter().flatten().map(|&(id, _)| id).collect();
        covered.sort_unstable();
        assert_eq!(covered, (1..=n).collect::<Vec<_>>());
    }

    #[test]
    fn from_right_visit_expands_reversed() {
        let n = 12;
        let inst = chain_instance(n);
        let mut seq: Vec<CustomerId> = (1..=6).collect();
        seq.push(SWITCH_ID);
        seq.extend(7..=n);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&seq)).unwrap();
        let d = disassemble(&sol, &inst, 1, 1, 7).unwrap();

        // Pick an aggregated customer with more than one member and visit it
        // from the right in an otherwise identity arrangement.
        let (agg_id, members) = d
            .mapping
            .iter()
            .enumerate()
            .map(|(k, m)| (k + 1, m.clone()))
            .find(|(_, m)| m.len() >= 2)
            .unwrap();
        let mut arrangement = d.identity_visits();
        for v in &mut arrangement {
            if v.0 == agg_id {
                v.1 = Orientation::FromRight;
            }
        }
        let small_sol = TwoRouteSolution::evaluated(&d.small, arrangement).unwrap();
        let lifted = lift_solution(&inst, &d, &small_sol).unwrap();
        assert_eq!(lifted.cost, small_sol.cost);
        let expanded: Vec<Visit> = lifted
            .visits
            .iter()
            .copied()
            .filter(|&(id, _)| members.iter().any(|&(m, _)| m == id))
            .collect();
        let expected: Vec<Visit> =
            members.iter().rev().map(|&(m, o)| (m, o.flipped())).collect();
        assert_eq!(expanded, expected);
        assert!(check_feasibility(&inst, &lifted).is_feasible());
    }

    #[test]
    fn whole_route_window_edge_case() {
        // Vehicle 1's route holds exactly s customers, so the first window
        // consumes the whole route and the separator run is empty.
        let n = 13;
        let inst = chain_instance(n);
        let s = 3;
        let mut seq: Vec<CustomerId> = (1..=s).collect();
        seq.push(SWITCH_ID);
        seq.extend(s + 1..=n);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&seq)).unwrap();
        let d = disassemble(&sol, &inst, s, 1, s + 1).unwrap();
        assert_eq!(d.size_with_switch(), 2 * s + 6);
        let small_sol = TwoRouteSolution::evaluated(&d.small, d.identity_visits()).unwrap();
        assert_eq!(small_sol.cost, sol.cost);
        assert_eq!(
            evaluate_solution(&inst, &lift_solution(&inst, &d, &small_sol).unwrap().visits)
                .unwrap()
                .0,
            sol.cost
        );
    }

    #[test]
    fn rejects_small_routes_and_bad_positions() {
        let inst = chain_instance(6);
        let mut seq: Vec<CustomerId> = (1..=3).collect();
        seq.push(SWITCH_ID);
        seq.extend(4..=6);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&seq)).unwrap();
        assert!(matches!(
            disassemble(&sol, &inst, 3, 1, 4),
            Err(AggregationError::SubsetsTooLarge { .. })
        ));

        let inst = chain_instance(14);
        let mut seq: Vec<CustomerId> = (1..=7).collect();
        seq.push(SWITCH_ID);
        seq.extend(8..=14);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&seq)).unwrap();
        // Second window entirely inside vehicle 1's route.
        assert!(matches!(
            disassemble(&sol, &inst, 2, 1, 4),
            Err(AggregationError::IllegalPositions { .. })
        ));
    }
}
