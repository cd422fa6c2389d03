//! Intra-route local search: first-improvement 2-opt and Or-opt applied to a
//! single vehicle's route between the solver's partition-improvement rounds.
//!
//! Segment reversal flips member orientations (left and right traversal costs
//! swap) and is evaluated exactly on asymmetric matrices by recomputing the
//! route cost, never by a symmetric shortcut.

use crate::model::{Cost, Instance, TwoRouteSolution, Vehicle, Visit, SWITCH_ID};

/// Cost of one vehicle's route between its fixed anchors: vehicle 1 runs from
/// its start depot to the switch entry, vehicle 2 from the switch exit to its
/// end depot.
pub fn route_cost(inst: &Instance, route: &[Visit], vehicle: Vehicle) -> Cost {
    let (start, end) = match vehicle {
        Vehicle::One => (inst.fleet.v1_start, inst.fleet.v1_end),
        Vehicle::Two => (inst.fleet.v2_start, inst.fleet.v2_end),
    };
    if route.is_empty() {
        return inst.costs.arc(vehicle, start, end);
    }
    let mut cost = inst.costs.arc(vehicle, start, inst.customer(route[0].0).entry_node(route[0].1));
    for (t, &(id, o)) in route.iter().enumerate() {
        let c = inst.customer(id);
        cost += c.traverse_cost(vehicle, o);
        let exit = c.exit_node(o);
        let next = match route.get(t + 1) {
            Some(&(nid, no)) => inst.customer(nid).entry_node(no),
            None => end,
        };
        cost += inst.costs.arc(vehicle, exit, next);
    }
    cost
}

fn reversed_segment(route: &[Visit], i: usize, j: usize) -> Vec<Visit> {
    let mut out = route.to_vec();
    out[i..=j].reverse();
    for v in &mut out[i..=j] {
        v.1 = v.1.flipped();
    }
    out
}

/// Iterates 2-opt (segment reversal with orientation flips) and Or-opt
/// (relocation of 1-3 customers, forward or reversed) to a local optimum on
/// one vehicle's route, first improvement. The other route is untouched and
/// no customer crosses the switch.
pub fn improve_route(inst: &Instance, sol: &TwoRouteSolution, vehicle: Vehicle) -> TwoRouteSolution {
    let (r1, r2) = sol.routes();
    let mut route: Vec<Visit> = match vehicle {
        Vehicle::One => r1.to_vec(),
        Vehicle::Two => r2.to_vec(),
    };
    if route.len() < 2 {
        return sol.clone();
    }
    let mut cost = route_cost(inst, &route, vehicle);

    let mut improved = true;
    while improved {
        improved = false;

        // 2-opt; i == j flips a single customer's orientation.
        'twoopt: for i in 0..route.len() {
            for j in i..route.len() {
                let candidate = reversed_segment(&route, i, j);
                let c = route_cost(inst, &candidate, vehicle);
                if c < cost {
                    route = candidate;
                    cost = c;
                    improved = true;
                    break 'twoopt;
                }
            }
        }
        if improved {
            continue;
        }

        // Or-opt: move a short segment elsewhere, in either direction.
        'oropt: for seg_len in 1..=3usize.min(route.len() - 1) {
            for i in 0..=route.len() - seg_len {
                let mut rest = route.clone();
                let segment: Vec<Visit> = rest.drain(i..i + seg_len).collect();
                let reversed: Vec<Visit> =
                    segment.iter().rev().map(|&(id, o)| (id, o.flipped())).collect();
                for p in 0..=rest.len() {
                    for (forward, seg) in [(true, &segment), (false, &reversed)] {
                        if p == i && forward {
                            continue; // no-op
                        }
                        let mut candidate = rest.clone();
                        candidate.splice(p..p, seg.iter().copied());
                        let c = route_cost(inst, &candidate, vehicle);
                        if c < cost {
                            route = candidate;
                            cost = c;
                            improved = true;
                            break 'oropt;
                        }
                    }
                }
            }
        }
    }

    let mut visits: Vec<Visit> = Vec::with_capacity(sol.visits.len());
    match vehicle {
        Vehicle::One => {
            visits.extend(route);
            visits.push((SWITCH_ID, crate::model::Orientation::FromLeft));
            visits.extend_from_slice(r2);
        }
        Vehicle::Two => {
            visits.extend_from_slice(r1);
            visits.push((SWITCH_ID, crate::model::Orientation::FromLeft));
            visits.extend(route);
        }
    }
    TwoRouteSolution::evaluated(inst, visits).expect("permuting one route keeps the solution valid")
}

/// Runs [`improve_route`] on both vehicles in turn.
pub fn improve_both(inst: &Instance, sol: &TwoRouteSolution) -> TwoRouteSolution {
    let sol = improve_route(inst, sol, Vehicle::One);
    improve_route(inst, &sol, Vehicle::Two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CostModel, Fleet, Instance, NodeId, Orientation, SegmentCustomer};
    use crate::testfix::visits;

    fn euclid_instance(points: &[(i64, i64)], capacity: [u64; 2]) -> Instance {
        let dim = points.len();
        let mut m = vec![Cost::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let dx = (points[i].0 - points[j].0) as f64;
                let dy = (points[i].1 - points[j].1) as f64;
                m[i * dim + j] = Cost::new((dx * dx + dy * dy).sqrt().round() as u64);
            }
        }
        let costs = CostModel::shared(dim, m).unwrap();
        let fleet = Fleet {
            capacity,
            v1_start: NodeId(0),
            v1_end: NodeId(0),
            v2_start: NodeId(0),
            v2_end: NodeId(0),
        };
        let customers = (1..dim)
            .map(|id| SegmentCustomer::point(id, NodeId(id), 1, None))
            .collect();
        Instance::new(fleet, costs, customers).unwrap()
    }

    #[test]
    fn crossing_is_removed() {
        // Depot at origin; a square visited in crossing order.
        let inst = euclid_instance(
            &[(0, 0), (0, 100), (100, 100), (100, 0), (50, 200)],
            [4, 4],
        );
        let crossing = TwoRouteSolution::evaluated(&inst, visits(&[1, 3, 2, 0, 4])).unwrap();
        let improved = improve_route(&inst, &crossing, Vehicle::One);
        assert!(improved.cost < crossing.cost);
        // Vehicle 2 untouched.
        assert_eq!(improved.routes().1, crossing.routes().1);
        // No 2-opt improving pair remains.
        let route = improved.routes().0.to_vec();
        let base = route_cost(&inst, &route, Vehicle::One);
        for i in 0..route.len() {
            for j in i..route.len() {
                assert!(route_cost(&inst, &reversed_segment(&route, i, j), Vehicle::One) >= base);
            }
        }
    }

    #[test]
    fn local_optimum_is_fixpoint() {
        let inst = euclid_instance(&[(0, 0), (10, 0), (20, 5), (30, 0), (0, 30)], [4, 4]);
        let sol = TwoRouteSolution::evaluated(&inst, visits(&[1, 2, 3, 0, 4])).unwrap();
        let once = improve_route(&inst, &sol, Vehicle::One);
        let twice = improve_route(&inst, &once, Vehicle::One);
        assert_eq!(once.visits, twice.visits);
        assert_eq!(once.cost, twice.cost);
    }

    #[test]
    fn asymmetric_segments_reevaluate_exactly() {
        let inst = crate::testfix::segment_instance();
        let sol = TwoRouteSolution::evaluated(
            &inst,
            vec![
                (1, Orientation::FromRight),
                (2, Orientation::FromLeft),
                (SWITCH_ID, Orientation::FromLeft),
                (3, Orientation::FromLeft),
                (4, Orientation::FromLeft),
            ],
        )
        .unwrap();
        for vehicle in [Vehicle::One, Vehicle::Two] {
            let improved = improve_route(&inst, &sol, vehicle);
            assert!(improved.cost <= sol.cost);
            // The stored cost matches a fresh evaluation and the route is a
            // permutation of the same customers.
            let (r_old, r_new) = match vehicle {
                Vehicle::One => (sol.routes().0, improved.routes().0),
                Vehicle::Two => (sol.routes().1, improved.routes().1),
            };
            let mut old_ids: Vec<_> = r_old.iter().map(|v| v.0).collect();
            let mut new_ids: Vec<_> = r_new.iter().map(|v| v.0).collect();
            old_ids.sort_unstable();
            new_ids.sort_unstable();
            assert_eq!(old_ids, new_ids);
        }
    }
}
