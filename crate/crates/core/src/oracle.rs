//! Exhaustive reference solver for tiny instances.
//!
//! Enumerates every split of the customers over the two vehicles, every
//! ordering on each side and every orientation, scoring candidates purely
//! through [`evaluate_solution`] so the check stays independent of the
//! dynamic-programming transition code.

use crate::dp::SolveError;
use crate::model::{
    evaluate_solution, Instance, Orientation, TwoRouteSolution, Vehicle, Visit, SWITCH_ID,
};

#[derive(Debug, Clone)]
pub struct OracleOptions {
    /// Maximum number of customers (excluding the switch).
    pub cap: usize,
    /// Must match the solver flag to compare results.
    pub allow_empty_second: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { cap: 9, allow_empty_second: false }
    }
}

/// Exact minimum by exhaustive enumeration. Among equal-cost candidates the
/// lexicographically smallest visit sequence is returned.
pub fn brute_force(inst: &Instance, opts: &OracleOptions) -> Result<TwoRouteSolution, SolveError> {
    let n = inst.num_customers();
    if n > opts.cap {
        return Err(SolveError::TooManyCustomers { count: n, cap: opts.cap });
    }
    if n == 0 {
        return Err(SolveError::Infeasible);
    }

    // Orientation only matters when the two ends differ in node or cost.
    let relevant: Vec<bool> = inst
        .customers
        .iter()
        .map(|c| c.left != c.right || c.traverse[0][0] != c.traverse[0][1] || c.traverse[1][0] != c.traverse[1][1])
        .collect();

    let total: u64 = inst.total_demand();
    let [cap1, cap2] = inst.fleet.capacity;
    let mut any_split = false;
    let mut best: Option<TwoRouteSolution> = None;

    for split in 0u32..(1 << n) {
        let mut side1: Vec<usize> = Vec::new();
        let mut side2: Vec<usize> = Vec::new();
        let mut w1 = 0u64;
        let mut ok = true;
        for (k, c) in inst.customers.iter().enumerate() {
            let on_first = split & (1 << k) != 0;
            match c.fixed_to {
                Some(Vehicle::One) if !on_first => ok = false,
                Some(Vehicle::Two) if on_first => ok = false,
                _ => {}
            }
            if on_first {
                w1 += c.demand;
                side1.push(c.id);
            } else {
                side2.push(c.id);
            }
        }
        if !ok || side1.is_empty() || (side2.is_empty() && !opts.allow_empty_second) {
            continue;
        }
        if w1 > cap1 || total - w1 > cap2 {
            continue;
        }
        any_split = true;

        for_each_permutation(&mut side1.clone(), &mut |p1| {
            for_each_permutation(&mut side2.clone(), &mut |p2| {
                let mut seq: Vec<Visit> = Vec::with_capacity(n + 1);
                seq.extend(p1.iter().map(|&id| (id, Orientation::FromLeft)));
                seq.push((SWITCH_ID, Orientation::FromLeft));
                seq.extend(p2.iter().map(|&id| (id, Orientation::FromLeft)));
                try_orientations(inst, &mut seq, 0, &relevant, &mut best);
            });
        });
    }

    match best {
        Some(sol) => Ok(sol),
        None if any_split => Err(SolveError::NoFiniteRoute),
        None => Err(SolveError::Infeasible),
    }
}

fn try_orientations(
    inst: &Instance,
    seq: &mut Vec<Visit>,
    from: usize,
    relevant: &[bool],
    best: &mut Option<TwoRouteSolution>,
) {
    // Find the next visit whose orientation matters.
    let mut pos = from;
    while pos < seq.len() {
        let id = seq[pos].0;
        if id != SWITCH_ID && relevant[id - 1] {
            break;
        }
        pos += 1;
    }
    if pos == seq.len() {
        let (cost, loads) = evaluate_solution(inst, seq).expect("oracle sequences are structurally valid");
        if !cost.is_finite() {
            return;
        }
        let candidate_better = match best {
            None => true,
            Some(b) => cost < b.cost || (cost == b.cost && seq.as_slice() < b.visits.as_slice()),
        };
        if candidate_better {
            *best = Some(TwoRouteSolution { visits: seq.clone(), cost, loads });
        }
        return;
    }
    for o in [Orientation::FromLeft, Orientation::FromRight] {
        seq[pos].1 = o;
        try_orientations(inst, seq, pos + 1, relevant, best);
    }
    seq[pos].1 = Orientation::FromLeft;
}

// Heap's algorithm, visiting permutations in place.
fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    fn go(k: usize, items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            go(k - 1, items, visit);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let k = items.len();
    go(k, items, visit);
}
