//! Seeded multistart driver: random capacity-respecting allocations, cheapest
//! insertion of fixed customers, intra-route improvement, then alternating
//! partition and route improvement until neither helps. Per-restart RNG
//! streams are derived from the base seed, so sequential and parallel runs
//! return the same best solution.

use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dp::SolveError;
use crate::model::{
    Cost, Instance, Orientation, TwoRouteSolution, Vehicle, Visit, SWITCH_ID,
};
use crate::sliding::{self, DisassemblyConfig, ImproveOptions};
use crate::tour;

#[derive(Debug, Clone)]
pub struct SolverParams {
    pub s: usize,
    pub l: usize,
    pub restarts: usize,
    pub seed: u64,
    pub dp_cap: usize,
    pub time_limit: Option<Duration>,
    /// Worker threads for restarts; 1 runs sequentially.
    pub parallel: usize,
    /// Disable the sliding-subsets phase, leaving random allocation plus
    /// route improvement only. Ablation baseline for benchmarks.
    pub skip_sliding: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            s: 3,
            l: 1,
            restarts: 48,
            seed: 1,
            dp_cap: 20,
            time_limit: None,
            parallel: 1,
            skip_sliding: false,
        }
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
pub struct RestartRecord {
    pub restart: usize,
    pub initial_cost: Cost,
    pub final_cost: Cost,
    pub rounds: usize,
    pub small_solves: usize,
    pub accepted: usize,
}

#[derive(Debug, Clone)]
pub struct MultistartOutcome {
    pub best: TwoRouteSolution,
    pub best_restart: usize,
    pub records: Vec<RestartRecord>,
}

/// Runs the multistart pipeline and returns the cheapest solution across all
/// restarts (ties broken by restart index).
pub fn multistart_solve(inst: &Instance, params: &SolverParams) -> Result<MultistartOutcome, SolveError> {
    assert!(params.restarts >= 1, "restarts must be at least 1");
    let cfg = DisassemblyConfig { s: params.s, l: params.l };
    let start = Instant::now();

    let run = |r: usize| -> Result<(TwoRouteSolution, RestartRecord), SolveError> {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(r as u64 + 1);
        restart_pipeline(inst, &cfg, params, r, &mut rng)
    };

    let within_budget = |start: &Instant| match params.time_limit {
        Some(limit) => start.elapsed() < limit,
        None => true,
    };

    let results: Vec<Result<(TwoRouteSolution, RestartRecord), SolveError>> = if params.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.parallel)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..params.restarts)
                .into_par_iter()
                .filter(|_| within_budget(&start))
                .map(run)
                .collect()
        })
    } else {
        let mut out = Vec::with_capacity(params.restarts);
        for r in 0..params.restarts {
            if !within_budget(&start) && !out.is_empty() {
                break;
            }
            out.push(run(r));
        }
        out
    };

    let mut best: Option<(TwoRouteSolution, usize)> = None;
    let mut records = Vec::with_capacity(results.len());
    let mut last_err = None;
    for result in results {
        match result {
            Ok((sol, record)) => {
                let better = match &best {
                    None => true,
                    Some((b, _)) => sol.cost < b.cost,
                };
                if better {
                    best = Some((sol, record.restart));
                }
                records.push(record);
            }
            Err(e) => last_err = Some(e),
        }
    }
    records.sort_by_key(|r| r.restart);
    match best {
        Some((best, best_restart)) => Ok(MultistartOutcome { best, best_restart, records }),
        None => Err(last_err.unwrap_or(SolveError::Infeasible)),
    }
}

fn restart_pipeline(
    inst: &Instance,
    cfg: &DisassemblyConfig,
    params: &SolverParams,
    restart: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(TwoRouteSolution, RestartRecord), SolveError> {
    let mut sol = random_allocation(inst, rng)?;
    let initial_cost = sol.cost;
    sol = tour::improve_both(inst, &sol);

    let improve_opts = ImproveOptions { dp_cap: params.dp_cap, ..ImproveOptions::default() };
    let mut rounds = 0usize;
    let mut small_solves = 0usize;
    let mut accepted = 0usize;
    if !params.skip_sliding {
        loop {
            rounds += 1;
            let before = sol.cost;
            let (improved, stats) = sliding::improve(inst, &sol, cfg, &improve_opts, None);
            small_solves += stats.small_solves;
            accepted += stats.accepted;
            sol = tour::improve_both(inst, &improved);
            if sol.cost >= before {
                break;
            }
        }
    }

    let record = RestartRecord {
        restart,
        initial_cost,
        final_cost: sol.cost,
        rounds,
        small_solves,
        accepted,
    };
    Ok((sol, record))
}

/// Random assignment of the free customers to the two vehicles respecting
/// capacities, in random route order; the fixed customers are then placed by
/// cheapest insertion into their required route.
fn random_allocation(inst: &Instance, rng: &mut ChaCha8Rng) -> Result<TwoRouteSolution, SolveError> {
    let mut free: Vec<usize> = Vec::new();
    let mut fixed: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut base_load = [0u64; 2];
    for c in &inst.customers {
        match c.fixed_to {
            None => free.push(c.id),
            Some(v) => {
                fixed[v.index()].push(c.id);
                base_load[v.index()] += c.demand;
            }
        }
    }
    let cap = inst.fleet.capacity;
    if base_load[0] > cap[0] || base_load[1] > cap[1] {
        return Err(SolveError::Infeasible);
    }

    let mut routes: Option<[Vec<usize>; 2]> = None;
    for _ in 0..32 {
        let mut order = free.clone();
        order.shuffle(rng);
        let mut load = base_load;
        let mut attempt: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut ok = true;
        for &id in &order {
            let w = inst.customer(id).demand;
            let fits: Vec<usize> = (0..2).filter(|&v| load[v] + w <= cap[v]).collect();
            match fits.as_slice() {
                [] => {
                    ok = false;
                    break;
                }
                &[only] => {
                    load[only] += w;
                    attempt[only].push(id);
                }
                _ => {
                    let v = *fits.choose(rng).unwrap();
                    load[v] += w;
                    attempt[v].push(id);
                }
            }
        }
        if ok {
            routes = Some(attempt);
            break;
        }
    }

    // Repair: largest demands first into the roomier vehicle.
    let mut routes = match routes {
        Some(r) => r,
        None => {
            let mut order = free.clone();
            order.sort_by_key(|&id| std::cmp::Reverse((inst.customer(id).demand, id)));
            let mut load = base_load;
            let mut attempt: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
            for &id in &order {
                let w = inst.customer(id).demand;
                let order_pref = if cap[0] - load[0] >= cap[1] - load[1] { [0, 1] } else { [1, 0] };
                let Some(&v) = order_pref.iter().find(|&&v| load[v] + w <= cap[v]) else {
                    return Err(SolveError::Infeasible);
                };
                load[v] += w;
                attempt[v].push(id);
            }
            attempt
        }
    };

    // The switch may be neither first nor last: both routes need a customer.
    for side in 0..2 {
        if routes[side].is_empty() && fixed[side].is_empty() {
            let other = 1 - side;
            let Some(pos) = routes[other]
                .iter()
                .position(|&id| base_load[side] + inst.customer(id).demand <= cap[side])
            else {
                return Err(SolveError::Infeasible);
            };
            let id = routes[other].remove(pos);
            routes[side].push(id);
        }
    }

    let mut route_visits: [Vec<Visit>; 2] = [
        routes[0].iter().map(|&id| (id, Orientation::FromLeft)).collect(),
        routes[1].iter().map(|&id| (id, Orientation::FromLeft)).collect(),
    ];

    // Cheapest insertion of the fixed customers, deterministic scan order.
    for side in 0..2 {
        let vehicle = if side == 0 { Vehicle::One } else { Vehicle::Two };
        for &id in &fixed[side] {
            let mut best: Option<(Cost, usize, Orientation)> = None;
            for p in 0..=route_visits[side].len() {
                for o in [Orientation::FromLeft, Orientation::FromRight] {
                    let mut candidate = route_visits[side].clone();
                    candidate.insert(p, (id, o));
                    let c = tour::route_cost(inst, &candidate, vehicle);
                    if best.as_ref().is_none_or(|(bc, _, _)| c < *bc) {
                        best = Some((c, p, o));
                    }
                }
            }
            let (_, p, o) = best.expect("insertion position exists");
            route_visits[side].insert(p, (id, o));
        }
    }

    let mut visits = route_visits[0].clone();
    visits.push((SWITCH_ID, Orientation::FromLeft));
    visits.extend(route_visits[1].iter().copied());
    Ok(TwoRouteSolution::evaluated(inst, visits)?)
}
