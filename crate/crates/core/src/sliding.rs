//! The H(s, l) improvement loop: sweep two windows of s consecutive
//! customers over the combined tour (step l), solve the small 2VRP of every
//! window pair exactly, and accept strict improvements.

use crate::aggregate::{disassemble, lift_solution};
use crate::dp::{DpOptions, DpSolver};
use crate::model::{Cost, Instance, TwoRouteSolution};

/// Parameters of the heuristic family H(s, l): window size and sliding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisassemblyConfig {
    pub s: usize,
    pub l: usize,
}

impl DisassemblyConfig {
    pub fn new(s: usize, l: usize) -> Result<DisassemblyConfig, String> {
        if s < 1 || l < 1 {
            return Err(format!("H({s},{l}): both parameters must be at least 1"));
        }
        Ok(DisassemblyConfig { s, l })
    }

    /// Customers of the small problem, switch included.
    pub fn small_problem_size(&self) -> usize {
        2 * self.s + 6
    }
}

#[derive(Debug, Clone)]
pub struct ImproveOptions {
    pub dp_cap: usize,
    pub allow_empty_second: bool,
    /// Restart the sweep from the first window pair after every accepted
    /// improvement; otherwise resume behind the accepted position.
    pub restart_on_improve: bool,
}

impl Default for ImproveOptions {
    fn default() -> Self {
        ImproveOptions { dp_cap: 20, allow_empty_second: false, restart_on_improve: true }
    }
}

/// One evaluated window pair.
#[derive(Debug, Clone, Copy)]
pub struct StepTrace {
    pub pos1: usize,
    pub pos2: usize,
    pub small_cost: Cost,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ImproveStats {
    /// Window size actually used; smaller than requested on short tours.
    pub effective_s: usize,
    pub sweeps: usize,
    pub small_solves: usize,
    pub accepted: usize,
    /// Instances small enough to solve exactly in one shot.
    pub whole_solve: bool,
}

/// Deterministic enumeration of window pairs for routes of length `k1` and
/// `k2`: the first window start advances by `l`, and for each of them the
/// second window sweeps from the first legal position behind it to the tour
/// end, also by `l`. Every pair keeps at least one vehicle-1 customer in the
/// first window and one vehicle-2 customer in the second.
pub fn sweep_positions(k1: usize, k2: usize, cfg: &DisassemblyConfig) -> Vec<(usize, usize)> {
    let (s, l) = (cfg.s, cfg.l);
    let n = k1 + k2;
    let mut pairs = Vec::new();
    if k1 == 0 || k2 == 0 || n < 2 * s {
        return pairs;
    }
    let mut pos1 = 1;
    while pos1 <= k1 && pos1 + 2 * s - 1 <= n {
        let mut pos2 = (pos1 + s).max((k1 + 2).saturating_sub(s));
        while pos2 + s - 1 <= n {
            pairs.push((pos1, pos2));
            pos2 += l;
        }
        pos1 += l;
    }
    pairs
}

/// Improves `sol` with the sliding-subsets heuristic until a full sweep of
/// all window pairs yields no strict improvement. The output cost never
/// exceeds the input cost. Each evaluated pair is reported to `trace`.
pub fn improve(
    inst: &Instance,
    sol: &TwoRouteSolution,
    cfg: &DisassemblyConfig,
    opts: &ImproveOptions,
    mut trace: Option<&mut dyn FnMut(&StepTrace)>,
) -> (TwoRouteSolution, ImproveStats) {
    let mut stats = ImproveStats { effective_s: cfg.s, ..ImproveStats::default() };
    let mut solver = DpSolver::new();
    let dp_opts = DpOptions { cap: opts.dp_cap, allow_empty_second: opts.allow_empty_second };
    let mut current = sol.clone();

    // Small instances are solved exactly in one shot: the windows would
    // cover everything anyway.
    let n = inst.num_customers();
    if n < cfg.small_problem_size().min(opts.dp_cap) {
        stats.whole_solve = true;
        if let Ok(best) = solver.solve(inst, &dp_opts) {
            if best.cost < current.cost {
                stats.accepted += 1;
                current = best;
            }
        }
        return (current, stats);
    }

    'sweep: loop {
        stats.sweeps += 1;
        let (r1, r2) = current.routes();
        let (k1, k2) = (r1.len(), r2.len());

        // Fall back to a smaller window when the tour cannot host two full
        // ones.
        let mut s_eff = cfg.s.min((opts.dp_cap.saturating_sub(6)) / 2);
        let mut pairs = Vec::new();
        while s_eff >= 1 {
            if n >= 2 * s_eff + 5 {
                pairs = sweep_positions(k1, k2, &DisassemblyConfig { s: s_eff, l: cfg.l });
                if !pairs.is_empty() {
                    break;
                }
            }
            s_eff -= 1;
        }
        if pairs.is_empty() {
            return (current, stats);
        }
        stats.effective_s = stats.effective_s.min(s_eff);

        let mut improved = false;
        for &(pos1, pos2) in &pairs {
            let Ok(d) = disassemble(&current, inst, s_eff, pos1, pos2) else {
                continue;
            };
            stats.small_solves += 1;
            let Ok(small_sol) = solver.solve(&d.small, &dp_opts) else {
                continue;
            };
            let Ok(lifted) = lift_solution(inst, &d, &small_sol) else {
                continue;
            };
            let accepted = lifted.cost < current.cost;
            if let Some(t) = trace.as_deref_mut() {
                t(&StepTrace { pos1, pos2, small_cost: small_sol.cost, accepted });
            }
            if accepted {
                stats.accepted += 1;
                current = lifted;
                improved = true;
                if opts.restart_on_improve {
                    continue 'sweep;
                }
            }
        }
        if !improved {
            return (current, stats);
        }
    }
}

/// [`improve`] with default options and no trace.
pub fn improve_default(
    inst: &Instance,
    sol: &TwoRouteSolution,
    cfg: &DisassemblyConfig,
) -> TwoRouteSolution {
    improve(inst, sol, cfg, &ImproveOptions::default(), None).0
}
