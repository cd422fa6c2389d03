//! End-to-end flows through the harness: file round-trips, generated
//! benchmark instances, the multistart driver and report output.

use std::fs;

use proptest::prelude::*;

use twovrp::aggregate::{disassemble, lift_solution};
use twovrp::harness::format::{
    instance_to_string, parse_instance, write_instance, InstanceBody, ParsedInstance,
};
use twovrp::harness::generate::{generate_instance, generated_name, random_vrp, SynthConfig};
use twovrp::harness::multistart::{multistart_solve, SolverParams};
use twovrp::harness::report::{compare_report, parse_baselines, ResultRow};
use twovrp::model::{check_feasibility, evaluate_solution, Orientation, TwoRouteSolution, SWITCH_ID};
use twovrp::sliding::sweep_positions;
use twovrp::two_period::{build_instance, check_balance, extract_tours, tour_length};

#[test]
fn instance_files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();

    let tp = generate_instance(20, 4, 5, 1000);
    let parsed = ParsedInstance { name: generated_name(20, 4, 5), body: InstanceBody::Tsp(tp) };
    let path = dir.path().join("g.2tsp");
    write_instance(&parsed, &path).unwrap();
    assert_eq!(parse_instance(&path).unwrap(), parsed);

    let inst = random_vrp(3, &SynthConfig { customers: 6, ..SynthConfig::default() });
    let parsed = ParsedInstance { name: "synth".into(), body: InstanceBody::Vrp(inst) };
    let path = dir.path().join("s.2vrp");
    write_instance(&parsed, &path).unwrap();
    assert_eq!(parse_instance(&path).unwrap(), parsed);
}

#[test]
fn generated_tsp_solves_balanced() {
    let tp = generate_instance(16, 3, 9, 500);
    let inst = build_instance(&tp).unwrap();
    assert_eq!(inst.num_customers(), 13 + 6);
    let params = SolverParams { s: 2, l: 1, restarts: 3, seed: 4, ..SolverParams::default() };
    let out = multistart_solve(&inst, &params).unwrap();
    assert!(check_feasibility(&inst, &out.best).is_feasible());

    let tours = extract_tours(&out.best, &tp);
    assert!(check_balance(&tours, &tp));
    assert_eq!(tours[0][0], tp.depot);
    assert_eq!(tours[1][0], tp.depot);
    let total = tour_length(&tp, &tours[0]) + tour_length(&tp, &tours[1]);
    assert_eq!(total, out.best.cost);
    for b in &tp.both_periods {
        assert!(tours[0].contains(b) && tours[1].contains(b));
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let tp = generate_instance(14, 2, 11, 400);
    let inst = build_instance(&tp).unwrap();
    let params = SolverParams { s: 2, l: 1, restarts: 4, seed: 8, ..SolverParams::default() };
    let a = multistart_solve(&inst, &params).unwrap();
    let b = multistart_solve(&inst, &params).unwrap();
    assert_eq!(a.best, b.best);

    let rows = vec![ResultRow { instance: "x".into(), cost: a.best.cost.value(), time_s: 1.0 }];
    let baselines = parse_baselines("x,100000,99000\n").unwrap();
    let r1 = compare_report(&rows, &baselines);
    let r2 = compare_report(&rows, &baselines);
    assert_eq!(r1.to_csv(), r2.to_csv());
    assert_eq!(r1.to_text(), r2.to_text());
}

#[test]
fn reference_baselines_ship_complete() {
    let text = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/reference_baselines.csv"
    ))
    .unwrap();
    let rows = parse_baselines(&text).unwrap();
    assert_eq!(rows.len(), 60);
    let i29 = rows.iter().find(|r| r.instance == "I29").unwrap();
    assert_eq!((i29.pc, i29.pc_manual), (Some(26890), Some(26466)));
}

#[test]
fn solution_text_is_stable() {
    let tp = generate_instance(12, 2, 2, 300);
    let inst = build_instance(&tp).unwrap();
    let params = SolverParams { s: 1, l: 1, restarts: 2, seed: 3, ..SolverParams::default() };
    let out = multistart_solve(&inst, &params).unwrap();
    let tours = extract_tours(&out.best, &tp);
    let a = twovrp::harness::format::solution_to_string("x", &out.best, Some(&tours));
    let b = twovrp::harness::format::solution_to_string("x", &out.best, Some(&tours));
    assert_eq!(a, b);
    assert!(a.contains("COST:"));
    assert!(a.contains("PERIOD_1:"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Lifting any feasible small-instance solution preserves cost exactly
    // and yields a feasible full solution.
    #[test]
    fn lift_preserves_cost_and_feasibility(seed in 0u64..400, s in 1usize..4) {
        let tp = generate_instance(18 + (seed % 8) as usize, 2, seed, 600);
        let inst = build_instance(&tp).unwrap();
        let params = SolverParams { s: 1, l: 2, restarts: 1, seed, skip_sliding: true, ..SolverParams::default() };
        let sol = multistart_solve(&inst, &params).unwrap().best;
        let (r1, r2) = sol.routes();
        let pairs = sweep_positions(r1.len(), r2.len(), &twovrp::sliding::DisassemblyConfig { s, l: 1 });
        prop_assume!(!pairs.is_empty());
        let (pos1, pos2) = pairs[seed as usize % pairs.len()];
        let d = disassemble(&sol, &inst, s, pos1, pos2).unwrap();
        prop_assert_eq!(d.size_with_switch(), 2 * s + 6);

        // Identity arrangement reproduces the original exactly.
        let identity = TwoRouteSolution::evaluated(&d.small, d.identity_visits()).unwrap();
        prop_assert_eq!(identity.cost, sol.cost);
        let lifted = lift_solution(&inst, &d, &identity).unwrap();
        prop_assert_eq!(lifted.visits.clone(), sol.visits.clone());

        // A shuffled-but-feasible small arrangement lifts exactly too.
        let mut arrangement = d.identity_visits();
        let q = arrangement.iter().position(|&(id, _)| id == SWITCH_ID).unwrap();
        if q >= 2 {
            arrangement.swap(0, 1);
        }
        for v in arrangement.iter_mut() {
            if v.0 != SWITCH_ID && (v.0 + seed as usize) % 3 == 0 {
                v.1 = v.1.flipped();
            }
        }
        if let Ok(small) = TwoRouteSolution::evaluated(&d.small, arrangement) {
            if small.cost.is_finite() {
                let lifted = lift_solution(&inst, &d, &small).unwrap();
                prop_assert_eq!(lifted.cost, small.cost);
                let report = check_feasibility(&inst, &lifted);
                prop_assert_eq!(report.loads, small.loads);
            }
        }
    }

    // Orientation of the switch stays left and every reported cost
    // re-evaluates exactly after a full multistart run.
    #[test]
    fn multistart_outputs_reevaluate(seed in 0u64..200) {
        let inst = random_vrp(seed, &SynthConfig {
            customers: 9,
            tight_capacity: false,
            infinite_arc_fraction: 0.0,
            ..SynthConfig::default()
        });
        let params = SolverParams { s: 1, l: 1, restarts: 2, seed, ..SolverParams::default() };
        if let Ok(out) = multistart_solve(&inst, &params) {
            let (cost, loads) = evaluate_solution(&inst, &out.best.visits).unwrap();
            prop_assert_eq!(cost, out.best.cost);
            prop_assert_eq!(loads, out.best.loads);
            let q = out.best.switch_position();
            prop_assert_eq!(out.best.visits[q].1, Orientation::FromLeft);
        }
    }
}

#[test]
fn instance_text_matches_expected_shape() {
    let tp = generate_instance(10, 2, 1, 100);
    let text = instance_to_string(&ParsedInstance {
        name: "shape".into(),
        body: InstanceBody::Tsp(tp),
    });
    assert!(text.starts_with("NAME: shape\nTYPE: 2TSP\nDIMENSION: 10\n"));
    assert!(text.contains("NODE_COORD_SECTION"));
    assert!(text.contains("BOTH_PERIODS_SECTION"));
    assert!(text.trim_end().ends_with("EOF"));
}
