//! Instance generators: benchmark-style 2-period TSP instances and fully
//! random 2VRP instances for solver verification. Everything is a pure
//! function of its seed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::harness::format::euclidean_matrix;
use crate::model::{Cost, CostModel, Fleet, Instance, NodeId, SegmentCustomer, Vehicle};
use crate::two_period::TwoPeriodInstance;

/// Benchmark-style balanced 2TSP: `n_total` points with integer coordinates
/// uniform in [0, coord_range]^2, nearest-integer Euclidean distances. Point
/// 0 is the depot and counts among the `m` both-period customers, so the
/// encoded 2VRP has `n_total - m` free unit-demand customers.
pub fn generate_instance(n_total: usize, m: usize, seed: u64, coord_range: i64) -> TwoPeriodInstance {
    assert!(m >= 1 && m < n_total, "need 1 <= m < n_total");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<(i64, i64)> = (0..n_total)
        .map(|_| (rng.gen_range(0..=coord_range), rng.gen_range(0..=coord_range)))
        .collect();

    let mut others: Vec<usize> = (1..n_total).collect();
    others.shuffle(&mut rng);
    let mut both: Vec<usize> = others.into_iter().take(m - 1).collect();
    both.push(0);
    both.sort_unstable();
    let single: Vec<usize> = (0..n_total).filter(|i| !both.contains(i)).collect();

    TwoPeriodInstance {
        depot: 0,
        both_periods: both,
        single_period: single,
        dim: n_total,
        distances: euclidean_matrix(&coords),
        balanced: true,
        coords: Some(coords),
    }
}

/// Canonical file name for a generated instance.
pub fn generated_name(n_total: usize, m: usize, seed: u64) -> String {
    format!("gen_n{n_total}_m{m}_s{seed}")
}

/// Knobs for the random 2VRP generator.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub customers: usize,
    /// Fraction of customers modeled as genuine segments (distinct ends,
    /// asymmetric traversal costs).
    pub segment_fraction: f64,
    /// Use two independent asymmetric matrices instead of one symmetric one.
    pub asymmetric: bool,
    /// Fraction of arcs set to the infinity sentinel.
    pub infinite_arc_fraction: f64,
    /// Fraction of customers pre-assigned to a vehicle.
    pub fixed_fraction: f64,
    /// Capacities close to half the total demand instead of slack ones.
    pub tight_capacity: bool,
    /// Distinct depot nodes per vehicle instead of one shared depot.
    pub multi_depot: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            customers: 6,
            segment_fraction: 0.4,
            asymmetric: true,
            infinite_arc_fraction: 0.0,
            fixed_fraction: 0.2,
            tight_capacity: true,
            multi_depot: false,
        }
    }
}

/// A random 2VRP drawn from `cfg`, deterministic in `seed`.
pub fn random_vrp(seed: u64, cfg: &SynthConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.customers;

    let mut next_node = 0usize;
    let mut alloc = |k: usize| {
        let start = next_node;
        next_node += k;
        start
    };
    let depots: [usize; 4] = if cfg.multi_depot {
        [alloc(1), alloc(1), alloc(1), alloc(1)]
    } else {
        let d = alloc(1);
        [d; 4]
    };

    struct Draft {
        left: usize,
        right: usize,
        segment: bool,
    }
    let drafts: Vec<Draft> = (0..n)
        .map(|_| {
            if rng.gen_bool(cfg.segment_fraction) {
                let left = alloc(2);
                Draft { left, right: left + 1, segment: true }
            } else {
                let node = alloc(1);
                Draft { left: node, right: node, segment: false }
            }
        })
        .collect();
    let dim = next_node;

    let mut m1 = vec![Cost::ZERO; dim * dim];
    let mut m2 = vec![Cost::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let draw = |rng: &mut ChaCha8Rng| {
                if rng.gen_bool(cfg.infinite_arc_fraction) {
                    Cost::INFINITE
                } else {
                    Cost::new(rng.gen_range(1..=60))
                }
            };
            if cfg.asymmetric {
                m1[i * dim + j] = draw(&mut rng);
                m2[i * dim + j] = draw(&mut rng);
            } else if i < j {
                let a = draw(&mut rng);
                let b = draw(&mut rng);
                m1[i * dim + j] = a;
                m1[j * dim + i] = a;
                m2[i * dim + j] = b;
                m2[j * dim + i] = b;
            }
        }
    }
    let costs = CostModel::new(dim, m1, m2).unwrap();

    let mut total_demand = 0u64;
    let customers: Vec<SegmentCustomer> = drafts
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let mut traverse = [[Cost::ZERO; 2]; 2];
            if d.segment {
                for row in &mut traverse {
                    for slot in row.iter_mut() {
                        *slot = if rng.gen_bool(0.08) {
                            Cost::INFINITE
                        } else {
                            Cost::new(rng.gen_range(0..=30))
                        };
                    }
                }
            }
            let demand = rng.gen_range(0..=8u64);
            total_demand += demand;
            let fixed_to = if rng.gen_bool(cfg.fixed_fraction) {
                Some(if rng.gen_bool(0.5) { Vehicle::One } else { Vehicle::Two })
            } else {
                None
            };
            SegmentCustomer::atomic(k + 1, NodeId(d.left), NodeId(d.right), traverse, demand, fixed_to)
        })
        .collect();

    let capacity = if cfg.tight_capacity {
        let w1 = total_demand / 2 + rng.gen_range(0..=2);
        let w2 = (total_demand - total_demand / 2) + rng.gen_range(0..=2);
        [w1, w2]
    } else {
        [total_demand + 5, total_demand + 5]
    };

    let fleet = Fleet {
        capacity,
        v1_start: NodeId(depots[0]),
        v1_end: NodeId(depots[1]),
        v2_start: NodeId(depots[2]),
        v2_end: NodeId(depots[3]),
    };
    Instance::new(fleet, costs, customers).expect("synthetic instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::format::{instance_to_string, InstanceBody, ParsedInstance};
    use crate::two_period::build_instance;

    #[test]
    fn generated_benchmark_sizes() {
        let tp = generate_instance(48, 8, 7, 10_000);
        let inst = build_instance(&tp).unwrap();
        assert_eq!(inst.num_customers(), 56);
        assert_eq!(inst.fleet.capacity, [20, 20]);

        let tp = generate_instance(48, 24, 7, 10_000);
        let inst = build_instance(&tp).unwrap();
        assert_eq!(inst.num_customers(), 72);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instance(48, 16, 3, 10_000);
        let b = generate_instance(48, 16, 3, 10_000);
        assert_eq!(a, b);
        let fa = instance_to_string(&ParsedInstance {
            name: generated_name(48, 16, 3),
            body: InstanceBody::Tsp(a),
        });
        let fb = instance_to_string(&ParsedInstance {
            name: generated_name(48, 16, 3),
            body: InstanceBody::Tsp(b),
        });
        assert_eq!(fa, fb);
    }

    #[test]
    fn synthetic_instances_are_valid_and_deterministic() {
        let cfg = SynthConfig { customers: 7, ..SynthConfig::default() };
        let a = random_vrp(11, &cfg);
        let b = random_vrp(11, &cfg);
        assert_eq!(a, b);
        assert!(a.total_demand() <= a.fleet.capacity[0] + a.fleet.capacity[1]);
    }
}
