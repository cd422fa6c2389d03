//! Shared fixtures for unit tests.

use crate::model::*;

/// All four depots at coordinate 0, point customers at 1, 2, 3 with demand 1,
/// |x_i - x_j| arc costs for both vehicles.
pub fn line_instance(capacity: [u64; 2]) -> Instance {
    let coords = [0i64, 1, 2, 3];
    let dim = coords.len();
    let mut m = vec![Cost::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            m[i * dim + j] = Cost::new((coords[i] - coords[j]).unsigned_abs());
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
    let customers = (1..=3)
        .map(|id| SegmentCustomer::point(id, NodeId(id), 1, None))
        .collect();
    Instance::new(fleet, costs, customers).unwrap()
}

/// Four customers, two of them genuine segments with asymmetric traversal
/// costs, on an asymmetric matrix.
pub fn segment_instance() -> Instance {
    let dim = 8;
    let mut m1 = vec![Cost::ZERO; dim * dim];
    let mut m2 = vec![Cost::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                m1[i * dim + j] = Cost::new(((7 * i + 3 * j + 5) % 17 + 1) as u64);
                m2[i * dim + j] = Cost::new(((5 * i + 11 * j + 2) % 19 + 1) as u64);
            }
        }
    }
    let costs = CostModel::new(dim, m1, m2).unwrap();
    let fleet = Fleet {
        capacity: [6, 6],
        v1_start: NodeId(0),
        v1_end: NodeId(0),
        v2_start: NodeId(7),
        v2_end: NodeId(7),
    };
    let customers = vec![
        SegmentCustomer::atomic(
            1,
            NodeId(1),
            NodeId(2),
            [[Cost::new(4), Cost::new(9)], [Cost::new(6), Cost::new(2)]],
            2,
            None,
        ),
        SegmentCustomer::point(2, NodeId(3), 1, None),
        SegmentCustomer::atomic(
            3,
            NodeId(4),
            NodeId(5),
            [[Cost::new(1), Cost::new(8)], [Cost::new(3), Cost::new(12)]],
            2,
            None,
        ),
        SegmentCustomer::point(4, NodeId(6), 1, None),
    ];
    Instance::new(fleet, costs, customers).unwrap()
}

/// Visit list with every customer entered from the left.
pub fn visits(ids: &[CustomerId]) -> Vec<Visit> {
    ids.iter().map(|&id| (id, Orientation::FromLeft)).collect()
}
