//! Plain-text instance files.
//!
//! Header keys `NAME`, `TYPE` (2VRP or 2TSP), `DIMENSION`, `CAPACITY`,
//! `DEPOTS`, then either a `NODE_COORD_SECTION` (nearest-integer Euclidean
//! distances for both vehicles) or explicit `EDGE_COST_SECTION_V1` /
//! `EDGE_COST_SECTION_V2` matrices with an `INF` sentinel, a
//! `CUSTOMER_SECTION` for 2VRP instances, a `BOTH_PERIODS_SECTION` for 2TSP
//! instances, and a closing `EOF`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::model::{
    Cost, CostModel, Fleet, Instance, NodeId, Orientation, SegmentCustomer, TwoRouteSolution,
    Vehicle, SWITCH_ID,
};
use crate::two_period::TwoPeriodInstance;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid instance: {0}")]
    Model(#[from] crate::model::ModelError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceBody {
    Vrp(Instance),
    Tsp(TwoPeriodInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub name: String,
    pub body: InstanceBody,
}

pub fn parse_instance(path: &Path) -> Result<ParsedInstance, ParseError> {
    parse_instance_str(&fs::read_to_string(path)?)
}

pub fn parse_instance_str(text: &str) -> Result<ParsedInstance, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let mut name = String::from("unnamed");
    let mut typ: Option<String> = None;
    let mut dimension: Option<usize> = None;
    let mut capacity: Option<[u64; 2]> = None;
    let mut depots: Option<[usize; 4]> = None;
    let mut balanced = true;
    let mut coords: Option<Vec<(i64, i64)>> = None;
    let mut matrices: [Option<Vec<Cost>>; 2] = [None, None];
    let mut customers: Option<Vec<SegmentCustomer>> = None;
    let mut both_periods: Option<Vec<usize>> = None;
    let mut saw_eof = false;

    let mut k = 0usize;
    while k < lines.len() {
        let (ln, line) = lines[k];
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            match key {
                "NAME" => name = value.to_string(),
                "TYPE" => typ = Some(value.to_string()),
                "DIMENSION" => {
                    dimension =
                        Some(value.parse().map_err(|_| syntax(ln, "bad DIMENSION value"))?)
                }
                "CAPACITY" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(syntax(ln, "CAPACITY needs two values"));
                    }
                    capacity = Some([
                        parts[0].parse().map_err(|_| syntax(ln, "bad capacity"))?,
                        parts[1].parse().map_err(|_| syntax(ln, "bad capacity"))?,
                    ]);
                }
                "DEPOTS" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 4 {
                        return Err(syntax(ln, "DEPOTS needs four node ids"));
                    }
                    let mut d = [0usize; 4];
                    for (slot, p) in d.iter_mut().zip(parts) {
                        *slot = p.parse().map_err(|_| syntax(ln, "bad depot id"))?;
                    }
                    depots = Some(d);
                }
                "BALANCED" => {
                    balanced = match value {
                        "1" | "yes" | "true" => true,
                        "0" | "no" | "false" => false,
                        _ => return Err(syntax(ln, "BALANCED must be 0 or 1")),
                    }
                }
                _ => return Err(syntax(ln, format!("unknown header key {key}"))),
            }
            k += 1;
            continue;
        }

        let dim = dimension.ok_or_else(|| syntax(ln, "DIMENSION must precede sections"))?;
        match line {
            "NODE_COORD_SECTION" => {
                let mut pts = vec![None; dim];
                for row in 0..dim {
                    let (rln, rline) = *lines
                        .get(k + 1 + row)
                        .ok_or_else(|| syntax(ln, "truncated NODE_COORD_SECTION"))?;
                    let parts: Vec<&str> = rline.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(syntax(rln, "coordinate rows are `id x y`"));
                    }
                    let id: usize = parts[0].parse().map_err(|_| syntax(rln, "bad node id"))?;
                    if id >= dim {
                        return Err(syntax(rln, format!("node id {id} out of range")));
                    }
                    let x: i64 = parts[1].parse().map_err(|_| syntax(rln, "bad x"))?;
                    let y: i64 = parts[2].parse().map_err(|_| syntax(rln, "bad y"))?;
                    if pts[id].is_some() {
                        return Err(syntax(rln, format!("duplicate node id {id}")));
                    }
                    pts[id] = Some((x, y));
                }
                coords = Some(pts.into_iter().map(|p| p.unwrap()).collect());
                k += 1 + dim;
            }
            "EDGE_COST_SECTION_V1" | "EDGE_COST_SECTION_V2" => {
                let slot = usize::from(line.ends_with("V2"));
                let mut m = Vec::with_capacity(dim * dim);
                for row in 0..dim {
                    let (rln, rline) = *lines
                        .get(k + 1 + row)
                        .ok_or_else(|| syntax(ln, format!("truncated {line}")))?;
                    let parts: Vec<&str> = rline.split_whitespace().collect();
                    if parts.len() != dim {
                        return Err(syntax(rln, format!("expected {dim} entries in matrix row")));
                    }
                    for p in parts {
                        let c: Cost = p
                            .parse()
                            .map_err(|_| syntax(rln, format!("bad cost value `{p}`")))?;
                        if c.is_finite() && c > Cost::MAX_FINITE {
                            return Err(syntax(rln, "cost value too large"));
                        }
                        m.push(c);
                    }
                }
                matrices[slot] = Some(m);
                k += 1 + dim;
            }
            "CUSTOMER_SECTION" => {
                let mut rows = Vec::new();
                let mut r = k + 1;
                while r < lines.len() {
                    let (rln, rline) = lines[r];
                    if rline.chars().next().is_some_and(|c| !c.is_ascii_digit()) {
                        break;
                    }
                    let parts: Vec<&str> = rline.split_whitespace().collect();
                    if parts.len() != 9 {
                        return Err(syntax(
                            rln,
                            "customer rows are `id L R l1L l1R l2L l2R demand fixed`",
                        ));
                    }
                    let id: usize = parts[0].parse().map_err(|_| syntax(rln, "bad id"))?;
                    let left: usize = parts[1].parse().map_err(|_| syntax(rln, "bad L node"))?;
                    let right: usize = parts[2].parse().map_err(|_| syntax(rln, "bad R node"))?;
                    let mut t = [[Cost::ZERO; 2]; 2];
                    for (slot, p) in [(0, 3), (1, 4), (2, 5), (3, 6)] {
                        let c: Cost = parts[p]
                            .parse()
                            .map_err(|_| syntax(rln, format!("bad traversal cost `{}`", parts[p])))?;
                        t[slot / 2][slot % 2] = c;
                    }
                    let demand: u64 = parts[7].parse().map_err(|_| syntax(rln, "bad demand"))?;
                    let fixed_to = match parts[8] {
                        "0" => None,
                        "1" => Some(Vehicle::One),
                        "2" => Some(Vehicle::Two),
                        other => return Err(syntax(rln, format!("bad fixed flag `{other}`"))),
                    };
                    rows.push(SegmentCustomer::atomic(
                        id,
                        NodeId(left),
                        NodeId(right),
                        t,
                        demand,
                        fixed_to,
                    ));
                    r += 1;
                }
                customers = Some(rows);
                k = r;
            }
            "BOTH_PERIODS_SECTION" => {
                let mut ids = Vec::new();
                let mut r = k + 1;
                while r < lines.len() {
                    let (rln, rline) = lines[r];
                    if rline == "EOF" || rline.contains(':') || rline.ends_with("_SECTION") {
                        break;
                    }
                    for p in rline.split_whitespace() {
                        let id: usize =
                            p.parse().map_err(|_| syntax(rln, format!("bad node id `{p}`")))?;
                        ids.push(id);
                    }
                    r += 1;
                }
                both_periods = Some(ids);
                k = r;
            }
            "EOF" => {
                saw_eof = true;
                k += 1;
            }
            other => return Err(syntax(ln, format!("unexpected line `{other}`"))),
        }
    }

    if !saw_eof {
        return Err(ParseError::MissingSection("EOF"));
    }
    let typ = typ.ok_or(ParseError::MissingSection("TYPE"))?;
    let dim = dimension.ok_or(ParseError::MissingSection("DIMENSION"))?;

    let build_matrices = |coords: &Option<Vec<(i64, i64)>>| -> Result<[Vec<Cost>; 2], ParseError> {
        if let Some(pts) = coords {
            let m = euclidean_matrix(pts);
            Ok([m.clone(), m])
        } else {
            match (&matrices[0], &matrices[1]) {
                (Some(a), Some(b)) => Ok([a.clone(), b.clone()]),
                (Some(a), None) => Ok([a.clone(), a.clone()]),
                _ => Err(ParseError::MissingSection(
                    "NODE_COORD_SECTION or EDGE_COST_SECTION_V1",
                )),
            }
        }
    };

    match typ.as_str() {
        "2VRP" => {
            let capacity = capacity.ok_or(ParseError::MissingSection("CAPACITY"))?;
            let d = depots.ok_or(ParseError::MissingSection("DEPOTS"))?;
            let mut rows = customers.ok_or(ParseError::MissingSection("CUSTOMER_SECTION"))?;
            rows.sort_by_key(|c| c.id);
            let [m1, m2] = build_matrices(&coords)?;
            let costs = CostModel::new(dim, m1, m2)?;
            let fleet = Fleet {
                capacity,
                v1_start: NodeId(d[0]),
                v1_end: NodeId(d[1]),
                v2_start: NodeId(d[2]),
                v2_end: NodeId(d[3]),
            };
            let inst = Instance::new(fleet, costs, rows)?;
            Ok(ParsedInstance { name, body: InstanceBody::Vrp(inst) })
        }
        "2TSP" => {
            let both = both_periods.ok_or(ParseError::MissingSection("BOTH_PERIODS_SECTION"))?;
            let depot = depots.map_or(0, |d| d[0]);
            let [m1, _] = build_matrices(&coords)?;
            let mut both_sorted = both;
            both_sorted.sort_unstable();
            both_sorted.dedup();
            let single: Vec<usize> =
                (0..dim).filter(|i| *i != depot && !both_sorted.contains(i)).collect();
            Ok(ParsedInstance {
                name,
                body: InstanceBody::Tsp(TwoPeriodInstance {
                    depot,
                    both_periods: both_sorted,
                    single_period: single,
                    dim,
                    distances: m1,
                    balanced,
                    coords,
                }),
            })
        }
        other => Err(syntax(1, format!("TYPE must be 2VRP or 2TSP, got `{other}`"))),
    }
}

/// Nearest-integer Euclidean distances.
pub fn euclidean_matrix(points: &[(i64, i64)]) -> Vec<Cost> {
    let dim = points.len();
    let mut m = vec![Cost::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let dx = (points[i].0 - points[j].0) as f64;
            let dy = (points[i].1 - points[j].1) as f64;
            m[i * dim + j] = Cost::new((dx * dx + dy * dy).sqrt().round() as u64);
        }
    }
    m
}

pub fn write_instance(parsed: &ParsedInstance, path: &Path) -> std::io::Result<()> {
    fs::write(path, instance_to_string(parsed))
}

pub fn instance_to_string(parsed: &ParsedInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {}", parsed.name);
    match &parsed.body {
        InstanceBody::Vrp(inst) => {
            let dim = inst.costs.dim();
            let _ = writeln!(out, "TYPE: 2VRP");
            let _ = writeln!(out, "DIMENSION: {dim}");
            let _ = writeln!(out, "CAPACITY: {} {}", inst.fleet.capacity[0], inst.fleet.capacity[1]);
            let _ = writeln!(
                out,
                "DEPOTS: {} {} {} {}",
                inst.fleet.v1_start.0, inst.fleet.v1_end.0, inst.fleet.v2_start.0, inst.fleet.v2_end.0
            );
            for vehicle in [Vehicle::One, Vehicle::Two] {
                let _ = writeln!(out, "EDGE_COST_SECTION_V{}", vehicle.number());
                let m = inst.costs.matrix(vehicle);
                for row in 0..dim {
                    let cells: Vec<String> =
                        (0..dim).map(|col| m[row * dim + col].to_string()).collect();
                    let _ = writeln!(out, "{}", cells.join(" "));
                }
            }
            let _ = writeln!(out, "CUSTOMER_SECTION");
            for c in &inst.customers {
                let fixed = c.fixed_to.map_or(0, |v| v.number());
                let _ = writeln!(
                    out,
                    "{} {} {} {} {} {} {} {} {}",
                    c.id,
                    c.left.0,
                    c.right.0,
                    c.traverse[0][0],
                    c.traverse[0][1],
                    c.traverse[1][0],
                    c.traverse[1][1],
                    c.demand,
                    fixed
                );
            }
        }
        InstanceBody::Tsp(tp) => {
            let _ = writeln!(out, "TYPE: 2TSP");
            let _ = writeln!(out, "DIMENSION: {}", tp.dim);
            let _ = writeln!(out, "DEPOTS: {0} {0} {0} {0}", tp.depot);
            let _ = writeln!(out, "BALANCED: {}", u8::from(tp.balanced));
            if let Some(pts) = &tp.coords {
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (id, (x, y)) in pts.iter().enumerate() {
                    let _ = writeln!(out, "{id} {x} {y}");
                }
            } else {
                let _ = writeln!(out, "EDGE_COST_SECTION_V1");
                for row in 0..tp.dim {
                    let cells: Vec<String> =
                        (0..tp.dim).map(|col| tp.distances[row * tp.dim + col].to_string()).collect();
                    let _ = writeln!(out, "{}", cells.join(" "));
                }
            }
            let _ = writeln!(out, "BOTH_PERIODS_SECTION");
            if !tp.both_periods.is_empty() {
                let ids: Vec<String> = tp.both_periods.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "{}", ids.join(" "));
            }
        }
    }
    out.push_str("EOF\n");
    out
}

/// Deterministic solution file: cost, loads and the visit sequence; period
/// tours are appended for 2TSP-derived solutions.
pub fn solution_to_string(
    name: &str,
    sol: &TwoRouteSolution,
    tours: Option<&[Vec<usize>; 2]>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {name}");
    let _ = writeln!(out, "COST: {}", sol.cost);
    let _ = writeln!(out, "LOADS: {} {}", sol.loads[0], sol.loads[1]);
    let cells: Vec<String> = sol
        .visits
        .iter()
        .map(|&(id, o)| if id == SWITCH_ID { "0".to_string() } else { format!("{id}:{o}") })
        .collect();
    let _ = writeln!(out, "VISITS: {}", cells.join(" "));
    if let Some(tours) = tours {
        for (p, tour) in tours.iter().enumerate() {
            let cells: Vec<String> = tour.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(out, "PERIOD_{}: {}", p + 1, cells.join(" "));
        }
    }
    out
}

/// Parses the orientation suffix produced by [`solution_to_string`].
pub fn parse_visit_token(token: &str) -> Option<(usize, Orientation)> {
    if token == "0" {
        return Some((SWITCH_ID, Orientation::FromLeft));
    }
    let (id, o) = token.split_once(':')?;
    let id: usize = id.parse().ok()?;
    let orientation = match o {
        "L" => Orientation::FromLeft,
        "R" => Orientation::FromRight,
        _ => return None,
    };
    Some((id, orientation))
}
