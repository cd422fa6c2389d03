//! Benchmark reports: per-instance rows against published baselines and the
//! four summary statistics (mean/best/worst percentage, improved count).

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub cost: u64,
    pub time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineRow {
    pub instance: String,
    pub pc: Option<u64>,
    pub pc_manual: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance: String,
    pub baseline_pc: Option<u64>,
    pub baseline_manual: Option<u64>,
    pub ours: u64,
    pub time_s: f64,
    pub delta_pc_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mean_percent: f64,
    pub best_percent: f64,
    pub worst_percent: f64,
    pub improved: usize,
    pub compared: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub rows: Vec<ReportRow>,
    pub summary: Option<Summary>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub fn percent_delta(ours: u64, baseline: u64) -> f64 {
    (ours as f64 - baseline as f64) / baseline as f64 * 100.0
}

/// Joins solver results with baselines by instance name. Rows without a
/// baseline keep their cost but no percentage; the summary covers only the
/// compared rows.
pub fn compare_report(results: &[ResultRow], baselines: &[BaselineRow]) -> BenchmarkReport {
    let rows: Vec<ReportRow> = results
        .iter()
        .map(|r| {
            let baseline = baselines.iter().find(|b| b.instance == r.instance);
            let baseline_pc = baseline.and_then(|b| b.pc);
            ReportRow {
                instance: r.instance.clone(),
                baseline_pc,
                baseline_manual: baseline.and_then(|b| b.pc_manual),
                ours: r.cost,
                time_s: r.time_s,
                delta_pc_percent: baseline_pc.map(|pc| percent_delta(r.cost, pc)),
            }
        })
        .collect();

    let compared: Vec<(&ReportRow, f64)> = rows
        .iter()
        .filter_map(|r| r.delta_pc_percent.map(|d| (r, d)))
        .collect();
    let summary = if compared.is_empty() {
        None
    } else {
        let deltas: Vec<f64> = compared.iter().map(|&(_, d)| d).collect();
        Some(Summary {
            mean_percent: deltas.iter().sum::<f64>() / deltas.len() as f64,
            best_percent: deltas.iter().copied().fold(f64::INFINITY, f64::min),
            worst_percent: deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            improved: compared
                .iter()
                .filter(|(r, _)| r.baseline_pc.is_some_and(|pc| r.ours < pc))
                .count(),
            compared: compared.len(),
        })
    };
    BenchmarkReport { rows, summary }
}

fn fmt_percent(d: f64) -> String {
    if d > 0.0 {
        format!("+{d:.2}%")
    } else {
        format!("{d:.2}%")
    }
}

impl BenchmarkReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,baseline_pc,baseline_manual,ours,time_s,delta_pc_percent\n");
        for r in &self.rows {
            let pc = r.baseline_pc.map_or(String::new(), |v| v.to_string());
            let man = r.baseline_manual.map_or(String::new(), |v| v.to_string());
            let delta = r.delta_pc_percent.map_or(String::new(), |d| format!("{d:.2}"));
            let _ = writeln!(out, "{},{},{},{},{:.1},{}", r.instance, pc, man, r.ours, r.time_s, delta);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:>9} {:>10} {:>9} {:>9} {:>9}",
            "Instance", "PC", "PC+manual", "time(s)", "length", "delta"
        );
        for r in &self.rows {
            let pc = r.baseline_pc.map_or("-".to_string(), |v| v.to_string());
            let man = r.baseline_manual.map_or("-".to_string(), |v| v.to_string());
            let delta = r.delta_pc_percent.map_or("-".to_string(), fmt_percent);
            let _ = writeln!(
                out,
                "{:<12} {:>9} {:>10} {:>9.1} {:>9} {:>9}",
                r.instance, pc, man, r.time_s, r.ours, delta
            );
        }
        if let Some(s) = &self.summary {
            let _ = writeln!(out, "Mean %     {}", fmt_percent(s.mean_percent));
            let _ = writeln!(out, "Best %     {}", fmt_percent(s.best_percent));
            let _ = writeln!(out, "Worst %    {}", fmt_percent(s.worst_percent));
            let _ = writeln!(out, "Improved # {}/{}", s.improved, s.compared);
        }
        out
    }
}

/// `instance,pc,pc_manual` rows, header optional, empty fields allowed.
pub fn parse_baselines(text: &str) -> Result<Vec<BaselineRow>, ReportError> {
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (k == 0 && line.starts_with("instance")) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(ReportError::Csv {
                line: k + 1,
                message: "expected `instance,pc[,pc_manual]`".into(),
            });
        }
        let parse_opt = |s: &str, line: usize| -> Result<Option<u64>, ReportError> {
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<u64>().map(Some).map_err(|_| ReportError::Csv {
                line,
                message: format!("bad cost `{s}`"),
            })
        };
        rows.push(BaselineRow {
            instance: parts[0].to_string(),
            pc: parse_opt(parts[1], k + 1)?,
            pc_manual: parse_opt(parts.get(2).copied().unwrap_or(""), k + 1)?,
        });
    }
    Ok(rows)
}

/// `instance,cost,time_s` rows produced by the bench command.
pub fn parse_results(text: &str) -> Result<Vec<ResultRow>, ReportError> {
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (k == 0 && line.starts_with("instance")) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() < 2 {
            return Err(ReportError::Csv { line: k + 1, message: "expected `instance,cost[,time_s]`".into() });
        }
        let cost: u64 = parts[1]
            .parse()
            .map_err(|_| ReportError::Csv { line: k + 1, message: format!("bad cost `{}`", parts[1]) })?;
        let time_s: f64 = parts
            .get(2)
            .map_or(Ok(0.0), |s| s.parse::<f64>())
            .map_err(|_| ReportError::Csv { line: k + 1, message: "bad time".into() })?;
        rows.push(ResultRow { instance: parts[0].to_string(), cost, time_s });
    }
    Ok(rows)
}

pub fn results_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("instance,cost,time_s\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.1}", r.instance, r.cost, r.time_s);
    }
    out
}
