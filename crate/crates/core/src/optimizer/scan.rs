//! Grid scans of the best collective CHSH value over `(n, x)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{objective, optimize, OptimizerConfig};
use crate::collective::{controlled_hadamard_rows, xor_rows};
use crate::error::{Error, Result};

/// A candidate must beat the XOR value, or the known strategy already chosen,
/// by more than this (in CHSH units) before the record is labelled with it.
pub const SWITCH_MARGIN: f64 = 1e-7;

/// Which filter produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Xor,
    ControlledHadamard,
    Optimized,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Xor => "xor",
            Strategy::ControlledHadamard => "controlled_hadamard",
            Strategy::Optimized => "optimized",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a scan evaluates at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// XOR rows only.
    Xor,
    /// Controlled-Hadamard rows only (`n = 3`).
    ControlledHadamard,
    /// Best of the known strategies and a multistart search.
    Optimize,
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xor" => Ok(ScanMode::Xor),
            "chad" | "controlled_hadamard" | "controlled-hadamard" => Ok(ScanMode::ControlledHadamard),
            "optimize" | "optimise" | "optimized" | "best" => Ok(ScanMode::Optimize),
            other => Err(Error::param("strategy", other, "expected xor, chad or optimize")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: usize,
    pub x: f64,
    pub strategy: Strategy,
    pub chsh_max: f64,
    pub success_probability: f64,
}

impl ScanRecord {
    pub const CSV_HEADER: &'static str = "n,x,strategy,chsh_max,success_probability";

    pub fn to_csv(&self) -> String {
        format!("{},{:.10},{},{:.10},{:.10}", self.n, self.x, self.strategy, self.chsh_max, self.success_probability)
    }
}

fn validate_grid(n_list: &[usize], x_grid: &[f64]) -> Result<()> {
    if let Some(&n) = n_list.iter().find(|&&n| n == 0 || n > crate::collective::MAX_PAIRS) {
        return Err(Error::param("n", n, "must be between 1 and the supported maximum"));
    }
    if let Some(&x) = x_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::param("x", x, "grid values must lie in [0, 1]"));
    }
    Ok(())
}

fn sorted_unique<T: Copy + PartialOrd>(v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out.dedup();
    out
}

/// One record per `(n, x)`, sorted by `n` then `x`.
///
/// In [`ScanMode::Optimize`] the optimum at each grid point is also offered as
/// a start to its neighbours (one forward and one backward sweep over `x`), so
/// a branch found at one singlet fraction is followed across the grid.
pub fn scan(n_list: &[usize], x_grid: &[f64], mode: ScanMode, cfg: &OptimizerConfig) -> Result<Vec<ScanRecord>> {
    validate_grid(n_list, x_grid)?;
    let ns = sorted_unique(n_list);
    let xs = sorted_unique(x_grid);
    let mut out = Vec::with_capacity(ns.len() * xs.len());
    for &n in &ns {
        match mode {
            ScanMode::Xor => {
                let rows = xor_rows(n)?;
                for &x in &xs {
                    out.push(fixed_record(n, x, Strategy::Xor, &rows)?);
                }
            }
            ScanMode::ControlledHadamard => {
                if n != 3 {
                    return Err(Error::param("n", n, "the controlled-Hadamard rows exist only for n = 3"));
                }
                let rows = controlled_hadamard_rows();
                for &x in &xs {
                    out.push(fixed_record(n, x, Strategy::ControlledHadamard, &rows)?);
                }
            }
            ScanMode::Optimize => out.extend(optimized_column(n, &xs, cfg)?),
        }
    }
    Ok(out)
}

fn fixed_record(n: usize, x: f64, strategy: Strategy, rows: &crate::collective::FilterRows) -> Result<ScanRecord> {
    let v = objective(n, x, rows)?;
    Ok(ScanRecord { n, x, strategy, chsh_max: v.chsh(), success_probability: v.success_probability })
}

struct Candidate {
    record: ScanRecord,
    rows: Vec<f64>,
}

fn best_at(n: usize, x: f64, cfg: &OptimizerConfig, warm: &[Vec<f64>]) -> Result<Candidate> {
    let xor = xor_rows(n)?;
    let xor_val = objective(n, x, &xor)?;
    let mut best = Candidate {
        record: ScanRecord {
            n,
            x,
            strategy: Strategy::Xor,
            chsh_max: xor_val.chsh(),
            success_probability: xor_val.success_probability,
        },
        rows: xor.to_flat(),
    };
    let mut consider = |strategy: Strategy, chsh: f64, p: f64, rows: Vec<f64>| {
        if chsh > best.record.chsh_max + SWITCH_MARGIN {
            best = Candidate { record: ScanRecord { n, x, strategy, chsh_max: chsh, success_probability: p }, rows };
        }
    };
    if n == 3 {
        let ch = controlled_hadamard_rows();
        let v = objective(n, x, &ch)?;
        consider(Strategy::ControlledHadamard, v.chsh(), v.success_probability, ch.to_flat());
    }
    let mut local = cfg.clone();
    local.extra_starts.extend(warm.iter().cloned());
    let report = optimize(n, x, &local)?;
    consider(Strategy::Optimized, report.best_chsh, report.success_probability, report.best_rows.to_flat());
    Ok(best)
}

fn optimized_column(n: usize, xs: &[f64], cfg: &OptimizerConfig) -> Result<Vec<ScanRecord>> {
    let mut forward: Vec<Candidate> = Vec::with_capacity(xs.len());
    for &x in xs {
        let warm: Vec<Vec<f64>> = forward.last().map(|c| vec![c.rows.clone()]).unwrap_or_default();
        forward.push(best_at(n, x, cfg, &warm)?);
    }
    // backward sweep: re-run only where the right neighbour's rows do better
    for i in (0..xs.len().saturating_sub(1)).rev() {
        let warm = forward[i + 1].rows.clone();
        let d = 1 << n;
        let rows = crate::collective::FilterRows::orthonormalize(n, &warm[..d], &warm[d..])?;
        let seeded = objective(n, xs[i], &rows)?;
        if seeded.chsh() > forward[i].record.chsh_max + SWITCH_MARGIN {
            let again = best_at(n, xs[i], cfg, &[warm])?;
            if again.record.chsh_max > forward[i].record.chsh_max {
                forward[i] = again;
            }
        }
    }
    Ok(forward.into_iter().map(|c| c.record).collect())
}

/// First grid value of `n` whose record is not labelled XOR.
pub fn strategy_switch(records: &[ScanRecord], n: usize) -> Option<f64> {
    records.iter().filter(|r| r.n == n).find(|r| r.strategy != Strategy::Xor).map(|r| r.x)
}

/// `count` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count).map(|i| min + (max - min) * i as f64 / (count - 1) as f64).collect(),
    }
}
