//! Multistart maximisation of the postselected CHSH maximum over filter rows.
//!
//! Alice's rows `U` are free (two orthonormal real vectors of length `2^n`);
//! Bob's rows are tied to them by [`v_from_u`]. The objective is
//! `M(U) = m_value(T(rho_new))`, so the CHSH maximum is `2 sqrt(M)`.
//!
//! Each start is ascended on the unconstrained parameter matrix `P` through
//! the map `P -> gram_schmidt(P)`: central finite-difference gradients of
//! `M(gram_schmidt(P))`, a Barzilai-Borwein trial step, halving backtracking,
//! and re-orthonormalisation after every accepted step.

pub mod scan;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::collective::{controlled_hadamard_rows, v_from_u, xor_rows, FilterRows, PairContraction};
use crate::error::{Error, Result};
use crate::linalg::{dot, gram_schmidt};
use crate::states::{werner, BipartiteState};

/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Maximum number of step halvings per line search.
pub const MAX_HALVINGS: usize = 40;
/// Two local maxima closer than this in `M` are counted as one.
pub const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AscentMethod {
    /// Finite-difference gradient ascent with backtracking.
    Gradient,
    /// Derivative-free coordinate pattern search.
    PatternSearch,
}

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub objective_tol: f64,
    pub base_seed: u64,
    /// Also start from the XOR rows and, at `n = 3`, the controlled-Hadamard rows.
    pub include_known_strategies: bool,
    pub method: AscentMethod,
    /// Run starts on the rayon pool. Results do not depend on this.
    pub parallel: bool,
    /// At `n >= 5` only the XOR rows are evaluated unless this is set.
    pub full_search_large_n: bool,
    /// Additional deterministic starting rows (flattened `u0 ++ u1`).
    pub extra_starts: Vec<Vec<f64>>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            step_tol: 1e-9,
            objective_tol: 1e-10,
            base_seed: 0,
            include_known_strategies: true,
            method: AscentMethod::Gradient,
            parallel: true,
            full_search_large_n: false,
            extra_starts: Vec::new(),
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 && !self.include_known_strategies && self.extra_starts.is_empty() {
            return Err(Error::param("restarts", 0, "need at least one start"));
        }
        if [self.step_tol, self.objective_tol].iter().any(|t| t.is_nan() || *t <= 0.0) {
            return Err(Error::param(
                "tolerance",
                format!("{} / {}", self.step_tol, self.objective_tol),
                "must be positive",
            ));
        }
        Ok(())
    }
}

/// Value of the objective at one set of rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    pub m: f64,
    pub success_probability: f64,
    /// Postselection never succeeds; `m` is reported as 0.
    pub zero_probability: bool,
}

impl ObjectiveValue {
    pub fn chsh(&self) -> f64 {
        2.0 * self.m.sqrt()
    }
}

/// Where a start came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartKind {
    Xor,
    ControlledHadamard,
    Extra(usize),
    Random(usize),
}

#[derive(Debug, Clone)]
pub struct OptimumReport {
    pub n: usize,
    /// Werner singlet fraction, when the pair state is a Werner state.
    pub x: Option<f64>,
    pub best_rows: FilterRows,
    pub best_start: StartKind,
    pub best_chsh: f64,
    pub best_m: f64,
    pub success_probability: f64,
    /// Starts that stopped on a tolerance rather than the iteration cap.
    pub restarts_converged: usize,
    /// `(M, multiplicity)` for every cluster of final values, best first.
    pub distinct_local_maxima: Vec<(f64, usize)>,
}

/// The objective for a fixed pair state and pair count.
#[derive(Debug, Clone)]
pub struct CollectiveObjective {
    contraction: PairContraction,
    n: usize,
}

impl CollectiveObjective {
    pub fn new(pair: &BipartiteState, n: usize) -> Result<Self> {
        Ok(Self { contraction: PairContraction::new(pair, n)?, n })
    }

    pub fn werner(n: usize, x: f64) -> Result<Self> {
        Self::new(&werner(x)?, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    /// Objective at orthonormal rows `u`, with `v = v_from_u(u)`.
    pub fn evaluate(&self, u: &FilterRows) -> Result<ObjectiveValue> {
        if u.n() != self.n {
            return Err(Error::InvalidFilter(format!("rows for n = {} used with n = {}", u.n(), self.n)));
        }
        let v = v_from_u(u);
        self.evaluate_rows([u.u0(), u.u1()], [v.u0(), v.u1()])
    }

    fn evaluate_rows(&self, u: [&[f64]; 2], v: [&[f64]; 2]) -> Result<ObjectiveValue> {
        match self.contraction.correlation(u, v) {
            Ok((corr, p)) => Ok(ObjectiveValue { m: corr.m_value, success_probability: p, zero_probability: false }),
            Err(Error::ZeroProbability { probability }) => {
                Ok(ObjectiveValue { m: 0.0, success_probability: probability.max(0.0), zero_probability: true })
            }
            Err(e) => Err(e),
        }
    }

    /// Orthonormalised rows of a flat `2 x 2^n` parameter matrix.
    fn retract(&self, p: &[f64]) -> Option<Vec<f64>> {
        let d = self.dim();
        let q = gram_schmidt(&[p[..d].to_vec(), p[d..].to_vec()]).ok()?;
        Some(q.concat())
    }

    /// `M(gram_schmidt(p))`, or `-inf` when `p` is rank deficient.
    fn value_at(&self, p: &[f64]) -> f64 {
        match self.retract(p) {
            Some(q) => self.value_orthonormal(&q),
            None => f64::NEG_INFINITY,
        }
    }

    fn value_orthonormal(&self, q: &[f64]) -> f64 {
        let d = self.dim();
        let v = signed_rows(q, d);
        self.evaluate_rows([&q[..d], &q[d..]], [&v[..d], &v[d..]]).map_or(f64::NEG_INFINITY, |o| o.m)
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let mut probe = p.to_vec();
        (0..p.len())
            .map(|k| {
                let orig = probe[k];
                probe[k] = orig + FD_STEP;
                let plus = self.value_at(&probe);
                probe[k] = orig - FD_STEP;
                let minus = self.value_at(&probe);
                probe[k] = orig;
                let g = (plus - minus) / (2.0 * FD_STEP);
                if g.is_finite() {
                    g
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Flat form of [`v_from_u`] for parameter vectors.
fn signed_rows(q: &[f64], d: usize) -> Vec<f64> {
    q.iter()
        .enumerate()
        .map(|(i, &c)| {
            let (nu, k) = (i / d, i % d);
            if (nu + k.count_ones() as usize).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `M` for Werner pairs with singlet fraction `x` under rows `u` and `v = v_from_u(u)`.
pub fn objective(n: usize, x: f64, u: &FilterRows) -> Result<ObjectiveValue> {
    CollectiveObjective::werner(n, x)?.evaluate(u)
}

#[derive(Debug, Clone)]
struct Outcome {
    rows: Vec<f64>,
    m: f64,
    converged: bool,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn gradient_ascent(obj: &CollectiveObjective, start: Vec<f64>, cfg: &OptimizerConfig) -> Outcome {
    let Some(mut p) = obj.retract(&start) else {
        return Outcome { rows: start, m: f64::NEG_INFINITY, converged: false };
    };
    let mut f = obj.value_orthonormal(&p);
    let mut g = obj.gradient(&p);
    let mut alpha = 0.1 / dot(&g, &g).sqrt().max(1e-12);
    let mut converged = false;

    for _ in 0..cfg.max_iters {
        if dot(&g, &g) == 0.0 {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut trial = alpha;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<f64> = p.iter().zip(&g).map(|(pi, gi)| pi + trial * gi).collect();
            if let Some(q) = obj.retract(&cand) {
                let fq = obj.value_orthonormal(&q);
                if fq > f {
                    accepted = Some((q, fq));
                    break;
                }
            }
            trial *= 0.5;
        }
        let Some((q, fq)) = accepted else {
            converged = true;
            break;
        };
        let step = distance(&q, &p);
        let gain = fq - f;
        let g_new = obj.gradient(&q);

        // Barzilai-Borwein step for the next trial, on the ascent problem
        let s: Vec<f64> = q.iter().zip(&p).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        alpha = if sy < 0.0 { (dot(&s, &s) / -sy).min(1e3) } else { (2.0 * trial).min(1e3) };

        p = q;
        f = fq;
        g = g_new;
        if step < cfg.step_tol || gain < cfg.objective_tol {
            converged = true;
            break;
        }
    }
    Outcome { rows: p, m: f, converged }
}

fn pattern_search(obj: &CollectiveObjective, start: Vec<f64>, cfg: &OptimizerConfig) -> Outcome {
    let Some(mut p) = obj.retract(&start) else {
        return Outcome { rows: start, m: f64::NEG_INFINITY, converged: false };
    };
    let mut f = obj.value_orthonormal(&p);
    let mut delta = 0.1;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let before = f;
        for k in 0..p.len() {
            for sign in [1.0, -1.0] {
                let mut cand = p.clone();
                cand[k] += sign * delta;
                if let Some(q) = obj.retract(&cand) {
                    let fq = obj.value_orthonormal(&q);
                    if fq > f {
                        p = q;
                        f = fq;
                        break;
                    }
                }
            }
        }
        if f - before < cfg.objective_tol {
            delta *= 0.5;
            if delta < cfg.step_tol {
                converged = true;
                break;
            }
        }
    }
    Outcome { rows: p, m: f, converged }
}

fn random_start(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2 << n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn starts(n: usize, cfg: &OptimizerConfig) -> Vec<(StartKind, Vec<f64>)> {
    let mut out = Vec::new();
    if cfg.include_known_strategies {
        out.push((StartKind::Xor, xor_rows(n).expect("valid n").to_flat()));
        if n == 3 {
            out.push((StartKind::ControlledHadamard, controlled_hadamard_rows().to_flat()));
        }
    }
    for (i, s) in cfg.extra_starts.iter().enumerate() {
        if s.len() == 2 << n {
            out.push((StartKind::Extra(i), s.clone()));
        }
    }
    for r in 0..cfg.restarts {
        out.push((StartKind::Random(r), random_start(n, cfg.base_seed.wrapping_add(r as u64))));
    }
    out
}

/// Groups values (in any order) into clusters of width `tol`, best first.
pub fn cluster_maxima(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match clusters.last_mut() {
            Some((head, count)) if *head - v <= tol => *count += 1,
            _ => clusters.push((v, 1)),
        }
    }
    clusters
}

/// Multistart maximisation of `M` for `n` Werner pairs with singlet fraction `x`.
pub fn optimize(n: usize, x: f64, cfg: &OptimizerConfig) -> Result<OptimumReport> {
    let mut report = optimize_state(&werner(x)?, n, cfg)?;
    report.x = Some(x);
    Ok(report)
}

/// Multistart maximisation of `M` for `n` copies of an arbitrary two-qubit state.
pub fn optimize_state(pair: &BipartiteState, n: usize, cfg: &OptimizerConfig) -> Result<OptimumReport> {
    cfg.validate()?;
    let obj = CollectiveObjective::new(pair, n)?;

    let xor_only = n >= 5 && !cfg.full_search_large_n;
    let outcomes: Vec<(StartKind, Outcome)> = if xor_only {
        let rows = xor_rows(n)?.to_flat();
        let m = obj.value_orthonormal(&rows);
        vec![(StartKind::Xor, Outcome { rows, m, converged: true })]
    } else {
        let starts = starts(n, cfg);
        let run = |(kind, start): (StartKind, Vec<f64>)| {
            let outcome = match cfg.method {
                AscentMethod::Gradient => gradient_ascent(&obj, start, cfg),
                AscentMethod::PatternSearch => pattern_search(&obj, start, cfg),
            };
            (kind, outcome)
        };
        if cfg.parallel {
            starts.into_par_iter().map(run).collect()
        } else {
            starts.into_iter().map(run).collect()
        }
    };

    // first strictly-best outcome wins, so ties resolve by start order
    let (best_kind, best) = outcomes
        .iter()
        .fold(None::<&(StartKind, Outcome)>, |acc, o| match acc {
            Some(a) if a.1.m >= o.1.m => Some(a),
            _ => Some(o),
        })
        .expect("at least one start");
    if !best.m.is_finite() {
        return Err(Error::ZeroProbability { probability: 0.0 });
    }
    let d = 1 << n;
    let best_rows = FilterRows::orthonormalize(n, &best.rows[..d], &best.rows[d..])?;
    let value = obj.evaluate(&best_rows)?;
    let finals: Vec<f64> = outcomes.iter().map(|(_, o)| o.m).collect();

    Ok(OptimumReport {
        n,
        x: None,
        best_start: *best_kind,
        best_chsh: 2.0 * value.m.sqrt(),
        best_m: value.m,
        success_probability: value.success_probability,
        best_rows,
        restarts_converged: outcomes.iter().filter(|(_, o)| o.converged).count(),
        distinct_local_maxima: cluster_maxima(&finals, CLUSTER_TOL),
    })
}
