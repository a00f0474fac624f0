use std::fmt::Write as _;

use entangle_core::bell::{optimal_settings, t_matrix, CorrelationMatrix};
use entangle_core::collective::{controlled_hadamard_rows, v_from_u, xor_rows, PairContraction};
use entangle_core::optimizer::scan::{scan, ScanMode, ScanRecord};
use entangle_core::optimizer::{optimize_state, AscentMethod, OptimizerConfig, OptimumReport};
use entangle_core::separability::{alpha2_check, ppt_check, PptReport};
use entangle_core::states::{gisin_state, singlet_plus_polarized, state_from_file, werner, GisinParams, StateFile};
use entangle_core::thresholds::example_table;
use entangle_core::BipartiteState;
use serde_json::{json, Value};

use crate::args::{CollectiveCommand, Format, MethodArg, ScanCommand, SearchArgs, StateSource, StrategyArg};
use crate::Failure;

const DEFAULT_RESTARTS: usize = 64;

fn num(v: f64) -> String {
    format!("{v:.10}")
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" ")
}

pub fn load_state(src: &StateSource) -> Result<BipartiteState, Failure> {
    if let Some(x) = src.werner {
        return Ok(werner(x)?);
    }
    if let Some((x, a, b)) = src.gisin {
        let norm = (a * a + b * b).sqrt();
        if norm.is_nan() || norm == 0.0 {
            return Err(Failure::input("--gisin amplitudes a and b must not both vanish"));
        }
        return Ok(gisin_state(GisinParams::new(x, (a / norm).into(), (b / norm).into())?));
    }
    if let Some(x) = src.polarized {
        return Ok(singlet_plus_polarized(x)?);
    }
    let path = src.input.as_ref().expect("clap requires one state source");
    state_from_file(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// JSON object holding the state in the interchange format plus `key: report`.
fn state_json(state: &BipartiteState, key: &str, report: Value) -> Value {
    let mut v = serde_json::to_value(StateFile::from(state)).expect("serialisable state");
    v[key] = report;
    v
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(Failure::output)?;
    for r in rows {
        w.write_record(r).map_err(Failure::output)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::output(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn dims_label((a, b): (usize, usize)) -> String {
    format!("{a}x{b}")
}

fn ppt_verdict(r: &PptReport, dims: (usize, usize)) -> &'static str {
    match (r.is_ppt, PptReport::ppt_is_conclusive(dims)) {
        (false, _) => "inseparable (negative partial transpose)",
        (true, true) => "separable (positive partial transpose)",
        (true, false) => "inconclusive (positive partial transpose)",
    }
}

const PPT_CAVEAT: &str =
    "a negative eigenvalue proves inseparability; a positive partial transpose implies separability only for 2x2 and 2x3 systems";

pub fn ppt(state: &BipartiteState, format: Format) -> Result<String, Failure> {
    let r = ppt_check(state)?;
    let dims = state.dims();
    let verdict = ppt_verdict(&r, dims);
    let conclusive = !r.is_ppt || PptReport::ppt_is_conclusive(dims);
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "state: {}", dims_label(dims)).unwrap();
            writeln!(s, "partial transpose eigenvalues: {}", join(&r.eigenvalues)).unwrap();
            writeln!(s, "min eigenvalue: {}", num(r.min_eigenvalue)).unwrap();
            writeln!(s, "verdict: {verdict}").unwrap();
            writeln!(s, "caveat: {PPT_CAVEAT}").unwrap();
            s
        }
        Format::Csv => csv_table(
            &["dims", "min_eigenvalue", "is_ppt", "conclusive", "eigenvalues"],
            &[vec![
                dims_label(dims),
                num(r.min_eigenvalue),
                r.is_ppt.to_string(),
                conclusive.to_string(),
                join(&r.eigenvalues),
            ]],
        )?,
        Format::Json => pretty(&state_json(
            state,
            "ppt",
            json!({
                "eigenvalues": r.eigenvalues,
                "min_eigenvalue": r.min_eigenvalue,
                "is_ppt": r.is_ppt,
                "conclusive": conclusive,
                "verdict": verdict,
                "caveat": PPT_CAVEAT,
            }),
        )),
    })
}

pub fn entropy(state: &BipartiteState, format: Format) -> Result<String, Failure> {
    let r = alpha2_check(state);
    let verdict = if r.flags_inseparable { "inseparable" } else { "no violation (consistent with separability)" };
    Ok(match format {
        Format::Text => format!(
            "purity: {}\npurity A: {}\npurity B: {}\nverdict: {verdict}\n",
            num(r.purity),
            num(r.purity_a),
            num(r.purity_b)
        ),
        Format::Csv => csv_table(
            &["purity", "purity_a", "purity_b", "flags_inseparable"],
            &[vec![num(r.purity), num(r.purity_a), num(r.purity_b), r.flags_inseparable.to_string()]],
        )?,
        Format::Json => pretty(&state_json(
            state,
            "entropy",
            json!({
                "purity": r.purity,
                "purity_a": r.purity_a,
                "purity_b": r.purity_b,
                "flags_inseparable": r.flags_inseparable,
            }),
        )),
    })
}

fn t_rows(c: &CorrelationMatrix) -> String {
    c.t.iter().map(|r| format!("  {}\n", join(r))).collect()
}

pub fn chsh(state: &BipartiteState, format: Format) -> Result<String, Failure> {
    let c = t_matrix(state)?;
    let s = optimal_settings(state)?;
    let violates = c.chsh_max > 2.0;
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "correlation matrix T:").unwrap();
            out.push_str(&t_rows(&c));
            writeln!(out, "M: {}", num(c.m_value)).unwrap();
            writeln!(out, "chsh_max: {}", num(c.chsh_max)).unwrap();
            writeln!(out, "violates CHSH: {violates}").unwrap();
            for (name, v) in [("a", s.a), ("a'", s.a_prime), ("b", s.b), ("b'", s.b_prime)] {
                writeln!(out, "{name}: {}", join(&v)).unwrap();
            }
            out
        }
        Format::Csv => csv_table(
            &["m_value", "chsh_max", "violates", "t"],
            &[vec![
                num(c.m_value),
                num(c.chsh_max),
                violates.to_string(),
                c.t.iter().map(|r| join(r)).collect::<Vec<_>>().join("; "),
            ]],
        )?,
        Format::Json => pretty(&state_json(
            state,
            "chsh",
            json!({
                "t": c.t,
                "m_value": c.m_value,
                "chsh_max": c.chsh_max,
                "violates": violates,
                "settings": { "a": s.a, "a_prime": s.a_prime, "b": s.b, "b_prime": s.b_prime },
            }),
        )),
    })
}

fn optimizer_config(search: &SearchArgs) -> OptimizerConfig {
    OptimizerConfig {
        restarts: search.restarts.unwrap_or(DEFAULT_RESTARTS),
        base_seed: search.seed,
        method: match search.method {
            MethodArg::Gradient => AscentMethod::Gradient,
            MethodArg::Pattern => AscentMethod::PatternSearch,
        },
        full_search_large_n: search.full_n5,
        ..OptimizerConfig::default()
    }
}

fn maxima_json(r: &OptimumReport) -> Value {
    r.distinct_local_maxima.iter().map(|(m, k)| json!({ "m": m, "chsh": 2.0 * m.sqrt(), "count": k })).collect()
}

pub fn collective(cmd: &CollectiveCommand, state: &BipartiteState, format: Format) -> Result<String, Failure> {
    if !state.is_two_qubit() {
        return Err(Failure::input(format!(
            "collective tests need a two-qubit pair state, got {}",
            dims_label(state.dims())
        )));
    }
    let n = cmd.n;
    let (label, rows, search) = match cmd.strategy {
        StrategyArg::Xor => ("xor", xor_rows(n)?, None),
        StrategyArg::Chad => {
            if n != 3 {
                return Err(Failure::input("--strategy chad requires --n 3"));
            }
            ("controlled_hadamard", controlled_hadamard_rows(), None)
        }
        StrategyArg::Optimize => {
            let report = optimize_state(state, n, &optimizer_config(&cmd.search))?;
            ("optimized", report.best_rows.clone(), Some(report))
        }
    };
    let contraction = PairContraction::new(state, n)?;
    let post = contraction.postselect(&rows, &v_from_u(&rows))?;
    let c = t_matrix(&post.rho_new)?;

    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "pairs: {n}").unwrap();
            writeln!(out, "strategy: {label}").unwrap();
            writeln!(out, "success probability: {}", num(post.success_probability)).unwrap();
            writeln!(out, "chsh_max: {}", num(c.chsh_max)).unwrap();
            writeln!(out, "M: {}", num(c.m_value)).unwrap();
            writeln!(out, "correlation matrix T:").unwrap();
            out.push_str(&t_rows(&c));
            if let Some(r) = &search {
                writeln!(out, "restarts converged: {}", r.restarts_converged).unwrap();
                writeln!(out, "distinct local maxima (chsh x count):").unwrap();
                for (m, k) in &r.distinct_local_maxima {
                    writeln!(out, "  {} x {k}", num(2.0 * m.sqrt())).unwrap();
                }
            }
            writeln!(out, "u0: {}", join(rows.u0())).unwrap();
            writeln!(out, "u1: {}", join(rows.u1())).unwrap();
            out
        }
        Format::Csv => csv_table(
            &["n", "strategy", "chsh_max", "success_probability"],
            &[vec![n.to_string(), label.to_string(), num(c.chsh_max), num(post.success_probability)]],
        )?,
        Format::Json => {
            let mut report = json!({
                "n": n,
                "strategy": label,
                "success_probability": post.success_probability,
                "chsh_max": c.chsh_max,
                "m_value": c.m_value,
                "t": c.t,
                "u0": rows.u0(),
                "u1": rows.u1(),
            });
            if let Some(r) = &search {
                report["restarts_converged"] = json!(r.restarts_converged);
                report["distinct_local_maxima"] = maxima_json(r);
            }
            pretty(&state_json(&post.rho_new, "collective", report))
        }
    })
}

pub fn scan_cmd(cmd: &ScanCommand, format: Format) -> Result<String, Failure> {
    let mode = match cmd.strategy {
        StrategyArg::Xor => ScanMode::Xor,
        StrategyArg::Chad => ScanMode::ControlledHadamard,
        StrategyArg::Optimize => ScanMode::Optimize,
    };
    let records = scan(&cmd.n.0, &cmd.x.0, mode, &optimizer_config(&cmd.search))?;
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(&records).expect("serialisable")),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            writeln!(s, "{}", ScanRecord::CSV_HEADER).unwrap();
            for r in &records {
                writeln!(s, "{}", r.to_csv()).unwrap();
            }
            s
        }
    })
}

pub fn examples(format: Format) -> Result<String, Failure> {
    let rows = example_table()?;
    Ok(match format {
        Format::Text => {
            let width = rows.iter().map(|r| r.claim.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in &rows {
                writeln!(
                    s,
                    "{:<4}  {:<width$}  reference {:<22} computed {}",
                    r.status.to_string(),
                    r.claim,
                    r.reference,
                    r.computed
                )
                .unwrap();
            }
            s
        }
        Format::Csv => csv_table(
            &["claim", "reference", "computed", "status"],
            &rows
                .iter()
                .map(|r| vec![r.claim.clone(), r.reference.clone(), r.computed.clone(), r.status.to_string()])
                .collect::<Vec<_>>(),
        )?,
        Format::Json => pretty(&serde_json::to_value(&rows).expect("serialisable")),
    })
}
