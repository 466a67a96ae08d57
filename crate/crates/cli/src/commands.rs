use std::fmt::Write;
use std::path::{Path, PathBuf};

use entangle::indicators::{
    distinct_minor_total, full_profile_with, minor_count, total_distinct_minors, AnalysisReport,
};
use entangle::random::{derive_seed, random_state};
use entangle::separability::{classify_with, factorize_with, SeparabilityReport};
use entangle::statefile::{amps_to_pairs, state_value, to_state_json};
use entangle::tables::{check_table, table, CellKind};
use entangle::PureState;
use serde_json::{json, Value};

use crate::args::{CountArgs, MeasureArgs, Mode, RandomArgs, StateArgs};
use crate::failure::Failure;
use crate::input::{load_state, parse_chain, parse_direction};
use crate::render;

/// Branches below this probability are refused.
const UNREALIZABLE_BELOW: f64 = 1e-12;

pub struct Context {
    pub mode: Mode,
    pub eps: f64,
    pub file: Option<PathBuf>,
    pub seed: Option<u64>,
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Binary => "binary",
        Mode::Raw => "raw",
    }
}

fn u128_value(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(small) => json!(small),
        Err(_) => json!(x.to_string()),
    }
}

fn report_value(report: &AnalysisReport) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn profile_and_classify(
    state: &PureState,
    eps: f64,
) -> Result<(AnalysisReport, SeparabilityReport), Failure> {
    Ok((full_profile_with(state, eps)?, classify_with(state, eps)?))
}

pub fn analyze(ctx: &Context, args: &StateArgs) -> Result<Output, Failure> {
    let state = load_state(args, ctx.file.as_deref())?.normalize()?;
    if state.num_sites() < 2 {
        return Err(Failure::usage("analysis needs at least two sites"));
    }
    let (report, sep) = profile_and_classify(&state, ctx.eps)?;
    let mut text = format!("state       {}\n", render::ket_sum(&state));
    render::profile(&mut text, &report, ctx.mode);
    render::separability(&mut text, &sep);
    let json = json!({
        "command": "analyze",
        "mode": mode_name(ctx.mode),
        "state": state_value(&state),
        "analysis": report_value(&report),
        "separability": sep.to_value(),
    });
    Ok(Output::ok(text, json))
}

pub fn factor(ctx: &Context, args: &StateArgs) -> Result<Output, Failure> {
    let state = load_state(args, ctx.file.as_deref())?.normalize()?;
    let f = factorize_with(&state, ctx.eps)?;
    let error = state.deviation_up_to_scalar(&f.reconstruct()?)?;
    let mut text = format!("state       {}\n", render::ket_sum(&state));
    let _ = writeln!(
        text,
        "complete    {}",
        if f.is_complete() { "yes, fully factorized" } else { "no, an entangled core remains" }
    );
    render::factorization(&mut text, &f);
    let _ = writeln!(text, "round trip  {}", render::num(error));
    let json = json!({
        "command": "factor",
        "state": state_value(&state),
        "complete": f.is_complete(),
        "factorization": f.to_value(),
        "reconstruction_error": error,
    });
    Ok(Output::ok(text, json))
}

pub fn measure(ctx: &Context, args: &MeasureArgs) -> Result<Output, Failure> {
    let state = load_state(&args.state, ctx.file.as_deref())?.normalize()?;
    let mut text = format!("state       {}\n", render::ket_sum(&state));
    let (raw, steps) = if let Some(chain) = &args.chain {
        let steps = parse_chain(chain)?;
        if steps.is_empty() {
            return Err(Failure::usage("empty measurement chain"));
        }
        // Original site numbers still present, in order.
        let mut alive: Vec<usize> = (1..=state.num_sites()).collect();
        let mut current = state.clone();
        let mut log = Vec::new();
        for &(site, outcome) in &steps {
            let pos = alive.iter().position(|&s| s == site).ok_or_else(|| {
                Failure::usage(format!("site {site} is out of range or already measured"))
            })?;
            current = current.collapse(pos + 1, outcome)?.state;
            alive.remove(pos);
            let _ = writeln!(text, "measured    site {site} -> outcome {outcome}");
            log.push(json!({ "site": site, "outcome": outcome }));
        }
        (current, log)
    } else {
        let site = args.site.expect("clap requires --site");
        let (reduced, step) = match (&args.outcome, &args.direction) {
            (Some(outcome), _) => {
                let _ = writeln!(text, "measured    site {site} -> outcome {outcome}");
                (state.collapse(site, *outcome)?, json!({ "site": site, "outcome": outcome }))
            }
            (None, Some(direction)) => {
                let v = parse_direction(direction)?;
                let shown: Vec<String> = v.iter().map(|&z| render::complex(z)).collect();
                let _ = writeln!(text, "projected   site {site} onto [{}]", shown.join(", "));
                let step = json!({ "site": site, "direction": amps_to_pairs(&v) });
                (state.project_site(site, &v)?, step)
            }
            (None, None) => unreachable!("clap requires a measurement"),
        };
        (reduced.state, vec![step])
    };

    let probability = raw.norm_sqr();
    if probability < UNREALIZABLE_BELOW {
        return Err(Failure::unrealizable(format!(
            "branch is unrealizable: probability {} is below {}",
            render::num(probability),
            render::num(UNREALIZABLE_BELOW)
        )));
    }
    let remainder = raw.normalize()?;
    let _ = writeln!(text, "probability {}", render::num(probability));
    let _ = writeln!(text, "raw         {}", render::ket_sum(&raw));
    let _ = writeln!(text, "remainder   {}", render::ket_sum(&remainder));

    let (analysis, separability) = if remainder.num_sites() >= 2 {
        let (report, sep) = profile_and_classify(&remainder, ctx.eps)?;
        render::profile(&mut text, &report, ctx.mode);
        render::separability(&mut text, &sep);
        (report_value(&report), sep.to_value())
    } else {
        let _ = writeln!(text, "single site remains; nothing to profile");
        (Value::Null, Value::Null)
    };
    let json = json!({
        "command": "measure",
        "mode": mode_name(ctx.mode),
        "state": state_value(&state),
        "steps": steps,
        "probability": probability,
        "raw": state_value(&raw),
        "remainder": state_value(&remainder),
        "analysis": analysis,
        "separability": separability,
    });
    Ok(Output::ok(text, json))
}

pub fn tables(ctx: &Context, which: u8) -> Result<Output, Failure> {
    let fixture = table(which).ok_or_else(|| Failure::usage(format!("no table {which}")))?;
    let check = check_table(&fixture, ctx.eps)?;
    let mut text = format!("{}: {}\n", fixture.name, fixture.caption);
    let cells_of = || check.rows.iter().flat_map(|r| r.cells.iter().map(move |c| (r.label, c)));
    let w_row = cells_of().map(|(l, _)| l.len()).max().unwrap_or(0).max(3);
    let w_val = cells_of()
        .map(|(_, c)| c.expected.len().max(c.actual.len()))
        .max()
        .unwrap_or(0)
        .max(8);
    let _ = writeln!(
        text,
        "{:<w_row$}  {:<10}  {:<w_val$}  {:<w_val$}  status",
        "row", "cell", "expected", "computed"
    );
    let mut flagged = 0;
    let mut rows = Vec::new();
    for row in &check.rows {
        let mut cells = Vec::new();
        for cell in &row.cells {
            let kind = match cell.kind {
                CellKind::Pattern => "pattern",
                CellKind::Coarse => "coarse",
            };
            let mut status = if cell.matches { "ok".to_string() } else { "MISMATCH".to_string() };
            if let Some((_, note)) = &cell.discrepancy {
                flagged += 1;
                status = format!("{status} [flagged: {note}]");
            }
            let _ = writeln!(
                text,
                "{:<w_row$}  {:<10}  {:<w_val$}  {:<w_val$}  {status}",
                row.label,
                format!("{kind} L{}", cell.level),
                cell.expected,
                cell.actual
            );
            let mut value = json!({
                "kind": kind,
                "level": cell.level,
                "expected": cell.expected,
                "computed": cell.actual,
                "matches": cell.matches,
            });
            if let Some((printed, note)) = &cell.discrepancy {
                value["printed"] = json!(printed);
                value["note"] = json!(note);
            }
            cells.push(value);
        }
        rows.push(json!({ "label": row.label, "matches": row.matches(), "cells": cells }));
    }
    let _ = writeln!(
        text,
        "{}/{} rows match; {flagged} cells flagged against printed values",
        check.rows_matched(),
        check.rows.len()
    );
    let _ = writeln!(text, "{}", if check.passed() { "PASS" } else { "FAIL" });
    let json = json!({
        "command": "tables",
        "table": fixture.name,
        "caption": fixture.caption,
        "rows_matched": check.rows_matched(),
        "rows_total": check.rows.len(),
        "flagged_cells": flagged,
        "passed": check.passed(),
        "rows": rows,
    });
    let code = if check.passed() { 0 } else { 1 };
    Ok(Output { text, json, code })
}

pub fn count(args: &CountArgs) -> Result<Output, Failure> {
    let dims = match (&args.qubits, &args.dims) {
        (Some(n), _) => {
            if !(2..=63).contains(n) {
                return Err(Failure::usage(format!("--qubits must be in 2..=63, got {n}")));
            }
            vec![2; *n as usize]
        }
        (None, Some(d)) => d.clone(),
        (None, None) => unreachable!("clap requires --qubits or --dims"),
    };
    if dims.len() < 2 {
        return Err(Failure::usage("need at least two sites"));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Failure::usage(format!("local dimensions must be at least 2, got {d}")));
    }
    let n = dims.len();
    let levels: Vec<usize> = match args.m {
        Some(m) => vec![m],
        None => (2..=n).rev().collect(),
    };
    let counts = levels.iter().map(|&m| minor_count(&dims, m)).collect::<Result<Vec<_>, _>>()?;
    let mut text = String::new();
    for (m, c) in levels.iter().zip(&counts) {
        let _ = writeln!(text, "l_{m} = {c}");
    }
    let mut json = json!({
        "command": "count",
        "dims": dims,
        "levels": levels.iter().zip(&counts)
            .map(|(m, c)| json!({ "level": m, "count": u128_value(*c) }))
            .collect::<Vec<_>>(),
    });
    if args.m.is_none() {
        let _ = writeln!(text, "l = {}", format_list(&counts));
        let total = distinct_minor_total(&dims)?;
        let _ = writeln!(text, "total distinct = {total}");
        json["total_distinct"] = u128_value(total);
        if let Some(q) = args.qubits {
            let closed = total_distinct_minors(q)?;
            let _ = writeln!(text, "closed form (2^N-1)(2^(N-1)-1)/3 = {closed}");
            json["closed_form"] = u128_value(closed);
        }
    }
    Ok(Output::ok(text, json))
}

fn format_list(xs: &[u128]) -> String {
    let parts: Vec<String> = xs.iter().map(u128::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// File `k` uses the base seed for `k = 0` and a derived seed otherwise, so a
/// longer run extends a shorter one.
pub fn file_seed(seed: u64, k: u64) -> u64 {
    if k == 0 {
        seed
    } else {
        derive_seed(seed, k)
    }
}

pub fn random(ctx: &Context, args: &RandomArgs) -> Result<Output, Failure> {
    if args.count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    // Validate before touching the filesystem.
    random_state(&args.dims, 0)?;
    let seed = ctx.seed.unwrap_or(0);
    std::fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let mut text = String::new();
    let mut files = Vec::new();
    for k in 0..args.count {
        let s = file_seed(seed, k);
        let state = random_state(&args.dims, s)?;
        let path: PathBuf = args.out.join(format!("state-{k:03}.json"));
        write_state(&path, &state)?;
        let _ = writeln!(text, "{}  seed {s}", path.display());
        files.push(json!({ "path": path.display().to_string(), "seed": s }));
    }
    let json = json!({ "command": "random", "dims": args.dims, "seed": seed, "files": files });
    Ok(Output::ok(text, json))
}

fn write_state(path: &Path, state: &PureState) -> Result<(), Failure> {
    std::fs::write(path, to_state_json(state) + "\n").map_err(|e| Failure::io(path, e))
}
