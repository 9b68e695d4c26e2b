//! Text, JSON and CSV rendering.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::split_model::EquivalenceReport;
use crate::to_db;
use crate::witnesses::WitnessReport;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn csv_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "detected",
        Some(false) => "not detected",
        None => "-",
    }
}

pub fn report_json(raw: &Value, report: &WitnessReport) -> Value {
    let mut body = serde_json::to_value(report).expect("report is always serialisable");
    if report.xi2.is_none() {
        body["xi2"] = json!("undefined");
        body["xi2_db"] = json!("undefined");
    }
    json!({ "input": raw, "report": body })
}

pub fn report_text(index: usize, label: Option<&str>, r: &WitnessReport) -> String {
    let mut s = String::new();
    match label {
        Some(l) => writeln!(s, "record {index}: {l}"),
        None => writeln!(s, "record {index}"),
    }
    .ok();
    let mut line = |name: &str, value: String| {
        writeln!(s, "  {name:<28} {value}").ok();
    };
    line("N", r.n_particles.to_string());
    line(
        "xi2",
        match (r.xi2, r.xi2_db) {
            (Some(v), Some(db)) => format!("{v:.6} ({db:.3} dB)"),
            _ => "undefined".to_string(),
        },
    );
    line("depth (state independent)", opt(r.depth_state_independent));
    line("depth (Fisher)", opt(r.depth_fisher));
    line("depth (polarization)", opt(r.depth_sm));
    line("max entangled modes", opt(r.max_entangled_modes));
    if let Some(m) = r.modes {
        line("modes M", m.to_string());
        line(
            "mode inseparability",
            match r.mode_insep_k {
                Some(2) => "fully inseparable (k = 2)".to_string(),
                Some(k) => format!("excludes {k} or more blocks"),
                None => "not detected".to_string(),
            },
        );
        for e in &r.gk2_symmetric {
            line(
                &format!("G_k^2 k={} (symmetric)", e.k),
                format!("{:.6}", e.value),
            );
        }
    }
    for e in &r.gk2_modes {
        line(
            &format!("G_k^2 k={} (modes)", e.k),
            format!("{:.6}", e.value),
        );
    }
    if let Some(g) = r.g2 {
        line("G^2", format!("{g:.6}"));
    }
    if let Some(v) = r.r2 {
        line("R^2", format!("{v:.6}"));
        line(
            "two-way steering (R^2)",
            flag(r.steering.r2_violated).into(),
        );
        line("steering B by A (SM)", flag(r.steering.sm_b_by_a).into());
        line("steering A by B (SM)", flag(r.steering.sm_a_by_b).into());
    }
    for e in &r.errors {
        line(&format!("note [{}]", e.field), e.message.clone());
    }
    s
}

fn pass(v: bool) -> &'static str {
    if v {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn equivalence_text(r: &EquivalenceReport) -> String {
    let mut s = String::new();
    writeln!(s, "N = {}, M = {}", r.n, r.modes).ok();
    writeln!(s, "xi2 = {:.16e} ({:.4} dB)", r.xi2, to_db(r.xi2)).ok();
    if let (Some(g), Some(ok)) = (r.g2, r.g2_pass) {
        writeln!(s, "G2  = {g:.16e}  G2 = xi2: {}", pass(ok)).ok();
    }
    if let (Some(v), Some(ok)) = (r.r2, r.r2_pass) {
        writeln!(s, "R2  = {v:.16e}  R2 = 4 xi2: {}", pass(ok)).ok();
    }
    writeln!(
        s,
        "k  formula                  modes                    check"
    )
    .ok();
    for g in &r.gk2 {
        writeln!(
            s,
            "{:<2} {:.16e}  {:.16e}  {}",
            g.k,
            g.formula,
            g.modes,
            pass(g.pass)
        )
        .ok();
    }
    writeln!(s, "{}", pass(r.passed())).ok();
    s
}

pub fn equivalence_json(r: &EquivalenceReport) -> Value {
    json!({
        "n": r.n,
        "modes": r.modes,
        "xi2": r.xi2,
        "g2": r.g2,
        "r2": r.r2,
        "g2_pass": r.g2_pass,
        "r2_pass": r.r2_pass,
        "gk2": r.gk2.iter().map(|g| json!({
            "k": g.k, "formula": g.formula, "modes": g.modes, "pass": g.pass
        })).collect::<Vec<_>>(),
        "pass": r.passed(),
    })
}
