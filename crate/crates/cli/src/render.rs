//! Plain-text and JSON renderings of the audit report.

use std::fmt::Write as _;

use serde_json::{json, Value};

use gmss::counting::AuditReport;

use crate::files::ParamsFile;

fn coalition_label(coalition: &[usize]) -> String {
    let inner: Vec<String> = coalition.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Plain decimal with 12 significant digits. Display only; nothing is ever
/// decided on these.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn audit_text(file: &ParamsFile, report: &AuditReport) -> String {
    let mut out = String::new();
    let p = &file.params;
    let _ = writeln!(out, "params digest: {}", file.digest());
    let _ = writeln!(out, "participants: {}", p.moduli.len());
    let _ = writeln!(out, "bounds: m-minus={} m-plus={}", p.m_minus, p.m_plus);

    let v = &report.validation;
    let _ = writeln!(out, "conditions:");
    let _ = writeln!(out, "  4*m- < m+: {}", pass(v.bound_gap_ok));
    if v.interval_violations.is_empty() {
        let _ = writeln!(
            out,
            "  no coalition norm inside ({}, {}): PASS",
            p.m_minus, p.m_plus
        );
    } else {
        let witnesses: Vec<String> = v
            .interval_violations
            .iter()
            .map(|(c, norm)| format!("{} norm={norm}", coalition_label(c)))
            .collect();
        let _ = writeln!(
            out,
            "  no coalition norm inside ({}, {}): FAIL ({})",
            p.m_minus,
            p.m_plus,
            witnesses.join(", ")
        );
    }
    let _ = writeln!(out, "  pi-leakage margin: {}", pass(v.pi_condition_ok));
    let _ = writeln!(
        out,
        "verdict: {}",
        if v.is_valid() { "VALID" } else { "INVALID" }
    );

    match &report.secret_space_size {
        Some(size) => {
            let _ = writeln!(out, "secret space size: {size}");
        }
        None => {
            let _ = writeln!(out, "secret space size: n/a (degenerate bounds)");
        }
    }
    match &report.information_rate {
        Some(rate) => {
            let _ = writeln!(
                out,
                "information rate: log({})/log({}) ~ {}",
                rate.min_share_norm,
                rate.secret_space,
                sig12(rate.value())
            );
        }
        None => {
            let _ = writeln!(out, "information rate: n/a");
        }
    }
    match report.leakage_bound {
        Some(bound) => {
            let _ = writeln!(
                out,
                "asymptotic leakage bound: ~{} candidates",
                sig12(bound)
            );
        }
        None => {
            let _ = writeln!(out, "asymptotic leakage bound: n/a");
        }
    }

    let _ = writeln!(out, "coalitions:");
    for entry in &report.per_coalition {
        let mut line = format!(
            "  {:<10} norm={:<12} {}",
            coalition_label(&entry.coalition),
            entry.norm,
            if entry.authorized {
                "authorized"
            } else {
                "unauthorized"
            }
        );
        if let Some(count) = &entry.exact_leakage {
            let _ = write!(line, " candidates={count}");
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out
}

pub fn audit_json(file: &ParamsFile, report: &AuditReport) -> String {
    let v = &report.validation;
    let coalitions: Vec<Value> = report
        .per_coalition
        .iter()
        .map(|entry| {
            let mut item = json!({
                "coalition": entry.coalition,
                "norm": entry.norm.to_string(),
                "authorized": entry.authorized,
            });
            if let Some(count) = &entry.exact_leakage {
                item["exact_leakage"] = json!(count.to_string());
            }
            item
        })
        .collect();
    let mut value = json!({
        "digest": file.digest(),
        "participants": file.params.moduli.len(),
        "m_minus": file.params.m_minus.to_string(),
        "m_plus": file.params.m_plus.to_string(),
        "conditions": {
            "bound_gap": v.bound_gap_ok,
            "norm_interval": v.interval_violations.is_empty(),
            "interval_violations": v.interval_violations.iter().map(|(c, norm)| {
                json!({"coalition": c, "norm": norm.to_string()})
            }).collect::<Vec<_>>(),
            "pi_leakage": v.pi_condition_ok,
        },
        "valid": v.is_valid(),
        "coalitions": coalitions,
    });
    if let Some(size) = &report.secret_space_size {
        value["secret_space_size"] = json!(size.to_string());
    }
    if let Some(rate) = &report.information_rate {
        value["information_rate"] = json!({
            "min_share_norm": rate.min_share_norm.to_string(),
            "secret_space": rate.secret_space.to_string(),
            "value": rate.value(),
        });
    }
    if let Some(bound) = report.leakage_bound {
        value["leakage_bound"] = json!(bound);
    }
    let mut text = value.to_string();
    text.push('\n');
    text
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
