use std::fmt::Write;

use serde::Serialize;

use super::analyze::{AnalysisReport, SCHEMA_VERSION};
use crate::sim::{Metric, SimResult, SimScenario};
use crate::stratified::{ContrastResult, GroupSummary};
use crate::survival::Arm;

/// Three decimals, with `-0.000` folded to `0.000`.
pub fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Three decimals, `<0.001` below the display threshold.
pub fn fmt_p(p: f64) -> String {
    if p < 0.001 {
        "<0.001".into()
    } else {
        format!("{p:.3}")
    }
}

fn interval(lo: f64, hi: f64) -> String {
    format!("({} to {})", fmt3(lo), fmt3(hi))
}

fn group_line(out: &mut String, name: &str, g: &GroupSummary, unit: f64) {
    let _ = writeln!(
        out,
        "  {name:<14}{:>8} {}",
        fmt3(g.estimate * unit),
        interval(g.ci_low * unit, g.ci_high * unit)
    );
}

fn contrast_line(out: &mut String, name: &str, c: &ContrastResult, scale: f64) {
    let _ = writeln!(
        out,
        "  {name:<14}{:>8} {}  p = {}",
        fmt3(c.estimate * scale),
        interval(c.ci_low * scale, c.ci_high * scale),
        fmt_p(c.p_value)
    );
}

fn weights_text(w: &[f64]) -> String {
    w.iter().map(|x| fmt3(*x)).collect::<Vec<_>>().join(", ")
}

/// Human-readable analysis table; rates multiplied by `unit_scale`.
pub fn render_analysis_table(report: &AnalysisReport) -> String {
    let unit = report.unit_scale;
    let level = 100.0 * (1.0 - report.alpha);
    let [c, t] = &report.arms;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Average hazard at tau = {} ({level}% CI, rates per {unit} person-time units)",
        report.tau
    );
    let _ = writeln!(
        out,
        "control = {c} (n={}), treatment = {t} (n={})",
        report.n[0], report.n[1]
    );

    for s in &report.strata {
        let _ = writeln!(
            out,
            "\nStratum {} (n: {} {}, {} {})",
            s.label, c, s.n[0], t, s.n[1]
        );
        if let Some([g0, g1]) = &s.difference.group_summaries {
            group_line(&mut out, &format!("AH {c}"), g0, unit);
            group_line(&mut out, &format!("AH {t}"), g1, unit);
        }
        contrast_line(&mut out, "DAH", &s.difference, unit);
        match &s.ratio {
            Some(r) => contrast_line(&mut out, "RAH", r, 1.0),
            None => {
                let _ = writeln!(
                    out,
                    "  {:<14}{:>8}  (no events by tau in one arm)",
                    "RAH", "-"
                );
            }
        }
    }

    for m in &report.methods {
        let _ = writeln!(out, "\nMethod: {}", m.method.name());
        if m.weights_difference == m.weights_ratio {
            let _ = writeln!(
                out,
                "  weights       {}",
                weights_text(&m.weights_difference)
            );
        } else {
            let _ = writeln!(
                out,
                "  weights DAH   {}",
                weights_text(&m.weights_difference)
            );
            let _ = writeln!(out, "  weights RAH   {}", weights_text(&m.weights_ratio));
        }
        match &m.groups {
            Some([g0, g1]) => {
                group_line(&mut out, &format!("AH {c}"), g0, unit);
                group_line(&mut out, &format!("AH {t}"), g1, unit);
            }
            None => {
                let _ = writeln!(out, "  {:<14}{:>8}", format!("AH {c}"), "-");
                let _ = writeln!(out, "  {:<14}{:>8}", format!("AH {t}"), "-");
            }
        }
        contrast_line(&mut out, "DAH", &m.difference, unit);
        contrast_line(&mut out, "RAH", &m.ratio, 1.0);
    }

    if !report.diagnostics.is_empty() {
        let _ = writeln!(out, "\nDiagnostics");
        for d in &report.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
    }
    out
}

/// Pretty-printed JSON; keys and nesting follow [`AnalysisReport`].
pub fn render_analysis_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SimulationDocument<'a> {
    schema_version: u32,
    software: Software,
    unit_scale: f64,
    scenario: &'a SimScenario,
    result: &'a SimResult,
}

#[derive(Serialize)]
struct Software {
    name: &'static str,
    version: &'static str,
}

const SOFTWARE: Software = Software {
    name: env!("CARGO_PKG_NAME"),
    version: env!("CARGO_PKG_VERSION"),
};

/// Machine-readable simulation output; rates in base units.
pub fn render_simulation_json(scenario: &SimScenario, result: &SimResult) -> String {
    let doc = SimulationDocument {
        schema_version: SCHEMA_VERSION,
        software: SOFTWARE,
        unit_scale: 1.0,
        scenario,
        result,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("simulation result serializes");
    s.push('\n');
    s
}

/// Simulation summary laid out by tau: true value, minimum average risk set,
/// bias and coverage for each metric. Rates and their bias use `unit_scale`.
pub fn render_simulation_table(result: &SimResult, unit_scale: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Scenario {} (seed {}, {} replicates, {} per arm; rates per {unit_scale})",
        result.scenario, result.seed, result.replications, result.n_per_arm
    );
    let _ = write!(out, "{:<18}", "");
    for t in &result.taus {
        let _ = write!(out, "{:>10}", format!("tau={}", t.tau));
    }
    out.push('\n');

    let row = |out: &mut String, name: &str, value: &dyn Fn(&crate::sim::TauSummary) -> String| {
        let _ = write!(out, "  {name:<16}");
        for t in &result.taus {
            let _ = write!(out, "{:>10}", value(t));
        }
        out.push('\n');
    };

    let metrics = [
        Metric::AhTreatment,
        Metric::AhControl,
        Metric::Dah,
        Metric::LogRah,
    ];
    for m in metrics {
        let scale = if m.is_rate() { unit_scale } else { 1.0 };
        let _ = writeln!(out, "{}", m.label());
        row(&mut out, "True Value", &|t| fmt3(t.metric(m).truth * scale));
        let arm = match m {
            Metric::AhTreatment => Some(Arm::Treatment),
            Metric::AhControl => Some(Arm::Control),
            _ => None,
        };
        if let Some(arm) = arm {
            row(&mut out, "min(n)", &|t| {
                format!("{:.1}", t.risk_set(arm).min_avg_risk_set)
            });
        }
        row(&mut out, "Bias", &|t| fmt3(t.metric(m).bias * scale));
        row(&mut out, "Coverage", &|t| fmt3(t.metric(m).coverage));
    }
    let f = &result.failures;
    let _ = writeln!(
        out,
        "failed replicates: {} (tau beyond data {}, zero events {}, other {})",
        f.replicates_failed, f.tau_beyond_data, f.zero_events, f.other
    );
    let _ = writeln!(out, "{} {}", SOFTWARE.name, SOFTWARE.version);
    out
}
