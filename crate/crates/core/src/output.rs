//! Deterministic text rendering of budgets, sweeps and oracle reports.
//!
//! Output is byte-stable: the same inputs always produce the same bytes,
//! independent of thread count or platform, so downstream tooling can diff
//! results. Floats render in scientific notation with the shortest
//! representation that round-trips.
//!
//! CSV schema (one row per mechanism with a non-zero contribution):
//!
//! ```csv
//! axis,mechanism,psd_w_per_hz,power_w,photons_per_s
//! 50,sprs_counter,1.1e-18,2.2e-9,8.5e9
//! ```
//!
//! For a single budget the axis column carries the fiber length; for a sweep
//! it carries the swept value.

use std::fmt::Write as _;

use crate::scenario::{NoiseBudget, OracleCheckRow, SweepResult, SCHEMA_VERSION};

/// Header line shared by budget and sweep CSV output.
pub const BUDGET_CSV_HEADER: &str = "axis,mechanism,psd_w_per_hz,power_w,photons_per_s";

/// Header line for oracle-check CSV output.
pub const ORACLE_CSV_HEADER: &str = "mechanism,closed_form,oracle,rel_error,status";

fn push_budget_rows(out: &mut String, axis_value: f64, budget: &NoiseBudget) {
    for (mechanism, entry) in budget.entries() {
        if entry.is_zero() {
            continue;
        }
        writeln!(
            out,
            "{axis_value},{mechanism},{:e},{:e},{:e}",
            entry.psd_w_per_hz, entry.power_w, entry.photons_per_s
        )
        .expect("string write");
    }
}

/// Renders a single budget as CSV, using `axis_value` (normally the fiber
/// length) for the axis column.
pub fn budget_csv(budget: &NoiseBudget, axis_value: f64) -> String {
    let mut out = String::from(BUDGET_CSV_HEADER);
    out.push('\n');
    push_budget_rows(&mut out, axis_value, budget);
    out
}

/// Renders a sweep as CSV, one group of mechanism rows per axis value, in
/// axis order.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(BUDGET_CSV_HEADER);
    out.push('\n');
    for point in &result.points {
        push_budget_rows(&mut out, point.axis_value, &point.budget);
    }
    out
}

/// Renders a single budget as pretty JSON (trailing newline included).
pub fn budget_json(budget: &NoiseBudget, axis_value: f64) -> String {
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "axis": "length",
        "axis_value": axis_value,
        "budget": budget,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("budget serializes");
    s.push('\n');
    s
}

/// Renders a sweep as pretty JSON (trailing newline included).
pub fn sweep_json(result: &SweepResult) -> String {
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "axis": result.axis.label(),
        "points": result.points,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("sweep serializes");
    s.push('\n');
    s
}

fn status_str(row: &OracleCheckRow) -> &'static str {
    use crate::scenario::CheckStatus::*;
    match row.status {
        Ok => "ok",
        ToleranceExceeded => "tolerance_exceeded",
        NonConvergent => "non_convergent",
    }
}

/// Renders an oracle-check report as CSV. Non-convergent rows leave the
/// oracle and rel_error fields empty.
pub fn oracle_report_csv(rows: &[OracleCheckRow]) -> String {
    let mut out = String::from(ORACLE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let oracle = row.oracle.map(|v| format!("{v:e}")).unwrap_or_default();
        let rel = row.rel_error.map(|v| format!("{v:e}")).unwrap_or_default();
        writeln!(
            out,
            "{},{:e},{},{},{}",
            row.mechanism,
            row.closed_form,
            oracle,
            rel,
            status_str(row)
        )
        .expect("string write");
    }
    out
}

/// Renders an oracle-check report as pretty JSON (trailing newline included).
pub fn oracle_report_json(rows: &[OracleCheckRow], tolerance: f64) -> String {
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tolerance": tolerance,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{BudgetEntry, CheckStatus, SweepAxis, SweepPoint};

    fn entry(psd: f64, power: f64, photons: f64) -> BudgetEntry {
        BudgetEntry {
            psd_w_per_hz: psd,
            power_w: power,
            photons_per_s: photons,
        }
    }

    fn fixture_budget() -> NoiseBudget {
        NoiseBudget {
            sprs_co: entry(1e-18, 2e-9, 7.75e9),
            sprs_counter: BudgetEntry::ZERO,
            rayleigh_ase: BudgetEntry::ZERO,
            co_leakage: BudgetEntry::ZERO,
            fwm: BudgetEntry::ZERO,
            background: entry(2e-22, 4e-13, 3.1e6),
            total: entry(1.0002e-18, 2.0004e-9, 7.7531e9),
            fwm_averaged: None,
            synthesized_sprs: false,
        }
    }

    #[test]
    fn budget_csv_skips_zero_mechanisms_and_has_no_total_row() {
        let csv = budget_csv(&fixture_budget(), 50.0);
        let expected = "axis,mechanism,psd_w_per_hz,power_w,photons_per_s\n\
                        50,sprs_co,1e-18,2e-9,7.75e9\n\
                        50,background,2e-22,4e-13,3.1e6\n";
        assert_eq!(csv, expected);
    }

    #[test]
    fn supplementary_fwm_entry_is_rendered_when_present() {
        let mut budget = fixture_budget();
        budget.fwm = entry(1e-20, 2e-11, 7.75e7);
        budget.fwm_averaged = Some(entry(5e-21, 1e-11, 3.875e7));
        let csv = budget_csv(&budget, 25.0);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[3], "25,fwm_averaged,5e-21,1e-11,3.875e7");
        assert_eq!(
            lines[2], "25,fwm,1e-20,2e-11,7.75e7",
            "exact fwm row precedes the averaged diagnostic"
        );
    }

    #[test]
    fn sweep_csv_orders_rows_by_axis() {
        let result = SweepResult {
            axis: SweepAxis::Length,
            points: vec![
                SweepPoint {
                    axis_value: 1.0,
                    budget: fixture_budget(),
                },
                SweepPoint {
                    axis_value: 1.25,
                    budget: fixture_budget(),
                },
            ],
        };
        let csv = sweep_csv(&result);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,sprs_co,"));
        assert!(lines[3].starts_with("1.25,sprs_co,"));
    }

    #[test]
    fn rendering_is_byte_deterministic() {
        let budget = fixture_budget();
        assert_eq!(budget_csv(&budget, 50.0), budget_csv(&budget, 50.0));
        assert_eq!(budget_json(&budget, 50.0), budget_json(&budget, 50.0));
    }

    #[test]
    fn budget_json_mirrors_the_budget() {
        let text = budget_json(&fixture_budget(), 50.0);
        assert!(text.ends_with('\n'));
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["axis"], "length");
        assert_eq!(doc["axis_value"], 50.0);
        assert_eq!(doc["budget"]["sprs_co"]["psd_w_per_hz"], 1e-18);
        assert_eq!(doc["budget"]["total"]["photons_per_s"], 7.7531e9);
        assert!(doc["budget"]["fwm_averaged"].is_null());
    }

    #[test]
    fn sweep_json_names_the_axis() {
        let result = SweepResult {
            axis: SweepAxis::QuantumFrequency,
            points: vec![SweepPoint {
                axis_value: 194.7,
                budget: fixture_budget(),
            }],
        };
        let doc: serde_json::Value = serde_json::from_str(&sweep_json(&result)).unwrap();
        assert_eq!(doc["axis"], "quantum-frequency");
        assert_eq!(doc["points"][0]["axis_value"], 194.7);
    }

    #[test]
    fn oracle_report_csv_renders_all_statuses() {
        let rows = vec![
            OracleCheckRow {
                mechanism: "sprs_co_ch0".into(),
                closed_form: 1e-9,
                oracle: Some(1e-9),
                rel_error: Some(0.0),
                status: CheckStatus::Ok,
            },
            OracleCheckRow {
                mechanism: "fwm_1_1_0".into(),
                closed_form: 2e-12,
                oracle: None,
                rel_error: None,
                status: CheckStatus::NonConvergent,
            },
        ];
        let csv = oracle_report_csv(&rows);
        let expected = "mechanism,closed_form,oracle,rel_error,status\n\
                        sprs_co_ch0,1e-9,1e-9,0e0,ok\n\
                        fwm_1_1_0,2e-12,,,non_convergent\n";
        assert_eq!(csv, expected);

        let doc: serde_json::Value =
            serde_json::from_str(&oracle_report_json(&rows, 1e-6)).unwrap();
        assert_eq!(doc["tolerance"], 1e-6);
        assert_eq!(doc["rows"][0]["status"], "ok");
        assert_eq!(doc["rows"][1]["status"], "non_convergent");
        assert!(doc["rows"][1]["oracle"].is_null());
    }
}
