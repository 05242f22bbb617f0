//! Text and CSV emitters for analysis results.
//!
//! All emitters are pure string builders with deterministic output:
//! identical inputs yield identical bytes. Numbers are rendered in
//! shortest round-trip decimal (Rust's default float `Display`), so CSV
//! consumers can reconstruct the exact binary values.

use margins::{Evaluation, PortfolioAnalysis, Verdict, Violation};

/// Exact header of the scatter block of the plot-data CSV.
pub const PLOT_HEADER: &str = "id,p_cat,expected_social_cost,label,margin";
/// Exact header of the bound-line block of the plot-data CSV.
pub const BOUND_HEADER: &str = "rival_id,slope,intercept";

fn align(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn num(x: f64) -> String {
    format!("{x}")
}

/// Per-alternative evaluation table.
pub fn evaluation_table(evals: &[Evaluation]) -> String {
    let mut rows = vec![vec![
        "id".to_string(),
        "c_good".to_string(),
        "c_fail".to_string(),
        "c_premium".to_string(),
        "p_cat".to_string(),
        "expected_social_cost".to_string(),
        "stderr".to_string(),
    ]];
    for e in evals {
        rows.push(vec![
            e.id.to_string(),
            num(e.c_good),
            num(e.c_fail),
            num(e.c_premium),
            num(e.p_cat),
            num(e.expected_social_cost),
            num(e.stderr),
        ]);
    }
    align(&rows)
}

/// Classification report: the optimum, then per-alternative labels,
/// margins, and reliability premiums.
pub fn classification_report(analysis: &PortfolioAnalysis) -> String {
    let optimal = analysis.optimal();
    let mut out = format!(
        "optimal: {} (expected social cost {})\n\n",
        analysis.optimal_id,
        num(optimal.expected_social_cost)
    );
    let mut rows = vec![vec![
        "id".to_string(),
        "label".to_string(),
        "p_cat".to_string(),
        "expected_social_cost".to_string(),
        "margin".to_string(),
        "reliability_premium".to_string(),
    ]];
    for e in &analysis.evaluations {
        rows.push(vec![
            e.id.to_string(),
            analysis.labels[&e.id].to_string(),
            num(e.p_cat),
            num(e.expected_social_cost),
            num(analysis.margins[&e.id]),
            analysis
                .reliability_premiums
                .get(&e.id)
                .map(|p| num(*p))
                .unwrap_or_else(|| "-".to_string()),
        ]);
    }
    out.push_str(&align(&rows));
    out
}

/// Bound-check table for every rival of the optimum.
pub fn bounds_table(analysis: &PortfolioAnalysis) -> String {
    let mut out = format!("optimal: {}\n\n", analysis.optimal_id);
    let mut rows = vec![vec![
        "rival_id".to_string(),
        "slope".to_string(),
        "intercept".to_string(),
        "satisfied".to_string(),
        "degenerate".to_string(),
    ]];
    for check in &analysis.bound_checks {
        rows.push(vec![
            check.rival_id.to_string(),
            num(check.slope),
            num(check.intercept),
            check.satisfied.to_string(),
            check.degenerate.to_string(),
        ]);
    }
    out.push_str(&align(&rows));
    out
}

/// Plot-data CSV: a scatter block (one row per alternative, in input
/// order) and a bound-line block (one row per rival), separated by a blank
/// line.
pub fn plot_data_csv(analysis: &PortfolioAnalysis) -> String {
    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for e in &analysis.evaluations {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.id,
            num(e.p_cat),
            num(e.expected_social_cost),
            analysis.labels[&e.id],
            num(analysis.margins[&e.id]),
        ));
    }
    out.push('\n');
    out.push_str(BOUND_HEADER);
    out.push('\n');
    for check in &analysis.bound_checks {
        out.push_str(&format!(
            "{},{},{}\n",
            check.rival_id,
            num(check.slope),
            num(check.intercept),
        ));
    }
    out
}

/// One violation per line.
pub fn violations_listing(violations: &[Violation]) -> String {
    let mut out = String::new();
    for v in violations {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// The single-line verdict the `hand-rule` verb prints.
pub fn verdict_line(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Negligent => "NEGLIGENT",
        Verdict::NotNegligent => "NOT-NEGLIGENT",
    }
}
