//! Table, CSV and JSON rendering of report documents. Numbers always use a
//! dot as decimal separator.

use std::fmt::Write as _;

use serde::Serialize;
use synthrank_core::published::Verdict;

use crate::report::{
    EquationSection, InputSummary, LedgerSection, RankDocument, RankSection, RegressDocument,
    RegressionSection, ReportDocument,
};

/// ANSI styling for table output.
#[derive(Debug, Clone, Copy, Default)]
pub struct Style {
    pub enabled: bool,
}

impl Style {
    fn paint(self, code: &str, text: &str) -> String {
        if self.enabled {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_owned()
        }
    }

    fn bold(self, text: &str) -> String {
        self.paint("1", text)
    }

    fn verdict(self, v: Verdict) -> String {
        match v {
            Verdict::Agree => self.paint("32", v.as_str()),
            Verdict::Disagree => self.paint("31", v.as_str()),
            Verdict::Info => v.as_str().to_owned(),
        }
    }
}

/// Fixed-width number for tables.
pub fn table_number(v: f64) -> String {
    if v.is_nan() {
        "n/a".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 {
        "0".into()
    } else if (1e-4..1e7).contains(&v.abs()) {
        format!("{v:.6}")
    } else {
        format!("{v:.4e}")
    }
}

fn opt_number(v: Option<f64>) -> String {
    v.map_or_else(|| "".into(), table_number)
}

/// Shortest representation that parses back to the same `f64`; empty for
/// NaN.
pub fn csv_number(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn csv_row(out: &mut String, fields: &[String]) {
    let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

fn csv_block(out: &mut String, name: &str, header: &[&str], rows: Vec<Vec<String>>) {
    if !out.is_empty() {
        out.push('\n');
    }
    let _ = writeln!(out, "# {name}");
    csv_row(out, &header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for r in rows {
        csv_row(out, &r);
    }
}

pub fn json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Columns listed in `left` are left-aligned, the rest right-aligned.
fn grid(out: &mut String, style: Style, header: &[&str], rows: &[Vec<String>], left: &[usize]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let pad = widths[i].saturating_sub(c.chars().count());
                if left.contains(&i) {
                    format!("{c}{}", " ".repeat(pad))
                } else {
                    format!("{}{c}", " ".repeat(pad))
                }
            })
            .collect();
        parts.join("  ").trim_end().to_owned()
    };
    let head = line(header.iter().map(|h| h.to_string()).collect());
    let _ = writeln!(out, "{}", style.bold(&head));
    for r in rows {
        let _ = writeln!(out, "{}", line(r.clone()));
    }
}

fn heading(out: &mut String, style: Style, text: &str) {
    if !out.is_empty() {
        out.push('\n');
    }
    let _ = writeln!(out, "{}", style.bold(text));
}

fn input_line(input: &InputSummary) -> String {
    format!(
        "input: {} ({} entities, {} variables, {} missing cells), missing-data policy: {}",
        input.source, input.n_entities, input.n_variables, input.missing_cells, input.missing_policy
    )
}

fn rank_table(out: &mut String, style: Style, rank: &RankSection) {
    heading(out, style, "Synthetic measure ranking");
    let rows: Vec<Vec<String>> = rank
        .rows
        .iter()
        .map(|r| {
            vec![
                r.rank.to_string(),
                r.entity.clone(),
                table_number(r.w),
                table_number(r.median),
                table_number(r.std),
                r.group.to_string(),
            ]
        })
        .collect();
    grid(out, style, &["rank", "entity", "w", "median", "std", "group"], &rows, &[1]);
    let c = &rank.classification;
    let _ = writeln!(
        out,
        "mean w = {}  S = {} ({})  group I: w >= {}  group IV: w < {}",
        table_number(c.mean_w),
        table_number(c.std_w),
        match c.convention {
            synthrank_core::StdConvention::Population => "population",
            synthrank_core::StdConvention::Sample => "sample",
        },
        table_number(c.upper_threshold),
        table_number(c.lower_threshold)
    );
    let s = c.group_sizes;
    let _ = writeln!(out, "group sizes: I {}, II {}, III {}, IV {}", s.i, s.ii, s.iii, s.iv);
    let _ = writeln!(out, "entities used: {}", rank.n_used);
    if !rank.removed_entities.is_empty() {
        let _ = writeln!(out, "removed (listwise): {}", rank.removed_entities.join(", "));
    }
    if !rank.imputed_cells.is_empty() {
        let cells: Vec<String> = rank
            .imputed_cells
            .iter()
            .map(|c| format!("{}:{}", c.entity, c.variable))
            .collect();
        let _ = writeln!(out, "imputed with column means: {}", cells.join(", "));
    }
    if !rank.degenerate_columns.is_empty() {
        let _ = writeln!(out, "constant columns (set to 0.5): {}", rank.degenerate_columns.join(", "));
    }
    if !rank.unit_bound_entities.is_empty() {
        let _ = writeln!(out, "score reached 1: {}", rank.unit_bound_entities.join(", "));
    }
}

fn regression_table(out: &mut String, style: Style, reg: &RegressionSection) {
    heading(
        out,
        style,
        &format!(
            "Regression of {} on {} (n = {})",
            reg.dependent,
            reg.predictors.join(", "),
            reg.n_used
        ),
    );
    let rows: Vec<Vec<String>> = reg
        .coefficients
        .iter()
        .map(|c| {
            vec![
                c.term.clone(),
                opt_number(c.b_star),
                opt_number(c.se_b_star),
                table_number(c.b),
                table_number(c.se_b),
                table_number(c.t),
                table_number(c.p),
                if c.significant == Some(true) { "*".into() } else { String::new() },
            ]
        })
        .collect();
    grid(
        out,
        style,
        &["term", "b*", "se(b*)", "b", "se(b)", "t", "p", ""],
        &rows,
        &[0],
    );
    let _ = writeln!(out, "* p < {}", reg.alpha);
    if !reg.removed_entities.is_empty() {
        let _ = writeln!(out, "removed (listwise): {}", reg.removed_entities.join(", "));
    }
    if !reg.imputed_cells.is_empty() {
        let _ = writeln!(out, "imputed cells: {}", reg.imputed_cells.len());
    }

    heading(out, style, "Fit");
    let f = &reg.fit;
    let rows = vec![
        vec!["R".into(), table_number(f.r)],
        vec!["R squared".into(), table_number(f.r2)],
        vec!["adjusted R squared".into(), table_number(f.adjusted_r2)],
        vec![format!("F({}, {})", f.df1, f.df2), table_number(f.f)],
        vec!["p".into(), table_number(f.p_f)],
        vec!["residual std error".into(), table_number(f.std_error_estimate)],
    ];
    grid(out, style, &["statistic", "value"], &rows, &[0]);

    heading(out, style, "Residual diagnostics");
    match &reg.diagnostics {
        Some(d) => {
            let rows = vec![vec![table_number(d.durbin_watson), table_number(d.serial_correlation)]];
            grid(out, style, &["Durbin-Watson", "serial correlation"], &rows, &[]);
        }
        None => {
            let _ = writeln!(out, "not available (residuals are zero or have no lagged variance)");
        }
    }
    if reg.significant_predictors.is_empty() {
        let _ = writeln!(out, "significant predictors: none");
    } else {
        let _ = writeln!(out, "significant predictors: {}", reg.significant_predictors.join(", "));
    }

    heading(out, style, "Normal probability plot");
    let rows: Vec<Vec<String>> = reg
        .normality_plot
        .iter()
        .map(|p| vec![p.observation.clone(), table_number(p.quantile), table_number(p.residual)])
        .collect();
    grid(out, style, &["observation", "quantile", "residual"], &rows, &[0]);
}

fn equation_table(out: &mut String, style: Style, eq: Option<&EquationSection>) {
    heading(out, style, "Single-predictor equation");
    match eq {
        Some(eq) => {
            let _ = writeln!(out, "{}", eq.text);
        }
        None => {
            let _ = writeln!(out, "not available (constant predictor or response)");
        }
    }
}

fn ledger_table(out: &mut String, style: Style, ledger: &LedgerSection) {
    heading(out, style, "Comparison with published values");
    let m = &ledger.membership;
    let _ = writeln!(
        out,
        "group membership matched: {}/{} (published I compared with computed I and II)",
        m.matched, m.compared
    );
    let rows: Vec<Vec<String>> = ledger
        .rows
        .iter()
        .map(|r| {
            vec![
                r.section.to_owned(),
                r.item.clone(),
                r.published.clone(),
                r.computed.clone(),
                style.verdict(r.verdict),
            ]
        })
        .collect();
    grid(out, style, &["section", "item", "published", "computed", "verdict"], &rows, &[0, 1, 2, 3, 4]);
}

pub fn rank_text(doc: &RankDocument, style: Style) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", input_line(&doc.input));
    rank_table(&mut out, style, &doc.rank);
    out
}

pub fn regress_text(doc: &RegressDocument, style: Style) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", input_line(&doc.input));
    regression_table(&mut out, style, &doc.regression);
    out
}

pub fn report_text(doc: &ReportDocument, style: Style) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", input_line(&doc.input));
    rank_table(&mut out, style, &doc.rank);
    regression_table(&mut out, style, &doc.regression);
    equation_table(&mut out, style, doc.equation.as_ref());
    if let Some(ledger) = &doc.ledger {
        ledger_table(&mut out, style, ledger);
    }
    out
}

fn rank_csv(out: &mut String, rank: &RankSection) {
    csv_block(
        out,
        "ranking",
        &["rank", "entity", "w", "median", "std", "group"],
        rank.rows
            .iter()
            .map(|r| {
                vec![
                    r.rank.to_string(),
                    r.entity.clone(),
                    csv_number(r.w),
                    csv_number(r.median),
                    csv_number(r.std),
                    r.group.to_string(),
                ]
            })
            .collect(),
    );
    let c = &rank.classification;
    csv_block(
        out,
        "classification",
        &["statistic", "value"],
        vec![
            vec!["mean_w".into(), csv_number(c.mean_w)],
            vec!["std_w".into(), csv_number(c.std_w)],
            vec!["upper_threshold".into(), csv_number(c.upper_threshold)],
            vec!["lower_threshold".into(), csv_number(c.lower_threshold)],
            vec!["group_I".into(), c.group_sizes.i.to_string()],
            vec!["group_II".into(), c.group_sizes.ii.to_string()],
            vec!["group_III".into(), c.group_sizes.iii.to_string()],
            vec!["group_IV".into(), c.group_sizes.iv.to_string()],
        ],
    );
}

fn regression_csv(out: &mut String, reg: &RegressionSection) {
    let opt = |v: Option<f64>| v.map_or_else(String::new, csv_number);
    csv_block(
        out,
        "coefficients",
        &["term", "b_star", "se_b_star", "b", "se_b", "t", "p", "significant"],
        reg.coefficients
            .iter()
            .map(|c| {
                vec![
                    c.term.clone(),
                    opt(c.b_star),
                    opt(c.se_b_star),
                    csv_number(c.b),
                    csv_number(c.se_b),
                    csv_number(c.t),
                    csv_number(c.p),
                    c.significant.map_or_else(String::new, |s| s.to_string()),
                ]
            })
            .collect(),
    );
    let f = &reg.fit;
    let mut stats = vec![
        vec!["r".into(), csv_number(f.r)],
        vec!["r2".into(), csv_number(f.r2)],
        vec!["adjusted_r2".into(), csv_number(f.adjusted_r2)],
        vec!["f".into(), csv_number(f.f)],
        vec!["df1".into(), f.df1.to_string()],
        vec!["df2".into(), f.df2.to_string()],
        vec!["p_f".into(), csv_number(f.p_f)],
        vec!["std_error_estimate".into(), csv_number(f.std_error_estimate)],
    ];
    if let Some(d) = &reg.diagnostics {
        stats.push(vec!["durbin_watson".into(), csv_number(d.durbin_watson)]);
        stats.push(vec!["serial_correlation".into(), csv_number(d.serial_correlation)]);
    }
    csv_block(out, "fit", &["statistic", "value"], stats);
    csv_block(
        out,
        "normality_plot",
        &["observation", "quantile", "residual"],
        reg.normality_plot
            .iter()
            .map(|p| vec![p.observation.clone(), csv_number(p.quantile), csv_number(p.residual)])
            .collect(),
    );
}

pub fn rank_csv_text(doc: &RankDocument) -> String {
    let mut out = String::new();
    rank_csv(&mut out, &doc.rank);
    out
}

pub fn regress_csv_text(doc: &RegressDocument) -> String {
    let mut out = String::new();
    regression_csv(&mut out, &doc.regression);
    out
}

pub fn report_csv_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    rank_csv(&mut out, &doc.rank);
    regression_csv(&mut out, &doc.regression);
    if let Some(eq) = &doc.equation {
        csv_block(
            &mut out,
            "equation",
            &["dependent", "predictor", "slope", "intercept", "residual_std_error"],
            vec![vec![
                eq.dependent.clone(),
                eq.predictor.clone(),
                csv_number(eq.slope),
                csv_number(eq.intercept),
                csv_number(eq.residual_std_error),
            ]],
        );
    }
    if let Some(ledger) = &doc.ledger {
        csv_block(
            &mut out,
            "ledger",
            &["section", "item", "published", "computed", "verdict"],
            ledger
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.section.to_owned(),
                        r.item.clone(),
                        r.published.clone(),
                        r.computed.clone(),
                        r.verdict.as_str().to_owned(),
                    ]
                })
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(table_number(1.642365), "1.642365");
        assert_eq!(table_number(0.00001234), "1.2340e-5");
        assert_eq!(table_number(f64::INFINITY), "inf");
        assert_eq!(table_number(f64::NAN), "n/a");
        assert_eq!(csv_number(0.1), "0.1");
        assert_eq!(csv_number(f64::NAN), "");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn styling_is_optional() {
        let on = Style { enabled: true };
        assert_eq!(on.bold("x"), "\x1b[1mx\x1b[0m");
        assert_eq!(Style::default().bold("x"), "x");
    }
}
