//! Text, JSON and CSV renderings of a report. All three are deterministic.

use std::fmt::Write as _;

use clap::ValueEnum;
use tateforge::invariants::{CheckRecord, ComparisonTable, TheoremReport, TruncatedSeries, Verdict, Witness};
use tateforge::Window;

use crate::input::FieldSpec;
use crate::report::{CommandResult, Report, RingLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render_report(rep: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rep).expect("reports serialize") + "\n",
        Format::Text => render_text(rep),
        Format::Csv => render_csv(rep),
    }
}

/// A titled table of strings; the first column holds row labels.
struct Table {
    title: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn bigraded(title: String, window: Window, first_row: u32, get: impl Fn(u32, u32) -> u64) -> Table {
    let mut header = vec!["i\\j".to_string()];
    header.extend((0..=window.ideg_max).map(|j| j.to_string()));
    let rows = (first_row..=window.hdeg_max)
        .map(|i| {
            let mut row = vec![i.to_string()];
            row.extend((0..=window.ideg_max).map(|j| get(i, j).to_string()));
            row
        })
        .collect();
    Table { title, header, rows }
}

fn comparison(t: &ComparisonTable) -> Table {
    let mut header = vec!["key".to_string()];
    header.extend(t.columns.iter().cloned());
    header.push("ok".into());
    let rows = t
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.key.clone()];
            row.extend(r.values.iter().map(|v| v.to_string()));
            row.push(if r.ok { "yes" } else { "NO" }.into());
            row
        })
        .collect();
    Table { title: t.title.clone(), header, rows }
}

fn series_table(title: String, columns: &[(&str, &TruncatedSeries)]) -> Table {
    let mut header = vec!["t^i".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.to_string()));
    let n = columns.iter().map(|(_, s)| s.t_max()).min().unwrap_or(0);
    let rows = (0..=n)
        .map(|i| {
            let mut row = vec![i.to_string()];
            row.extend(columns.iter().map(|(_, s)| s.coeff(i).to_string()));
            row
        })
        .collect();
    Table { title, header, rows }
}

fn ring_title(kind: &str, ring: &RingLabel) -> String {
    if ring.ideal.is_empty() {
        format!("{kind} {} (polynomial ring)", ring.name)
    } else {
        format!("{kind} {} = P/({})", ring.name, ring.ideal.join(", "))
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Bidegree { hdeg, ideg, expected, actual } => {
            format!("bidegree ({hdeg},{ideg}): expected {expected}, found {actual}")
        }
        Witness::Coefficient { index, expected, actual } => {
            format!("coefficient of t^{index}: expected {expected}, found {actual}")
        }
        Witness::Element { degree, description } => format!("{description} (degree {degree})"),
    }
}

fn status_name<T: serde::Serialize>(s: &T) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn verdict_lines(v: &Verdict) -> Vec<String> {
    let mut out =
        vec![format!("verdict: {} (window {},{})", status_name(&v.status), v.window.hdeg_max, v.window.ideg_max)];
    if let Some(w) = &v.witness {
        out.push(format!("witness: {}", witness_text(w)));
    }
    out.extend(v.notes.iter().map(|n| format!("note: {n}")));
    out
}

/// Lines and tables of one result, shared by the text and CSV renderers.
struct Section {
    title: String,
    lines: Vec<String>,
    tables: Vec<Table>,
}

fn record_section(prefix: &str, rec: &CheckRecord) -> Section {
    let mut lines = Vec::new();
    if let Some(v) = &rec.verdict {
        lines.extend(verdict_lines(v));
    }
    if let Some(w) = &rec.first_failure {
        lines.push(format!("first failure: {}", witness_text(w)));
    }
    lines.extend(rec.notes.iter().map(|n| format!("note: {n}")));
    Section {
        title: format!("{prefix} {}: {}", rec.name, status_name(&rec.outcome)),
        lines,
        tables: rec.tables.iter().map(comparison).collect(),
    }
}

fn theorem_sections(t: &TheoremReport) -> Vec<Section> {
    let mut head = Section {
        title: format!("theorem {}: {}", t.theorem, status_name(&t.outcome)),
        lines: vec![format!("I1 = ({})", t.inputs.i1.join(", ")), format!("I2 = ({})", t.inputs.i2.join(", "))],
        tables: Vec::new(),
    };
    if !t.inputs.base.is_empty() {
        head.lines.insert(0, format!("R = P/({})", t.inputs.base.join(", ")));
    }
    head.lines.extend(t.notes.iter().map(|n| format!("note: {n}")));
    let mut out = vec![head];
    out.extend(t.hypotheses.iter().map(|r| record_section("hypothesis", r)));
    out.extend(t.checks.iter().map(|r| record_section("check", r)));
    out
}

fn sections(result: &CommandResult) -> Vec<Section> {
    match result {
        CommandResult::Deviations { ring, table, totals, flags, exhausted } => {
            let mut lines = vec![format!(
                "totals: {}",
                totals.iter().enumerate().map(|(i, e)| format!("ε_{} = {e}", i + 1)).collect::<Vec<_>>().join(", ")
            )];
            lines.extend(flags.iter().map(|f| format!("flag: {f}")));
            if let Some(e) = exhausted {
                lines.push(format!("stopped early: {e}"));
            }
            let title = ring_title("deviations of", ring);
            vec![Section {
                tables: vec![bigraded(title.clone(), table.window, 1, |i, j| table.get(i, j))],
                title,
                lines,
            }]
        }
        CommandResult::Poincare { ring, betti_route, closure_route, agree, series } => {
            let title = ring_title("Poincaré series of k over", ring);
            vec![Section {
                lines: vec![format!("P(t) = {series}"), format!("routes agree: {}", if *agree { "yes" } else { "NO" })],
                tables: vec![series_table(title.clone(), &[("betti", betti_route), ("closure", closure_route)])],
                title,
            }]
        }
        CommandResult::Betti { ring, table } => {
            let title = ring_title("Betti numbers of k over", ring);
            vec![Section {
                tables: vec![bigraded(title.clone(), table.window, 0, |i, j| table.get(i, j))],
                title,
                lines: vec![],
            }]
        }
        CommandResult::Tor { table } => {
            let title = "Tor_{i,j}(S1, S2)".to_string();
            vec![Section {
                tables: vec![bigraded(title.clone(), table.window, 0, |i, j| table.get(i, j))],
                title,
                lines: vec![],
            }]
        }
        CommandResult::TorIndependence(t) => {
            let mut lines = verdict_lines(t.verdict());
            if t.intersection.is_some() {
                lines.push(format!("resolution route: {}", status_name(&t.resolution.status)));
            }
            let title = "Tor-independence".to_string();
            let grid = bigraded("Tor_{i,j}(S1, S2)".into(), t.tor.window, 0, |i, j| t.tor.get(i, j));
            vec![Section { title, lines, tables: vec![grid] }]
        }
        CommandResult::Koszul { ring, verdict } => {
            vec![Section { title: ring_title("Koszul check for", ring), lines: verdict_lines(verdict), tables: vec![] }]
        }
        CommandResult::Golod { map, check } => {
            let title = format!("Golod check for {map}");
            let mut lines = verdict_lines(&check.verdict);
            lines.push(format!("bound = {}", check.bound));
            lines.push(format!("P^S_k = {}", check.target_series));
            let table = series_table(
                title.clone(),
                &[
                    ("bound", &check.bound),
                    ("P^S_k", &check.target_series),
                    ("P^R_k", &check.source_series),
                    ("P^R_S", &check.relative_series),
                ],
            );
            vec![Section { title, lines, tables: vec![table] }]
        }
        CommandResult::Classify { map, mode, verdict } => {
            vec![Section { title: format!("{mode} for {map}"), lines: verdict_lines(verdict), tables: vec![] }]
        }
        CommandResult::Theorem(t) => theorem_sections(t),
    }
}

fn header_lines(rep: &Report) -> Vec<String> {
    let mut out = vec![format!("{} {} ({})", rep.tool, rep.version, rep.schema), format!("command: {}", rep.command)];
    if let Some(doc) = &rep.input {
        let field = match &doc.field {
            FieldSpec::Named(n) => n.clone(),
            FieldSpec::Prime { p } => format!("F_{p}"),
        };
        out.push(format!("field: {field}; variables: {}", doc.vars.join(", ")));
        if !doc.ideal.is_empty() {
            out.push(format!("base ideal: ({})", doc.ideal.join(", ")));
        }
        if let Some(i1) = &doc.i1 {
            out.push(format!("I1: ({})", i1.join(", ")));
        }
        if let Some(i2) = &doc.i2 {
            out.push(format!("I2: ({})", i2.join(", ")));
        }
        let w = doc.window;
        out.push(format!("window: hdeg {}, ideg {}, series to t^{}", w.hdeg_max, w.ideg_max, w.series_max));
    }
    out.push(rep.determinism.clone());
    out
}

fn aligned(t: &Table, out: &mut String) {
    let ncols = t.header.len();
    let mut widths = vec![0; ncols];
    for row in std::iter::once(&t.header).chain(&t.rows) {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    for row in std::iter::once(&t.header).chain(&t.rows) {
        let mut line = String::new();
        for (k, cell) in row.iter().enumerate() {
            let pad = widths[k] - cell.chars().count();
            if k == 0 {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str("  ");
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

fn render_text(rep: &Report) -> String {
    let mut out = String::new();
    for line in header_lines(rep) {
        let _ = writeln!(out, "{line}");
    }
    for result in &rep.results {
        for s in sections(result) {
            let _ = writeln!(out, "\n== {} ==", s.title);
            for line in &s.lines {
                let _ = writeln!(out, "{line}");
            }
            for t in &s.tables {
                out.push('\n');
                aligned(t, &mut out);
            }
        }
    }
    out
}

fn render_csv(rep: &Report) -> String {
    let mut out = String::new();
    for line in header_lines(rep) {
        let _ = writeln!(out, "# {line}");
    }
    for result in &rep.results {
        for s in sections(result) {
            for t in &s.tables {
                let _ = writeln!(out, "\n# {}", t.title);
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&t.header).expect("in-memory write");
                for row in &t.rows {
                    w.write_record(row).expect("in-memory write");
                }
                out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
            }
        }
    }
    out
}
