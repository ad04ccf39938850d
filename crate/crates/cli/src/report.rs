use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A rectangular table of real columns. Missing values (failed evaluations)
/// are `null` in JSON and empty in CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub rows: Vec<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            labels: None,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.columns.len(), "ragged row in table {}", self.name);
        self.rows.push(row.into_iter().map(|v| v.filter(|x| x.is_finite())).collect());
    }

    pub fn push_labeled(&mut self, label: &str, row: Vec<Option<f64>>) {
        self.labels.get_or_insert_with(Vec::new).push(label.to_string());
        self.push(row);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    pub params: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Value>,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, curve: Option<String>) -> RunReport {
        RunReport {
            command: command.to_string(),
            curve,
            params: BTreeMap::new(),
            tables: Vec::new(),
            verdict: None,
            timing_ms: 0.0,
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(name.to_string(), v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn fmt_value(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x == 0.0 || (1e-4..1e6).contains(&x.abs()) => format!("{x:.10}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string(),
        Some(x) => format!("{x:.6e}"),
    }
}

fn csv_value(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

pub fn render(report: &RunReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Csv => render_csv(report, out)?,
        Format::Table => out.write_all(render_text(report).as_bytes())?,
    }
    Ok(())
}

fn render_csv(report: &RunReport, out: &mut dyn Write) -> Result<()> {
    let several = report.tables.len() > 1;
    for (i, table) in report.tables.iter().enumerate() {
        if several {
            if i > 0 {
                writeln!(out)?;
            }
            writeln!(out, "# {}", table.name)?;
        }
        let mut w = csv::Writer::from_writer(&mut *out);
        let mut header: Vec<&str> = Vec::new();
        if table.labels.is_some() {
            header.push("label");
        }
        header.extend(table.columns.iter().map(String::as_str));
        w.write_record(&header)?;
        for (k, row) in table.rows.iter().enumerate() {
            let mut rec: Vec<String> = Vec::new();
            if let Some(labels) = &table.labels {
                rec.push(labels[k].clone());
            }
            rec.extend(row.iter().map(|&v| csv_value(v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn render_text(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}", report.command);
    if let Some(curve) = &report.curve {
        let _ = write!(s, "  {curve}");
    }
    s.push('\n');
    if !report.params.is_empty() {
        let params: Vec<String> = report
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(s, "  {}", params.join("  "));
    }
    for table in &report.tables {
        let _ = writeln!(s, "\n[{}]", table.name);
        let mut header: Vec<String> = Vec::new();
        if table.labels.is_some() {
            header.push(String::new());
        }
        header.extend(table.columns.iter().cloned());
        let mut cells: Vec<Vec<String>> = vec![header];
        for (k, row) in table.rows.iter().enumerate() {
            let mut line = Vec::new();
            if let Some(labels) = &table.labels {
                line.push(labels[k].clone());
            }
            line.extend(row.iter().map(|&v| {
                if v.is_none() {
                    "-".to_string()
                } else {
                    fmt_value(v)
                }
            }));
            cells.push(line);
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:>w$}"))
                .collect();
            let _ = writeln!(s, "  {}", line.join("  ").trim_end());
        }
        for note in &table.notes {
            let _ = writeln!(s, "  note: {note}");
        }
    }
    if let Some(v) = &report.verdict {
        let decision = v.get("decision").and_then(Value::as_str).unwrap_or("?");
        let _ = writeln!(s, "\nverdict: {decision}");
    }
    let _ = writeln!(s, "\n({:.1} ms)", report.timing_ms);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut r = RunReport::new("ratio", Some("circle(r=1)".into()));
        r.param("h", 0.5);
        let mut t = Table::new("ratio", &["h", "U/T"]);
        t.push(vec![Some(0.5), Some(4.0 / 3.0)]);
        t.push(vec![Some(0.25), None]);
        r.tables.push(t);
        r
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let text = serde_json::to_string(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.tables, r.tables);
        assert_eq!(back.params, r.params);
    }

    #[test]
    fn csv_is_rectangular() {
        let mut buf = Vec::new();
        render(&sample(), Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "h,U/T");
        assert!(lines.iter().all(|l| l.matches(',').count() == 1));
        assert!(lines[2].ends_with(','));
    }

    #[test]
    fn non_finite_values_become_missing() {
        let mut t = Table::new("t", &["a"]);
        t.push(vec![Some(f64::NAN)]);
        assert_eq!(t.rows[0][0], None);
    }
}
