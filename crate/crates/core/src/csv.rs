//! Plain CSV tables: `#` metadata lines, one header line, then rows of
//! numbers printed with 17 significant digits so they parse back to the
//! same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::criteria::CriteriaReport;
use crate::error::{Error, Result};
use crate::sweep::SweepResult;

/// Shortest fixed-width form that round-trips an `f64`: 17 significant
/// digits in scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Table> {
        let mut table = Table::default();
        let mut lines = text.lines().enumerate();
        for (_, line) in lines.by_ref() {
            if let Some(m) = line.strip_prefix('#') {
                table.meta.push(m.trim_start().to_string());
                continue;
            }
            table.header = line.split(',').map(str::to_string).collect();
            break;
        }
        if table.header.is_empty() {
            return Err(Error::InvalidInput("csv has no header line".into()));
        }
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|cell| {
                    cell.trim().parse::<f64>().map_err(|e| {
                        Error::InvalidInput(format!("line {}: bad number {cell:?}: {e}", n + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != table.header.len() {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected {} cells, got {}",
                    n + 1,
                    table.header.len(),
                    row.len()
                )));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn read(path: &Path) -> Result<Table> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Table::parse(&text)
    }
}

/// Column order of a full sweep file.
pub const SWEEP_HEADER: [&str; 20] = [
    "tau",
    "t",
    "v12_raw",
    "v13_raw",
    "v23_raw",
    "v12_opt",
    "v13_opt",
    "v23_opt",
    "g1",
    "g2",
    "g3",
    "obr1",
    "obr2",
    "obr3",
    "obr23",
    "obr13",
    "obr12",
    "flag_vlf",
    "flag_obr_single",
    "flag_obr_pair",
];

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn sweep_row(tau: f64, r: &CriteriaReport) -> Vec<f64> {
    let mut row = vec![tau, r.t];
    row.extend(r.vlf_raw.values());
    row.extend(r.vlf_opt.values());
    row.extend([r.gains.g1, r.gains.g2, r.gains.g3]);
    row.extend(r.obr_single.values());
    row.extend(r.obr_pair.values());
    row.extend([
        flag(r.flags.vlf),
        flag(r.flags.obr_single),
        flag(r.flags.obr_pair),
    ]);
    row
}

pub fn sweep_table(result: &SweepResult) -> Table {
    let mut table = Table::new(&SWEEP_HEADER);
    let m = &result.meta;
    table.meta = vec![
        format!("kappa1={}", format_value(m.kappa1)),
        format!("kappa2={}", format_value(m.kappa2)),
        format!("regime={:?}", m.regime),
        format!("tau_convention={}", m.tau_convention.as_str()),
        format!("sign={}", m.sign.as_str()),
        "vlf_raw uses unit gains; vlf_opt uses the minimising gains g1,g2,g3".into(),
    ];
    for (tau, r) in result.taus.iter().zip(&result.reports) {
        table.push_row(sweep_row(*tau, r));
    }
    table
}
