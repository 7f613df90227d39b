//! Data behind the five published plots, one CSV per figure plus a sidecar
//! text file with the parameters.
//!
//! Presets pin the smaller coupling to 1 and keep the published ratio
//! (`κ₁ = 1.2κ₂` or `κ₂ = 1.8κ₁`). The time axis is `τ = rate·t` on
//! `[0, 3]` with 301 points; the published axis range is not known, so
//! this is a choice, not a reproduction of it.

use std::fs;
use std::path::{Path, PathBuf};

use crate::criteria::{CriteriaReport, Sign};
use crate::csv::{format_value, Table};
use crate::error::{Error, Result};
use crate::sweep::{run_sweep, RunConfig, SweepResult, TauConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// VLF sums, hyperbolic preset.
    VlfHyperbolic,
    /// VLF sums, periodic preset.
    VlfPeriodic,
    /// Single-mode EPR products, both presets.
    ObrSingles,
    /// Pair EPR products, hyperbolic preset.
    ObrPairsHyperbolic,
    /// Pair EPR products, periodic preset.
    ObrPairsPeriodic,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::VlfHyperbolic,
        Figure::VlfPeriodic,
        Figure::ObrSingles,
        Figure::ObrPairsHyperbolic,
        Figure::ObrPairsPeriodic,
    ];

    pub fn from_number(n: u8) -> Result<Figure> {
        match n {
            1..=5 => Ok(Figure::ALL[n as usize - 1]),
            _ => Err(Error::Usage(format!("figure must be 1..5, got {n}"))),
        }
    }

    pub fn number(self) -> u8 {
        Figure::ALL.iter().position(|&f| f == self).unwrap() as u8 + 1
    }

    pub fn stem(self) -> String {
        format!("fig{}", self.number())
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Figure::VlfHyperbolic | Figure::VlfPeriodic => &[
                "tau", "v12_raw", "v13_raw", "v23_raw", "v12_opt", "v13_opt", "v23_opt",
            ],
            Figure::ObrSingles => &[
                "tau", "hyp_obr1", "hyp_obr2", "hyp_obr3", "per_obr1", "per_obr2", "per_obr3",
            ],
            Figure::ObrPairsHyperbolic | Figure::ObrPairsPeriodic => {
                &["tau", "obr23", "obr13", "obr12"]
            }
        }
    }
}

/// `κ₁ = 1.2`, `κ₂ = 1` on the default grid.
pub fn hyperbolic_preset() -> RunConfig {
    RunConfig {
        kappa1: 1.2,
        kappa2: 1.0,
        tau_min: 0.0,
        tau_max: 3.0,
        points: 301,
        tau_convention: TauConvention::RateTime,
        sign: Sign::Plus,
        ..RunConfig::default()
    }
}

/// `κ₁ = 1`, `κ₂ = 1.8` on the default grid.
pub fn periodic_preset() -> RunConfig {
    RunConfig {
        kappa1: 1.0,
        kappa2: 1.8,
        ..hyperbolic_preset()
    }
}

fn vlf_row(tau: f64, r: &CriteriaReport) -> Vec<f64> {
    let mut row = vec![tau];
    row.extend(r.vlf_raw.values());
    row.extend(r.vlf_opt.values());
    row
}

fn describe(label: &str, cfg: &RunConfig) -> Vec<String> {
    vec![
        format!("{label}kappa1={}", format_value(cfg.kappa1)),
        format!("{label}kappa2={}", format_value(cfg.kappa2)),
    ]
}

/// Builds the table for one figure from the given presets. `base` sets the
/// grid, convention and sign shared by both presets.
pub fn figure_table(which: Figure, base: &RunConfig) -> Result<Table> {
    let hyp = RunConfig {
        kappa1: 1.2,
        kappa2: 1.0,
        ..base.clone()
    };
    let per = RunConfig {
        kappa1: 1.0,
        kappa2: 1.8,
        ..base.clone()
    };
    let mut table = Table::new(which.header());
    table.meta.push(format!("figure={}", which.number()));
    let grid = |t: &mut Table, cfg: &RunConfig| {
        t.meta.push(format!(
            "tau_min={} tau_max={} points={} tau_convention={} sign={}",
            format_value(cfg.tau_min),
            format_value(cfg.tau_max),
            cfg.points,
            cfg.tau_convention.as_str(),
            cfg.sign.as_str()
        ));
    };

    let pick = |r: &SweepResult, f: &dyn Fn(f64, &CriteriaReport) -> Vec<f64>| -> Vec<Vec<f64>> {
        r.taus
            .iter()
            .zip(&r.reports)
            .map(|(tau, rep)| f(*tau, rep))
            .collect()
    };

    let rows = match which {
        Figure::VlfHyperbolic | Figure::VlfPeriodic => {
            let cfg = if which == Figure::VlfHyperbolic {
                &hyp
            } else {
                &per
            };
            table.meta.extend(describe("", cfg));
            grid(&mut table, cfg);
            table
                .meta
                .push("raw sums use unit gains; opt sums use the minimising gains".into());
            pick(&run_sweep(cfg)?, &vlf_row)
        }
        Figure::ObrSingles => {
            table.meta.extend(describe("hyp_", &hyp));
            table.meta.extend(describe("per_", &per));
            grid(&mut table, &hyp);
            let a = run_sweep(&hyp)?;
            let b = run_sweep(&per)?;
            a.taus
                .iter()
                .zip(a.reports.iter().zip(&b.reports))
                .map(|(tau, (ra, rb))| {
                    let mut row = vec![*tau];
                    row.extend(ra.obr_single.values());
                    row.extend(rb.obr_single.values());
                    row
                })
                .collect()
        }
        Figure::ObrPairsHyperbolic | Figure::ObrPairsPeriodic => {
            let cfg = if which == Figure::ObrPairsHyperbolic {
                &hyp
            } else {
                &per
            };
            table.meta.extend(describe("", cfg));
            grid(&mut table, cfg);
            pick(&run_sweep(cfg)?, &|tau, r| {
                let mut row = vec![tau];
                row.extend(r.obr_pair.values());
                row
            })
        }
    };
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Writes `figN.csv` and `figN.txt` into `out_dir` and returns both paths.
pub fn reproduce_figure(which: Figure, out_dir: &Path, base: &RunConfig) -> Result<Vec<PathBuf>> {
    let table = figure_table(which, base)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let csv_path = out_dir.join(format!("{}.csv", which.stem()));
    table.write(&csv_path)?;

    let sidecar = out_dir.join(format!("{}.txt", which.stem()));
    let mut text = String::new();
    for m in &table.meta {
        text.push_str(m);
        text.push('\n');
    }
    text.push_str(&format!("columns={}\n", which.header().join(",")));
    text.push_str("tau is dimensionless time; tau_convention=rate means tau = sqrt(|kappa1^2 - kappa2^2|) * t, maxkappa means tau = max(kappa1, kappa2) * t\n");
    fs::write(&sidecar, text).map_err(|e| Error::io(sidecar.display().to_string(), e))?;
    Ok(vec![csv_path, sidecar])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            points: 31,
            ..hyperbolic_preset()
        }
    }

    #[test]
    fn numbering() {
        for n in 1..=5 {
            assert_eq!(Figure::from_number(n).unwrap().number(), n);
        }
        assert!(Figure::from_number(0).is_err());
        assert!(Figure::from_number(6).is_err());
    }

    #[test]
    fn vlf_schema() {
        let t = figure_table(Figure::VlfHyperbolic, &small()).unwrap();
        assert_eq!(
            t.header.join(","),
            "tau,v12_raw,v13_raw,v23_raw,v12_opt,v13_opt,v23_opt"
        );
        assert_eq!(t.rows.len(), 31);
    }

    #[test]
    fn singles_are_unit_for_modes_two_and_three() {
        let t = figure_table(Figure::ObrSingles, &small()).unwrap();
        for col in ["hyp_obr2", "hyp_obr3", "per_obr2", "per_obr3"] {
            for v in t.column(col).unwrap() {
                assert!((v - 1.0).abs() < 1e-10, "{col}: {v}");
            }
        }
    }

    #[test]
    fn pairs_below_four_after_start() {
        let t = figure_table(Figure::ObrPairsHyperbolic, &small()).unwrap();
        for row in t.rows.iter().skip(1) {
            assert!(row[1..].iter().all(|&v| v < 4.0), "{row:?}");
        }
    }
}
