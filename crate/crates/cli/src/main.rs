use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tripart_core::config::{apply_setting, load_config};
use tripart_core::csv::{format_value, sweep_table};
use tripart_core::figures::{hyperbolic_preset, reproduce_figure, Figure};
use tripart_core::sweep::{evaluate_at_tau, run_oracle_check};
use tripart_core::{run_sweep, CriteriaReport, Error, RunConfig, Sign};

const EXIT_ORACLE_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COMPUTE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tripart",
    version,
    about = "Tripartite entanglement criteria for interlinked down-conversion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every criterion on a uniform tau grid and write a CSV.
    Sweep(Common),
    /// Write figure data (CSV plus a parameter sidecar) into a directory.
    Figures {
        #[command(flatten)]
        common: Common,
        /// Figure number 1..5; all figures when omitted.
        #[arg(long)]
        which: Option<u8>,
    },
    /// Cross-check the moment routes; exits nonzero if any comparison fails.
    Oracle(Common),
    /// Print every criterion at a single tau as key=value lines.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tau: f64,
    },
}

#[derive(Args)]
struct Common {
    /// Flat key=value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kappa1: Option<String>,
    #[arg(long)]
    kappa2: Option<String>,
    #[arg(long)]
    tau_min: Option<String>,
    #[arg(long)]
    tau_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// rate (tau = rate * t) or maxkappa (tau = max(kappa1, kappa2) * t).
    #[arg(long)]
    tau_convention: Option<String>,
    /// plus or minus.
    #[arg(long)]
    sign: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    mc_samples: Option<String>,
    /// RK4 steps per unit tau in oracle runs.
    #[arg(long)]
    rk4_steps: Option<String>,
    /// Output file (sweep) or directory (figures).
    #[arg(long)]
    out: Option<String>,
}

impl Common {
    fn resolve(&self, base: RunConfig) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path, base)?,
            None => base,
        };
        let flags = [
            ("kappa1", &self.kappa1),
            ("kappa2", &self.kappa2),
            ("tau-min", &self.tau_min),
            ("tau-max", &self.tau_max),
            ("points", &self.points),
            ("tau-convention", &self.tau_convention),
            ("sign", &self.sign),
            ("seed", &self.seed),
            ("mc-samples", &self.mc_samples),
            ("rk4-steps", &self.rk4_steps),
            ("out", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                apply_setting(&mut cfg, key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn print_report(tau: f64, r: &CriteriaReport) {
    let sign = match r.sign {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    };
    println!("tau={}", format_value(tau));
    println!("t={}", format_value(r.t));
    println!("sign={sign}");
    let values = [
        ("v12_raw", r.vlf_raw.v12),
        ("v13_raw", r.vlf_raw.v13),
        ("v23_raw", r.vlf_raw.v23),
        ("v12_opt", r.vlf_opt.v12),
        ("v13_opt", r.vlf_opt.v13),
        ("v23_opt", r.vlf_opt.v23),
        ("g1", r.gains.g1),
        ("g2", r.gains.g2),
        ("g3", r.gains.g3),
        ("obr1", r.obr_single.obr1),
        ("obr2", r.obr_single.obr2),
        ("obr3", r.obr_single.obr3),
        ("obr23", r.obr_pair.obr23),
        ("obr13", r.obr_pair.obr13),
        ("obr12", r.obr_pair.obr12),
    ];
    for (k, v) in values {
        println!("{k}={}", format_value(v));
    }
    println!("flag_vlf={}", r.flags.vlf);
    println!("flag_obr_single={}", r.flags.obr_single);
    println!("flag_obr_pair={}", r.flags.obr_pair);
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Sweep(common) => {
            let cfg = common.resolve(RunConfig::default())?;
            let result = run_sweep(&cfg)?;
            sweep_table(&result).write(Path::new(&cfg.out_path))?;
            eprintln!("wrote {}", cfg.out_path);
        }
        Command::Figures { common, which } => {
            let base = RunConfig {
                out_path: "figures".into(),
                ..hyperbolic_preset()
            };
            let cfg = common.resolve(base)?;
            cfg.validate()?;
            let figures = match which {
                Some(n) => vec![Figure::from_number(n)?],
                None => Figure::ALL.to_vec(),
            };
            for f in figures {
                for path in reproduce_figure(f, Path::new(&cfg.out_path), &cfg)? {
                    eprintln!("wrote {}", path.display());
                }
            }
        }
        Command::Oracle(common) => {
            let cfg = common.resolve(RunConfig::default())?;
            let summary = run_oracle_check(&cfg)?;
            for c in &summary.comparisons {
                let r = &c.report;
                let at = match r.worst_entry.as_ref().and_then(|w| w.t) {
                    Some(t) => format!(" at t={t:.6}"),
                    None => String::new(),
                };
                println!(
                    "{} {}: max_abs={:.3e} max_rel={:.3e} tol={:.0e}{at}",
                    if r.pass { "PASS" } else { "FAIL" },
                    c.name,
                    r.max_abs_err,
                    r.max_rel_err,
                    r.tolerance,
                );
            }
            let defect_ok = summary.max_symplectic_defect <= 1e-10;
            println!(
                "{} symplectic: max defect={:.3e}",
                if defect_ok { "PASS" } else { "FAIL" },
                summary.max_symplectic_defect
            );
            if !summary.all_pass() {
                return Ok(EXIT_ORACLE_FAIL);
            }
        }
        Command::Eval { common, tau } => {
            let cfg = common.resolve(RunConfig::default())?;
            let c = cfg.couplings()?;
            if !tau.is_finite() || tau < 0.0 {
                return Err(Error::Usage(format!(
                    "tau must be finite and >= 0, got {tau}"
                )));
            }
            let r = evaluate_at_tau(&c, tau, cfg.tau_convention, cfg.sign)?;
            print_report(tau, &r);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tripart: {e}");
            let code = match e {
                Error::Usage(_) => EXIT_USAGE,
                ref e if e.is_io() => EXIT_IO,
                _ => EXIT_COMPUTE,
            };
            ExitCode::from(code)
        }
    }
}
