//! Parameter sweeps over dimensionless time and the oracle cross-check run.

use rayon::prelude::*;

use crate::criteria::{evaluate_all, CriteriaReport, Sign};
use crate::error::{Error, Result};
use crate::moments::{Couplings, RegimeKind};
use crate::oracle::{compare_moments, mc_moments, rk4_propagator, ComparisonReport};
use crate::propagator::{closed_form_moments, moments_at, propagator_analytic, Method};

/// How dimensionless time `τ` maps to physical time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TauConvention {
    /// `τ = Ω·t` (hyperbolic) or `τ = ξ·t` (periodic). Degenerate couplings
    /// have no rate and fall back to `max(κ₁, κ₂)·t`.
    #[default]
    RateTime,
    /// `τ = max(κ₁, κ₂)·t`.
    MaxKappaTime,
}

impl TauConvention {
    /// The factor `s` with `τ = s·t`.
    pub fn scale(self, c: &Couplings) -> f64 {
        let regime = c.regime();
        match self {
            TauConvention::RateTime if regime.kind != RegimeKind::Degenerate => regime.rate,
            _ => c.max_kappa(),
        }
    }

    pub fn time_for(self, c: &Couplings, tau: f64) -> f64 {
        tau / self.scale(c)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TauConvention::RateTime => "rate",
            TauConvention::MaxKappaTime => "maxkappa",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kappa1: f64,
    pub kappa2: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    pub tau_convention: TauConvention,
    pub sign: Sign,
    pub seed: u64,
    pub mc_samples: usize,
    /// RK4 steps per unit of `τ` in oracle runs.
    pub rk4_steps: usize,
    pub out_path: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kappa1: 1.2,
            kappa2: 1.0,
            tau_min: 0.0,
            tau_max: 3.0,
            points: 301,
            tau_convention: TauConvention::RateTime,
            sign: Sign::Plus,
            seed: 1,
            mc_samples: 1_000_000,
            rk4_steps: 10_000,
            out_path: "sweep.csv".into(),
        }
    }
}

impl RunConfig {
    pub fn couplings(&self) -> Result<Couplings> {
        Couplings::new(self.kappa1, self.kappa2).map_err(|e| Error::Usage(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.couplings()?;
        if !self.tau_min.is_finite() || self.tau_min < 0.0 {
            return Err(Error::Usage(format!(
                "tau-min must be finite and >= 0, got {}",
                self.tau_min
            )));
        }
        if !self.tau_max.is_finite() || self.tau_max <= self.tau_min {
            return Err(Error::Usage(format!(
                "tau-max must be finite and greater than tau-min ({}), got {}",
                self.tau_min, self.tau_max
            )));
        }
        if self.points < 2 {
            return Err(Error::Usage(format!(
                "points must be >= 2, got {}",
                self.points
            )));
        }
        if self.mc_samples == 0 {
            return Err(Error::Usage("mc-samples must be >= 1".into()));
        }
        if self.rk4_steps == 0 {
            return Err(Error::Usage("rk4-steps must be >= 1".into()));
        }
        Ok(())
    }

    /// Uniform grid from `tau_min` to `tau_max` inclusive.
    pub fn taus(&self) -> Vec<f64> {
        let span = self.tau_max - self.tau_min;
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.tau_max
                } else {
                    self.tau_min + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepMeta {
    pub kappa1: f64,
    pub kappa2: f64,
    pub tau_convention: TauConvention,
    pub sign: Sign,
    pub regime: RegimeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub taus: Vec<f64>,
    pub reports: Vec<CriteriaReport>,
    pub meta: SweepMeta,
}

/// Evaluates every criterion at one `τ`.
pub fn evaluate_at_tau(
    c: &Couplings,
    tau: f64,
    convention: TauConvention,
    sign: Sign,
) -> Result<CriteriaReport> {
    let t = convention.time_for(c, tau);
    let m = moments_at(c, t, Method::Analytic)?;
    Ok(evaluate_all(&m, t, sign))
}

/// Criteria on the configured grid. Points are evaluated in parallel and
/// collected in grid order.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let c = cfg.couplings()?;
    let taus = cfg.taus();
    let reports = taus
        .par_iter()
        .map(|&tau| evaluate_at_tau(&c, tau, cfg.tau_convention, cfg.sign))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        taus,
        reports,
        meta: SweepMeta {
            kappa1: cfg.kappa1,
            kappa2: cfg.kappa2,
            tau_convention: cfg.tau_convention,
            sign: cfg.sign,
            regime: c.regime().kind,
        },
    })
}

/// Tolerance for agreement between exact routes.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for RK4 against the matrix exponential.
pub const RK4_TOL: f64 = 1e-8;
/// Tolerance for Monte-Carlo moments.
pub const MC_TOL: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedComparison {
    pub name: &'static str,
    pub report: ComparisonReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub comparisons: Vec<NamedComparison>,
    /// Largest `|mx·myᵀ − I|` entry over all propagators and grid points.
    pub max_symplectic_defect: f64,
}

impl OracleSummary {
    pub fn all_pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.report.pass) && self.max_symplectic_defect <= 1e-10
    }
}

/// Compares every moment route against the matrix exponential on the grid:
/// closed-form moments (skipped for degenerate couplings), propagator outer
/// products, and RK4 with `rk4_steps` per unit `τ`. Monte-Carlo moments with
/// `mc_samples` draws are compared once, at the middle of the grid.
pub fn run_oracle_check(cfg: &RunConfig) -> Result<OracleSummary> {
    cfg.validate()?;
    let c = cfg.couplings()?;
    let taus = cfg.taus();
    let degenerate = c.regime().kind == RegimeKind::Degenerate;

    struct PointResult {
        closed: Option<ComparisonReport>,
        outer: ComparisonReport,
        rk4: ComparisonReport,
        defect: f64,
    }

    let points = taus
        .par_iter()
        .map(|&tau| -> Result<PointResult> {
            let t = cfg.tau_convention.time_for(&c, tau);
            let reference = moments_at(&c, t, Method::Expm)?;
            let analytic = propagator_analytic(&c, t)?;
            let steps = ((cfg.rk4_steps as f64 * tau).ceil() as usize).max(1);
            let rk4 = rk4_propagator(&c, t, steps)?;
            let expm = crate::propagator::propagator_expm(&c, t)?;
            let closed = if degenerate {
                None
            } else {
                let m = closed_form_moments(&c, t)?;
                Some(compare_moments(&m, &reference, EXACT_TOL).at_time(t))
            };
            Ok(PointResult {
                closed,
                outer: compare_moments(&analytic.vacuum_moments(), &reference, EXACT_TOL)
                    .at_time(t),
                rk4: compare_moments(&rk4.vacuum_moments(), &reference, RK4_TOL).at_time(t),
                defect: analytic
                    .symplectic_defect()
                    .max(expm.symplectic_defect())
                    .max(rk4.symplectic_defect()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut closed = ComparisonReport::empty(EXACT_TOL);
    let mut outer = ComparisonReport::empty(EXACT_TOL);
    let mut rk4 = ComparisonReport::empty(RK4_TOL);
    let mut defect: f64 = 0.0;
    for p in points {
        if let Some(r) = p.closed {
            closed = closed.merge(r);
        }
        outer = outer.merge(p.outer);
        rk4 = rk4.merge(p.rk4);
        defect = defect.max(p.defect);
    }

    let mid_tau = taus[taus.len() / 2];
    let mid_t = cfg.tau_convention.time_for(&c, mid_tau);
    let mc = mc_moments(&c, mid_t, cfg.mc_samples, cfg.seed)?;
    let mc_report =
        compare_moments(&mc, &moments_at(&c, mid_t, Method::Expm)?, MC_TOL).at_time(mid_t);

    let mut comparisons = Vec::new();
    if !degenerate {
        comparisons.push(NamedComparison {
            name: "closed-form-vs-expm",
            report: closed,
        });
    }
    comparisons.push(NamedComparison {
        name: "propagator-vs-expm",
        report: outer,
    });
    comparisons.push(NamedComparison {
        name: "rk4-vs-expm",
        report: rk4,
    });
    comparisons.push(NamedComparison {
        name: "montecarlo-vs-expm",
        report: mc_report,
    });
    Ok(OracleSummary {
        comparisons,
        max_symplectic_defect: defect,
    })
}
