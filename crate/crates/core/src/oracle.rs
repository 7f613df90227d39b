//! Independent cross-checks of the propagators and moments.
//!
//! [`rk4_propagator`] integrates the equations of motion numerically and
//! [`mc_moments`] samples vacuum noise and pushes it through the linear
//! solution. Neither shares formulas with the closed forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moments::{Couplings, MomentState, PropagatorPair, Quadrature};
use crate::propagator::{drift_matrices, propagator_expm};
use crate::Mat3;

/// Classical fourth-order Runge–Kutta for `dM/dt = A·M`, `M(0) = I`, on both
/// blocks with `steps` equal steps.
pub fn rk4_propagator(c: &Couplings, t: f64, steps: usize) -> Result<PropagatorPair> {
    if steps == 0 {
        return Err(Error::InvalidInput("rk4 needs at least one step".into()));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    let drift = drift_matrices(c);
    let h = t / steps as f64;
    let integrate = |a: &Mat3| {
        let mut m = Mat3::identity();
        for _ in 0..steps {
            let k1 = a * m;
            let k2 = a * (m + k1 * (h / 2.0));
            let k3 = a * (m + k2 * (h / 2.0));
            let k4 = a * (m + k3 * h);
            m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        m
    };
    Ok(PropagatorPair {
        mx: integrate(&drift.ax),
        my: integrate(&drift.ay),
        t,
    })
}

/// Samples per shard. Each shard draws from its own ChaCha stream, so the
/// result at a fixed seed does not depend on how shards are scheduled.
pub const MC_SHARD: usize = 1 << 14;

/// Raw second moments of `n` vacuum samples pushed through the propagator
/// at time `t`.
///
/// Each sample is six independent unit normals: three X and three Y
/// quadratures of the input modes. The propagator comes from the matrix
/// exponential, not from any closed form.
pub fn mc_moments(c: &Couplings, t: f64, n: usize, seed: u64) -> Result<MomentState> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let p = propagator_expm(c, t)?;
    let shards = n.div_ceil(MC_SHARD);
    let partial: Vec<(Mat3, Mat3)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let count = MC_SHARD.min(n - shard * MC_SHARD);
            let mut sx = Mat3::zeros();
            let mut sy = Mat3::zeros();
            for _ in 0..count {
                let x0 = nalgebra::Vector3::from_fn(|_, _| StandardNormal.sample(&mut rng));
                let y0 = nalgebra::Vector3::from_fn(|_, _| StandardNormal.sample(&mut rng));
                let x = p.mx * x0;
                let y = p.my * y0;
                sx += x * x.transpose();
                sy += y * y.transpose();
            }
            (sx, sy)
        })
        .collect();
    let (sx, sy) = partial
        .iter()
        .fold((Mat3::zeros(), Mat3::zeros()), |(ax, ay), (bx, by)| {
            (ax + bx, ay + by)
        });
    let inv = 1.0 / n as f64;
    Ok(MomentState::new(sx * inv, sy * inv))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstEntry {
    pub block: Quadrature,
    pub i: usize,
    pub j: usize,
    pub t: Option<f64>,
}

/// Entrywise comparison of two moment states. The relative error uses
/// `max(1, |reference|)` as denominator, so it is absolute for small entries
/// and relative for large ones; `pass` compares that metric to `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub worst_entry: Option<WorstEntry>,
    pub pass: bool,
    pub tolerance: f64,
}

impl ComparisonReport {
    pub fn empty(tolerance: f64) -> Self {
        ComparisonReport {
            max_abs_err: 0.0,
            max_rel_err: 0.0,
            worst_entry: None,
            pass: true,
            tolerance,
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        if let Some(w) = self.worst_entry.as_mut() {
            w.t = Some(t);
        }
        self
    }

    /// Folds another report into this one, keeping the worse entry.
    pub fn merge(self, other: ComparisonReport) -> Self {
        let worst = if other.max_rel_err > self.max_rel_err {
            other.worst_entry
        } else {
            self.worst_entry
        };
        let max_rel_err = self.max_rel_err.max(other.max_rel_err);
        let tolerance = self.tolerance.min(other.tolerance);
        ComparisonReport {
            max_abs_err: self.max_abs_err.max(other.max_abs_err),
            max_rel_err,
            worst_entry: worst,
            pass: self.pass && other.pass && max_rel_err <= tolerance,
            tolerance,
        }
    }
}

/// Compares `a` against the reference `b`.
pub fn compare_moments(a: &MomentState, b: &MomentState, tol: f64) -> ComparisonReport {
    let mut report = ComparisonReport::empty(tol);
    for (block, ma, mb) in [(Quadrature::X, &a.cx, &b.cx), (Quadrature::Y, &a.cy, &b.cy)] {
        for i in 0..3 {
            for j in 0..3 {
                let (va, vb) = (ma[(i, j)], mb[(i, j)]);
                let abs = (va - vb).abs();
                let rel = abs / vb.abs().max(1.0);
                // NaN never counts as agreement
                let rel = if rel.is_nan() { f64::INFINITY } else { rel };
                report.max_abs_err =
                    report
                        .max_abs_err
                        .max(if abs.is_nan() { f64::INFINITY } else { abs });
                if rel > report.max_rel_err || report.worst_entry.is_none() {
                    report.max_rel_err = report.max_rel_err.max(rel);
                    report.worst_entry = Some(WorstEntry {
                        block,
                        i,
                        j,
                        t: None,
                    });
                }
            }
        }
    }
    report.pass = report.max_rel_err <= tol;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::vacuum_moments;
    use crate::propagator::{closed_form_moments, moments_at, propagator_hyperbolic, Method};

    fn hyp() -> Couplings {
        Couplings::new(1.2, 1.0).unwrap()
    }

    #[test]
    fn rk4_identity_at_zero() {
        let p = rk4_propagator(&hyp(), 0.0, 5).unwrap();
        assert_eq!(p.mx, Mat3::identity());
        assert!(rk4_propagator(&hyp(), 1.0, 0).is_err());
    }

    #[test]
    fn rk4_matches_closed_form() {
        let t = 1.0 / 0.44f64.sqrt();
        let exact = propagator_hyperbolic(&hyp(), t).unwrap();
        let p = rk4_propagator(&hyp(), t, 10_000).unwrap();
        assert!((p.mx - exact.mx).amax() < 1e-8);
        assert!((p.my - exact.my).amax() < 1e-8);
    }

    #[test]
    fn rk4_fourth_order() {
        let t = 2.0;
        let exact = propagator_hyperbolic(&hyp(), t).unwrap();
        let err = |steps| (rk4_propagator(&hyp(), t, steps).unwrap().mx - exact.mx).amax();
        let ratio = err(20) / err(40);
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }

    #[test]
    fn mc_is_deterministic_per_seed() {
        let a = mc_moments(&hyp(), 1.0, 50_000, 7).unwrap();
        let b = mc_moments(&hyp(), 1.0, 50_000, 7).unwrap();
        assert_eq!(a, b);
        let c = mc_moments(&hyp(), 1.0, 50_000, 8).unwrap();
        assert_ne!(a, c);
        assert!(mc_moments(&hyp(), 1.0, 0, 1).is_err());
    }

    #[test]
    fn mc_independent_of_thread_count() {
        let a = mc_moments(&hyp(), 0.8, 100_000, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| mc_moments(&hyp(), 0.8, 100_000, 3).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn mc_vacuum_at_zero_time() {
        let m = mc_moments(&hyp(), 0.0, 200_000, 11).unwrap();
        let r = compare_moments(&m, &vacuum_moments(), 0.02);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn compare_self_and_noise() {
        let t = 1.0 / 0.44f64.sqrt();
        let m = closed_form_moments(&hyp(), t).unwrap();
        let r = compare_moments(&m, &m, 0.0);
        assert!(r.pass);
        assert_eq!(r.max_abs_err, 0.0);
        assert_eq!(r.max_rel_err, 0.0);

        let e = moments_at(&hyp(), t, Method::Expm).unwrap();
        assert!(compare_moments(&m, &e, 1e-9).pass);

        let mc = mc_moments(&hyp(), t, 10_000, 1).unwrap();
        let r = compare_moments(&mc, &m, 1e-9);
        assert!(!r.pass);
        assert!(r.worst_entry.is_some());
    }

    #[test]
    fn compare_flags_nan() {
        let mut a = vacuum_moments();
        a.cx[(0, 0)] = f64::NAN;
        assert!(!compare_moments(&a, &vacuum_moments(), 1.0).pass);
    }

    #[test]
    fn merge_keeps_worst() {
        let a = compare_moments(&vacuum_moments(), &vacuum_moments(), 1e-3).at_time(0.5);
        let mut m = vacuum_moments();
        m.cy[(1, 2)] = 0.1;
        let b = compare_moments(&m, &vacuum_moments(), 1e-3).at_time(2.0);
        let merged = a.merge(b);
        assert!(!merged.pass);
        let w = merged.worst_entry.unwrap();
        assert_eq!((w.block, w.i, w.j, w.t), (Quadrature::Y, 1, 2, Some(2.0)));
    }
}
