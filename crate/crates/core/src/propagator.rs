//! Linear quadrature dynamics: drift matrices, propagators and moments.
//!
//! With undepleted pumps the quadratures obey `dX/dt = ax·X`, `dY/dt = ay·Y`
//! with constant drifts, so every propagator here is `exp(ax·t)`,
//! `exp(ay·t)`. Three routes compute it:
//!
//! - closed forms in cosh/sinh (hyperbolic) or cos/sin (periodic),
//! - the `κ₁ = κ₂` limit, where the drift is nilpotent up to a tiny
//!   correction and the series terminates,
//! - a generic matrix exponential ([`crate::expm`]) used as an oracle.
//!
//! Both drifts satisfy `A³ = (κ₁² − κ₂²)·A`, which is what makes the closed
//! forms three-term expressions `I + f₁(t)·A + f₂(t)·A²`.

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::moments::{Couplings, MomentState, PropagatorPair, RegimeKind};
use crate::Mat3;

/// Drift matrices of the X and Y quadrature equations of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftPair {
    pub ax: Mat3,
    pub ay: Mat3,
}

/// ```text
/// dX₁/dt =  κ₁X₃          dY₁/dt = −κ₁Y₃
/// dX₂/dt =  κ₂X₃          dY₂/dt =  κ₂Y₃
/// dX₃/dt =  κ₁X₁ − κ₂X₂   dY₃/dt = −κ₁Y₁ − κ₂Y₂
/// ```
pub fn drift_matrices(c: &Couplings) -> DriftPair {
    let (k1, k2) = (c.kappa1(), c.kappa2());
    #[rustfmt::skip]
    let ax = Mat3::new(
        0.0, 0.0, k1,
        0.0, 0.0, k2,
        k1,  -k2, 0.0,
    );
    #[rustfmt::skip]
    let ay = Mat3::new(
        0.0, 0.0, -k1,
        0.0, 0.0, k2,
        -k1, -k2, 0.0,
    );
    DriftPair { ax, ay }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

fn expect_regime(c: &Couplings, expected: RegimeKind) -> Result<f64> {
    let regime = c.regime();
    if regime.kind != expected {
        return Err(Error::WrongRegime {
            expected,
            found: regime.kind,
        });
    }
    Ok(regime.rate)
}

/// Closed-form propagator for `κ₁ > κ₂`, written in cosh/sinh of `Ωt`.
pub fn propagator_hyperbolic(c: &Couplings, t: f64) -> Result<PropagatorPair> {
    check_time(t)?;
    let omega = expect_regime(c, RegimeKind::Hyperbolic)?;
    let (k1, k2) = (c.kappa1(), c.kappa2());
    let w2 = omega * omega;
    let ch = (omega * t).cosh();
    let sh = (omega * t).sinh();

    // (κ₁²cosh − κ₂²)/Ω² and (κ₁² − κ₂²cosh)/Ω², written so t = 0 is exact
    let d11 = 1.0 + k1 * k1 * (ch - 1.0) / w2;
    let d22 = 1.0 - k2 * k2 * (ch - 1.0) / w2;
    let cross = k1 * k2 * (ch - 1.0) / w2;
    let s1 = k1 * sh / omega;
    let s2 = k2 * sh / omega;

    #[rustfmt::skip]
    let mx = Mat3::new(
        d11,    -cross, s1,
        cross,  d22,    s2,
        s1,     -s2,    ch,
    );
    #[rustfmt::skip]
    let my = Mat3::new(
        d11,    cross,  -s1,
        -cross, d22,    s2,
        -s1,    -s2,    ch,
    );
    Ok(PropagatorPair { mx, my, t })
}

/// Closed-form propagator for `κ₂ > κ₁`, written in cos/sin of `ξt`.
pub fn propagator_periodic(c: &Couplings, t: f64) -> Result<PropagatorPair> {
    check_time(t)?;
    let xi = expect_regime(c, RegimeKind::Periodic)?;
    let (k1, k2) = (c.kappa1(), c.kappa2());
    let x2 = xi * xi;
    let co = (xi * t).cos();
    let si = (xi * t).sin();

    let d11 = 1.0 + k1 * k1 * (1.0 - co) / x2;
    let d22 = 1.0 - k2 * k2 * (1.0 - co) / x2;
    let cross = k1 * k2 * (1.0 - co) / x2;
    let s1 = k1 * si / xi;
    let s2 = k2 * si / xi;

    #[rustfmt::skip]
    let mx = Mat3::new(
        d11,    -cross, s1,
        cross,  d22,    s2,
        s1,     -s2,    co,
    );
    // my[0][2] is −κ₁ sin(ξt)/ξ: it has to match dY₁/dt = −κ₁Y₃ at t → 0.
    #[rustfmt::skip]
    let my = Mat3::new(
        d11,    cross,  -s1,
        -cross, d22,    s2,
        -s1,    -s2,    co,
    );
    Ok(PropagatorPair { mx, my, t })
}

/// `sinh(√s)/√s` and `(cosh(√s) − 1)/s` as power series in `s`, valid for
/// either sign of `s`. Both are entire; the degenerate band keeps `|s|`
/// tiny so a handful of terms reach machine precision.
fn series_coefficients(s: f64) -> (f64, f64) {
    let mut f1 = 0.0;
    let mut f2 = 0.0;
    // term1 = s^k/(2k+1)!, term2 = s^k/(2k+2)!
    let mut term1 = 1.0_f64;
    let mut term2 = 0.5_f64;
    for k in 0..60 {
        f1 += term1;
        f2 += term2;
        if term1.abs() <= f64::EPSILON * f1.abs() * 1e-2
            && term2.abs() <= f64::EPSILON * f2.abs() * 1e-2
        {
            break;
        }
        let k = k as f64;
        term1 *= s / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        term2 *= s / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
    }
    (f1, f2)
}

/// Propagator in the `κ₁ ≈ κ₂` band, where the closed forms divide by a
/// vanishing rate. Evaluates `I + t·f₁·A + t²·f₂·A²` with the series
/// coefficients above; at exactly `κ₁ = κ₂` this is the terminating
/// polynomial `I + tA + t²A²/2`.
pub fn propagator_degenerate(c: &Couplings, t: f64) -> Result<PropagatorPair> {
    check_time(t)?;
    expect_regime(c, RegimeKind::Degenerate)?;
    let drift = drift_matrices(c);
    let (f1, f2) = series_coefficients(c.gap() * t * t);
    let block = |a: &Mat3| Mat3::identity() + a * (t * f1) + a * a * (t * t * f2);
    Ok(PropagatorPair {
        mx: block(&drift.ax),
        my: block(&drift.ay),
        t,
    })
}

/// Regime-independent propagator via the matrix exponential of the drifts.
pub fn propagator_expm(c: &Couplings, t: f64) -> Result<PropagatorPair> {
    check_time(t)?;
    let drift = drift_matrices(c);
    Ok(PropagatorPair {
        mx: expm(&(drift.ax * t)),
        my: expm(&(drift.ay * t)),
        t,
    })
}

/// Closed form for the couplings' own regime.
pub fn propagator_analytic(c: &Couplings, t: f64) -> Result<PropagatorPair> {
    match c.regime().kind {
        RegimeKind::Hyperbolic => propagator_hyperbolic(c, t),
        RegimeKind::Periodic => propagator_periodic(c, t),
        RegimeKind::Degenerate => propagator_degenerate(c, t),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Regime closed form (series limit when degenerate).
    Analytic,
    /// Matrix exponential of the drift.
    Expm,
}

/// Moments at time `t` for vacuum input: `cx = mx·mxᵀ`, `cy = my·myᵀ`.
pub fn moments_at(c: &Couplings, t: f64, method: Method) -> Result<MomentState> {
    let p = match method {
        Method::Analytic => propagator_analytic(c, t)?,
        Method::Expm => propagator_expm(c, t)?,
    };
    Ok(p.vacuum_moments())
}

/// The six independent moments written out directly as functions of `t`,
/// without going through a propagator. Defined only away from `κ₁ = κ₂`.
///
/// Sign pattern between the blocks: `⟨X₁X₂⟩ = −⟨Y₁Y₂⟩`,
/// `⟨X₁X₃⟩ = −⟨Y₁Y₃⟩`, `⟨X₂X₃⟩ = ⟨Y₂Y₃⟩`; diagonals are equal.
pub fn closed_form_moments(c: &Couplings, t: f64) -> Result<MomentState> {
    check_time(t)?;
    let regime = c.regime();
    let (k1, k2) = (c.kappa1(), c.kappa2());
    let (k1s, k2s) = (k1 * k1, k2 * k2);

    let [x11, x22, x33, x12, x13, x23] = match regime.kind {
        RegimeKind::Hyperbolic => {
            let w = regime.rate;
            let (w2, w3, w4) = (w * w, w * w * w, w * w * w * w);
            let ch = (w * t).cosh();
            let sh = (w * t).sinh();
            [
                1.0 + 2.0 * k1s / w4 * (k1s * sh * sh + 2.0 * k2s * (1.0 - ch)),
                1.0 + 2.0 * k1s * k2s * (ch - 1.0).powi(2) / w4,
                1.0 + 2.0 * k1s * sh * sh / w2,
                k1 * k2 / w4 * ((k1s + k2s) * (ch - 1.0).powi(2) + w2 * sh * sh),
                2.0 * k1 * sh / w3 * (k1s * ch - k2s),
                2.0 * k1s * k2 / w3 * (ch - 1.0) * sh,
            ]
        }
        RegimeKind::Periodic => {
            let x = regime.rate;
            let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
            let co = (x * t).cos();
            let si = (x * t).sin();
            [
                1.0 + 2.0 * k1s * (2.0 * k2s * (1.0 - co) - k1s * si * si) / x4,
                1.0 + 2.0 * k1s * k2s * (co - 1.0).powi(2) / x4,
                1.0 + 2.0 * k1s * si * si / x2,
                2.0 * k1 * k2 / x4 * ((k1s + k2s) * (1.0 - co) - k1s * si * si),
                k1 / x3 * (2.0 * k2s * si - k1s * (2.0 * x * t).sin()),
                2.0 * k1s * k2 * si / x3 * (1.0 - co),
            ]
        }
        RegimeKind::Degenerate => return Err(Error::UnsupportedRegime(regime.kind)),
    };

    #[rustfmt::skip]
    let cx = Mat3::new(
        x11, x12, x13,
        x12, x22, x23,
        x13, x23, x33,
    );
    #[rustfmt::skip]
    let cy = Mat3::new(
        x11,  -x12, -x13,
        -x12, x22,  x23,
        -x13, x23,  x33,
    );
    Ok(MomentState { cx, cy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hyp() -> Couplings {
        Couplings::new(1.2, 1.0).unwrap()
    }

    fn per() -> Couplings {
        Couplings::new(1.0, 1.8).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn drift_rows() {
        let d = drift_matrices(&Couplings::new(1.0, 1.0).unwrap());
        assert_eq!([d.ax[(2, 0)], d.ax[(2, 1)], d.ax[(2, 2)]], [1.0, -1.0, 0.0]);
        assert_eq!(
            [d.ay[(2, 0)], d.ay[(2, 1)], d.ay[(2, 2)]],
            [-1.0, -1.0, 0.0]
        );
        let d = drift_matrices(&Couplings::new(0.3, 2.7).unwrap());
        assert_eq!(d.ax.trace(), 0.0);
        assert_eq!(d.ay.trace(), 0.0);
    }

    #[test]
    fn cubic_relation_of_drifts() {
        let c = Couplings::new(0.7, 1.9).unwrap();
        let d = drift_matrices(&c);
        for a in [d.ax, d.ay] {
            assert!((a * a * a - a * c.gap()).amax() < 1e-14);
        }
    }

    #[test]
    fn identity_at_zero_time() {
        let cases = [
            propagator_hyperbolic(&hyp(), 0.0).unwrap(),
            propagator_periodic(&per(), 0.0).unwrap(),
            propagator_degenerate(&Couplings::new(2.0, 2.0).unwrap(), 0.0).unwrap(),
            propagator_expm(&hyp(), 0.0).unwrap(),
        ];
        for p in cases {
            assert_eq!(p.mx, Mat3::identity());
            assert_eq!(p.my, Mat3::identity());
        }
    }

    #[test]
    fn hyperbolic_entry_at_unit_rate_time() {
        let t = 1.0 / 0.44f64.sqrt();
        let p = propagator_hyperbolic(&hyp(), t).unwrap();
        let want = (1.44 * 1f64.cosh() - 1.0) / 0.44;
        assert!((p.mx[(0, 0)] - want).abs() < 1e-14);
        assert!((p.mx[(0, 0)] - 2.777355).abs() < 1e-6);
        assert!(p.symplectic_defect() < 1e-12);
        let e = propagator_expm(&hyp(), t).unwrap();
        assert!((p.mx - e.mx).amax() < 1e-12);
        assert!((p.my - e.my).amax() < 1e-12);
    }

    #[test]
    fn periodic_quarter_turn_and_revival() {
        let xi = 2.24f64.sqrt();
        let p = propagator_periodic(&per(), PI / 2.0 / xi).unwrap();
        assert!((p.mx[(0, 0)] - 3.24 / 2.24).abs() < 1e-14);
        let e = propagator_expm(&per(), PI / 2.0 / xi).unwrap();
        assert!((p.mx - e.mx).amax() < 1e-12);
        assert!((p.my - e.my).amax() < 1e-12);

        let full = propagator_periodic(&per(), 2.0 * PI / xi).unwrap();
        assert!((full.mx - Mat3::identity()).amax() < 1e-10);
        assert!((full.my - Mat3::identity()).amax() < 1e-10);
    }

    #[test]
    fn degenerate_polynomial() {
        let p = propagator_degenerate(&Couplings::new(1.0, 1.0).unwrap(), 1.0).unwrap();
        #[rustfmt::skip]
        let want = Mat3::new(
            1.5, -0.5, 1.0,
            0.5,  0.5, 1.0,
            1.0, -1.0, 1.0,
        );
        assert!((p.mx - want).amax() < 1e-15);
        assert_eq!(p.mx[(2, 2)], 1.0);
        for (k, t) in [(0.3, 0.5), (1.0, 4.0), (2.5, 3.0), (7.0, 1.3)] {
            let c = Couplings::new(k, k).unwrap();
            let p = propagator_degenerate(&c, t).unwrap();
            let e = propagator_expm(&c, t).unwrap();
            assert!(p.symplectic_defect() < 1e-10);
            assert!((p.mx - e.mx).amax() < 1e-10 * (1.0 + e.mx.amax()));
            assert!((p.my - e.my).amax() < 1e-10 * (1.0 + e.my.amax()));
        }
    }

    #[test]
    fn degenerate_band_with_unequal_couplings() {
        let c = Couplings::new(1.0 + 2e-10, 1.0).unwrap();
        assert_eq!(c.regime().kind, RegimeKind::Degenerate);
        let p = propagator_degenerate(&c, 2.0).unwrap();
        let e = propagator_expm(&c, 2.0).unwrap();
        assert!((p.mx - e.mx).amax() < 1e-12);
    }

    #[test]
    fn wrong_regime_errors() {
        assert!(matches!(
            propagator_hyperbolic(&per(), 1.0),
            Err(Error::WrongRegime {
                expected: RegimeKind::Hyperbolic,
                found: RegimeKind::Periodic
            })
        ));
        assert!(matches!(
            propagator_periodic(&hyp(), 1.0),
            Err(Error::WrongRegime { .. })
        ));
        assert!(matches!(
            propagator_degenerate(&hyp(), 1.0),
            Err(Error::WrongRegime { .. })
        ));
        assert!(matches!(
            closed_form_moments(&Couplings::new(1.0, 1.0).unwrap(), 1.0),
            Err(Error::UnsupportedRegime(RegimeKind::Degenerate))
        ));
        assert!(propagator_expm(&hyp(), -1.0).is_err());
        assert!(moments_at(&hyp(), f64::NAN, Method::Expm).is_err());
    }

    // Reference moments at κ₁=1.2, κ₂=1, Ωt=1 from an independent
    // scipy.linalg.expm evaluation of the drift, frozen here.
    const HYP_CX: [[f64; 3]; 3] = [
        [14.427399424045523, 8.227241511954793, 11.809417904575865],
        [8.227241511954793, 5.387486253226369, 6.297816666697201],
        [11.809417904575865, 6.297816666697201, 10.039913170819156],
    ];

    #[test]
    fn hyperbolic_moments_match_reference() {
        let t = 1.0 / 0.44f64.sqrt();
        let closed = closed_form_moments(&hyp(), t).unwrap();
        let outer = moments_at(&hyp(), t, Method::Analytic).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = HYP_CX[i][j];
                assert!(close(closed.cx[(i, j)], want, 1e-12), "cx[{i}][{j}]");
                assert!(close(outer.cx[(i, j)], want, 1e-12), "outer cx[{i}][{j}]");
            }
            assert!(close(closed.cy[(i, i)], HYP_CX[i][i], 1e-12));
        }
        assert!(close(closed.cy[(0, 1)], -HYP_CX[0][1], 1e-12));
        assert!(close(closed.cy[(0, 2)], -HYP_CX[0][2], 1e-12));
        assert!(close(closed.cy[(1, 2)], HYP_CX[1][2], 1e-12));
        assert!(close(outer.cy[(0, 1)], -HYP_CX[0][1], 1e-12));
        assert!(close(outer.cy[(0, 2)], -HYP_CX[0][2], 1e-12));
        assert!(close(outer.cy[(1, 2)], HYP_CX[1][2], 1e-12));
        // row-1 norm² of mx
        let p = propagator_hyperbolic(&hyp(), t).unwrap();
        assert!(close(p.mx.row(0).norm_squared(), HYP_CX[0][0], 1e-12));
        assert!(close(p.mx.row(1).dot(&p.mx.row(2)), HYP_CX[1][2], 1e-12));
    }

    #[test]
    fn periodic_moments_match_reference() {
        let t = PI / 2.0 / 2.24f64.sqrt();
        let closed = closed_form_moments(&per(), t).unwrap();
        let want = 1.0 + 2.0 * (2.0 * 3.24 - 1.0) / (2.24 * 2.24);
        assert!((closed.cx[(0, 0)] - want).abs() < 1e-13);
        assert!((closed.cx[(0, 0)] - 3.18431).abs() < 1e-5);
        let p = propagator_periodic(&per(), t).unwrap();
        assert!(close(p.mx.row(0).norm_squared(), want, 1e-13));
        let outer = p.vacuum_moments();
        assert!((outer.cx - closed.cx).amax() < 1e-12);
        assert!((outer.cy - closed.cy).amax() < 1e-12);
    }

    #[test]
    fn moments_equal_at_zero() {
        for c in [hyp(), per()] {
            let m = closed_form_moments(&c, 0.0).unwrap();
            assert!((m.cx - Mat3::identity()).amax() < 1e-15);
            assert!((m.cy - Mat3::identity()).amax() < 1e-15);
        }
        let m = moments_at(&Couplings::new(1.0, 1.0).unwrap(), 0.0, Method::Analytic).unwrap();
        assert_eq!(m.cx, Mat3::identity());
    }

    #[test]
    fn drift_generates_propagator() {
        // Central differences of the analytic propagator against ax·mx.
        for c in [hyp(), per(), Couplings::new(1.0, 1.0).unwrap()] {
            let t_char = 1.0 / c.max_kappa();
            let h = 1e-6 * t_char;
            let d = drift_matrices(&c);
            for t in [0.3, 1.0, 2.5] {
                let t = t * t_char;
                let plus = propagator_analytic(&c, t + h).unwrap();
                let minus = propagator_analytic(&c, t - h).unwrap();
                let mid = propagator_analytic(&c, t).unwrap();
                let dx = (plus.mx - minus.mx) / (2.0 * h);
                let dy = (plus.my - minus.my) / (2.0 * h);
                let fx = d.ax * mid.mx;
                let fy = d.ay * mid.my;
                assert!((dx - fx).amax() <= 1e-5 * fx.amax(), "{c:?} t={t}");
                assert!((dy - fy).amax() <= 1e-5 * fy.amax(), "{c:?} t={t}");
            }
        }
    }
}
