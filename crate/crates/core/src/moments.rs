//! Couplings, regime classification and the quadrature moment data model.

use std::fmt;

use crate::error::{Error, Result};
use crate::Mat3;

/// Relative tolerance on `|κ₁² − κ₂²| / max(κ₁², κ₂²)` below which the
/// couplings are treated as degenerate.
pub const DEFAULT_REGIME_TOL: f64 = 1e-9;

/// Effective interaction strengths `κ₁ = χ₁⟨a₄(0)⟩` and `κ₂ = χ₂⟨a₅(0)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    kappa1: f64,
    kappa2: f64,
}

impl Couplings {
    pub fn new(kappa1: f64, kappa2: f64) -> Result<Self> {
        for (name, k) in [("kappa1", kappa1), ("kappa2", kappa2)] {
            if !k.is_finite() || k <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be finite and positive, got {k}"
                )));
            }
        }
        Ok(Couplings { kappa1, kappa2 })
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa1
    }

    pub fn kappa2(&self) -> f64 {
        self.kappa2
    }

    pub fn max_kappa(&self) -> f64 {
        self.kappa1.max(self.kappa2)
    }

    /// `κ₁² − κ₂²`; positive in the hyperbolic regime.
    pub fn gap(&self) -> f64 {
        (self.kappa1 - self.kappa2) * (self.kappa1 + self.kappa2)
    }

    /// Multiplies both couplings by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Couplings::new(self.kappa1 * s, self.kappa2 * s)
    }
}

/// Nonlinear couplings and classical pump amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfig {
    pub chi1: f64,
    pub chi2: f64,
    pub pump4: f64,
    pub pump5: f64,
}

/// Folds the classical pump amplitudes into the effective couplings.
pub fn kappa_from_pump(p: &PumpConfig) -> Result<Couplings> {
    let k1 = p.chi1 * p.pump4;
    let k2 = p.chi2 * p.pump5;
    if k1.is_nan() || k2.is_nan() || k1 <= 0.0 || k2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "pump products must be positive: chi1*pump4 = {k1}, chi2*pump5 = {k2}"
        )));
    }
    Couplings::new(k1, k2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    /// `κ₁ > κ₂`: cosh/sinh growth at rate `Ω = √(κ₁² − κ₂²)`.
    Hyperbolic,
    /// `κ₂ > κ₁`: oscillation at rate `ξ = √(κ₂² − κ₁²)`.
    Periodic,
    /// `κ₁ = κ₂` within tolerance: polynomial growth.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub kind: RegimeKind,
    /// Ω, ξ or 0 depending on `kind`.
    pub rate: f64,
}

pub fn classify_regime(c: &Couplings, tol: f64) -> Result<Regime> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::InvalidInput(format!(
            "regime tolerance must be finite and non-negative, got {tol}"
        )));
    }
    let gap = c.gap();
    let scale = c.max_kappa() * c.max_kappa();
    let regime = if gap.abs() <= tol * scale {
        Regime {
            kind: RegimeKind::Degenerate,
            rate: 0.0,
        }
    } else if gap > 0.0 {
        Regime {
            kind: RegimeKind::Hyperbolic,
            rate: gap.sqrt(),
        }
    } else {
        Regime {
            kind: RegimeKind::Periodic,
            rate: (-gap).sqrt(),
        }
    };
    Ok(regime)
}

impl Couplings {
    /// Regime under [`DEFAULT_REGIME_TOL`].
    pub fn regime(&self) -> Regime {
        classify_regime(self, DEFAULT_REGIME_TOL).expect("default tolerance is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    Y,
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quadrature::X => f.write_str("X"),
            Quadrature::Y => f.write_str("Y"),
        }
    }
}

/// One of the three output modes. Mode 3 is the one coupled to both pumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    One,
    Two,
    Three,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::One, Mode::Two, Mode::Three];

    pub fn index(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
            Mode::Three => 2,
        }
    }

    /// Parses the 1-based mode label.
    pub fn from_label(label: u8) -> Result<Mode> {
        match label {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            3 => Ok(Mode::Three),
            _ => Err(Error::InvalidInput(format!(
                "mode must be 1, 2 or 3, got {label}"
            ))),
        }
    }

    pub fn label(self) -> u8 {
        self.index() as u8 + 1
    }

    /// The two other modes, in increasing order.
    pub fn others(self) -> (Mode, Mode) {
        match self {
            Mode::One => (Mode::Two, Mode::Three),
            Mode::Two => (Mode::One, Mode::Three),
            Mode::Three => (Mode::One, Mode::Two),
        }
    }
}

/// An unordered pair of distinct modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModePair {
    P12,
    P13,
    P23,
}

impl ModePair {
    pub const ALL: [ModePair; 3] = [ModePair::P12, ModePair::P13, ModePair::P23];

    pub fn new(i: u8, j: u8) -> Result<ModePair> {
        let (a, b) = (Mode::from_label(i)?, Mode::from_label(j)?);
        match (a.min(b), a.max(b)) {
            (Mode::One, Mode::Two) => Ok(ModePair::P12),
            (Mode::One, Mode::Three) => Ok(ModePair::P13),
            (Mode::Two, Mode::Three) => Ok(ModePair::P23),
            _ => Err(Error::InvalidInput(format!(
                "mode pair needs two distinct modes, got ({i}, {j})"
            ))),
        }
    }

    pub fn modes(self) -> (Mode, Mode) {
        match self {
            ModePair::P12 => (Mode::One, Mode::Two),
            ModePair::P13 => (Mode::One, Mode::Three),
            ModePair::P23 => (Mode::Two, Mode::Three),
        }
    }

    /// The mode not in the pair.
    pub fn complement(self) -> Mode {
        match self {
            ModePair::P12 => Mode::Three,
            ModePair::P13 => Mode::Two,
            ModePair::P23 => Mode::One,
        }
    }
}

/// X-block and Y-block propagators at time `t`:
/// `X(t) = mx·X(0)`, `Y(t) = my·Y(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorPair {
    pub mx: Mat3,
    pub my: Mat3,
    pub t: f64,
}

impl PropagatorPair {
    pub fn identity(t: f64) -> Self {
        PropagatorPair {
            mx: Mat3::identity(),
            my: Mat3::identity(),
            t,
        }
    }

    /// Largest entry of `|mx·myᵀ − I|`. Zero for a map that preserves the
    /// canonical commutators.
    pub fn symplectic_defect(&self) -> f64 {
        (self.mx * self.my.transpose() - Mat3::identity()).amax()
    }

    /// Pushes vacuum input through the propagators.
    pub fn vacuum_moments(&self) -> MomentState {
        MomentState::new(self.mx * self.mx.transpose(), self.my * self.my.transpose())
    }
}

/// Symmetric second-moment blocks `cx[i][j] = ⟨XᵢXⱼ⟩`, `cy[i][j] = ⟨YᵢYⱼ⟩`.
/// Means are zero and X–Y cross moments vanish for this system, so these
/// are also the covariances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub cx: Mat3,
    pub cy: Mat3,
}

impl MomentState {
    /// Builds a state, symmetrising both blocks.
    pub fn new(cx: Mat3, cy: Mat3) -> Self {
        MomentState {
            cx: (cx + cx.transpose()) * 0.5,
            cy: (cy + cy.transpose()) * 0.5,
        }
    }

    pub fn block(&self, quad: Quadrature) -> &Mat3 {
        match quad {
            Quadrature::X => &self.cx,
            Quadrature::Y => &self.cy,
        }
    }

    pub fn get(&self, quad: Quadrature, i: Mode, j: Mode) -> f64 {
        self.block(quad)[(i.index(), j.index())]
    }

    /// Smallest eigenvalue across both blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        let ex = self.cx.symmetric_eigenvalues().min();
        let ey = self.cy.symmetric_eigenvalues().min();
        ex.min(ey)
    }
}

/// All three modes in vacuum: both blocks are the identity.
pub fn vacuum_moments() -> MomentState {
    MomentState {
        cx: Mat3::identity(),
        cy: Mat3::identity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_figure_presets() {
        let r = classify_regime(&Couplings::new(1.2, 1.0).unwrap(), DEFAULT_REGIME_TOL).unwrap();
        assert_eq!(r.kind, RegimeKind::Hyperbolic);
        assert!((r.rate - 0.44f64.sqrt()).abs() < 1e-15);
        assert!((r.rate - 0.663325).abs() < 1e-6);

        let r = classify_regime(&Couplings::new(1.0, 1.8).unwrap(), DEFAULT_REGIME_TOL).unwrap();
        assert_eq!(r.kind, RegimeKind::Periodic);
        assert!((r.rate - 2.24f64.sqrt()).abs() < 1e-15);
        assert!((r.rate - 1.496663).abs() < 1e-6);

        let r = classify_regime(&Couplings::new(1.0, 1.0).unwrap(), DEFAULT_REGIME_TOL).unwrap();
        assert_eq!(r.kind, RegimeKind::Degenerate);
        assert_eq!(r.rate, 0.0);
    }

    #[test]
    fn degenerate_band_is_relative() {
        let tight = Couplings::new(1.0 + 1e-11, 1.0).unwrap();
        assert_eq!(tight.regime().kind, RegimeKind::Degenerate);
        let loose = Couplings::new(1.0 + 1e-8, 1.0).unwrap();
        assert_eq!(loose.regime().kind, RegimeKind::Hyperbolic);
        // Same ratio at a different scale lands in the same class.
        let big = Couplings::new(1e6 * (1.0 + 1e-11), 1e6).unwrap();
        assert_eq!(big.regime().kind, RegimeKind::Degenerate);
        let r = classify_regime(&loose, 0.1).unwrap();
        assert_eq!(r.kind, RegimeKind::Degenerate);
    }

    #[test]
    fn rejects_bad_couplings() {
        assert!(Couplings::new(0.0, 1.0).is_err());
        assert!(Couplings::new(1.0, -2.0).is_err());
        assert!(Couplings::new(f64::NAN, 1.0).is_err());
        assert!(Couplings::new(1.0, f64::INFINITY).is_err());
        let c = Couplings::new(1.0, 1.0).unwrap();
        assert!(classify_regime(&c, -1.0).is_err());
        assert!(classify_regime(&c, f64::NAN).is_err());
    }

    #[test]
    fn pump_products() {
        let c = kappa_from_pump(&PumpConfig {
            chi1: 0.1,
            pump4: 12.0,
            chi2: 0.1,
            pump5: 10.0,
        })
        .unwrap();
        assert!((c.kappa1() - 1.2).abs() < 1e-15);
        assert!((c.kappa2() - 1.0).abs() < 1e-15);

        let c = kappa_from_pump(&PumpConfig {
            chi1: 1.0,
            pump4: 1.0,
            chi2: 1.0,
            pump5: 1.0,
        })
        .unwrap();
        assert_eq!((c.kappa1(), c.kappa2()), (1.0, 1.0));

        let zero = PumpConfig {
            chi1: 0.5,
            pump4: 0.0,
            chi2: 1.0,
            pump5: 1.0,
        };
        assert!(matches!(
            kappa_from_pump(&zero),
            Err(Error::InvalidInput(_))
        ));
        let negative = PumpConfig {
            chi1: -0.5,
            pump4: 2.0,
            ..zero
        };
        assert!(kappa_from_pump(&negative).is_err());
    }

    #[test]
    fn vacuum_is_identity() {
        let v = vacuum_moments();
        assert_eq!(v.cx, Mat3::identity());
        assert_eq!(v.cy, Mat3::identity());
        for m in Mode::ALL {
            assert_eq!(v.get(Quadrature::X, m, m) * v.get(Quadrature::Y, m, m), 1.0);
        }
        assert_eq!(v.cx[(0, 1)], 0.0);
        assert_eq!(v.cy[(1, 2)], 0.0);
    }

    #[test]
    fn mode_pairs() {
        assert_eq!(ModePair::new(2, 1).unwrap(), ModePair::P12);
        assert_eq!(ModePair::new(3, 2).unwrap().complement(), Mode::One);
        assert!(ModePair::new(2, 2).is_err());
        assert!(ModePair::new(0, 2).is_err());
        assert!(ModePair::new(1, 4).is_err());
        for p in ModePair::ALL {
            let (a, b) = p.modes();
            let c = p.complement();
            assert!(a != b && a != c && b != c);
        }
    }
}
