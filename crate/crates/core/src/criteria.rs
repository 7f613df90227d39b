//! Tripartite entanglement criteria on a [`MomentState`].
//!
//! Two families are evaluated:
//!
//! - three-mode EPR products of inferred variances, either inferring one
//!   mode from the other two (`OBR_i`, bound 1) or a two-mode combination
//!   from the remaining mode (`OBR_jk`, bound 4);
//! - van Loock–Furusawa sums `V(X_i − X_j) + V(Y_i + Y_j + g_k Y_k)` (bound 4),
//!   raw with unit gains and with the gains that minimise each sum.
//!
//! All criteria are sufficient conditions only. A `false` flag in
//! [`TripartiteFlags`] says nothing about separability.

use crate::error::{Error, Result};
use crate::moments::{Mode, ModePair, MomentState, Quadrature};
use nalgebra::Vector3;

/// Inference denominators below this are treated as carrying no information.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Bound for single-mode EPR products.
pub const OBR_SINGLE_BOUND: f64 = 1.0;
/// Bound for pair EPR products and for the VLF sums.
pub const PAIR_BOUND: f64 = 4.0;

/// Relative margin a value must clear below its bound before it counts as a
/// violation. Some products sit exactly on the bound for all times and
/// rounding alone would otherwise flip them.
pub const FLAG_MARGIN: f64 = 1e-9;

/// `value < bound` with [`FLAG_MARGIN`] applied.
pub fn violates(value: f64, bound: f64) -> bool {
    value < bound * (1.0 - FLAG_MARGIN)
}

/// Sign of the two-mode combination `q_j ± q_k` used in the inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

/// Linear combination `Σ wᵢ qᵢ` of one quadrature across the three modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadCombo {
    quad: Quadrature,
    weights: Vector3<f64>,
}

impl QuadCombo {
    pub fn new(quad: Quadrature, weights: [f64; 3]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "combination weights must be finite, got {weights:?}"
            )));
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidInput(
                "combination needs at least one nonzero weight".into(),
            ));
        }
        Ok(QuadCombo {
            quad,
            weights: Vector3::from(weights),
        })
    }

    pub fn single(quad: Quadrature, mode: Mode) -> Self {
        let mut weights = Vector3::zeros();
        weights[mode.index()] = 1.0;
        QuadCombo { quad, weights }
    }

    /// `q_a + s·q_b`.
    pub fn pair(quad: Quadrature, a: Mode, b: Mode, s: f64) -> Self {
        let mut weights = Vector3::zeros();
        weights[a.index()] += 1.0;
        weights[b.index()] += s;
        QuadCombo { quad, weights }
    }

    pub fn quad(&self) -> Quadrature {
        self.quad
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights.into()
    }
}

/// `V(A) = wᵀ·C·w` for the matching block.
pub fn combo_variance(m: &MomentState, a: &QuadCombo) -> f64 {
    let c = m.block(a.quad);
    a.weights.dot(&(c * a.weights))
}

/// `V(A, B) = w_aᵀ·C·w_b`. X–Y covariances vanish for this system and are
/// not stored, so mixed requests are rejected.
pub fn combo_covariance(m: &MomentState, a: &QuadCombo, b: &QuadCombo) -> Result<f64> {
    if a.quad != b.quad {
        return Err(Error::UnsupportedCombination(format!(
            "covariance between {} and {} quadratures is not tracked",
            a.quad, b.quad
        )));
    }
    let c = m.block(a.quad);
    Ok(a.weights.dot(&(c * b.weights)))
}

/// `V(target) − V(target, source)² / V(source)`, keeping `V(target)` when the
/// source variance is below [`DENOMINATOR_FLOOR`].
fn inferred(m: &MomentState, target: &QuadCombo, source: &QuadCombo) -> f64 {
    let v = combo_variance(m, target);
    let denom = combo_variance(m, source);
    if denom < DENOMINATOR_FLOOR {
        return v;
    }
    let cov = combo_covariance(m, target, source).expect("same quadrature");
    v - cov * cov / denom
}

/// Optimal inferred variance of `q_i` given `q_j ± q_k`.
pub fn inferred_variance_single(m: &MomentState, quad: Quadrature, i: Mode, sign: Sign) -> f64 {
    let (j, k) = i.others();
    inferred(
        m,
        &QuadCombo::single(quad, i),
        &QuadCombo::pair(quad, j, k, sign.factor()),
    )
}

/// `V_inf(X_i)·V_inf(Y_i)`; below 1 is EPR evidence for mode `i`.
pub fn obr_single(m: &MomentState, i: Mode, sign: Sign) -> f64 {
    inferred_variance_single(m, Quadrature::X, i, sign)
        * inferred_variance_single(m, Quadrature::Y, i, sign)
}

/// Optimal inferred variance of `q_j ± q_k` given the remaining mode's `q_i`.
pub fn inferred_variance_pair(
    m: &MomentState,
    quad: Quadrature,
    pair: ModePair,
    sign: Sign,
) -> f64 {
    let (j, k) = pair.modes();
    inferred(
        m,
        &QuadCombo::pair(quad, j, k, sign.factor()),
        &QuadCombo::single(quad, pair.complement()),
    )
}

/// `V_inf(X_j ± X_k)·V_inf(Y_j ± Y_k)`; below 4 is EPR evidence for the pair.
pub fn obr_pair(m: &MomentState, pair: ModePair, sign: Sign) -> f64 {
    inferred_variance_pair(m, Quadrature::X, pair, sign)
        * inferred_variance_pair(m, Quadrature::Y, pair, sign)
}

/// VLF gains `g₁, g₂, g₃`. `g_k` weights `Y_k` in the sum for the pair
/// that excludes mode `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VlfGains {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl VlfGains {
    pub const UNIT: VlfGains = VlfGains {
        g1: 1.0,
        g2: 1.0,
        g3: 1.0,
    };

    pub fn for_mode(&self, k: Mode) -> f64 {
        match k {
            Mode::One => self.g1,
            Mode::Two => self.g2,
            Mode::Three => self.g3,
        }
    }
}

/// Gains minimising each VLF sum:
/// `g_k = −(⟨Y_kY_i⟩ + ⟨Y_kY_j⟩) / ⟨Y_k²⟩`.
pub fn vlf_gains(m: &MomentState) -> VlfGains {
    let g = |k: Mode| {
        let (i, j) = k.others();
        let var = m.get(Quadrature::Y, k, k);
        if var < DENOMINATOR_FLOOR {
            return 0.0;
        }
        -(m.get(Quadrature::Y, k, i) + m.get(Quadrature::Y, k, j)) / var
    };
    VlfGains {
        g1: g(Mode::One),
        g2: g(Mode::Two),
        g3: g(Mode::Three),
    }
}

/// `V(X_i − X_j) + V(Y_i + Y_j + g_k Y_k)` for the pair `(i, j)`.
pub fn vlf_value(m: &MomentState, pair: ModePair, gains: &VlfGains) -> f64 {
    let (i, j) = pair.modes();
    let k = pair.complement();
    let diff = QuadCombo::pair(Quadrature::X, i, j, -1.0);
    let mut w = Vector3::zeros();
    w[i.index()] = 1.0;
    w[j.index()] = 1.0;
    w[k.index()] = gains.for_mode(k);
    let sum = QuadCombo {
        quad: Quadrature::Y,
        weights: w,
    };
    combo_variance(m, &diff) + combo_variance(m, &sum)
}

/// One value per unordered mode pair, keyed by the pair in the X difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VlfTriple {
    pub v12: f64,
    pub v13: f64,
    pub v23: f64,
}

impl VlfTriple {
    pub fn values(&self) -> [f64; 3] {
        [self.v12, self.v13, self.v23]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObrSingles {
    pub obr1: f64,
    pub obr2: f64,
    pub obr3: f64,
}

impl ObrSingles {
    pub fn values(&self) -> [f64; 3] {
        [self.obr1, self.obr2, self.obr3]
    }
}

/// Pair products, named by the inferred pair: `obr23` infers `q₂ ± q₃`
/// from mode 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObrPairs {
    pub obr23: f64,
    pub obr13: f64,
    pub obr12: f64,
}

impl ObrPairs {
    pub fn values(&self) -> [f64; 3] {
        [self.obr23, self.obr13, self.obr12]
    }
}

/// Sufficient conditions for genuine tripartite entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TripartiteFlags {
    /// At least two optimised VLF sums below 4.
    ///
    /// All three flags use [`violates`].
    pub vlf: bool,
    /// All three single-mode products below 1.
    pub obr_single: bool,
    /// All three pair products below 4.
    pub obr_pair: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaReport {
    pub t: f64,
    pub sign: Sign,
    pub vlf_raw: VlfTriple,
    pub vlf_opt: VlfTriple,
    pub gains: VlfGains,
    pub obr_single: ObrSingles,
    pub obr_pair: ObrPairs,
    pub flags: TripartiteFlags,
}

/// Every criterion at one time point. Raw VLF sums use unit gains.
pub fn evaluate_all(m: &MomentState, t: f64, sign: Sign) -> CriteriaReport {
    let vlf = |g: &VlfGains| VlfTriple {
        v12: vlf_value(m, ModePair::P12, g),
        v13: vlf_value(m, ModePair::P13, g),
        v23: vlf_value(m, ModePair::P23, g),
    };
    let gains = vlf_gains(m);
    let vlf_raw = vlf(&VlfGains::UNIT);
    let vlf_opt = vlf(&gains);
    let obr_single = ObrSingles {
        obr1: obr_single(m, Mode::One, sign),
        obr2: obr_single(m, Mode::Two, sign),
        obr3: obr_single(m, Mode::Three, sign),
    };
    let obr_pair = ObrPairs {
        obr23: obr_pair(m, ModePair::P23, sign),
        obr13: obr_pair(m, ModePair::P13, sign),
        obr12: obr_pair(m, ModePair::P12, sign),
    };
    let flags = TripartiteFlags {
        vlf: vlf_opt
            .values()
            .iter()
            .filter(|&&v| violates(v, PAIR_BOUND))
            .count()
            >= 2,
        obr_single: obr_single
            .values()
            .iter()
            .all(|&v| violates(v, OBR_SINGLE_BOUND)),
        obr_pair: obr_pair.values().iter().all(|&v| violates(v, PAIR_BOUND)),
    };
    CriteriaReport {
        t,
        sign,
        vlf_raw,
        vlf_opt,
        gains,
        obr_single,
        obr_pair,
        flags,
    }
}
