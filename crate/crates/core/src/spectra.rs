//! Inertia, extremal-eigenvalue localization and the forbidden interval.
//!
//! Localization is pure counting: the sweep tells how many eigenvalues lie
//! below a probe, and bisection on that count pins down a single eigenvalue.
//! The initial brackets start at the edges of the eigenvalue-free interval
//! around `[-1, 0]`, so the high-multiplicity eigenvalues `-1` and `0` never
//! sit inside a bracket.

use std::f64::consts::SQRT_2;

use serde::Serialize;
use thiserror::Error;

use crate::diagonalize::{
    counts_at_shift, eigencount_with, DiagonalizeError, EigenCounts, Shift, Tolerances,
};
use crate::sequences::{CreationSequence, SequenceError};
use crate::sig;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Diagonalize(#[from] DiagonalizeError),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("bisection stalled at width {width} after {iterations} iterations (tol {tol})")]
    ToleranceTooSmall {
        tol: f64,
        width: f64,
        iterations: usize,
    },
    #[error("eigenvalue count changes inside the forbidden interval near {edge}: expected {expected}, found {found}")]
    GapViolation {
        edge: f64,
        expected: usize,
        found: usize,
    },
}

/// The closed interval `[(-1-√2)/2, (-1+√2)/2]`, which holds no eigenvalue of
/// any threshold graph other than `-1` and `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForbiddenInterval;

impl ForbiddenInterval {
    pub const LO: f64 = (-1.0 - SQRT_2) / 2.0;
    pub const HI: f64 = (-1.0 + SQRT_2) / 2.0;

    pub fn contains(x: f64) -> bool {
        (Self::LO..=Self::HI).contains(&x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
    /// Multiplicity of the eigenvalue `-1`.
    pub n_minus_one: usize,
}

impl Inertia {
    pub fn order(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.n_plus, self.n_zero, self.n_minus)
    }
}

fn connected_pair(seq: &CreationSequence) -> Result<(), SpectraError> {
    if seq.len() < 2 {
        return Err(SequenceError::OrderTooSmall {
            n: seq.len(),
            min: 2,
        }
        .into());
    }
    seq.require_connected()?;
    Ok(())
}

/// Inertia read off substring counts: ones give `n_-`, `"00"` gives `n_0`,
/// `"01"` gives `n_+`, and `"11"` is reported as `n_{-1}`.
///
/// The `"11"` count misses one copy of `-1` whenever `b_2 = 1` (e.g. `K_3`);
/// [`inertia_by_diagonalization`] is authoritative for `n_{-1}`.
pub fn inertia_by_counting(seq: &CreationSequence) -> Result<Inertia, SpectraError> {
    connected_pair(seq)?;
    Ok(Inertia {
        n_plus: seq.count_pairs(false, true),
        n_zero: seq.count_pairs(false, false),
        n_minus: seq.count_ones(),
        n_minus_one: seq.count_pairs(true, true),
    })
}

/// Inertia from the sweep at `σ = 0`, with `n_{-1}` from the zero count at
/// `σ = 1`.
pub fn inertia_by_diagonalization(seq: &CreationSequence) -> Result<Inertia, SpectraError> {
    connected_pair(seq)?;
    let tol = Tolerances::default();
    let at_zero = counts_at_shift(seq, Shift::at_probe(0.0)?, &tol);
    let at_minus_one = counts_at_shift(seq, Shift::at_probe(-1.0)?, &tol);
    Ok(Inertia {
        n_plus: at_zero.greater,
        n_zero: at_zero.equal,
        n_minus: at_zero.less,
        n_minus_one: at_minus_one.equal,
    })
}

/// Both inertia routes side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InertiaCheck {
    pub by_counting: Inertia,
    pub by_diagonalization: Inertia,
    /// `(n_+, n_0, n_-)` agree.
    pub triple_agrees: bool,
    /// The `"11"` count equals the true multiplicity of `-1`.
    pub minus_one_agrees: bool,
}

impl InertiaCheck {
    pub fn agrees(&self) -> bool {
        self.triple_agrees && self.minus_one_agrees
    }
}

pub fn cross_check_inertia(seq: &CreationSequence) -> Result<InertiaCheck, SpectraError> {
    let by_counting = inertia_by_counting(seq)?;
    let by_diagonalization = inertia_by_diagonalization(seq)?;
    Ok(InertiaCheck {
        by_counting,
        by_diagonalization,
        triple_agrees: by_counting.triple() == by_diagonalization.triple(),
        minus_one_agrees: by_counting.n_minus_one == by_diagonalization.n_minus_one,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionConfig {
    pub tol: f64,
    pub max_iterations: usize,
    pub tolerances: Tolerances,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerances: Tolerances::default(),
        }
    }
}

impl BisectionConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), SpectraError> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(())
        } else {
            Err(SpectraError::InvalidTolerance(self.tol))
        }
    }
}

/// One eigenvalue pinned to a bracket narrower than the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Localization {
    #[serde(serialize_with = "sig::f64")]
    pub value: f64,
    #[serde(serialize_with = "sig::pair")]
    pub bracket: (f64, f64),
    pub iterations: usize,
}

fn counts(
    seq: &CreationSequence,
    x: f64,
    cfg: &BisectionConfig,
) -> Result<EigenCounts, SpectraError> {
    Ok(eigencount_with(seq, x, &cfg.tolerances)?)
}

/// Number of eigenvalues `≤ x`.
fn at_or_below(c: EigenCounts) -> usize {
    c.less + c.equal
}

/// Bisects for the `rank`-th smallest eigenvalue (1-based), given
/// `#{λ ≤ lo} < rank ≤ #{λ ≤ hi}`.
fn bisect(
    seq: &CreationSequence,
    mut lo: f64,
    mut hi: f64,
    rank: usize,
    cfg: &BisectionConfig,
) -> Result<Localization, SpectraError> {
    let nudge = 10.0 * cfg.tol;
    // split decisions use the exact sign of each final entry
    let strict = BisectionConfig {
        tolerances: Tolerances {
            zero: 0.0,
            ..cfg.tolerances
        },
        ..*cfg
    };
    let mut iterations = 0;
    while hi - lo >= cfg.tol {
        let mid = lo + (hi - lo) / 2.0;
        if iterations == cfg.max_iterations || mid <= lo || mid >= hi {
            return Err(SpectraError::ToleranceTooSmall {
                tol: cfg.tol,
                width: hi - lo,
                iterations,
            });
        }
        iterations += 1;
        let mut probe = mid;
        let mut c = counts(seq, probe, &strict)?;
        if c.equal > 0 {
            // probe sits on an eigenvalue; step off it without leaving the bracket
            if mid - nudge > lo {
                probe = mid - nudge;
            } else if mid + nudge < hi {
                probe = mid + nudge;
            }
            c = counts(seq, probe, &strict)?;
        }
        if at_or_below(c) >= rank {
            hi = probe;
        } else {
            lo = probe;
        }
    }
    Ok(Localization {
        value: lo + (hi - lo) / 2.0,
        bracket: (lo, hi),
        iterations,
    })
}

/// Smallest positive eigenvalue `λ⁺(G)`; `None` only for the single vertex.
pub fn locate_lambda_plus(
    seq: &CreationSequence,
    cfg: &BisectionConfig,
) -> Result<Option<Localization>, SpectraError> {
    cfg.validate()?;
    seq.require_connected()?;
    let at_zero = counts(seq, 0.0, cfg)?;
    if at_zero.greater == 0 {
        return Ok(None);
    }
    let nonpositive = at_or_below(at_zero);
    let edge = ForbiddenInterval::HI;
    let below_edge = at_or_below(counts(seq, edge, cfg)?);
    if below_edge != nonpositive {
        return Err(SpectraError::GapViolation {
            edge,
            expected: nonpositive,
            found: below_edge,
        });
    }
    bisect(seq, edge, seq.len() as f64, nonpositive + 1, cfg).map(Some)
}

/// Largest eigenvalue below `-1`, `λ⁻(G)`; `None` when every eigenvalue is
/// at least `-1` (complete graphs).
pub fn locate_lambda_minus(
    seq: &CreationSequence,
    cfg: &BisectionConfig,
) -> Result<Option<Localization>, SpectraError> {
    cfg.validate()?;
    seq.require_connected()?;
    let below_minus_one = counts(seq, -1.0, cfg)?.less;
    if below_minus_one == 0 {
        return Ok(None);
    }
    let edge = ForbiddenInterval::LO;
    let below_edge = at_or_below(counts(seq, edge, cfg)?);
    if below_edge != below_minus_one {
        return Err(SpectraError::GapViolation {
            edge,
            expected: below_minus_one,
            found: below_edge,
        });
    }
    bisect(seq, -(seq.len() as f64), edge, below_minus_one, cfg).map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Brackets {
    pub plus: Option<Localization>,
    pub minus: Option<Localization>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSummary {
    #[serde(serialize_with = "sig::opt")]
    pub lambda_plus: Option<f64>,
    #[serde(serialize_with = "sig::opt")]
    pub lambda_minus: Option<f64>,
    #[serde(serialize_with = "sig::f64")]
    pub tol: f64,
    pub iterations: usize,
    pub brackets: Brackets,
}

pub fn spectral_summary(
    seq: &CreationSequence,
    cfg: &BisectionConfig,
) -> Result<SpectralSummary, SpectraError> {
    let plus = locate_lambda_plus(seq, cfg)?;
    let minus = locate_lambda_minus(seq, cfg)?;
    Ok(SpectralSummary {
        lambda_plus: plus.map(|l| l.value),
        lambda_minus: minus.map(|l| l.value),
        tol: cfg.tol,
        iterations: plus.map_or(0, |l| l.iterations) + minus.map_or(0, |l| l.iterations),
        brackets: Brackets { plus, minus },
    })
}

/// Checks by counting that the only eigenvalues inside the forbidden interval
/// are `-1` and `0`, with their exact multiplicities.
pub fn forbidden_interval_clear(seq: &CreationSequence) -> Result<bool, SpectraError> {
    const DELTA: f64 = 1e-9;
    let inertia = inertia_by_diagonalization(seq)?;
    let cfg = BisectionConfig::default();
    let below_hi = at_or_below(counts(seq, ForbiddenInterval::HI - DELTA, &cfg)?);
    let below_lo = counts(seq, ForbiddenInterval::LO + DELTA, &cfg)?.less;
    Ok(below_hi - below_lo == inertia.n_minus_one + inertia.n_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{anti_regular, parse};

    fn seq(s: &str) -> CreationSequence {
        parse(s).unwrap()
    }

    fn cfg() -> BisectionConfig {
        BisectionConfig::default()
    }

    #[test]
    fn interval_constants() {
        assert!((ForbiddenInterval::LO + 1.207106781186).abs() < 1e-11);
        assert!((ForbiddenInterval::HI - 0.207106781186).abs() < 1e-11);
        assert!(ForbiddenInterval::LO < -1.0 && ForbiddenInterval::HI > 0.0);
        assert!(ForbiddenInterval::contains(-1.0));
        assert!(!ForbiddenInterval::contains(0.25));
    }

    #[test]
    fn counting_examples() {
        let a16 = inertia_by_counting(&anti_regular(16).unwrap()).unwrap();
        assert_eq!(a16.triple(), (8, 0, 8));
        for k in 1..20 {
            let a = inertia_by_counting(&anti_regular(2 * k + 1).unwrap()).unwrap();
            assert_eq!(a.triple(), (k, 1, k));
        }
        let k3 = inertia_by_counting(&seq("011")).unwrap();
        assert_eq!(
            k3,
            Inertia {
                n_plus: 1,
                n_zero: 0,
                n_minus: 2,
                n_minus_one: 1
            }
        );
        assert!(matches!(
            inertia_by_counting(&seq("0110")),
            Err(SpectraError::Sequence(SequenceError::NotConnected))
        ));
    }

    #[test]
    fn diagonalization_examples() {
        assert_eq!(
            inertia_by_diagonalization(&seq("011")).unwrap(),
            Inertia {
                n_plus: 1,
                n_zero: 0,
                n_minus: 2,
                n_minus_one: 2
            }
        );
        assert_eq!(
            inertia_by_diagonalization(&seq("0001")).unwrap().triple(),
            (1, 2, 1)
        );
        assert_eq!(
            inertia_by_diagonalization(&seq("01")).unwrap(),
            Inertia {
                n_plus: 1,
                n_zero: 0,
                n_minus: 1,
                n_minus_one: 1
            }
        );
    }

    #[test]
    fn cross_check_flags_minus_one_discrepancy() {
        let k3 = cross_check_inertia(&seq("011")).unwrap();
        assert!(k3.triple_agrees);
        assert!(!k3.minus_one_agrees);
        let star = cross_check_inertia(&seq("0001")).unwrap();
        assert!(star.agrees());
    }

    #[test]
    fn lambda_plus_examples() {
        let tol = cfg().tol;
        let k2 = locate_lambda_plus(&seq("01"), &cfg()).unwrap().unwrap();
        assert!((k2.value - 1.0).abs() <= tol);
        let k3 = locate_lambda_plus(&seq("011"), &cfg()).unwrap().unwrap();
        assert!((k3.value - 2.0).abs() <= tol);
        // paw: root of x^3 - x^2 - 3x + 1 between 0.2071 and 1
        let paw = locate_lambda_plus(&seq("0101"), &cfg()).unwrap().unwrap();
        assert!(paw.value > ForbiddenInterval::HI && paw.value < 1.0);
        let l = paw.value;
        assert!((l.powi(3) - l * l - 3.0 * l + 1.0).abs() < 1e-8);
        assert!(paw.bracket.1 - paw.bracket.0 < tol);
        assert_eq!(locate_lambda_plus(&seq("0"), &cfg()).unwrap(), None);
    }

    #[test]
    fn lambda_minus_examples() {
        let tol = cfg().tol;
        for n in 2..8 {
            let kn = parse(&format!("0{}", "1".repeat(n - 1))).unwrap();
            assert_eq!(locate_lambda_minus(&kn, &cfg()).unwrap(), None);
        }
        let star = locate_lambda_minus(&seq("0001"), &cfg()).unwrap().unwrap();
        assert!((star.value + 3f64.sqrt()).abs() <= tol);
        let paw = locate_lambda_minus(&seq("0101"), &cfg()).unwrap().unwrap();
        assert!(paw.value <= -1.2071);
        let l = paw.value;
        assert!((l.powi(3) - l * l - 3.0 * l + 1.0).abs() < 1e-8);
    }

    #[test]
    fn localization_rejects_bad_input() {
        assert!(matches!(
            locate_lambda_plus(&seq("0101"), &BisectionConfig::with_tol(0.0)),
            Err(SpectraError::InvalidTolerance(_))
        ));
        assert!(matches!(
            locate_lambda_minus(&seq("010"), &cfg()),
            Err(SpectraError::Sequence(SequenceError::NotConnected))
        ));
        let tiny = BisectionConfig::with_tol(1e-300);
        assert!(matches!(
            locate_lambda_plus(&seq("0101"), &tiny),
            Err(SpectraError::ToleranceTooSmall { .. })
        ));
    }

    #[test]
    fn forbidden_interval_examples() {
        assert!(forbidden_interval_clear(&anti_regular(7).unwrap()).unwrap());
        assert_eq!(
            inertia_by_diagonalization(&anti_regular(7).unwrap())
                .unwrap()
                .n_zero,
            1
        );
        assert!(forbidden_interval_clear(&seq("01")).unwrap());
        assert!(forbidden_interval_clear(&seq("0111")).unwrap());
    }

    #[test]
    fn summary_json() {
        let s = spectral_summary(&seq("0001"), &cfg()).unwrap();
        let v: serde_json::Value = serde_json::to_value(s).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys.len(), 5);
        assert!((v["lambda_plus"].as_f64().unwrap() - 1.73205080757).abs() < 1e-9);
        assert!(v["brackets"]["minus"]["bracket"].is_array());
        let k3 = spectral_summary(&seq("011"), &cfg()).unwrap();
        assert!(k3.lambda_minus.is_none());
        assert!(serde_json::to_value(k3).unwrap()["lambda_minus"].is_null());
    }
}
