//! Congruence diagonalization of `A + σI` for threshold graphs.
//!
//! The sweep runs bottom-up over the creation sequence, `m = n` down to `2`,
//! touching only `d_{m-1}` and `d_m` at each step. After step `m` the entry
//! `d_m` is final, so the kernel can stream final entries to an observer and
//! needs no storage beyond the input bits. Sylvester's law of inertia turns
//! the signs of the final diagonal into eigenvalue counts relative to `-σ`.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::sequences::{CreationSequence, SequenceError};
use crate::sig;

/// Absolute tolerance for the singular-branch tests `α + σ = 2`, `σ = 1`
/// and `σ = 0`.
pub const BRANCH_EPS: f64 = 1e-12;
/// Final diagonal entries with magnitude at most this are classified as 0.
pub const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagonalizeError {
    #[error("shift parameter must be finite, got {0}")]
    NonFiniteShift(f64),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("singular subcase {subcase} encountered at step m = {step}")]
    SingularityEncountered { step: usize, subcase: Subcase },
    #[error("transfer function {kind} has a pole at alpha = {alpha} (sigma = {sigma})")]
    PoleAtInput {
        kind: Transfer,
        sigma: f64,
        alpha: f64,
    },
    #[error("flip index {l} must satisfy 1 < l < {n}")]
    FlipIndexOutOfRange { l: usize, n: usize },
}

/// The diagonal initialization value `σ`; the sweep is congruent to `A + σI`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Shift(f64);

impl Shift {
    pub fn new(sigma: f64) -> Result<Self, DiagonalizeError> {
        if sigma.is_finite() {
            Ok(Shift(sigma))
        } else {
            Err(DiagonalizeError::NonFiniteShift(sigma))
        }
    }

    /// Shift for counting eigenvalues relative to `x`, i.e. `σ = -x`.
    /// Probes at `x = 0` and `x = -1` map to exactly `σ = 0` and `σ = 1`.
    pub fn at_probe(x: f64) -> Result<Self, DiagonalizeError> {
        if x == 0.0 {
            return Ok(Shift(0.0));
        }
        Self::new(-x)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Tolerances used by the sweep and by sign classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub branch: f64,
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            branch: BRANCH_EPS,
            zero: ZERO_TOL,
        }
    }
}

/// The branch taken by one iteration of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcase {
    /// `b_{m-1} = b_m = 1`, `α + σ ≠ 2`.
    Case1a,
    /// `b_{m-1} = b_m = 1`, `α + σ = 2`, `σ = 1`.
    Case1b,
    /// `b_{m-1} = b_m = 1`, `α + σ = 2`, `σ ≠ 1`; clears `b_{m-1}`.
    Case1c,
    /// `b_{m-1} = 0`, `b_m = 1`, `σ = 0`.
    Case2a,
    /// `b_{m-1} = 0`, `b_m = 1`, `σ ≠ 0`; sets `b_{m-1}`.
    Case2b,
    /// `b_m = 0`: nothing changes.
    Skip,
}

impl Subcase {
    pub fn label(self) -> &'static str {
        match self {
            Subcase::Case1a => "1a",
            Subcase::Case1b => "1b",
            Subcase::Case1c => "1c",
            Subcase::Case2a => "2a",
            Subcase::Case2b => "2b",
            Subcase::Skip => "skip",
        }
    }

    pub fn is_generic(self) -> bool {
        matches!(self, Subcase::Case1a | Subcase::Case2b)
    }
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Subcase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn classify(value: f64, zero_tol: f64) -> Sign {
        if value.abs() <= zero_tol {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

/// Renders signs as a compact string such as `"++-+"`.
pub fn sign_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

/// One logged iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub m: usize,
    pub subcase: Subcase,
    /// New value written to the working bit `b_{m-1}`, if the step changed it.
    pub mutation: Option<bool>,
}

/// Everything produced by one full sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizeTrace {
    pub sigma: f64,
    /// `d_1 … d_n`.
    pub final_diagonal: Vec<f64>,
    /// `α_1 … α_n`: the value written to `d_{m-1}` at step `m` is `α_{m-1}`,
    /// and `α_n = σ`.
    pub alpha: Vec<f64>,
    /// Steps in execution order, `m = n` first.
    pub steps: Vec<StepRecord>,
    pub signs: Vec<Sign>,
}

impl DiagonalizeTrace {
    pub fn counts(&self) -> EigenCounts {
        EigenCounts::from_signs(&self.signs)
    }

    pub fn sign_string(&self) -> String {
        sign_string(&self.signs)
    }

    /// Subcase executed at step `m`, if any.
    pub fn subcase_at(&self, m: usize) -> Option<Subcase> {
        self.steps.iter().find(|s| s.m == m).map(|s| s.subcase)
    }

    pub fn subcases(&self) -> Vec<Subcase> {
        self.steps.iter().map(|s| s.subcase).collect()
    }
}

impl Serialize for DiagonalizeTrace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Step {
            m: usize,
            case: Subcase,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(serialize_with = "sig::f64")]
            sigma: f64,
            #[serde(serialize_with = "sig::vec")]
            final_diagonal: &'a [f64],
            #[serde(serialize_with = "sig::vec")]
            alpha: &'a [f64],
            subcases: Vec<Step>,
            signs: String,
        }
        Out {
            sigma: self.sigma,
            final_diagonal: &self.final_diagonal,
            alpha: &self.alpha,
            subcases: self
                .steps
                .iter()
                .map(|st| Step {
                    m: st.m,
                    case: st.subcase,
                })
                .collect(),
            signs: self.sign_string(),
        }
        .serialize(s)
    }
}

/// Eigenvalue counts relative to a probe value `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct EigenCounts {
    pub greater: usize,
    pub equal: usize,
    pub less: usize,
}

impl EigenCounts {
    pub fn total(&self) -> usize {
        self.greater + self.equal + self.less
    }

    pub fn from_signs(signs: &[Sign]) -> Self {
        let mut c = EigenCounts::default();
        for s in signs {
            c.tally(*s);
        }
        c
    }

    fn tally(&mut self, sign: Sign) {
        match sign {
            Sign::Positive => self.greater += 1,
            Sign::Zero => self.equal += 1,
            Sign::Negative => self.less += 1,
        }
    }
}

trait Observer {
    /// `d_index` (1-based) has reached its final value.
    fn settle(&mut self, index: usize, value: f64);

    fn step(&mut self, _m: usize, _subcase: Subcase, _assigned: f64, _mutation: Option<bool>) {}
}

/// The sweep itself. Holds only the running `α = d_m` and the working bit
/// `b_m`; the bit `b_{m-1}` is read from the untouched input because no
/// earlier step can have written it.
fn sweep<O: Observer>(bits: &[bool], sigma: f64, branch_eps: f64, obs: &mut O) {
    let n = bits.len();
    if n == 0 {
        return;
    }
    let mut alpha = sigma;
    let mut bit_m = bits[n - 1];
    for m in (2..=n).rev() {
        let bit_prev = bits[m - 2];
        let (subcase, settled, assigned, new_prev) = if !bit_m {
            (Subcase::Skip, alpha, sigma, bit_prev)
        } else if bit_prev {
            let denom = alpha + sigma - 2.0;
            if denom.abs() > branch_eps {
                (Subcase::Case1a, denom, (alpha * sigma - 1.0) / denom, true)
            } else if (sigma - 1.0).abs() <= branch_eps {
                (Subcase::Case1b, 0.0, 1.0, true)
            } else {
                (Subcase::Case1c, -(1.0 - sigma).powi(2), 1.0, false)
            }
        } else if sigma.abs() <= branch_eps {
            (Subcase::Case2a, -1.0, 1.0, false)
        } else {
            (Subcase::Case2b, sigma, alpha - 1.0 / sigma, true)
        };
        let mutation = (new_prev != bit_prev).then_some(new_prev);
        obs.settle(m, settled);
        obs.step(m, subcase, assigned, mutation);
        alpha = assigned;
        bit_m = new_prev;
    }
    obs.settle(1, alpha);
}

struct TraceObserver {
    diagonal: Vec<f64>,
    alpha: Vec<f64>,
    steps: Vec<StepRecord>,
}

impl Observer for TraceObserver {
    fn settle(&mut self, index: usize, value: f64) {
        self.diagonal[index - 1] = value;
    }

    fn step(&mut self, m: usize, subcase: Subcase, assigned: f64, mutation: Option<bool>) {
        self.alpha[m - 2] = assigned;
        self.steps.push(StepRecord {
            m,
            subcase,
            mutation,
        });
    }
}

struct CountObserver {
    zero_tol: f64,
    counts: EigenCounts,
}

impl Observer for CountObserver {
    #[inline]
    fn settle(&mut self, _index: usize, value: f64) {
        self.counts.tally(Sign::classify(value, self.zero_tol));
    }
}

struct DiagonalObserver(Vec<f64>);

impl Observer for DiagonalObserver {
    fn settle(&mut self, index: usize, value: f64) {
        self.0[index - 1] = value;
    }
}

pub fn diagonalize(seq: &CreationSequence, shift: Shift) -> DiagonalizeTrace {
    diagonalize_with(seq, shift, &Tolerances::default())
}

pub fn diagonalize_with(
    seq: &CreationSequence,
    shift: Shift,
    tol: &Tolerances,
) -> DiagonalizeTrace {
    let n = seq.len();
    let sigma = shift.value();
    let mut obs = TraceObserver {
        diagonal: vec![sigma; n],
        alpha: vec![sigma; n],
        steps: Vec::with_capacity(n.saturating_sub(1)),
    };
    sweep(seq.bits(), sigma, tol.branch, &mut obs);
    let signs = obs
        .diagonal
        .iter()
        .map(|&d| Sign::classify(d, tol.zero))
        .collect();
    DiagonalizeTrace {
        sigma,
        final_diagonal: obs.diagonal,
        alpha: obs.alpha,
        steps: obs.steps,
        signs,
    }
}

/// Final diagonal only, without the α-sequence or step log.
pub fn final_diagonal(seq: &CreationSequence, shift: Shift) -> Vec<f64> {
    let mut obs = DiagonalObserver(vec![shift.value(); seq.len()]);
    sweep(seq.bits(), shift.value(), BRANCH_EPS, &mut obs);
    obs.0
}

/// Number of eigenvalues of `A(G)` greater than, equal to, and less than `x`.
/// Runs in O(n) time and allocates nothing.
pub fn eigencount(seq: &CreationSequence, x: f64) -> Result<EigenCounts, DiagonalizeError> {
    eigencount_with(seq, x, &Tolerances::default())
}

pub fn eigencount_with(
    seq: &CreationSequence,
    x: f64,
    tol: &Tolerances,
) -> Result<EigenCounts, DiagonalizeError> {
    let shift = Shift::at_probe(x)?;
    Ok(counts_at_shift(seq, shift, tol))
}

/// Sign counts of the final diagonal for an explicit shift.
pub fn counts_at_shift(seq: &CreationSequence, shift: Shift, tol: &Tolerances) -> EigenCounts {
    let mut obs = CountObserver {
        zero_tol: tol.zero,
        counts: EigenCounts::default(),
    };
    sweep(seq.bits(), shift.value(), tol.branch, &mut obs);
    obs.counts
}

/// The α-sequence `(α_1, …, α_n)` of a connected sequence. Fails if the
/// sweep leaves the generic subcases 1a/2b.
pub fn alpha_trace(seq: &CreationSequence, shift: Shift) -> Result<Vec<f64>, DiagonalizeError> {
    seq.require_connected()?;
    let trace = diagonalize(seq, shift);
    if let Some(bad) = trace.steps.iter().find(|s| !s.subcase.is_generic()) {
        return Err(DiagonalizeError::SingularityEncountered {
            step: bad.m,
            subcase: bad.subcase,
        });
    }
    Ok(trace.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transfer {
    /// `f(α) = α - 1/σ`, used by subcase 2b.
    F,
    /// `g(α) = (ασ - 1)/(α + σ - 2)`, used by subcase 1a.
    G,
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transfer::F => "f",
            Transfer::G => "g",
        })
    }
}

/// The two transfer maps for a fixed shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunctions {
    pub sigma: f64,
}

impl TransferFunctions {
    pub fn new(sigma: f64) -> Self {
        Self { sigma }
    }

    pub fn f(&self, alpha: f64) -> Result<f64, DiagonalizeError> {
        transfer_eval(Transfer::F, self.sigma, alpha)
    }

    pub fn g(&self, alpha: f64) -> Result<f64, DiagonalizeError> {
        transfer_eval(Transfer::G, self.sigma, alpha)
    }

    /// `g` has its pole at `α = 2 - σ`; both maps increase to its right.
    pub fn pole(&self) -> f64 {
        2.0 - self.sigma
    }
}

pub fn transfer_eval(kind: Transfer, sigma: f64, alpha: f64) -> Result<f64, DiagonalizeError> {
    let pole = DiagonalizeError::PoleAtInput { kind, sigma, alpha };
    match kind {
        Transfer::F => {
            if sigma.abs() <= BRANCH_EPS {
                return Err(pole);
            }
            Ok(alpha - 1.0 / sigma)
        }
        Transfer::G => {
            let denom = alpha + sigma - 2.0;
            if denom.abs() <= BRANCH_EPS {
                return Err(pole);
            }
            Ok((alpha * sigma - 1.0) / denom)
        }
    }
}

/// Top values `(α_1, α'_1)` of the α-sequences for `seq` and for `seq` with
/// `b_l` flipped. Both sequences share `α_{l+1}, …, α_n`.
pub fn perturb_compare(
    seq: &CreationSequence,
    l: usize,
    sigma: f64,
) -> Result<(f64, f64), DiagonalizeError> {
    let n = seq.len();
    if l <= 1 || l >= n {
        return Err(DiagonalizeError::FlipIndexOutOfRange { l, n });
    }
    let shift = Shift::new(sigma)?;
    let flipped = seq.with_flipped(l)?;
    let original = alpha_trace(seq, shift)?;
    let perturbed = alpha_trace(&flipped, shift)?;
    Ok((original[0], perturbed[0]))
}
