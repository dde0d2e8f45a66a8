//! Exhaustive and family-targeted checks of the extremal behaviour of the
//! anti-regular graph `A_n` among connected threshold graphs.
//!
//! Every comparison is between two bisection results, each accurate to
//! `tol`, so inequalities are judged with a combined slack of `2·tol`.
//! Near-ties inside that slack are recomputed at `tol / 100` before being
//! reported as warnings.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagonalize::{diagonalize, DiagonalizeError, Shift};
use crate::sequences::{
    anti_regular, connected_by_index, enumerate_critical, widened_family, CreationSequence,
    RunLengthForm, SequenceError,
};
use crate::sig;
use crate::spectra::{locate_lambda_minus, locate_lambda_plus, BisectionConfig, SpectraError};

pub const DEFAULT_VERIFY_CAP: usize = 20;
pub const DEFAULT_SIGN_SEED: u64 = 0x5eed_a17e;
/// Half-width of the neighbourhood of `σ = 1` the odd sign-pattern sampler avoids.
pub const MINUS_ONE_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Diagonalize(#[from] DiagonalizeError),
    #[error("order {n} requires {requirement}")]
    InvalidOrder { n: usize, requirement: &'static str },
    #[error("anti-regular graph of order {0} has no eigenvalue below -1")]
    MissingAntiRegularValue(usize),
    #[error("could not build a worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub bisection: BisectionConfig,
    /// Worker threads; 1 runs serially on the calling thread.
    pub jobs: usize,
    pub cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            bisection: BisectionConfig::default(),
            jobs: 1,
            cap: DEFAULT_VERIFY_CAP,
        }
    }
}

impl VerifyConfig {
    pub fn tol(&self) -> f64 {
        self.bisection.tol
    }

    fn slack(&self) -> f64 {
        2.0 * self.tol()
    }

    fn refined(&self) -> BisectionConfig {
        BisectionConfig {
            tol: self.tol() / 100.0,
            ..self.bisection
        }
    }
}

/// `λ⁺` and `λ⁻` of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphRow {
    pub seq: CreationSequence,
    #[serde(serialize_with = "sig::opt")]
    pub lambda_plus: Option<f64>,
    #[serde(serialize_with = "sig::opt")]
    pub lambda_minus: Option<f64>,
}

fn extremes(
    seq: &CreationSequence,
    cfg: &BisectionConfig,
) -> Result<(Option<f64>, Option<f64>), VerifyError> {
    let plus = locate_lambda_plus(seq, cfg)?.map(|l| l.value);
    let minus = locate_lambda_minus(seq, cfg)?.map(|l| l.value);
    Ok((plus, minus))
}

pub fn graph_row(seq: CreationSequence, cfg: &BisectionConfig) -> Result<GraphRow, VerifyError> {
    let (lambda_plus, lambda_minus) = extremes(&seq, cfg)?;
    Ok(GraphRow {
        seq,
        lambda_plus,
        lambda_minus,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremal {
    pub seq: CreationSequence,
    #[serde(serialize_with = "sig::f64")]
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlusMinus {
    #[serde(serialize_with = "sig::opt")]
    pub plus: Option<f64>,
    #[serde(serialize_with = "sig::opt")]
    pub minus: Option<f64>,
}

/// Outcome of the exhaustive comparison at one order `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub total: u64,
    /// Graph attaining the smallest `λ⁺` (first in enumeration order on ties).
    pub winner_plus: Option<Extremal>,
    /// Graph attaining the largest `λ⁻` among graphs that have one.
    pub winner_minus: Option<Extremal>,
    pub anti_regular: PlusMinus,
    /// Smallest gaps `λ⁺(G) - λ⁺(A_n)` and `λ⁻(A_n) - λ⁻(G)` over `G ≠ A_n`.
    pub margins: PlusMinus,
    /// Graphs with no eigenvalue below `-1`, left out of the `λ⁻` comparison.
    pub excluded_minus: u64,
    pub warnings: Vec<String>,
    pub verdict: bool,
    #[serde(skip)]
    pub rows: Vec<GraphRow>,
}

fn run_indexed<T, F>(total: u64, jobs: usize, f: F) -> Result<Vec<T>, VerifyError>
where
    T: Send,
    F: Fn(u64) -> Result<T, VerifyError> + Sync + Send,
{
    if jobs <= 1 {
        return (0..total).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    // indexed collect keeps enumeration order regardless of scheduling
    pool.install(|| (0..total).into_par_iter().map(f).collect())
}

/// Outcome of one conjectured inequality `smaller ≤ larger`.
enum Judgement {
    Holds,
    Tie(f64),
    Fails(f64),
}

fn judge(smaller: f64, larger: f64, slack: f64) -> Judgement {
    let gap = larger - smaller;
    if gap > slack {
        Judgement::Holds
    } else if gap >= -slack {
        Judgement::Tie(gap)
    } else {
        Judgement::Fails(gap)
    }
}

/// Enumerates every connected threshold graph of order `n` and checks that
/// `A_n` has the smallest `λ⁺` and the largest `λ⁻`.
pub fn verify_conjecture(n: usize, cfg: &VerifyConfig) -> Result<ConjectureReport, VerifyError> {
    if n < 3 {
        return Err(VerifyError::InvalidOrder {
            n,
            requirement: "n >= 3",
        });
    }
    if n > cfg.cap {
        return Err(SequenceError::CapExceeded { n, cap: cfg.cap }.into());
    }
    let total = 1u64 << (n - 2);
    let rows = run_indexed(total, cfg.jobs, |i| {
        graph_row(connected_by_index(n, i), &cfg.bisection)
    })?;

    let anti = anti_regular(n)?;
    let anti_row = rows
        .iter()
        .find(|r| r.seq == anti)
        .expect("anti-regular graph is connected")
        .clone();
    let anti_plus = anti_row
        .lambda_plus
        .expect("connected graphs of order >= 2 have λ⁺");
    let anti_minus = anti_row.lambda_minus;

    let slack = cfg.slack();
    let mut verdict = true;
    let mut warnings = Vec::new();
    let mut margin_plus: Option<f64> = None;
    let mut margin_minus: Option<f64> = None;
    let mut winner_plus: Option<Extremal> = None;
    let mut winner_minus: Option<Extremal> = None;
    let mut excluded_minus = 0;

    for row in &rows {
        if let Some(p) = row.lambda_plus {
            if winner_plus.as_ref().map_or(true, |w| p < w.value) {
                winner_plus = Some(Extremal {
                    seq: row.seq.clone(),
                    value: p,
                });
            }
        }
        match row.lambda_minus {
            Some(m) => {
                if winner_minus.as_ref().map_or(true, |w| m > w.value) {
                    winner_minus = Some(Extremal {
                        seq: row.seq.clone(),
                        value: m,
                    });
                }
            }
            None => excluded_minus += 1,
        }
        if row.seq == anti {
            continue;
        }

        if let Some(p) = row.lambda_plus {
            margin_plus = Some(margin_plus.map_or(p - anti_plus, |m| m.min(p - anti_plus)));
            match judge(anti_plus, p, slack) {
                Judgement::Holds => {}
                Judgement::Fails(gap) => {
                    verdict = false;
                    warnings.push(format!("FAIL lambda_plus {}: gap {gap:e}", row.seq));
                }
                Judgement::Tie(_) => {
                    let fine = cfg.refined();
                    let a = locate_lambda_plus(&anti, &fine)?.map(|l| l.value);
                    let g = locate_lambda_plus(&row.seq, &fine)?.map(|l| l.value);
                    if let (Some(a), Some(g)) = (a, g) {
                        match judge(a, g, 2.0 * fine.tol) {
                            Judgement::Holds => {}
                            Judgement::Tie(gap) => warnings.push(format!(
                                "WARN lambda_plus tie {} vs {anti}: gap {gap:e} at tol {:e}",
                                row.seq, fine.tol
                            )),
                            Judgement::Fails(gap) => {
                                verdict = false;
                                warnings.push(format!("FAIL lambda_plus {}: gap {gap:e}", row.seq));
                            }
                        }
                    }
                }
            }
        }

        if let Some(m) = row.lambda_minus {
            let Some(am) = anti_minus else {
                verdict = false;
                warnings.push(format!("FAIL lambda_minus {}: A_n has none", row.seq));
                continue;
            };
            margin_minus = Some(margin_minus.map_or(am - m, |x| x.min(am - m)));
            match judge(m, am, slack) {
                Judgement::Holds => {}
                Judgement::Fails(gap) => {
                    verdict = false;
                    warnings.push(format!("FAIL lambda_minus {}: gap {gap:e}", row.seq));
                }
                Judgement::Tie(_) => {
                    let fine = cfg.refined();
                    let a = locate_lambda_minus(&anti, &fine)?.map(|l| l.value);
                    let g = locate_lambda_minus(&row.seq, &fine)?.map(|l| l.value);
                    if let (Some(a), Some(g)) = (a, g) {
                        match judge(g, a, 2.0 * fine.tol) {
                            Judgement::Holds => {}
                            Judgement::Tie(gap) => warnings.push(format!(
                                "WARN lambda_minus tie {} vs {anti}: gap {gap:e} at tol {:e}",
                                row.seq, fine.tol
                            )),
                            Judgement::Fails(gap) => {
                                verdict = false;
                                warnings
                                    .push(format!("FAIL lambda_minus {}: gap {gap:e}", row.seq));
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(ConjectureReport {
        n,
        total,
        winner_plus,
        winner_minus,
        anti_regular: PlusMinus {
            plus: Some(anti_plus),
            minus: anti_minus,
        },
        margins: PlusMinus {
            plus: margin_plus,
            minus: margin_minus,
        },
        excluded_minus,
        warnings,
        verdict,
        rows,
    })
}

/// One critical graph compared with `A_n` in the direction that matters for
/// its parity: `λ⁻` for even `n`, `λ⁺` for odd `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRow {
    pub seq: CreationSequence,
    #[serde(serialize_with = "sig::opt")]
    pub lambda_plus: Option<f64>,
    #[serde(serialize_with = "sig::opt")]
    pub lambda_minus: Option<f64>,
    /// `λ⁻(A_n) - λ⁻(G)` (even) or `λ⁺(G) - λ⁺(A_n)` (odd).
    #[serde(serialize_with = "sig::opt")]
    pub margin: Option<f64>,
    pub dominated: bool,
}

pub fn verify_critical_cases(
    n: usize,
    cfg: &VerifyConfig,
) -> Result<Vec<CriticalRow>, VerifyError> {
    let critical = enumerate_critical(n)?;
    let anti = anti_regular(n)?;
    let (anti_plus, anti_minus) = extremes(&anti, &cfg.bisection)?;
    let slack = cfg.slack();
    critical
        .into_iter()
        .map(|seq| {
            let (lambda_plus, lambda_minus) = extremes(&seq, &cfg.bisection)?;
            let margin = if n % 2 == 0 {
                match (anti_minus, lambda_minus) {
                    (Some(a), Some(g)) => Some(a - g),
                    _ => None,
                }
            } else {
                match (anti_plus, lambda_plus) {
                    (Some(a), Some(g)) => Some(g - a),
                    _ => None,
                }
            };
            // a critical graph without λ⁻ cannot beat A_n on λ⁻
            let dominated = margin.map_or(lambda_minus.is_none() || n % 2 == 1, |m| m >= -slack);
            Ok(CriticalRow {
                seq,
                lambda_plus,
                lambda_minus,
                margin,
                dominated,
            })
        })
        .collect()
}

/// A strict inequality `value(lesser) < value(greater)` that was checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub lesser: CreationSequence,
    pub greater: CreationSequence,
    #[serde(serialize_with = "sig::f64")]
    pub lesser_value: f64,
    #[serde(serialize_with = "sig::f64")]
    pub greater_value: f64,
    #[serde(serialize_with = "sig::f64")]
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub n: usize,
    /// `"lambda_minus"` for even orders, `"lambda_plus"` for odd ones.
    pub quantity: &'static str,
    /// Widened-run family in positional order `t_1, s_2, t_2, …, t_k`.
    pub family: Vec<GraphRow>,
    /// Position in `family` of the valley (even) or peak (odd).
    pub turning_point: usize,
    pub comparisons: Vec<Comparison>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.comparisons.iter().all(|c| c.holds)
    }
}

fn compare(
    label: impl Into<String>,
    lesser: (&CreationSequence, f64),
    greater: (&CreationSequence, f64),
    tol: f64,
) -> Comparison {
    let margin = greater.1 - lesser.1;
    Comparison {
        label: label.into(),
        lesser: lesser.0.clone(),
        greater: greater.0.clone(),
        lesser_value: lesser.1,
        greater_value: greater.1,
        margin,
        holds: margin > tol,
    }
}

fn position_name(pos: usize) -> String {
    if pos % 2 == 1 {
        format!("t{}", pos / 2 + 1)
    } else {
        format!("s{}", pos / 2 + 1)
    }
}

/// Adjacent comparisons along a family whose values fall to a valley and
/// rise again, or rise to a peak and fall again when `peak` is set.
fn unimodal_chain(
    family: &[(CreationSequence, f64)],
    peak: bool,
    tol: f64,
) -> (usize, Vec<Comparison>) {
    let turning = family
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let (x, y) = if peak {
                (b.1 .1, a.1 .1)
            } else {
                (a.1 .1, b.1 .1)
            };
            x.total_cmp(&y)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut out = Vec::new();
    for i in 0..family.len().saturating_sub(1) {
        let (left, right) = (&family[i], &family[i + 1]);
        let name = format!("{} vs {}", position_name(i + 1), position_name(i + 2));
        // before the turning point values move toward it, after it they move away
        let left_is_lesser = (i < turning) == peak;
        let c = if left_is_lesser {
            compare(name, (&left.0, left.1), (&right.0, right.1), tol)
        } else {
            compare(name, (&right.0, right.1), (&left.0, left.1), tol)
        };
        out.push(c);
    }
    (turning, out)
}

fn evaluate_family(
    base: &[usize],
    cfg: &BisectionConfig,
    plus: bool,
) -> Result<(Vec<GraphRow>, Vec<(CreationSequence, f64)>), VerifyError> {
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for seq in widened_family(base) {
        let row = graph_row(seq, cfg)?;
        let value = if plus {
            row.lambda_plus
        } else {
            row.lambda_minus
        };
        let value = value.ok_or(VerifyError::InvalidOrder {
            n: row.seq.len(),
            requirement: "every family member to have the compared eigenvalue",
        })?;
        values.push((row.seq.clone(), value));
        rows.push(row);
    }
    Ok((rows, values))
}

/// Even orders: `λ⁻` along the `s_1 = 2` critical family falls strictly to
/// a single valley and rises strictly after it, and
/// `λ⁻(G_1) < λ⁻(G_2) < λ⁻(A_n)`, `λ⁻(G_3) < λ⁻(A_n)` with
/// `G_1 = 0²1²(01)…`, `G_2 = 0³1(01)…`, `G_3 = 0²1(01)…01²`.
pub fn verify_theorem5_chain(n: usize, cfg: &VerifyConfig) -> Result<ChainReport, VerifyError> {
    if n < 8 || n % 2 != 0 {
        return Err(VerifyError::InvalidOrder {
            n,
            requirement: "even n >= 8",
        });
    }
    let tol = cfg.tol();
    let k = (n - 2) / 2;
    let mut base = vec![1usize; 2 * k];
    base[0] = 2;
    let (family, values) = evaluate_family(&base, &cfg.bisection, false)?;
    let (turning_point, mut comparisons) = unimodal_chain(&values, false, tol);

    let anti = anti_regular(n)?;
    let anti_minus = locate_lambda_minus(&anti, &cfg.bisection)?
        .ok_or(VerifyError::MissingAntiRegularValue(n))?
        .value;
    let (g1, v1) = values.first().cloned().expect("family is non-empty");
    let (g3, v3) = values.last().cloned().expect("family is non-empty");
    base[0] = 3;
    let g2 = RunLengthForm::from_runs(&base)?.expand();
    let v2 = locate_lambda_minus(&g2, &cfg.bisection)?
        .ok_or(VerifyError::MissingAntiRegularValue(n))?
        .value;
    comparisons.push(compare("G1 vs G2", (&g1, v1), (&g2, v2), tol));
    comparisons.push(compare("G2 vs A_n", (&g2, v2), (&anti, anti_minus), tol));
    comparisons.push(compare("G3 vs A_n", (&g3, v3), (&anti, anti_minus), tol));

    Ok(ChainReport {
        n,
        quantity: "lambda_minus",
        family,
        turning_point,
        comparisons,
    })
}

/// Odd orders: `λ⁺` along the `s_1 = 1` critical family rises strictly to a
/// single peak from both ends, and `λ⁺(A_n)` is below both end members
/// `01²01…01` and `0101…01²`.
pub fn verify_corollary2_inequalities(
    n: usize,
    cfg: &VerifyConfig,
) -> Result<ChainReport, VerifyError> {
    if n < 5 || n % 2 != 1 {
        return Err(VerifyError::InvalidOrder {
            n,
            requirement: "odd n >= 5",
        });
    }
    let tol = cfg.tol();
    let k = (n - 1) / 2;
    let base = vec![1usize; 2 * k];
    let (family, values) = evaluate_family(&base, &cfg.bisection, true)?;
    let (turning_point, mut comparisons) = unimodal_chain(&values, true, tol);

    let anti = anti_regular(n)?;
    let anti_plus = locate_lambda_plus(&anti, &cfg.bisection)?
        .expect("connected graphs of order >= 2 have λ⁺")
        .value;
    let (first, vf) = values.first().cloned().expect("family is non-empty");
    let (last, vl) = values.last().cloned().expect("family is non-empty");
    comparisons.push(compare("A_n vs t1", (&anti, anti_plus), (&first, vf), tol));
    comparisons.push(compare("A_n vs tk", (&anti, anti_plus), (&last, vl), tol));

    Ok(ChainReport {
        n,
        quantity: "lambda_plus",
        family,
        turning_point,
        comparisons,
    })
}

/// Expected final-diagonal signs of `A_n` for shifts in the sampled window:
/// `++` then `-+` repeated (even), `-++` then `-+` repeated (odd).
pub fn sign_template(n: usize) -> String {
    let k = n / 2;
    let head = if n % 2 == 0 { "++" } else { "-++" };
    format!("{head}{}", "-+".repeat(k - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignPatternCheck {
    pub n: usize,
    /// The shift `y`; the probe is `-y`.
    #[serde(serialize_with = "sig::f64")]
    pub y: f64,
    pub expected: String,
    pub observed: String,
    pub matches: bool,
}

/// Samples shifts `y` with `-y` in `(λ⁻(A_n), -1)` (even `n`) or
/// `(λ⁻(A_n), 0)` minus a small neighbourhood of `-1` (odd `n`), and compares
/// the sign string of the final diagonal with [`sign_template`].
pub fn verify_sign_pattern(
    n: usize,
    samples: usize,
    seed: u64,
    cfg: &BisectionConfig,
) -> Result<Vec<SignPatternCheck>, VerifyError> {
    if n < 3 {
        return Err(SequenceError::OrderTooSmall { n, min: 3 }.into());
    }
    if samples == 0 {
        return Err(VerifyError::InvalidOrder {
            n,
            requirement: "at least one sample",
        });
    }
    let anti = anti_regular(n)?;
    let lambda_minus = locate_lambda_minus(&anti, cfg)?
        .ok_or(VerifyError::MissingAntiRegularValue(n))?
        .value;
    let guard = 10.0 * cfg.tol;
    let low = if n % 2 == 0 { 1.0 } else { 0.0 } + guard;
    let high = -lambda_minus - guard;
    let expected = sign_template(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let y: f64 = rng.gen_range(low..high);
        if n % 2 == 1 && (y - 1.0).abs() <= MINUS_ONE_EXCLUSION {
            continue;
        }
        let observed = diagonalize(&anti, Shift::new(y)?).sign_string();
        out.push(SignPatternCheck {
            n,
            y,
            matches: observed == expected,
            expected: expected.clone(),
            observed,
        });
    }
    Ok(out)
}
