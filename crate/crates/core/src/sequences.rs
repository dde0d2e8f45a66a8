//! Creation sequences of threshold graphs.
//!
//! A threshold graph on `n` vertices is recorded as a binary string
//! `b_1 … b_n`: vertex `v_i` is added either isolated (`b_i = 0`) or
//! dominating every earlier vertex (`b_i = 1`). The first bit is always
//! normalized to `0`, and for `n ≥ 2` the graph is connected exactly when
//! the last bit is `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest order [`enumerate_connected`] accepts unless told otherwise.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("empty creation sequence")]
    EmptyInput,
    #[error("illegal character at position {0}")]
    IllegalCharacter(usize),
    #[error("malformed run-length token {0:?}")]
    MalformedToken(String),
    #[error("first bit must be 0")]
    FirstBitNotZero,
    #[error("sequence is not connected (last bit is 0)")]
    NotConnected,
    #[error("order {n} is below the minimum {min}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("order {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// Binary creation sequence `b_1 … b_n` with `b_1 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CreationSequence {
    bits: Vec<bool>,
}

impl CreationSequence {
    /// Builds a sequence from raw bits, enforcing the `b_1 = 0` convention.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self, SequenceError> {
        match bits.first() {
            None => Err(SequenceError::EmptyInput),
            Some(true) => Err(SequenceError::FirstBitNotZero),
            Some(false) => Ok(Self { bits }),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `b_i` with the 1-based indexing used throughout the algorithms.
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn is_connected(&self) -> bool {
        self.bits.len() == 1 || self.bits[self.bits.len() - 1]
    }

    pub fn require_connected(&self) -> Result<(), SequenceError> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(SequenceError::NotConnected)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of adjacent pairs `(b_i, b_{i+1}) = (first, second)`.
    pub fn count_pairs(&self, first: bool, second: bool) -> usize {
        self.bits
            .windows(2)
            .filter(|w| w[0] == first && w[1] == second)
            .count()
    }

    /// Copy with `b_l` (1-based) inverted.
    pub fn with_flipped(&self, l: usize) -> Result<Self, SequenceError> {
        let mut bits = self.bits.clone();
        bits[l - 1] = !bits[l - 1];
        Self::from_bits(bits)
    }

    /// Vertex degrees, computed from the insertion rule without building the
    /// matrix: `v_i` sees every later dominating vertex, and every earlier
    /// vertex if it is dominating itself.
    pub fn degrees(&self) -> Vec<usize> {
        let n = self.bits.len();
        let mut later_ones = vec![0usize; n + 1];
        for i in (0..n).rev() {
            later_ones[i] = later_ones[i + 1] + usize::from(self.bits[i]);
        }
        (0..n)
            .map(|i| later_ones[i + 1] + if self.bits[i] { i } else { 0 })
            .collect()
    }

    pub fn to_run_length(&self) -> Result<RunLengthForm, SequenceError> {
        to_run_length(self)
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        adjacency(self)
    }
}

impl fmt::Display for CreationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for CreationSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for CreationSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses a raw `0`/`1` string. Surrounding whitespace is ignored;
/// positions in errors are 1-based within the trimmed text.
pub fn parse(text: &str) -> Result<CreationSequence, SequenceError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(SequenceError::EmptyInput);
    }
    let bits = text
        .chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(SequenceError::IllegalCharacter(i + 1)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    CreationSequence::from_bits(bits)
}

/// Parses either a raw bit string or whitespace-separated run-length tokens
/// such as `"0^2 1 0 1"`. A token is a bit string optionally followed by
/// `^k`, meaning the bit string repeated `k` times.
pub fn parse_flexible(text: &str) -> Result<CreationSequence, SequenceError> {
    let text = text.trim();
    if !text.contains(|c: char| c == '^' || c.is_whitespace()) {
        return parse(text);
    }
    let mut expanded = String::new();
    for token in text.split_whitespace() {
        let (body, reps) = match token.split_once('^') {
            Some((body, exp)) => {
                let reps: usize = exp
                    .parse()
                    .map_err(|_| SequenceError::MalformedToken(token.to_string()))?;
                (body, reps)
            }
            None => (token, 1),
        };
        if body.is_empty() || reps == 0 || !body.chars().all(|c| c == '0' || c == '1') {
            return Err(SequenceError::MalformedToken(token.to_string()));
        }
        expanded.push_str(&body.repeat(reps));
    }
    parse(&expanded)
}

/// Alternating zero/one runs `0^{s_1} 1^{t_1} … 0^{s_k} 1^{t_k}` of a
/// connected sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunLengthForm {
    blocks: Vec<(usize, usize)>,
}

impl RunLengthForm {
    /// Blocks `(s_i, t_i)`; every entry must be at least 1.
    pub fn new(blocks: Vec<(usize, usize)>) -> Result<Self, SequenceError> {
        if blocks.is_empty() {
            return Err(SequenceError::EmptyInput);
        }
        if blocks.iter().any(|&(s, t)| s == 0 || t == 0) {
            return Err(SequenceError::MalformedToken(format!("{blocks:?}")));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn order(&self) -> usize {
        self.blocks.iter().map(|&(s, t)| s + t).sum()
    }

    /// Runs flattened as `[s_1, t_1, s_2, t_2, …]`.
    pub fn runs(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|&(s, t)| [s, t]).collect()
    }

    /// Inverse of [`RunLengthForm::runs`]; `runs` must have even length.
    pub fn from_runs(runs: &[usize]) -> Result<Self, SequenceError> {
        if runs.len() % 2 != 0 {
            return Err(SequenceError::MalformedToken(format!("{runs:?}")));
        }
        Self::new(runs.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn expand(&self) -> CreationSequence {
        let mut bits = Vec::with_capacity(self.order());
        for &(s, t) in &self.blocks {
            bits.extend(std::iter::repeat(false).take(s));
            bits.extend(std::iter::repeat(true).take(t));
        }
        CreationSequence { bits }
    }
}

impl fmt::Display for RunLengthForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (bit, len) in self.runs().into_iter().enumerate().map(|(i, r)| (i % 2, r)) {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if len == 1 {
                write!(f, "{bit}")?;
            } else {
                write!(f, "{bit}^{len}")?;
            }
        }
        Ok(())
    }
}

pub fn to_run_length(seq: &CreationSequence) -> Result<RunLengthForm, SequenceError> {
    if seq.len() < 2 {
        return Err(SequenceError::OrderTooSmall {
            n: seq.len(),
            min: 2,
        });
    }
    seq.require_connected()?;
    let mut blocks = Vec::new();
    let mut i = 0;
    let bits = seq.bits();
    while i < bits.len() {
        let zeros = bits[i..].iter().take_while(|&&b| !b).count();
        i += zeros;
        let ones = bits[i..].iter().take_while(|&&b| b).count();
        i += ones;
        blocks.push((zeros, ones));
    }
    Ok(RunLengthForm { blocks })
}

/// The anti-regular graph `A_n`: `(01)^{n/2}` for even `n`, `0(01)^{(n-1)/2}`
/// for odd `n`.
pub fn anti_regular(n: usize) -> Result<CreationSequence, SequenceError> {
    if n < 2 {
        return Err(SequenceError::OrderTooSmall { n, min: 2 });
    }
    let offset = n % 2;
    let bits = (0..n)
        .map(|i| i >= offset && (i - offset) % 2 == 1)
        .collect();
    Ok(CreationSequence { bits })
}

/// Dense symmetric 0/1 adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn edge_count(&self) -> usize {
        self.entries.iter().map(|&e| usize::from(e)).sum::<usize>() / 2
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| usize::from(self.get(i, j))).sum())
            .collect()
    }

    /// Row-major `f64` copy, for numerical routines.
    pub fn to_dense(&self) -> Vec<f64> {
        self.entries.iter().map(|&e| f64::from(e)).collect()
    }

    /// Matrix with vertices relabelled: new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> AdjacencyMatrix {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        AdjacencyMatrix { n, entries }
    }
}

pub fn adjacency(seq: &CreationSequence) -> AdjacencyMatrix {
    let n = seq.len();
    let mut entries = vec![0u8; n * n];
    for (i, &dominating) in seq.bits().iter().enumerate() {
        if dominating {
            for j in 0..i {
                entries[i * n + j] = 1;
                entries[j * n + i] = 1;
            }
        }
    }
    AdjacencyMatrix { n, entries }
}

/// All connected sequences of order `n` (`b_1 = 0`, `b_n = 1`) in
/// lexicographic order of the free middle bits.
pub fn enumerate_connected(n: usize) -> Result<ConnectedSequences, SequenceError> {
    enumerate_connected_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_connected_capped(
    n: usize,
    cap: usize,
) -> Result<ConnectedSequences, SequenceError> {
    if n < 2 {
        return Err(SequenceError::OrderTooSmall { n, min: 2 });
    }
    // the index is a u64, so the cap itself is bounded too
    if n > cap || n > 62 {
        return Err(SequenceError::CapExceeded { n, cap });
    }
    Ok(ConnectedSequences {
        n,
        next: 0,
        end: 1u64 << (n - 2),
    })
}

/// The `index`-th connected sequence of order `n` in enumeration order.
pub fn connected_by_index(n: usize, index: u64) -> CreationSequence {
    let free = n - 2;
    let mut bits = Vec::with_capacity(n);
    bits.push(false);
    for k in (0..free).rev() {
        bits.push(index >> k & 1 == 1);
    }
    bits.push(true);
    CreationSequence { bits }
}

/// Iterator returned by [`enumerate_connected`].
#[derive(Debug, Clone)]
pub struct ConnectedSequences {
    n: usize,
    next: u64,
    end: u64,
}

impl ConnectedSequences {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Total number of sequences, `2^{n-2}`.
    pub fn total(&self) -> u64 {
        self.end
    }
}

impl Iterator for ConnectedSequences {
    type Item = CreationSequence;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let seq = connected_by_index(self.n, self.next);
        self.next += 1;
        Some(seq)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ConnectedSequences {}

/// The `n - 2` critical sequences of order `n`, sorted lexicographically.
///
/// Even `n = 2k + 2`: `s_1 = 2` with exactly one other run of length 2,
/// plus the single sequence with `s_1 = 3`. Odd `n = 2k + 1`: `s_1 = 1` with
/// exactly one of `s_2 … s_k, t_1 … t_k` of length 2. All other runs are 1.
pub fn enumerate_critical(n: usize) -> Result<Vec<CreationSequence>, SequenceError> {
    if n < 5 {
        return Err(SequenceError::OrderTooSmall { n, min: 5 });
    }
    let mut out = if n % 2 == 0 {
        let k = (n - 2) / 2;
        let mut base = vec![1usize; 2 * k];
        base[0] = 2;
        let mut out = widened_family(&base);
        base[0] = 3;
        out.push(RunLengthForm::from_runs(&base)?.expand());
        out
    } else {
        let k = (n - 1) / 2;
        widened_family(&vec![1usize; 2 * k])
    };
    out.sort();
    Ok(out)
}

/// Sequences obtained from `base` runs by widening exactly one run after the
/// first to length 2, in positional order `t_1, s_2, t_2, …, t_k`.
pub fn widened_family(base: &[usize]) -> Vec<CreationSequence> {
    (1..base.len())
        .map(|pos| {
            let mut runs = base.to_vec();
            runs[pos] = 2;
            RunLengthForm::from_runs(&runs)
                .expect("runs are positive and paired")
                .expand()
        })
        .collect()
}
