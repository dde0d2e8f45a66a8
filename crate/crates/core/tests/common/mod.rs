#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use threshspec::diagonalize::{alpha_trace, Shift};
use threshspec::oracle::{self, Spectrum};
use threshspec::sequences::{enumerate_connected, CreationSequence};

pub fn spectrum(seq: &CreationSequence) -> Spectrum {
    oracle::eigenvalues(&seq.adjacency()).expect("oracle converges")
}

/// Every connected sequence with `2 <= n <= max_n`.
pub fn connected_up_to(max_n: usize) -> Vec<CreationSequence> {
    (2..=max_n)
        .flat_map(|n| enumerate_connected(n).unwrap())
        .collect()
}

pub fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> CreationSequence {
    let mut bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    bits[0] = false;
    bits[n - 1] = true;
    CreationSequence::from_bits(bits).unwrap()
}

/// Oracle eigenvalues outside `{-1, 0}` that are separated from every
/// other eigenvalue by more than `spacing`.
pub fn simple_nontrivial(spec: &Spectrum, spacing: f64) -> Vec<f64> {
    let ev = &spec.eigenvalues;
    ev.iter()
        .enumerate()
        .filter(|&(i, &l)| {
            l.abs() > 1e-6
                && (l + 1.0).abs() > 1e-6
                && (i == 0 || l - ev[i - 1] > spacing)
                && (i + 1 == ev.len() || ev[i + 1] - l > spacing)
        })
        .map(|(_, &l)| l)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationItem {
    /// flip 1 -> 0, σ > 0, 1/σ < α_{l+1} < 2, α_{l+1} + σ - 2 > 0: α₁ decreases
    DropBetweenReciprocalAndTwo,
    /// flip 1 -> 0, σ > 0, α_{l+1} < 1/σ, α_{l+1} + σ - 2 < 0: α₁ decreases
    DropBelowReciprocal,
    /// flip 1 -> 0, σ < 0, α_{l+1} > 1/σ, α_{l+1} > 2 - σ: α₁ increases
    DropNegativeShift,
    /// flip 0 -> 1, σ > 0, α_{l+1} > 2, α_{l+1} > 1/σ: α₁ decreases
    AddAboveTwo,
    /// flip 0 -> 1, σ < 0, α_{l+1} < 1/σ: α₁ increases
    AddNegativeShift,
}

impl PerturbationItem {
    pub const ALL: [PerturbationItem; 5] = [
        PerturbationItem::DropBetweenReciprocalAndTwo,
        PerturbationItem::DropBelowReciprocal,
        PerturbationItem::DropNegativeShift,
        PerturbationItem::AddAboveTwo,
        PerturbationItem::AddNegativeShift,
    ];

    /// Bit `b_l` before the flip.
    pub fn original_bit(self) -> bool {
        matches!(
            self,
            PerturbationItem::DropBetweenReciprocalAndTwo
                | PerturbationItem::DropBelowReciprocal
                | PerturbationItem::DropNegativeShift
        )
    }

    pub fn positive_shift(self) -> bool {
        matches!(
            self,
            PerturbationItem::DropBetweenReciprocalAndTwo
                | PerturbationItem::DropBelowReciprocal
                | PerturbationItem::AddAboveTwo
        )
    }

    pub fn expects_increase(self) -> bool {
        matches!(
            self,
            PerturbationItem::DropNegativeShift | PerturbationItem::AddNegativeShift
        )
    }

    pub fn premise(self, sigma: f64, a: f64) -> bool {
        let inv = 1.0 / sigma;
        match self {
            PerturbationItem::DropBetweenReciprocalAndTwo => {
                sigma > 0.0 && inv < a && a < 2.0 && a + sigma - 2.0 > 0.0
            }
            PerturbationItem::DropBelowReciprocal => {
                sigma > 0.0 && a < inv && a + sigma - 2.0 < 0.0
            }
            PerturbationItem::DropNegativeShift => sigma < 0.0 && a > inv && a > 2.0 - sigma,
            PerturbationItem::AddAboveTwo => sigma > 0.0 && a > 2.0 && a > inv,
            PerturbationItem::AddNegativeShift => sigma < 0.0 && a < inv,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PerturbationInstance {
    pub seq: CreationSequence,
    pub l: usize,
    pub sigma: f64,
}

/// Searches for an instance satisfying the item's premise on `α_{l+1}`, with
/// both α-sequences on the generic path and, wherever `g` is applied below
/// the flip, both arguments on the same side of its pole (the region where
/// the composed transfer maps are increasing).
pub fn find_perturbation_instance(
    item: PerturbationItem,
    rng: &mut ChaCha8Rng,
) -> Option<PerturbationInstance> {
    for _ in 0..200_000 {
        let n = rng.gen_range(4..=12);
        let seq = random_connected(rng, n);
        let l = rng.gen_range(2..n);
        if seq.bit(l) != item.original_bit() {
            continue;
        }
        let magnitude = rng.gen_range(0.15..4.0);
        let sigma = if item.positive_shift() {
            magnitude
        } else {
            -magnitude
        };
        if (sigma - 1.0_f64).abs() < 0.05 {
            continue;
        }
        let shift = Shift::new(sigma).unwrap();
        let Ok(orig) = alpha_trace(&seq, shift) else {
            continue;
        };
        if !item.premise(sigma, orig[l]) {
            continue;
        }
        let flipped = seq.with_flipped(l).unwrap();
        let Ok(pert) = alpha_trace(&flipped, shift) else {
            continue;
        };
        let pole = 2.0 - sigma;
        let monotone =
            (2..=l).all(|i| !seq.bit(i - 1) || ((orig[i - 1] - pole) * (pert[i - 1] - pole) > 0.0));
        if monotone {
            return Some(PerturbationInstance { seq, l, sigma });
        }
    }
    None
}
