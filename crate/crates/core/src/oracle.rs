//! Brute-force reference spectra.
//!
//! A plain cyclic-by-row Jacobi eigensolver on the dense adjacency matrix.
//! It shares no code with the diagonalization sweep, so agreement between
//! the two is meaningful evidence rather than a tautology.

use serde::Serialize;
use thiserror::Error;

use crate::diagonalize::EigenCounts;
use crate::sequences::AdjacencyMatrix;
use crate::sig;

pub const MAX_ORDER: usize = 64;
pub const MAX_SWEEPS: usize = 100;
/// Relative off-diagonal Frobenius threshold for convergence.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Default half-width used when comparing eigenvalues with a probe.
pub const COMPARE_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    DidNotConverge(usize),
    #[error("order {0} exceeds the oracle limit of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("eigenvalue {eigenvalue} is too close to probe {x} for a trustworthy comparison")]
    AmbiguousProbe { x: f64, eigenvalue: f64 },
    #[error("comparison width must be positive, got {0}")]
    InvalidEps(f64),
}

/// Sorted eigenvalues with the off-diagonal norm left at termination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    #[serde(serialize_with = "sig::vec")]
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "sig::f64")]
    pub residual: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Smallest eigenvalue above `eps`.
    pub fn smallest_positive(&self, eps: f64) -> Option<f64> {
        self.eigenvalues.iter().copied().find(|&l| l > eps)
    }

    /// Largest eigenvalue below `-1 - eps`.
    pub fn largest_below_minus_one(&self, eps: f64) -> Option<f64> {
        self.eigenvalues
            .iter()
            .rev()
            .copied()
            .find(|&l| l < -1.0 - eps)
    }

    /// Number of eigenvalues within `eps` of `value`.
    pub fn multiplicity(&self, value: f64, eps: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| (l - value).abs() <= eps)
            .count()
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

/// Eigenvalues of a dense symmetric row-major matrix.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Result<Spectrum, OracleError> {
    assert_eq!(matrix.len(), n * n);
    if n > MAX_ORDER {
        return Err(OracleError::OrderTooLarge(n));
    }
    let mut a = matrix.to_vec();
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(OracleError::DidNotConverge(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        off = off_diagonal_norm(&a, n);
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum {
        eigenvalues,
        residual: off,
    })
}

pub fn eigenvalues(adj: &AdjacencyMatrix) -> Result<Spectrum, OracleError> {
    symmetric_eigenvalues(&adj.to_dense(), adj.order())
}

/// Counts eigenvalues above, within `eps` of, and below `x`.
pub fn count_relative(spec: &Spectrum, x: f64, eps: f64) -> Result<EigenCounts, OracleError> {
    if !(eps > 0.0) {
        return Err(OracleError::InvalidEps(eps));
    }
    let mut counts = EigenCounts::default();
    for &l in &spec.eigenvalues {
        let gap = (l - x).abs();
        if gap >= eps && gap < 2.0 * eps {
            return Err(OracleError::AmbiguousProbe { x, eigenvalue: l });
        }
        if gap <= eps {
            counts.equal += 1;
        } else if l > x {
            counts.greater += 1;
        } else {
            counts.less += 1;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::parse;

    fn spectrum(s: &str) -> Spectrum {
        eigenvalues(&parse(s).unwrap().adjacency()).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn small_spectra() {
        assert!(close(&spectrum("01").eigenvalues, &[-1.0, 1.0]));
        assert!(close(&spectrum("011").eigenvalues, &[-1.0, -1.0, 2.0]));
        let r3 = 3f64.sqrt();
        assert!(close(&spectrum("0001").eigenvalues, &[-r3, 0.0, 0.0, r3]));
        assert!(spectrum("0001").residual <= 1e-12 * 6f64.sqrt());
    }

    #[test]
    fn paw_characteristic_polynomial() {
        // x^4 - 4x^2 - 2x + 1
        for l in spectrum("0101").eigenvalues {
            let p = l.powi(4) - 4.0 * l * l - 2.0 * l + 1.0;
            assert!(p.abs() < 1e-12, "{l} -> {p}");
        }
    }

    #[test]
    fn counting() {
        let k3 = spectrum("011");
        assert_eq!(
            count_relative(&k3, 0.0, COMPARE_EPS).unwrap(),
            EigenCounts {
                greater: 1,
                equal: 0,
                less: 2
            }
        );
        assert_eq!(
            count_relative(&k3, -1.0, COMPARE_EPS).unwrap(),
            EigenCounts {
                greater: 1,
                equal: 2,
                less: 0
            }
        );
        let k2 = spectrum("01");
        assert_eq!(
            count_relative(&k2, 1.0, COMPARE_EPS).unwrap(),
            EigenCounts {
                greater: 0,
                equal: 1,
                less: 1
            }
        );
    }

    #[test]
    fn ambiguous_probe_and_bad_eps() {
        let k2 = spectrum("01");
        assert!(matches!(
            count_relative(&k2, 1.0 + 1.5e-8, COMPARE_EPS),
            Err(OracleError::AmbiguousProbe { .. })
        ));
        assert!(matches!(
            count_relative(&k2, 0.0, 0.0),
            Err(OracleError::InvalidEps(_))
        ));
    }

    #[test]
    fn order_guard() {
        let n = MAX_ORDER + 1;
        assert_eq!(
            symmetric_eigenvalues(&vec![0.0; n * n], n),
            Err(OracleError::OrderTooLarge(n))
        );
    }

    #[test]
    fn accessors() {
        let s = spectrum("0001");
        assert!((s.smallest_positive(1e-8).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!((s.largest_below_minus_one(1e-8).unwrap() + 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.multiplicity(0.0, 1e-8), 2);
        assert_eq!(spectrum("011").largest_below_minus_one(1e-8), None);
    }
}
