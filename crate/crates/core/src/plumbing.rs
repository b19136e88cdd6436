//! Linear plumbings of disk bundles over the 2-sphere: intersection
//! matrices, definiteness, and boundary lens spaces.

use crate::arith::{cfrac_eval, cfrac_expand, lens_label, ArithError, LensLabel};
use crate::matrix::{IntMat, MatrixError};
use num_bigint::BigInt;
use num_traits::Signed;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlumbingError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("plumbing has no (p, q) source and its value {0} is not of the form p^2/(pq-1)")]
    NotBlowdownShape(String),
    #[error("empty plumbing")]
    Empty,
}

/// A chain of spheres with self-intersections `weights[i] <= -2`
/// (plus isolated -1 vertices when embedded in a larger chain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPlumbing {
    pub weights: Vec<i64>,
    /// Set when the chain was built from a coprime pair (p, q).
    pub source: Option<(u64, u64)>,
}

impl LinearPlumbing {
    /// The blow-down configuration for (p, q): weights are the negated
    /// continued-fraction entries, leftmost coefficient first.
    pub fn from_pq(p: u64, q: u64) -> Result<Self, PlumbingError> {
        let cf = cfrac_expand(p, q)?;
        Ok(LinearPlumbing {
            weights: cf.entries.iter().map(|&b| -b).collect(),
            source: Some((p, q)),
        })
    }

    pub fn from_weights(weights: Vec<i64>) -> Self {
        LinearPlumbing { weights, source: None }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Tridiagonal intersection form: diagonal `weights`, off-diagonal 1.
    pub fn intersection_matrix(&self) -> IntMat {
        let n = self.weights.len();
        let mut q = IntMat::zeros(n, n);
        for i in 0..n {
            q[(i, i)] = BigInt::from(self.weights[i]);
            if i + 1 < n {
                q[(i, i + 1)] = BigInt::from(1);
                q[(i + 1, i)] = BigInt::from(1);
            }
        }
        q
    }

    /// Boundary lens space. Uses the (p, q) source when present; otherwise
    /// the weights must evaluate to p^2/(pq-1) for some coprime p > q > 0.
    pub fn boundary(&self) -> Result<LensLabel, PlumbingError> {
        if let Some((p, q)) = self.source {
            return Ok(lens_label(p, q)?);
        }
        if self.weights.is_empty() {
            return Err(PlumbingError::Empty);
        }
        let entries: Vec<i64> = self.weights.iter().map(|&w| -w).collect();
        let value = cfrac_eval(&entries)?;
        let shape_err = || PlumbingError::NotBlowdownShape(value.to_string());
        let p = value.numer().sqrt();
        if &p * &p != *value.numer() {
            return Err(shape_err());
        }
        let p: u64 = p.try_into().map_err(|_| shape_err())?;
        let b: u64 = value.denom().try_into().map_err(|_| shape_err())?;
        if p == 0 || (b + 1) % p != 0 {
            return Err(shape_err());
        }
        let q = (b + 1) / p;
        let rebuilt = cfrac_expand(p, q).map_err(|_| shape_err())?;
        if rebuilt.entries != entries {
            return Err(shape_err());
        }
        Ok(lens_label(p, q)?)
    }

    /// Paper-style tuple string with runs compressed, e.g.
    /// `(-18, -19, -2^14, -3, -2^16)`.
    pub fn tuple_string(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.weights.len() {
            let w = self.weights[i];
            let mut run = 1;
            while i + run < self.weights.len() && self.weights[i + run] == w {
                run += 1;
            }
            if run >= 2 {
                parts.push(format!("{w}^{run}"));
            } else {
                parts.push(format!("{w}"));
            }
            i += run;
        }
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for LinearPlumbing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tuple_string())
    }
}

/// Sylvester check over exact integers: Q is negative definite iff every
/// leading principal minor of -Q is positive.
pub fn is_negative_definite(q: &IntMat) -> Result<bool, PlumbingError> {
    q.symmetry_check()?;
    let minors = q.neg().leading_principal_minors()?;
    Ok(minors.iter().all(|m| m.is_positive()))
}
