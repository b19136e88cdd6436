//! Exact arithmetic for the surgery calculus: Hirzebruch-Jung continued
//! fractions of p^2/(pq-1), lens-space labels, and cokernels of integer
//! intersection forms.

use crate::matrix::{smith_normal_form, IntMat, MatrixError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("invalid pair (p, q) = ({p}, {q}): need p > q > 0 with gcd(p, q) = 1")]
    InvalidPair { p: u64, q: u64 },
    #[error("continued-fraction entry {value} at index {index} is below 2")]
    EntryBelowTwo { index: usize, value: i64 },
    #[error("empty entry list")]
    EmptyEntries,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Hirzebruch-Jung expansion of p^2/(pq-1) with every entry >= 2.
///
/// Entries are stored in display order: `entries[0]` is the leftmost
/// coefficient b_k of the plumbing diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub p: u64,
    pub q: u64,
    pub entries: Vec<i64>,
}

impl ContinuedFraction {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The value p^2/(pq-1) as an exact rational.
    pub fn value(&self) -> BigRational {
        let p = BigInt::from(self.p);
        let q = BigInt::from(self.q);
        BigRational::new(&p * &p, &p * &q - BigInt::one())
    }
}

fn check_pair(p: u64, q: u64) -> Result<(), ArithError> {
    if p > q && q > 0 && p.gcd(&q) == 1 {
        Ok(())
    } else {
        Err(ArithError::InvalidPair { p, q })
    }
}

/// Expand p^2/(pq-1) into the unique continued fraction with all entries >= 2.
pub fn cfrac_expand(p: u64, q: u64) -> Result<ContinuedFraction, ArithError> {
    check_pair(p, q)?;
    let mut a = BigInt::from(p) * BigInt::from(p);
    let mut b = BigInt::from(p) * BigInt::from(q) - BigInt::one();
    let mut entries = Vec::new();
    while !b.is_zero() {
        // ceil(a/b) with 0 < b < a throughout
        let c = (&a + &b - BigInt::one()).div_floor(&b);
        let next = &c * &b - &a;
        entries.push(i64::try_from(&c).expect("entry fits i64"));
        a = b;
        b = next;
    }
    Ok(ContinuedFraction { p, q, entries })
}

/// Evaluate `[b_k, ..., b_1] = b_k - 1/(b_{k-1} - 1/(...))` exactly.
pub fn cfrac_eval(entries: &[i64]) -> Result<BigRational, ArithError> {
    if entries.is_empty() {
        return Err(ArithError::EmptyEntries);
    }
    if let Some(index) = entries.iter().position(|&b| b < 2) {
        return Err(ArithError::EntryBelowTwo { index, value: entries[index] });
    }
    let mut acc = BigRational::from_integer(BigInt::from(*entries.last().unwrap()));
    for &b in entries.iter().rev().skip(1) {
        acc = BigRational::from_integer(BigInt::from(b)) - acc.recip();
    }
    Ok(acc)
}

/// Lens space L(order, twist) with the twist stored as the least non-negative
/// residue mod order. Display uses the balanced representative, matching the
/// conventional negative form for L(p^2, 1-pq).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LensLabel {
    pub order: u64,
    pub twist: u64,
}

impl LensLabel {
    pub fn new(order: u64, twist: i64) -> Self {
        let t = twist.rem_euclid(order as i64) as u64;
        LensLabel { order, twist: t }
    }

    /// Representative of smallest absolute value, negative half preferred
    /// for twists past order/2.
    pub fn balanced_twist(&self) -> i64 {
        if 2 * self.twist > self.order {
            self.twist as i64 - self.order as i64
        } else {
            self.twist as i64
        }
    }
}

impl fmt::Display for LensLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.order, self.balanced_twist())
    }
}

/// Boundary label L(p^2, 1-pq) of the linear plumbing for (p, q).
pub fn lens_label(p: u64, q: u64) -> Result<LensLabel, ArithError> {
    check_pair(p, q)?;
    let order = p * p;
    let twist = 1i64 - (p as i64) * (q as i64);
    let label = LensLabel::new(order, twist);
    debug_assert_eq!(BigInt::from(order).gcd(&BigInt::from(label.twist)), BigInt::one());
    Ok(label)
}

/// Cokernel of a nondegenerate symmetric integer matrix, with a projection of
/// integer vectors onto the cyclic factors.
#[derive(Debug, Clone)]
pub struct Cokernel {
    /// All Smith invariant factors (positive, divisibility-ordered).
    diag: Vec<BigInt>,
    left: IntMat,
    nontrivial: Vec<usize>,
}

impl Cokernel {
    /// Invariant factors > 1, i.e. the orders of the cyclic summands.
    pub fn factors(&self) -> Vec<BigInt> {
        self.nontrivial.iter().map(|&i| self.diag[i].clone()).collect()
    }

    /// Residues of `v` on each nontrivial cyclic factor (least non-negative).
    pub fn project(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        let uv = self.left.mul_vec(v)?;
        Ok(self
            .nontrivial
            .iter()
            .map(|&i| uv[i].mod_floor(&self.diag[i]))
            .collect())
    }
}

impl fmt::Display for Cokernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nontrivial.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.factors().iter().map(|d| format!("Z_{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith cokernel of a symmetric nondegenerate matrix.
pub fn smith_cokernel(m: &IntMat) -> Result<Cokernel, ArithError> {
    m.symmetry_check()?;
    if m.det()?.is_zero() {
        return Err(ArithError::Matrix(MatrixError::Singular));
    }
    let smith = smith_normal_form(m)?;
    let nontrivial = smith
        .diag
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(i, _)| i)
        .collect();
    Ok(Cokernel { diag: smith.diag, left: smith.left, nontrivial })
}
