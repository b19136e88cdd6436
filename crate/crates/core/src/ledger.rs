//! Characteristic-number bookkeeping: Euler characteristic, signature,
//! b2 split, fundamental-group status, and the parity of the intersection
//! form, tracked through blow-ups, knot surgeries, and rational blow-downs.

use num_integer::Integer;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LedgerError {
    #[error("ledger identities violated: e={e}, sigma={sigma}, b2+={b2_plus}, b2-={b2_minus}")]
    Inconsistent { e: i64, sigma: i64, b2_plus: i64, b2_minus: i64 },
    #[error("rational blow-down of rank {k} exceeds b2- = {b2_minus}")]
    BlowdownTooLarge { k: i64, b2_minus: i64 },
    #[error("homeomorphism type not determined: {0}")]
    NotDetermined(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pi1Status {
    SimplyConnected,
    H1Zero,
    Unknown,
}

impl fmt::Display for Pi1Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi1Status::SimplyConnected => write!(f, "simply-connected"),
            Pi1Status::H1Zero => write!(f, "H1=0"),
            Pi1Status::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormParity {
    Odd,
    Even,
    Unknown,
}

impl fmt::Display for FormParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormParity::Odd => write!(f, "odd"),
            FormParity::Even => write!(f, "even"),
            FormParity::Unknown => write!(f, "unknown"),
        }
    }
}

/// Invariants of the (closed, b1 = 0) manifold under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantLedger {
    pub e: i64,
    pub sigma: i64,
    pub b2_plus: i64,
    pub b2_minus: i64,
    pub pi1: Pi1Status,
    pub parity: FormParity,
}

impl InvariantLedger {
    pub fn new(
        b2_plus: i64,
        b2_minus: i64,
        pi1: Pi1Status,
        parity: FormParity,
    ) -> Self {
        InvariantLedger {
            e: 2 + b2_plus + b2_minus,
            sigma: b2_plus - b2_minus,
            b2_plus,
            b2_minus,
            pi1,
            parity,
        }
    }

    /// The elliptic surface E(2): b2+ = 3, b2- = 19, simply connected,
    /// even intersection form.
    pub fn e2() -> Self {
        InvariantLedger::new(3, 19, Pi1Status::SimplyConnected, FormParity::Even)
    }

    /// e = 2 + b2+ + b2- and sigma = b2+ - b2-, with b1 = 0 throughout.
    pub fn check(&self) -> Result<(), LedgerError> {
        if self.e == 2 + self.b2_plus + self.b2_minus
            && self.sigma == self.b2_plus - self.b2_minus
            && self.b2_plus >= 0
            && self.b2_minus >= 0
        {
            Ok(())
        } else {
            Err(LedgerError::Inconsistent {
                e: self.e,
                sigma: self.sigma,
                b2_plus: self.b2_plus,
                b2_minus: self.b2_minus,
            })
        }
    }

    /// Connected sum with a reversed projective plane: e + 1, sigma - 1,
    /// and the form picks up an odd (-1) summand.
    pub fn blow_up(&self) -> Self {
        InvariantLedger {
            e: self.e + 1,
            sigma: self.sigma - 1,
            b2_plus: self.b2_plus,
            b2_minus: self.b2_minus + 1,
            pi1: self.pi1,
            parity: FormParity::Odd,
        }
    }

    /// Torus surgery preserves all characteristic numbers; the constructions
    /// modeled here keep the complement simply connected.
    pub fn knot_surgery(&self) -> Self {
        InvariantLedger { pi1: Pi1Status::SimplyConnected, ..*self }
    }

    /// Replace a rank-k negative definite configuration by a rational ball.
    ///
    /// The fundamental-group status degrades one step unless a certificate
    /// restores it: a simply connected total space keeps vanishing first
    /// homology through a single blow-down, while anything weaker becomes
    /// unknown. The coprimality certificate is applied by the caller.
    pub fn rational_blow_down(&self, k: usize) -> Result<Self, LedgerError> {
        let k = k as i64;
        if k > self.b2_minus {
            return Err(LedgerError::BlowdownTooLarge { k, b2_minus: self.b2_minus });
        }
        let pi1 = match self.pi1 {
            Pi1Status::SimplyConnected => Pi1Status::H1Zero,
            _ => Pi1Status::Unknown,
        };
        let next = InvariantLedger {
            e: self.e - k,
            sigma: self.sigma + k,
            b2_plus: self.b2_plus,
            b2_minus: self.b2_minus - k,
            pi1,
            parity: self.parity,
        };
        next.check()?;
        Ok(next)
    }

    pub fn with_pi1(&self, pi1: Pi1Status) -> Self {
        InvariantLedger { pi1, ..*self }
    }

    /// Homeomorphism type (a, b) = a CP^2 # b -CP^2 by rank, signature,
    /// and parity. Refuses instead of guessing when the hypotheses
    /// (simply connected, odd form, both ranks positive) are not certified.
    pub fn freedman_type(&self) -> Result<(i64, i64), LedgerError> {
        if self.pi1 != Pi1Status::SimplyConnected {
            return Err(LedgerError::NotDetermined(format!(
                "fundamental group status is {}",
                self.pi1
            )));
        }
        if self.parity != FormParity::Odd {
            return Err(LedgerError::NotDetermined(format!(
                "intersection form parity is {}",
                self.parity
            )));
        }
        if self.b2_plus < 1 || self.b2_minus < 1 {
            return Err(LedgerError::NotDetermined(
                "form is definite or trivial on one side".to_string(),
            ));
        }
        self.check()?;
        let b2 = self.b2_plus + self.b2_minus;
        let a = (b2 + self.sigma) / 2;
        debug_assert_eq!(a, self.b2_plus);
        Ok((a, self.b2_minus))
    }
}

impl fmt::Display for InvariantLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(e={}, sigma={}, b2+={}, b2-={}, pi1={}, parity={})",
            self.e, self.sigma, self.b2_plus, self.b2_minus, self.pi1, self.parity
        )
    }
}

/// The coprimality certificate: two rational-ball boundary groups of orders
/// p1^2 and p2^2, linked through a common transverse sphere, kill each
/// other's residual fundamental group exactly when gcd(p1^2, p2^2) = 1.
pub fn coprimality_certificate(p1: u64, p2: u64) -> bool {
    (p1 * p1).gcd(&(p2 * p2)) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e2_start() {
        let l = InvariantLedger::e2();
        assert_eq!((l.e, l.sigma), (24, -16));
        l.check().unwrap();
    }

    #[test]
    fn blow_ups_from_e2() {
        let mut l = InvariantLedger::e2();
        for _ in 0..24 {
            l = l.blow_up();
            l.check().unwrap();
        }
        assert_eq!((l.e, l.sigma, l.b2_plus, l.b2_minus), (48, -40, 3, 43));
        assert_eq!(l.parity, FormParity::Odd);

        let single = InvariantLedger::new(1, 1, Pi1Status::SimplyConnected, FormParity::Odd);
        assert_eq!((single.e, single.sigma), (4, 0));
        let b = single.blow_up();
        assert_eq!((b.e, b.sigma), (5, -1));
    }

    #[test]
    fn knot_surgery_is_numeric_identity() {
        for l in [
            InvariantLedger::e2(),
            InvariantLedger::new(3, 8, Pi1Status::SimplyConnected, FormParity::Odd),
            InvariantLedger::new(1, 1, Pi1Status::SimplyConnected, FormParity::Odd),
        ] {
            let after = l.knot_surgery();
            assert_eq!(
                (after.e, after.sigma, after.b2_plus, after.b2_minus),
                (l.e, l.sigma, l.b2_plus, l.b2_minus)
            );
            assert_eq!(after.pi1, Pi1Status::SimplyConnected);
        }
    }

    #[test]
    fn blow_down_chain_to_final_ledger() {
        let mut l = InvariantLedger::e2();
        for _ in 0..24 {
            l = l.blow_up();
        }
        let l = l.rational_blow_down(33).unwrap();
        assert_eq!((l.e, l.sigma), (15, -7));
        let l = l.rational_blow_down(2).unwrap();
        assert_eq!((l.e, l.sigma, l.b2_plus, l.b2_minus), (13, -5, 3, 8));
    }

    #[test]
    fn blow_down_26_blow_up_variant() {
        let mut l = InvariantLedger::e2();
        for _ in 0..26 {
            l = l.blow_up();
        }
        assert_eq!((l.e, l.sigma), (50, -42));
        let l = l
            .rational_blow_down(2)
            .unwrap()
            .rational_blow_down(2)
            .unwrap()
            .rational_blow_down(33)
            .unwrap();
        assert_eq!((l.e, l.sigma, l.b2_plus, l.b2_minus), (13, -5, 3, 8));
    }

    #[test]
    fn blow_down_22_blow_up_variant() {
        let mut l = InvariantLedger::e2();
        for _ in 0..22 {
            l = l.blow_up();
        }
        assert_eq!((l.e, l.sigma), (46, -38));
        let l = l.rational_blow_down(33).unwrap();
        assert_eq!((l.e, l.sigma, l.b2_plus, l.b2_minus), (13, -5, 3, 8));
        assert_eq!(l.pi1, Pi1Status::H1Zero);
    }

    #[test]
    fn blow_down_rank_guard() {
        let l = InvariantLedger::new(3, 8, Pi1Status::SimplyConnected, FormParity::Odd);
        assert!(matches!(
            l.rational_blow_down(9),
            Err(LedgerError::BlowdownTooLarge { k: 9, b2_minus: 8 })
        ));
    }

    #[test]
    fn pi1_degrades_stepwise() {
        let l = InvariantLedger::new(3, 43, Pi1Status::SimplyConnected, FormParity::Odd);
        let l = l.rational_blow_down(2).unwrap();
        assert_eq!(l.pi1, Pi1Status::H1Zero);
        let l = l.rational_blow_down(2).unwrap();
        assert_eq!(l.pi1, Pi1Status::Unknown);
    }

    #[test]
    fn coprimality() {
        assert!(coprimality_certificate(3, 305)); // gcd(9, 93025) = 1
        assert!(!coprimality_certificate(3, 3));
        assert!(coprimality_certificate(2, 5));
    }

    #[test]
    fn freedman_typing() {
        let z = InvariantLedger::new(3, 8, Pi1Status::SimplyConnected, FormParity::Odd);
        assert_eq!(z.freedman_type().unwrap(), (3, 8));

        // E(2)'s numbers forced odd give the (3, 19) rational surface type
        let e2_as_odd = InvariantLedger::new(3, 19, Pi1Status::SimplyConnected, FormParity::Odd);
        assert_eq!(e2_as_odd.freedman_type().unwrap(), (3, 19));

        let tiny = InvariantLedger::new(1, 1, Pi1Status::SimplyConnected, FormParity::Odd);
        assert_eq!(tiny.freedman_type().unwrap(), (1, 1));

        // refusals
        let even = InvariantLedger::e2();
        assert!(matches!(even.freedman_type(), Err(LedgerError::NotDetermined(_))));
        let h1 = InvariantLedger::new(3, 8, Pi1Status::H1Zero, FormParity::Odd);
        assert!(matches!(h1.freedman_type(), Err(LedgerError::NotDetermined(_))));
    }

    #[test]
    fn b2_plus_is_never_touched() {
        let mut l = InvariantLedger::e2();
        for _ in 0..24 {
            l = l.blow_up();
            assert_eq!(l.b2_plus, 3);
        }
        let l = l.knot_surgery().rational_blow_down(33).unwrap();
        assert_eq!(l.b2_plus, 3);
    }
}
