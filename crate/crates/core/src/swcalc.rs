//! Laurent calculus for Seiberg-Witten functions: knot-surgery
//! multiplication, the blow-up formula, and basic-class extraction.
//!
//! Blow-up factors `(e^E + e^{-E})` are kept in factored form next to the
//! base terms. The full product over 24 exceptional classes has 7 * 2^24
//! terms; nothing here ever materializes it — descent filtering consumes
//! the factored shape directly and expansion is reserved for small cases.

use crate::lattice::{AmbientLattice, Class, LatticeError};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SwError {
    #[error("fiber class has square {0}, expected 0")]
    FiberNotNull(i64),
    #[error("`{0}` is not an exceptional generator (square -1, orthogonal)")]
    NotExceptional(String),
    #[error("exceptional generator `{0}` already appears in this function")]
    NotFresh(String),
    #[error("alexander polynomial is not symmetric: coeff({0}) != coeff({1})")]
    Asymmetric(i64, i64),
    #[error("twist parameter must be non-negative, got {0}")]
    NegativeTwist(i64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Symmetric Laurent polynomial in one variable with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderPolynomial {
    terms: BTreeMap<i64, i64>,
}

impl AlexanderPolynomial {
    pub fn one() -> Self {
        AlexanderPolynomial { terms: BTreeMap::from([(0, 1)]) }
    }

    /// Build from (exponent, coefficient) pairs; zero coefficients are
    /// dropped and the symmetry coeff(d) = coeff(-d) is required.
    pub fn new(terms: impl IntoIterator<Item = (i64, i64)>) -> Result<Self, SwError> {
        let mut map = BTreeMap::new();
        for (d, c) in terms {
            if c != 0 {
                *map.entry(d).or_insert(0) += c;
            }
        }
        map.retain(|_, c| *c != 0);
        for (&d, &c) in &map {
            if map.get(&-d).copied().unwrap_or(0) != c {
                return Err(SwError::Asymmetric(d, -d));
            }
        }
        Ok(AlexanderPolynomial { terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&d, &c)| (d, c))
    }

    /// Evaluation at t = 1; the knot normalization makes this +-1
    /// (checked by callers as a warning, not an error).
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.eval_at_one().abs() == 1
    }
}

impl fmt::Display for AlexanderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, &c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            }
            match (mag, d) {
                (m, 0) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (m, 1) => write!(f, "{m}t")?,
                (1, d) => write!(f, "t^{d}")?,
                (m, d) => write!(f, "{m}t^{d}")?,
            }
        }
        Ok(())
    }
}

/// Alexander polynomial of the n-twist knot: n t - (2n-1) + n t^{-1}.
/// n = 0 degenerates to the unknot's constant 1.
pub fn alexander_twist(n: i64) -> Result<AlexanderPolynomial, SwError> {
    if n < 0 {
        return Err(SwError::NegativeTwist(n));
    }
    AlexanderPolynomial::new([(1, n), (0, -(2 * n - 1)), (-1, n)])
}

/// Seiberg-Witten function as a finite Laurent series over the ambient
/// lattice, with blow-up factors held symbolically.
#[derive(Debug, Clone)]
pub struct SwFunction {
    pub lattice: Arc<AmbientLattice>,
    /// Exponent class -> nonzero coefficient.
    base: BTreeMap<Class, i64>,
    /// Generator indices of pending `(e^E + e^{-E})` factors.
    factors: Vec<usize>,
}

impl SwFunction {
    /// The constant function 1 (the K3 starting point: one basic class at
    /// zero with coefficient 1).
    pub fn k3(lattice: Arc<AmbientLattice>) -> Self {
        let zero = lattice.zero_class();
        SwFunction { lattice, base: BTreeMap::from([(zero, 1)]), factors: Vec::new() }
    }

    pub fn from_terms(
        lattice: Arc<AmbientLattice>,
        terms: impl IntoIterator<Item = (Class, i64)>,
    ) -> Self {
        let mut base = BTreeMap::new();
        for (cls, c) in terms {
            if c != 0 {
                *base.entry(cls).or_insert(0) += c;
            }
        }
        base.retain(|_, c| *c != 0);
        SwFunction { lattice, base, factors: Vec::new() }
    }

    pub fn base_terms(&self) -> impl Iterator<Item = (&Class, i64)> + '_ {
        self.base.iter().map(|(cls, &c)| (cls, c))
    }

    pub fn factor_indices(&self) -> &[usize] {
        &self.factors
    }

    pub fn is_factored(&self) -> bool {
        !self.factors.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Number of terms of the expanded function: |base| * 2^#factors.
    pub fn term_count(&self) -> u128 {
        (self.base.len() as u128) << self.factors.len()
    }

    /// Multiply by Delta(e^{2 fiber}): each monomial c t^d contributes
    /// c e^{2d fiber}.
    pub fn knot_surgery(
        &self,
        fiber: &Class,
        delta: &AlexanderPolynomial,
    ) -> Result<SwFunction, SwError> {
        let sq = self.lattice.square(fiber)?;
        if sq != 0 {
            return Err(SwError::FiberNotNull(sq));
        }
        let mut base: BTreeMap<Class, i64> = BTreeMap::new();
        for (cls, c) in self.base_terms() {
            for (d, a) in delta.terms() {
                let mut shifted = cls.clone();
                shifted.add_multiple(2 * d, fiber);
                *base.entry(shifted).or_insert(0) += c * a;
            }
        }
        base.retain(|_, c| *c != 0);
        Ok(SwFunction { lattice: self.lattice.clone(), base, factors: self.factors.clone() })
    }

    /// Multiply by `(e^E + e^{-E})` for a fresh exceptional generator.
    pub fn blow_up(&self, gen: usize) -> Result<SwFunction, SwError> {
        let name = || self.lattice.names()[gen].clone();
        if !self.lattice.is_exceptional(gen) {
            return Err(SwError::NotExceptional(name()));
        }
        if self.factors.contains(&gen)
            || self.base.keys().any(|cls| cls.coords[gen] != 0)
        {
            return Err(SwError::NotFresh(name()));
        }
        let mut factors = self.factors.clone();
        factors.push(gen);
        Ok(SwFunction { lattice: self.lattice.clone(), base: self.base.clone(), factors })
    }

    /// Fold every pending blow-up factor into explicit terms.
    pub fn expand(&self) -> SwFunction {
        let mut base = self.base.clone();
        for &gen in &self.factors {
            let mut next = BTreeMap::new();
            for (cls, c) in base {
                for sign in [1i64, -1] {
                    let mut shifted = cls.clone();
                    shifted.coords[gen] += sign;
                    next.insert(shifted, c);
                }
            }
            base = next;
        }
        SwFunction { lattice: self.lattice.clone(), base, factors: Vec::new() }
    }

    /// All terms of the expanded function in lexicographic coordinate order.
    pub fn basic_classes(&self) -> Vec<(Class, i64)> {
        let expanded = if self.factors.is_empty() { self.clone() } else { self.expand() };
        expanded.base.into_iter().collect()
    }

    pub fn coefficient(&self, cls: &Class) -> i64 {
        if self.factors.is_empty() {
            return self.base.get(cls).copied().unwrap_or(0);
        }
        // strip factor coordinates, which must be +-1 exactly
        let mut stripped = cls.clone();
        for &gen in &self.factors {
            if cls.coords[gen].abs() != 1 {
                return 0;
            }
            stripped.coords[gen] = 0;
        }
        self.base.get(&stripped).copied().unwrap_or(0)
    }

    /// Sum of all expanded coefficients (every exponential set to 1); each
    /// blow-up doubles this.
    pub fn eval_at_one(&self) -> i64 {
        let s: i64 = self.base.values().sum();
        s << self.factors.len()
    }

    /// Charge-conjugation symmetry coeff(-L) = coeff(L). The factored part
    /// is symmetric by construction, so checking the base suffices.
    pub fn is_symmetric(&self) -> bool {
        self.base
            .iter()
            .all(|(cls, &c)| self.base.get(&cls.neg()).copied() == Some(c))
    }

    pub fn with_factors(mut self, factors: Vec<usize>) -> Self {
        self.factors = factors;
        self
    }
}

impl fmt::Display for SwFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (cls, c) in self.base_terms() {
            let e = if cls.is_zero() {
                "1".to_string()
            } else {
                format!("e^{{{}}}", self.lattice.format_class(cls))
            };
            parts.push(match (c, cls.is_zero()) {
                (1, false) => e,
                (-1, false) => format!("-{e}"),
                (c, false) => format!("{c} {e}"),
                (c, true) => format!("{c}"),
            });
        }
        let mut joined = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                joined.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                joined.push_str(&format!(" - {rest}"));
            } else {
                joined.push_str(&format!(" + {p}"));
            }
        }
        write!(f, "({joined})")?;
        if !self.factors.is_empty() {
            let names: Vec<&str> =
                self.factors.iter().map(|&g| self.lattice.names()[g].as_str()).collect();
            write!(f, " * prod(e^E + e^-E : E in {{{}}})", names.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeBuilder;

    fn lattice() -> Arc<AmbientLattice> {
        let mut b = LatticeBuilder::new();
        b.generator("T").unwrap();
        b.generator("S").unwrap();
        b.pairing("T", "S", 1).unwrap();
        b.pairing("S", "S", -2).unwrap();
        for i in 1..=6 {
            b.exceptional(&format!("E{i}")).unwrap();
        }
        Arc::new(b.build())
    }

    fn t_class(l: &AmbientLattice, k: i64) -> Class {
        let mut c = l.zero_class();
        c.coords[l.index_of("T").unwrap()] = k;
        c
    }

    #[test]
    fn twist_polynomials() {
        assert_eq!(alexander_twist(1).unwrap().to_string(), "t - 1 + t^-1");
        assert_eq!(alexander_twist(0).unwrap().to_string(), "1");
        assert_eq!(alexander_twist(3).unwrap().to_string(), "3t - 5 + 3t^-1");
        assert!(alexander_twist(-1).is_err());
        for n in 0..6 {
            assert!(alexander_twist(n).unwrap().is_normalized());
        }
    }

    #[test]
    fn asymmetric_polynomial_rejected() {
        assert!(AlexanderPolynomial::new([(1, 2), (-1, 3)]).is_err());
        assert!(AlexanderPolynomial::new([(2, 1), (0, -1), (-2, 1)]).is_ok());
    }

    #[test]
    fn k3_is_one() {
        let l = lattice();
        let sw = SwFunction::k3(l.clone());
        let classes = sw.basic_classes();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0], (l.zero_class(), 1));
        assert_eq!(l.square(&classes[0].0).unwrap(), 0);
    }

    #[test]
    fn single_surgery_with_trefoil_twist() {
        let l = lattice();
        let sw = SwFunction::k3(l.clone())
            .knot_surgery(&t_class(&l, 1), &alexander_twist(1).unwrap())
            .unwrap();
        let classes = sw.basic_classes();
        assert_eq!(
            classes,
            vec![
                (t_class(&l, -2), 1),
                (t_class(&l, 0), -1),
                (t_class(&l, 2), 1),
            ]
        );
    }

    #[test]
    fn identity_polynomial_is_noop() {
        let l = lattice();
        let sw = SwFunction::k3(l.clone());
        let same = sw.knot_surgery(&t_class(&l, 1), &AlexanderPolynomial::one()).unwrap();
        assert_eq!(sw.basic_classes(), same.basic_classes());
    }

    #[test]
    fn fiber_square_must_vanish() {
        let l = lattice();
        let mut s = l.zero_class();
        s.coords[l.index_of("S").unwrap()] = 1;
        let sw = SwFunction::k3(l);
        assert!(matches!(
            sw.knot_surgery(&s, &AlexanderPolynomial::one()),
            Err(SwError::FiberNotNull(-2))
        ));
    }

    #[test]
    fn triple_surgery_coefficients() {
        // oracle: direct convolution of three trinomials, written out by hand
        let n = 2i64;
        let tri = [(1, n), (0, -(2 * n - 1)), (-1, n)];
        let mut expect: BTreeMap<i64, i64> = BTreeMap::new();
        for (d1, c1) in tri {
            for (d2, c2) in tri {
                for (d3, c3) in tri {
                    *expect.entry(d1 + d2 + d3).or_insert(0) += c1 * c2 * c3;
                }
            }
        }

        let l = lattice();
        let fiber = t_class(&l, 1);
        let delta = alexander_twist(n).unwrap();
        let mut sw = SwFunction::k3(l.clone());
        for _ in 0..3 {
            sw = sw.knot_surgery(&fiber, &delta).unwrap();
        }
        let classes = sw.basic_classes();
        assert_eq!(classes.len(), 7);
        for (cls, c) in classes {
            let t = cls.coords[l.index_of("T").unwrap()];
            assert_eq!(t % 2, 0);
            assert_eq!(c, expect[&(t / 2)]);
        }
        // top coefficient is n^3
        assert_eq!(sw.coefficient(&t_class(&l, 6)), n * n * n);
        assert!(sw.is_symmetric());
    }

    #[test]
    fn blow_up_factored_shape() {
        let l = lattice();
        let e1 = l.index_of("E1").unwrap();
        let sw = SwFunction::k3(l.clone()).blow_up(e1).unwrap();
        let classes = sw.basic_classes();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].0.coords[e1], -1);
        assert_eq!(classes[1].0.coords[e1], 1);
        assert_eq!(classes[0].1, 1);
        assert_eq!(classes[1].1, 1);

        // repeated blow-up of the same class is rejected
        assert!(matches!(sw.blow_up(e1), Err(SwError::NotFresh(_))));
        // non-exceptional generators are rejected
        let t = l.index_of("T").unwrap();
        assert!(matches!(sw.blow_up(t), Err(SwError::NotExceptional(_))));
    }

    #[test]
    fn term_count_and_eval_double_per_blow_up() {
        let l = lattice();
        let mut sw = SwFunction::k3(l.clone())
            .knot_surgery(&t_class(&l, 1), &alexander_twist(2).unwrap())
            .unwrap();
        let base_eval = sw.eval_at_one();
        for i in 1..=4 {
            sw = sw.blow_up(l.index_of(&format!("E{i}")).unwrap()).unwrap();
            assert_eq!(sw.eval_at_one(), base_eval << i);
        }
        assert_eq!(sw.term_count(), 3 << 4);
        // structural: all expanded exponents are distinct
        assert_eq!(sw.basic_classes().len(), 3 << 4);
        assert!(sw.is_symmetric());
    }

    #[test]
    fn seven_times_two_to_the_four() {
        let l = lattice();
        let fiber = t_class(&l, 1);
        let delta = alexander_twist(1).unwrap();
        let mut sw = SwFunction::k3(l.clone());
        for _ in 0..3 {
            sw = sw.knot_surgery(&fiber, &delta).unwrap();
        }
        for i in 1..=4 {
            sw = sw.blow_up(l.index_of(&format!("E{i}")).unwrap()).unwrap();
        }
        assert_eq!(sw.term_count(), 7 * 16);
        assert_eq!(sw.basic_classes().len(), 7 * 16);
    }

    #[test]
    fn surgery_order_commutes() {
        let l = lattice();
        let fiber = t_class(&l, 1);
        let d1 = alexander_twist(2).unwrap();
        let d2 = alexander_twist(3).unwrap();
        let sw = SwFunction::k3(l);
        let a = sw.knot_surgery(&fiber, &d1).unwrap().knot_surgery(&fiber, &d2).unwrap();
        let b = sw.knot_surgery(&fiber, &d2).unwrap().knot_surgery(&fiber, &d1).unwrap();
        assert_eq!(a.basic_classes(), b.basic_classes());
    }

    #[test]
    fn display_notation() {
        let l = lattice();
        let sw = SwFunction::k3(l.clone())
            .knot_surgery(&t_class(&l, 1), &alexander_twist(1).unwrap())
            .unwrap()
            .blow_up(l.index_of("E1").unwrap())
            .unwrap();
        assert_eq!(
            sw.to_string(),
            "(e^{-2T} - 1 + e^{2T}) * prod(e^E + e^-E : E in {E1})"
        );
    }
}
