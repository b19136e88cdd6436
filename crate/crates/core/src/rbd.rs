//! Rational blow-down descent filter.
//!
//! A basic class of the ambient manifold descends through a configuration
//! when its restriction satisfies the blow-down criteria: restriction
//! square equal to minus the configuration's rank, boundary class a
//! multiple of p with the right parity. The per-vertex pairing pattern
//! L . u_i = +-(b_i - 2) is the sufficient condition actually used to
//! filter factored blow-up functions; every survivor is re-verified
//! against the full criteria.

use crate::arith::{smith_cokernel, ArithError, Cokernel};
use crate::lattice::{Class, EmbeddedConfiguration, LatticeError, PairMismatch, Validation};
use crate::matrix::MatrixError;
use crate::swcalc::SwFunction;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RbdError {
    #[error("embedding validation failed with {0} mismatched pairings")]
    InvalidEmbedding(usize),
    #[error("configuration `{0}` carries no (p, q) source")]
    MissingProvenance(String),
    #[error("cokernel of the intersection form is not a single cyclic group: {0}")]
    NonCyclicCokernel(String),
    #[error("class satisfies the pairing pattern but fails the descent criteria: {0}")]
    PatternWithoutTheorem(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Outcome of the per-vertex pairing test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// v_i = b_i - 2 for every vertex.
    Plus,
    /// v_i = -(b_i - 2) for every vertex.
    Minus,
    Fails,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Plus => write!(f, "+pattern"),
            Pattern::Minus => write!(f, "-pattern"),
            Pattern::Fails => write!(f, "fails"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentMode {
    PlusPattern,
    MinusPattern,
    /// Descent criteria hold without the uniform pairing pattern.
    TheoremOnly,
    Fails,
}

impl DescentMode {
    pub fn descends(&self) -> bool {
        !matches!(self, DescentMode::Fails)
    }
}

impl fmt::Display for DescentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescentMode::PlusPattern => write!(f, "plus-pattern"),
            DescentMode::MinusPattern => write!(f, "minus-pattern"),
            DescentMode::TheoremOnly => write!(f, "criteria-only"),
            DescentMode::Fails => write!(f, "fails"),
        }
    }
}

/// Full verdict for one candidate class against one configuration.
#[derive(Debug, Clone)]
pub struct DescentVerdict {
    pub mode: DescentMode,
    /// (L restricted to the configuration)^2, exact.
    pub restriction_square: BigRational,
    /// Residue of the boundary restriction in Z_{p^2}; not computed when
    /// the restriction square already rules the class out.
    pub boundary_residue: Option<BigInt>,
    /// m with boundary class = m p, when the residue is divisible by p.
    pub m_value: Option<BigInt>,
    pub m_parity_ok: bool,
    /// The mod-p and minimal-representative readings of m give the same
    /// parity answer; kept as an explicit cross-check.
    pub parity_interpretations_agree: bool,
}

/// Cached per-configuration data shared by repeated descent queries.
pub struct DescentContext<'a> {
    cfg: &'a EmbeddedConfiguration,
    p: u64,
    qmat: crate::matrix::IntMat,
    cokernel: Cokernel,
    targets: Vec<i64>,
}

impl<'a> DescentContext<'a> {
    pub fn new(cfg: &'a EmbeddedConfiguration) -> Result<Self, RbdError> {
        match cfg.validate_embedding()? {
            Validation::Ok => {}
            Validation::Mismatch(rows) => return Err(RbdError::InvalidEmbedding(rows.len())),
        }
        let (p, _) = cfg
            .plumbing
            .source
            .ok_or_else(|| RbdError::MissingProvenance(cfg.name.clone()))?;
        let qmat = cfg.intersection_matrix();
        let cokernel = smith_cokernel(&qmat)?;
        let factors = cokernel.factors();
        if factors.len() != 1 || factors[0] != BigInt::from(p) * BigInt::from(p) {
            let desc = factors
                .iter()
                .map(|d| format!("Z_{d}"))
                .collect::<Vec<_>>()
                .join(" + ");
            return Err(RbdError::NonCyclicCokernel(desc));
        }
        let targets = cfg.plumbing.weights.iter().map(|&w| -w - 2).collect();
        Ok(DescentContext { cfg, p, qmat, cokernel, targets })
    }

    pub fn config(&self) -> &EmbeddedConfiguration {
        self.cfg
    }

    /// Targets b_i - 2 in diagram order.
    pub fn targets(&self) -> &[i64] {
        &self.targets
    }

    /// Pairing pattern of a class against the cached configuration.
    pub fn pattern(&self, l: &Class) -> Result<Pattern, RbdError> {
        let v = self.cfg.pairing_vector(l)?;
        Ok(self.pattern_of(&v))
    }

    /// Full descent verdict using the cached cokernel and targets.
    pub fn verdict(&self, l: &Class) -> Result<DescentVerdict, RbdError> {
        let v = self.cfg.pairing_vector(l)?;
        self.verdict_of(&v)
    }

    fn pattern_of(&self, v: &[i64]) -> Pattern {
        if v.iter().zip(&self.targets).all(|(a, b)| a == b) {
            Pattern::Plus
        } else if v.iter().zip(&self.targets).all(|(a, &b)| *a == -b) {
            Pattern::Minus
        } else {
            Pattern::Fails
        }
    }

    /// Square of the orthogonal projection of a class with pairing vector
    /// `v` into the configuration's span: v^T Q^{-1} v.
    fn restriction_square_of(&self, v: &[i64]) -> Result<BigRational, RbdError> {
        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let x = self
            .qmat
            .solve_rational(&vb)?
            .expect("negative definite forms are invertible");
        let mut acc = BigRational::zero();
        for (vi, xi) in vb.iter().zip(&x) {
            acc += BigRational::from_integer(vi.clone()) * xi.clone();
        }
        Ok(acc)
    }

    fn verdict_of(&self, v: &[i64]) -> Result<DescentVerdict, RbdError> {
        let restriction_square = self.restriction_square_of(v)?;
        let k = BigInt::from(self.cfg.len());
        let square_ok = restriction_square == BigRational::from_integer(-k);
        let pattern = self.pattern_of(v);

        if !square_ok {
            if pattern != Pattern::Fails {
                return Err(RbdError::PatternWithoutTheorem(format!(
                    "{pattern} with restriction square {restriction_square}"
                )));
            }
            return Ok(DescentVerdict {
                mode: DescentMode::Fails,
                restriction_square,
                boundary_residue: None,
                m_value: None,
                m_parity_ok: false,
                parity_interpretations_agree: true,
            });
        }

        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let residue = self.cokernel.project(&vb)?.pop().expect("single factor");
        let p = BigInt::from(self.p);
        let divisible = (&residue % &p).is_zero();

        let (m_value, m_parity_ok, agree) = if divisible {
            let m0 = &residue / &p; // in [0, p)
            // m is determined mod p. Reading one: any representative may be
            // chosen, so odd p satisfies every parity; even p pins it.
            let ok_mod_p = if self.p % 2 == 1 { true } else { m0.is_odd() };
            // Reading two: minimal-magnitude representatives m0 and m0 - p.
            let target = BigInt::from((self.p as i64 - 1).rem_euclid(2));
            let alt = &m0 - &p;
            let ok_minimal = m0.mod_floor(&BigInt::from(2)) == target
                || alt.mod_floor(&BigInt::from(2)) == target;
            (Some(m0), ok_mod_p, ok_mod_p == ok_minimal)
        } else {
            (None, false, true)
        };

        let theorem_ok = divisible && m_parity_ok;
        let mode = match (pattern, theorem_ok) {
            (Pattern::Plus, true) => DescentMode::PlusPattern,
            (Pattern::Minus, true) => DescentMode::MinusPattern,
            (Pattern::Fails, true) => DescentMode::TheoremOnly,
            (Pattern::Fails, false) => DescentMode::Fails,
            (pat, false) => {
                return Err(RbdError::PatternWithoutTheorem(format!(
                    "{pat} with residue {residue}"
                )))
            }
        };
        Ok(DescentVerdict {
            mode,
            restriction_square,
            boundary_residue: Some(residue),
            m_value,
            m_parity_ok,
            parity_interpretations_agree: agree,
        })
    }
}

/// (L restricted to the configuration)^2 as an exact rational.
pub fn restriction_square(
    l: &Class,
    cfg: &EmbeddedConfiguration,
) -> Result<BigRational, RbdError> {
    match cfg.validate_embedding()? {
        Validation::Ok => {}
        Validation::Mismatch(rows) => return Err(RbdError::InvalidEmbedding(rows.len())),
    }
    let v = cfg.pairing_vector(l)?;
    // context-free path: no (p, q) needed for the square alone
    let q = cfg.intersection_matrix();
    let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    let x = q.solve_rational(&vb)?.ok_or(MatrixError::Singular)?;
    let mut acc = BigRational::zero();
    for (vi, xi) in vb.iter().zip(&x) {
        acc += BigRational::from_integer(vi.clone()) * xi.clone();
    }
    Ok(acc)
}

/// Uniform pairing test L . u_i = +-(b_i - 2).
pub fn corollary_condition(
    l: &Class,
    cfg: &EmbeddedConfiguration,
) -> Result<Pattern, RbdError> {
    match cfg.validate_embedding()? {
        Validation::Ok => {}
        Validation::Mismatch(rows) => return Err(RbdError::InvalidEmbedding(rows.len())),
    }
    let v = cfg.pairing_vector(l)?;
    let targets: Vec<i64> = cfg.plumbing.weights.iter().map(|&w| -w - 2).collect();
    Ok(if v == targets {
        Pattern::Plus
    } else if v.iter().zip(&targets).all(|(a, &b)| *a == -b) {
        Pattern::Minus
    } else {
        Pattern::Fails
    })
}

/// Full descent criteria for a single class.
pub fn theorem_condition(
    l: &Class,
    cfg: &EmbeddedConfiguration,
) -> Result<DescentVerdict, RbdError> {
    let ctx = DescentContext::new(cfg)?;
    let v = cfg.pairing_vector(l)?;
    ctx.verdict_of(&v)
}

/// One row of the descent table: what happened to a candidate family.
#[derive(Debug, Clone)]
pub struct DescentRow {
    /// Base class of the family (exceptional signs not yet chosen).
    pub base: Class,
    pub branch: Pattern,
    pub outcome: DescentOutcome,
}

#[derive(Debug, Clone)]
pub enum DescentOutcome {
    /// Signs of the constrained exceptional generators admit solutions.
    Survives { solutions: usize, free_factors: usize },
    Infeasible,
    /// Non-factored path: the class was checked directly.
    Direct(DescentMode),
}

/// Filter a Seiberg-Witten function through a configuration.
///
/// Factored functions are filtered by solving for the admissible signs of
/// each constrained exceptional generator; unconstrained generators stay
/// factored in the result. Expanded functions are filtered term by term.
/// Surviving coefficients are copied unchanged.
pub fn descend(
    sw: &SwFunction,
    cfg: &EmbeddedConfiguration,
) -> Result<(SwFunction, Vec<DescentRow>), RbdError> {
    let ctx = DescentContext::new(cfg)?;
    if !sw.is_factored() {
        return descend_expanded(sw, &ctx);
    }
    descend_factored(sw, &ctx)
}

fn descend_expanded(
    sw: &SwFunction,
    ctx: &DescentContext,
) -> Result<(SwFunction, Vec<DescentRow>), RbdError> {
    let mut kept: BTreeMap<Class, i64> = BTreeMap::new();
    let mut rows = Vec::new();
    for (cls, coeff) in sw.base_terms() {
        let v = ctx.cfg.pairing_vector(cls)?;
        let verdict = ctx.verdict_of(&v)?;
        if verdict.mode.descends() {
            *kept.entry(cls.clone()).or_insert(0) += coeff;
        }
        rows.push(DescentRow {
            base: cls.clone(),
            branch: match verdict.mode {
                DescentMode::MinusPattern => Pattern::Minus,
                DescentMode::PlusPattern => Pattern::Plus,
                _ => Pattern::Fails,
            },
            outcome: DescentOutcome::Direct(verdict.mode),
        });
    }
    kept.retain(|_, c| *c != 0);
    Ok((SwFunction::from_terms(sw.lattice.clone(), kept), rows))
}

fn descend_factored(
    sw: &SwFunction,
    ctx: &DescentContext,
) -> Result<(SwFunction, Vec<DescentRow>), RbdError> {
    let lattice = &sw.lattice;
    // Pairing weights gram * u_i: pair(X, u_i) is then a dot product, and
    // an exceptional generator's coefficient in constraint i is one lookup.
    let sphere_weights: Vec<Vec<i64>> = ctx
        .cfg
        .spheres
        .iter()
        .map(|u| lattice.gram_times(u))
        .collect::<Result<_, _>>()?;

    // Generators that meet some sphere are constrained; the rest stay free.
    let mut vars: Vec<usize> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    for &g in sw.factor_indices() {
        if sphere_weights.iter().any(|w| w[g] != 0) {
            vars.push(g);
        } else {
            free.push(g);
        }
    }

    let symmetric_targets = ctx.targets.iter().all(|&t| t == 0);
    let mut kept: BTreeMap<Class, i64> = BTreeMap::new();
    let mut rows = Vec::new();

    for (base, coeff) in sw.base_terms() {
        for branch in [Pattern::Plus, Pattern::Minus] {
            if branch == Pattern::Minus && symmetric_targets {
                break; // both branches coincide when every target is zero
            }
            let mut constraints = Vec::with_capacity(ctx.cfg.len());
            for (i, w) in sphere_weights.iter().enumerate() {
                let base_part: i64 = base
                    .coords
                    .iter()
                    .zip(w)
                    .map(|(&a, &b)| a * b)
                    .sum();
                let sign = if branch == Pattern::Plus { 1 } else { -1 };
                let target = sign * ctx.targets[i] - base_part;
                let coeffs: Vec<(usize, i64)> = vars
                    .iter()
                    .enumerate()
                    .filter(|(_, &g)| w[g] != 0)
                    .map(|(pos, &g)| (pos, w[g]))
                    .collect();
                constraints.push(SignConstraint { coeffs, target });
            }
            let solutions = solve_signs(vars.len(), &constraints);
            let n_solutions = solutions.len();
            for signs in solutions {
                let mut cls = base.clone();
                for (pos, &g) in vars.iter().enumerate() {
                    cls.coords[g] += signs[pos] as i64;
                }
                // Every pattern survivor must also satisfy the full
                // criteria; free generators pair to zero with all spheres,
                // so the representative check covers each completion.
                let v = ctx.cfg.pairing_vector(&cls)?;
                let verdict = ctx.verdict_of(&v)?;
                debug_assert!(verdict.mode.descends());
                *kept.entry(cls).or_insert(0) += coeff;
            }
            rows.push(DescentRow {
                base: base.clone(),
                branch,
                outcome: if n_solutions > 0 {
                    DescentOutcome::Survives { solutions: n_solutions, free_factors: free.len() }
                } else {
                    DescentOutcome::Infeasible
                },
            });
        }
    }
    kept.retain(|_, c| *c != 0);
    let out = SwFunction::from_terms(lattice.clone(), kept).with_factors(free.clone());
    Ok((out, rows))
}

struct SignConstraint {
    /// (variable position, pairing coefficient), coefficient nonzero.
    coeffs: Vec<(usize, i64)>,
    target: i64,
}

/// All sign vectors in {-1, +1}^n satisfying every linear constraint
/// exactly. Propagation (bound, parity, single-variable, and forced-extremal
/// rules) runs to fixpoint before branching, so pipeline-shaped systems are
/// solved without search. Deterministic: branches try +1 before -1 on the
/// lowest-numbered variable of the tightest constraint.
fn solve_signs(n_vars: usize, constraints: &[SignConstraint]) -> Vec<Vec<i8>> {
    let mut solutions = Vec::new();
    search(constraints, vec![0i8; n_vars], &mut solutions);
    solutions
}

fn search(constraints: &[SignConstraint], mut assign: Vec<i8>, out: &mut Vec<Vec<i8>>) {
    match propagate(constraints, &mut assign) {
        Propagation::Contradiction => {}
        Propagation::Solved => out.push(assign),
        Propagation::Open(var) => {
            for sign in [1i8, -1] {
                let mut trial = assign.clone();
                trial[var] = sign;
                search(constraints, trial, out);
            }
        }
    }
}

enum Propagation {
    Contradiction,
    Solved,
    /// Branch variable: lowest index in the tightest open constraint.
    Open(usize),
}

fn propagate(constraints: &[SignConstraint], assign: &mut [i8]) -> Propagation {
    loop {
        let mut changed = false;
        let mut best_open: Option<(usize, usize)> = None; // (remaining, var)
        for c in constraints {
            let mut need = c.target;
            let mut remaining: Vec<(usize, i64)> = Vec::new();
            for &(var, coeff) in &c.coeffs {
                match assign[var] {
                    0 => remaining.push((var, coeff)),
                    s => need -= s as i64 * coeff,
                }
            }
            if remaining.is_empty() {
                if need != 0 {
                    return Propagation::Contradiction;
                }
                continue;
            }
            let smax: i64 = remaining.iter().map(|&(_, c)| c.abs()).sum();
            if need.abs() > smax || (need - smax) % 2 != 0 {
                return Propagation::Contradiction;
            }
            if remaining.len() == 1 {
                let (var, coeff) = remaining[0];
                if need.abs() != coeff.abs() {
                    return Propagation::Contradiction;
                }
                assign[var] = if need.signum() == coeff.signum() { 1 } else { -1 };
                changed = true;
                continue;
            }
            if need.abs() == smax {
                // extremal: every remaining sign is forced
                let dir = need.signum();
                for (var, coeff) in remaining {
                    assign[var] = (dir * coeff.signum()) as i8;
                }
                changed = true;
                continue;
            }
            let var = remaining.iter().map(|&(v, _)| v).min().unwrap();
            if best_open.map_or(true, |(n, _)| remaining.len() < n) {
                best_open = Some((remaining.len(), var));
            }
        }
        if changed {
            continue;
        }
        return match best_open {
            None => Propagation::Solved,
            Some((_, var)) => Propagation::Open(var),
        };
    }
}

/// Formats a mismatch list for error messages.
pub fn mismatch_summary(rows: &[PairMismatch]) -> String {
    rows.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")
}
