//! Surgery calculus for smooth 4-manifolds.
//!
//! The crate mechanizes a standard construction pattern for exotic smooth
//! structures: knot surgeries on the elliptic surface E(2), a chain of
//! blow-ups producing embedded linear configurations, rational blow-downs
//! along them, and the Seiberg-Witten bookkeeping that tells the resulting
//! manifolds apart. Pipelines are driven by a small line-oriented script
//! language; see the `dsl` module and the `scripts/` directory.

pub mod arith;
pub mod lattice;
pub mod ledger;
pub mod matrix;
pub mod plumbing;
pub mod rbd;
pub mod swcalc;

pub mod dsl;

pub use arith::{cfrac_eval, cfrac_expand, lens_label, smith_cokernel, ContinuedFraction, LensLabel};
pub use lattice::{
    cross_pairings, AmbientLattice, Class, EmbeddedConfiguration, LatticeBuilder, Validation,
};
pub use ledger::{coprimality_certificate, FormParity, InvariantLedger, Pi1Status};
pub use matrix::IntMat;
pub use plumbing::{is_negative_definite, LinearPlumbing};
pub use rbd::{
    corollary_condition, descend, restriction_square, theorem_condition, DescentContext,
    DescentMode, DescentVerdict, Pattern,
};
pub use swcalc::{alexander_twist, AlexanderPolynomial, SwFunction};
