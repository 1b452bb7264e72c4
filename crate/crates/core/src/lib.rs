//! Exact models of semiadditive functionals on finite spaces.
//!
//! A functional is the support function of a finitely generated convex set of
//! probability measures and is stored by that set's extreme points, so
//! equality is structural. All arithmetic is over arbitrary-precision
//! rationals.

pub mod error;
pub mod functional;
pub mod hyperspace;
pub mod instances;
pub mod json;
pub mod lawcheck;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod seed;
pub mod space;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use error::{Error, Result};
pub use functional::{check_axioms, Axiom, AxiomReport, AxiomVerdict, BlackBoxFunctional, Functional, OsfReport};
pub use hyperspace::{
    degree_witness, embed, functor_homotopy, homotopy, homotopy_probe, retraction, uniform_grid, ClosedSubset,
    MapFamily, ProbeRecord, ProbeReport,
};
pub use polytope::{extreme_points, in_hull, minkowski_combination, polytope_eq, MeasurePolytope};
pub use rational::{format_rational, parse_rational, Rational};
pub use space::{FiniteSpace, Measure, PfVerdict, PointMap, TestFunction};
