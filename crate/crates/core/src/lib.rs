//! Numerical toolkit for multi-K-bi-Lipschitz contact equivalence of
//! polynomial map germs `f : (R^n, 0) -> (R^p, 0)`.
//!
//! The crate is organized around four pieces of machinery:
//!
//! * [`germ`] / [`poly`] / [`sample`] — representation, evaluation and
//!   differentiation of polynomial map germs, plus deterministic sampling of
//!   punctured balls around the origin.
//! * [`contact`] — a sampling semidecision of the "same contact" relation
//!   `c1 f(x) <= g(x) <= c2 f(x)` near the origin, its signed variant under a
//!   source coordinate change, and vanishing-order signatures along rays.
//! * [`coord`] / [`homeo`] — an explicit piecewise bi-Lipschitz homeomorphism
//!   `H(x, y) = (h(x), theta(x, y))` built from a passing contact verdict, and
//!   the product-structured assembly of per-component maps over a common
//!   source change.
//! * [`verify`] / [`probe`] — numerical certification of every property such
//!   a map must satisfy (graph mapping, zero-section invariance, half-space
//!   behavior, bi-Lipschitz constants, bounded partials), and a desk-scale
//!   probe that clusters coefficient grids of germs into equivalence classes.
//!
//! All sampling is seeded and deterministic; every check reports a tolerance
//! and a witness, never a bare boolean.

pub mod config;
pub mod contact;
pub mod coord;
pub mod germ;
pub mod homeo;
pub mod poly;
pub mod probe;
pub mod sample;
pub mod verify;

mod error;

pub use config::ToleranceConfig;
pub use contact::{ContactVerdict, RaySignature, VerdictKind};
pub use coord::CoordChange;
pub use error::Error;
pub use germ::{MultiIndex, PolyGerm};
pub use homeo::{EvaluableMap, MultiHomeo, PiecewiseHomeo, SignBranch};
pub use poly::Polynomial;
pub use sample::SampleScheme;
pub use verify::{BiLipEstimate, CheckReport};
