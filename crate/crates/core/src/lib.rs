//! Exact coefficient triangle of the Lambert W derivative polynomials.
//!
//! The nth derivative of the principal branch satisfies
//! `W^(n)(x) = exp(-n W) p_n(W) / (1 + W)^(2n-1)` where
//! `p_n(w) = (-1)^(n-1) * sum_k beta(n, k) w^k`. This crate builds the
//! `beta(n, k)` triangle by several independent routes in exact integer
//! arithmetic, checks its structural properties (positivity,
//! log-concavity, unimodality and the related inequalities), and provides a
//! binary64 engine for `W` and its derivatives.

pub mod closed_forms;
pub mod error;
pub mod exact;
pub mod numeric;
pub mod props;
pub mod table;

pub use closed_forms::Route;
pub use error::{Error, Result};
pub use exact::{ExactInt, ExactRat};
pub use props::{Property, PropertyReport, Violation};
pub use table::{build_table, BoundaryKind, CoefficientTable, SignedPolynomial};
