//! ReLU network calculus, constructive approximation of Lipschitz functions,
//! SGD with random restarts, and evaluators for the resulting error bounds.
//!
//! Networks exist in two forms. A [`StructuredNetwork`] is an explicit list of
//! `(W_k, B_k)` layers and carries the operator calculus ([`algebra`]). A
//! [`ParamVector`] is a flat coefficient vector read through an
//! [`Architecture`]; it is what training manipulates. [`flatten`] and
//! [`unflatten`] convert between the two.

// `!(x > 0.0)` rejects NaN together with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod activation;
pub mod algebra;
pub mod approx;
pub mod arch;
pub mod bounds;
pub mod constructive;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod montecarlo;
pub mod network;
pub mod numeric;
pub mod params;
pub mod rng;
pub mod targets;
pub mod train;

pub use activation::{norm, Activation, ClipBounds};
pub use arch::Architecture;
pub use embed::embed;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use network::{Layer, StructuredNetwork};
pub use params::{affine_eval, flatten, realize_clipped, unflatten, ParamVector};

/// Version tag written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
