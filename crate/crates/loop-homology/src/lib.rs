//! Exact integer computations of loop homology algebras.
//!
//! The crate builds bigraded pages from algebra presentations, runs
//! spectral-sequence page turns with exact integer linear algebra (Smith
//! normal form, kernels, subquotients), determines differentials by
//! cross-section, abutment, and naturality constraints, and verifies the
//! resulting stable pages against closed-form answers for circles, odd and
//! even spheres, and complex projective spaces.
//!
//! Entry points:
//! - [`linalg`]: exact integer matrices, Smith normal form, abelian groups.
//! - [`algebra`]: bigraded algebra presentations and normal-form arithmetic.
//! - [`engine`]: pages, differentials, page turns, stabilization, checks.
//! - [`models`]: standard (co)homology models and preset pipelines.
//! - [`naturality`]: morphisms of pages, constraint solvers, dualization.
//! - [`cli`]: the `loophom` command-line front end.

pub mod algebra;
pub mod bidegree;
pub mod cli;
pub mod engine;
pub mod linalg;
pub mod models;
pub mod naturality;

pub use bidegree::{Bidegree, Variance, Window};
pub use linalg::{AbelianGroup, IntMatrix};
