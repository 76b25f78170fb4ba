//! Certified bounds for generalized hyperbolic Dehn filling.
//!
//! A filling of a cusped hyperbolic 3-manifold along slopes whose combined
//! normalized length exceeds [`certificates::THRESHOLD`] is hyperbolic. This
//! crate decides that criterion, enumerates the short slopes of a cusp,
//! bounds the change in volume, visual area and core length, and checks the
//! boundary positivity that drives the deformation.
//!
//! ```
//! use dehnfill::certificates::{certify_with_bounds, THRESHOLD};
//! use dehnfill::envelope::standard_envelope;
//!
//! let cert = certify_with_bounds(standard_envelope(), &[11.0, 11.0]).unwrap();
//! assert!(cert.certified);
//! assert!(cert.combined_lhat > THRESHOLD);
//! assert!(cert.volume_drop.unwrap().hi < 0.2);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod lattice;
pub mod numeric;
pub mod packing;
pub mod torus;
pub mod weitzenboeck;

pub use error::{Error, Result};
pub use num_complex;
