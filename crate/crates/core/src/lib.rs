//! Exact tools for distance-regular graphs: intersection arrays, spectra,
//! graph constructions, strongly regular parameter families, the CAB
//! recursion, homogeneity tests and classical parameters.

pub mod array;
pub mod bounds;
pub mod cab;
pub mod classical;
pub mod error;
pub mod families;
pub mod graphs;
pub mod homogeneous;
pub mod poly;
pub mod scalar;
pub(crate) mod ser;
pub mod spectrum;
pub mod srg;

pub use array::{FeasibilityReport, FeasibilityWitness, IntersectionArray};
pub use error::{Error, Result};
pub use poly::Poly;
pub use scalar::{CertifiedReal, ExactScalar, QuadSurd};
pub use spectrum::{b_parameter, eigenvalues, EigenvalueList};
