//! Computations in the h1-inverted rho-Bockstein and motivic Adams spectral
//! sequences over a handful of base fields, and assembly of the resulting
//! eta-inverted Milnor-Witt stems.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, charts and the
//! command line live in the companion `mwstems-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adams;
pub mod algebra;
pub mod bockstein;
pub mod f2linalg;
pub mod fields;
pub mod grading;
pub mod invariants;
pub mod oracle;
pub mod page;
pub mod stems;

mod error;

pub use error::{Error, Result};
pub use fields::{FieldData, FieldSpec};
pub use grading::{Bidegree, Degree, SsKind, Window};
pub use page::{Page, PageIndex};
