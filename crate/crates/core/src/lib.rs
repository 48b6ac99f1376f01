//! Certified entropy and Hausdorff-dimension bounds for subshifts of finite
//! type, expanding Markov systems and their exceptional sets.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exceptional;
pub mod interval;
pub mod linalg;
pub mod markov_systems;
pub mod symbolic;
pub mod thermo;

pub use error::{Error, Result};
pub use interval::Enclosure;
pub use num_complex::Complex64;
pub use symbolic::{CylinderSet, EntropyValue, Sft, Word};
pub use thermo::{Ambient, Branch, DimensionInterval, LyapunovBounds, MarkovSystem};
