//! Core analysis library: a lightweight Java front end, call resolution,
//! a c-type method registry, argument-expression extraction, data-dependency
//! features, an ID3 learner and evaluation utilities.
//!
//! The crate is `no_std` + `alloc`; all IO, file formats and the CLI live in
//! the companion `ctyper` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod eval;
pub mod extract;
pub mod features;
pub mod frontend;
pub mod learn;
pub mod registry;
pub mod resolve;

pub use registry::CType;
