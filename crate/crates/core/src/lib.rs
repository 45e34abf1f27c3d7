//! Exact arithmetic for abelian CM fields, trace-form lattices, finite
//! quadratic forms and the K3 lattice oracles built on them.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the `cmk3` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod abelian;
pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod forms;
pub mod ideals;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod trace;

pub use error::{Error, Result};
