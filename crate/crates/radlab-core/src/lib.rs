//! Numerical-radius laboratory: dense complex linear algebra, radius and
//! related functionals, 2x2 block-operator constructions, and a catalogue of
//! machine-checkable operator inequalities with seeded random generation.
//!
//! Every operation in this crate is a pure function of its inputs; nothing
//! here touches IO, clocks, or global state, so the whole crate is `no_std`
//! (with `alloc`) and safe to drive from any number of threads.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod blockops;
pub mod catalogue;
pub mod linalg;
pub mod numrad;
pub mod randgen;

pub use num_complex::Complex64;
