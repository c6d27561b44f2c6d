//! Simulation and verification toolkit for the *shifted approximate
//! equality* communication problem.
//!
//! Alice holds `(x1, x2)`, Bob holds `(y1, y2)`, all n-bit strings. The
//! question is whether some cyclic shift makes `shift_i(x1) ^ x2` close to
//! `shift_i(y1) ^ y2` in Hamming distance (weight at most `2n/5`), the
//! alternative being that every shift lands in the band `[7n/15, 8n/15]`.
//! Everything in this crate revolves around that promise problem:
//!
//! * [`bits`]: packed bitstring algebra (cyclic shifts, XOR, weights,
//!   positionwise noise),
//! * [`problem`]: instance classification and the hard input
//!   distributions with an exact density for the planted family,
//! * [`quantum`]: exact amplitude-level simulation of the entangled
//!   simultaneous-message protocol (phase encoding, shift-conjugated swap
//!   tests, majority amplification, the n-round sequential measurement),
//! * [`classical`]: the shared-randomness sampling protocol that gives
//!   the nearly matching classical upper bound,
//! * [`analysis`]: dense distributions on the Boolean cube, the
//!   Walsh-Hadamard transform, noise operators, and numeric verifiers for
//!   the entropy/hypercontractivity inequalities behind the lower bound.
//!
//! The crate is `no_std` (alloc only); IO, CLI and file formats live in
//! the companion `shapeq-cli` crate. All stochastic operations take an
//! explicit generator handle from [`rng`], so fixed seeds give bit-stable
//! results regardless of threading.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod bits;
pub mod classical;
pub mod error;
mod math;
pub mod problem;
pub mod quantum;
pub mod rng;

pub use bits::{BitString, Permutation, ShiftIndex};
pub use error::{Error, Result};
pub use problem::{DistKind, DistSpec, PromiseClass, ShapInstance, ShiftClass};
