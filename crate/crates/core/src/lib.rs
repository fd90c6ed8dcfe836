//! Numerical quantum-mechanics kernel.
//!
//! Everything in this crate is `no_std` (with `alloc`): finite-dimensional
//! Hilbert spaces and the measurement postulates ([`hilbert`]), wave functions
//! on uniform grids and their momentum representation ([`grid`]),
//! Schrödinger time evolution and the two-slit experiment ([`dynamics`]),
//! angular momentum and spin ([`spin`]), and the Klein-Gordon and Dirac
//! equations ([`relativistic`]).
//!
//! Units: ħ is always an explicit argument (natural units use
//! [`HBAR_NATURAL`]); relativistic code sets the speed of light to 1.
//!
//! f64 math comes from `num_traits::Float` (backed by libm). Those imports
//! are marked `allow(unused_imports)` because std's inherent float methods
//! shadow them whenever std is linked elsewhere in the build.
#![no_std]
// `!(x > 0.0)` is how parameter checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod dynamics;
pub mod fft;
pub mod grid;
pub mod hilbert;
pub mod linalg;
pub mod relativistic;
pub mod rng;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// ħ in natural units.
pub const HBAR_NATURAL: f64 = 1.0;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
