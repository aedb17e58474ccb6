//! Wave-packet revivals for two-degree-of-freedom completely integrable
//! systems near a Liouville torus.
//!
//! The Hamiltonian is a polynomial `F(P1, P2)` of two commuting harmonic
//! oscillators with frequencies `ω1, ω2`. Everything here is a pure function
//! of its inputs:
//!
//! - [`hamiltonian`]: polynomial evaluation, eigenvalues, period families.
//! - [`wavepacket`]: the localized initial state on a truncated lattice.
//! - [`dynamics`]: return amplitude, linear and quadratic approximations,
//!   the pseudo-classical two-time function and the Poisson envelope.
//! - [`diophantine`]: continued fractions, flow-to-lattice distances,
//!   approach times and collapse horizons.
//! - [`revival`]: resonance detection, the quadratic phase sequence, its
//!   discrete Fourier coefficients and Gauss sums.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod diophantine;
pub mod dynamics;
mod error;
pub mod hamiltonian;
mod math;
pub mod revival;
pub mod wavepacket;

pub use error::{Error, Result};
