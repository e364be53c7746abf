//! Numerical core for pure-dephasing quantum thermometry.
//!
//! A two-level (or spin-cat) probe dephases in a bosonic bath with an
//! Ohmic-like spectral density. This crate evaluates
//!
//! * the dephasing kernel Δ_T(t) and its temperature derivative ([`dephasing`]),
//! * the heat absorbed by the bath, which does not depend on temperature ([`thermo`]),
//! * the temperature QFI, QSNR and the σ_x Fisher information ([`metrology`]),
//! * time-optimal protocols and short-time expansions ([`timeopt`]),
//! * the optimal channel QFI of a spin-j dephasing channel ([`channel`]).
//!
//! Units: ħ = k_B = 1, temperatures and energies are frequencies.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod dephasing;
mod dd;
mod error;
pub mod linalg;
pub mod metrology;
pub mod optimize;
pub mod special;
pub mod spectral;
pub mod thermo;
pub mod timeopt;

pub use error::{Error, Result};
