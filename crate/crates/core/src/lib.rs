//! Unramified local period computations for pairs of unitary groups U(n+1) × U(n+2).
//!
//! The crate evaluates local L-factors from Satake data, the hyperoctahedral
//! Weyl sums entering the spherical double integral `S(1)`, the open-orbit
//! value `ζ(Ξ, ξ)` (closed forms and recursion), and checks the unramified
//! identity
//!
//! ```text
//! ζ(Ξ, ξ) · S_{Ξ⁻¹, ξ⁻¹}(1) = Δ_{G_{n+2}} · L_{π_{n+2}, π_{n+1}}(1/2)
//! ```
//!
//! at inert and split places, together with the unramified-parameter
//! identities relating adjoint and triple-product L-factors of theta lifts.
//!
//! Every displayed product formula is built as a [`factor::Product`] of
//! labelled Euler factors. Evaluating the product gives the number; comparing
//! two products term-by-term localizes a disagreement to named factors.
//!
//! The crate is `no_std` (it needs `alloc`). IO, the command-line front end
//! and report serialization live in the companion `unramified-verify` crate.

#![no_std]
// Negated comparisons are deliberate: NaN must count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod factor;
pub mod identity;
pub mod numfield;
pub mod paramcalc;
pub mod report;
pub mod sample;
pub mod satake;
pub mod weylsum;
pub mod zetarec;

pub use error::{Error, Result};
pub use numfield::{CharValue, FieldData, PlaceKind};
pub use report::{FactorDiff, VerificationReport};
pub use satake::SatakeDatum;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Relative error `|a - b| / max(|a|, |b|, 1e-30)`.
pub fn rel_err(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm()).max(1e-30);
    (a - b).norm() / scale
}
