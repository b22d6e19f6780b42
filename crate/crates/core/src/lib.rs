//! Pseudo-spectral toolkit for the 2D periodic SQG-Reynolds system.
//!
//! The crate provides the harmonic-analysis building blocks (Fourier
//! multipliers, Littlewood-Paley blocks, bilinear operators, tensor calculus,
//! backward flows, mollification, temporal profiles) as exactly testable
//! operators, plus an iteration engine that runs Newton-Nash stages of the
//! relaxed system
//!
//! ```text
//! d_t theta + u . grad theta = grad^perp . div R,   u = T[theta]
//! ```
//!
//! at desk scale and verifies the identities that can be checked numerically.

pub mod bilinear;
pub mod bump;
pub mod error;
mod fft;
pub mod grid;
pub mod flow;
pub mod lp;
pub mod mollify;
pub mod profiles;
pub mod ops;
pub mod tensor;
pub mod testkit;

pub use error::{Result, SqgError};
pub use grid::{Grid, ScalarField, SymTensorField, VectorField, TAU};
