//! Finite-alphabet LDPC decoding with look-up-table variable-node updates.
//!
//! The crate covers the whole design and evaluation flow: parity-check
//! matrices and Tanner graphs, discrete density evolution over conditional
//! PMFs, mutual-information-maximizing quantizers, LUT tree design, a
//! flooding decoder with float, fixed-point and LUT message updates, a
//! deterministic Monte Carlo FER harness, and an analytical cost model of an
//! unrolled decoder pipeline.

pub mod artifact;
pub mod channel;
pub mod channel_quantizer;
pub mod code;
pub mod decoder;
pub mod density;
pub mod error;
pub mod pipeline;
pub mod prob;
pub mod quantizer;
pub mod sim;
pub mod tree;

pub use error::{Error, Result};
