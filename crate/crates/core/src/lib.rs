//! Fisher information and Cramér-Rao bounds for estimating signal
//! parameters from quantized measurements `z_n = Q(s_n(θ) + e_n)`.

// NaN must fail these range checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod fim;
pub mod format;
pub mod noise;
pub mod quad;
pub mod quantizer;
pub mod signal;

pub use error::{Error, Result};
pub use fim::{
    crb, fim_binary, fim_general, fim_lower_bound, fim_unquantized, loewner_leq, CrbResult, FimMatrix, Provenance,
};
pub use noise::NoiseModel;
pub use quantizer::{QuantizerSpec, ThresholdSequence};
pub use signal::{ParamVector, SignalModel};
