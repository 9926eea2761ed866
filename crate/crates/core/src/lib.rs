//! Secure communication over discrete memoryless wiretap channels when the
//! encoder's randomness comes from a rate-limited, possibly biased source.
//!
//! - [`info`]: distributions, channels and information measures.
//! - [`capacity`]: rate-limited secrecy capacity via the upper concave
//!   envelope of the `(I(X;Z), I(X;Y) - I(X;Z))` curve.
//! - [`randomness`]: randomness sources, the biased randomizer and the
//!   greedy uniformizing extractor.
//! - [`sim`]: random wiretap codes, decoders and exact leakage.
//! - [`jamming`]: the power limit of cooperative jamming.

pub mod capacity;
pub mod error;
pub mod info;
pub mod jamming;
mod limits;
pub mod randomness;
pub mod rng;
pub mod sim;

pub use capacity::{
    achievable_rate_renyi, rate_curve, secrecy_capacity, upper_concave_envelope, CapacityResult, Envelope,
    RateCurvePoint,
};
pub use error::{Error, Result};
pub use info::{Distribution, JointDistribution, Kernel, WiretapChannel};
pub use limits::{count_for_rate, Limits, DEFAULT_MAX_CODE_SYMBOLS, DEFAULT_MAX_ENUMERATION};
pub use randomness::{build_extractor, variational_distance, BiasedSource, Extractor, RandomnessSource};
pub use sim::{CodeParams, CodewordIndex, Decoder, WiretapCode};
