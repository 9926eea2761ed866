//! Finite-alphabet probability and information measures.
//!
//! All logarithms are base 2; every rate and information quantity is in bits.

mod channel;
mod distribution;
mod measures;

pub use channel::{JointDistribution, Kernel, WiretapChannel};
pub use distribution::{binary_entropy, entropy, renyi2, Distribution, MASS_TOLERANCE};
pub use measures::{
    channel_mutual_information, conditional_mutual_information, input_informations, is_degraded, is_less_capable,
    mutual_information, simplex_grid, Degradedness, LessCapable, DEFAULT_DEGRADED_TOL, MAX_GRID_POINTS,
};
