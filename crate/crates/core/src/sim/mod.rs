//! Random superposition wiretap codes with stochastic encoding.
//!
//! A code has `M0` cloud centers `uⁿ(i)`, and for each cloud `M · K_r`
//! satellites `xⁿ(i, j, k)`: `j` is the secret message and `k` the
//! randomization index supplied by the local source. Reliability is
//! measured at the legitimate receiver, secrecy by the exact leakage
//! `I(M;Zⁿ)` and the variational distance `V(p_{MZⁿ}, p_M p_{Zⁿ})`.

mod code;
mod decode;
mod experiment;
mod leakage;
mod pe;

pub use code::{build_random_code, CodeParams, CodewordIndex, RandomIndex, Symbol, WiretapCode};
pub use decode::{decode_ml, decode_typicality, Decoder, PreparedDecoder};
pub use experiment::{
    mean_and_halfwidth, resolvability_experiment, CodebookOutcome, Ensemble, ResolvabilityReport, SimulationRow,
    SIMULATION_CSV_HEADER,
};
pub use leakage::{exact_leakage, leakage_bound_from_vd, product_output_law, LeakageReport};
pub use pe::{estimate_pe, exact_pe, monte_carlo_pe, wilson_interval, Mode, PeEstimate, Z_95};
