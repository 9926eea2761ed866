use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::{Distribution, WiretapChannel};
use crate::limits::Limits;
use crate::rng::derive_seed;
use crate::sim::code::{build_random_code, CodeParams, WiretapCode};
use crate::sim::leakage::{exact_leakage, LeakageReport};
use crate::sim::pe::Z_95;

/// Code ensemble `(channel, p_U, p_{X|U})` sampled by the experiments.
#[derive(Debug, Clone, Copy)]
pub struct Ensemble<'a> {
    pub channel: &'a WiretapChannel,
    pub p_u: &'a Distribution,
    pub p_x_given_u: &'a [Distribution],
}

impl Ensemble<'_> {
    /// Codebook `index` of the ensemble, drawn with seed
    /// `derive_seed(params.seed, index)`.
    pub fn codebook(&self, params: &CodeParams, index: u64, limits: &Limits) -> Result<WiretapCode> {
        let derived = params.with_seed(derive_seed(params.seed, index));
        build_random_code(self.channel, self.p_u, self.p_x_given_u, &derived, limits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodebookOutcome {
    pub seed: u64,
    pub leakage: LeakageReport,
}

/// Exact secrecy metrics averaged over independently drawn codebooks.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvabilityReport {
    pub codebooks: Vec<CodebookOutcome>,
    pub mean_vd: f64,
    /// 95% normal half-width of the mean over codebooks.
    pub vd_ci_halfwidth: f64,
    pub mean_leakage_bits: f64,
    pub leakage_ci_halfwidth: f64,
}

/// `(mean, 95% half-width)` of a sample.
pub fn mean_and_halfwidth(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Z_95 * (var / n).sqrt())
}

/// Draws `num_codebooks` codes and computes `V(p_{MZⁿ}, p_M p_{Zⁿ})` exactly
/// for each, with randomization index `k ~ p_ur`.
pub fn resolvability_experiment(
    ensemble: Ensemble<'_>,
    params: &CodeParams,
    p_ur: &Distribution,
    num_codebooks: usize,
    limits: &Limits,
) -> Result<ResolvabilityReport> {
    if num_codebooks == 0 {
        return Err(Error::invalid("at least one codebook is required"));
    }
    if p_ur.len() != params.k_r {
        return Err(Error::LengthMismatch {
            expected: params.k_r,
            actual: p_ur.len(),
        });
    }
    limits.check_enumeration("eavesdropper outputs |Z|^n", ensemble.channel.nz(), params.n)?;
    let codebooks = (0..num_codebooks as u64)
        .into_par_iter()
        .map(|c| {
            let code = ensemble.codebook(params, c, limits)?;
            Ok(CodebookOutcome {
                seed: code.params().seed,
                leakage: exact_leakage(&code, p_ur, limits)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let vds: Vec<f64> = codebooks.iter().map(|c| c.leakage.vd).collect();
    let leaks: Vec<f64> = codebooks.iter().map(|c| c.leakage.leakage_bits).collect();
    let (mean_vd, vd_ci_halfwidth) = mean_and_halfwidth(&vds);
    let (mean_leakage_bits, leakage_ci_halfwidth) = mean_and_halfwidth(&leaks);
    Ok(ResolvabilityReport {
        codebooks,
        mean_vd,
        vd_ci_halfwidth,
        mean_leakage_bits,
        leakage_ci_halfwidth,
    })
}

/// Column order of simulation CSV output.
pub const SIMULATION_CSV_HEADER: &str =
    "n,R0,R,Rr,renyi2_rate,entropy_rate,seed,codebooks,mean_vd,ci_halfwidth,mean_leakage_bits,pe,pe_ci";

/// One simulation CSV row: either a single codebook (`codebooks = 1`, its
/// own derived seed) or a summary over all codebooks (master seed).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub n: usize,
    pub r0: f64,
    pub r: f64,
    pub r_r: f64,
    /// `R₂(U_r) / n`.
    pub renyi2_rate: f64,
    /// `H(U_r) / n`.
    pub entropy_rate: f64,
    pub seed: u64,
    pub codebooks: usize,
    pub mean_vd: f64,
    pub ci_halfwidth: f64,
    pub mean_leakage_bits: f64,
    pub pe: f64,
    pub pe_ci: f64,
}

impl SimulationRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.r0,
            self.r,
            self.r_r,
            self.renyi2_rate,
            self.entropy_rate,
            self.seed,
            self.codebooks,
            self.mean_vd,
            self.ci_halfwidth,
            self.mean_leakage_bits,
            self.pe,
            self.pe_ci
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_ci() {
        assert_eq!(mean_and_halfwidth(&[0.3]), (0.3, 0.0));
        let (m, h) = mean_and_halfwidth(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((h - Z_95 * 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_row_layout() {
        let row = SimulationRow {
            n: 4,
            r0: 0.0,
            r: 0.25,
            r_r: 0.5,
            renyi2_rate: 0.5,
            entropy_rate: 0.5,
            seed: 9,
            codebooks: 1,
            mean_vd: 0.125,
            ci_halfwidth: 0.0,
            mean_leakage_bits: 0.01,
            pe: 0.2,
            pe_ci: 0.0,
        };
        assert_eq!(row.to_csv(), "4,0,0.25,0.5,0.5,0.5,9,1,0.125,0,0.01,0.2,0");
        assert_eq!(
            SIMULATION_CSV_HEADER.split(',').count(),
            row.to_csv().split(',').count()
        );
    }

    #[test]
    fn experiment_is_deterministic_and_guarded() {
        let ch = WiretapChannel::binary_symmetric_pair(0.1, 0.3).unwrap();
        let p_u = Distribution::uniform(1).unwrap();
        let p_x = vec![Distribution::uniform(2).unwrap()];
        let ens = Ensemble {
            channel: &ch,
            p_u: &p_u,
            p_x_given_u: &p_x,
        };
        let params = CodeParams::from_counts(4, 1, 2, 4, 42).unwrap();
        let u = Distribution::uniform(4).unwrap();
        let a = resolvability_experiment(ens, &params, &u, 8, &Limits::default()).unwrap();
        let b = resolvability_experiment(ens, &params, &u, 8, &Limits::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.codebooks.len(), 8);
        assert_eq!(a.codebooks[3].seed, derive_seed(42, 3));
        assert!(resolvability_experiment(ens, &params, &u, 0, &Limits::default()).is_err());
        let big = CodeParams::from_counts(21, 1, 2, 4, 42).unwrap();
        assert!(resolvability_experiment(ens, &big, &u, 1, &Limits::default())
            .unwrap_err()
            .is_resource_limit());
    }
}
