//! Cooperative jamming when the jammer's randomness is rate limited.
//!
//! A jammer that spends `H(R)` bits per use on a Gaussian codebook can only
//! make `Cⁿ + Nⁿ` look like `N(0, σ² + ρ)` while `½ log2(1 + ρ/σ²) <= H(R)`,
//! which caps the artificial noise power at `σ² (2^{2H(R)} - 1)`.

use rand::Rng;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::limits::{count_for_rate, Limits};
use crate::rng::stream_rng;

pub const BOUND_CSV_HEADER: &str = "sigma2,H_R,rho_max";
pub const SIMULATION_CSV_HEADER: &str = "sigma2,rho,n,code_rate,samples,seed,ks_stat";

/// Relative gap above which the two candidate power formulas are flagged.
pub const FORMULA_DISCREPANCY_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JammingScenario {
    /// Eavesdropper noise variance.
    pub sigma2: f64,
    /// Source entropy `H(R)` in bits.
    pub h_r: f64,
    /// Largest inducible jamming power.
    pub rho_max: f64,
}

impl JammingScenario {
    pub fn new(sigma2: f64, h_r: f64) -> Result<Self> {
        Ok(JammingScenario {
            sigma2,
            h_r,
            rho_max: max_jamming_power(sigma2, h_r)?,
        })
    }

    /// The alternative closed form `σ² 2^{2H(R) - 1}`.
    pub fn alternative_bound(&self) -> f64 {
        alternative_jamming_power(self.sigma2, self.h_r)
    }

    /// `|alt - rho_max| / max(|alt|, |rho_max|)`, zero when both vanish.
    pub fn formula_discrepancy(&self) -> f64 {
        let alt = self.alternative_bound();
        let scale = alt.abs().max(self.rho_max.abs());
        if scale == 0.0 {
            0.0
        } else {
            (alt - self.rho_max).abs() / scale
        }
    }

    pub fn to_csv(&self) -> String {
        format!("{},{},{}", self.sigma2, self.h_r, self.rho_max)
    }
}

fn check(sigma2: f64, h_r: f64) -> Result<()> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!("noise variance must be > 0, got {sigma2}")));
    }
    if !(h_r >= 0.0 && h_r.is_finite()) {
        return Err(Error::invalid(format!("source entropy must be >= 0, got {h_r}")));
    }
    Ok(())
}

/// `σ² (2^{2 H_R} - 1)`: the power whose resolvability rate
/// `½ log2(1 + ρ/σ²)` equals `H_R`.
pub fn max_jamming_power(sigma2: f64, h_r: f64) -> Result<f64> {
    check(sigma2, h_r)?;
    Ok(sigma2 * ((2.0 * h_r).exp2() - 1.0))
}

/// `σ² 2^{2 H_R - 1}`, reported next to [`max_jamming_power`] for comparison.
pub fn alternative_jamming_power(sigma2: f64, h_r: f64) -> f64 {
    sigma2 * (2.0 * h_r - 1.0).exp2()
}

/// `½ log2(1 + P / (σ² + ρ))`.
pub fn eavesdropper_rate(power: f64, sigma2: f64, rho: f64) -> f64 {
    0.5 * (1.0 + power / (sigma2 + rho)).log2()
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic 5% critical value `1.358 · sqrt((n_a + n_b) / (n_a n_b))`.
pub fn ks_critical_value_5pct(na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    1.358 * ((na + nb) / (na * nb)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JammingSimulation {
    pub sigma2: f64,
    pub rho: f64,
    pub n: usize,
    pub code_rate: f64,
    pub samples: usize,
    pub seed: u64,
    pub codewords: usize,
    pub ks_stat: f64,
}

impl JammingSimulation {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.sigma2, self.rho, self.n, self.code_rate, self.samples, self.seed, self.ks_stat
        )
    }
}

/// Gaussian jamming codebook of `2^{⌈n·code_rate⌉}` words with i.i.d.
/// `N(0, ρ)` entries. `samples` coordinates of `Cⁿ + Nⁿ` (uniform codeword,
/// `N(0, σ²)` noise) are pooled and compared to as many `N(0, σ² + ρ)` draws.
///
/// Streams 0, 1 and 2 of `seed` drive the codebook, the jammed samples and
/// the reference samples.
pub fn simulate_jamming(
    sigma2: f64,
    rho: f64,
    n: usize,
    code_rate: f64,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<JammingSimulation> {
    check(sigma2, 0.0)?;
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("jamming power must be >= 0, got {rho}")));
    }
    if n == 0 || samples == 0 {
        return Err(Error::invalid("block length and sample count must be positive"));
    }
    let words = count_for_rate(n, code_rate)?;
    limits.check_code_symbols(words.saturating_mul(n as u128))?;
    let words = words as usize;

    let jam = Normal::new(0.0, rho.sqrt()).map_err(|e| Error::invalid(e.to_string()))?;
    let noise = Normal::new(0.0, sigma2.sqrt()).map_err(|e| Error::invalid(e.to_string()))?;
    let target = Normal::new(0.0, (sigma2 + rho).sqrt()).map_err(|e| Error::invalid(e.to_string()))?;

    let mut rng = stream_rng(seed, 0);
    let codebook: Vec<f64> = (0..words * n).map(|_| rng.sample(jam)).collect();

    let mut rng = stream_rng(seed, 1);
    let mut jammed = Vec::with_capacity(samples);
    while jammed.len() < samples {
        let w = rng.random_range(0..words);
        for &c in &codebook[w * n..(w + 1) * n] {
            if jammed.len() == samples {
                break;
            }
            jammed.push(c + rng.sample(noise));
        }
    }
    let mut rng = stream_rng(seed, 2);
    let reference: Vec<f64> = (0..samples).map(|_| rng.sample(target)).collect();

    Ok(JammingSimulation {
        sigma2,
        rho,
        n,
        code_rate,
        samples,
        seed,
        codewords: words,
        ks_stat: ks_two_sample(&jammed, &reference),
    })
}
