use rand::distr::Distribution as _;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::Distribution;
use crate::limits::Limits;
use crate::rng::stream_rng;
use crate::sim::code::{weighted, CodewordIndex, Symbol, WiretapCode};
use crate::sim::decode::{Decoder, PreparedDecoder};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "monte_carlo",
        }
    }
}

/// Average probability that the decoded message `(i, j)` is wrong,
/// erasures included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeEstimate {
    pub pe: f64,
    /// Wilson 95% interval; degenerate at `pe` in exact mode.
    pub lower: f64,
    pub upper: f64,
    pub mode: Mode,
    /// Monte Carlo trials, 0 in exact mode.
    pub trials: u64,
}

impl PeEstimate {
    pub fn ci_halfwidth(&self) -> f64 {
        (self.upper - self.lower) / 2.0
    }
}

/// Wilson score interval for `errors` out of `trials` at normal quantile `z`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let phat = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lower = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lower, upper)
}

/// Exact error probability by enumerating every `yⁿ`.
pub fn exact_pe(code: &WiretapCode, p_ur: &Distribution, decoder: Decoder, limits: &Limits) -> Result<PeEstimate> {
    check_randomizer(code, p_ur)?;
    let main = code.channel().main();
    let ny = main.cols();
    let n = code.n();
    let size = limits.check_enumeration("main-channel outputs |Y|^n", ny, n)?;
    let prepared = PreparedDecoder::new(code, decoder)?;
    let p = code.params();
    let msg_weight = 1.0 / (p.m0 * p.m) as f64;

    // Success mass per yⁿ, summed in index order for reproducibility.
    let success: Vec<f64> = (0..size)
        .into_par_iter()
        .map_init(
            || vec![0 as Symbol; n],
            |y, s| -> Result<f64> {
                let mut rest = s;
                for slot in y.iter_mut().rev() {
                    *slot = (rest % ny) as Symbol;
                    rest /= ny;
                }
                let Some(hat) = prepared.decode(y)? else {
                    return Ok(0.0);
                };
                let mut mass = 0.0;
                for (k, &pk) in p_ur.probs().iter().enumerate() {
                    let word = code.codeword(CodewordIndex::new(hat.cloud, hat.message, k));
                    let lik: f64 = word
                        .iter()
                        .zip(y.iter())
                        .map(|(&x, &b)| main.get(x as usize, b as usize))
                        .product();
                    mass += pk * lik;
                }
                Ok(msg_weight * mass)
            },
        )
        .collect::<Result<_>>()?;
    let pe = (1.0 - success.iter().sum::<f64>()).clamp(0.0, 1.0);
    Ok(PeEstimate {
        pe,
        lower: pe,
        upper: pe,
        mode: Mode::Exact,
        trials: 0,
    })
}

/// Monte Carlo error probability. Trial `t` draws the message, the
/// randomization index and the channel noise from stream `t` of `seed`.
pub fn monte_carlo_pe(
    code: &WiretapCode,
    p_ur: &Distribution,
    decoder: Decoder,
    trials: u64,
    seed: u64,
) -> Result<PeEstimate> {
    check_randomizer(code, p_ur)?;
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let prepared = PreparedDecoder::new(code, decoder)?;
    let k_sampler = weighted(p_ur)?;
    let main = code.channel().main();
    let row_samplers = (0..main.rows())
        .map(|x| {
            let row = Distribution::new(main.row(x).to_vec())?;
            weighted(&row)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = code.params();
    let n = code.n();

    let errors: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0 as Symbol; n],
            |y, t| -> Result<u64> {
                let mut rng = stream_rng(seed, t);
                let i = rng.random_range(0..p.m0);
                let j = rng.random_range(0..p.m);
                let k = k_sampler.sample(&mut rng);
                let word = code.codeword(CodewordIndex::new(i, j, k));
                for (slot, &x) in y.iter_mut().zip(word) {
                    *slot = row_samplers[x as usize].sample(&mut rng) as Symbol;
                }
                let ok = matches!(prepared.decode(y)?, Some(hat) if hat.cloud == i && hat.message == j);
                Ok(u64::from(!ok))
            },
        )
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let (lower, upper) = wilson_interval(errors, trials, Z_95);
    Ok(PeEstimate {
        pe: errors as f64 / trials as f64,
        lower,
        upper,
        mode: Mode::MonteCarlo,
        trials,
    })
}

/// Exact when `|Y|^n` fits under the enumeration guard, Monte Carlo otherwise.
pub fn estimate_pe(
    code: &WiretapCode,
    p_ur: &Distribution,
    decoder: Decoder,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<PeEstimate> {
    match limits.check_enumeration("main-channel outputs |Y|^n", code.channel().ny(), code.n()) {
        Ok(_) => exact_pe(code, p_ur, decoder, limits),
        Err(_) => monte_carlo_pe(code, p_ur, decoder, trials, seed),
    }
}

fn check_randomizer(code: &WiretapCode, p_ur: &Distribution) -> Result<()> {
    if p_ur.len() != code.params().k_r {
        return Err(Error::LengthMismatch {
            expected: code.params().k_r,
            actual: p_ur.len(),
        });
    }
    Ok(())
}
