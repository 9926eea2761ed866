use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::Rng;

use crate::error::{Error, Result};
use crate::info::{Distribution, WiretapChannel};
use crate::limits::{count_for_rate, Limits};
use crate::randomness::Extractor;
use crate::rng::seeded_rng;

/// Channel symbol.
pub type Symbol = u16;

/// Block length, codebook sizes and generation seed of a wiretap code.
///
/// Sizes follow `M0 = 2^{⌈nR0⌉}`, `M = 2^{⌈nR⌉}`, `K_r = 2^{⌈nR_r⌉}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParams {
    pub n: usize,
    pub r0: f64,
    pub r: f64,
    pub r_r: f64,
    /// Number of cloud centers `uⁿ(i)`.
    pub m0: usize,
    /// Number of secret messages `j`.
    pub m: usize,
    /// Number of randomization indices `k`.
    pub k_r: usize,
    pub seed: u64,
}

impl CodeParams {
    pub fn from_rates(n: usize, r0: f64, r: f64, r_r: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("block length must be at least 1"));
        }
        let to_usize = |c: u128| usize::try_from(c).map_err(|_| Error::invalid("codebook size overflows"));
        Ok(CodeParams {
            n,
            r0,
            r,
            r_r,
            m0: to_usize(count_for_rate(n, r0)?)?,
            m: to_usize(count_for_rate(n, r)?)?,
            k_r: to_usize(count_for_rate(n, r_r)?)?,
            seed,
        })
    }

    /// Sizes given directly; rates are reported as `log2(count) / n`.
    pub fn from_counts(n: usize, m0: usize, m: usize, k_r: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("block length must be at least 1"));
        }
        if m0 == 0 || m == 0 || k_r == 0 {
            return Err(Error::invalid("codebook sizes must be at least 1"));
        }
        let rate = |c: usize| (c as f64).log2() / n as f64;
        Ok(CodeParams {
            n,
            r0: rate(m0),
            r: rate(m),
            r_r: rate(k_r),
            m0,
            m,
            k_r,
            seed,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn num_codewords(&self) -> usize {
        self.m0 * self.m * self.k_r
    }
}

/// Codeword label `(i, j, k)`: cloud, secret message, randomization index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodewordIndex {
    pub cloud: usize,
    pub message: usize,
    pub randomizer: usize,
}

impl CodewordIndex {
    pub fn new(cloud: usize, message: usize, randomizer: usize) -> Self {
        CodewordIndex {
            cloud,
            message,
            randomizer,
        }
    }
}

/// A realized superposition codebook: clouds `uⁿ(i)` and satellites
/// `xⁿ(i, j, k)` drawn i.i.d. from `p_U` and `p_{X|U}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapCode {
    params: CodeParams,
    channel: WiretapChannel,
    p_u: Distribution,
    p_x_given_u: Vec<Distribution>,
    u_words: Vec<Symbol>,
    x_words: Vec<Symbol>,
}

/// Draws the codebook from `params.seed`, clouds first, then satellites in
/// `(i, j, k, position)` order.
pub fn build_random_code(
    ch: &WiretapChannel,
    p_u: &Distribution,
    p_x_given_u: &[Distribution],
    params: &CodeParams,
    limits: &Limits,
) -> Result<WiretapCode> {
    if p_x_given_u.len() != p_u.len() {
        return Err(Error::LengthMismatch {
            expected: p_u.len(),
            actual: p_x_given_u.len(),
        });
    }
    if let Some(d) = p_x_given_u.iter().find(|d| d.len() != ch.nx()) {
        return Err(Error::LengthMismatch {
            expected: ch.nx(),
            actual: d.len(),
        });
    }
    let max_alphabet = Symbol::MAX as usize + 1;
    if p_u.len() > max_alphabet || ch.nx() > max_alphabet || ch.ny() > max_alphabet || ch.nz() > max_alphabet {
        return Err(Error::invalid("alphabets larger than 65536 symbols are not supported"));
    }
    let n = params.n;
    let requested = (params.m0 as u128) * (params.m as u128) * (params.k_r as u128) * (n as u128);
    limits.check_code_symbols(requested)?;

    let mut rng = seeded_rng(params.seed);
    let u_sampler = weighted(p_u)?;
    let x_samplers = p_x_given_u.iter().map(weighted).collect::<Result<Vec<_>>>()?;

    let u_words: Vec<Symbol> = (0..params.m0 * n)
        .map(|_| u_sampler.sample(&mut rng) as Symbol)
        .collect();
    let mut x_words = Vec::with_capacity(requested as usize);
    for i in 0..params.m0 {
        let cloud = &u_words[i * n..(i + 1) * n];
        for _ in 0..params.m * params.k_r {
            x_words.extend(cloud.iter().map(|&u| x_samplers[u as usize].sample(&mut rng) as Symbol));
        }
    }
    Ok(WiretapCode {
        params: *params,
        channel: ch.clone(),
        p_u: p_u.clone(),
        p_x_given_u: p_x_given_u.to_vec(),
        u_words,
        x_words,
    })
}

pub(crate) fn weighted(d: &Distribution) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(d.probs().iter().copied()).map_err(|e| Error::invalid(e.to_string()))
}

/// Where the randomization index `k` comes from.
#[derive(Debug, Clone, Copy)]
pub enum RandomIndex<'a> {
    Explicit(usize),
    /// Draw `k ~ p_{U_r}`.
    Sampled(&'a Distribution),
    /// `k = φ(rⁿ)` for a source block `rⁿ`.
    Extracted(&'a Extractor, &'a [usize]),
}

impl WiretapCode {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn channel(&self) -> &WiretapChannel {
        &self.channel
    }

    pub fn p_u(&self) -> &Distribution {
        &self.p_u
    }

    pub fn p_x_given_u(&self) -> &[Distribution] {
        &self.p_x_given_u
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn cloud(&self, i: usize) -> &[Symbol] {
        let n = self.params.n;
        &self.u_words[i * n..(i + 1) * n]
    }

    pub fn codeword(&self, idx: CodewordIndex) -> &[Symbol] {
        let n = self.params.n;
        let flat = self.flat_index(idx);
        &self.x_words[flat * n..(flat + 1) * n]
    }

    pub(crate) fn flat_index(&self, idx: CodewordIndex) -> usize {
        (idx.cloud * self.params.m + idx.message) * self.params.k_r + idx.randomizer
    }

    /// All codeword labels in `(i, j, k)` lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = CodewordIndex> + '_ {
        let p = self.params;
        (0..p.m0).flat_map(move |i| (0..p.m).flat_map(move |j| (0..p.k_r).map(move |k| CodewordIndex::new(i, j, k))))
    }

    pub fn u_words(&self) -> &[Symbol] {
        &self.u_words
    }

    pub fn x_words(&self) -> &[Symbol] {
        &self.x_words
    }

    /// Transmits message `(i, j)` with a randomization index from `source`.
    /// Returns the chosen label and its codeword.
    pub fn encode<R: Rng + ?Sized>(
        &self,
        i: usize,
        j: usize,
        source: RandomIndex<'_>,
        rng: &mut R,
    ) -> Result<(CodewordIndex, &[Symbol])> {
        let p = &self.params;
        if i >= p.m0 || j >= p.m {
            return Err(Error::invalid(format!("message ({i}, {j}) outside {} x {}", p.m0, p.m)));
        }
        let k = match source {
            RandomIndex::Explicit(k) => k,
            RandomIndex::Sampled(d) => {
                if d.len() != p.k_r {
                    return Err(Error::LengthMismatch {
                        expected: p.k_r,
                        actual: d.len(),
                    });
                }
                weighted(d)?.sample(rng)
            }
            RandomIndex::Extracted(ex, seq) => {
                if ex.num_bins() != p.k_r {
                    return Err(Error::LengthMismatch {
                        expected: p.k_r,
                        actual: ex.num_bins(),
                    });
                }
                ex.extract(seq)?
            }
        };
        if k >= p.k_r {
            return Err(Error::invalid(format!("randomization index {k} >= K_r = {}", p.k_r)));
        }
        let idx = CodewordIndex::new(i, j, k);
        Ok((idx, self.codeword(idx)))
    }
}
