//! Local sources of randomness and their uniformization.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::info::Distribution;
use crate::limits::{checked_pow, count_for_rate, Limits};

/// I.i.d. source `(R, p_R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomnessSource {
    p: Distribution,
}

impl RandomnessSource {
    pub fn new(p: Distribution) -> Self {
        RandomnessSource { p }
    }

    pub fn alphabet_size(&self) -> usize {
        self.p.len()
    }

    pub fn distribution(&self) -> &Distribution {
        &self.p
    }

    /// `H(R)` in bits per symbol.
    pub fn entropy(&self) -> f64 {
        self.p.entropy()
    }

    pub fn renyi2(&self) -> f64 {
        self.p.renyi2()
    }

    /// Probability of a sequence with the given per-symbol counts.
    ///
    /// Computed in a fixed symbol order, so sequences of the same type get
    /// bit-identical probabilities.
    fn type_probability(&self, counts: &[u32]) -> f64 {
        self.p
            .probs()
            .iter()
            .zip(counts)
            .map(|(p, &c)| p.powi(c as i32))
            .product()
    }
}

/// The biased randomizer `U_r` over `2^{⌈nR⌉}` values with
/// `P(U_r = first) = 2^{-nαR}` and the rest of the mass spread evenly.
///
/// Entropy and Rényi-2 are available in closed form for any `n`; the full
/// vector only when it fits under the enumeration guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedSource {
    pub n: usize,
    pub alpha: f64,
    pub rate: f64,
    size_bits: u32,
}

impl BiasedSource {
    pub fn new(n: usize, alpha: f64, rate: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("block length must be at least 1"));
        }
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::invalid(format!("alpha must lie in (0, 0.5), got {alpha}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid(format!("rate must be positive, got {rate}")));
        }
        let size = count_for_rate(n, rate)?;
        Ok(BiasedSource {
            n,
            alpha,
            rate,
            size_bits: size.trailing_zeros(),
        })
    }

    /// `log2` of the alphabet size, `⌈nR⌉`.
    pub fn size_bits(&self) -> u32 {
        self.size_bits
    }

    pub fn first_probability(&self) -> f64 {
        (-(self.n as f64) * self.alpha * self.rate).exp2()
    }

    fn others(&self) -> f64 {
        (self.size_bits as f64).exp2() - 1.0
    }

    pub fn other_probability(&self) -> f64 {
        (1.0 - self.first_probability()) / self.others()
    }

    pub fn collision_probability(&self) -> f64 {
        let p1 = self.first_probability();
        p1 * p1 + (1.0 - p1) * (1.0 - p1) / self.others()
    }

    pub fn renyi2(&self) -> f64 {
        -self.collision_probability().log2()
    }

    pub fn entropy(&self) -> f64 {
        let p1 = self.first_probability();
        let rest = 1.0 - p1;
        let mut h = -p1 * p1.log2();
        if rest > 0.0 {
            h -= rest * (rest.log2() - self.others().log2());
        }
        h
    }

    pub fn renyi2_rate(&self) -> f64 {
        self.renyi2() / self.n as f64
    }

    pub fn entropy_rate(&self) -> f64 {
        self.entropy() / self.n as f64
    }

    pub fn to_distribution(&self, limits: &Limits) -> Result<Distribution> {
        let size = limits.check_enumeration("biased source alphabet 2^ceil(nR)", 2, self.size_bits as usize)?;
        let mut probs = vec![self.other_probability(); size];
        probs[0] = self.first_probability();
        Distribution::new(probs)
    }
}

/// The biased example distribution, materialized.
pub fn biased_example_source(n: usize, alpha: f64, rate: f64, limits: &Limits) -> Result<Distribution> {
    BiasedSource::new(n, alpha, rate)?.to_distribution(limits)
}

/// `Σ_a |p(a) - q(a)|`, in `[0, 2]`.
pub fn variational_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    l1_distance(p.probs(), q.probs())
}

pub(crate) fn l1_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

/// Distance of bin masses to the uniform law on the same number of bins.
fn distance_to_uniform(masses: &[f64]) -> f64 {
    let u = 1.0 / masses.len() as f64;
    masses.iter().map(|m| (m - u).abs()).sum()
}

/// Deterministic map `φ: Rⁿ → {0, …, K-1}` from source blocks to bins.
///
/// Sequences are indexed base `|R|`, first symbol most significant; bins
/// are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Extractor {
    n: usize,
    alphabet_size: usize,
    num_bins: usize,
    assignment: Vec<u32>,
    achieved_distance: f64,
}

#[derive(Clone, Copy, PartialEq)]
struct BinLoad {
    mass: f64,
    bin: u32,
}

impl Eq for BinLoad {}

impl Ord for BinLoad {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mass.total_cmp(&other.mass).then(self.bin.cmp(&other.bin))
    }
}

impl PartialOrd for BinLoad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds the extractor with `K = 2^{⌈n R_r⌉}` bins.
///
/// `R_r` should stay below `H(R)`; larger values are accepted and simply
/// give a large distance.
pub fn build_extractor(src: &RandomnessSource, n: usize, rate: f64, limits: &Limits) -> Result<Extractor> {
    let bins = count_for_rate(n, rate)?;
    let total = checked_pow(src.alphabet_size(), n);
    if bins > total {
        return Err(Error::invalid(format!(
            "K = {bins} bins exceeds the {total} source sequences"
        )));
    }
    Extractor::with_bins(src, n, bins as usize, limits)
}

impl Extractor {
    /// Greedy balancing: visit sequences by decreasing probability (ties in
    /// index order) and drop each into the currently lightest bin (ties to
    /// the lowest bin).
    pub fn with_bins(src: &RandomnessSource, n: usize, num_bins: usize, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("block length must be at least 1"));
        }
        let q = src.alphabet_size();
        let total = limits.check_enumeration("source sequences |R|^n", q, n)?;
        if num_bins == 0 || num_bins > total {
            return Err(Error::invalid(format!("bin count {num_bins} must lie in 1..={total}")));
        }
        if num_bins > u32::MAX as usize {
            return Err(Error::invalid("too many bins"));
        }

        let probs = sequence_probabilities(src, n, total);
        let mut order: Vec<u32> = (0..total as u32).collect();
        order.sort_by(|&a, &b| probs[b as usize].total_cmp(&probs[a as usize]).then(a.cmp(&b)));

        let mut heap: BinaryHeap<Reverse<BinLoad>> = (0..num_bins as u32)
            .map(|bin| Reverse(BinLoad { mass: 0.0, bin }))
            .collect();
        let mut assignment = vec![0u32; total];
        let mut masses = vec![0.0; num_bins];
        for s in order {
            let Reverse(mut load) = heap.pop().expect("at least one bin");
            load.mass += probs[s as usize];
            assignment[s as usize] = load.bin;
            masses[load.bin as usize] = load.mass;
            heap.push(Reverse(load));
        }
        Ok(Extractor {
            n,
            alphabet_size: q,
            num_bins,
            assignment,
            achieved_distance: distance_to_uniform(&masses),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    /// `V(p_{φ(Rⁿ)}, uniform_K)` for the source the extractor was built from.
    pub fn achieved_distance(&self) -> f64 {
        self.achieved_distance
    }

    /// Bin of every sequence, by sequence index.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// `φ(rⁿ)`.
    pub fn extract(&self, seq: &[usize]) -> Result<usize> {
        Ok(self.assignment[self.sequence_index(seq)?] as usize)
    }

    pub fn sequence_index(&self, seq: &[usize]) -> Result<usize> {
        if seq.len() != self.n {
            return Err(Error::invalid(format!(
                "sequence has length {}, extractor expects {}",
                seq.len(),
                self.n
            )));
        }
        seq.iter().try_fold(0usize, |acc, &s| {
            if s >= self.alphabet_size {
                Err(Error::invalid(format!(
                    "symbol {s} outside source alphabet of size {}",
                    self.alphabet_size
                )))
            } else {
                Ok(acc * self.alphabet_size + s)
            }
        })
    }

    /// Exact law of `φ(Rⁿ)` when `Rⁿ` is drawn i.i.d. from `src`.
    pub fn output_distribution(&self, src: &RandomnessSource) -> Result<Distribution> {
        if src.alphabet_size() != self.alphabet_size {
            return Err(Error::LengthMismatch {
                expected: self.alphabet_size,
                actual: src.alphabet_size(),
            });
        }
        let probs = sequence_probabilities(src, self.n, self.assignment.len());
        let mut masses = vec![0.0; self.num_bins];
        for (s, &bin) in self.assignment.iter().enumerate() {
            masses[bin as usize] += probs[s];
        }
        Distribution::new(masses)
    }

    /// Plain-text export: a header `n=<n> K=<K> distance=<v>` followed by one
    /// `<sequence digits> <bin>` line per source sequence in index order.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_text().map_err(std::io::Error::other)?.as_bytes())
    }

    pub fn to_text(&self) -> Result<String> {
        if self.alphabet_size > DIGITS.len() {
            return Err(Error::invalid(format!(
                "export supports alphabets up to {} symbols",
                DIGITS.len()
            )));
        }
        let mut out = String::with_capacity(self.assignment.len() * (self.n + 8) + 64);
        writeln!(
            out,
            "n={} K={} distance={}",
            self.n, self.num_bins, self.achieved_distance
        )
        .expect("write to string");
        let mut digits = vec![0u8; self.n];
        for (s, bin) in self.assignment.iter().enumerate() {
            let mut rest = s;
            for d in digits.iter_mut().rev() {
                *d = DIGITS[rest % self.alphabet_size];
                rest /= self.alphabet_size;
            }
            out.push_str(std::str::from_utf8(&digits).expect("ascii digits"));
            writeln!(out, " {bin}").expect("write to string");
        }
        Ok(out)
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let header = header.map_err(|e| parse_err(1, e))?;
        let (n, num_bins, achieved_distance) = parse_header(&header)?;

        let mut max_digit = 0usize;
        let mut raw: Vec<(usize, Vec<usize>, u32)> = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            let line = line.map_err(|e| parse_err(line_no, e))?;
            if line.is_empty() {
                continue;
            }
            let (seq, bin) = line
                .split_once(' ')
                .ok_or_else(|| parse_err(line_no, "expected `<sequence> <bin>`"))?;
            if seq.len() != n {
                return Err(parse_err(line_no, format!("sequence length {} != n = {n}", seq.len())));
            }
            let digits = seq
                .bytes()
                .map(|b| {
                    DIGITS
                        .iter()
                        .position(|&d| d == b)
                        .ok_or_else(|| parse_err(line_no, format!("bad digit {:?}", b as char)))
                })
                .collect::<Result<Vec<_>>>()?;
            max_digit = max_digit.max(digits.iter().copied().max().unwrap_or(0));
            let bin: u32 = bin
                .parse()
                .map_err(|e| parse_err(line_no, format!("bad bin {bin:?}: {e}")))?;
            if bin as usize >= num_bins {
                return Err(parse_err(line_no, format!("bin {bin} >= K = {num_bins}")));
            }
            raw.push((line_no, digits, bin));
        }
        let alphabet_size = max_digit + 1;
        let total = checked_pow(alphabet_size, n);
        if total != raw.len() as u128 {
            return Err(parse_err(
                0,
                format!(
                    "expected {total} sequences for alphabet {alphabet_size}, found {}",
                    raw.len()
                ),
            ));
        }
        let mut assignment = vec![u32::MAX; raw.len()];
        for (line_no, digits, bin) in raw {
            let idx = digits.iter().fold(0usize, |acc, &d| acc * alphabet_size + d);
            if assignment[idx] != u32::MAX {
                return Err(parse_err(line_no, format!("sequence {idx} listed twice")));
            }
            assignment[idx] = bin;
        }
        Ok(Extractor {
            n,
            alphabet_size,
            num_bins,
            assignment,
            achieved_distance,
        })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::read_from(text.as_bytes())
    }
}

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

fn parse_err(line: usize, msg: impl ToString) -> Error {
    Error::Parse {
        line,
        message: msg.to_string(),
    }
}

fn parse_header(header: &str) -> Result<(usize, usize, f64)> {
    let mut n = None;
    let mut k = None;
    let mut d = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("bad header field {field:?}")))?;
        let bad = |e: &dyn std::fmt::Display| parse_err(1, format!("bad {key}: {e}"));
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "K" => k = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "distance" => d = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            _ => return Err(parse_err(1, format!("unknown header field {key:?}"))),
        }
    }
    match (n, k, d) {
        (Some(n), Some(k), Some(d)) if n > 0 && k > 0 => Ok((n, k, d)),
        _ => Err(parse_err(1, "header must be `n=<n> K=<K> distance=<v>`")),
    }
}

/// Probabilities of all `|R|^n` sequences in index order.
fn sequence_probabilities(src: &RandomnessSource, n: usize, total: usize) -> Vec<f64> {
    let q = src.alphabet_size();
    let mut counts = vec![0u32; q];
    let mut digits = vec![0usize; n];
    counts[0] = n as u32;
    let mut probs = Vec::with_capacity(total);
    for s in 0..total {
        if s > 0 {
            // Increment the base-q odometer, least significant digit last.
            let mut pos = n - 1;
            loop {
                counts[digits[pos]] -= 1;
                digits[pos] += 1;
                if digits[pos] == q {
                    digits[pos] = 0;
                    counts[0] += 1;
                    pos -= 1;
                } else {
                    counts[digits[pos]] += 1;
                    break;
                }
            }
        }
        probs.push(src.type_probability(&counts));
    }
    probs
}
