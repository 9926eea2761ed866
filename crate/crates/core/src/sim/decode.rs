use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sim::code::{CodewordIndex, Symbol, WiretapCode};

/// Legitimate receiver's decoding rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decoder {
    /// Maximum likelihood over all codewords, ties to the smallest label.
    MaximumLikelihood,
    /// Two-stage unique joint typicality with per-cell tolerance `epsilon`.
    Typicality { epsilon: f64 },
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoder::MaximumLikelihood => write!(f, "ml"),
            Decoder::Typicality { epsilon } => write!(f, "typ:{epsilon}"),
        }
    }
}

impl FromStr for Decoder {
    type Err = Error;

    /// Parses `ml` or `typ:<epsilon>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "ml" {
            return Ok(Decoder::MaximumLikelihood);
        }
        let eps = s
            .strip_prefix("typ:")
            .ok_or_else(|| Error::invalid(format!("unknown decoder {s:?}, expected ml or typ:EPS")))?;
        let epsilon: f64 = eps
            .parse()
            .map_err(|e| Error::invalid(format!("bad typicality epsilon {eps:?}: {e}")))?;
        Decoder::typicality(epsilon)
    }
}

impl Decoder {
    pub fn typicality(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("typicality epsilon must be > 0, got {epsilon}")));
        }
        Ok(Decoder::Typicality { epsilon })
    }
}

/// A decoder bound to one code, with its lookup tables precomputed.
pub struct PreparedDecoder<'a> {
    code: &'a WiretapCode,
    rule: Rule,
}

enum Rule {
    MaximumLikelihood {
        /// `ln W_{Y|X}(y|x)`, x-major.
        log_w: Vec<f64>,
    },
    Typicality {
        epsilon: f64,
        /// `p_{UY}`, u-major.
        p_uy: Vec<f64>,
        /// `p_{UXY}`, (u, x, y) row-major.
        p_uxy: Vec<f64>,
    },
}

impl<'a> PreparedDecoder<'a> {
    pub fn new(code: &'a WiretapCode, decoder: Decoder) -> Result<Self> {
        let ch = code.channel();
        let (nx, ny) = (ch.nx(), ch.ny());
        let w = ch.main();
        let rule = match decoder {
            Decoder::MaximumLikelihood => Rule::MaximumLikelihood {
                log_w: (0..nx).flat_map(|x| (0..ny).map(move |y| w.get(x, y).ln())).collect(),
            },
            Decoder::Typicality { epsilon } => {
                if epsilon.is_nan() || epsilon <= 0.0 {
                    return Err(Error::invalid("typicality epsilon must be > 0"));
                }
                let nu = code.p_u().len();
                let mut p_uy = vec![0.0; nu * ny];
                let mut p_uxy = vec![0.0; nu * nx * ny];
                for u in 0..nu {
                    let pu = code.p_u().get(u);
                    for x in 0..nx {
                        let pux = pu * code.p_x_given_u()[u].get(x);
                        for y in 0..ny {
                            let p = pux * w.get(x, y);
                            p_uxy[(u * nx + x) * ny + y] = p;
                            p_uy[u * ny + y] += p;
                        }
                    }
                }
                Rule::Typicality { epsilon, p_uy, p_uxy }
            }
        };
        Ok(PreparedDecoder { code, rule })
    }

    /// Decoded label, or `None` for an erasure.
    pub fn decode(&self, y: &[Symbol]) -> Result<Option<CodewordIndex>> {
        let n = self.code.n();
        if y.len() != n {
            return Err(Error::invalid(format!(
                "received word has length {}, expected {n}",
                y.len()
            )));
        }
        if let Some(&s) = y.iter().find(|&&s| s as usize >= self.code.channel().ny()) {
            return Err(Error::invalid(format!(
                "output symbol {s} outside the main channel alphabet"
            )));
        }
        Ok(match &self.rule {
            Rule::MaximumLikelihood { log_w } => Some(self.decode_ml(log_w, y)),
            Rule::Typicality { epsilon, p_uy, p_uxy } => self.decode_typical(*epsilon, p_uy, p_uxy, y),
        })
    }

    fn decode_ml(&self, log_w: &[f64], y: &[Symbol]) -> CodewordIndex {
        let ch = self.code.channel();
        let (nx, ny) = (ch.nx(), ch.ny());
        let mut counts = vec![0u32; nx * ny];
        let mut best: Option<(f64, CodewordIndex)> = None;
        for idx in self.code.indices() {
            counts.iter_mut().for_each(|c| *c = 0);
            for (&x, &b) in self.code.codeword(idx).iter().zip(y) {
                counts[x as usize * ny + b as usize] += 1;
            }
            // Equal joint types give bit-identical scores, so exact ties
            // resolve to the first label.
            let score: f64 = counts
                .iter()
                .zip(log_w)
                .filter(|(&c, _)| c > 0)
                .map(|(&c, &lw)| c as f64 * lw)
                .sum();
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, idx));
            }
        }
        best.map(|(_, idx)| idx).expect("code has at least one codeword")
    }

    fn decode_typical(&self, epsilon: f64, p_uy: &[f64], p_uxy: &[f64], y: &[Symbol]) -> Option<CodewordIndex> {
        let code = self.code;
        let ch = code.channel();
        let (nx, ny) = (ch.nx(), ch.ny());
        let p = code.params();
        let n = code.n();

        let mut counts = vec![0u32; p_uy.len()];
        let mut cloud = None;
        for i in 0..p.m0 {
            counts.iter_mut().for_each(|c| *c = 0);
            for (&u, &b) in code.cloud(i).iter().zip(y) {
                counts[u as usize * ny + b as usize] += 1;
            }
            if is_typical(&counts, p_uy, n, epsilon) {
                if cloud.is_some() {
                    return None;
                }
                cloud = Some(i);
            }
        }
        let i = cloud?;

        let u_word = code.cloud(i);
        let mut counts = vec![0u32; p_uxy.len()];
        let mut found = None;
        for j in 0..p.m {
            for k in 0..p.k_r {
                let idx = CodewordIndex::new(i, j, k);
                counts.iter_mut().for_each(|c| *c = 0);
                for ((&u, &x), &b) in u_word.iter().zip(code.codeword(idx)).zip(y) {
                    counts[(u as usize * nx + x as usize) * ny + b as usize] += 1;
                }
                if is_typical(&counts, p_uxy, n, epsilon) {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(idx);
                }
            }
        }
        found
    }
}

/// Strong typicality: every cell within `epsilon` of its probability, and
/// no occurrences of zero-probability cells.
fn is_typical(counts: &[u32], probs: &[f64], n: usize, epsilon: f64) -> bool {
    counts.iter().zip(probs).all(|(&c, &p)| {
        if p == 0.0 {
            c == 0
        } else {
            (c as f64 / n as f64 - p).abs() <= epsilon
        }
    })
}

/// Maximum-likelihood decision for `y`.
pub fn decode_ml(code: &WiretapCode, y: &[Symbol]) -> Result<CodewordIndex> {
    Ok(PreparedDecoder::new(code, Decoder::MaximumLikelihood)?
        .decode(y)?
        .expect("ML never erases"))
}

/// Two-stage typicality decision for `y`; `None` is the erasure symbol.
pub fn decode_typicality(code: &WiretapCode, y: &[Symbol], epsilon: f64) -> Result<Option<CodewordIndex>> {
    PreparedDecoder::new(code, Decoder::typicality(epsilon)?)?.decode(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{Distribution, Kernel, WiretapChannel};
    use crate::limits::Limits;
    use crate::sim::code::{build_random_code, CodeParams};

    fn noiseless_code(m0: usize, m: usize, k: usize, n: usize, seed: u64) -> WiretapCode {
        let ch = WiretapChannel::from_marginals(&Kernel::identity(2).unwrap(), &Kernel::bsc(0.3).unwrap()).unwrap();
        let p_u = Distribution::uniform(1).unwrap();
        let p_x = vec![Distribution::uniform(2).unwrap()];
        let params = CodeParams::from_counts(n, m0, m, k, seed).unwrap();
        build_random_code(&ch, &p_u, &p_x, &params, &Limits::default()).unwrap()
    }

    #[test]
    fn decoder_parsing() {
        assert_eq!("ml".parse::<Decoder>().unwrap(), Decoder::MaximumLikelihood);
        assert_eq!(
            "typ:0.2".parse::<Decoder>().unwrap(),
            Decoder::Typicality { epsilon: 0.2 }
        );
        assert!("typ:0".parse::<Decoder>().is_err());
        assert!("typ:x".parse::<Decoder>().is_err());
        assert!("map".parse::<Decoder>().is_err());
        assert_eq!(Decoder::Typicality { epsilon: 0.25 }.to_string(), "typ:0.25");
    }

    #[test]
    fn ml_inverts_noiseless_channel() {
        let code = noiseless_code(1, 4, 4, 12, 1);
        let words: Vec<_> = code.indices().map(|i| code.codeword(i).to_vec()).collect();
        for idx in code.indices() {
            let y = code.codeword(idx);
            let distinct = words.iter().filter(|w| w.as_slice() == y).count() == 1;
            if distinct {
                assert_eq!(decode_ml(&code, y).unwrap(), idx);
            }
        }
    }

    #[test]
    fn ml_single_codeword() {
        let code = noiseless_code(1, 1, 1, 5, 2);
        for y in [[0u16, 0, 0, 0, 0], [1, 0, 1, 1, 0]] {
            assert_eq!(decode_ml(&code, &y).unwrap(), CodewordIndex::new(0, 0, 0));
        }
        assert!(decode_ml(&code, &[0, 0]).is_err());
        assert!(decode_ml(&code, &[0, 0, 0, 0, 2]).is_err());
    }

    #[test]
    fn typicality_recovers_unique_codeword() {
        // With a noiseless main channel, (x, y) is typical only when y = x
        // and x itself is typical for p_X.
        let code = noiseless_code(1, 2, 2, 8, 9);
        let eps = 0.2;
        for idx in code.indices() {
            let x = code.codeword(idx);
            let ones = x.iter().filter(|&&s| s == 1).count() as f64 / 8.0;
            let copies = code.indices().filter(|&o| code.codeword(o) == x).count();
            let got = decode_typicality(&code, x, eps).unwrap();
            if (ones - 0.5).abs() <= eps && copies == 1 {
                assert_eq!(got, Some(idx));
            } else {
                assert_eq!(got, None);
            }
        }
        assert!(decode_typicality(&code, code.codeword(CodewordIndex::new(0, 0, 0)), 0.0).is_err());
    }

    #[test]
    fn typicality_erases_on_ambiguous_clouds() {
        // Two clouds drawn from a point-mass p_U are identical, so every
        // output is typical with both.
        let ch = WiretapChannel::binary_symmetric_pair(0.1, 0.3).unwrap();
        let p_u = Distribution::uniform(1).unwrap();
        let p_x = vec![Distribution::uniform(2).unwrap()];
        let params = CodeParams::from_counts(6, 2, 1, 1, 4).unwrap();
        let code = build_random_code(&ch, &p_u, &p_x, &params, &Limits::default()).unwrap();
        assert_eq!(code.cloud(0), code.cloud(1));
        assert_eq!(decode_typicality(&code, &[0, 1, 0, 1, 1, 0], 0.5).unwrap(), None);
    }
}
