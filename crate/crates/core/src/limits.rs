use crate::error::{Error, Result};

/// Default cap on exhaustively enumerated sequence spaces (2^20).
pub const DEFAULT_MAX_ENUMERATION: u64 = 1 << 20;
/// Default cap on the number of stored codebook symbols (2^24).
pub const DEFAULT_MAX_CODE_SYMBOLS: u64 = 1 << 24;

/// Resource guards for exact enumeration and codebook storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest |A|^n that may be enumerated (output sequences, source sequences).
    pub max_enumeration: u64,
    /// Largest M0 * M * K_r * n that a codebook may store.
    pub max_code_symbols: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enumeration: DEFAULT_MAX_ENUMERATION,
            max_code_symbols: DEFAULT_MAX_CODE_SYMBOLS,
        }
    }
}

impl Limits {
    /// Returns `alphabet^n` if it fits under `max_enumeration`.
    pub fn check_enumeration(&self, quantity: &'static str, alphabet: usize, n: usize) -> Result<usize> {
        let requested = checked_pow(alphabet, n);
        check(quantity, requested, self.max_enumeration)
    }

    pub fn check_code_symbols(&self, requested: u128) -> Result<usize> {
        check("codebook symbols M0*M*K_r*n", requested, self.max_code_symbols)
    }
}

fn check(quantity: &'static str, requested: u128, limit: u64) -> Result<usize> {
    if requested > limit as u128 {
        return Err(Error::ResourceLimit {
            quantity,
            requested,
            limit,
        });
    }
    Ok(requested as usize)
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// `2^ceil(n * rate)`, the codebook or bin count for a rate in bits per use.
///
/// The product is rounded down by 1e-9 before taking the ceiling so that
/// products such as `10 * 0.3` count as 3 and not 4.
pub fn count_for_rate(n: usize, rate: f64) -> Result<u128> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::invalid(format!("rate must be finite and >= 0, got {rate}")));
    }
    let bits = ((n as f64) * rate - 1e-9).ceil().max(0.0);
    if bits > 120.0 {
        return Err(Error::ResourceLimit {
            quantity: "2^ceil(n*rate)",
            requested: u128::MAX,
            limit: u64::MAX,
        });
    }
    Ok(1u128 << bits as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_counts_round_up_but_ignore_float_noise() {
        assert_eq!(count_for_rate(10, 0.3).unwrap(), 8);
        assert_eq!(count_for_rate(4, 0.3).unwrap(), 4);
        assert_eq!(count_for_rate(8, 0.25).unwrap(), 4);
        assert_eq!(count_for_rate(4, 0.0).unwrap(), 1);
        assert_eq!(count_for_rate(10, 0.1).unwrap(), 2);
        assert!(count_for_rate(4, -0.1).is_err());
    }

    #[test]
    fn enumeration_guard() {
        let limits = Limits::default();
        assert_eq!(limits.check_enumeration("z", 2, 20).unwrap(), 1 << 20);
        let err = limits.check_enumeration("z", 2, 21).unwrap_err();
        assert!(err.is_resource_limit());
        assert!(limits.check_enumeration("z", 1000, 1000).is_err());
    }
}
