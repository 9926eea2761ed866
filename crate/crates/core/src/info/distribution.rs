use crate::error::{Error, Result};

/// Absolute tolerance on the total mass accepted by [`Distribution::new`].
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A probability vector over the alphabet `0..len()`.
///
/// Entries are non-negative and sum to one; inputs within
/// [`MASS_TOLERANCE`] of unit mass are renormalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let total = validated_total(&probs)?;
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!(
                "probabilities sum to {total}, expected 1 within {MASS_TOLERANCE}"
            )));
        }
        Ok(Self::renormalized(probs, total))
    }

    /// Normalizes arbitrary non-negative weights with positive total.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total = validated_total(&weights)?;
        Ok(Self::renormalized(weights, total))
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("distribution over an empty alphabet"));
        }
        Ok(Distribution {
            probs: vec![1.0 / size as f64; size],
        })
    }

    pub fn point_mass(size: usize, symbol: usize) -> Result<Self> {
        if symbol >= size {
            return Err(Error::invalid(format!(
                "point mass at {symbol} outside alphabet of size {size}"
            )));
        }
        let mut probs = vec![0.0; size];
        probs[symbol] = 1.0;
        Ok(Distribution { probs })
    }

    fn renormalized(mut probs: Vec<f64>, total: f64) -> Self {
        if total != 1.0 {
            probs.iter_mut().for_each(|p| *p /= total);
        }
        Distribution { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, symbol: usize) -> f64 {
        self.probs[symbol]
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }

    /// Σ p(a)².
    pub fn collision_probability(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }

    /// Rényi entropy of order two in bits, `-log2 Σ p(a)²`.
    pub fn renyi2(&self) -> f64 {
        (-self.collision_probability().log2()).max(0.0)
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.len() as f64;
        self.probs.iter().all(|p| (p - u).abs() <= tol)
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }
}

fn validated_total(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::invalid("distribution over an empty alphabet"));
    }
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(Error::invalid(format!("probability {i} is {p}")));
    }
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("weights have zero total mass"));
    }
    Ok(total)
}

/// Entropy in bits of a (possibly unnormalized) mass vector, with 0·log 0 = 0.
pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    let h: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
    h.max(0.0)
}

pub fn entropy(p: &Distribution) -> f64 {
    p.entropy()
}

pub fn renyi2(p: &Distribution) -> f64 {
    p.renyi2()
}

/// Binary entropy function h(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of(&[p, 1.0 - p])
}
