use crate::error::{Error, Result};
use crate::info::{binary_entropy, Distribution, Kernel};
use crate::limits::Limits;
use crate::sim::code::{CodewordIndex, Symbol, WiretapCode};

/// Exact secrecy metrics of one code, from a single enumeration of `Zⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    /// `I(M;Zⁿ)` in bits, secret message `M = j` uniform.
    pub leakage_bits: f64,
    /// `V(p_{MZⁿ}, p_M p_{Zⁿ})`.
    pub vd: f64,
    /// `I(M;Zⁿ|M0)`, the cloud-conditioned leakage.
    pub leakage_given_cloud_bits: f64,
    /// `V(p_{M M0 Zⁿ}, p_M p_{M0 Zⁿ})`.
    pub vd_joint: f64,
}

/// Output law `Wⁿ(·|word)` over all `|B|^n` sequences, index base `|B|`
/// with the first symbol most significant.
pub fn product_output_law(word: &[Symbol], kernel: &Kernel) -> Vec<f64> {
    let nb = kernel.cols();
    let mut law = vec![1.0];
    for &x in word {
        let row = kernel.row(x as usize);
        let mut next = Vec::with_capacity(law.len() * nb);
        for &p in &law {
            next.extend(row.iter().map(|w| p * w));
        }
        law = next;
    }
    law
}

/// Computes `p(zⁿ|i, j) = Σ_k p_{U_r}(k) Wⁿ(zⁿ|xⁿ(i,j,k))` for every `zⁿ` and
/// derives the leakage and variational distances with uniform `(M0, M)`.
pub fn exact_leakage(code: &WiretapCode, p_ur: &Distribution, limits: &Limits) -> Result<LeakageReport> {
    let p = code.params();
    if p_ur.len() != p.k_r {
        return Err(Error::LengthMismatch {
            expected: p.k_r,
            actual: p_ur.len(),
        });
    }
    let eve = code.channel().eve();
    let size = limits.check_enumeration("eavesdropper outputs |Z|^n", eve.cols(), code.n())?;

    let cloud_weight = 1.0 / p.m0 as f64;
    let mut given_message = vec![vec![0.0; size]; p.m];
    let mut leakage_given_cloud = 0.0;
    let mut vd_joint = 0.0;
    for i in 0..p.m0 {
        let per_message: Vec<Vec<f64>> = (0..p.m).map(|j| mixture(code, p_ur, eve, i, j, size)).collect();
        let cloud_law = average(&per_message);
        let (leak, vd) = dependence(&per_message, &cloud_law);
        leakage_given_cloud += cloud_weight * leak;
        vd_joint += cloud_weight * vd;
        for (acc, law) in given_message.iter_mut().zip(&per_message) {
            acc.iter_mut().zip(law).for_each(|(a, q)| *a += cloud_weight * q);
        }
    }
    let output_law = average(&given_message);
    let (leakage_bits, vd) = dependence(&given_message, &output_law);
    Ok(LeakageReport {
        leakage_bits,
        vd,
        leakage_given_cloud_bits: leakage_given_cloud,
        vd_joint,
    })
}

fn mixture(code: &WiretapCode, p_ur: &Distribution, eve: &Kernel, i: usize, j: usize, size: usize) -> Vec<f64> {
    let mut law = vec![0.0; size];
    for (k, &pk) in p_ur.probs().iter().enumerate() {
        if pk == 0.0 {
            continue;
        }
        let word = code.codeword(CodewordIndex::new(i, j, k));
        law.iter_mut()
            .zip(product_output_law(word, eve))
            .for_each(|(a, w)| *a += pk * w);
    }
    law
}

fn average(laws: &[Vec<f64>]) -> Vec<f64> {
    let w = 1.0 / laws.len() as f64;
    let mut out = vec![0.0; laws[0].len()];
    for law in laws {
        out.iter_mut().zip(law).for_each(|(a, q)| *a += w * q);
    }
    out
}

/// `(I(M;Z), Σ_{m,z} |p(m,z) - p(m)p(z)|)` for uniform `M` with conditional
/// laws `given` and output marginal `marginal`.
fn dependence(given: &[Vec<f64>], marginal: &[f64]) -> (f64, f64) {
    let w = 1.0 / given.len() as f64;
    let mut info = 0.0;
    let mut vd = 0.0;
    for law in given {
        for (&q, &r) in law.iter().zip(marginal) {
            if q > 0.0 {
                info += w * q * (q / r).log2();
            }
            vd += w * (q - r).abs();
        }
    }
    (info.max(0.0), vd)
}

/// Leakage bound from the variational distance `vd` for `m` equiprobable
/// messages: `vd·log2 m + h(vd)` when `vd <= 1/2`, otherwise `log2 m`.
pub fn leakage_bound_from_vd(vd: f64, m: usize) -> f64 {
    let log_m = (m as f64).log2();
    if vd <= 0.5 {
        vd.max(0.0) * log_m + binary_entropy(vd.max(0.0))
    } else {
        log_m
    }
}
