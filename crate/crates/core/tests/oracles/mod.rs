//! Reference computations written independently of the library code paths.
//! Shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::HashSet;

use wrl_core::sim::{CodewordIndex, WiretapCode};
use wrl_core::{Distribution, Kernel, WiretapChannel};

pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

fn entropy_of(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights.into_iter().filter(|&w| w > 0.0).map(|w| -w * w.log2()).sum()
}

/// `I(X;B)` in its divergence form `Σ p(x) W(b|x) log(W(b|x) / q(b))`.
pub fn mutual_information_kl(input: &[f64], kernel: &Kernel) -> f64 {
    let cols = kernel.cols();
    let mut q = vec![0.0; cols];
    for (x, &px) in input.iter().enumerate() {
        for (qb, w) in q.iter_mut().zip(kernel.row(x)) {
            *qb += px * w;
        }
    }
    let mut acc = 0.0;
    for (x, &px) in input.iter().enumerate() {
        for (&w, &qb) in kernel.row(x).iter().zip(&q) {
            if px > 0.0 && w > 0.0 {
                acc += px * w * (w / qb).log2();
            }
        }
    }
    acc.max(0.0)
}

/// Secrecy metrics of a code obtained by tabulating `p(i, j, zⁿ)` one output
/// sequence at a time and reading everything off joint entropies.
#[derive(Debug, Clone, Copy)]
pub struct BruteLeakage {
    pub leakage_bits: f64,
    pub vd: f64,
    pub leakage_given_cloud_bits: f64,
    pub vd_joint: f64,
}

pub fn brute_force_leakage(code: &WiretapCode, p_ur: &Distribution) -> BruteLeakage {
    let p = *code.params();
    let eve = code.channel().eve();
    let nz = eve.cols();
    let n = code.n();
    let size = nz.pow(n as u32);
    let weight = 1.0 / (p.m0 * p.m) as f64;

    // joint[(i * m + j) * size + z]
    let mut joint = vec![0.0; p.m0 * p.m * size];
    let mut z = vec![0usize; n];
    for zi in 0..size {
        let mut rest = zi;
        for t in (0..n).rev() {
            z[t] = rest % nz;
            rest /= nz;
        }
        for i in 0..p.m0 {
            for j in 0..p.m {
                let mut acc = 0.0;
                for k in 0..p.k_r {
                    let word = code.codeword(CodewordIndex::new(i, j, k));
                    let mut like = 1.0;
                    for t in 0..n {
                        like *= eve.get(word[t] as usize, z[t]);
                    }
                    acc += p_ur.get(k) * like;
                }
                joint[(i * p.m + j) * size + zi] = weight * acc;
            }
        }
    }

    let p_mz = |j: usize, zi: usize| (0..p.m0).map(|i| joint[(i * p.m + j) * size + zi]).sum::<f64>();
    let p_z: Vec<f64> = (0..size).map(|zi| (0..p.m).map(|j| p_mz(j, zi)).sum()).collect();
    let p_iz = |i: usize, zi: usize| (0..p.m).map(|j| joint[(i * p.m + j) * size + zi]).sum::<f64>();

    let h_m = (p.m as f64).log2();
    let h_z = entropy_of(p_z.iter().copied());
    let h_mz = entropy_of(
        (0..p.m)
            .flat_map(|j| (0..size).map(move |zi| (j, zi)))
            .map(|(j, zi)| p_mz(j, zi)),
    );
    let leakage_bits = h_m + h_z - h_mz;

    let mut vd = 0.0;
    for j in 0..p.m {
        for (zi, pz) in p_z.iter().enumerate() {
            vd += (p_mz(j, zi) - pz / p.m as f64).abs();
        }
    }

    // I(M;Z|M0) = H(M0,M) + H(M0,Z) - H(M0,M,Z) - H(M0)
    let h_m0 = (p.m0 as f64).log2();
    let h_m0_m = h_m0 + h_m;
    let h_m0_z = entropy_of(
        (0..p.m0)
            .flat_map(|i| (0..size).map(move |zi| (i, zi)))
            .map(|(i, zi)| p_iz(i, zi)),
    );
    let h_all = entropy_of(joint.iter().copied());
    let leakage_given_cloud_bits = h_m0_m + h_m0_z - h_all - h_m0;

    let mut vd_joint = 0.0;
    for i in 0..p.m0 {
        for j in 0..p.m {
            for zi in 0..size {
                vd_joint += (joint[(i * p.m + j) * size + zi] - p_iz(i, zi) / p.m as f64).abs();
            }
        }
    }

    BruteLeakage {
        leakage_bits,
        vd,
        leakage_given_cloud_bits,
        vd_joint,
    }
}

/// Rate-limited secrecy capacity of a binary-input channel by direct search
/// over `λ g(p₀) + (1-λ) g(p₁)` subject to `λ c(p₀) + (1-λ) c(p₁) <= budget`,
/// with `λ, p₀, p₁` on a uniform grid of `res + 1` points.
pub fn capacity_grid_search(ch: &WiretapChannel, budget: f64, res: usize) -> f64 {
    assert_eq!(ch.nx(), 2, "grid search is written for binary inputs");
    let mut cost = Vec::with_capacity(res + 1);
    let mut gain = Vec::with_capacity(res + 1);
    for a in 0..=res {
        let p = a as f64 / res as f64;
        let input = [1.0 - p, p];
        let c = mutual_information_kl(&input, ch.eve());
        cost.push(c);
        gain.push(mutual_information_kl(&input, ch.main()) - c);
    }
    let mut best = f64::NEG_INFINITY;
    for l in 0..=res {
        let lambda = l as f64 / res as f64;
        for a in 0..=res {
            let (ca, ga) = (lambda * cost[a], lambda * gain[a]);
            if ca > budget + 1e-12 {
                continue;
            }
            for b in 0..=res {
                let c = ca + (1.0 - lambda) * cost[b];
                if c <= budget + 1e-12 {
                    let g = ga + (1.0 - lambda) * gain[b];
                    if g > best {
                        best = g;
                    }
                }
            }
        }
    }
    best
}

/// Smallest `Σ_b |mass_b - 1/K|` over every assignment of the `2^n` binary
/// sequences to `K` bins, searched from the upper bound `incumbent`.
///
/// Sequences of one type are interchangeable, so the search distributes
/// type counts over bins, most probable types first, keeps bin masses
/// sorted, and drops states whose excess mass already reaches the bound.
pub fn optimal_binning_distance(p_one: f64, n: usize, k: usize, incumbent: f64) -> f64 {
    const SCALE: f64 = 1e12;
    let target = 1.0 / k as f64;
    let mut types: Vec<(f64, usize)> = (0..=n)
        .map(|t| {
            (
                p_one.powi(t as i32) * (1.0 - p_one).powi((n - t) as i32),
                binomial(n, t),
            )
        })
        .filter(|&(q, _)| q > 0.0)
        .collect();
    types.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Each of the K most probable sequences sits in some bin on its own or
    // with others, so their individual overshoots are unavoidable.
    let top: f64 = types
        .iter()
        .flat_map(|&(q, c)| std::iter::repeat_n(q, c))
        .take(k)
        .map(|q| (q - target).max(0.0))
        .sum();
    if incumbent <= 2.0 * top + 1e-12 {
        return incumbent;
    }

    let mut best = incumbent + 1e-12;
    let mut states: HashSet<Vec<i64>> = HashSet::from([vec![0; k]]);
    for &(q, count) in &types {
        let mut next = HashSet::new();
        let mut split = vec![0usize; k];
        for key in &states {
            let masses: Vec<f64> = key.iter().map(|&x| x as f64 / SCALE).collect();
            for_each_composition(count, &mut split, 0, &mut |split| {
                let m: Vec<f64> = masses.iter().zip(split).map(|(a, &c)| a + q * c as f64).collect();
                let excess: f64 = m.iter().map(|&x| (x - target).max(0.0)).sum();
                if 2.0 * excess >= best {
                    return;
                }
                let mut key: Vec<i64> = m.iter().map(|x| (x * SCALE).round() as i64).collect();
                key.sort_unstable();
                next.insert(key);
            });
            assert!(
                next.len() < 4_000_000,
                "search space too large for p={p_one} n={n} K={k}"
            );
        }
        states = next;
    }
    for key in &states {
        let d: f64 = key.iter().map(|&x| (x as f64 / SCALE - target).abs()).sum();
        best = best.min(d);
    }
    best.min(incumbent)
}

fn for_each_composition(total: usize, parts: &mut [usize], at: usize, f: &mut impl FnMut(&[usize])) {
    if at + 1 == parts.len() {
        parts[at] = total;
        f(parts);
        return;
    }
    for c in 0..=total {
        parts[at] = c;
        for_each_composition(total - c, parts, at + 1, f);
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Bin masses of an assignment recomputed sequence by sequence from the
/// per-symbol law, with sequence digits most significant first.
pub fn bin_masses(assignment: &[u32], probs: &[f64], n: usize, k: usize) -> Vec<f64> {
    let a = probs.len();
    let mut masses = vec![0.0; k];
    for (idx, &bin) in assignment.iter().enumerate() {
        let mut rest = idx;
        let mut p = 1.0;
        for _ in 0..n {
            p *= probs[rest % a];
            rest /= a;
        }
        masses[bin as usize] += p;
    }
    masses
}
