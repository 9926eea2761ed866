use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::info::channel::{JointDistribution, Kernel, WiretapChannel};
use crate::info::distribution::{entropy_of, Distribution};

/// Default residual tolerance for [`is_degraded`].
pub const DEFAULT_DEGRADED_TOL: f64 = 1e-9;

/// Largest number of points a simplex grid may contain.
pub const MAX_GRID_POINTS: u128 = 1 << 22;

/// Mutual information `I(A;B) = H(A) + H(B) - H(A,B)` in bits.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    let i = entropy_of(&joint.marginal_a()) + entropy_of(&joint.marginal_b()) - entropy_of(joint.table());
    snap_nonnegative(i)
}

/// `I(X;B)` for input law `input` through `kernel`.
pub fn channel_mutual_information(input: &Distribution, kernel: &Kernel) -> Result<f64> {
    Ok(mutual_information(&JointDistribution::from_input_and_kernel(
        input, kernel,
    )?))
}

/// `I(A;B|U) = Σ_u p_U(u) I(A;B|U=u)`.
pub fn conditional_mutual_information(p_u: &Distribution, joints: &[JointDistribution]) -> Result<f64> {
    if joints.len() != p_u.len() {
        return Err(Error::LengthMismatch {
            expected: p_u.len(),
            actual: joints.len(),
        });
    }
    Ok(p_u
        .probs()
        .iter()
        .zip(joints)
        .map(|(w, j)| w * mutual_information(j))
        .sum())
}

/// `(I(X;Y), I(X;Z))` for a given input law.
pub fn input_informations(ch: &WiretapChannel, input: &Distribution) -> Result<(f64, f64)> {
    Ok((
        channel_mutual_information(input, ch.main())?,
        channel_mutual_information(input, ch.eve())?,
    ))
}

// Information quantities that differ from zero only by rounding are reported as zero.
fn snap_nonnegative(v: f64) -> f64 {
    if v < 1e-15 {
        0.0
    } else {
        v
    }
}

/// All distributions `c / resolution` with `c` a composition of
/// `resolution` into `size` non-negative parts, in lexicographic order of `c`.
pub fn simplex_grid(size: usize, resolution: usize) -> Result<Vec<Distribution>> {
    if size == 0 {
        return Err(Error::invalid("simplex grid over an empty alphabet"));
    }
    if resolution < 1 {
        return Err(Error::invalid("grid resolution must be positive"));
    }
    let count = binomial((resolution + size - 1) as u128, (size - 1) as u128);
    if count > MAX_GRID_POINTS {
        return Err(Error::ResourceLimit {
            quantity: "simplex grid points",
            requested: count,
            limit: MAX_GRID_POINTS as u64,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut parts = vec![0usize; size];
    compositions(&mut parts, 0, resolution, &mut |c| {
        let probs = c.iter().map(|&k| k as f64 / resolution as f64).collect();
        out.push(Distribution::from_weights(probs).expect("composition has positive mass"));
    });
    Ok(out)
}

fn compositions(parts: &mut [usize], pos: usize, remaining: usize, f: &mut impl FnMut(&[usize])) {
    if pos + 1 == parts.len() {
        parts[pos] = remaining;
        f(parts);
        return;
    }
    for k in 0..=remaining {
        parts[pos] = k;
        compositions(parts, pos + 1, remaining - k, f);
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Outcome of the degradedness test.
#[derive(Debug, Clone, PartialEq)]
pub struct Degradedness {
    /// Max entrywise residual `|W_{Y|X} Q - W_{Z|X}|` of the best stochastic `Q`.
    pub residual: f64,
    pub tolerance: f64,
    /// The row-stochastic `Q` attaining `residual`.
    pub candidate: Kernel,
}

impl Degradedness {
    pub fn is_degraded(&self) -> bool {
        self.residual <= self.tolerance
    }

    /// `Q` with `W_{Z|X} = W_{Y|X} Q`, when the channel is degraded.
    pub fn witness(&self) -> Option<&Kernel> {
        self.is_degraded().then_some(&self.candidate)
    }
}

/// Decides whether `W_{Z|X}` is a stochastic post-processing of `W_{Y|X}`.
///
/// Solves `min t` subject to `|Σ_y W(y|x) Q(z|y) - V(z|x)| <= t` over
/// row-stochastic `Q`, then recomputes the residual from the projected
/// solution so the verdict does not depend on solver tolerances.
pub fn is_degraded(ch: &WiretapChannel, tol: f64) -> Result<Degradedness> {
    let (nx, ny, nz) = (ch.nx(), ch.ny(), ch.nz());
    let (main, eve) = (ch.main(), ch.eve());

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let q: Vec<_> = (0..ny * nz).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    for y in 0..ny {
        let row: Vec<_> = (0..nz).map(|z| (q[y * nz + z], 1.0)).collect();
        lp.add_constraint(row.as_slice(), ComparisonOp::Eq, 1.0);
    }
    for x in 0..nx {
        for z in 0..nz {
            let mut upper: Vec<_> = (0..ny).map(|y| (q[y * nz + z], main.get(x, y))).collect();
            let mut lower = upper.clone();
            upper.push((t, -1.0));
            lower.push((t, 1.0));
            lp.add_constraint(upper.as_slice(), ComparisonOp::Le, eve.get(x, z));
            lp.add_constraint(lower.as_slice(), ComparisonOp::Ge, eve.get(x, z));
        }
    }
    let solution = lp.solve().map_err(|e| Error::Solver(e.to_string()))?;

    let rows = (0..ny)
        .map(|y| {
            let row: Vec<f64> = (0..nz).map(|z| solution[q[y * nz + z]].max(0.0)).collect();
            Distribution::from_weights(row).map(|d| d.probs().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let candidate = Kernel::new(rows)?;
    let residual = main.compose(&candidate)?.max_abs_diff(eve);
    Ok(Degradedness {
        residual,
        tolerance: tol,
        candidate,
    })
}

/// Grid verdict on `I(X;Z) <= I(X;Y)`.
///
/// `HoldsOnGrid` certifies the inequality only at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub enum LessCapable {
    HoldsOnGrid {
        /// Largest `I(X;Z) - I(X;Y)` seen (≤ 0 up to rounding).
        max_gap: f64,
        argmax: Distribution,
    },
    Violated {
        gap: f64,
        witness: Distribution,
    },
}

impl LessCapable {
    pub fn holds(&self) -> bool {
        matches!(self, LessCapable::HoldsOnGrid { .. })
    }
}

/// Gap above which a grid point counts as a violation.
const LESS_CAPABLE_SLACK: f64 = 1e-12;

pub fn is_less_capable(ch: &WiretapChannel, grid_resolution: usize) -> Result<LessCapable> {
    if grid_resolution < 2 {
        return Err(Error::invalid("grid resolution must be at least 2"));
    }
    let mut best: Option<(f64, Distribution)> = None;
    for p in simplex_grid(ch.nx(), grid_resolution)? {
        let (iy, iz) = input_informations(ch, &p)?;
        let gap = iz - iy;
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, p));
        }
    }
    let (gap, p) = best.expect("grid is non-empty");
    Ok(if gap > LESS_CAPABLE_SLACK {
        LessCapable::Violated { gap, witness: p }
    } else {
        LessCapable::HoldsOnGrid {
            max_gap: gap,
            argmax: p,
        }
    })
}
