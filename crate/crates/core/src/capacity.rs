//! Secrecy capacity with a rate-limited randomness budget.
//!
//! Every input law `p_X` yields a point `(I(X;Z), I(X;Y) - I(X;Z))` on the
//! rate curve: the randomness it consumes and the secrecy it buys. Time
//! sharing over an auxiliary `U` with two values mixes two such points, so
//! the best rate under a budget `b` is the upper concave envelope of the
//! curve, maximized over costs `x <= b`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::{input_informations, simplex_grid, Distribution, WiretapChannel};

/// Default margin subtracted from the Rényi budget to honor the strict
/// inequality `I(X;Z|U) < R₂(U_r)/n`.
pub const DEFAULT_STRICT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RateCurvePoint {
    /// `I(X;Z)` in bits.
    pub randomness_cost: f64,
    /// `I(X;Y) - I(X;Z)` in bits.
    pub secrecy_gain: f64,
    pub input: Distribution,
}

impl RateCurvePoint {
    pub fn evaluate(ch: &WiretapChannel, input: Distribution) -> Result<Self> {
        let (iy, iz) = input_informations(ch, &input)?;
        Ok(RateCurvePoint {
            randomness_cost: iz,
            secrecy_gain: iy - iz,
            input,
        })
    }
}

/// One point per simplex grid input, in grid enumeration order.
pub fn rate_curve(ch: &WiretapChannel, grid_resolution: usize) -> Result<Vec<RateCurvePoint>> {
    if grid_resolution < 2 {
        return Err(Error::invalid("grid resolution must be at least 2"));
    }
    simplex_grid(ch.nx(), grid_resolution)?
        .into_par_iter()
        .map(|p| RateCurvePoint::evaluate(ch, p))
        .collect()
}

/// Least concave majorant of a rate curve, as its hull vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    vertices: Vec<RateCurvePoint>,
}

pub fn upper_concave_envelope(points: &[RateCurvePoint]) -> Result<Envelope> {
    if points.is_empty() {
        return Err(Error::invalid("envelope of an empty point set"));
    }
    if let Some(p) = points
        .iter()
        .find(|p| !p.randomness_cost.is_finite() || !p.secrecy_gain.is_finite())
    {
        return Err(Error::invalid(format!(
            "non-finite curve point ({}, {})",
            p.randomness_cost, p.secrecy_gain
        )));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        pa.randomness_cost
            .total_cmp(&pb.randomness_cost)
            .then(pb.secrecy_gain.total_cmp(&pa.secrecy_gain))
            .then(a.cmp(&b))
    });

    let mut hull: Vec<usize> = Vec::new();
    for idx in order {
        let p = &points[idx];
        if let Some(&last) = hull.last() {
            // Same cost: the earlier point already has the larger gain.
            if points[last].randomness_cost == p.randomness_cost {
                continue;
            }
        }
        while hull.len() >= 2 {
            let a = &points[hull[hull.len() - 2]];
            let b = &points[hull[hull.len() - 1]];
            let cross = (b.randomness_cost - a.randomness_cost) * (p.secrecy_gain - a.secrecy_gain)
                - (b.secrecy_gain - a.secrecy_gain) * (p.randomness_cost - a.randomness_cost);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(idx);
    }
    Ok(Envelope {
        vertices: hull.into_iter().map(|i| points[i].clone()).collect(),
    })
}

impl Envelope {
    /// Hull vertices with strictly increasing cost.
    pub fn vertices(&self) -> &[RateCurvePoint] {
        &self.vertices
    }

    /// `(min cost, max cost)` of the sampled curve.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.vertices[0].randomness_cost,
            self.vertices[self.vertices.len() - 1].randomness_cost,
        )
    }

    /// Envelope value at cost `x`, or `None` outside [`Envelope::domain`].
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let i = self.segment_containing(x);
        if i + 1 == self.vertices.len() {
            return Some(self.vertices[i].secrecy_gain);
        }
        let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
        let t = (x - a.randomness_cost) / (b.randomness_cost - a.randomness_cost);
        Some(a.secrecy_gain + t * (b.secrecy_gain - a.secrecy_gain))
    }

    // Index i of the last vertex with cost <= x.
    fn segment_containing(&self, x: f64) -> usize {
        self.vertices
            .partition_point(|v| v.randomness_cost <= x)
            .saturating_sub(1)
    }

    /// First vertex with maximal gain (smallest cost among ties).
    pub fn peak(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.secrecy_gain > self.vertices[best].secrecy_gain {
                best = i;
            }
        }
        best
    }

    /// Maximizes the envelope over costs `<= budget` and splits the optimum
    /// into a two-point time-sharing mixture.
    pub fn optimum(&self, budget: f64) -> Result<CapacityResult> {
        if budget.is_nan() || budget < 0.0 {
            return Err(Error::invalid(format!("randomness budget must be >= 0, got {budget}")));
        }
        let (lo, _) = self.domain();
        if budget < lo {
            return Err(Error::invalid(format!(
                "budget {budget} is below the smallest sampled randomness cost {lo}"
            )));
        }
        let peak = self.peak();
        let top = &self.vertices[peak];
        if budget >= top.randomness_cost {
            return Ok(CapacityResult::pure(top, budget, false));
        }
        let i = self.segment_containing(budget);
        let a = &self.vertices[i];
        if a.randomness_cost == budget {
            return Ok(CapacityResult::pure(a, budget, true));
        }
        let b = &self.vertices[i + 1];
        let lambda = (b.randomness_cost - budget) / (b.randomness_cost - a.randomness_cost);
        Ok(CapacityResult {
            rate: lambda * a.secrecy_gain + (1.0 - lambda) * b.secrecy_gain,
            lambda,
            inputs: [a.input.clone(), b.input.clone()],
            randomness_used: lambda * a.randomness_cost + (1.0 - lambda) * b.randomness_cost,
            constraint_active: true,
            budget,
        })
    }
}

/// Optimal rate and its realization as a mixture over `U ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// `λ g₀ + (1 - λ) g₁`, bits per channel use.
    pub rate: f64,
    /// `P(U = 0)`.
    pub lambda: f64,
    /// `p_{X|U=0}` and `p_{X|U=1}`.
    pub inputs: [Distribution; 2],
    /// `I(X;Z|U)` of the mixture.
    pub randomness_used: f64,
    /// True when the budget, not the channel, limits the rate.
    pub constraint_active: bool,
    pub budget: f64,
}

impl CapacityResult {
    fn pure(v: &RateCurvePoint, budget: f64, constraint_active: bool) -> Self {
        CapacityResult {
            rate: v.secrecy_gain,
            lambda: 1.0,
            inputs: [v.input.clone(), v.input.clone()],
            randomness_used: v.randomness_cost,
            constraint_active,
            budget,
        }
    }

    /// `p_U = (λ, 1 - λ)`.
    pub fn time_sharing(&self) -> Distribution {
        Distribution::from_weights(vec![self.lambda, 1.0 - self.lambda]).expect("lambda lies in [0, 1]")
    }
}

/// Rate-limited secrecy capacity for a budget of `randomness_budget` bits per
/// use; pass `f64::INFINITY` for unlimited randomness.
pub fn secrecy_capacity(ch: &WiretapChannel, randomness_budget: f64, grid_resolution: usize) -> Result<CapacityResult> {
    if randomness_budget.is_nan() || randomness_budget < 0.0 {
        return Err(Error::invalid(format!(
            "randomness budget must be >= 0, got {randomness_budget}"
        )));
    }
    let curve = rate_curve(ch, grid_resolution)?;
    upper_concave_envelope(&curve)?.optimum(randomness_budget)
}

/// Achievable secrecy rate when randomization draws on a possibly
/// non-uniform `U_r` over `n` channel uses.
#[derive(Debug, Clone, PartialEq)]
pub struct RenyiRate {
    /// `R₂(U_r) / n - margin`, floored at zero.
    pub budget: f64,
    pub margin: f64,
    pub result: CapacityResult,
}

impl RenyiRate {
    pub fn rate(&self) -> f64 {
        self.result.rate
    }
}

pub fn achievable_rate_renyi(
    ch: &WiretapChannel,
    u_r: &Distribution,
    n: usize,
    grid_resolution: usize,
) -> Result<RenyiRate> {
    achievable_rate_renyi_with_margin(ch, u_r, n, grid_resolution, DEFAULT_STRICT_MARGIN)
}

pub fn achievable_rate_renyi_with_margin(
    ch: &WiretapChannel,
    u_r: &Distribution,
    n: usize,
    grid_resolution: usize,
    margin: f64,
) -> Result<RenyiRate> {
    if n == 0 {
        return Err(Error::invalid("block length must be at least 1"));
    }
    if margin.is_nan() || margin < 0.0 {
        return Err(Error::invalid("margin must be non-negative"));
    }
    let budget = (u_r.renyi2() / n as f64 - margin).max(0.0);
    Ok(RenyiRate {
        budget,
        margin,
        result: secrecy_capacity(ch, budget, grid_resolution)?,
    })
}
