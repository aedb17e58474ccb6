//! Continued fractions, distances from the flow line to the integer lattice,
//! approach times, collapse horizons and the near-revival set.

mod continued_fraction;
mod quadratic;

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use num_traits::ToPrimitive;

pub use continued_fraction::{cf_expand, cf_expand_truncated, fibonacci, rationalize, CfInput, ConvergentSequence};
pub use quadratic::{diophantine_constant, diophantine_constant_range, QuadraticIrrational};

use crate::hamiltonian::PeriodSet;
use crate::math;
use crate::{Error, Result};

/// `min_ℓ |t - ℓ period|`, in `[0, period/2]`.
pub fn lattice_distance(t: f64, period: f64) -> f64 {
    let d = math::abs(t - math::round(t / period) * period);
    d.min(period / 2.0)
}

/// Speeds of the linear flow `t ↦ (𝐚t, 𝐛t)` on the torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowParams {
    /// `𝐚 = 1/T_cl1`
    pub a: f64,
    /// `𝐛 = 1/T_cl2`
    pub b: f64,
}

impl FlowParams {
    /// Both speeds must be positive.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter("flow speeds must be positive"));
        }
        Ok(Self { a, b })
    }

    /// `𝐚 = 1/|T_cl1|`, `𝐛 = 1/|T_cl2|`.
    pub fn from_periods(periods: &PeriodSet) -> Result<Self> {
        Self::new(1.0 / math::abs(periods.cl1()?), 1.0 / math::abs(periods.cl2()?))
    }

    /// `θ = 𝐛/𝐚`.
    pub fn theta(&self) -> f64 {
        self.b / self.a
    }

    /// `𝐚² + 𝐛²`.
    pub fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }
}

/// Euclidean distance from `(𝐚t, 𝐛t)` to `ℤ² ∖ {0}`.
pub fn flow_lattice_distance(fp: &FlowParams, t: f64) -> f64 {
    let (x, y) = (fp.a * t, fp.b * t);
    let (rx, ry) = (math::round(x), math::round(y));
    let mut best = f64::INFINITY;
    for i in -1..=1 {
        for j in -1..=1 {
            let (n, m) = (rx + i as f64, ry + j as f64);
            if n == 0.0 && m == 0.0 {
                continue;
            }
            best = best.min(math::hypot(x - n, y - m));
        }
    }
    best
}

/// Time at which the flow passes closest to the lattice point `(q, p)`:
/// `(𝐚q + 𝐛p)/(𝐚² + 𝐛²)`.
pub fn approach_time(fp: &FlowParams, q: f64, p: f64) -> f64 {
    (fp.a * q + fp.b * p) / fp.norm_sq()
}

/// Upper bound on [`flow_lattice_distance`] over `[τ - r, τ + r]` where `τ`
/// is the approach time of a convergent with denominator `q`.
pub fn neighborhood_bound(fp: &FlowParams, q: f64, r: f64) -> f64 {
    let s = fp.norm_sq();
    let x = fp.a * fp.b / q + r * fp.a * s;
    let y = fp.a * fp.a / q + r * fp.b * s;
    math::hypot(x, y) / s
}

/// `K_ε = C_ε min(𝐚, 𝐛)/√(𝐚² + 𝐛²)`, the constant of the lower bound on
/// the flow-to-lattice distance obtained from a diophantine constant of `θ`.
pub fn k_eps(fp: &FlowParams, c_eps: f64) -> f64 {
    c_eps * fp.a.min(fp.b) / math::sqrt(fp.norm_sq())
}

/// Exclusive upper limit `√2^{1+ε}/2` for `η`.
pub fn eta_limit(eps: f64) -> f64 {
    math::powf(SQRT_2, 1.0 + eps) / 2.0
}

/// `(1/√(𝐚² + 𝐛²)) ((K_ε/η)^{1/(1+ε)} - √2/2)`.
///
/// Up to this time the flow keeps at distance at least `η` from the
/// lattice. The value is negative when `K_ε/η` is too small for any
/// guarantee.
pub fn t_eta(fp: &FlowParams, k_eps: f64, eps: f64, eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter("eta must be positive"));
    }
    if !(k_eps > 0.0 && k_eps <= 0.5) {
        return Err(Error::InvalidParameter("k_eps must lie in (0, 1/2]"));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter("eps must be nonnegative"));
    }
    let limit = eta_limit(eps);
    if eta >= limit {
        return Err(Error::EtaTooLarge { eta, limit });
    }
    Ok((math::powf(k_eps / eta, 1.0 / (1.0 + eps)) - SQRT_2 / 2.0) / math::sqrt(fp.norm_sq()))
}

/// `[t_start, t_eta]` when nonempty.
pub fn collapse_window(fp: &FlowParams, k_eps: f64, eps: f64, eta: f64, t_start: f64) -> Result<Option<(f64, f64)>> {
    let end = t_eta(fp, k_eps, eps, eta)?;
    Ok(if end >= t_start { Some((t_start, end)) } else { None })
}

/// Convergent denominators in `[h^{min δ' - 1 - μ}, h^{1 - 2 min δ + μ}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RevivalSet {
    /// Left end of the interval.
    pub lower: f64,
    /// Right end of the interval.
    pub upper: f64,
    /// Distinct denominators `q_k` in the interval, increasing.
    pub members: Vec<u64>,
    /// Index `k` of the first convergent with each member as denominator.
    pub indices: Vec<usize>,
    /// `members.len()`.
    pub count: usize,
    /// `E[δ(h)] + 1` with `δ(h) = upper - lower`; zero for an empty interval.
    pub upper_bound: usize,
    /// False when the expansion stopped before passing `upper`.
    pub complete: bool,
}

/// Enumerates the near-revival set for the given exponents.
pub fn count_revival_set(conv: &ConvergentSequence, h: f64, delta_min: f64, delta_p_min: f64, mu: f64) -> RevivalSet {
    let lower = math::powf(h, delta_p_min - 1.0 - mu);
    let upper = math::powf(h, 1.0 - 2.0 * delta_min + mu);
    let mut members = Vec::new();
    let mut indices = Vec::new();
    let mut complete = !conv.is_empty() && matches!(conv.theta(), CfInput::Rational { .. });
    for k in 0..conv.len() {
        let q = conv.q(k).to_f64().unwrap_or(f64::INFINITY);
        if q > upper {
            complete = true;
            break;
        }
        if q >= lower {
            let qi = conv.q(k).to_u64().unwrap_or(u64::MAX);
            if members.last() != Some(&qi) {
                members.push(qi);
                indices.push(k);
            }
        }
    }
    let upper_bound = if upper >= lower {
        math::floor(upper - lower) as usize + 1
    } else {
        0
    };
    RevivalSet {
        lower,
        upper,
        count: members.len(),
        members,
        indices,
        upper_bound,
        complete,
    }
}
