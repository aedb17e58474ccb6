//! The localized initial state: real nonnegative coefficients `a_{n,m}` on a
//! truncated window around `(n0, m0)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::hamiltonian::{closest_quantum_numbers, EnergyPoint, OscillatorPair};
use crate::math;
use crate::{Error, Result};

/// Profile `χ` of the initial state.
#[derive(Clone, Debug)]
pub enum Envelope {
    /// `χ(x, y) = exp(-(x² + y²)/2)`.
    Gaussian,
    /// Values on a uniform grid, bilinearly interpolated and zero outside.
    Tabulated(TabulatedEnvelope),
}

/// Envelope sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct TabulatedEnvelope {
    x0: f64,
    dx: f64,
    nx: usize,
    y0: f64,
    dy: f64,
    ny: usize,
    values: Vec<f64>,
    transform: Option<fn(f64, f64) -> f64>,
}

impl TabulatedEnvelope {
    /// Grid `x0 + i dx` (`i < nx`) by `y0 + j dy` (`j < ny`), values in
    /// row-major order (`values[i * ny + j]`). `transform`, when given, must
    /// return the Fourier transform of `χ²` with the `e^{-2iπ x·ζ}` convention.
    pub fn new(
        (x0, dx, nx): (f64, f64, usize),
        (y0, dy, ny): (f64, f64, usize),
        values: Vec<f64>,
        transform: Option<fn(f64, f64) -> f64>,
    ) -> Result<Self> {
        if nx < 2 || ny < 2 || !(dx > 0.0) || !(dy > 0.0) {
            return Err(Error::InvalidParameter("tabulated envelope needs a 2x2 grid or larger"));
        }
        if values.len() != nx * ny {
            return Err(Error::ShapeMismatch {
                expected: (nx, ny),
                found: (values.len(), 1),
            });
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "envelope values must be finite and nonnegative",
            ));
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidParameter("envelope must not vanish identically"));
        }
        Ok(Self {
            x0,
            dx,
            nx,
            y0,
            dy,
            ny,
            values,
            transform,
        })
    }

    fn at(&self, x: f64, y: f64) -> f64 {
        let u = (x - self.x0) / self.dx;
        let v = (y - self.y0) / self.dy;
        if !(u >= 0.0 && v >= 0.0) || u > (self.nx - 1) as f64 || v > (self.ny - 1) as f64 {
            return 0.0;
        }
        let i = (math::floor(u) as usize).min(self.nx - 2);
        let j = (math::floor(v) as usize).min(self.ny - 2);
        let (fu, fv) = (u - i as f64, v - j as f64);
        let g = |i: usize, j: usize| self.values[i * self.ny + j];
        (1.0 - fu) * (1.0 - fv) * g(i, j)
            + fu * (1.0 - fv) * g(i + 1, j)
            + (1.0 - fu) * fv * g(i, j + 1)
            + fu * fv * g(i + 1, j + 1)
    }
}

impl Envelope {
    /// `χ(x, y)`.
    pub fn chi(&self, x: f64, y: f64) -> f64 {
        match self {
            Envelope::Gaussian => math::exp(-(x * x + y * y) / 2.0),
            Envelope::Tabulated(t) => t.at(x, y),
        }
    }

    /// `𝔉(χ²)(0, 0) = ∬ χ²`. Analytic (`π`) for the gaussian; for a table,
    /// the supplied transform, or the trapezoid rule over the grid.
    pub fn ft_chi_sq_at_zero(&self) -> f64 {
        match self {
            Envelope::Gaussian => PI,
            Envelope::Tabulated(t) => match t.transform {
                Some(ft) => ft(0.0, 0.0),
                None => {
                    let mut s = 0.0;
                    for i in 0..t.nx {
                        let wi = if i == 0 || i == t.nx - 1 { 0.5 } else { 1.0 };
                        for j in 0..t.ny {
                            let wj = if j == 0 || j == t.ny - 1 { 0.5 } else { 1.0 };
                            let v = t.values[i * t.ny + j];
                            s += wi * wj * v * v;
                        }
                    }
                    s * t.dx * t.dy
                }
            },
        }
    }
}

/// `𝔉(χ²)(z1, z2) = ∬ χ(x)² e^{-2iπ x·z} dx`.
pub fn ft_envelope_sq(env: &Envelope, z1: f64, z2: f64) -> Result<f64> {
    match env {
        Envelope::Gaussian => Ok(PI * math::exp(-PI * PI * (z1 * z1 + z2 * z2))),
        Envelope::Tabulated(t) => t.transform.map(|ft| ft(z1, z2)).ok_or(Error::NotAvailable),
    }
}

/// Localization exponents `δ'`, window exponents `δ` and the truncation
/// multiplier `W`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketParams {
    /// `δ'1`
    pub delta1p: f64,
    /// `δ'2`
    pub delta2p: f64,
    /// `δ1`
    pub delta1: f64,
    /// `δ2`
    pub delta2: f64,
    /// Half-width of the window in envelope widths.
    pub window_factor: f64,
    /// Widen the window so it contains `Δ = {|n-n0| ≤ h^{δ1-1}, |m-m0| ≤ h^{δ2-1}}`.
    pub cover_delta: bool,
}

/// Default truncation multiplier.
pub const DEFAULT_WINDOW_FACTOR: f64 = 8.0;

impl PacketParams {
    /// Exponents in `(1/2, 1)` with `δ'i > δi`; `W = 8`, window covers `Δ`.
    pub fn new(delta1p: f64, delta2p: f64, delta1: f64, delta2: f64) -> Result<Self> {
        let p = Self {
            delta1p,
            delta2p,
            delta1,
            delta2,
            window_factor: DEFAULT_WINDOW_FACTOR,
            cover_delta: true,
        };
        p.validate()?;
        Ok(p)
    }

    /// Replaces the truncation multiplier (`W ≥ 0`).
    pub fn with_window_factor(mut self, w: f64) -> Result<Self> {
        self.window_factor = w;
        self.validate()?;
        Ok(self)
    }

    /// Enables or disables widening the window to contain `Δ`.
    pub fn with_cover_delta(mut self, cover: bool) -> Self {
        self.cover_delta = cover;
        self
    }

    /// Checks the exponent constraints.
    pub fn validate(&self) -> Result<()> {
        let open = |d: f64| d > 0.5 && d < 1.0;
        if ![self.delta1p, self.delta2p, self.delta1, self.delta2]
            .iter()
            .all(|&d| open(d))
        {
            return Err(Error::InvalidParameter("exponents must lie in (1/2, 1)"));
        }
        if self.delta1p <= self.delta1 || self.delta2p <= self.delta2 {
            return Err(Error::InvalidParameter(
                "localization exponents must exceed window exponents",
            ));
        }
        if !(self.window_factor >= 0.0) || !self.window_factor.is_finite() {
            return Err(Error::InvalidParameter("window factor must be finite and nonnegative"));
        }
        Ok(())
    }

    fn min_delta(&self) -> f64 {
        self.delta1.min(self.delta2)
    }

    fn min_delta_p(&self) -> f64 {
        self.delta1p.min(self.delta2p)
    }
}

/// Inclusive index rectangle `[n_lo, n_hi] × [m_lo, m_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    /// Lowest `n`.
    pub n_lo: u64,
    /// Highest `n`.
    pub n_hi: u64,
    /// Lowest `m`.
    pub m_lo: u64,
    /// Highest `m`.
    pub m_hi: u64,
}

impl Window {
    /// Number of `n` values.
    pub fn rows(&self) -> usize {
        (self.n_hi - self.n_lo + 1) as usize
    }

    /// Number of `m` values.
    pub fn cols(&self) -> usize {
        (self.m_hi - self.m_lo + 1) as usize
    }

    /// True when `(n, m)` lies in the rectangle.
    pub fn contains(&self, n: u64, m: u64) -> bool {
        (self.n_lo..=self.n_hi).contains(&n) && (self.m_lo..=self.m_hi).contains(&m)
    }
}

/// Normalized coefficients of the initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct WavePacket {
    n0: u64,
    m0: u64,
    h: f64,
    window: Window,
    coeffs: Vec<f64>,
    k_h: f64,
    params: PacketParams,
    osc: OscillatorPair,
}

impl WavePacket {
    /// Center `n0`.
    pub fn n0(&self) -> u64 {
        self.n0
    }
    /// Center `m0`.
    pub fn m0(&self) -> u64 {
        self.m0
    }
    /// Semiclassical parameter.
    pub fn h(&self) -> f64 {
        self.h
    }
    /// Retained index rectangle.
    pub fn window(&self) -> Window {
        self.window
    }
    /// Normalization constant applied to `χ`.
    pub fn k_h(&self) -> f64 {
        self.k_h
    }
    /// Exponents used to build the packet.
    pub fn params(&self) -> &PacketParams {
        &self.params
    }
    /// Oscillator frequencies used to build the packet.
    pub fn oscillators(&self) -> &OscillatorPair {
        &self.osc
    }
    /// Row-major coefficients (`n` outer, `m` inner).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `a_{n,m}`, zero outside the window.
    pub fn coeff(&self, n: u64, m: u64) -> f64 {
        if !self.window.contains(n, m) {
            return 0.0;
        }
        let i = (n - self.window.n_lo) as usize;
        let j = (m - self.window.m_lo) as usize;
        self.coeffs[i * self.window.cols() + j]
    }

    /// `(n, m, a_{n,m})` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        let w = self.window;
        let cols = w.cols();
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &a)| (w.n_lo + (k / cols) as u64, w.m_lo + (k % cols) as u64, a))
    }

    /// `Σ a²` over the window.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum()
    }

    /// Asymptotic normalization `√(ω1ω2) / (√𝔉(χ²)(0,0) · h^{(δ'1+δ'2-2)/2})`.
    pub fn closed_form_k(&self, env: &Envelope) -> f64 {
        closed_form_k(self.h, &self.params, &self.osc, env)
    }
}

/// Asymptotic normalization constant of the ω-scaled profile.
pub fn closed_form_k(h: f64, params: &PacketParams, osc: &OscillatorPair, env: &Envelope) -> f64 {
    let e = (params.delta1p + params.delta2p - 2.0) / 2.0;
    math::sqrt(osc.omega1 * osc.omega2) / (math::sqrt(env.ft_chi_sq_at_zero()) * math::powf(h, e))
}

fn half_width(h: f64, dp: f64, d: f64, omega: f64, w: f64, cover: bool) -> u64 {
    let env = math::ceil(w * math::powf(h, dp - 1.0) / omega);
    let delta = if cover {
        math::floor(math::powf(h, d - 1.0))
    } else {
        0.0
    };
    env.max(delta) as u64
}

/// Builds `a_{n,m} = K χ(ω1 (n-n0) h^{1-δ'1}, ω2 (m-m0) h^{1-δ'2})` on the
/// window `n0 ± ceil(W h^{δ'1-1}/ω1)`, `m0 ± ceil(W h^{δ'2-1}/ω2)`, widened to
/// contain `Δ` when requested, clipped at zero. `K` makes the ℓ² norm exactly 1.
pub fn build_packet(
    e: &EnergyPoint,
    h: f64,
    osc: &OscillatorPair,
    params: &PacketParams,
    env: &Envelope,
) -> Result<WavePacket> {
    params.validate()?;
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidParameter("h must lie in (0, 1)"));
    }
    let (n0, m0) = closest_quantum_numbers(e, h, osc);
    let w = params.window_factor;
    let hn = half_width(h, params.delta1p, params.delta1, osc.omega1, w, params.cover_delta);
    let hm = half_width(h, params.delta2p, params.delta2, osc.omega2, w, params.cover_delta);
    let window = Window {
        n_lo: n0.saturating_sub(hn),
        n_hi: n0 + hn,
        m_lo: m0.saturating_sub(hm),
        m_hi: m0 + hm,
    };
    let s1 = osc.omega1 * math::powf(h, 1.0 - params.delta1p);
    let s2 = osc.omega2 * math::powf(h, 1.0 - params.delta2p);
    let mut coeffs = Vec::with_capacity(window.rows() * window.cols());
    for n in window.n_lo..=window.n_hi {
        let x = s1 * (n as f64 - n0 as f64);
        for m in window.m_lo..=window.m_hi {
            let y = s2 * (m as f64 - m0 as f64);
            coeffs.push(env.chi(x, y));
        }
    }
    let sum: f64 = coeffs.iter().map(|c| c * c).sum();
    if !(sum > 0.0) || !sum.is_finite() {
        return Err(Error::WindowDegenerate);
    }
    let k = 1.0 / math::sqrt(sum);
    for c in coeffs.iter_mut() {
        *c *= k;
    }
    Ok(WavePacket {
        n0,
        m0,
        h,
        window,
        coeffs,
        k_h: k,
        params: *params,
        osc: *osc,
    })
}

/// `Σ a²` over indices outside `Δ = {|n-n0| ≤ h^{δ1-1}, |m-m0| ≤ h^{δ2-1}}`.
pub fn tail_mass(p: &WavePacket, delta1: f64, delta2: f64) -> f64 {
    let r1 = math::powf(p.h, delta1 - 1.0);
    let r2 = math::powf(p.h, delta2 - 1.0);
    p.iter()
        .filter(|&(n, m, _)| math::abs(n as f64 - p.n0 as f64) > r1 || math::abs(m as f64 - p.m0 as f64) > r2)
        .map(|(_, _, a)| a * a)
        .sum()
}

/// Smallest `δ'` and `δ` of the packet, as used by the error exponents.
pub fn min_exponents(p: &WavePacket) -> (f64, f64) {
    (p.params.min_delta_p(), p.params.min_delta())
}
