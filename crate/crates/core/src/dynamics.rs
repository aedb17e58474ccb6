//! Return amplitude, autocorrelation, linear and quadratic approximations,
//! the pseudo-classical two-time function and the Poisson envelope.
//!
//! Every sum runs over the packet window in lexicographic `(n, m)` order, so
//! results are bit-stable whatever the outer parallelism.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::hamiltonian::{joint_eigenvalue, period_set, EnergyPoint, OscillatorPair, PeriodSet, PolynomialF};
use crate::math;
use crate::wavepacket::{build_packet, ft_envelope_sq, Envelope, PacketParams, WavePacket};
use crate::{Error, Result};

/// Complex return amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

impl Amplitude {
    /// Modulus.
    pub fn magnitude(&self) -> f64 {
        math::hypot(self.re, self.im)
    }

    /// As a complex number.
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &Amplitude) -> f64 {
        math::hypot(self.re - other.re, self.im - other.im)
    }
}

impl From<Complex64> for Amplitude {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Uniform sample times, endpoints included.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    values: Vec<f64>,
}

impl TimeGrid {
    /// `samples` equally spaced times from `t_start` to `t_end`.
    pub fn new(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        if samples == 0 || !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidParameter(
                "time grid needs finite endpoints and samples > 0",
            ));
        }
        if samples == 1 {
            if t_start != t_end {
                return Err(Error::InvalidParameter("a single sample needs t_start == t_end"));
            }
            return Ok(Self {
                values: alloc::vec![t_start],
            });
        }
        if !(t_end > t_start) {
            return Err(Error::InvalidParameter("time grid needs t_end > t_start"));
        }
        let step = (t_end - t_start) / (samples - 1) as f64;
        let mut values: Vec<f64> = (0..samples).map(|k| t_start + k as f64 * step).collect();
        values[samples - 1] = t_end;
        Ok(Self { values })
    }

    /// Sample times.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Which period family feeds the linear phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodKind {
    /// `T_cl`, evaluated at the energy point.
    Classical,
    /// `T_scl`, evaluated at `(τ_n0, μ_m0)`.
    Semiclassical,
}

fn linear_periods(periods: &PeriodSet, kind: PeriodKind) -> Result<(f64, f64)> {
    match kind {
        PeriodKind::Classical => Ok((periods.cl1()?, periods.cl2()?)),
        PeriodKind::Semiclassical => Ok((periods.scl1()?, periods.scl2()?)),
    }
}

/// Populations `a²` and eigenvalues of a packet, measured from
/// `F0 = F(τ_n0, μ_m0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PacketSpectrum {
    h: f64,
    f0: f64,
    weights: Vec<f64>,
    shifted: Vec<f64>,
}

impl PacketSpectrum {
    /// Evaluates `F(τ_n, μ_m) - F0` over the window.
    pub fn new(p: &WavePacket, f: &PolynomialF) -> Self {
        let h = p.h();
        let osc = p.oscillators();
        let f0 = joint_eigenvalue(f, p.n0(), p.m0(), h, osc);
        let mut weights = Vec::with_capacity(p.coeffs().len());
        let mut shifted = Vec::with_capacity(p.coeffs().len());
        for (n, m, a) in p.iter() {
            weights.push(a * a);
            shifted.push(joint_eigenvalue(f, n, m, h, osc) - f0);
        }
        Self {
            h,
            f0,
            weights,
            shifted,
        }
    }

    /// `F0`.
    pub fn f0(&self) -> f64 {
        self.f0
    }

    /// `e^{itF0/h} r(t) = Σ a² e^{-it(F - F0)/h}`.
    pub fn aligned_amplitude(&self, t: f64) -> Amplitude {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, d) in self.weights.iter().zip(&self.shifted) {
            let (s, c) = libm::sincos(t * d / self.h);
            acc += Complex64::new(w * c, -w * s);
        }
        acc.into()
    }

    /// `r(t) = Σ a² e^{-itF/h}`.
    pub fn return_amplitude(&self, t: f64) -> Amplitude {
        let (s, c) = libm::sincos(t * self.f0 / self.h);
        (Complex64::new(c, -s) * self.aligned_amplitude(t).to_complex()).into()
    }
}

/// `r(t) = Σ a²_{n,m} e^{-itF(τ_n, μ_m)/h}`.
pub fn return_amplitude(p: &WavePacket, f: &PolynomialF, t: f64) -> Amplitude {
    PacketSpectrum::new(p, f).return_amplitude(t)
}

/// `(t, |r(t)|)` over the grid.
pub fn autocorrelation(p: &WavePacket, f: &PolynomialF, grid: &TimeGrid) -> Vec<(f64, f64)> {
    let s = PacketSpectrum::new(p, f);
    grid.values()
        .iter()
        .map(|&t| (t, s.return_amplitude(t).magnitude()))
        .collect()
}

fn offsets(lo: u64, hi: u64, c: u64) -> impl Iterator<Item = f64> {
    (lo..=hi).map(move |n| n as f64 - c as f64)
}

/// `Σ a² e^{-2iπ (u1 (n-n0) + u2 (m-m0))}` with `u1, u2` in turns.
fn separable_sum(p: &WavePacket, u1: f64, u2: f64) -> Amplitude {
    let w = p.window();
    let (u1, u2) = (math::frac(u1), math::frac(u2));
    let rows: Vec<Complex64> = offsets(w.n_lo, w.n_hi, p.n0())
        .map(|d| math::cis_turns(u1 * d))
        .collect();
    let cols: Vec<Complex64> = offsets(w.m_lo, w.m_hi, p.m0())
        .map(|d| math::cis_turns(u2 * d))
        .collect();
    let ncols = cols.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &a) in p.coeffs().iter().enumerate() {
        acc += rows[k / ncols] * cols[k % ncols] * (a * a);
    }
    acc.into()
}

/// `Σ a² e^{-2iπ t ((n-n0)/T1 + (m-m0)/T2)}` with classical or
/// semiclassical periods.
pub fn linear_approx(p: &WavePacket, periods: &PeriodSet, t: f64, kind: PeriodKind) -> Result<Amplitude> {
    let (t1, t2) = linear_periods(periods, kind)?;
    Ok(separable_sum(p, t / t1, t / t2))
}

/// Linear phases from `T_scl`, quadratic phases from `T_rev1, T_rev2, T_rev12`.
pub fn quadratic_approx(p: &WavePacket, periods: &PeriodSet, t: f64) -> Result<Amplitude> {
    let (s1, s2) = (periods.scl1()?, periods.scl2()?);
    let (r1, r2, r12) = (periods.rev1()?, periods.rev2()?, periods.rev12()?);
    // every coefficient multiplies an integer, so it can be reduced mod 1 first
    let u1 = math::frac(t / s1);
    let u2 = math::frac(t / s2);
    let v1 = math::frac(t / r1);
    let v2 = math::frac(t / r2);
    let v12 = math::frac(t / r12);
    let w = p.window();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut k = 0;
    let coeffs = p.coeffs();
    for dn in offsets(w.n_lo, w.n_hi, p.n0()) {
        let row = u1 * dn + v1 * dn * dn;
        for dm in offsets(w.m_lo, w.m_hi, p.m0()) {
            let a = coeffs[k];
            k += 1;
            let x = row + u2 * dm + v2 * dm * dm + v12 * dn * dm;
            acc += math::cis_turns(x) * (a * a);
        }
    }
    Ok(acc.into())
}

/// `ψ_cl(t1, t2) = Σ a² e^{-2iπ t1 (n-n0)/T1 - 2iπ t2 (m-m0)/T2}`.
pub fn pseudo_classical(p: &WavePacket, periods: &PeriodSet, t1: f64, t2: f64, kind: PeriodKind) -> Result<Amplitude> {
    let (p1, p2) = linear_periods(periods, kind)?;
    Ok(separable_sum(p, t1 / p1, t2 / p2))
}

/// `𝔉(χ²)(-h^{δ'1-1} d1/ω1, -h^{δ'2-1} d2/ω2) / 𝔉(χ²)(0,0)` where
/// `di = d(t/T_cl_i, ℤ)` is the distance of `t` to `T_cl_i ℤ` in units of the
/// period.
pub fn envelope_formula(p: &WavePacket, periods: &PeriodSet, env: &Envelope, t: f64) -> Result<f64> {
    let (t1, t2) = (periods.cl1()?, periods.cl2()?);
    let prm = p.params();
    let osc = p.oscillators();
    let h = p.h();
    let z1 = -math::powf(h, prm.delta1p - 1.0) * math::dist_to_int(t / t1) / osc.omega1;
    let z2 = -math::powf(h, prm.delta2p - 1.0) * math::dist_to_int(t / t2) / osc.omega2;
    Ok(ft_envelope_sq(env, z1, z2)? / ft_envelope_sq(env, 0.0, 0.0)?)
}

/// Remainder being measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemainderKind {
    /// Exact sum against [`linear_approx`] with `T_scl`, on `[0, h^α]`.
    Linear,
    /// Exact sum against [`quadratic_approx`], on `[0, h^β]`.
    Quadratic,
}

/// Everything needed to rebuild a packet at a different `h`.
#[derive(Clone, Debug)]
pub struct Scenario {
    /// Hamiltonian.
    pub f: PolynomialF,
    /// Energy point.
    pub energy: EnergyPoint,
    /// Frequencies.
    pub osc: OscillatorPair,
    /// Exponents and truncation.
    pub params: PacketParams,
    /// Profile.
    pub envelope: Envelope,
}

impl Scenario {
    /// Packet and periods at `h`.
    pub fn at(&self, h: f64) -> Result<(WavePacket, PeriodSet)> {
        let p = build_packet(&self.energy, h, &self.osc, &self.params, &self.envelope)?;
        let periods = period_set(&self.f, &self.energy, h, &self.osc)?;
        Ok((p, periods))
    }
}

/// Measured remainders and their log-log fit.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    /// Remainder kind.
    pub kind: RemainderKind,
    /// `(h, sup error)` pairs in input order.
    pub samples: Vec<(f64, f64)>,
    /// Least-squares slope of `ln error` against `ln h`; `None` when every
    /// error is exactly zero.
    pub slope: Option<f64>,
    /// Predicted exponent, `α + 2 min δ - 1` or `β + 3 min δ - 1`.
    pub theoretical: f64,
}

impl ScalingFit {
    /// True when every measured error is zero.
    pub fn is_exact(&self) -> bool {
        self.samples.iter().all(|&(_, e)| e == 0.0)
    }
}

/// Predicted exponent of the remainder.
pub fn theoretical_exponent(kind: RemainderKind, min_delta: f64, exponent: f64) -> f64 {
    match kind {
        RemainderKind::Linear => exponent + 2.0 * min_delta - 1.0,
        RemainderKind::Quadratic => exponent + 3.0 * min_delta - 1.0,
    }
}

/// `sup_t |e^{itF0/h} r(t) - approx(t)|` over `grid_points` uniform times in
/// `[0, h^exponent]`.
pub fn sup_remainder(
    kind: RemainderKind,
    scenario: &Scenario,
    h: f64,
    exponent: f64,
    grid_points: usize,
) -> Result<f64> {
    if grid_points < 2 {
        return Err(Error::InsufficientData {
            got: grid_points,
            need: 2,
        });
    }
    let (p, periods) = scenario.at(h)?;
    let spectrum = PacketSpectrum::new(&p, &scenario.f);
    let grid = TimeGrid::new(0.0, math::powf(h, exponent), grid_points)?;
    let mut sup = 0.0f64;
    for &t in grid.values() {
        let exact = spectrum.aligned_amplitude(t);
        let approx = match kind {
            RemainderKind::Linear => linear_approx(&p, &periods, t, PeriodKind::Semiclassical)?,
            RemainderKind::Quadratic => quadratic_approx(&p, &periods, t)?,
        };
        sup = sup.max(exact.distance(&approx));
    }
    Ok(sup)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (math::ln(x), math::ln(y)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Measures the remainder for each `h` and fits its decay exponent.
///
/// `exponent` is `α` for [`RemainderKind::Linear`] and `β` for
/// [`RemainderKind::Quadratic`]; it must make the predicted exponent positive.
pub fn remainder_scaling(
    kind: RemainderKind,
    scenario: &Scenario,
    h_list: &[f64],
    exponent: f64,
    grid_points: usize,
) -> Result<ScalingFit> {
    if h_list.len() < 3 {
        return Err(Error::InsufficientData {
            got: h_list.len(),
            need: 3,
        });
    }
    let min_delta = scenario.params.delta1.min(scenario.params.delta2);
    let theoretical = theoretical_exponent(kind, min_delta, exponent);
    if !(theoretical > 0.0) {
        return Err(Error::InvalidParameter(
            "time-scale exponent too small for the window exponents",
        ));
    }
    let mut samples = Vec::with_capacity(h_list.len());
    for &h in h_list {
        samples.push((h, sup_remainder(kind, scenario, h, exponent, grid_points)?));
    }
    fit_samples(kind, samples, theoretical)
}

/// Fits already measured `(h, error)` pairs.
pub fn fit_samples(kind: RemainderKind, samples: Vec<(f64, f64)>, theoretical: f64) -> Result<ScalingFit> {
    let nonzero = samples.iter().filter(|s| s.1 > 0.0).count();
    let slope = if nonzero == 0 {
        None
    } else {
        Some(log_log_slope(&samples).ok_or(Error::InsufficientData { got: nonzero, need: 2 })?)
    };
    Ok(ScalingFit {
        kind,
        samples,
        slope,
        theoretical,
    })
}

/// `2π`-scaled phase of the dropped quadratic terms: an upper bound for
/// `|quadratic_approx - linear_approx(T_scl)|` at time `t`.
pub fn quadratic_phase_bound(p: &WavePacket, periods: &PeriodSet, t: f64) -> Result<f64> {
    let (r1, r2, r12) = (periods.rev1()?, periods.rev2()?, periods.rev12()?);
    let w = p.window();
    let dn = (w.n_hi - p.n0()).max(p.n0() - w.n_lo) as f64;
    let dm = (w.m_hi - p.m0()).max(p.m0() - w.m_lo) as f64;
    let q = dn * dn / math::abs(r1) + dm * dm / math::abs(r2) + dn * dm / math::abs(r12);
    Ok(2.0 * PI * math::abs(t) * q)
}
