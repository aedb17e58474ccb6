//! Fractional revivals: resonance between revival periods, the quadratic
//! phase sequence `θ_{n,m}`, its discrete Fourier coefficients, Gauss sums,
//! and the reconstruction of the quadratic approximation at `T_frac`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::diophantine::rationalize;
use crate::dynamics::{pseudo_classical, Amplitude, PeriodKind};
use crate::hamiltonian::PeriodSet;
use crate::math;
use crate::wavepacket::WavePacket;
use crate::{Error, Result};

/// Reduced fraction with a positive denominator.
pub type Rational = Ratio<i64>;

/// Resonance fractions, `T_frac` and the periods `(ℓ1, ℓ2)` of `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceData {
    /// `p1/q1` with `(p1/q1) T_rev1 = T_frac`.
    pub frac1: Rational,
    /// `p2/q2` with `(p2/q2) T_rev2 = T_frac`.
    pub frac2: Rational,
    /// `p12/q12` with `(p12/q12) T_rev12 = T_frac`.
    pub frac12: Rational,
    /// Common time `T_frac`.
    pub t_frac: f64,
    /// `r1 = p12 q1`
    pub r1: i64,
    /// `s1 = q12 p1`
    pub s1: i64,
    /// `r2 = p12 q2`
    pub r2: i64,
    /// `s2 = q12 p2`
    pub s2: i64,
    /// Smallest period of `θ` in `n`.
    pub ell1: u64,
    /// Smallest period of `θ` in `m`.
    pub ell2: u64,
}

/// True when `ℓ` is a period in `n` of
/// `exp(-2iπ (f n² + g n m + ...))`: `f ℓ²`, `2 f ℓ` and `g ℓ` are integers.
pub fn is_period(ell: u64, own: Rational, cross: Rational) -> bool {
    let l = Rational::from_integer(ell as i64);
    (own * l * l).is_integer() && (own * l * 2).is_integer() && (cross * l).is_integer()
}

fn minimal_period(own: Rational, cross: Rational) -> u64 {
    // q·q12 is always a period, and periods form a subgroup of ℤ
    let bound = (*own.denom() as u64) * (*cross.denom() as u64);
    let mut best = bound;
    let mut d = 1u64;
    while d * d <= bound {
        if bound % d == 0 {
            if is_period(d, own, cross) {
                return d;
            }
            if is_period(bound / d, own, cross) {
                best = best.min(bound / d);
            }
        }
        d += 1;
    }
    best
}

impl ResonanceData {
    /// Builds the data from explicit fractions; `(ℓ1, ℓ2)` are the minimal
    /// periods found by exact divisor search.
    pub fn from_fractions(frac1: Rational, frac2: Rational, frac12: Rational, t_frac: f64) -> Result<Self> {
        if !t_frac.is_finite() {
            return Err(Error::InvalidParameter("T_frac must be finite"));
        }
        let (p1, q1) = (*frac1.numer(), *frac1.denom());
        let (p2, q2) = (*frac2.numer(), *frac2.denom());
        let (p12, q12) = (*frac12.numer(), *frac12.denom());
        Ok(Self {
            frac1,
            frac2,
            frac12,
            t_frac,
            r1: p12 * q1,
            s1: q12 * p1,
            r2: p12 * q2,
            s2: q12 * p2,
            ell1: minimal_period(frac1, frac12),
            ell2: minimal_period(frac2, frac12),
        })
    }

    /// `ℓj = |qj sj|`, the solution that always satisfies the congruences
    /// (when `sj ≠ 0`).
    pub fn obvious_ell(&self) -> (u64, u64) {
        (
            (*self.frac1.denom() * self.s1).unsigned_abs(),
            (*self.frac2.denom() * self.s2).unsigned_abs(),
        )
    }

    /// Same resonance with every fraction and `T_frac` multiplied by `k`.
    pub fn scaled(&self, k: Rational) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::InvalidParameter("scale must be nonzero"));
        }
        let kf = *k.numer() as f64 / *k.denom() as f64;
        Self::from_fractions(self.frac1 * k, self.frac2 * k, self.frac12 * k, self.t_frac * kf)
    }

    /// Checks `(pj/qj) T_revj = (p12/q12) T_rev12 = T_frac` to relative `tol`.
    pub fn check_identity(&self, periods: &PeriodSet, tol: f64) -> Result<bool> {
        let f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
        let a = f(self.frac1) * periods.rev1()?;
        let b = f(self.frac2) * periods.rev2()?;
        let c = f(self.frac12) * periods.rev12()?;
        let scale = math::abs(self.t_frac).max(f64::MIN_POSITIVE);
        Ok([a, b, c].iter().all(|v| math::abs(v - self.t_frac) <= tol * scale))
    }
}

/// Rationalizes `T_rev12/T_revj` by continued fractions (denominator at most
/// `max_den`, relative tolerance `tol`). The mixed fraction is `±1`, so
/// `T_frac = |T_rev12|`.
pub fn detect_resonance(periods: &PeriodSet, max_den: u64, tol: f64) -> Result<ResonanceData> {
    let (t1, t2, t12) = (periods.rev1()?, periods.rev2()?, periods.rev12()?);
    let t_frac = math::abs(t12);
    let frac12 = Rational::from_integer(if t12 > 0.0 { 1 } else { -1 });
    let (p1, q1) = rationalize(t_frac / t1, max_den, tol).ok_or(Error::NoResonance)?;
    let (p2, q2) = rationalize(t_frac / t2, max_den, tol).ok_or(Error::NoResonance)?;
    ResonanceData::from_fractions(Rational::new(p1, q1), Rational::new(p2, q2), frac12, t_frac)
}

/// Dense `rows × cols` complex array, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexGrid {
    /// Wraps row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// `(rows, cols)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
}

/// One fundamental domain `[0, ℓ1) × [0, ℓ2)` of
/// `θ_{n,m} = exp(-2iπ (f1 (n-n0)² + f12 (n-n0)(m-m0) + f2 (m-m0)²))`.
///
/// The quadratic form is reduced modulo 1 in exact integer arithmetic.
pub fn theta_sequence(res: &ResonanceData, n0: u64, m0: u64) -> ComplexGrid {
    let (l1, l2) = (res.ell1 as usize, res.ell2 as usize);
    let den = (*res.frac1.denom() as i128)
        .lcm(&(*res.frac2.denom() as i128))
        .lcm(&(*res.frac12.denom() as i128));
    let scale = |r: Rational| *r.numer() as i128 * (den / *r.denom() as i128);
    let (c1, c2, c12) = (scale(res.frac1), scale(res.frac2), scale(res.frac12));
    let mut data = Vec::with_capacity(l1 * l2);
    for n in 0..l1 {
        let dn = (n as i128 - n0 as i128).rem_euclid(den);
        for m in 0..l2 {
            let dm = (m as i128 - m0 as i128).rem_euclid(den);
            let x = (c1 * dn % den * dn + c12 * dn % den * dm + c2 * dm % den * dm).rem_euclid(den);
            data.push(math::cis_ratio(x, den));
        }
    }
    ComplexGrid {
        rows: l1,
        cols: l2,
        data,
    }
}

/// Coefficients `b_{k1,k2}` of `θ` in the basis `φ^{k1,k2}` and the
/// centred coefficients `c_{k1,k2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    /// `b_{k1,k2}`
    pub b: ComplexGrid,
    /// `c_{k1,k2} = e^{-2iπ k1 n0/ℓ1} e^{-2iπ k2 m0/ℓ2} b_{k1,k2}`
    pub c: ComplexGrid,
    /// `ℓ1`
    pub ell1: u64,
    /// `ℓ2`
    pub ell2: u64,
    /// `n0`
    pub n0: u64,
    /// `m0`
    pub m0: u64,
}

/// `b_{k1,k2} = (1/ℓ1ℓ2) Σ θ_{n,m} e^{2iπ k1 n/ℓ1} e^{2iπ k2 m/ℓ2}` by direct
/// double sum.
pub fn fractional_coefficients(
    theta: &ComplexGrid,
    ell1: u64,
    ell2: u64,
    n0: u64,
    m0: u64,
) -> Result<CoefficientTable> {
    let (l1, l2) = (ell1 as usize, ell2 as usize);
    if theta.shape() != (l1, l2) || l1 == 0 || l2 == 0 {
        return Err(Error::ShapeMismatch {
            expected: (l1, l2),
            found: theta.shape(),
        });
    }
    let norm = 1.0 / (l1 * l2) as f64;
    let mut b = Vec::with_capacity(l1 * l2);
    let mut c = Vec::with_capacity(l1 * l2);
    for k1 in 0..l1 as i128 {
        for k2 in 0..l2 as i128 {
            let mut acc = Complex64::zero();
            for n in 0..l1 {
                let e1 = math::cis_ratio(-k1 * n as i128, l1 as i128);
                for m in 0..l2 {
                    let e2 = math::cis_ratio(-k2 * m as i128, l2 as i128);
                    acc += theta.get(n, m) * e1 * e2;
                }
            }
            let bk = acc * norm;
            let shift = math::cis_ratio(k1 * n0 as i128, l1 as i128) * math::cis_ratio(k2 * m0 as i128, l2 as i128);
            b.push(bk);
            c.push(shift * bk);
        }
    }
    Ok(CoefficientTable {
        b: ComplexGrid {
            rows: l1,
            cols: l2,
            data: b,
        },
        c: ComplexGrid {
            rows: l1,
            cols: l2,
            data: c,
        },
        ell1,
        ell2,
        n0,
        m0,
    })
}

/// `Σ_k b_k φ^k_{n,m}` over the fundamental domain.
pub fn inverse_transform(table: &CoefficientTable) -> ComplexGrid {
    let (l1, l2) = (table.ell1 as i128, table.ell2 as i128);
    let mut data = Vec::with_capacity((l1 * l2) as usize);
    for n in 0..l1 {
        for m in 0..l2 {
            let mut acc = Complex64::zero();
            for k1 in 0..l1 {
                for k2 in 0..l2 {
                    let phi = math::cis_ratio(k1 * n, l1) * math::cis_ratio(k2 * m, l2);
                    acc += table.b.get(k1 as usize, k2 as usize) * phi;
                }
            }
            data.push(acc);
        }
    }
    ComplexGrid {
        rows: l1 as usize,
        cols: l2 as usize,
        data,
    }
}

/// `d_k(ℓ, p, q) = (1/ℓ) Σ_{n<ℓ} e^{-2iπ (p/q)(n-n0)²} e^{2iπ k n/ℓ}`.
pub fn gauss_sum(ell: u64, p: i64, q: i64, n0: i64, k: i64) -> Result<Complex64> {
    if ell == 0 || q <= 0 {
        return Err(Error::InvalidParameter("gauss sum needs ell > 0 and q > 0"));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let (l, q128) = (ell as i128, q as i128);
    let den = l.lcm(&q128);
    let (a, b) = (p as i128 * (den / q128), k as i128 * (den / l));
    let mut acc = Complex64::zero();
    for n in 0..l {
        let d = (n - n0 as i128).rem_euclid(den);
        let x = (a * d % den * d - b * n).rem_euclid(den);
        acc += math::cis_ratio(x, den);
    }
    Ok(acc / ell as f64)
}

/// `|d_k(q, p, q)|²` for `p` coprime to `q`: `1/q` for odd `q`; for `q ≡ 0
/// (mod 4)` `2/q` at even `k` and `0` at odd `k`; for `q ≡ 2 (mod 4)` `0` at
/// even `k` and `2/q` at odd `k`.
pub fn modulus_closed_form(q: u64, k: i64) -> f64 {
    let even_k = k.rem_euclid(2) == 0;
    if q % 2 == 1 {
        1.0 / q as f64
    } else if (q % 4 == 0) == even_k {
        2.0 / q as f64
    } else {
        0.0
    }
}

/// Checks `|b_{k1,k2}|² = |d_{k1}(ℓ1, p1, q1)|² |d_{k2}(ℓ2, p2, q2)|²` to
/// `1e-10` when the mixed fraction is an integer.
pub fn factorized_moduli_check(res: &ResonanceData, table: &CoefficientTable) -> Result<bool> {
    if *res.frac12.denom() != 1 {
        return Err(Error::HypothesisNotMet("mixed resonance fraction is not an integer"));
    }
    if (table.ell1, table.ell2) != (res.ell1, res.ell2) {
        return Err(Error::ShapeMismatch {
            expected: (res.ell1 as usize, res.ell2 as usize),
            found: (table.ell1 as usize, table.ell2 as usize),
        });
    }
    let side = |frac: Rational, ell: u64| -> Result<Vec<f64>> {
        (0..ell as i64)
            .map(|k| gauss_sum(ell, *frac.numer(), *frac.denom(), 0, k).map(|z| z.norm_sqr()))
            .collect()
    };
    let d1 = side(res.frac1, res.ell1)?;
    let d2 = side(res.frac2, res.ell2)?;
    for (k1, a) in d1.iter().enumerate() {
        for (k2, b) in d2.iter().enumerate() {
            if math::abs(table.b.get(k1, k2).norm_sqr() - a * b) > 1e-10 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Σ_k c_k ψ_cl(t + T_frac + (k1/ℓ1) T_scl1, t + T_frac + (k2/ℓ2) T_scl2)`.
pub fn reconstruct_at_revival(
    p: &WavePacket,
    periods: &PeriodSet,
    res: &ResonanceData,
    table: &CoefficientTable,
    t: f64,
) -> Result<Amplitude> {
    if (table.n0, table.m0) != (p.n0(), p.m0()) {
        return Err(Error::InvalidParameter(
            "coefficient table centred on a different (n0, m0)",
        ));
    }
    let (s1, s2) = (periods.scl1()?, periods.scl2()?);
    let base = t + res.t_frac;
    let mut acc = Complex64::zero();
    for k1 in 0..table.ell1 {
        for k2 in 0..table.ell2 {
            let t1 = base + k1 as f64 / table.ell1 as f64 * s1;
            let t2 = base + k2 as f64 / table.ell2 as f64 * s2;
            let psi = pseudo_classical(p, periods, t1, t2, PeriodKind::Semiclassical)?;
            acc += table.c.get(k1 as usize, k2 as usize) * psi.to_complex();
        }
    }
    Ok(acc.into())
}

/// `Σ |b|²`.
pub fn parseval_sum(table: &CoefficientTable) -> f64 {
    table.b.data().iter().map(|z| z.norm_sqr()).sum()
}

/// Value of a fraction as `f64`.
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
