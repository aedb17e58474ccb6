//! The Hamiltonian `F(P1, P2)`, the oscillator spectra and the period
//! families at an energy point.

use alloc::collections::BTreeMap;
use core::f64::consts::PI;

use crate::math;
use crate::{Error, Result};

/// Real bivariate polynomial `Σ c_ij X^i Y^j`.
///
/// Terms with a zero coefficient are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolynomialF {
    coeffs: BTreeMap<(u32, u32), f64>,
}

/// First and second partial derivatives of `F` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Partials {
    /// `∂F/∂X`
    pub gx: f64,
    /// `∂F/∂Y`
    pub gy: f64,
    /// `∂²F/∂X²`
    pub hxx: f64,
    /// `∂²F/∂Y²`
    pub hyy: f64,
    /// `∂²F/∂X∂Y`
    pub hxy: f64,
}

impl PolynomialF {
    /// The zero polynomial.
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a polynomial from `(i, j, c)` triples; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, f64)>>(terms: I) -> Self {
        let mut f = Self::new();
        for (i, j, c) in terms {
            f.add_term(i, j, c);
        }
        f
    }

    /// Adds `c X^i Y^j`.
    pub fn add_term(&mut self, i: u32, j: u32, c: f64) {
        let e = self.coeffs.entry((i, j)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.coeffs.remove(&(i, j));
        }
    }

    /// Nonzero terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.coeffs.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0.0)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluates `F(x, y)`.
    ///
    /// Nested Horner scheme: outer in `x` over decreasing `i`, inner in `y`
    /// over decreasing `j`. The order is fixed so results are reproducible.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        let mut terms = self.coeffs.iter().rev().peekable();
        let Some((&(top, _), _)) = terms.peek() else {
            return 0.0;
        };
        let mut i = top as i64;
        while i >= 0 {
            let mut inner = 0.0;
            let mut j_cur: Option<u32> = None;
            while let Some((&(ti, tj), &c)) = terms.peek() {
                if ti as i64 != i {
                    break;
                }
                match j_cur {
                    None => inner = c,
                    Some(jp) => inner = inner * powi(y, jp - tj) + c,
                }
                j_cur = Some(tj);
                terms.next();
            }
            if let Some(jl) = j_cur {
                inner *= powi(y, jl);
            }
            acc = acc * x + inner;
            i -= 1;
        }
        acc
    }

    /// `∂F/∂X` as a polynomial.
    pub fn derivative_x(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&(i, _, _)| i > 0)
                .map(|(i, j, c)| (i - 1, j, c * i as f64)),
        )
    }

    /// `∂F/∂Y` as a polynomial.
    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&(_, j, _)| j > 0)
                .map(|(i, j, c)| (i, j - 1, c * j as f64)),
        )
    }

    /// First and second partial derivatives at `(x, y)`, from the exact
    /// symbolic derivatives of the coefficient map.
    pub fn partials(&self, x: f64, y: f64) -> Partials {
        let fx = self.derivative_x();
        let fy = self.derivative_y();
        Partials {
            gx: fx.eval(x, y),
            gy: fy.eval(x, y),
            hxx: fx.derivative_x().eval(x, y),
            hyy: fy.derivative_y().eval(x, y),
            hxy: fx.derivative_y().eval(x, y),
        }
    }
}

fn powi(x: f64, n: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// Frequencies `ω1, ω2` of the two oscillators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorPair {
    /// `ω1 > 0`
    pub omega1: f64,
    /// `ω2 > 0`
    pub omega2: f64,
}

impl OscillatorPair {
    /// Validates positivity.
    pub fn new(omega1: f64, omega2: f64) -> Result<Self> {
        if !(omega1 > 0.0 && omega1.is_finite()) || !(omega2 > 0.0 && omega2.is_finite()) {
            return Err(Error::InvalidParameter("frequencies must be positive"));
        }
        Ok(Self { omega1, omega2 })
    }

    /// Frequency of one axis.
    pub fn omega(&self, axis: Axis) -> f64 {
        match axis {
            Axis::One => self.omega1,
            Axis::Two => self.omega2,
        }
    }
}

/// Energy point `(E1, E2)` of the torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyPoint {
    /// `E1 ∈ [0, 1]`
    pub e1: f64,
    /// `E2 ∈ [0, 1]`
    pub e2: f64,
}

impl EnergyPoint {
    /// Validates both components lie in `[0, 1]`.
    pub fn new(e1: f64, e2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&e1) || !(0.0..=1.0).contains(&e2) {
            return Err(Error::InvalidParameter("energies must lie in [0, 1]"));
        }
        Ok(Self { e1, e2 })
    }
}

/// Oscillator axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// First oscillator, eigenvalues `τ_n`.
    One,
    /// Second oscillator, eigenvalues `μ_m`.
    Two,
}

/// `ω h (n + 1/2)` for the given axis.
pub fn oscillator_eigenvalue(axis: Axis, n: u64, h: f64, osc: &OscillatorPair) -> f64 {
    osc.omega(axis) * h * (n as f64 + 0.5)
}

/// `F(τ_n, μ_m)`.
pub fn joint_eigenvalue(f: &PolynomialF, n: u64, m: u64, h: f64, osc: &OscillatorPair) -> f64 {
    f.eval(
        oscillator_eigenvalue(Axis::One, n, h, osc),
        oscillator_eigenvalue(Axis::Two, m, h, osc),
    )
}

fn closest_index(e: f64, omega: f64, h: f64) -> u64 {
    let n_max = math::ceil(2.0 * e / (omega * h)) as u64 + 2;
    let mut best = 0u64;
    let mut best_d = f64::INFINITY;
    for n in 0..=n_max {
        let d = math::abs(omega * h * (n as f64 + 0.5) - e);
        // strict comparison keeps the smaller index on ties
        if d < best_d {
            best_d = d;
            best = n;
        }
    }
    best
}

/// Indices `(n0, m0)` whose eigenvalues are closest to `(E1, E2)`.
/// Ties go to the smaller index.
pub fn closest_quantum_numbers(e: &EnergyPoint, h: f64, osc: &OscillatorPair) -> (u64, u64) {
    (closest_index(e.e1, osc.omega1, h), closest_index(e.e2, osc.omega2, h))
}

/// Classical, semiclassical and revival periods at an energy point.
///
/// A field is `None` when the derivative it needs vanishes. Revival periods
/// carry the sign of the corresponding Hessian entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodSet {
    /// `2π / (∂F/∂X(E) ω1)`
    pub t_cl1: Option<f64>,
    /// `2π / (∂F/∂Y(E) ω2)`
    pub t_cl2: Option<f64>,
    /// `t_cl1` evaluated at `(τ_n0, μ_m0)`
    pub t_scl1: Option<f64>,
    /// `t_cl2` evaluated at `(τ_n0, μ_m0)`
    pub t_scl2: Option<f64>,
    /// `4π / (h ∂²F/∂X²(E) ω1²)`
    pub t_rev1: Option<f64>,
    /// `4π / (h ∂²F/∂Y²(E) ω2²)`
    pub t_rev2: Option<f64>,
    /// `4π / (h ∂²F/∂X∂Y(E) ω1 ω2)`
    pub t_rev12: Option<f64>,
    /// `t_rev1` evaluated at `(τ_n0, μ_m0)`
    pub t_srev1: Option<f64>,
    /// `t_rev2` evaluated at `(τ_n0, μ_m0)`
    pub t_srev2: Option<f64>,
    /// `t_rev12` evaluated at `(τ_n0, μ_m0)`
    pub t_srev12: Option<f64>,
    /// Semiclassical parameter.
    pub h: f64,
    /// Quantum numbers closest to the energy point.
    pub n0: u64,
    /// Second quantum number.
    pub m0: u64,
}

fn inv(num: f64, den: f64) -> Option<f64> {
    if den == 0.0 {
        None
    } else {
        Some(num / den)
    }
}

fn get(v: Option<f64>, which: &'static str) -> Result<f64> {
    v.ok_or(Error::PeriodUndefined { which })
}

impl PeriodSet {
    /// Classical period of axis 1.
    pub fn cl1(&self) -> Result<f64> {
        get(self.t_cl1, "t_cl1")
    }
    /// Classical period of axis 2.
    pub fn cl2(&self) -> Result<f64> {
        get(self.t_cl2, "t_cl2")
    }
    /// Semiclassical period of axis 1.
    pub fn scl1(&self) -> Result<f64> {
        get(self.t_scl1, "t_scl1")
    }
    /// Semiclassical period of axis 2.
    pub fn scl2(&self) -> Result<f64> {
        get(self.t_scl2, "t_scl2")
    }
    /// Revival period of axis 1.
    pub fn rev1(&self) -> Result<f64> {
        get(self.t_rev1, "t_rev1")
    }
    /// Revival period of axis 2.
    pub fn rev2(&self) -> Result<f64> {
        get(self.t_rev2, "t_rev2")
    }
    /// Mixed revival period.
    pub fn rev12(&self) -> Result<f64> {
        get(self.t_rev12, "t_rev12")
    }

    /// Larger of the two classical periods in absolute value.
    pub fn max_cl(&self) -> Result<f64> {
        Ok(math::abs(self.cl1()?).max(math::abs(self.cl2()?)))
    }
}

/// All period families of `F` at `e` for the given `h`.
pub fn period_set(f: &PolynomialF, e: &EnergyPoint, h: f64, osc: &OscillatorPair) -> Result<PeriodSet> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter("h must be positive"));
    }
    let (n0, m0) = closest_quantum_numbers(e, h, osc);
    let (w1, w2) = (osc.omega1, osc.omega2);
    let at_e = f.partials(e.e1, e.e2);
    let at_q = f.partials(
        oscillator_eigenvalue(Axis::One, n0, h, osc),
        oscillator_eigenvalue(Axis::Two, m0, h, osc),
    );
    Ok(PeriodSet {
        t_cl1: inv(2.0 * PI, at_e.gx * w1),
        t_cl2: inv(2.0 * PI, at_e.gy * w2),
        t_scl1: inv(2.0 * PI, at_q.gx * w1),
        t_scl2: inv(2.0 * PI, at_q.gy * w2),
        t_rev1: inv(4.0 * PI, h * at_e.hxx * w1 * w1),
        t_rev2: inv(4.0 * PI, h * at_e.hyy * w2 * w2),
        t_rev12: inv(4.0 * PI, h * at_e.hxy * w1 * w2),
        t_srev1: inv(4.0 * PI, h * at_q.hxx * w1 * w1),
        t_srev2: inv(4.0 * PI, h * at_q.hyy * w2 * w2),
        t_srev12: inv(4.0 * PI, h * at_q.hxy * w1 * w2),
        h,
        n0,
        m0,
    })
}
