use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quadratic::{dirichlet_quadratic, QuadraticIrrational, QuadraticState};
use crate::math;
use crate::{Error, Result};

/// Number to expand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CfInput {
    /// Floating-point value; the expansion stops when precision runs out.
    Float(f64),
    /// Exact `num / den`; the expansion is finite.
    Rational {
        /// Numerator.
        num: i64,
        /// Denominator.
        den: i64,
    },
    /// Exact quadratic irrational; the expansion never runs out.
    Quadratic(QuadraticIrrational),
}

impl CfInput {
    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        match *self {
            CfInput::Float(x) => x,
            CfInput::Rational { num, den } => num as f64 / den as f64,
            CfInput::Quadratic(q) => q.to_f64(),
        }
    }
}

/// Partial quotients and convergents `p_k / q_k` of a positive real.
///
/// Indexing starts at `k = 0` with `p_0/q_0 = a_0/1`. For the golden ratio
/// `q_k` is the Fibonacci number `F_{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentSequence {
    theta: CfInput,
    partial_quotients: Vec<u64>,
    convergents: Vec<(BigUint, BigUint)>,
    exhausted: bool,
}

impl ConvergentSequence {
    /// Expanded number.
    pub fn theta(&self) -> &CfInput {
        &self.theta
    }

    /// `a_0, a_1, ...`
    pub fn partial_quotients(&self) -> &[u64] {
        &self.partial_quotients
    }

    /// `(p_k, q_k)` pairs.
    pub fn convergents(&self) -> &[(BigUint, BigUint)] {
        &self.convergents
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    /// True when no term was produced.
    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    /// True when a floating input ran out of precision before the requested
    /// number of terms.
    pub fn precision_exhausted(&self) -> bool {
        self.exhausted
    }

    /// `p_k`.
    pub fn p(&self, k: usize) -> &BigUint {
        &self.convergents[k].0
    }

    /// `q_k`.
    pub fn q(&self, k: usize) -> &BigUint {
        &self.convergents[k].1
    }

    /// `p_k` as `f64`.
    pub fn p_f64(&self, k: usize) -> f64 {
        self.p(k).to_f64().unwrap_or(f64::INFINITY)
    }

    /// `q_k` as `f64`.
    pub fn q_f64(&self, k: usize) -> f64 {
        self.q(k).to_f64().unwrap_or(f64::INFINITY)
    }

    /// Exact test of `|θ - p_k/q_k| ≤ 1/q_k²`. Floating inputs are taken as
    /// the exact binary value they hold.
    pub fn dirichlet_holds(&self, k: usize) -> bool {
        let p = BigInt::from(self.p(k).clone());
        let q = BigInt::from(self.q(k).clone());
        let ratio = |num: BigInt, den: BigInt| {
            // |num q - p den| q ≤ den
            (&num * &q - &p * &den).abs() * &q <= den
        };
        match self.theta {
            CfInput::Float(x) => {
                let (num, den) = exact_ratio(x);
                ratio(num, den)
            }
            CfInput::Rational { num, den } => ratio(BigInt::from(num), BigInt::from(den)),
            CfInput::Quadratic(t) => dirichlet_quadratic(&t, &p, &q),
        }
    }

    fn push(&mut self, a: u64) {
        let n = self.convergents.len();
        let (pm1, qm1, pm2, qm2) = match n {
            0 => (BigUint::one(), BigUint::zero(), BigUint::zero(), BigUint::one()),
            1 => (
                self.convergents[0].0.clone(),
                self.convergents[0].1.clone(),
                BigUint::one(),
                BigUint::zero(),
            ),
            _ => (
                self.convergents[n - 1].0.clone(),
                self.convergents[n - 1].1.clone(),
                self.convergents[n - 2].0.clone(),
                self.convergents[n - 2].1.clone(),
            ),
        };
        let a_big = BigUint::from(a);
        self.convergents.push((&a_big * pm1 + pm2, a_big * qm1 + qm2));
        self.partial_quotients.push(a);
    }
}

/// `x` as an exact ratio of integers.
fn exact_ratio(x: f64) -> (BigInt, BigInt) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant) * sign;
    if e >= 0 {
        (m << e as usize, BigInt::one())
    } else {
        (m, BigInt::one() << (-e) as usize)
    }
}

/// Expands up to `max_terms` partial quotients, stopping silently at the end
/// of a rational expansion or when a floating input runs out of precision.
pub fn cf_expand_truncated(theta: &CfInput, max_terms: usize) -> Result<ConvergentSequence> {
    if !(theta.to_f64() > 0.0) {
        return Err(Error::InvalidParameter("continued fractions need a positive number"));
    }
    if let CfInput::Rational { den, .. } = theta {
        if *den <= 0 {
            return Err(Error::InvalidParameter("denominator must be positive"));
        }
    }
    let mut seq = ConvergentSequence {
        theta: *theta,
        partial_quotients: Vec::new(),
        convergents: Vec::new(),
        exhausted: false,
    };
    match *theta {
        CfInput::Float(x) => {
            if x >= 9.0e18 {
                return Err(Error::InvalidParameter("floating input too large to expand"));
            }
            // the binary value is expanded exactly; only the stopping rule is approximate
            let (mut n, mut d) = exact_ratio(x);
            let scale = BigInt::from(1_000_000_000_000u64);
            while seq.len() < max_terms {
                let (a, r) = n.div_mod_floor(&d);
                seq.push(a.to_u64().unwrap_or(u64::MAX));
                if seq.len() == max_terms {
                    break;
                }
                if &r * &scale < d || (&d - &r) * &scale < d {
                    seq.exhausted = true;
                    break;
                }
                n = d;
                d = r;
            }
        }
        CfInput::Rational { num, den } => {
            let (mut n, mut d) = (num as i128, den as i128);
            while seq.len() < max_terms && d != 0 {
                let a = n.div_euclid(d);
                seq.push(a as u64);
                let r = n - a * d;
                n = d;
                d = r;
            }
        }
        CfInput::Quadratic(q) => {
            let mut st = QuadraticState::new(&q);
            while seq.len() < max_terms {
                seq.push(st.step() as u64);
            }
        }
    }
    Ok(seq)
}

/// Expands `max_terms` partial quotients.
///
/// Floating inputs fail with [`Error::PrecisionExhausted`] when the residual
/// comes within `1e-12` of an integer first.
pub fn cf_expand(theta: &CfInput, max_terms: usize) -> Result<ConvergentSequence> {
    let seq = cf_expand_truncated(theta, max_terms)?;
    if seq.exhausted {
        return Err(Error::PrecisionExhausted { terms: seq.len() });
    }
    Ok(seq)
}

/// Smallest-denominator convergent `p/q` of `x` with `q ≤ max_den` and
/// `|x - p/q| ≤ rel_tol |x|`.
pub fn rationalize(x: f64, max_den: u64, rel_tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some((0, 1));
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let ax = math::abs(x);
    let (mut p1, mut q1, mut p2, mut q2) = (1i128, 0i128, 0i128, 1i128);
    let mut y = ax;
    for _ in 0..64 {
        let a = math::floor(y);
        if a > 1e15 {
            return None;
        }
        let a = a as i128;
        let (p, q) = (a * p1 + p2, a * q1 + q2);
        if q > max_den as i128 {
            return None;
        }
        if math::abs(ax - p as f64 / q as f64) <= rel_tol * ax {
            return Some((sign * p as i64, q as i64));
        }
        let r = y - a as f64;
        if r == 0.0 {
            return None;
        }
        y = 1.0 / r;
        (p2, q2, p1, q1) = (p1, q1, p, q);
    }
    None
}

/// Fibonacci number `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}
