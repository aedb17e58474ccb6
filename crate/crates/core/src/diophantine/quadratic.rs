use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::math;
use crate::{Error, Result};

/// Exact real `(p + q√d) / r` with `d` not a perfect square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticIrrational {
    p: i64,
    q: i64,
    d: u64,
    r: i64,
}

pub(crate) fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = math::sqrt(n as f64) as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

impl QuadraticIrrational {
    /// `(p + q√d) / r`; needs `q ≠ 0`, `r ≠ 0` and `d` not a square.
    pub fn new(p: i64, q: i64, d: u64, r: i64) -> Result<Self> {
        if q == 0 || r == 0 {
            return Err(Error::InvalidParameter("quadratic irrational needs q != 0 and r != 0"));
        }
        let s = isqrt(d as u128);
        if s * s == d as u128 {
            return Err(Error::InvalidParameter("d must not be a perfect square"));
        }
        Ok(Self { p, q, d, r })
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Result<Self> {
        Self::new(0, 1, n, 1)
    }

    /// `(1 + √5) / 2`.
    pub fn golden_ratio() -> Self {
        Self { p: 1, q: 1, d: 5, r: 2 }
    }

    /// Components `(p, q, d, r)`.
    pub fn parts(&self) -> (i64, i64, u64, i64) {
        (self.p, self.q, self.d, self.r)
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.q as f64 * math::sqrt(self.d as f64)) / self.r as f64
    }

    /// `(P, D, Q)` with `self = (P + √D)/Q` and `Q | D - P²`.
    pub(crate) fn canonical(&self) -> (i128, i128, i128) {
        let (mut p, q, mut r) = (self.p as i128, self.q as i128, self.r as i128);
        if q < 0 {
            p = -p;
            r = -r;
        }
        let mut d = q * q * self.d as i128;
        if (d - p * p) % r != 0 {
            let a = r.abs();
            p *= a;
            d *= r * r;
            r *= a;
        }
        (p, d, r)
    }
}

/// Sign of `a + b√d` for a non-square `d`.
pub(crate) fn sign_with_sqrt(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let zero = BigInt::zero();
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: compare a² with b² d
    let lhs = a * a;
    let rhs = b * b * BigInt::from(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact test of `|θ - p/q| ≤ 1/q²` for `θ = (P + √D)/Q`.
pub(crate) fn dirichlet_quadratic(theta: &QuadraticIrrational, p: &BigInt, q: &BigInt) -> bool {
    let (pp, dd, qq) = theta.canonical();
    let (pp, qq) = (BigInt::from(pp), BigInt::from(qq));
    // q |θq - p| ≤ 1  ⇔  |q (Pq - pQ) + q² √D| ≤ |Q|
    let x = q * (&pp * q - p * &qq);
    let y = q * q;
    let m = qq.abs();
    let d = dd as u64;
    // x + y√D ≤ |Q|  and  x + y√D ≥ -|Q|
    sign_with_sqrt(&(&x - &m), &y, d) != Ordering::Greater && sign_with_sqrt(&(&x + &m), &y, d) != Ordering::Less
}

/// `min q² |θ - p/q|` over `1 ≤ q ≤ q_max` with `p` the nearest integer to
/// `qθ`. The difference `qθ - p` is evaluated through the conjugate, so it
/// does not suffer cancellation.
pub fn diophantine_constant(theta: &QuadraticIrrational, q_max: u64) -> f64 {
    diophantine_constant_range(theta, 1, q_max)
}

/// Same minimum restricted to `q_min ≤ q ≤ q_max`.
pub fn diophantine_constant_range(theta: &QuadraticIrrational, q_min: u64, q_max: u64) -> f64 {
    let (pp, dd, qq) = theta.canonical();
    let sd = math::sqrt(dd as f64);
    let x = theta.to_f64();
    let mut best = f64::INFINITY;
    for q in q_min.max(1)..=q_max {
        let qi = q as i128;
        let p = math::round(x * q as f64) as i128;
        // qθ - p = (A + q√D)/Q with A = Pq - pQ; A + q√D = (A² - q²D)/(A - q√D)
        let a = pp * qi - p * qq;
        let num = a * a - qi * qi * dd;
        let conj = a as f64 - q as f64 * sd;
        let diff = if conj != 0.0 {
            num as f64 / (conj * qq as f64)
        } else {
            (a as f64 + q as f64 * sd) / qq as f64
        };
        let v = q as f64 * math::abs(diff);
        if v < best {
            best = v;
        }
    }
    best
}

/// Continued-fraction state `(P + √D)/Q`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct QuadraticState {
    p: i128,
    d: i128,
    q: i128,
    s: i128,
}

impl QuadraticState {
    pub(crate) fn new(theta: &QuadraticIrrational) -> Self {
        let (p, d, q) = theta.canonical();
        let s = isqrt(d as u128) as i128;
        Self { p, d, q, s }
    }

    /// Returns `floor(x)` and advances to `1/(x - floor(x))`.
    pub(crate) fn step(&mut self) -> i128 {
        let a = if self.q > 0 {
            Integer::div_floor(&(self.p + self.s), &self.q)
        } else {
            Integer::div_floor(&(self.p + self.s + 1), &self.q)
        };
        let p_next = a * self.q - self.p;
        let q_next = (self.d - p_next * p_next) / self.q;
        self.p = p_next;
        self.q = q_next;
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_divisibility() {
        for &(p, q, d, r) in &[(1, 1, 5, 2), (0, 1, 2, 1), (3, -2, 7, 5), (-4, 3, 11, -6)] {
            let t = QuadraticIrrational::new(p, q, d, r).unwrap();
            let (pp, dd, qq) = t.canonical();
            assert_eq!((dd - pp * pp) % qq, 0);
            let v = (pp as f64 + (dd as f64).sqrt()) / qq as f64;
            assert!((v - t.to_f64()).abs() < 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn rejects_squares() {
        assert!(QuadraticIrrational::sqrt(9).is_err());
        assert!(QuadraticIrrational::new(1, 0, 2, 1).is_err());
    }

    #[test]
    fn exact_sign() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(sign_with_sqrt(&b(-1), &b(1), 2), Ordering::Greater);
        assert_eq!(sign_with_sqrt(&b(-2), &b(1), 2), Ordering::Less);
        assert_eq!(sign_with_sqrt(&b(3), &b(-2), 2), Ordering::Greater);
        assert_eq!(sign_with_sqrt(&b(0), &b(-1), 3), Ordering::Less);
    }

    #[test]
    fn integer_square_root() {
        for n in 0u128..2000 {
            let s = isqrt(n);
            assert!(s * s <= n && (s + 1) * (s + 1) > n);
        }
        let big = (1u128 << 100) + 12345;
        let s = isqrt(big);
        assert!(s * s <= big && (s + 1) * (s + 1) > big);
    }
}
