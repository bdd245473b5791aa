//! Dyadic rationals and certified interval enclosures built on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A number of the form `mantissa * 2^exp`, kept normalized (odd mantissa or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mantissa, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mantissa.trailing_zeros() {
            if tz > 0 {
                self.mantissa >>= tz as usize;
                self.exp += tz as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i8 {
        if self.mantissa.is_zero() {
            0
        } else if self.mantissa.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exp: self.exp }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mantissa << (self.exp as usize))
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Largest dyadic with `bits` fractional bits that is `<= r`.
    pub fn floor_of(r: &BigRational, bits: u32) -> Self {
        let scaled = r * BigRational::from_integer(BigInt::one() << bits as usize);
        Dyadic::new(scaled.floor().to_integer(), -(bits as i64))
    }

    /// Smallest dyadic with `bits` fractional bits that is `>= r`.
    pub fn ceil_of(r: &BigRational, bits: u32) -> Self {
        let scaled = r * BigRational::from_integer(BigInt::one() << bits as usize);
        Dyadic::new(scaled.ceil().to_integer(), -(bits as i64))
    }

    /// Round toward -inf keeping at most `bits` fractional bits.
    pub fn round_down(&self, bits: u32) -> Self {
        let target = -(bits as i64);
        if self.exp >= target {
            return self.clone();
        }
        let shift = (target - self.exp) as usize;
        let m = self.mantissa.div_floor(&(BigInt::one() << shift));
        Dyadic::new(m, target)
    }

    /// Round toward +inf keeping at most `bits` fractional bits.
    pub fn round_up(&self, bits: u32) -> Self {
        -(-self).round_down(bits)
    }

    /// Floor as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mantissa << (self.exp as usize)
        } else {
            self.mantissa.div_floor(&(BigInt::one() << ((-self.exp) as usize)))
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let ma = &a.mantissa << ((a.exp - e) as usize);
        let mb = &b.mantissa << ((b.exp - e) as usize);
        (ma, mb, e)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exp: self.exp }
    }
}

/// Which way a decimal rendering rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Render `r` in scientific notation with `digits` significant digits, rounded
/// in the requested direction so enclosures stay valid after printing.
pub fn format_scientific(r: &BigRational, digits: usize, rounding: Rounding) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let ten = BigInt::from(10u32);
    let abs = r.abs();
    // decimal exponent e with 10^e <= |r| < 10^(e+1)
    let mut e: i64 = {
        let num_digits = abs.numer().to_string().len() as i64;
        let den_digits = abs.denom().to_string().len() as i64;
        num_digits - den_digits
    };
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }
    let scale = pow10(digits as i64 - 1 - e);
    let scaled = r * scale;
    let m = match rounding {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    let neg = m.is_negative();
    let mut s = m.abs().to_string();
    let mut e = e;
    if s.len() > digits {
        // rounding carried into a new digit (e.g. 9.99 -> 10.0)
        e += (s.len() - digits) as i64;
        s.truncate(digits);
    }
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if e != 0 {
        out.push_str(&format!("e{}", e));
    }
    out
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
}

impl IntervalReal {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalReal { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        IntervalReal { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        IntervalReal::point(Dyadic::zero())
    }

    /// Outward-rounded enclosure of a rational with `bits` fractional bits.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        IntervalReal { lo: Dyadic::floor_of(r, bits), hi: Dyadic::ceil_of(r, bits) }
    }

    /// Enclosure of `[lo, hi]` for rational endpoints.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, bits: u32) -> Self {
        IntervalReal::new(Dyadic::floor_of(lo, bits), Dyadic::ceil_of(hi, bits))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_interval(&self, other: &IntervalReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certified sign, or `None` when the enclosure straddles zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn abs(&self) -> IntervalReal {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            IntervalReal { lo: -&self.hi, hi: -&self.lo }
        } else {
            let hi = std::cmp::max(self.lo.abs(), self.hi.abs());
            IntervalReal { lo: Dyadic::zero(), hi }
        }
    }

    /// Pointwise maximum of two enclosures.
    pub fn max(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: std::cmp::max(self.lo.clone(), other.lo.clone()),
            hi: std::cmp::max(self.hi.clone(), other.hi.clone()),
        }
    }

    /// Round endpoints outward to at most `bits` fractional bits.
    pub fn round_outward(&self, bits: u32) -> IntervalReal {
        IntervalReal { lo: self.lo.round_down(bits), hi: self.hi.round_up(bits) }
    }

    /// True when every point of the enclosure is strictly below `bound`.
    pub fn certainly_below(&self, bound: &BigRational) -> bool {
        &self.hi.to_rational() < bound
    }

    /// `"interval:[lo,hi]"` with outward decimal rounding.
    pub fn tagged(&self) -> String {
        format!(
            "interval:[{},{}]",
            format_scientific(&self.lo.to_rational(), 12, Rounding::Down),
            format_scientific(&self.hi.to_rational(), 12, Rounding::Up)
        )
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tagged())
    }
}

impl Add for &IntervalReal {
    type Output = IntervalReal;
    fn add(self, rhs: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &IntervalReal {
    type Output = IntervalReal;
    fn sub(self, rhs: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &IntervalReal {
    type Output = IntervalReal;
    fn mul(self, rhs: &IntervalReal) -> IntervalReal {
        let products = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        IntervalReal { lo, hi }
    }
}

impl Neg for &IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        IntervalReal { lo: -&self.hi, hi: -&self.lo }
    }
}

/// Enclosure of the positive `n`-th root of a positive rational, `bits` fractional bits.
pub fn nth_root_enclosure(r: &BigRational, n: u32, bits: u32) -> IntervalReal {
    assert!(n >= 1 && !r.is_negative());
    if r.is_zero() {
        return IntervalReal::zero();
    }
    let pow = |x: &BigRational| num_traits::pow(x.clone(), n as usize);
    let mut lo = BigRational::zero();
    let mut hi = if r > &BigRational::one() { r.clone() } else { BigRational::one() };
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (bits as usize + 1));
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        if &pow(&mid) <= r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    IntervalReal::from_rational_bounds(&lo, &hi, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dyadic_normalizes_and_orders() {
        let a = Dyadic::new(BigInt::from(12), -3); // 3/2
        assert_eq!(a.mantissa(), &BigInt::from(3));
        assert_eq!(a.exponent(), -1);
        assert_eq!(a.to_rational(), q(3, 2));
        let b = Dyadic::from_int(1);
        assert!(b < a);
        assert_eq!((&a - &b).to_rational(), q(1, 2));
        assert_eq!(a.floor(), BigInt::from(1));
        assert_eq!((-a).floor(), BigInt::from(-2));
    }

    #[test]
    fn rational_enclosure_is_outward() {
        let third = q(1, 3);
        let i = IntervalReal::from_rational(&third, 20);
        assert!(i.contains(&third));
        assert!(i.width().to_rational() <= q(1, 1 << 20));
        assert_eq!(i.sign(), Some(1));
    }

    #[test]
    fn interval_mul_handles_signs() {
        let a = IntervalReal::from_rational_bounds(&q(-1, 2), &q(1, 1), 8);
        let b = IntervalReal::from_rational_bounds(&q(-2, 1), &q(3, 1), 8);
        let p = &a * &b;
        assert_eq!(p.lo().to_rational(), q(-2, 1));
        assert_eq!(p.hi().to_rational(), q(3, 1));
        assert_eq!(a.abs().lo().to_rational(), q(0, 1));
    }

    #[test]
    fn scientific_formatting_rounds_outward() {
        let r = q(1, 3);
        assert_eq!(format_scientific(&r, 4, Rounding::Down), "3.333e-1");
        assert_eq!(format_scientific(&r, 4, Rounding::Up), "3.334e-1");
        assert_eq!(format_scientific(&q(-1, 3), 4, Rounding::Down), "-3.334e-1");
        assert_eq!(format_scientific(&q(999, 1), 2, Rounding::Up), "1e3");
        assert_eq!(format_scientific(&q(5, 1), 12, Rounding::Up), "5");
    }

    #[test]
    fn nth_root_brackets() {
        let r = nth_root_enclosure(&q(2, 1), 2, 40);
        assert!(r.lo().to_rational() * r.lo().to_rational() <= q(2, 1));
        assert!(r.hi().to_rational() * r.hi().to_rational() >= q(2, 1));
    }
}
