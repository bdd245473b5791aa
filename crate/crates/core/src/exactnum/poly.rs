//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored from the constant term upward and the vector is
//! kept trimmed, so the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &BigRational) -> Self {
        Poly::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Poly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k - dd + j] -= t;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&(BigRational::one() / l)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(BigRational::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = match r0.leading() {
            Some(l) => BigRational::one() / l,
            None => BigRational::one(),
        };
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// The product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Canonical Sturm sequence of `self`.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_changes(&seq, a);
        let vb = sign_changes(&seq, b);
        va.saturating_sub(vb)
    }

    /// Integer coefficients if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Human-readable form such as `x^2 - 3*x + 1`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&mag.to_string());
                if i > 0 {
                    out.push('*');
                }
            }
            match i {
                0 => {}
                1 => out.push('x'),
                _ => out.push_str(&format!("x^{}", i)),
            }
        }
        out
    }
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Isolating interval `[lo, hi]` for the largest real root of a squarefree polynomial, with
/// endpoints that are not roots. Returns `None` when there is no real root.
pub fn isolate_largest_root(p: &Poly) -> Option<(BigRational, BigRational)> {
    let deg = p.degree()?;
    if deg == 0 {
        return None;
    }
    let lead = p.leading().unwrap().abs();
    let bound = BigRational::one()
        + p.coeffs().iter().take(deg).map(|c| c.abs() / &lead).max().unwrap_or_else(BigRational::zero);
    let mut lo = -bound.clone();
    let mut hi = bound;
    if p.count_roots(&lo, &hi) == 0 {
        return None;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    // shrink from below until exactly one root remains in (lo, hi]
    while p.count_roots(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if p.count_roots(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    loop {
        if p.sign_at(&hi) == 0 {
            let r = hi.clone();
            let w = &r - &lo;
            lo = &r - &w / &two;
            hi = &r + &w / &two;
        } else if p.sign_at(&lo) == 0 {
            let mid = (&lo + &hi) / &two;
            if p.count_roots(&mid, &hi) == 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        } else {
            break;
        }
    }
    Some((lo, hi))
}

/// Positive divisors of a nonzero integer by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integer roots of a monic polynomial with integer coefficients (no multiplicities).
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let p = Poly::from_ints(coeffs);
    let mut roots = Vec::new();
    // strip the factor x^k first
    let k = coeffs.iter().take_while(|c| c.is_zero()).count();
    if k > 0 {
        roots.push(BigInt::zero());
    }
    if let Some(c0) = coeffs.get(k) {
        if coeffs.len() - k > 1 {
            for d in divisors(c0) {
                for cand in [d.clone(), -d] {
                    if p.eval(&BigRational::from_integer(cand.clone())).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Splits a monic integer quartic into two monic integer quadratics if possible.
pub fn quartic_quadratic_split(coeffs: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    if coeffs.len() != 5 || !coeffs[4].is_one() {
        return None;
    }
    let (a0, a1, a2, a3) = (&coeffs[0], &coeffs[1], &coeffs[2], &coeffs[3]);
    if a0.is_zero() {
        return None;
    }
    // (x^2 + a x + b)(x^2 + c x + d)
    for bp in divisors(a0) {
        for b in [bp.clone(), -bp] {
            let d = a0 / &b;
            // a + c = a3, a c = a2 - b - d
            let s = a3;
            let prod = a2 - &b - &d;
            let disc = s * s - BigInt::from(4) * &prod;
            if disc.is_negative() {
                continue;
            }
            let r = disc.sqrt();
            if &r * &r != disc {
                continue;
            }
            for a in [(s + &r), (s - &r)] {
                if a.is_odd() {
                    continue;
                }
                let a = a / 2;
                let c = s - &a;
                if &a * &d + &b * &c == *a1 {
                    return Some((vec![b.clone(), a, BigInt::one()], vec![d.clone(), c, BigInt::one()]));
                }
            }
        }
    }
    None
}

/// Irreducibility over the rationals for monic integer polynomials of degree at most 4.
/// Returns `None` when the degree is outside the supported range.
pub fn is_irreducible_small(coeffs: &[BigInt]) -> Option<bool> {
    let deg = coeffs.len().checked_sub(1)?;
    match deg {
        0 => Some(false),
        1 => Some(true),
        2 | 3 => Some(integer_roots(coeffs).is_empty()),
        4 => Some(integer_roots(coeffs).is_empty() && quartic_quadratic_split(coeffs).is_none()),
        _ => None,
    }
}
