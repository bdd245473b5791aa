//! Real number fields `Q(theta)` given by a monic irreducible minimal polynomial and an
//! isolating interval for one real root. Elements are stored in the power basis.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::IntervalReal;
use super::poly::{is_irreducible_small, Poly};
use super::FieldError;

/// Options controlling validation in [`NumberField::create`].
#[derive(Clone, Copy, Debug)]
pub struct FieldOptions {
    pub max_degree: usize,
    /// When false the caller asserts irreducibility and no factor search is done.
    pub check_irreducible: bool,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions { max_degree: 4, check_irreducible: true }
    }
}

struct FieldInner {
    minpoly: Vec<BigInt>,
    poly: Poly,
    root_interval: (BigRational, BigRational),
    /// `Some(D)` when the minimal polynomial is `x^2 - D` and theta is the positive root.
    sqrt_of: Option<BigInt>,
    /// Successive bisections of the root interval; entry `k` has width `w / 2^k`.
    brackets: Mutex<Vec<(BigRational, BigRational)>>,
}

/// Shared handle to a validated real number field.
#[derive(Clone)]
pub struct NumberField(Arc<FieldInner>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.describe())
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for NumberField {}

fn q_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Squarefree part of a nonzero integer, keeping its sign, and the square cofactor `s` with `n = s^2 * D`.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut core = BigInt::one();
    let mut square = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            square *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += 1;
    }
    core *= m;
    (sign * core, square)
}

impl NumberField {
    /// Validate `minpoly` (ascending integer coefficients) and the isolating interval.
    pub fn create(
        minpoly: &[BigInt],
        root_interval: (BigRational, BigRational),
        opts: FieldOptions,
    ) -> Result<Self, FieldError> {
        if minpoly.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(FieldError::NotMonic);
        }
        let degree = minpoly.len() - 1;
        if degree > opts.max_degree {
            return Err(FieldError::DegreeTooLarge { degree, max: opts.max_degree });
        }
        if opts.check_irreducible {
            match is_irreducible_small(minpoly) {
                Some(true) => {}
                Some(false) => return Err(FieldError::Reducible),
                None => return Err(FieldError::IrreducibilityUnchecked { degree }),
            }
        }
        let (lo, hi) = root_interval;
        if lo >= hi {
            return Err(FieldError::NoSignChange);
        }
        let poly = Poly::from_ints(minpoly);
        let (slo, shi) = (poly.sign_at(&lo), poly.sign_at(&hi));
        if slo == 0 || shi == 0 || slo == shi {
            return Err(FieldError::NoSignChange);
        }
        if poly.count_roots(&lo, &hi) != 1 {
            return Err(FieldError::NotIsolating);
        }
        let sqrt_of =
            if degree == 2 && minpoly[1].is_zero() && lo.is_positive() { Some(-minpoly[0].clone()) } else { None };
        Ok(NumberField(Arc::new(FieldInner {
            minpoly: minpoly.to_vec(),
            poly,
            root_interval: (lo.clone(), hi.clone()),
            sqrt_of,
            brackets: Mutex::new(vec![(lo, hi)]),
        })))
    }

    /// The field of rationals, represented by `x` with root 0 in `[-1, 1]`.
    pub fn rational() -> Self {
        static Q: OnceLock<NumberField> = OnceLock::new();
        Q.get_or_init(|| {
            NumberField::create(&[BigInt::zero(), BigInt::one()], (q_int(-1), q_int(1)), FieldOptions::default())
                .expect("rational field")
        })
        .clone()
    }

    /// Canonical `Q(sqrt(d))` with squarefree positive `d`; falls back to the rationals when
    /// `d` is a perfect square.
    pub fn quadratic(d: &BigInt) -> Result<Self, FieldError> {
        if !d.is_positive() {
            return Err(FieldError::NotReal);
        }
        let (core, _) = squarefree_decompose(d);
        if core.is_one() {
            return Ok(NumberField::rational());
        }
        let r = core.sqrt();
        NumberField::create(
            &[-core.clone(), BigInt::zero(), BigInt::one()],
            (BigRational::from_integer(r.clone()), BigRational::from_integer(r + 1)),
            FieldOptions::default(),
        )
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }

    pub fn min_poly(&self) -> &Poly {
        &self.0.poly
    }

    pub fn root_interval(&self) -> &(BigRational, BigRational) {
        &self.0.root_interval
    }

    /// `Some(D)` when this is `Q(sqrt(D))` with theta = +sqrt(D).
    pub fn sqrt_radicand(&self) -> Option<&BigInt> {
        self.0.sqrt_of.as_ref()
    }

    /// True when both handles denote the same embedded field.
    pub fn same_as(&self, other: &NumberField) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.is_rational() && other.is_rational() {
            return true;
        }
        if self.0.minpoly != other.0.minpoly {
            return false;
        }
        let (a0, a1) = &self.0.root_interval;
        let (b0, b1) = &other.0.root_interval;
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        lo < hi && self.0.poly.count_roots(lo, hi) == 1
    }

    pub fn describe(&self) -> String {
        if self.is_rational() {
            return "Q".to_string();
        }
        if let Some(d) = &self.0.sqrt_of {
            return format!("Q(sqrt({}))", d);
        }
        let (lo, hi) = &self.0.root_interval;
        format!("Q(theta), {} = 0, theta in [{}, {}]", self.0.poly.pretty(), lo, hi)
    }

    /// Isolating bracket after `depth` bisections.
    fn bracket(&self, depth: usize) -> (BigRational, BigRational) {
        let mut cache = self.0.brackets.lock().unwrap_or_else(|e| e.into_inner());
        while cache.len() <= depth {
            let (lo, hi) = cache.last().unwrap().clone();
            let mid = (&lo + &hi) / q_int(2);
            let s = self.0.poly.sign_at(&mid);
            let next = if s == 0 {
                (mid.clone(), mid)
            } else if s == self.0.poly.sign_at(&lo) {
                (mid, hi)
            } else {
                (lo, mid)
            };
            cache.push(next);
        }
        cache[depth].clone()
    }

    /// Certified enclosure of theta with `bits` fractional bits of accuracy.
    pub fn theta_enclosure(&self, bits: u32) -> IntervalReal {
        let one = FieldElement::theta(self);
        one.enclose(bits)
    }
}

/// An element of a [`NumberField`] in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

/// Arithmetic selector for [`elem_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Fallible arithmetic on two elements of the same field.
pub fn elem_arith(op: ArithOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    if !a.field.same_as(&b.field) {
        return Err(FieldError::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a.add_same(b),
        ArithOp::Sub => a.sub_same(b),
        ArithOp::Mul => a.mul_same(b),
        ArithOp::Div => a.mul_same(&b.inv()?),
    })
}

/// Split `a = z + f` with `z` an integer and `f` in `[-1/2, 1/2)`.
pub fn nearest_integer_split(a: &FieldElement) -> (BigInt, FieldElement) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let z = a.add_rational(&half).floor();
    let f = a.sub_rational(&BigRational::from_integer(z.clone()));
    (z, f)
}

fn interval_mul(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

impl FieldElement {
    pub fn new(field: &NumberField, coords: Vec<BigRational>) -> Result<Self, FieldError> {
        if coords.len() != field.degree() {
            return Err(FieldError::CoordLength { expected: field.degree(), got: coords.len() });
        }
        Ok(FieldElement { field: field.clone(), coords })
    }

    pub fn zero(field: &NumberField) -> Self {
        FieldElement { field: field.clone(), coords: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &NumberField) -> Self {
        FieldElement::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &NumberField, r: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = r;
        FieldElement { field: field.clone(), coords }
    }

    pub fn from_int(field: &NumberField, n: impl Into<BigInt>) -> Self {
        FieldElement::from_rational(field, q_int(n))
    }

    /// The generator theta (for the rational field this is the constant root).
    pub fn theta(field: &NumberField) -> Self {
        if field.is_rational() {
            let c = -field.minpoly()[0].clone();
            return FieldElement::from_int(field, c);
        }
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[1] = BigRational::one();
        FieldElement { field: field.clone(), coords }
    }

    fn from_poly(field: &NumberField, p: &Poly) -> Self {
        let r = p.rem(field.min_poly());
        let mut coords = r.coeffs().to_vec();
        coords.resize(field.degree(), BigRational::zero());
        FieldElement { field: field.clone(), coords }
    }

    fn as_poly(&self) -> Poly {
        Poly::new(self.coords.clone())
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.coords[0].is_integer()
    }

    /// Re-express this element in `target`; succeeds for identical fields or rational values.
    pub fn coerce(&self, target: &NumberField) -> Option<FieldElement> {
        if self.field.same_as(target) && self.field.degree() == target.degree() {
            return Some(FieldElement { field: target.clone(), coords: self.coords.clone() });
        }
        self.to_rational().map(|r| FieldElement::from_rational(target, r))
    }

    fn add_same(&self, other: &FieldElement) -> FieldElement {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    fn sub_same(&self, other: &FieldElement) -> FieldElement {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    fn mul_same(&self, other: &FieldElement) -> FieldElement {
        if self.field.is_rational() {
            return FieldElement::from_rational(&self.field, &self.coords[0] * &other.coords[0]);
        }
        if let Some(d) = self.field.sqrt_radicand() {
            let (a, b) = (&self.coords[0], &self.coords[1]);
            let (c, e) = (&other.coords[0], &other.coords[1]);
            let d = BigRational::from_integer(d.clone());
            return FieldElement { field: self.field.clone(), coords: vec![a * c + b * e * d, a * e + b * c] };
        }
        FieldElement::from_poly(&self.field, &self.as_poly().mul(&other.as_poly()))
    }

    pub fn add_rational(&self, r: &BigRational) -> FieldElement {
        let mut out = self.clone();
        out.coords[0] += r;
        out
    }

    pub fn sub_rational(&self, r: &BigRational) -> FieldElement {
        let mut out = self.clone();
        out.coords[0] -= r;
        out
    }

    pub fn scale(&self, r: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * r).collect() }
    }

    pub fn mul_int(&self, n: &BigInt) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * n).collect() }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(FieldElement::from_rational(&self.field, BigRational::one() / r));
        }
        if let Some(d) = self.field.sqrt_radicand() {
            let (a, b) = (&self.coords[0], &self.coords[1]);
            let norm = a * a - b * b * BigRational::from_integer(d.clone());
            return Ok(FieldElement { field: self.field.clone(), coords: vec![a / &norm, -b / &norm] });
        }
        let (g, s, _) = self.as_poly().ext_gcd(self.field.min_poly());
        debug_assert_eq!(g.degree(), Some(0));
        Ok(FieldElement::from_poly(&self.field, &s))
    }

    /// Certified sign.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.to_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        if let Some(d) = self.field.sqrt_radicand() {
            return sign_a_plus_b_sqrt(&self.coords[0], &self.coords[1], d);
        }
        let mut depth = 8;
        loop {
            if let Some(s) = self.rational_enclosure_at(depth).sign() {
                return s;
            }
            depth += 8;
        }
    }

    pub fn cmp_elem(&self, other: &FieldElement) -> Ordering {
        match self.sub_same(other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> FieldElement {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the element.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.to_rational() {
            return r.floor().to_integer();
        }
        if let Some(d) = self.field.sqrt_radicand() {
            // (p + r sqrt(D)) / q with q > 0
            let a = &self.coords[0];
            let b = &self.coords[1];
            let q = a.denom().lcm(b.denom());
            let p = (a * BigRational::from_integer(q.clone())).to_integer();
            let r = (b * BigRational::from_integer(q.clone())).to_integer();
            let rr: BigInt = &r * &r * d;
            let s: BigInt = rr.sqrt();
            let floor_y: BigInt = if r.is_negative() { -(s + BigInt::one()) } else { s };
            let total: BigInt = p + floor_y;
            return total.div_floor(&q);
        }
        let mut depth = 8;
        loop {
            let enc = self.rational_enclosure_at(depth);
            let lo = enc.0.floor().to_integer();
            if lo == enc.1.floor().to_integer() {
                return lo;
            }
            depth += 8;
        }
    }

    fn rational_enclosure_at(&self, depth: usize) -> RatInterval {
        let b = self.field.bracket(depth);
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in self.coords.iter().rev() {
            let m = interval_mul(&acc, &b);
            acc = (m.0 + c, m.1 + c);
        }
        RatInterval(acc.0, acc.1)
    }

    /// Certified enclosure of width at most `2^-bits`, with dyadic endpoints.
    pub fn enclose(&self, bits: u32) -> IntervalReal {
        if let Some(r) = self.to_rational() {
            return IntervalReal::from_rational(&r, bits + 2);
        }
        if let Some(d) = self.field.sqrt_radicand() {
            // a + b*sqrt(D) with sqrt(D) bracketed by an integer square root
            let (a, b) = (&self.coords[0], &self.coords[1]);
            let bmag = b.abs().ceil().to_integer().bits() as usize;
            let k = bits as usize + 2 + bmag;
            let s = (d << (2 * k)).sqrt();
            let den = BigInt::one() << k;
            let lo_r = BigRational::new(s.clone(), den.clone());
            let hi_r = BigRational::new(s + 1, den);
            let (x, y) = (a + b * &lo_r, a + b * &hi_r);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            return IntervalReal::from_rational_bounds(&lo, &hi, bits + 2);
        }
        let target = BigRational::new(BigInt::one(), BigInt::one() << (bits as usize + 1));
        let mut depth = bits as usize + 8;
        loop {
            let enc = self.rational_enclosure_at(depth);
            if &enc.1 - &enc.0 <= target {
                return IntervalReal::from_rational_bounds(&enc.0, &enc.1, bits + 2);
            }
            depth += 16;
        }
    }

    /// Enclosure whose width is at most `2^-rel_bits` times the magnitude of the value.
    /// Zero gives the point interval.
    pub fn enclose_relative(&self, rel_bits: u32) -> IntervalReal {
        if self.is_zero() {
            return IntervalReal::zero();
        }
        let mut bits = rel_bits + 32;
        loop {
            let e = self.enclose(bits);
            if !e.contains_zero() {
                let mag = e.lo().to_rational().abs().min(e.hi().to_rational().abs());
                let w = e.width().to_rational();
                if w * BigRational::from_integer(BigInt::one() << rel_bits as usize) <= mag {
                    return e;
                }
            }
            bits *= 2;
        }
    }

    /// Integer-power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = FieldElement::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact textual form, also accepted by the expression parser.
    pub fn exact_string(&self) -> String {
        if let Some(r) = self.to_rational() {
            return r.to_string();
        }
        if let Some(d) = self.field.sqrt_radicand() {
            let q = self.coords[0].denom().lcm(self.coords[1].denom());
            let qa = BigRational::from_integer(q.clone());
            let a = (&self.coords[0] * &qa).to_integer();
            let b = (&self.coords[1] * &qa).to_integer();
            let root = if b.abs().is_one() { format!("sqrt({})", d) } else { format!("{}*sqrt({})", b.abs(), d) };
            let body = match (a.is_zero(), b.is_negative()) {
                (true, false) => root,
                (true, true) => format!("-{}", root),
                (false, neg) => format!("{}{}{}", a, if neg { "-" } else { "+" }, root),
            };
            return if q.is_one() { body } else { format!("({})/{}", body, q) };
        }
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        let (lo, hi) = self.field.root_interval();
        format!("coords:[{}]@{}@[{},{}]", coords.join(","), self.field.min_poly().pretty(), lo, hi)
    }
}

struct RatInterval(BigRational, BigRational);

impl RatInterval {
    fn sign(&self) -> Option<i8> {
        if self.0.is_positive() {
            Some(1)
        } else if self.1.is_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

/// Exact sign of `a + b*sqrt(d)` for positive non-square `d`.
fn sign_a_plus_b_sqrt(a: &BigRational, b: &BigRational, d: &BigInt) -> i8 {
    let sa = a.signum();
    let sb = b.signum();
    let (sa, sb) = (sign_of(&sa), sign_of(&sb));
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with b^2 d
    let lhs = a * a;
    let rhs = b * b * BigRational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact_string())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        elem_arith(ArithOp::Add, self, rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        elem_arith(ArithOp::Sub, self, rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        elem_arith(ArithOp::Mul, self, rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    minpoly: Vec<String>,
    root_interval: [String; 2],
    coords: Vec<String>,
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.field.root_interval();
        ElementRepr {
            minpoly: self.field.minpoly().iter().map(|c| c.to_string()).collect(),
            root_interval: [lo.to_string(), hi.to_string()],
            coords: self.coords.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ElementRepr::deserialize(d)?;
        let parse_int = |s: &String| s.parse::<BigInt>().map_err(D::Error::custom);
        let parse_q = |s: &String| s.parse::<BigRational>().map_err(D::Error::custom);
        let minpoly = repr.minpoly.iter().map(parse_int).collect::<Result<Vec<_>, _>>()?;
        let lo = parse_q(&repr.root_interval[0])?;
        let hi = parse_q(&repr.root_interval[1])?;
        let field = NumberField::create(&minpoly, (lo, hi), FieldOptions::default()).map_err(D::Error::custom)?;
        let coords = repr.coords.iter().map(parse_q).collect::<Result<Vec<_>, _>>()?;
        FieldElement::new(&field, coords).map_err(D::Error::custom)
    }
}

/// Lower and upper dyadic bounds of a field element's enclosure as rationals.
pub fn enclosure_bounds(a: &FieldElement, bits: u32) -> (BigRational, BigRational) {
    let e = a.enclose(bits);
    (e.lo().to_rational(), e.hi().to_rational())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt5() -> NumberField {
        NumberField::create(&ints(&[-5, 0, 1]), (q(2, 1), q(3, 1)), FieldOptions::default()).unwrap()
    }

    fn golden_alpha(f: &NumberField) -> FieldElement {
        FieldElement::new(f, vec![q(-1, 2), q(1, 2)]).unwrap()
    }

    #[test]
    fn create_validates() {
        assert!(sqrt5().sqrt_radicand().is_some());
        let rat = NumberField::create(&ints(&[-1, 1]), (q(0, 1), q(2, 1)), FieldOptions::default()).unwrap();
        assert!(rat.is_rational());
        assert_eq!(
            NumberField::create(&ints(&[-4, 0, 1]), (q(1, 1), q(3, 1)), FieldOptions::default()).unwrap_err(),
            FieldError::Reducible
        );
        assert_eq!(
            NumberField::create(&ints(&[-5, 0, 1]), (q(3, 1), q(4, 1)), FieldOptions::default()).unwrap_err(),
            FieldError::NoSignChange
        );
        assert_eq!(
            NumberField::create(&ints(&[1]), (q(0, 1), q(1, 1)), FieldOptions::default()).unwrap_err(),
            FieldError::ZeroDegree
        );
    }

    #[test]
    fn arithmetic_examples() {
        let f = sqrt5();
        let t = FieldElement::theta(&f);
        assert_eq!((&t * &t).coords(), &[q(5, 1), q(0, 1)]);
        let a = golden_alpha(&f);
        assert_eq!((&a + &a).coords(), &[q(-1, 1), q(1, 1)]);
        let one = FieldElement::one(&f);
        let inv = elem_arith(ArithOp::Div, &one, &t).unwrap();
        assert_eq!(inv.coords(), &[q(0, 1), q(1, 5)]);
        // reduction oracle: theta * (theta/5) reduces to 1 via generic polynomial remainder
        let prod = Poly::new(t.coords().to_vec()).mul(&Poly::new(inv.coords().to_vec()));
        assert_eq!(prod.rem(f.min_poly()), Poly::constant(q(1, 1)));
        assert_eq!(elem_arith(ArithOp::Div, &one, &FieldElement::zero(&f)).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn signs() {
        let f = sqrt5();
        let t = FieldElement::theta(&f);
        assert_eq!(t.sub_rational(&q(2, 1)).sign(), 1);
        assert_eq!(FieldElement::zero(&f).sign(), 0);
        let a = golden_alpha(&f);
        assert_eq!(a.mul_int(&2.into()).sub_rational(&q(2, 1)).sign(), -1);
    }

    #[test]
    fn generic_sign_matches_quadratic_path() {
        // same field presented as x^2 - 5 over a non-canonical interval uses the generic path
        let g = NumberField::create(&ints(&[-5, 0, 1]), (q(-3, 1), q(-2, 1)), FieldOptions::default()).unwrap();
        assert!(g.sqrt_radicand().is_none());
        let e = FieldElement::new(&g, vec![q(9, 4), q(1, 1)]).unwrap(); // 9/4 - sqrt 5 > 0
        assert_eq!(e.sign(), 1);
        assert_eq!(e.floor(), BigInt::zero());
    }

    #[test]
    fn splits() {
        let f = sqrt5();
        let a = golden_alpha(&f).mul_int(&8.into());
        let (z, frac) = nearest_integer_split(&a);
        assert_eq!(z, BigInt::from(5));
        let enc = frac.enclose(40);
        // decimal oracle: 8 * 0.6180339887 - 5 = -0.0557280900
        assert!(enc.lo().to_rational() > q(-5573, 100_000) && enc.hi().to_rational() < q(-5572, 100_000));
        let (z, frac) = nearest_integer_split(&FieldElement::from_int(&f, 7));
        assert_eq!((z, frac.is_zero()), (BigInt::from(7), true));
        let (z, frac) = nearest_integer_split(&FieldElement::from_rational(&f, q(3, 2)));
        assert_eq!(z, BigInt::from(2));
        assert_eq!(frac.to_rational(), Some(q(-1, 2)));
    }

    #[test]
    fn cubic_field() {
        // x^3 - x - 1, plastic number ~ 1.3247
        let f = NumberField::create(&ints(&[-1, -1, 0, 1]), (q(1, 1), q(2, 1)), FieldOptions::default()).unwrap();
        let t = FieldElement::theta(&f);
        let t3 = t.pow(3);
        assert_eq!(t3, &t + &FieldElement::one(&f));
        let inv = t.inv().unwrap();
        assert_eq!(&inv * &t, FieldElement::one(&f));
        let enc = t.enclose(30);
        assert!(enc.lo().to_rational() > q(13247, 10000) && enc.hi().to_rational() < q(13248, 10000));
    }

    #[test]
    fn serde_round_trip() {
        let f = sqrt5();
        let a = golden_alpha(&f);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"minpoly":["-5","0","1"],"root_interval":["2","3"],"coords":["-1/2","1/2"]}"#);
        let back: FieldElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn exact_string_forms() {
        let f = sqrt5();
        assert_eq!(golden_alpha(&f).exact_string(), "(-1+sqrt(5))/2");
        for s in ["(-1+sqrt(5))/2", "sqrt(5)", "-sqrt(5)", "(3*sqrt(5))/2", "2-3*sqrt(5)", "(1-sqrt(5))/4"] {
            let x = crate::exactnum::parse_element_in(s, &f).unwrap();
            assert_eq!(x.exact_string(), s);
        }
        assert_eq!(FieldElement::from_rational(&f, q(3, 4)).exact_string(), "3/4");
    }
}
