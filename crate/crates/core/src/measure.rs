//! Invariant measures of tower bases: exact Perron data for stationary towers, interval
//! enclosures for general towers, and unique-ergodicity certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::dyadic::nth_root_enclosure;
use crate::exactnum::field::squarefree_decompose;
use crate::exactnum::poly::{integer_roots, is_irreducible_small, isolate_largest_root, quartic_quadratic_split};
use crate::exactnum::{FieldElement, FieldError, FieldOptions, IntervalReal, NumberField, Poly};
use crate::intlattice::IntMatrix;
use crate::tower::{Tower, TowerError};

/// Fractional bits used for dyadic outward rounding of enclosures.
pub const ENCLOSURE_BITS: u32 = 96;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("tower is not stationary")]
    NotStationary,
    #[error("matrix is not square")]
    NonSquare,
    #[error("matrix has negative entries")]
    NegativeEntry,
    #[error("matrix is not primitive")]
    Imprimitive,
    #[error("Perron root has degree {degree}, above the bound {max}")]
    PerronDegreeTooLarge { degree: usize, max: usize },
    #[error("level {n} must be below the tower depth {depth}")]
    LevelTooDeep { n: usize, depth: usize },
    #[error("eigenvector computation failed: {0}")]
    Eigenvector(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

#[derive(Clone, Copy, Debug)]
pub struct MeasureOptions {
    pub max_degree: usize,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { max_degree: 4 }
    }
}

/// Primitivity by the Wielandt bound: `A^((n-1)^2 + 1)` is positive for primitive `A`.
pub fn is_primitive(a: &IntMatrix) -> bool {
    let n = a.rows();
    let pattern: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| !a.get(i, j).is_zero()).collect()).collect();
    let bool_mul = |x: &Vec<Vec<bool>>, y: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| x[i][k] && y[k][j])).collect()).collect()
    };
    let mut p = pattern.clone();
    let bound = (n - 1) * (n - 1) + 1;
    for _ in 1..bound {
        if p.iter().flatten().all(|&b| b) {
            return true;
        }
        p = bool_mul(&p, &pattern);
    }
    p.iter().flatten().all(|&b| b)
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier, ascending coefficients.
pub fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        m = next;
        let am = a.mul(&m);
        let tr: BigInt = (0..n).map(|i| am.get(i, i).clone()).sum();
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    coeffs
}

/// Perron root and left Perron eigenvector of a primitive nonnegative matrix.
#[derive(Clone, Debug)]
pub struct PerronData {
    pub field: NumberField,
    pub root: FieldElement,
    /// Minimal polynomial of the Perron root, ascending integer coefficients.
    pub minpoly: Vec<BigInt>,
    pub char_poly: Vec<BigInt>,
    /// Left eigenvector with entries summing to 1.
    pub left: Vec<FieldElement>,
}

fn divide_out_root(coeffs: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let p = Poly::from_ints(coeffs);
    let (q, _) = p.div_rem(&Poly::linear_root(&BigRational::from_integer(r.clone())));
    q.integer_coeffs().expect("integer quotient")
}

/// Minimal polynomial of the root isolated by `interval` among the roots of `p` (monic, integer).
fn minimal_factor(
    p: &[BigInt],
    interval: &(BigRational, BigRational),
    max_degree: usize,
) -> Result<Vec<BigInt>, MeasureError> {
    let mut f = p.to_vec();
    for r in integer_roots(p) {
        let rq = BigRational::from_integer(r.clone());
        if interval.0 < rq && rq < interval.1 {
            return Ok(vec![-r, BigInt::one()]);
        }
        while Poly::from_ints(&f).eval(&rq).is_zero() {
            f = divide_out_root(&f, &r);
        }
    }
    let degree = f.len() - 1;
    if degree == 4 {
        if let Some((a, b)) = quartic_quadratic_split(&f) {
            let pa = Poly::from_ints(&a);
            let pick = if pa.count_roots(&interval.0, &interval.1) == 1 { a } else { b };
            return Ok(pick);
        }
    }
    if degree > max_degree {
        return Err(MeasureError::PerronDegreeTooLarge { degree, max: max_degree });
    }
    match is_irreducible_small(&f) {
        Some(true) => Ok(f),
        Some(false) => Err(MeasureError::Eigenvector("unexpected factorization".into())),
        None => Err(MeasureError::PerronDegreeTooLarge { degree, max: 4 }),
    }
}

/// Exact Perron data of a primitive nonnegative square matrix.
pub fn perron_data(b: &IntMatrix, opts: MeasureOptions) -> Result<PerronData, MeasureError> {
    if !b.is_square() {
        return Err(MeasureError::NonSquare);
    }
    if !b.is_nonnegative() {
        return Err(MeasureError::NegativeEntry);
    }
    if !is_primitive(b) {
        return Err(MeasureError::Imprimitive);
    }
    let cp = char_poly(b);
    let sf = Poly::from_ints(&cp).squarefree_part();
    let interval = isolate_largest_root(&sf).ok_or_else(|| MeasureError::Eigenvector("no real root".into()))?;
    let minpoly = minimal_factor(&cp, &interval, opts.max_degree)?;
    let (field, root) = match minpoly.len() - 1 {
        1 => {
            let f = NumberField::rational();
            let r = FieldElement::from_int(&f, -minpoly[0].clone());
            (f, r)
        }
        2 => {
            // x^2 + b x + c with largest root (-b + s sqrt(D)) / 2
            let (c, bb) = (&minpoly[0], &minpoly[1]);
            let disc = bb * bb - BigInt::from(4) * c;
            let (d, s) = squarefree_decompose(&disc);
            let f = NumberField::quadratic(&d)?;
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let r = FieldElement::new(
                &f,
                vec![BigRational::from_integer(-bb.clone()) * &half, BigRational::from_integer(s) * &half],
            )?;
            (f, r)
        }
        _ => {
            let f = NumberField::create(
                &minpoly,
                interval,
                FieldOptions { max_degree: opts.max_degree, check_irreducible: false },
            )?;
            let r = FieldElement::theta(&f);
            (f, r)
        }
    };
    let left = left_eigenvector(b, &root)?;
    Ok(PerronData { field, root, minpoly, char_poly: cp, left })
}

/// Solve `x (B - lambda I) = 0` over the field, normalized to sum 1.
fn left_eigenvector(b: &IntMatrix, lambda: &FieldElement) -> Result<Vec<FieldElement>, MeasureError> {
    let n = b.rows();
    let f = lambda.field().clone();
    // rows of (B - lambda I)^T
    let mut a: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = FieldElement::from_int(&f, b.get(j, i).clone());
                    if i == j {
                        &e - lambda
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv()?;
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..n {
                    let t = &factor * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Err(MeasureError::Eigenvector(format!("eigenspace has dimension {}", free.len())));
    }
    let fc = free[0];
    let mut x = vec![FieldElement::zero(&f); n];
    x[fc] = FieldElement::one(&f);
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = -&a[i][fc];
    }
    let total = x.iter().fold(FieldElement::zero(&f), |acc, v| &acc + v);
    let inv = total.inv()?;
    let x: Vec<FieldElement> = x.iter().map(|v| v * &inv).collect();
    if x.iter().any(|v| v.sign() <= 0) {
        return Err(MeasureError::Eigenvector("Perron vector is not positive".into()));
    }
    Ok(x)
}

/// Exact measure vectors `mu_1, ..., mu_N` of a stationary primitive tower.
#[derive(Clone, Debug)]
pub struct StationaryMeasure {
    pub perron: PerronData,
    /// `levels[n-1]` is `mu_n`.
    pub levels: Vec<Vec<FieldElement>>,
}

impl StationaryMeasure {
    pub fn field(&self) -> &NumberField {
        &self.perron.field
    }

    pub fn mu(&self, n: usize) -> &[FieldElement] {
        &self.levels[n - 1]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

/// `<v, w>` for a field vector and an integer vector.
pub fn dot_int(v: &[FieldElement], w: &[BigInt]) -> FieldElement {
    let f = v[0].field().clone();
    v.iter().zip(w).fold(FieldElement::zero(&f), |acc, (a, b)| &acc + &a.mul_int(b))
}

pub fn stationary_measure(t: &Tower) -> Result<StationaryMeasure, MeasureError> {
    stationary_measure_with(t, MeasureOptions::default())
}

pub fn stationary_measure_with(t: &Tower, opts: MeasureOptions) -> Result<StationaryMeasure, MeasureError> {
    let b = t.stationary_matrix().ok_or(MeasureError::NotStationary)?;
    let perron = perron_data(b, opts)?;
    let mut levels = Vec::with_capacity(t.levels());
    for n in 1..=t.levels() {
        let norm = dot_int(&perron.left, t.heights(n)?);
        let inv = norm.inv()?;
        levels.push(perron.left.iter().map(|x| x * &inv).collect());
    }
    Ok(StationaryMeasure { perron, levels })
}

/// Coordinate-wise enclosure of `mu_n` valid for every invariant measure.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureEnclosure {
    pub level: usize,
    pub depth: usize,
    #[serde(skip)]
    pub lower: Vec<BigRational>,
    #[serde(skip)]
    pub upper: Vec<BigRational>,
    #[serde(skip)]
    pub width: BigRational,
    pub within_eps: bool,
}

impl MeasureEnclosure {
    pub fn intervals(&self) -> Vec<IntervalReal> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| IntervalReal::from_rational_bounds(lo, hi, ENCLOSURE_BITS))
            .collect()
    }
}

/// Every invariant measure satisfies `mu_n = sum_l w_l P_{N,n}(l, .) / h_N(l)` with convex
/// weights `w_l`, so the coordinate-wise hull of those normalized rows encloses `mu_n`.
pub fn measure_enclosure(t: &Tower, n: usize, eps: &BigRational) -> Result<MeasureEnclosure, MeasureError> {
    let depth = t.levels();
    if n == 0 || n >= depth {
        return Err(MeasureError::LevelTooDeep { n, depth });
    }
    let p = t.products(depth, n)?;
    let h = t.heights(depth)?;
    let c = t.vertex_count(n);
    let mut lower: Vec<Option<BigRational>> = vec![None; c];
    let mut upper: Vec<Option<BigRational>> = vec![None; c];
    for (l, hl) in h.iter().enumerate() {
        for k in 0..c {
            let v = BigRational::new(p.get(l, k).clone(), hl.clone());
            if lower[k].as_ref().is_none_or(|x| &v < x) {
                lower[k] = Some(v.clone());
            }
            if upper[k].as_ref().is_none_or(|x| &v > x) {
                upper[k] = Some(v);
            }
        }
    }
    let lower: Vec<BigRational> = lower.into_iter().map(Option::unwrap).collect();
    let upper: Vec<BigRational> = upper.into_iter().map(Option::unwrap).collect();
    let width = lower.iter().zip(&upper).map(|(a, b)| b - a).max().unwrap_or_else(BigRational::zero);
    Ok(MeasureEnclosure { level: n, depth, within_eps: &width <= eps, lower, upper, width })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum ErgodicityReason {
    StationaryPrimitive,
    /// Product of Birkhoff contraction coefficients over one period is at most `rho_upper < 1`.
    ProjectiveContraction {
        #[serde(serialize_with = "ser_rational")]
        rho_upper: BigRational,
    },
    None,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("exact:{}", r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErgodicityCertificate {
    pub uniquely_ergodic: bool,
    #[serde(flatten)]
    pub reason: ErgodicityReason,
}

/// Upper bound of the Birkhoff contraction coefficient `(1 - sqrt(phi)) / (1 + sqrt(phi))` of a
/// positive matrix, where `phi` is the minimal cross ratio of its entries.
pub fn birkhoff_tau_upper(m: &IntMatrix) -> BigRational {
    let (r, c) = (m.rows(), m.cols());
    if r < 2 || c < 2 {
        return BigRational::zero();
    }
    let mut phi: Option<BigRational> = None;
    for i in 0..r {
        for j in 0..r {
            for k in 0..c {
                for l in 0..c {
                    let num = m.get(i, k) * m.get(j, l);
                    let den = m.get(j, k) * m.get(i, l);
                    let v = BigRational::new(num, den);
                    if phi.as_ref().is_none_or(|p| &v < p) {
                        phi = Some(v);
                    }
                }
            }
        }
    }
    let s_lo = nth_root_enclosure(&phi.unwrap(), 2, 64).lo().to_rational();
    (BigRational::one() - &s_lo) / (BigRational::one() + &s_lo)
}

pub fn ergodicity_certificate(t: &Tower, depth: usize) -> ErgodicityCertificate {
    let depth = depth.min(t.levels()).max(1);
    let certified = |reason| ErgodicityCertificate { uniquely_ergodic: true, reason };
    if t.vertex_counts().iter().all(|&c| c == 1) && t.period().is_some() {
        return certified(ErgodicityReason::ProjectiveContraction { rho_upper: BigRational::zero() });
    }
    if let Some(b) = t.stationary_matrix() {
        if is_primitive(b) {
            return certified(ErgodicityReason::StationaryPrimitive);
        }
    }
    if let Some(p) = t.period() {
        if p.start + p.len - 1 <= depth {
            let mut rho = BigRational::one();
            for n in p.start..p.start + p.len {
                rho *= birkhoff_tau_upper(t.matrix(n).expect("level in range"));
            }
            if rho < BigRational::one() {
                return certified(ErgodicityReason::ProjectiveContraction { rho_upper: rho });
            }
        }
    }
    ErgodicityCertificate { uniquely_ergodic: false, reason: ErgodicityReason::None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_element;
    use crate::tower::{build_tower, odometer_spec, DiagramSpec};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fib(levels: usize) -> Tower {
        build_tower(&DiagramSpec::Stationary { matrix: vec![vec![1, 1], vec![1, 0]], orders: None }, levels).unwrap()
    }

    #[test]
    fn char_poly_examples() {
        let b = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(char_poly(&b), vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)]);
        let c = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        // companion of x^3 - x - 1
        assert_eq!(char_poly(&c), vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn fibonacci_measure() {
        let t = fib(5);
        let m = stationary_measure(&t).unwrap();
        let alpha = parse_element("(-1+sqrt(5))/2").unwrap();
        let lambda = parse_element("(3+sqrt(5))/2").unwrap();
        assert_eq!(m.perron.root, lambda);
        assert_eq!(m.mu(1)[0], alpha);
        assert_eq!(m.mu(1)[1], &FieldElement::one(m.field()) - &alpha);
        // left eigen-identity mu_1^T B = lambda mu_1^T
        let b = t.matrix(2).unwrap();
        for k in 0..2 {
            let col: Vec<BigInt> = b.column(k);
            assert_eq!(dot_int(m.mu(1), &col), &lambda * &m.mu(1)[k]);
        }
    }

    #[test]
    fn odometer_measure() {
        let t = build_tower(&odometer_spec(&[3]).unwrap(), 5).unwrap();
        let m = stationary_measure(&t).unwrap();
        for n in 1..=5 {
            assert_eq!(m.mu(n)[0].to_rational(), Some(BigRational::new(1.into(), BigInt::from(3).pow(n as u32 - 1))));
        }
    }

    #[test]
    fn imprimitive_rejected() {
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(perron_data(&swap, MeasureOptions::default()).unwrap_err(), MeasureError::Imprimitive);
        let t = build_tower(
            &DiagramSpec::Explicit { matrices: vec![vec![vec![1]], vec![vec![2]], vec![vec![3]]], orders: None },
            3,
        )
        .unwrap();
        assert_eq!(stationary_measure(&t).unwrap_err(), MeasureError::NotStationary);
    }

    #[test]
    fn cubic_perron_root() {
        // x^3 - x - 1 has a real root near 1.3247; its companion matrix is primitive
        let c = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let p = perron_data(&c, MeasureOptions::default()).unwrap();
        assert_eq!(p.field.degree(), 3);
        let enc = p.root.enclose(20);
        assert!(enc.lo().to_rational() > q(13247, 10000) && enc.hi().to_rational() < q(13248, 10000));
        assert!(perron_data(&c, MeasureOptions { max_degree: 2 }).is_err());
    }

    #[test]
    fn four_by_four_perron_factor() {
        let a = IntMatrix::from_i64(&[&[2, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 2, 1], &[1, 1, 1, 1]]);
        let p = perron_data(&a, MeasureOptions::default()).unwrap();
        let cp = Poly::from_ints(&p.char_poly);
        let mp = Poly::from_ints(&p.minpoly);
        assert!(cp.rem(&mp).is_zero());
        assert!(p.left.iter().all(|x| x.sign() > 0));
    }

    #[test]
    fn enclosure_contains_exact_measure() {
        let t = fib(20);
        let exact = stationary_measure(&t).unwrap();
        let eps = q(1, 1_000_000);
        let enc = measure_enclosure(&t, 1, &eps).unwrap();
        assert!(enc.within_eps);
        for (k, iv) in enc.intervals().iter().enumerate() {
            let e = exact.mu(1)[k].enclose(80);
            assert!(iv.contains_interval(&e));
        }
        let wide = measure_enclosure(&t.telescope(&[1, 2]).unwrap(), 1, &eps).unwrap();
        assert!(!wide.within_eps);
        let odo = build_tower(&odometer_spec(&[2]).unwrap(), 6).unwrap();
        let e = measure_enclosure(&odo, 3, &eps).unwrap();
        assert_eq!(e.lower, e.upper);
        assert_eq!(e.lower[0], q(1, 4));
        assert!(measure_enclosure(&t, 20, &eps).is_err());
    }

    #[test]
    fn enclosure_widths_shrink_with_depth() {
        let t = fib(12);
        let mut prev: Option<BigRational> = None;
        for depth in 3..=12 {
            let cuts: Vec<usize> = (1..=depth).collect();
            let e = measure_enclosure(&t.telescope(&cuts).unwrap(), 2, &q(0, 1)).unwrap();
            if let Some(p) = &prev {
                assert!(&e.width <= p);
            }
            prev = Some(e.width);
        }
    }

    #[test]
    fn certificates() {
        assert_eq!(ergodicity_certificate(&fib(5), 5).reason, ErgodicityReason::StationaryPrimitive);
        let odo = build_tower(&odometer_spec(&[2, 3]).unwrap(), 5).unwrap();
        assert!(ergodicity_certificate(&odo, 5).uniquely_ergodic);
        let explicit = DiagramSpec::Explicit {
            matrices: vec![
                vec![vec![1], vec![1]],
                vec![vec![100, 1], vec![1, 100]],
                vec![vec![1000, 1], vec![1, 1000]],
            ],
            orders: None,
        };
        let t = build_tower(&explicit, 3).unwrap();
        assert!(!ergodicity_certificate(&t, 3).uniquely_ergodic);
        let sturm = build_tower(&DiagramSpec::Sturmian { cf: vec![1, 2, 3], orders: None }, 10).unwrap();
        let c = ergodicity_certificate(&sturm, 10);
        assert!(matches!(c.reason, ErgodicityReason::ProjectiveContraction { .. }));
    }
}
