//! Finitely generated subgroups of `Q^d` and quotient invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use super::normal::{hnf, snf, solve_in_hnf, HnfResult};
use super::LatticeError;

/// A subgroup `(1/denom) * rowspan_Z(hnf_basis)` of `Q^d`.
#[derive(Clone, Debug)]
pub struct QLattice {
    dim: usize,
    generators: Vec<Vec<BigRational>>,
    denom: BigInt,
    hnf: HnfResult,
}

impl PartialEq for QLattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.denom == other.denom && self.hnf.basis == other.hnf.basis
    }
}

impl Eq for QLattice {}

fn common_denominator<'a>(vals: impl Iterator<Item = &'a BigRational>) -> BigInt {
    vals.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scale_to_int(v: &[BigRational], denom: &BigInt) -> Option<Vec<BigInt>> {
    let d = BigRational::from_integer(denom.clone());
    v.iter()
        .map(|x| {
            let y = x * &d;
            y.is_integer().then(|| y.to_integer())
        })
        .collect()
}

impl QLattice {
    pub fn new(dim: usize, generators: Vec<Vec<BigRational>>) -> Result<Self, LatticeError> {
        for g in &generators {
            if g.len() != dim {
                return Err(LatticeError::DimensionMismatch { expected: dim, got: g.len() });
            }
        }
        let denom = common_denominator(generators.iter().flatten());
        let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| scale_to_int(g, &denom).unwrap()).collect();
        let mat = IntMatrix::from_rows(&rows, dim);
        let mut h = hnf(&mat);
        // reduce (basis, denom) by their common content so equal groups compare equal
        let content = h.basis.entries().iter().fold(denom.clone(), |acc, x| acc.gcd(x));
        let mut denom = denom;
        if !content.is_one() && !content.is_zero() {
            let basis = IntMatrix::new(h.basis.rows(), dim, h.basis.entries().iter().map(|x| x / &content).collect());
            denom /= &content;
            h = HnfResult { basis, pivots: h.pivots, transform: h.transform };
        }
        Ok(QLattice { dim, generators, denom, hnf: h })
    }

    pub fn from_int_generators(dim: usize, gens: &[Vec<i64>]) -> Result<Self, LatticeError> {
        QLattice::new(
            dim,
            gens.iter().map(|g| g.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn hnf_basis(&self) -> &IntMatrix {
        &self.hnf.basis
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    /// The canonical basis as rational vectors.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.hnf
            .basis
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::new(x, self.denom.clone())).collect())
            .collect()
    }

    fn check_dim(&self, x: &[BigRational]) -> Result<(), LatticeError> {
        if x.len() != self.dim {
            return Err(LatticeError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Integer coefficients of `x` in the canonical basis, or `None` if `x` is not in the lattice.
    pub fn member(&self, x: &[BigRational]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        self.check_dim(x)?;
        Ok(scale_to_int(x, &self.denom).and_then(|v| solve_in_hnf(&self.hnf, &v)))
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        matches!(self.member(x), Ok(Some(_)))
    }

    /// Integer coefficients of `x` in terms of the original generators.
    pub fn member_in_generators(&self, x: &[BigRational]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        let Some(c) = self.member(x)? else { return Ok(None) };
        // basis rows are the first `rank` rows of transform * generators
        let mut out = vec![BigInt::zero(); self.generators.len()];
        for (i, ci) in c.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += ci * self.hnf.transform.get(i, j);
            }
        }
        Ok(Some(out))
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &QLattice) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }
}

/// Invariant factors and free rank of a quotient `I/E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientInvariants {
    #[serde(serialize_with = "crate::intlattice::ser_bigints")]
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl QuotientInvariants {
    /// Factors greater than one.
    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.iter().all(|d| d.is_one())
    }

    pub fn torsion_size(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Group in the form `Z/2Z + Z^1`, or `0` for the trivial group.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion_orders().iter().map(|d| format!("Z/{}Z", d)).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Structure of `I/E` for lattices `E` contained in `I`.
pub fn quotient_invariants(e: &QLattice, i: &QLattice) -> Result<QuotientInvariants, LatticeError> {
    if e.dim != i.dim {
        return Err(LatticeError::DimensionMismatch { expected: i.dim, got: e.dim });
    }
    let mut rows = Vec::new();
    for b in e.basis() {
        match i.member(&b)? {
            Some(c) => rows.push(c),
            None => return Err(LatticeError::NotSublattice),
        }
    }
    for g in &e.generators {
        if !i.contains(g) {
            return Err(LatticeError::NotSublattice);
        }
    }
    let k = IntMatrix::from_rows(&rows, i.rank());
    let s = snf(&k);
    Ok(QuotientInvariants { free_rank: i.rank() - s.invariant_factors.len(), invariant_factors: s.invariant_factors })
}

/// Basis of the right kernel `{v : A v = 0}` of a rational matrix given by rows, via reduced
/// row echelon form. Basis vectors are scaled to primitive integer vectors.
pub fn rational_nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = BigRational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            primitive_integer_vector(&v)
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector whose first nonzero entry is positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let d = common_denominator(v.iter());
    let ints = scale_to_int(v, &d).unwrap();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| x.signum());
    ints.into_iter().map(|x| x * &sign / &g).collect()
}

/// Rank of a rational matrix given by rows.
pub fn rational_rank(rows: &[Vec<BigRational>], cols: usize) -> usize {
    cols - rational_nullspace(rows, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn lat(gens: &[&[(i64, i64)]]) -> QLattice {
        let dim = gens[0].len();
        QLattice::new(dim, gens.iter().map(|g| g.iter().map(|&(n, d)| q(n, d)).collect()).collect()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let l = lat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert_eq!(l.member(&[q(1, 1), q(0, 1)]).unwrap(), Some(vec![BigInt::one(), BigInt::zero()]));
        let m = lat(&[&[(1, 1), (0, 1)], &[(-1, 2), (1, 2)]]);
        // solve c1*(1,0) + c2*(-1/2,1/2) = (1/2,1/2): c2 = 1, c1 = 1
        assert_eq!(m.member_in_generators(&[q(1, 2), q(1, 2)]).unwrap(), Some(vec![BigInt::one(), BigInt::one()]));
        let z = lat(&[&[(1, 1), (0, 1)]]);
        assert_eq!(z.member(&[q(1, 3), q(0, 1)]).unwrap(), None);
        assert!(z.member(&[q(1, 1)]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let i = lat(&[&[(1, 1), (0, 1)], &[(-1, 2), (1, 2)]]);
        let e = lat(&[&[(1, 1), (0, 1)], &[(-1, 1), (1, 1)]]);
        let qi = quotient_invariants(&e, &i).unwrap();
        assert_eq!(qi.invariant_factors, vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(qi.free_rank, 0);
        assert_eq!(qi.describe(), "Z/2Z");
        let same = quotient_invariants(&i, &i).unwrap();
        assert!(same.is_torsion_free());
        let sixth = lat(&[&[(1, 6)]]);
        let one = lat(&[&[(1, 1)]]);
        assert_eq!(quotient_invariants(&one, &sixth).unwrap().invariant_factors, vec![BigInt::from(6)]);
        assert_eq!(quotient_invariants(&sixth, &one).unwrap_err(), LatticeError::NotSublattice);
    }

    #[test]
    fn canonical_form_ignores_presentation() {
        let a = lat(&[&[(1, 2)], &[(1, 3)]]);
        let b = lat(&[&[(1, 6)]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), vec![vec![q(1, 6)]]);
    }

    #[test]
    fn nullspace_examples() {
        let rows = vec![vec![q(1, 1), q(1, 1)]];
        assert_eq!(rational_nullspace(&rows, 2), vec![vec![BigInt::from(1), BigInt::from(-1)]]);
        let full = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        assert!(rational_nullspace(&full, 2).is_empty());
    }

    proptest! {
        #[test]
        fn index_matches_determinant_ratio(
            e in proptest::collection::vec(-6i64..=6, 4),
            i in proptest::collection::vec(-6i64..=6, 4),
        ) {
            let im = IntMatrix::new(2, 2, i.iter().map(|&x| BigInt::from(x)).collect());
            let km = IntMatrix::new(2, 2, e.iter().map(|&x| BigInt::from(x)).collect());
            let di = im.det();
            let dk = km.det();
            prop_assume!(!di.is_zero() && !dk.is_zero());
            // E = K * I is a sublattice of I with index |det K|
            let em = km.mul(&im);
            let to_q = |m: &IntMatrix| m.to_rows().into_iter()
                .map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect::<Vec<_>>();
            let il = QLattice::new(2, to_q(&im)).unwrap();
            let el = QLattice::new(2, to_q(&em)).unwrap();
            let qi = quotient_invariants(&el, &il).unwrap();
            prop_assert_eq!(qi.free_rank, 0);
            prop_assert_eq!(qi.torsion_size(), (em.det() / di).abs());
            prop_assert_eq!(qi.torsion_size(), dk.abs());
        }

        #[test]
        fn identical_lattices_have_trivial_quotient(v in proptest::collection::vec(-8i64..=8, 6)) {
            let gens: Vec<Vec<BigRational>> = v.chunks(2)
                .map(|c| vec![q(c[0], 3), q(c[1], 2)]).collect();
            let a = QLattice::new(2, gens.clone()).unwrap();
            let b = QLattice::new(2, gens.into_iter().rev().collect()).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(quotient_invariants(&a, &b).unwrap().is_torsion_free());
        }
    }
}
