//! Dimension-group invariants: rational subgroup membership, image subgroups, infinitesimals
//! and torsion quotients.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{FieldElement, NumberField};
use crate::intlattice::{
    quotient_invariants, rational_nullspace, IntMatrix, LatticeError, QLattice, QuotientInvariants,
};
use crate::measure::{
    ergodicity_certificate, stationary_measure, ErgodicityCertificate, MeasureError, StationaryMeasure,
};
use crate::tower::{Tower, TowerError};

/// Cap on the number of levels scanned past the built tower while looking for a cycle.
pub const CYCLE_SEARCH_LIMIT: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum DimgroupError {
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("unique ergodicity is not certified; the image subgroup is not reported")]
    NotCertified,
    #[error("fields differ")]
    FieldMismatch,
    #[error("E is not contained in I")]
    NotSublattice,
    #[error("level {0} outside the measured range")]
    Level(usize),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Lattice(LatticeError),
}

impl From<LatticeError> for DimgroupError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::NotSublattice => DimgroupError::NotSublattice,
            other => DimgroupError::Lattice(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum RationalVerdict {
    MemberAtLevel {
        level: usize,
    },
    /// `H_k mod q` enters a cycle at `cycle_start` of length `cycle_length` avoiding zero.
    CertifiedNonMember {
        cycle_start: usize,
        cycle_length: usize,
    },
    UnknownUpTo {
        depth: usize,
    },
}

impl fmt::Display for RationalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalVerdict::MemberAtLevel { level } => write!(f, "MemberAtLevel({})", level),
            RationalVerdict::CertifiedNonMember { .. } => write!(f, "CertifiedNonMember"),
            RationalVerdict::UnknownUpTo { depth } => write!(f, "UnknownUpTo({})", depth),
        }
    }
}

fn reduce_mod(v: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x.mod_floor(q)).collect()
}

/// Decide whether `p/q` lies in the rational subgroup, i.e. whether `(p/q) H_k` is integral for
/// some level `k <= depth`.
///
/// Past the built levels the search follows the tower's period, and a repeated state
/// `(phase, H_k mod q)` certifies that no later level is divisible.
pub fn rational_member(t: &Tower, p: &BigInt, q: &BigInt, depth: usize) -> Result<RationalVerdict, DimgroupError> {
    if !q.is_positive() {
        return Err(DimgroupError::ZeroDenominator);
    }
    let g = p.gcd(q);
    let q = if g.is_zero() { q.clone() } else { q / &g };
    let divisible = |h: &[BigInt]| h.iter().all(|x| x.is_multiple_of(&q));
    let n = t.levels();
    for k in 1..=n.min(depth) {
        if divisible(t.heights(k)?) {
            return Ok(RationalVerdict::MemberAtLevel { level: k });
        }
    }
    let Some(period) = t.period() else {
        return Ok(RationalVerdict::UnknownUpTo { depth: depth.min(n) });
    };
    // states from level `period.start` on; each determines all later states
    let phase = |k: usize| (k - period.start) % period.len;
    let mut seen: HashMap<(usize, Vec<BigInt>), usize> = HashMap::new();
    for k in period.start..=n {
        let h = reduce_mod(t.heights(k)?, &q);
        if let Some(&first) = seen.get(&(phase(k), h.clone())) {
            return Ok(RationalVerdict::CertifiedNonMember { cycle_start: first, cycle_length: k - first });
        }
        seen.insert((phase(k), h), k);
    }
    let mut h = reduce_mod(t.heights(n)?, &q);
    for k in n + 1..n + CYCLE_SEARCH_LIMIT {
        let m = t.matrix(period.start + phase(k))?;
        h = reduce_mod(&m.mul_vec(&h), &q);
        if h.iter().all(|x| x.is_zero()) {
            // divisible, but only beyond the requested depth when k > depth
            return Ok(if k <= depth {
                RationalVerdict::MemberAtLevel { level: k }
            } else {
                RationalVerdict::UnknownUpTo { depth }
            });
        }
        if let Some(&first) = seen.get(&(phase(k), h.clone())) {
            return Ok(RationalVerdict::CertifiedNonMember { cycle_start: first, cycle_length: k - first });
        }
        seen.insert((phase(k), h.clone()), k);
    }
    Ok(RationalVerdict::UnknownUpTo { depth })
}

/// A finitely generated subgroup of the reals inside a number field, stored through the power
/// basis coordinates of its generators. Always contains 1.
#[derive(Clone, Debug)]
pub struct SubgroupOfR {
    field: NumberField,
    lattice: QLattice,
    generators: Vec<FieldElement>,
}

impl PartialEq for SubgroupOfR {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.lattice == other.lattice
    }
}

impl SubgroupOfR {
    /// Subgroup generated by `gens` together with 1.
    pub fn generated_by(field: &NumberField, gens: &[FieldElement]) -> Result<Self, DimgroupError> {
        let mut generators = Vec::with_capacity(gens.len() + 1);
        for g in gens {
            generators.push(g.coerce(field).ok_or(DimgroupError::FieldMismatch)?);
        }
        let one = FieldElement::one(field);
        let mut coords: Vec<Vec<BigRational>> = generators.iter().map(|g| g.coords().to_vec()).collect();
        let lattice = QLattice::new(field.degree(), coords.clone())?;
        let lattice = if lattice.contains(one.coords()) {
            lattice
        } else {
            generators.insert(0, one.clone());
            coords.insert(0, one.coords().to_vec());
            QLattice::new(field.degree(), coords)?
        };
        Ok(SubgroupOfR { field: field.clone(), lattice, generators })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn lattice(&self) -> &QLattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    /// Canonical basis as field elements.
    pub fn basis(&self) -> Vec<FieldElement> {
        self.lattice
            .basis()
            .into_iter()
            .map(|c| FieldElement::new(&self.field, c).expect("basis has field degree"))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Membership; elements of other fields are members only when they coerce.
    pub fn contains(&self, x: &FieldElement) -> bool {
        x.coerce(&self.field).is_some_and(|y| self.lattice.contains(y.coords()))
    }

    pub fn contains_group(&self, other: &SubgroupOfR) -> bool {
        self.field == other.field && self.lattice.contains_lattice(&other.lattice)
    }

    /// `Z<b1> + Z<b2> + ...` over the canonical basis.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.basis().iter().map(|b| format!("Z<{}>", b.exact_string())).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl Serialize for SubgroupOfR {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SubgroupOfR", 4)?;
        st.serialize_field("field", &self.field.describe())?;
        st.serialize_field("basis", &self.basis().iter().map(crate::serial::exact_elem).collect::<Vec<_>>())?;
        st.serialize_field("generators", &self.generators.iter().map(crate::serial::exact_elem).collect::<Vec<_>>())?;
        st.serialize_field("describe", &self.describe())?;
        st.end()
    }
}

/// Subgroup generated by 1 and the level-`n` measure values; needs a unique-ergodicity certificate.
pub fn image_group(t: &Tower, n: usize) -> Result<SubgroupOfR, DimgroupError> {
    let cert = ergodicity_certificate(t, t.levels());
    let measure = stationary_measure(t)?;
    image_group_with(&measure, &cert, n)
}

pub fn image_group_with(
    measure: &StationaryMeasure,
    cert: &ErgodicityCertificate,
    n: usize,
) -> Result<SubgroupOfR, DimgroupError> {
    if !cert.uniquely_ergodic {
        return Err(DimgroupError::NotCertified);
    }
    if n == 0 || n > measure.depth() {
        return Err(DimgroupError::Level(n));
    }
    SubgroupOfR::generated_by(measure.field(), measure.mu(n))
}

/// `I = union of the level images`; for a stationary tower the union is `I_1` exactly when
/// `I_2 = I_1`, since `I_{n+1} = lambda^{-1} I_n`.
pub fn stable_image_group(
    measure: &StationaryMeasure,
    cert: &ErgodicityCertificate,
) -> Result<Option<SubgroupOfR>, DimgroupError> {
    if measure.depth() < 2 {
        return Ok(None);
    }
    let i1 = image_group_with(measure, cert, 1)?;
    let i2 = image_group_with(measure, cert, 2)?;
    Ok((i1 == i2).then_some(i1))
}

/// `I / E` as invariant factors and free rank.
pub fn torsion_quotient(i: &SubgroupOfR, e: &SubgroupOfR) -> Result<QuotientInvariants, DimgroupError> {
    if i.field != e.field {
        return Err(DimgroupError::FieldMismatch);
    }
    Ok(quotient_invariants(&e.lattice, &i.lattice)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum InfinitesimalVerdict {
    Trivial,
    NonTrivial {
        #[serde(serialize_with = "crate::serial::ints")]
        witness: Vec<BigInt>,
        level: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct InfinitesimalReport {
    #[serde(flatten)]
    pub verdict: InfinitesimalVerdict,
    /// Integer basis of `ker_Q(mu)` at level 1.
    #[serde(serialize_with = "crate::serial::int_rows")]
    pub kernel_basis: Vec<Vec<BigInt>>,
    /// Integer basis of `ker(B^C)`.
    #[serde(serialize_with = "crate::serial::int_rows")]
    pub eventual_kernel_basis: Vec<Vec<BigInt>>,
    pub b_invariant: bool,
    /// Levels `j` for which `P_{j,1} v` was checked nonzero for the witness.
    pub checked_levels: usize,
}

fn mu_constraints(mu: &[FieldElement]) -> Vec<Vec<BigRational>> {
    let d = mu[0].field().degree();
    (0..d).map(|i| mu.iter().map(|x| x.coords()[i].clone()).collect()).collect()
}

fn kills(rows: &[Vec<BigRational>], v: &[BigInt]) -> bool {
    rows.iter()
        .all(|r| r.iter().zip(v).map(|(a, b)| a * BigRational::from_integer(b.clone())).sum::<BigRational>().is_zero())
}

fn int_rows_to_rat(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect()
}

fn witness_key(v: &[BigInt]) -> (BigInt, BigInt, Vec<BigInt>) {
    let max = v.iter().map(|x| x.abs()).max().unwrap_or_default();
    let sum = v.iter().map(|x| x.abs()).sum();
    (max, sum, v.to_vec())
}

fn normalize_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Infinitesimal subgroup of a stationary primitive tower, decided from the exact measure.
pub fn infinitesimal_report(t: &Tower) -> Result<InfinitesimalReport, DimgroupError> {
    let measure = stationary_measure(t)?;
    infinitesimal_report_with(t, &measure)
}

pub fn infinitesimal_report_with(t: &Tower, measure: &StationaryMeasure) -> Result<InfinitesimalReport, DimgroupError> {
    let b = t.stationary_matrix().ok_or(MeasureError::NotStationary)?;
    let c = b.rows();
    let rows = mu_constraints(measure.mu(1));
    let kernel = rational_nullspace(&rows, c);
    let b_invariant = kernel.iter().all(|v| kills(&rows, &b.mul_vec(v)));
    let mut bc = IntMatrix::identity(c);
    for _ in 0..c {
        bc = b.mul(&bc);
    }
    let eventual = rational_nullspace(&int_rows_to_rat(&bc), c);
    let outside: Vec<&Vec<BigInt>> = kernel.iter().filter(|v| !bc.mul_vec(v).iter().all(|x| x.is_zero())).collect();
    if outside.is_empty() {
        return Ok(InfinitesimalReport {
            verdict: InfinitesimalVerdict::Trivial,
            kernel_basis: kernel,
            eventual_kernel_basis: eventual,
            b_invariant,
            checked_levels: 0,
        });
    }
    // shortest among basis vectors and their pairwise sums and differences
    let mut cands: Vec<Vec<BigInt>> = kernel.clone();
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            cands.push(kernel[i].iter().zip(&kernel[j]).map(|(a, b)| a + b).collect());
            cands.push(normalize_sign(kernel[i].iter().zip(&kernel[j]).map(|(a, b)| a - b).collect()));
        }
    }
    let witness = cands
        .into_iter()
        .filter(|v| !bc.mul_vec(v).iter().all(|x| x.is_zero()))
        .min_by_key(|v| witness_key(v))
        .expect("some kernel vector avoids the eventual kernel");
    let mut checked = 0;
    for j in 1..=t.levels() {
        let pv = t.products(j, 1)?.mul_vec(&witness);
        if pv.iter().all(|x| x.is_zero()) {
            break;
        }
        checked = j;
    }
    Ok(InfinitesimalReport {
        verdict: InfinitesimalVerdict::NonTrivial { witness, level: 1 },
        kernel_basis: kernel,
        eventual_kernel_basis: eventual,
        b_invariant,
        checked_levels: checked,
    })
}

/// `<mu, v>` for an integer vector.
pub fn pair(mu: &[FieldElement], v: &[BigInt]) -> FieldElement {
    crate::measure::dot_int(mu, v)
}
