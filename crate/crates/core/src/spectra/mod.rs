//! Eigenvalue necessary-condition battery, candidate search, torsion audit and the
//! convergence-rate diagnostic.

mod audit;
mod battery;
mod diagnostic;

pub use audit::{enumerate_candidates, torsion_audit, AuditFlag, AuditParams, AuditReport, Candidate, AUDIT_NOTE};
pub use battery::{
    decompose, eigen_verdict, image_membership, orthogonality_test, return_phase, suffix_criterion, summability_test,
    BatteryParams, CriteriaReport, Decomposition, ImageMembership, OrthogonalityReport, ReturnPhase,
};
pub use diagnostic::{convergence_diagnostic, ConvergenceReport};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::dimgroup::{stable_image_group, DimgroupError, SubgroupOfR};
use crate::exactnum::dyadic::nth_root_enclosure;
use crate::exactnum::{FieldElement, FieldError, IntervalReal};
use crate::measure::{
    ergodicity_certificate, stationary_measure, ErgodicityCertificate, MeasureError, StationaryMeasure,
};
use crate::tower::{Tower, TowerError};

/// Relative precision of reported term enclosures.
pub const TERM_REL_BITS: u32 = 32;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("no exact invariant measure: {0}")]
    NoMeasure(String),
    #[error("unique ergodicity is not certified")]
    NotCertified,
    #[error("tower has {have} levels, {needed} needed")]
    InsufficientLevels { needed: usize, have: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Dimgroup(#[from] DimgroupError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Tower together with whatever exact measure data it admits.
pub struct SpectralContext<'a> {
    tower: &'a Tower,
    measure: Result<StationaryMeasure, String>,
    certificate: ErgodicityCertificate,
    image: Option<SubgroupOfR>,
    declared: Option<SubgroupOfR>,
}

impl<'a> SpectralContext<'a> {
    pub fn new(tower: &'a Tower) -> Self {
        let certificate = ergodicity_certificate(tower, tower.levels());
        let measure = stationary_measure(tower).map_err(|e| e.to_string());
        let image = measure.as_ref().ok().and_then(|m| stable_image_group(m, &certificate).ok().flatten());
        SpectralContext { tower, measure, certificate, image, declared: None }
    }

    /// Attach a group of eigenvalues known from the construction of the system.
    pub fn with_declared(mut self, declared: SubgroupOfR) -> Self {
        self.declared = Some(declared);
        self
    }

    pub fn tower(&self) -> &Tower {
        self.tower
    }

    pub fn measure(&self) -> Result<&StationaryMeasure, SpectraError> {
        self.measure.as_ref().map_err(|e| SpectraError::NoMeasure(e.clone()))
    }

    pub fn certificate(&self) -> &ErgodicityCertificate {
        &self.certificate
    }

    /// The image subgroup when it is certified to stabilize at level 1.
    pub fn image(&self) -> Option<&SubgroupOfR> {
        self.image.as_ref()
    }

    pub fn declared(&self) -> Option<&SubgroupOfR> {
        self.declared.as_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefutationReason {
    Orthogonality,
    RationalCertifiedNonMember,
}

impl RefutationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RefutationReason::Orthogonality => "orthogonality",
            RefutationReason::RationalCertifiedNonMember => "rational-certified-non-member",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationReason {
    RationalMember,
    DeclaredByConstruction,
}

impl CertificationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificationReason::RationalMember => "rational-member",
            CertificationReason::DeclaredByConstruction => "declared-by-construction",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    RefutedNecessary { reason: RefutationReason },
    PassesUpTo { n: usize },
    CertifiedEigen { reason: CertificationReason },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::RefutedNecessary { .. })
    }

    /// Kept in the passes-or-certified set of the audit.
    pub fn is_plausible(&self) -> bool {
        !self.is_refuted()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::RefutedNecessary { reason } => write!(f, "RefutedNecessary({})", reason.as_str()),
            Verdict::PassesUpTo { n } => write!(f, "PassesUpTo({})", n),
            Verdict::CertifiedEigen { reason } => write!(f, "CertifiedEigen({})", reason.as_str()),
        }
    }
}

/// Behaviour of a series over its trailing window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// Every term is exactly zero.
    Zero,
    /// Terms strictly decrease across the window.
    Decaying,
    /// Terms stay above the floor over the window; evidence, not proof.
    DivergenceEvidence,
    /// Terms are bounded below for all levels by a periodic certificate.
    CertifiedDivergence,
    Inconclusive,
}

/// Terms below this floor over the whole trailing window are not counted as bounded below.
pub fn evidence_floor() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(64))
}

/// Nonnegative series `t_first, t_first+1, ...` with exact terms and enclosures.
#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub first_index: usize,
    #[serde(skip)]
    pub exact_terms: Vec<FieldElement>,
    #[serde(serialize_with = "crate::serial::intervals")]
    pub terms: Vec<IntervalReal>,
    #[serde(serialize_with = "crate::serial::intervals")]
    pub partial_sums: Vec<IntervalReal>,
    /// Geometric-ratio estimate over the trailing window.
    #[serde(serialize_with = "crate::serial::opt_interval")]
    pub rho_hat: Option<IntervalReal>,
    pub trend: Trend,
}

impl Series {
    pub fn from_terms(first_index: usize, exact_terms: Vec<FieldElement>) -> Series {
        let terms: Vec<IntervalReal> = exact_terms.iter().map(|t| t.enclose_relative(TERM_REL_BITS)).collect();
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = IntervalReal::zero();
        for t in &terms {
            acc = (&acc + t).round_outward(96);
            partial_sums.push(acc.clone());
        }
        let window = trailing_window(terms.len());
        let rho_hat = ratio_fit(&terms[terms.len() - window..]);
        let trend = trend_of(&exact_terms[exact_terms.len() - window..], &terms[terms.len() - window..]);
        Series { first_index, exact_terms, terms, partial_sums, rho_hat, trend }
    }

    pub fn last(&self) -> Option<&IntervalReal> {
        self.terms.last()
    }

    /// Term with index `n`.
    pub fn term(&self, n: usize) -> Option<&IntervalReal> {
        n.checked_sub(self.first_index).and_then(|i| self.terms.get(i))
    }
}

/// Length `ceil(count / 3)` of the trailing window.
pub fn trailing_window(count: usize) -> usize {
    count.div_ceil(3)
}

/// `(t_last / t_first)^(1/(L-1))` over the window, as an interval.
fn ratio_fit(window: &[IntervalReal]) -> Option<IntervalReal> {
    let l = window.len();
    if l < 2 || window.iter().any(|t| t.contains_zero()) {
        return None;
    }
    let (first, last) = (&window[0], &window[l - 1]);
    let lo = last.lo().to_rational() / first.hi().to_rational();
    let hi = last.hi().to_rational() / first.lo().to_rational();
    let e = (l - 1) as u32;
    let lo = nth_root_enclosure(&lo, e, 64);
    let hi = nth_root_enclosure(&hi, e, 64);
    Some(IntervalReal::new(lo.lo().clone(), hi.hi().clone()))
}

fn trend_of(exact: &[FieldElement], window: &[IntervalReal]) -> Trend {
    if window.is_empty() {
        return Trend::Inconclusive;
    }
    if exact.iter().all(|t| t.is_zero()) {
        return Trend::Zero;
    }
    let floor = evidence_floor();
    if window.iter().all(|t| t.lo().to_rational() >= floor) {
        return Trend::DivergenceEvidence;
    }
    if window.len() >= 2 && window.windows(2).all(|w| w[1].certainly_below(&w[0].lo().to_rational())) {
        return Trend::Decaying;
    }
    Trend::Inconclusive
}

/// Exact maximum of absolute values; zero for an empty list.
pub(crate) fn max_abs(vals: impl IntoIterator<Item = FieldElement>, zero: FieldElement) -> FieldElement {
    vals.into_iter().map(|x| x.abs()).fold(zero, |a, b| if b.cmp_elem(&a).is_gt() { b } else { a })
}
