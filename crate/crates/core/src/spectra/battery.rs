//! The necessary-condition battery for a single candidate eigenvalue.

use num_bigint::BigInt;
use serde::Serialize;

use super::{max_abs, CertificationReason, RefutationReason, Series, SpectraError, SpectralContext, Trend, Verdict};
use crate::dimgroup::{rational_member, RationalVerdict};
use crate::exactnum::{nearest_integer_split, FieldElement, IntervalReal};
use crate::measure::dot_int;
use crate::tower::{Tower, TowerPath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryParams {
    pub m: usize,
    pub n: usize,
    /// Depth for rational membership.
    pub depth: usize,
}

impl Default for BatteryParams {
    fn default() -> Self {
        BatteryParams { m: 2, n: 30, depth: 64 }
    }
}

/// `alpha * H_m = v_m + w_m` with `v_m` in `[-1/2, 1/2)` componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub m: usize,
    #[serde(serialize_with = "crate::serial::elems")]
    pub v: Vec<FieldElement>,
    #[serde(serialize_with = "crate::serial::ints")]
    pub w: Vec<BigInt>,
}

impl Decomposition {
    pub fn v_enclosures(&self) -> Vec<IntervalReal> {
        self.v.iter().map(|x| x.enclose(64)).collect()
    }
}

pub fn decompose(t: &Tower, alpha: &FieldElement, m: usize) -> Result<Decomposition, SpectraError> {
    let h = t.heights(m)?;
    let (w, v) = h.iter().map(|hk| nearest_integer_split(&alpha.mul_int(hk))).unzip();
    Ok(Decomposition { m, v, w })
}

/// `alpha = <mu_m, w_m>` exactly, i.e. `<mu_m, v_m> = 0`.
pub fn orthogonality_test(ctx: &SpectralContext, alpha: &FieldElement, m: usize) -> Result<bool, SpectraError> {
    let measure = ctx.measure()?;
    if m == 0 || m > measure.depth() {
        return Err(SpectraError::BadParams(format!("level {} outside 1..={}", m, measure.depth())));
    }
    let d = decompose(ctx.tower(), alpha, m)?;
    let realized = dot_int(measure.mu(m), &d.w);
    Ok(alpha.coerce(measure.field()).is_some_and(|a| a == realized))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageMembership {
    Member,
    NonMember,
    NotCertified,
}

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..d).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p))
}

/// Membership of `alpha` in the image subgroup `I`. Non-membership rules out eigenvalues since
/// every continuous eigenvalue lies in `I`.
pub fn image_membership(ctx: &SpectralContext, alpha: &FieldElement) -> ImageMembership {
    let Ok(measure) = ctx.measure() else { return ImageMembership::NotCertified };
    if !ctx.certificate().uniquely_ergodic {
        return ImageMembership::NotCertified;
    }
    let mf = measure.field();
    match alpha.coerce(mf) {
        None => {
            // alpha irrational; decide whether its field can embed in the measure field
            let af = alpha.field();
            let disjoint = mf.is_rational()
                || (mf.sqrt_radicand().is_some() && af.sqrt_radicand().is_some())
                || (is_prime(af.degree()) && mf.degree() % af.degree() != 0);
            if disjoint {
                ImageMembership::NonMember
            } else {
                ImageMembership::NotCertified
            }
        }
        Some(a) => match ctx.image() {
            Some(i) if i.contains(&a) => ImageMembership::Member,
            Some(_) => ImageMembership::NonMember,
            None => ImageMembership::NotCertified,
        },
    }
}

/// Terms `||P_{n,m} v_m||_inf` for `n = m+1..=N`.
pub fn summability_test(t: &Tower, alpha: &FieldElement, m: usize, n: usize) -> Result<Series, SpectraError> {
    if m == 0 || m >= n || n > t.levels() {
        return Err(SpectraError::BadParams(format!("need 1 <= m < N <= {}, got m={}, N={}", t.levels(), m, n)));
    }
    let d = decompose(t, alpha, m)?;
    let zero = FieldElement::zero(alpha.field());
    let mut terms = Vec::with_capacity(n - m);
    for lv in m + 1..=n {
        // P_{n,m} v_m = alpha H_n - P_{n,m} w_m
        let pw = t.products(lv, m)?.mul_vec(&d.w);
        let h = t.heights(lv)?;
        let row =
            h.iter().zip(&pw).map(|(hl, pl)| &alpha.mul_int(hl) - &FieldElement::from_int(alpha.field(), pl.clone()));
        terms.push(max_abs(row, zero.clone()));
    }
    Ok(Series::from_terms(m + 1, terms))
}

/// `delta_n = max |<s, v_n>|` over the suffix vectors `s` of level `n`, for `n = 1..=N`.
pub fn suffix_criterion(t: &Tower, alpha: &FieldElement, n: usize) -> Result<Series, SpectraError> {
    if n == 0 || n >= t.levels() {
        return Err(SpectraError::BadParams(format!("suffix sets to level {} need {} levels", n, n + 1)));
    }
    let zero = FieldElement::zero(alpha.field());
    let mut deltas = Vec::with_capacity(n);
    for lv in 1..=n {
        let d = decompose(t, alpha, lv)?;
        let set = t.suffix_vectors(lv)?;
        let vals = set.all().map(|s| {
            let s: Vec<BigInt> = s.iter().map(|&x| BigInt::from(x)).collect();
            dot_int(&d.v, &s)
        });
        deltas.push(max_abs(vals, zero.clone()));
    }
    Ok(Series::from_terms(1, deltas))
}

/// Entrance time of a point and its phase `alpha * r_n mod 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ReturnPhase {
    pub level: usize,
    #[serde(serialize_with = "crate::serial::int")]
    pub entrance_time: BigInt,
    #[serde(serialize_with = "crate::serial::elem")]
    pub phase: FieldElement,
    #[serde(serialize_with = "crate::serial::interval")]
    pub enclosure: IntervalReal,
}

pub fn return_phase(t: &Tower, path: &TowerPath, alpha: &FieldElement) -> Result<ReturnPhase, SpectraError> {
    let r = t.entrance_time(path)?;
    let x = alpha.mul_int(&r);
    let phase = x.sub_rational(&num_rational::BigRational::from_integer(x.floor()));
    let enclosure = phase.enclose(64);
    Ok(ReturnPhase { level: path.edges.len() + 1, entrance_time: r, phase, enclosure })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    /// Raw test at `m` and `m + 1`.
    pub at_m: Option<bool>,
    pub at_m_plus_1: Option<bool>,
    /// First level in `m..=N` where the test holds.
    pub first_level: Option<usize>,
    pub image_membership: ImageMembership,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    #[serde(serialize_with = "crate::serial::elem")]
    pub alpha: FieldElement,
    #[serde(serialize_with = "crate::serial::interval")]
    pub alpha_enclosure: IntervalReal,
    pub params: BatteryParams,
    pub decomposition: Decomposition,
    /// False only when the orthogonality condition is refuted for every level.
    pub orthogonality_exact: bool,
    pub orthogonality: OrthogonalityReport,
    pub summability: Series,
    pub suffix_deltas: Series,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_verdict: Option<RationalVerdict>,
    pub verdict: Verdict,
}

fn orthogonality_report(ctx: &SpectralContext, alpha: &FieldElement, p: &BatteryParams) -> OrthogonalityReport {
    let test = |m: usize| orthogonality_test(ctx, alpha, m).ok();
    let at_m = test(p.m);
    let at_m_plus_1 = test(p.m + 1);
    let first_level = if at_m.is_some() { (p.m..=p.n).find(|&m| test(m) == Some(true)) } else { None };
    OrthogonalityReport { at_m, at_m_plus_1, first_level, image_membership: image_membership(ctx, alpha) }
}

/// Run the whole battery. Needs `N + 1` tower levels for the suffix sets at level `N`.
pub fn eigen_verdict(
    ctx: &SpectralContext,
    alpha: &FieldElement,
    p: &BatteryParams,
) -> Result<CriteriaReport, SpectraError> {
    let t = ctx.tower();
    if p.m == 0 || p.m >= p.n {
        return Err(SpectraError::BadParams(format!("need 1 <= m < N, got m={}, N={}", p.m, p.n)));
    }
    if t.levels() < p.n + 1 {
        return Err(SpectraError::InsufficientLevels { needed: p.n + 1, have: t.levels() });
    }
    let decomposition = decompose(t, alpha, p.m)?;
    let orthogonality = orthogonality_report(ctx, alpha, p);
    let mut summability = summability_test(t, alpha, p.m, p.n)?;
    let suffix_deltas = suffix_criterion(t, alpha, p.n)?;
    let rational_verdict = match alpha.to_rational() {
        Some(r) => Some(rational_member(t, r.numer(), r.denom(), p.depth)?),
        None => None,
    };

    let refuted_orth = orthogonality.image_membership == super::ImageMembership::NonMember;
    let verdict = match &rational_verdict {
        Some(RationalVerdict::MemberAtLevel { .. }) => {
            Verdict::CertifiedEigen { reason: CertificationReason::RationalMember }
        }
        Some(RationalVerdict::CertifiedNonMember { .. }) => {
            // along the cycle alpha H_n stays at distance >= 1/q from integers
            summability.trend = Trend::CertifiedDivergence;
            Verdict::RefutedNecessary { reason: RefutationReason::RationalCertifiedNonMember }
        }
        _ if refuted_orth => Verdict::RefutedNecessary { reason: RefutationReason::Orthogonality },
        _ if ctx.declared().is_some_and(|g| g.contains(alpha)) => {
            Verdict::CertifiedEigen { reason: CertificationReason::DeclaredByConstruction }
        }
        _ => Verdict::PassesUpTo { n: p.n },
    };
    Ok(CriteriaReport {
        alpha: alpha.clone(),
        alpha_enclosure: alpha.enclose(64),
        params: *p,
        decomposition,
        orthogonality_exact: !refuted_orth,
        orthogonality,
        summability,
        suffix_deltas,
        rational_verdict,
        verdict,
    })
}
