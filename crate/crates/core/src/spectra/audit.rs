//! Candidate enumeration over the image lattice and the torsion audit.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::battery::{decompose, eigen_verdict, BatteryParams};
use super::{SpectraError, SpectralContext, Verdict};
use crate::dimgroup::{image_group_with, infinitesimal_report_with, InfinitesimalVerdict, SubgroupOfR};
use crate::exactnum::{FieldElement, IntervalReal};
use crate::measure::dot_int;

/// Largest number of integer vectors scanned by one enumeration.
pub const MAX_BOX_POINTS: usize = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    #[serde(serialize_with = "crate::serial::elem")]
    pub alpha: FieldElement,
    #[serde(serialize_with = "crate::serial::interval")]
    pub enclosure: IntervalReal,
    /// First `w` in lexicographic order with `alpha = <mu_m, w>`.
    #[serde(serialize_with = "crate::serial::ints")]
    pub w: Vec<BigInt>,
    pub verdict: Verdict,
}

fn box_points(dim: usize, wbox: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * wbox + 1) as usize;
    let total = side.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            let mut w = vec![BigInt::from(0); dim];
            for slot in w.iter_mut().rev() {
                *slot = BigInt::from((idx % side) as i64 - wbox);
                idx /= side;
            }
            w
        })
        .collect()
}

/// All `alpha = <mu_m, w>` with `|w|_inf <= wbox`, deduplicated exactly, each with its verdict.
/// Verdicts run in parallel on the current rayon pool; output order is lexicographic in `w`.
pub fn enumerate_candidates(
    ctx: &SpectralContext,
    m: usize,
    wbox: u32,
    params: &BatteryParams,
) -> Result<Vec<Candidate>, SpectraError> {
    let measure = ctx.measure()?;
    if wbox == 0 {
        return Err(SpectraError::BadParams("wbox must be at least 1".into()));
    }
    if m == 0 || m > measure.depth() {
        return Err(SpectraError::BadParams(format!("level {} outside 1..={}", m, measure.depth())));
    }
    let mu = measure.mu(m);
    let side = 2 * wbox as usize + 1;
    if side.checked_pow(mu.len() as u32).is_none_or(|n| n > MAX_BOX_POINTS) {
        return Err(SpectraError::BadParams(format!("box of side {} in dimension {} is too large", side, mu.len())));
    }
    let mut seen = HashSet::new();
    let mut unique = Vec::new();
    for w in box_points(mu.len(), wbox as i64) {
        let alpha = dot_int(mu, &w);
        if seen.insert(alpha.clone()) {
            unique.push((alpha, w));
        }
    }
    unique
        .into_par_iter()
        .map(|(alpha, w)| {
            let report = eigen_verdict(ctx, &alpha, params)?;
            Ok(Candidate { enclosure: alpha.enclose(64), alpha, w, verdict: report.verdict })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuditParams {
    pub m: usize,
    pub wbox: u32,
    pub kmax: u32,
    pub n: usize,
    pub depth: usize,
}

impl Default for AuditParams {
    fn default() -> Self {
        AuditParams { m: 1, wbox: 4, kmax: 5, n: 25, depth: 64 }
    }
}

/// A refuted `alpha` with `k * alpha` still plausible.
#[derive(Clone, Debug, Serialize)]
pub struct AuditFlag {
    #[serde(serialize_with = "crate::serial::elem")]
    pub alpha: FieldElement,
    pub k: u32,
    pub alpha_verdict: Verdict,
    pub k_alpha_verdict: Verdict,
    /// Levels `n` in `m+1..=N` where `(1/k) P_{n,m} w_m(k alpha)` is not integral.
    pub nonintegral_levels: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub note: &'static str,
    pub params: AuditParams,
    pub infinitesimals: InfinitesimalVerdict,
    pub image_group: SubgroupOfR,
    pub candidate_count: usize,
    pub plausible_count: usize,
    pub refuted_count: usize,
    pub flags: Vec<AuditFlag>,
    pub candidates: Vec<Candidate>,
}

pub const AUDIT_NOTE: &str = "E+ (candidates passing the battery up to N or certified) stands in for E; \
flags are falsification evidence, not a decision procedure";

/// Look for `alpha` refuted while some `k * alpha` (`k <= kmax`) passes: such a pair would be
/// torsion in `I/E`.
pub fn torsion_audit(ctx: &SpectralContext, p: &AuditParams) -> Result<AuditReport, SpectraError> {
    let measure = ctx.measure()?;
    if !ctx.certificate().uniquely_ergodic {
        return Err(SpectraError::NotCertified);
    }
    let infinitesimals = infinitesimal_report_with(ctx.tower(), measure)?.verdict;
    let image = image_group_with(measure, ctx.certificate(), p.m)?;
    let bp = BatteryParams { m: p.m, n: p.n, depth: p.depth };
    let candidates = enumerate_candidates(ctx, p.m, p.wbox, &bp)?;
    let plausible: HashMap<&FieldElement, Verdict> =
        candidates.iter().filter(|c| c.verdict.is_plausible()).map(|c| (&c.alpha, c.verdict)).collect();
    let mut flags = Vec::new();
    for c in candidates.iter().filter(|c| c.verdict.is_refuted()) {
        for k in 2..=p.kmax {
            let ka = c.alpha.mul_int(&BigInt::from(k));
            let Some(&kv) = plausible.get(&ka) else { continue };
            let w = decompose(ctx.tower(), &ka, p.m)?.w;
            let kk = BigInt::from(k);
            let mut count = 0;
            for n in p.m + 1..=p.n {
                let pw = ctx.tower().products(n, p.m)?.mul_vec(&w);
                if pw.iter().any(|x| !x.is_multiple_of(&kk)) {
                    count += 1;
                }
            }
            flags.push(AuditFlag {
                alpha: c.alpha.clone(),
                k,
                alpha_verdict: c.verdict,
                k_alpha_verdict: kv,
                nonintegral_levels: count,
            });
        }
    }
    let plausible_count = plausible.len();
    Ok(AuditReport {
        note: AUDIT_NOTE,
        params: *p,
        infinitesimals,
        image_group: image,
        candidate_count: candidates.len(),
        plausible_count,
        refuted_count: candidates.len() - plausible_count,
        flags,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_element_in;
    use crate::tower::{build_tower, DiagramSpec, Tower};

    fn stationary(m: Vec<Vec<i64>>, levels: usize) -> Tower {
        build_tower(&DiagramSpec::Stationary { matrix: m, orders: None }, levels).unwrap()
    }

    #[test]
    fn candidates_small_box() {
        let t = stationary(vec![vec![1, 1], vec![1, 0]], 8);
        let ctx = SpectralContext::new(&t);
        let c = enumerate_candidates(&ctx, 1, 1, &BatteryParams { m: 2, n: 6, depth: 16 }).unwrap();
        // alpha = w2 + (w1 - w2) * a over the 3x3 box: 9 distinct values
        assert_eq!(c.len(), 9);
        let set: HashSet<FieldElement> = c.iter().map(|x| x.alpha.clone()).collect();
        for s in ["0", "1", "-1", "(-1+sqrt(5))/2", "(3-sqrt(5))/2", "-2+sqrt(5)"] {
            assert!(set.contains(&parse_element_in(s, c[0].alpha.field()).unwrap()), "{}", s);
        }
        for x in &set {
            assert!(set.contains(&-x));
        }
        // lexicographic order in w
        assert_eq!(c[0].w, vec![BigInt::from(-1), BigInt::from(-1)]);
    }

    #[test]
    fn audit_kmax_one_is_vacuous() {
        let t = stationary(vec![vec![3, 1], vec![1, 3]], 8);
        let ctx = SpectralContext::new(&t);
        let r = torsion_audit(&ctx, &AuditParams { m: 1, wbox: 2, kmax: 1, n: 6, depth: 16 }).unwrap();
        assert!(r.flags.is_empty());
        assert!(matches!(r.infinitesimals, InfinitesimalVerdict::NonTrivial { .. }));
        assert_eq!(r.candidate_count, r.plausible_count + r.refuted_count);
    }
}
