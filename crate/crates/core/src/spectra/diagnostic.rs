//! Convergence rate of normalized tower rows to the measure.

use serde::Serialize;

use super::{max_abs, Series, SpectraError, SpectralContext};
use crate::exactnum::FieldElement;

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub m: usize,
    pub n: usize,
    /// `t_n = max_i || h_n(i) mu_m - P_{n,m}(i, .) ||_inf` for `n = m+1..=N`.
    pub series: Series,
}

pub fn convergence_diagnostic(ctx: &SpectralContext, m: usize, n: usize) -> Result<ConvergenceReport, SpectraError> {
    let measure = ctx.measure()?;
    let t = ctx.tower();
    if m == 0 || m >= n || n > measure.depth() {
        return Err(SpectraError::BadParams(format!("need 1 <= m < N <= {}, got m={}, N={}", measure.depth(), m, n)));
    }
    let mu = measure.mu(m);
    let field = measure.field();
    let mut terms = Vec::with_capacity(n - m);
    for lv in m + 1..=n {
        let p = t.products(lv, m)?;
        let h = t.heights(lv)?;
        let vals = (0..p.rows()).flat_map(|i| {
            let hi = &h[i];
            let p = &p;
            mu.iter()
                .enumerate()
                .map(move |(k, x)| &x.mul_int(hi) - &FieldElement::from_int(field, p.get(i, k).clone()))
        });
        terms.push(max_abs(vals, FieldElement::zero(field)));
    }
    Ok(ConvergenceReport { m, n, series: Series::from_terms(m + 1, terms) })
}
