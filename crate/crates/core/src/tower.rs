//! Kakutani-Rohlin tower sequences: incidence matrices, Vershik edge orders, height vectors,
//! matrix products, telescoping and suffix vectors.
//!
//! Level `n` runs from 1 to `N`. `M_1` is the all-ones column, `M_n` for `n >= 2` has shape
//! `C_n x C_{n-1}` and strictly positive entries, and `H_n = M_n H_{n-1}`.
//! Vertices and edge sources are 0-based in the API and 1-based in spec files.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlattice::IntMatrix;

/// Upper bound on the number of raw matrices composed to reach positivity.
pub const DEFAULT_COMPOSE_BOUND: usize = 10;

/// Composed orders with more edges than this are not materialized.
const ORDER_EDGE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("a tower needs at least 2 levels")]
    TooFewLevels,
    #[error("stationary matrix must be square")]
    NonSquare,
    #[error("matrix entries must be nonnegative")]
    NegativeEntry,
    #[error("matrix at raw level {level} has incompatible dimensions")]
    DimensionMismatch { level: usize },
    #[error("first explicit matrix must be an all-ones column (h_1 = 1)")]
    BadFirstMatrix,
    #[error("explicit spec provides {available} raw matrices, not enough for {levels} levels")]
    NotEnoughMatrices { available: usize, levels: usize },
    #[error("positivity unreachable at level {level} within {bound} composed matrices")]
    PositivityUnreachable { level: usize, bound: usize },
    #[error("order for vertex {vertex} at raw level {level} is inconsistent with the matrix row")]
    OrderMismatch { level: usize, vertex: usize },
    #[error("continued fraction list is empty or has a zero entry")]
    BadContinuedFraction,
    #[error("odometer bases must be nonempty and at least 2")]
    BadBase,
    #[error("level index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("telescoping cuts must be increasing, start at 1 and stay within the tower")]
    BadCuts,
    #[error("edge order at level {0} is too large to materialize")]
    OrderTooLarge(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

/// Edge order entry of a spec file. `level` refers to raw (pre-composition) levels and
/// applies to every level when absent; vertex and sources are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub vertex: usize,
    pub sources: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DiagramSpec {
    Stationary {
        matrix: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orders: Option<Vec<OrderSpec>>,
    },
    Explicit {
        matrices: Vec<Vec<Vec<i64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orders: Option<Vec<OrderSpec>>,
    },
    Sturmian {
        cf: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orders: Option<Vec<OrderSpec>>,
    },
    Odometer {
        bases: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orders: Option<Vec<OrderSpec>>,
    },
}

impl DiagramSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            DiagramSpec::Stationary { .. } => "stationary",
            DiagramSpec::Explicit { .. } => "explicit",
            DiagramSpec::Sturmian { .. } => "sturmian",
            DiagramSpec::Odometer { .. } => "odometer",
        }
    }

    fn orders(&self) -> Option<&Vec<OrderSpec>> {
        match self {
            DiagramSpec::Stationary { orders, .. }
            | DiagramSpec::Explicit { orders, .. }
            | DiagramSpec::Sturmian { orders, .. }
            | DiagramSpec::Odometer { orders, .. } => orders.as_ref(),
        }
    }
}

/// Spec for the Sturmian model with continued-fraction digits `cf`, repeated cyclically.
/// A constant list gives a stationary spec.
pub fn sturmian_spec(cf: &[u64]) -> Result<DiagramSpec, TowerError> {
    if cf.is_empty() || cf.contains(&0) {
        return Err(TowerError::BadContinuedFraction);
    }
    if cf.iter().all(|&a| a == cf[0]) {
        let a = cf[0] as i64;
        return Ok(DiagramSpec::Stationary { matrix: vec![vec![a, 1], vec![1, 0]], orders: None });
    }
    Ok(DiagramSpec::Sturmian { cf: cf.to_vec(), orders: None })
}

/// Spec for the odometer with the given bases, repeated cyclically.
pub fn odometer_spec(bases: &[u64]) -> Result<DiagramSpec, TowerError> {
    if bases.is_empty() || bases.iter().any(|&b| b < 2) {
        return Err(TowerError::BadBase);
    }
    Ok(DiagramSpec::Odometer { bases: bases.to_vec(), orders: None })
}

/// Edge orders of one level: `order[l]` lists the sources of vertex `l`, lowest edge first.
pub type LevelOrder = Vec<Vec<usize>>;

/// Eventual periodicity of the level data: `M_{n+len} = M_n` with equal orders for `n >= start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Period {
    pub start: usize,
    pub len: usize,
}

pub struct Tower {
    kind: String,
    mats: Vec<IntMatrix>,
    orders: Vec<Option<LevelOrder>>,
    composition: Vec<(usize, usize)>,
    period: Option<Period>,
    heights: Vec<Vec<BigInt>>,
    products: RwLock<HashMap<(usize, usize), Arc<IntMatrix>>>,
}

impl Clone for Tower {
    fn clone(&self) -> Self {
        let cache = self.products.read().map(|c| c.clone()).unwrap_or_default();
        Tower {
            kind: self.kind.clone(),
            mats: self.mats.clone(),
            orders: self.orders.clone(),
            composition: self.composition.clone(),
            period: self.period,
            heights: self.heights.clone(),
            products: RwLock::new(cache),
        }
    }
}

impl std::fmt::Debug for Tower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tower")
            .field("kind", &self.kind)
            .field("levels", &self.levels())
            .field("vertex_counts", &self.vertex_counts())
            .field("period", &self.period)
            .finish()
    }
}

fn default_order(m: &IntMatrix) -> LevelOrder {
    (0..m.rows())
        .map(|l| {
            let mut out = Vec::new();
            for k in 0..m.cols() {
                let c: u64 = m.get(l, k).try_into().unwrap_or(u64::MAX);
                out.extend(std::iter::repeat_n(k, c as usize));
            }
            out
        })
        .collect()
}

fn order_edge_count(m: &IntMatrix) -> u64 {
    m.entries().iter().map(|x| u64::try_from(x).unwrap_or(u64::MAX)).fold(0u64, |a, b| a.saturating_add(b))
}

fn validate_order(m: &IntMatrix, order: &LevelOrder, level: usize) -> Result<(), TowerError> {
    if order.len() != m.rows() {
        return Err(TowerError::OrderMismatch { level, vertex: order.len().min(m.rows()) + 1 });
    }
    for (l, sources) in order.iter().enumerate() {
        let mut counts = vec![0u64; m.cols()];
        for &k in sources {
            if k >= m.cols() {
                return Err(TowerError::OrderMismatch { level, vertex: l + 1 });
            }
            counts[k] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            if BigInt::from(c) != *m.get(l, k) {
                return Err(TowerError::OrderMismatch { level, vertex: l + 1 });
            }
        }
    }
    Ok(())
}

/// Order of the composite `upper * lower`: for each edge of `upper` (most significant) expand
/// it by the order of its source in `lower`.
fn compose_order(upper: &LevelOrder, lower: &LevelOrder) -> LevelOrder {
    upper.iter().map(|srcs| srcs.iter().flat_map(|&k| lower[k].iter().copied()).collect()).collect()
}

fn to_matrix(rows: &[Vec<i64>], level: usize) -> Result<IntMatrix, TowerError> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(TowerError::DimensionMismatch { level });
    }
    if rows.iter().flatten().any(|&x| x < 0) {
        return Err(TowerError::NegativeEntry);
    }
    Ok(IntMatrix::from_rows(rows, cols))
}

/// Source of raw matrices `R_2, R_3, ...` with an optional cyclic period.
struct RawSource {
    cyclic: Vec<IntMatrix>,
    explicit: bool,
    first_cols: usize,
}

impl RawSource {
    fn from_spec(spec: &DiagramSpec) -> Result<Self, TowerError> {
        match spec {
            DiagramSpec::Stationary { matrix, .. } => {
                let m = to_matrix(matrix, 2)?;
                if !m.is_square() {
                    return Err(TowerError::NonSquare);
                }
                let n = m.rows();
                Ok(RawSource { cyclic: vec![m], explicit: false, first_cols: n })
            }
            DiagramSpec::Explicit { matrices, .. } => {
                let first = matrices.first().ok_or(TowerError::BadFirstMatrix)?;
                if first.is_empty() || first.iter().any(|r| r.len() != 1 || r[0] != 1) {
                    return Err(TowerError::BadFirstMatrix);
                }
                let mut mats = Vec::new();
                let mut prev = first.len();
                for (i, m) in matrices.iter().enumerate().skip(1) {
                    let m = to_matrix(m, i + 1)?;
                    if m.cols() != prev {
                        return Err(TowerError::DimensionMismatch { level: i + 1 });
                    }
                    prev = m.rows();
                    mats.push(m);
                }
                Ok(RawSource { cyclic: mats, explicit: true, first_cols: first.len() })
            }
            DiagramSpec::Sturmian { cf, .. } => {
                if cf.is_empty() || cf.contains(&0) {
                    return Err(TowerError::BadContinuedFraction);
                }
                let mats = cf.iter().map(|&a| IntMatrix::from_rows(&[vec![a as i64, 1], vec![1, 0]], 2)).collect();
                Ok(RawSource { cyclic: mats, explicit: false, first_cols: 2 })
            }
            DiagramSpec::Odometer { bases, .. } => {
                if bases.is_empty() || bases.iter().any(|&b| b < 2) {
                    return Err(TowerError::BadBase);
                }
                let mats = bases.iter().map(|&b| IntMatrix::from_rows(&[vec![b as i64]], 1)).collect();
                Ok(RawSource { cyclic: mats, explicit: false, first_cols: 1 })
            }
        }
    }

    /// Raw matrix at raw index `i` (0 for `R_2`).
    fn get(&self, i: usize) -> Option<&IntMatrix> {
        if self.explicit {
            self.cyclic.get(i)
        } else {
            Some(&self.cyclic[i % self.cyclic.len()])
        }
    }

    /// Minimal period of the cyclic raw sequence.
    fn period(&self) -> Option<usize> {
        if self.explicit {
            return None;
        }
        let n = self.cyclic.len();
        (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.cyclic[i] == self.cyclic[i % p]))
    }
}

/// Build a tower with `levels` levels, composing consecutive raw matrices until positive.
pub fn build_tower(spec: &DiagramSpec, levels: usize) -> Result<Tower, TowerError> {
    build_tower_with_bound(spec, levels, DEFAULT_COMPOSE_BOUND)
}

pub fn build_tower_with_bound(spec: &DiagramSpec, levels: usize, bound: usize) -> Result<Tower, TowerError> {
    if levels < 2 {
        return Err(TowerError::TooFewLevels);
    }
    let raw = RawSource::from_spec(spec)?;
    let order_specs = spec.orders().cloned().unwrap_or_default();
    let level_specific = order_specs.iter().any(|o| o.level.is_some());

    let raw_order = |i: usize, m: &IntMatrix| -> Result<LevelOrder, TowerError> {
        let raw_level = i + 2;
        let mut order = default_order(m);
        for o in &order_specs {
            if o.level.is_some_and(|lv| lv != raw_level) {
                continue;
            }
            if o.vertex == 0 || o.vertex > m.rows() || o.sources.contains(&0) {
                return Err(TowerError::OrderMismatch { level: raw_level, vertex: o.vertex });
            }
            order[o.vertex - 1] = o.sources.iter().map(|&k| k - 1).collect();
        }
        validate_order(m, &order, raw_level)?;
        Ok(order)
    };

    let raw_period = raw.period();
    let n0 = raw.first_cols;
    let mut mats = vec![IntMatrix::ones_column(n0)];
    let mut orders: Vec<Option<LevelOrder>> = vec![Some(vec![vec![0]; n0])];
    let mut composition = vec![(0usize, 0usize)];
    let mut states: Vec<Option<usize>> = vec![None];
    let mut next = 0usize;
    let mut prev_rows = n0;
    for level in 2..=levels {
        let start = next;
        let mut acc: Option<(IntMatrix, Option<LevelOrder>)> = None;
        let mut used = 0;
        loop {
            let r = raw.get(next).ok_or(TowerError::NotEnoughMatrices { available: next, levels })?;
            if r.cols() != acc.as_ref().map_or(prev_rows, |(m, _)| m.rows()) {
                return Err(TowerError::DimensionMismatch { level: next + 2 });
            }
            if (0..r.rows()).any(|l| r.row(l).iter().all(|x| x.is_zero())) {
                return Err(TowerError::PositivityUnreachable { level, bound });
            }
            let ord = raw_order(next, r)?;
            next += 1;
            used += 1;
            acc = Some(match acc {
                None => (r.clone(), Some(ord)),
                Some((m, o)) => {
                    let prod = r.mul(&m);
                    let o = match o {
                        Some(o) if order_edge_count(&prod) <= ORDER_EDGE_LIMIT => Some(compose_order(&ord, &o)),
                        _ => None,
                    };
                    (prod, o)
                }
            });
            let (m, _) = acc.as_ref().unwrap();
            if m.is_positive() {
                break;
            }
            if used >= bound {
                return Err(TowerError::PositivityUnreachable { level, bound });
            }
        }
        let (m, o) = acc.unwrap();
        prev_rows = m.rows();
        mats.push(m);
        orders.push(o);
        composition.push((start + 2, next + 1));
        states.push(raw_period.filter(|_| !level_specific).map(|p| start % p));
    }

    // the composition process is a function of the raw phase, so a repeated phase certifies periodicity
    let mut period = None;
    'search: for a in 2..=levels {
        let Some(sa) = states[a - 1] else { break };
        for b in a + 1..=levels {
            if states[b - 1] == Some(sa) {
                period = Some(Period { start: a, len: b - a });
                break 'search;
            }
        }
    }
    if period.is_none() && raw_period == Some(1) && !level_specific {
        // too few levels to observe a repeat, but a period-1 source repeats trivially
        period = Some(Period { start: 2, len: 1 });
    }

    Ok(Tower::assemble(spec.kind().to_string(), mats, orders, composition, period))
}

impl Tower {
    fn assemble(
        kind: String,
        mats: Vec<IntMatrix>,
        orders: Vec<Option<LevelOrder>>,
        composition: Vec<(usize, usize)>,
        period: Option<Period>,
    ) -> Tower {
        let mut heights: Vec<Vec<BigInt>> = vec![vec![BigInt::one(); mats[0].rows()]];
        for m in mats.iter().skip(1) {
            let h = m.mul_vec(heights.last().unwrap());
            heights.push(h);
        }
        Tower { kind, mats, orders, composition, period, heights, products: RwLock::new(HashMap::new()) }
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn levels(&self) -> usize {
        self.mats.len()
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.mats.iter().map(|m| m.rows()).collect()
    }

    pub fn vertex_count(&self, n: usize) -> usize {
        self.mats[n - 1].rows()
    }

    pub fn period(&self) -> Option<Period> {
        self.period
    }

    /// Stationary towers repeat a single matrix from level 2 on.
    pub fn is_stationary(&self) -> bool {
        self.period == Some(Period { start: 2, len: 1 })
    }

    /// The repeated matrix of a stationary tower.
    pub fn stationary_matrix(&self) -> Option<&IntMatrix> {
        self.is_stationary().then(|| &self.mats[1])
    }

    /// Raw level range `(first, last)` composed into each level (level 1 reports `(0, 0)`).
    pub fn composition(&self) -> &[(usize, usize)] {
        &self.composition
    }

    fn check_level(&self, n: usize) -> Result<(), TowerError> {
        if n == 0 || n > self.levels() {
            return Err(TowerError::IndexOutOfRange(format!("level {} not in 1..={}", n, self.levels())));
        }
        Ok(())
    }

    pub fn matrix(&self, n: usize) -> Result<&IntMatrix, TowerError> {
        self.check_level(n)?;
        Ok(&self.mats[n - 1])
    }

    pub fn order(&self, n: usize) -> Result<&LevelOrder, TowerError> {
        self.check_level(n)?;
        self.orders[n - 1].as_ref().ok_or(TowerError::OrderTooLarge(n))
    }

    pub fn heights(&self, n: usize) -> Result<&[BigInt], TowerError> {
        self.check_level(n)?;
        Ok(&self.heights[n - 1])
    }

    /// `P_{n,m} = M_n ... M_{m+1}` for `1 <= m <= n <= N` (identity when `m = n`).
    pub fn products(&self, n: usize, m: usize) -> Result<Arc<IntMatrix>, TowerError> {
        self.check_level(n)?;
        if m == 0 || m > n {
            return Err(TowerError::IndexOutOfRange(format!("product P_({},{}) needs 1 <= m <= n", n, m)));
        }
        if let Some(p) = self.products.read().unwrap_or_else(|e| e.into_inner()).get(&(n, m)) {
            return Ok(p.clone());
        }
        let p = if m == n {
            IntMatrix::identity(self.vertex_count(n))
        } else if m + 1 == n {
            self.mats[n - 1].clone()
        } else {
            let lower = self.products(n - 1, m)?;
            self.mats[n - 1].mul(&lower)
        };
        assert_eq!(p.mul_vec(&self.heights[m - 1]), self.heights[n - 1], "P_(n,m) H_m != H_n");
        let p = Arc::new(p);
        self.products.write().unwrap_or_else(|e| e.into_inner()).insert((n, m), p.clone());
        Ok(p)
    }

    /// Telescope to the levels listed in `cuts` (1-based, increasing, starting at 1).
    pub fn telescope(&self, cuts: &[usize]) -> Result<Tower, TowerError> {
        if cuts.is_empty()
            || cuts[0] != 1
            || cuts.windows(2).any(|w| w[0] >= w[1])
            || *cuts.last().unwrap() > self.levels()
        {
            return Err(TowerError::BadCuts);
        }
        if cuts.len() < 2 {
            return Err(TowerError::TooFewLevels);
        }
        let mut mats = vec![self.mats[0].clone()];
        let mut orders = vec![self.orders[0].clone()];
        let mut composition = vec![(0, 0)];
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            mats.push((*self.products(hi, lo)?).clone());
            let mut o = self.orders[lo].clone();
            for lv in lo + 2..=hi {
                let too_big = order_edge_count(&*self.products(lv, lo)?) > ORDER_EDGE_LIMIT;
                o = match (&self.orders[lv - 1], o) {
                    (Some(upper), Some(lower)) if !too_big => Some(compose_order(upper, &lower)),
                    _ => None,
                };
            }
            orders.push(o);
            composition.push((self.composition[lo].0, self.composition[hi - 1].1));
        }
        let identical = cuts.len() == self.levels();
        let period = if identical { self.period } else { None };
        Ok(Tower::assemble(self.kind.clone(), mats, orders, composition, period))
    }

    /// Distinct attainable suffix vectors per vertex of level `n + 1`, for `1 <= n < N`.
    pub fn suffix_vectors(&self, n: usize) -> Result<SuffixSet, TowerError> {
        if n == 0 || n >= self.levels() {
            return Err(TowerError::IndexOutOfRange(format!("suffix level {} not in 1..{}", n, self.levels())));
        }
        let order = self.order(n + 1)?;
        let c = self.vertex_count(n);
        let per_vertex = order
            .iter()
            .map(|srcs| {
                let mut out: Vec<Vec<u64>> = Vec::new();
                for j in 1..=srcs.len() {
                    let v = tail_counts(srcs, j, c);
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
                out
            })
            .collect();
        Ok(SuffixSet { level: n, per_vertex })
    }

    /// All points of the level-`n` towers as paths, in lexicographic order.
    pub fn paths(&self, n: usize) -> Result<Vec<TowerPath>, TowerError> {
        self.check_level(n)?;
        let mut out = Vec::new();
        for top in 0..self.vertex_count(n) {
            let mut stack = vec![(top, n, Vec::new())];
            while let Some((v, lv, edges)) = stack.pop() {
                if lv == 1 {
                    out.push(TowerPath { top, edges });
                    continue;
                }
                let srcs = &self.order(lv)?[v];
                for e in (0..srcs.len()).rev() {
                    let mut ed = edges.clone();
                    ed.push(e);
                    stack.push((srcs[e], lv - 1, ed));
                }
            }
        }
        Ok(out)
    }

    /// Suffix vectors `s_1, ..., s_{n-1}` along a path ending at level `n = edges.len() + 1`.
    pub fn path_suffixes(&self, path: &TowerPath) -> Result<Vec<Vec<u64>>, TowerError> {
        let n = path.edges.len() + 1;
        self.check_level(n)?;
        if path.top >= self.vertex_count(n) {
            return Err(TowerError::InvalidPath(format!("vertex {} at level {}", path.top, n)));
        }
        // walk down recording the vertex and edge position at each level
        let mut vertex = path.top;
        let mut steps = Vec::with_capacity(n - 1);
        for (i, &e) in path.edges.iter().enumerate() {
            let lv = n - i;
            let srcs = &self.order(lv)?[vertex];
            if e >= srcs.len() {
                return Err(TowerError::InvalidPath(format!("edge {} at level {}", e, lv)));
            }
            steps.push((lv, vertex, e));
            vertex = srcs[e];
        }
        steps.reverse();
        let mut in_base = true; // every point of a level-1 tower is a base point
        let mut out = Vec::with_capacity(n - 1);
        for &(lv, v, e) in &steps {
            let srcs = &self.order(lv)?[v];
            let c = self.vertex_count(lv - 1);
            let base_here = in_base && e == 0;
            let s = if base_here {
                vec![0; c]
            } else if in_base {
                tail_counts(srcs, e, c)
            } else {
                tail_counts(srcs, e + 1, c)
            };
            out.push(s);
            in_base = base_here;
        }
        Ok(out)
    }

    /// Entrance time `r_n = sum_k <s_k, H_k>` of the point given by `path`.
    pub fn entrance_time(&self, path: &TowerPath) -> Result<BigInt, TowerError> {
        let suffixes = self.path_suffixes(path)?;
        let mut r = BigInt::zero();
        for (k, s) in suffixes.iter().enumerate() {
            for (sk, hk) in s.iter().zip(&self.heights[k]) {
                r += hk * BigInt::from(*sk);
            }
        }
        Ok(r)
    }
}

/// Counts `#{i >= from : sources[i] = k}` for each `k`.
fn tail_counts(sources: &[usize], from: usize, c: usize) -> Vec<u64> {
    let mut v = vec![0u64; c];
    for &k in &sources[from.min(sources.len())..] {
        v[k] += 1;
    }
    v
}

/// A point of a level-`n` tower: the top vertex and the edge position chosen at each level,
/// from level `n` down to level 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerPath {
    pub top: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuffixSet {
    pub level: usize,
    pub per_vertex: Vec<Vec<Vec<u64>>>,
}

impl SuffixSet {
    pub fn all(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.per_vertex.iter().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn fib(levels: usize) -> Tower {
        build_tower(&DiagramSpec::Stationary { matrix: vec![vec![1, 1], vec![1, 0]], orders: None }, levels).unwrap()
    }

    #[test]
    fn fibonacci_auto_telescopes() {
        let t = fib(6);
        assert_eq!(t.levels(), 6);
        let b = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        for n in 2..=6 {
            assert_eq!(t.matrix(n).unwrap(), &b);
            assert_eq!(t.composition()[n - 1], (2 * n - 2, 2 * n - 1));
        }
        assert!(t.is_stationary());
        assert_eq!(t.heights(2).unwrap(), &ints(&[3, 2])[..]);
        assert_eq!(t.heights(3).unwrap(), &ints(&[8, 5])[..]);
        assert_eq!(t.heights(4).unwrap(), &ints(&[21, 13])[..]);
        assert_eq!(*t.products(3, 1).unwrap(), IntMatrix::from_i64(&[&[5, 3], &[3, 2]]));
        assert_eq!(t.order(2).unwrap(), &vec![vec![0, 1, 0], vec![0, 1]]);
    }

    #[test]
    fn odometer_heights() {
        let t = build_tower(&odometer_spec(&[2, 2, 2]).unwrap(), 4).unwrap();
        let h: Vec<BigInt> = (1..=4).map(|n| t.heights(n).unwrap()[0].clone()).collect();
        assert_eq!(h, ints(&[1, 2, 4, 8]));
        assert!(t.is_stationary());
        let mixed = build_tower(&odometer_spec(&[2, 3]).unwrap(), 5).unwrap();
        assert_eq!(mixed.period(), Some(Period { start: 2, len: 2 }));
        assert_eq!(mixed.heights(5).unwrap()[0], BigInt::from(36));
        assert_eq!(odometer_spec(&[1, 2]).unwrap_err(), TowerError::BadBase);
    }

    #[test]
    fn build_errors() {
        let zero_rows = DiagramSpec::Explicit {
            matrices: vec![vec![vec![1], vec![1]], vec![vec![1, 1], vec![0, 0]], vec![vec![1, 1], vec![0, 0]]],
            orders: None,
        };
        assert!(matches!(build_tower(&zero_rows, 3), Err(TowerError::PositivityUnreachable { .. })));
        let non_square = DiagramSpec::Stationary { matrix: vec![vec![1, 1]], orders: None };
        assert_eq!(build_tower(&non_square, 3).unwrap_err(), TowerError::NonSquare);
        let bad_first = DiagramSpec::Explicit { matrices: vec![vec![vec![2], vec![1]]], orders: None };
        assert_eq!(build_tower(&bad_first, 2).unwrap_err(), TowerError::BadFirstMatrix);
        let bad_order = DiagramSpec::Stationary {
            matrix: vec![vec![2, 1], vec![1, 1]],
            orders: Some(vec![OrderSpec { level: None, vertex: 1, sources: vec![1, 2] }]),
        };
        assert!(matches!(build_tower(&bad_order, 3), Err(TowerError::OrderMismatch { .. })));
        assert_eq!(sturmian_spec(&[]).unwrap_err(), TowerError::BadContinuedFraction);
        assert_eq!(build_tower(&odometer_spec(&[2]).unwrap(), 1).unwrap_err(), TowerError::TooFewLevels);
    }

    #[test]
    fn telescoping() {
        let t = fib(6);
        let same = t.telescope(&[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(same.mats, t.mats);
        assert_eq!(same.period(), t.period());
        let t2 = t.telescope(&[1, 3, 5]).unwrap();
        let b2 = IntMatrix::from_i64(&[&[5, 3], &[3, 2]]);
        assert_eq!(t2.matrix(2).unwrap(), &b2);
        assert_eq!(t2.matrix(3).unwrap(), &b2);
        assert_eq!(t2.heights(2).unwrap(), &ints(&[8, 5])[..]);
        assert_eq!(*t2.products(3, 2).unwrap(), *t.products(5, 3).unwrap());
        assert_eq!(t.telescope(&[1, 2]).unwrap().levels(), 2);
        assert_eq!(t.telescope(&[2, 3]).unwrap_err(), TowerError::BadCuts);
        // composed orders stay consistent with the composed matrices
        validate_order(t2.matrix(2).unwrap(), t2.order(2).unwrap(), 2).unwrap();
    }

    #[test]
    fn suffix_examples() {
        let t = fib(3);
        let s = t.suffix_vectors(1).unwrap();
        // vertex 1 ordered sources (1,2,1): tails after the first edge
        assert_eq!(s.per_vertex[0], vec![vec![1, 1], vec![1, 0], vec![0, 0]]);
        assert_eq!(s.per_vertex[1], vec![vec![0, 1], vec![0, 0]]);
        let single =
            DiagramSpec::Explicit { matrices: vec![vec![vec![1]], vec![vec![1]], vec![vec![1]]], orders: None };
        let ts = build_tower(&single, 3).unwrap();
        assert_eq!(ts.suffix_vectors(1).unwrap().per_vertex, vec![vec![vec![0]]]);
    }

    #[test]
    fn path_model_matches_tail_definition() {
        let t = fib(4);
        for n in 2..=4 {
            let paths = t.paths(n).unwrap();
            let total: BigInt = t.heights(n).unwrap().iter().sum();
            assert_eq!(BigInt::from(paths.len()), total);
            // entrance times into the level-n base take each value 0..h_n(l)-1 exactly once per tower
            for top in 0..t.vertex_count(n) {
                let mut times: Vec<BigInt> =
                    paths.iter().filter(|p| p.top == top).map(|p| t.entrance_time(p).unwrap()).collect();
                times.sort();
                let h = &t.heights(n).unwrap()[top];
                let expect: Vec<BigInt> = num_iter(h);
                assert_eq!(times, expect);
            }
        }
    }

    fn num_iter(h: &BigInt) -> Vec<BigInt> {
        let mut v = Vec::new();
        let mut i = BigInt::zero();
        while &i < h {
            v.push(i.clone());
            i += 1;
        }
        v
    }

    #[test]
    fn spec_json_schema() {
        let s: DiagramSpec = serde_json::from_str(
            r#"{"kind":"stationary","matrix":[[2,1],[1,1]],"orders":[{"vertex":2,"sources":[2,1]}]}"#,
        )
        .unwrap();
        let t = build_tower(&s, 3).unwrap();
        assert_eq!(t.order(2).unwrap()[1], vec![1, 0]);
        let o: DiagramSpec = serde_json::from_str(r#"{"kind":"odometer","bases":[2,3]}"#).unwrap();
        assert_eq!(o, odometer_spec(&[2, 3]).unwrap());
    }
}
