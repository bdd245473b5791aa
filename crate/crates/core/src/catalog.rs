//! Built-in examples: tower systems and group-level data for torsion computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::dimgroup::{DimgroupError, SubgroupOfR};
use crate::exactnum::{parse_element_in, FieldElement, NumberField};
use crate::tower::{odometer_spec, sturmian_spec, DiagramSpec, TowerError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    Unknown(String),
    #[error("catalog entry '{0}' has no tower; it only feeds `torsion`")]
    NotATower(String),
    #[error("catalog entry '{0}' has no group data")]
    NoGroups(String),
    #[error("level must be at least 1")]
    Level,
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Dimgroup(#[from] DimgroupError),
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogListing {
    pub name: &'static str,
    pub kind: &'static str,
    pub description: &'static str,
}

pub fn listing() -> Vec<CatalogListing> {
    let entry = |name, kind, description| CatalogListing { name, kind, description };
    vec![
        entry("fibonacci", "tower", "Sturmian system of the golden angle, stationary matrix [[2,1],[1,1]]"),
        entry("sturmian-cf:<list>", "tower", "Sturmian model with continued-fraction digits repeated cyclically"),
        entry("odometer<d>", "tower", "odometer of constant base d >= 2, e.g. odometer2"),
        entry("inf-demo", "tower", "stationary [[3,1],[1,3]] with nontrivial infinitesimals"),
        entry("sec42", "groups", "field Q, I-approximant (1/k!)Z at level k, E = Z"),
        entry("sec43", "groups", "field Q(sqrt 5), I = Z + aZ, E = Z + 2aZ with a = (sqrt 5 - 1)/2"),
    ]
}

fn parse_list(s: &str) -> Option<Vec<u64>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// Tower spec of a catalog entry.
pub fn tower_spec(name: &str) -> Result<DiagramSpec, CatalogError> {
    match name {
        "fibonacci" => Ok(sturmian_spec(&[1])?),
        "inf-demo" => Ok(DiagramSpec::Stationary { matrix: vec![vec![3, 1], vec![1, 3]], orders: None }),
        "sec42" | "sec43" => Err(CatalogError::NotATower(name.into())),
        _ => {
            if let Some(rest) = name.strip_prefix("sturmian-cf:") {
                let cf = parse_list(rest).ok_or_else(|| CatalogError::Unknown(name.into()))?;
                return Ok(sturmian_spec(&cf)?);
            }
            if let Some(d) = name.strip_prefix("odometer").and_then(|d| d.parse::<u64>().ok()) {
                return Ok(odometer_spec(&[d])?);
            }
            Err(CatalogError::Unknown(name.into()))
        }
    }
}

/// Group-level data `(I, E)` of `sec42` (at `level`) or `sec43`.
pub fn groups(name: &str, level: usize) -> Result<(SubgroupOfR, SubgroupOfR), CatalogError> {
    match name {
        "sec42" => {
            if level == 0 {
                return Err(CatalogError::Level);
            }
            let q = NumberField::rational();
            let fact: BigInt = (1..=level).map(BigInt::from).product();
            let gen = FieldElement::from_rational(&q, BigRational::new(BigInt::one(), fact));
            let i = SubgroupOfR::generated_by(&q, &[gen])?;
            let e = SubgroupOfR::generated_by(&q, &[])?;
            Ok((i, e))
        }
        "sec43" => {
            let f = NumberField::quadratic(&BigInt::from(5)).expect("5 is not a square");
            let el = |s: &str| parse_element_in(s, &f).expect("catalog literal parses");
            let i = SubgroupOfR::generated_by(&f, &[el("1"), el("(-1+sqrt(5))/2")])?;
            let e = SubgroupOfR::generated_by(&f, &[el("1"), el("-1+sqrt(5)")])?;
            Ok((i, e))
        }
        other => {
            tower_spec(other)?;
            Err(CatalogError::NoGroups(other.into()))
        }
    }
}
