//! Tagged string forms used in JSON reports: `exact:<value>` and `interval:[lo,hi]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;

use crate::exactnum::{FieldElement, IntervalReal};

pub fn exact_elem(e: &FieldElement) -> String {
    format!("exact:{}", e.exact_string())
}

pub fn exact_int(n: &BigInt) -> String {
    format!("exact:{}", n)
}

pub fn exact_rat(r: &BigRational) -> String {
    format!("exact:{}", r)
}

pub fn elem<S: Serializer>(e: &FieldElement, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&exact_elem(e))
}

pub fn elems<S: Serializer>(v: &[FieldElement], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(exact_elem))
}

pub fn int<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&exact_int(n))
}

pub fn ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(exact_int))
}

pub fn int_rows<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.iter().map(exact_int).collect::<Vec<_>>()))
}

pub fn rat<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&exact_rat(r))
}

pub fn interval<S: Serializer>(i: &IntervalReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&i.tagged())
}

pub fn intervals<S: Serializer>(v: &[IntervalReal], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i.tagged()))
}

pub fn opt_interval<S: Serializer>(i: &Option<IntervalReal>, s: S) -> Result<S::Ok, S::Error> {
    match i {
        Some(i) => s.serialize_str(&i.tagged()),
        None => s.serialize_none(),
    }
}
