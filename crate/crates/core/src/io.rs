//! JSON file formats.
//!
//! Set: `{"intervals": [["0", "1/2"], ["1", "3/2"]]}`. Bare JSON integers are
//! accepted on input; output always uses lowest-terms strings.
//!
//! System: `{"sets": [<set>, <set>, ...]}`.
//!
//! Partition: `{"m": 3, "edges": [{"set": [1, 2], "weight": "1/2"}, ...]}`
//! with 1-based ground elements.

use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::partitions::{members, subset_of, FractionalPartition, SetSystem};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::set_core::{CompactSet1D, Interval};

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Text(String),
    Int(i64),
}

impl RawNumber {
    fn value(&self, field: &str) -> Result<Rational> {
        match self {
            RawNumber::Text(s) => parse_rational(s)
                .map_err(|_| Error::Format(format!("{field}: cannot parse {s:?} as a rational"))),
            RawNumber::Int(n) => Ok(int(*n)),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    intervals: Vec<(RawNumber, RawNumber)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    sets: Vec<RawSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    set: Vec<usize>,
    weight: RawNumber,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartition {
    m: usize,
    edges: Vec<RawEdge>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

fn build_set(raw: &RawSet, prefix: &str) -> Result<CompactSet1D> {
    if raw.intervals.is_empty() {
        return Err(Error::Format(format!("{prefix}intervals: list is empty")));
    }
    let ivs = raw
        .intervals
        .iter()
        .enumerate()
        .map(|(i, (lo, hi))| {
            let field = format!("{prefix}intervals[{i}]");
            let (lo, hi) = (lo.value(&field)?, hi.value(&field)?);
            Interval::new(lo, hi).map_err(|e| Error::Format(format!("{field}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    CompactSet1D::normalize(ivs)
}

pub fn parse_set(text: &str) -> Result<CompactSet1D> {
    let raw: RawSet = serde_json::from_str(text).map_err(json_error)?;
    build_set(&raw, "")
}

pub fn set_to_json(a: &CompactSet1D) -> serde_json::Value {
    let intervals: Vec<[String; 2]> = a
        .intervals()
        .iter()
        .map(|iv| [format_rational(iv.lo()), format_rational(iv.hi())])
        .collect();
    json!({ "intervals": intervals })
}

pub fn write_set(a: &CompactSet1D) -> String {
    set_to_json(a).to_string()
}

pub fn parse_system(text: &str) -> Result<SetSystem> {
    let raw: RawSystem = serde_json::from_str(text).map_err(json_error)?;
    let sets = raw
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| build_set(s, &format!("sets[{i}].")))
        .collect::<Result<Vec<_>>>()?;
    SetSystem::new(sets)
}

pub fn write_system(s: &SetSystem) -> String {
    let sets: Vec<serde_json::Value> = s.sets().iter().map(set_to_json).collect();
    json!({ "sets": sets }).to_string()
}

pub fn parse_partition(text: &str) -> Result<FractionalPartition> {
    let raw: RawPartition = serde_json::from_str(text).map_err(json_error)?;
    let edges = raw
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("edges[{i}]");
            if let Some(&bad) = e.set.iter().find(|&&x| x == 0 || x > raw.m) {
                return Err(Error::Format(format!(
                    "{field}.set: element {bad} is outside 1..={}",
                    raw.m
                )));
            }
            let s = subset_of(&e.set).map_err(|err| Error::Format(format!("{field}.set: {err}")))?;
            Ok((s, e.weight.value(&format!("{field}.weight"))?))
        })
        .collect::<Result<Vec<_>>>()?;
    FractionalPartition::new(raw.m, edges)
}

pub fn write_partition(p: &FractionalPartition) -> String {
    let edges: Vec<serde_json::Value> = p
        .edges()
        .iter()
        .map(|(s, w)| json!({ "set": members(*s), "weight": format_rational(w) }))
        .collect();
    json!({ "m": p.m(), "edges": edges }).to_string()
}
