//! Fractional partitions of `[m]` and the inequalities they index:
//! fractional subadditivity of the index, fractional superadditivity of
//! measure, and super/submodularity of abstract set functions.
//!
//! Subsets of `[m]` are bitmasks, bit `i` standing for element `i + 1`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{schneider_index, ProductSet};
use crate::rational::{format_rational, Rational};
use crate::set_core::CompactSet1D;

pub type Subset = u32;

/// Ground sets larger than this do not fit the bitmask encoding.
pub const MAX_GROUND: usize = 31;

/// Enumerating all pairs of `2^m` subsets stops being cheap past this.
pub const MAX_SET_FUNCTION_GROUND: usize = 10;

/// Full set `[m]`.
pub fn full(m: usize) -> Subset {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// 1-based members of `s`, ascending.
pub fn members(s: Subset) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Bitmask of 1-based members.
pub fn subset_of(elements: &[usize]) -> Result<Subset> {
    let mut s = 0;
    for &e in elements {
        if e == 0 || e > MAX_GROUND {
            return Err(Error::InvalidPartition(format!(
                "element {e} is outside 1..={MAX_GROUND}"
            )));
        }
        s |= 1 << (e - 1);
    }
    Ok(s)
}

/// `{1,2}` style rendering.
pub fn subset_label(s: Subset) -> String {
    let inner: Vec<String> = members(s).iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Weighted hypergraph on `[m]`. Construction checks the shape of each edge;
/// the covering condition is left to [`validate_partition`] so that invalid
/// input can be diagnosed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalPartition {
    m: usize,
    edges: Vec<(Subset, Rational)>,
}

impl FractionalPartition {
    pub fn new(m: usize, edges: Vec<(Subset, Rational)>) -> Result<Self> {
        if m == 0 || m > MAX_GROUND {
            return Err(Error::InvalidPartition(format!(
                "ground set size {m} is outside 1..={MAX_GROUND}"
            )));
        }
        for (s, w) in &edges {
            if *s == 0 {
                return Err(Error::InvalidPartition("edge is the empty set".into()));
            }
            if s & !full(m) != 0 {
                return Err(Error::InvalidPartition(format!(
                    "edge {} is not a subset of [{m}]",
                    subset_label(*s)
                )));
            }
            if w.is_negative() {
                return Err(Error::InvalidPartition(format!(
                    "edge {} has negative weight {}",
                    subset_label(*s),
                    format_rational(w)
                )));
            }
        }
        Ok(Self { m, edges })
    }

    /// `{[m]}` with weight 1.
    pub fn trivial(m: usize) -> Result<Self> {
        Self::new(m, vec![(full(m), Rational::one())])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(Subset, Rational)] {
        &self.edges
    }

    /// Σ of weights over edges containing element `i` (1-based).
    pub fn coverage(&self, i: usize) -> Rational {
        self.edges
            .iter()
            .filter(|(s, _)| s >> (i - 1) & 1 == 1)
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    }

    /// A single edge equal to `[m]` once edges are merged and zero weights
    /// dropped.
    pub fn is_trivial(&self) -> bool {
        let merged = merge_edges(self.edges.iter().cloned());
        merged.len() == 1 && merged[0].0 == full(self.m)
    }
}

/// Sums weights of repeated subsets and drops zero-weight edges; output is
/// sorted by mask.
fn merge_edges<I: IntoIterator<Item = (Subset, Rational)>>(edges: I) -> Vec<(Subset, Rational)> {
    let mut acc: BTreeMap<Subset, Rational> = BTreeMap::new();
    for (s, w) in edges {
        *acc.entry(s).or_insert_with(Rational::zero) += w;
    }
    acc.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionValidation {
    pub valid: bool,
    /// `(element, coverage)` for each element whose coverage is not 1.
    pub violations: Vec<(usize, Rational)>,
}

impl std::fmt::Display for PartitionValidation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.valid {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|(i, w)| format!("element {i} has total weight {}", format_rational(w)))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

pub fn validate_partition(p: &FractionalPartition) -> PartitionValidation {
    let violations: Vec<(usize, Rational)> = (1..=p.m)
        .map(|i| (i, p.coverage(i)))
        .filter(|(_, w)| !w.is_one())
        .collect();
    PartitionValidation {
        valid: violations.is_empty(),
        violations,
    }
}

fn require_valid(p: &FractionalPartition) -> Result<()> {
    let v = validate_partition(p);
    if v.valid {
        Ok(())
    } else {
        Err(Error::InvalidPartition(v.to_string()))
    }
}

/// Clears denominators: returns `q` and a multiset of subsets in which each
/// element of `[m]` appears exactly `q` times, edge `S` listed `q β(S)` times.
pub fn expand_rational(p: &FractionalPartition) -> Result<(u64, Vec<Subset>)> {
    require_valid(p)?;
    let q = p
        .edges
        .iter()
        .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let q_u64 = q
        .to_u64()
        .ok_or_else(|| Error::InvalidPartition("common denominator overflows u64".into()))?;
    let mut out = Vec::new();
    for (s, w) in &p.edges {
        let copies = (w * Rational::from_integer(q.clone())).to_integer();
        let copies = copies
            .to_u64()
            .ok_or_else(|| Error::InvalidPartition("multiplicity overflows u64".into()))?;
        out.extend(std::iter::repeat_n(*s, copies as usize));
    }
    Ok((q_u64, out))
}

/// `m` nonempty compact sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    sets: Vec<CompactSet1D>,
}

impl SetSystem {
    pub fn new(sets: Vec<CompactSet1D>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptyList);
        }
        if sets.len() > MAX_GROUND {
            return Err(Error::GroundSetTooLarge {
                m: sets.len(),
                max: MAX_GROUND,
            });
        }
        Ok(Self { sets })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[CompactSet1D] {
        &self.sets
    }

    /// `A_S = Σ_{i ∈ S} A_i`; `S` must be nonempty.
    pub fn subset_sum(&self, s: Subset) -> CompactSet1D {
        let chosen: Vec<&CompactSet1D> = members(s).into_iter().map(|i| &self.sets[i - 1]).collect();
        CompactSet1D::sum_all(chosen).expect("subset is nonempty")
    }

    /// `c(A_S)`.
    pub fn subset_index(&self, s: Subset) -> Rational {
        schneider_index(&self.subset_sum(s))
    }
}

fn check_dims(m: usize, p: &FractionalPartition) -> Result<()> {
    if p.m != m {
        return Err(Error::InvalidPartition(format!(
            "partition is on [{}] but the system has {m} sets",
            p.m
        )));
    }
    require_valid(p)
}

/// Which equality condition explains `lhs = rhs`, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityCondition {
    /// The translated partition is trivial.
    TrivialTranslated,
    /// The translated partition is nontrivial and every positively weighted
    /// `A_S` is an interval.
    AllIntervals,
    /// Neither condition holds, so strict inequality is predicted.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubadditivityReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    pub is_equality: bool,
    pub condition: EqualityCondition,
}

impl SubadditivityReport {
    /// Equality occurs exactly when one of the conditions is met.
    pub fn classified_correctly(&self) -> bool {
        self.is_equality == (self.condition != EqualityCondition::None)
    }
}

/// `c(A_[m]) ≤ Σ β(S) c(A_S)`, with the one-dimensional equality classification.
pub fn check_fractional_subadditive_c(
    s: &SetSystem,
    p: &FractionalPartition,
) -> Result<SubadditivityReport> {
    check_dims(s.m(), p)?;
    let lhs = s.subset_index(full(s.m()));
    let mut rhs = Rational::zero();
    let mut all_intervals = true;
    for (e, w) in &p.edges {
        if w.is_zero() {
            continue;
        }
        let sum = s.subset_sum(*e);
        all_intervals &= sum.is_interval();
        rhs += w * schneider_index(&sum);
    }
    let trivial = match translated_partition(s, p) {
        Ok((_, tp)) => tp.is_trivial(),
        // All points: the sum is a point and both sides vanish.
        Err(Error::AllSingletons) => true,
        Err(e) => return Err(e),
    };
    let condition = if trivial {
        EqualityCondition::TrivialTranslated
    } else if all_intervals {
        EqualityCondition::AllIntervals
    } else {
        EqualityCondition::None
    };
    Ok(SubadditivityReport {
        holds: lhs <= rhs,
        is_equality: lhs == rhs,
        lhs,
        rhs,
        condition,
    })
}

/// Drops the single-point sets and pushes the partition onto the survivors.
/// Images of edges that coincide have their weights summed; edges that lose
/// every element are dropped.
pub fn translated_partition(
    s: &SetSystem,
    p: &FractionalPartition,
) -> Result<(SetSystem, FractionalPartition)> {
    check_dims(s.m(), p)?;
    let survivors: Vec<usize> = (0..s.m()).filter(|&i| !s.sets[i].is_point()).collect();
    if survivors.is_empty() {
        return Err(Error::AllSingletons);
    }
    let remap = |e: Subset| -> Subset {
        survivors
            .iter()
            .enumerate()
            .filter(|(_, &old)| e >> old & 1 == 1)
            .fold(0, |acc, (new, _)| acc | 1 << new)
    };
    let edges = merge_edges(
        p.edges
            .iter()
            .map(|(e, w)| (remap(*e), w.clone()))
            .filter(|(e, _)| *e != 0),
    );
    let sets = survivors.iter().map(|&i| s.sets[i].clone()).collect();
    Ok((
        SetSystem::new(sets)?,
        FractionalPartition::new(survivors.len(), edges)?,
    ))
}

/// `Σ β(S) c(A_S)`.
pub fn weighted_index_sum(s: &SetSystem, p: &FractionalPartition) -> Rational {
    p.edges
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .fold(Rational::zero(), |acc, (e, w)| acc + w * s.subset_index(*e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperadditivityReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    pub is_equality: bool,
}

fn superadditivity_report<F: Fn(Subset) -> Rational>(
    m: usize,
    p: &FractionalPartition,
    measure_of: F,
) -> SuperadditivityReport {
    let lhs = measure_of(full(m));
    let rhs = p
        .edges
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .fold(Rational::zero(), |acc, (e, w)| acc + w * measure_of(*e));
    SuperadditivityReport {
        holds: lhs >= rhs,
        is_equality: lhs == rhs,
        lhs,
        rhs,
    }
}

/// `|A_[m]| ≥ Σ β(S) |A_S|` for sets on the line.
pub fn check_fractional_superadditive_measure(
    s: &SetSystem,
    p: &FractionalPartition,
) -> Result<SuperadditivityReport> {
    check_dims(s.m(), p)?;
    Ok(superadditivity_report(s.m(), p, |e| s.subset_sum(e).measure()))
}

/// The same inequality for axis-aligned products, using volumes.
pub fn check_fractional_superadditive_volume(
    ps: &[ProductSet],
    p: &FractionalPartition,
) -> Result<SuperadditivityReport> {
    if ps.is_empty() {
        return Err(Error::EmptyList);
    }
    let n = ps[0].dim();
    if let Some(bad) = ps.iter().find(|q| q.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    check_dims(ps.len(), p)?;
    Ok(superadditivity_report(ps.len(), p, |e| {
        let chosen: Vec<&ProductSet> = members(e).into_iter().map(|i| &ps[i - 1]).collect();
        ProductSet::sum_all(chosen).expect("same dimension").volume()
    }))
}

/// A set function on all subsets of `[m]`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    m: usize,
    values: Vec<Rational>,
}

impl SetFunction {
    /// `values[s]` is the value on subset `s`; needs exactly `2^m` entries and
    /// `values[0] = 0`.
    pub fn new(m: usize, values: Vec<Rational>) -> Result<Self> {
        if m > MAX_SET_FUNCTION_GROUND {
            return Err(Error::GroundSetTooLarge {
                m,
                max: MAX_SET_FUNCTION_GROUND,
            });
        }
        let need = 1usize << m;
        if values.len() < need {
            return Err(Error::MissingSubset(subset_label(values.len() as Subset)));
        }
        if values.len() > need {
            return Err(Error::InvalidPartition(format!(
                "{} values given for {need} subsets",
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::NonZeroEmptyValue);
        }
        Ok(Self { m, values })
    }

    /// Builds from a sparse map; every subset must be present (the empty set
    /// may be omitted and is then 0).
    pub fn from_map(m: usize, map: &BTreeMap<Subset, Rational>) -> Result<Self> {
        if m > MAX_SET_FUNCTION_GROUND {
            return Err(Error::GroundSetTooLarge {
                m,
                max: MAX_SET_FUNCTION_GROUND,
            });
        }
        let mut values = Vec::with_capacity(1 << m);
        for s in 0..(1u32 << m) {
            match map.get(&s) {
                Some(v) => values.push(v.clone()),
                None if s == 0 => values.push(Rational::zero()),
                None => return Err(Error::MissingSubset(subset_label(s))),
            }
        }
        Self::new(m, values)
    }

    /// Tabulates `f` on every nonempty subset.
    pub fn tabulate<F: Fn(Subset) -> Rational + Sync>(m: usize, f: F) -> Result<Self> {
        if m > MAX_SET_FUNCTION_GROUND {
            return Err(Error::GroundSetTooLarge {
                m,
                max: MAX_SET_FUNCTION_GROUND,
            });
        }
        let values = (0..(1u32 << m))
            .into_par_iter()
            .map(|s| if s == 0 { Rational::zero() } else { f(s) })
            .collect();
        Self::new(m, values)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn value(&self, s: Subset) -> &Rational {
        &self.values[s as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modularity {
    /// `f(S ∪ T) + f(S ∩ T) ≥ f(S) + f(T)`.
    Supermodular,
    /// `f(S ∪ T) + f(S ∩ T) ≤ f(S) + f(T)`.
    Submodular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularityReport {
    pub holds: bool,
    /// First failing pair `(S, T)` in `(S, T)` lexicographic mask order.
    pub violation: Option<(Subset, Subset)>,
    /// Every pair met the inequality with equality.
    pub all_equal: bool,
}

pub fn check_modularity(f: &SetFunction, kind: Modularity) -> ModularityReport {
    let n = 1u32 << f.m;
    let per_s: Vec<(Option<Subset>, bool)> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut all_equal = true;
            for t in s..n {
                let lhs = f.value(s | t) + f.value(s & t);
                let rhs = f.value(s) + f.value(t);
                all_equal &= lhs == rhs;
                let ok = match kind {
                    Modularity::Supermodular => lhs >= rhs,
                    Modularity::Submodular => lhs <= rhs,
                };
                if !ok {
                    return (Some(t), false);
                }
            }
            (None, all_equal)
        })
        .collect();
    let violation = per_s
        .iter()
        .enumerate()
        .find_map(|(s, (t, _))| t.map(|t| (s as Subset, t)));
    ModularityReport {
        holds: violation.is_none(),
        all_equal: violation.is_none() && per_s.iter().all(|(_, e)| *e),
        violation,
    }
}

pub fn check_supermodular(f: &SetFunction) -> ModularityReport {
    check_modularity(f, Modularity::Supermodular)
}

pub fn check_submodular(f: &SetFunction) -> ModularityReport {
    check_modularity(f, Modularity::Submodular)
}

/// `S ↦ |A_S|`.
pub fn measure_function(s: &SetSystem) -> Result<SetFunction> {
    SetFunction::tabulate(s.m(), |e| s.subset_sum(e).measure())
}

/// `S ↦ c(A_S)`.
pub fn index_function(s: &SetSystem) -> Result<SetFunction> {
    SetFunction::tabulate(s.m(), |e| s.subset_index(e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongBoundReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// `c(A + B + C) ≤ max(c(A + B), c(B + C))`.
pub fn strong_bound_check(a: &CompactSet1D, b: &CompactSet1D, c: &CompactSet1D) -> StrongBoundReport {
    let ab = a.minkowski_sum(b);
    let lhs = schneider_index(&ab.minkowski_sum(c));
    let rhs = schneider_index(&ab).max(schneider_index(&b.minkowski_sum(c)));
    StrongBoundReport {
        holds: lhs <= rhs,
        lhs,
        rhs,
    }
}

/// Union form `c(A_{S ∪ T}) ≤ max(c(A_S), c(A_T))` for nonempty `S`, `T`.
pub fn union_bound_check(s: &SetSystem, x: Subset, y: Subset) -> Result<StrongBoundReport> {
    let m = full(s.m());
    if x == 0 || y == 0 || x & !m != 0 || y & !m != 0 {
        return Err(Error::InvalidPartition(format!(
            "{} and {} must be nonempty subsets of [{}]",
            subset_label(x),
            subset_label(y),
            s.m()
        )));
    }
    let lhs = s.subset_index(x | y);
    let rhs = s.subset_index(x).max(s.subset_index(y));
    Ok(StrongBoundReport {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}
