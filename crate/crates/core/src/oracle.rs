//! Brute-force sweeps that recompute everything through the set engine:
//! the lower bound over grids of two-interval sets, the closed-form gap
//! candidates, and a random search against the k-sum candidate bound.
//!
//! Grids are rational lattices and results are gathered in grid order, so a
//! report is identical from run to run whatever the thread count.

use std::collections::BTreeMap;
use std::io::Write;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounds::{
    engine_gap, gap_candidates, ksum_candidate_bound, lower_bound_l, make_lr_set,
    positive_assumption, LrSetParams, Side,
};
use crate::error::{Error, Result};
use crate::index::{schneider_index, sum_index};
use crate::rational::{format_rational, int, rat, Rational};
use crate::set_core::{CompactSet1D, Interval};

/// Ordered pair of sides for `(A1, A2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    LL,
    LR,
    RL,
    RR,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::LL, Case::LR, Case::RL, Case::RR];

    pub fn sides(self) -> (Side, Side) {
        match self {
            Case::LL => (Side::Left, Side::Left),
            Case::LR => (Side::Left, Side::Right),
            Case::RL => (Side::Right, Side::Left),
            Case::RR => (Side::Right, Side::Right),
        }
    }
}

fn all_cases() -> Vec<Case> {
    Case::ALL.to_vec()
}

/// Grid densities: `r` runs over `j / D` for `j = 0..=D`, the imbalance over
/// `t / D` of its cap, and the scale over `j / D` for `j = 1..=D` together
/// with `1 / j` for `j = 2..=D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub r1: u32,
    pub r2: u32,
    pub n1: u32,
    pub n2: u32,
    pub m: u32,
    #[serde(default = "all_cases")]
    pub cases: Vec<Case>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub report: Option<String>,
}

impl SweepConfig {
    /// The same density `d` for every parameter, all four cases.
    pub fn uniform(d: u32) -> Self {
        Self {
            r1: d,
            r2: d,
            n1: d,
            n2: d,
            m: d,
            cases: all_cases(),
            seed: 0,
            report: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, d) in [
            ("r1", self.r1),
            ("r2", self.r2),
            ("n1", self.n1),
            ("n2", self.n2),
            ("m", self.m),
        ] {
            if d < 2 {
                return Err(Error::OutOfRange {
                    name,
                    value: d.to_string(),
                    range: "density >= 2",
                });
            }
        }
        if self.cases.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(())
    }
}

/// `0, 1/d, ..., 1`.
pub fn unit_lattice(d: u32) -> Vec<Rational> {
    (0..=d).map(|j| rat(i64::from(j), i64::from(d))).collect()
}

/// Scale values in `(0, 1]`, ascending and without repeats.
pub fn scale_grid(d: u32) -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=d)
        .map(|j| rat(i64::from(j), i64::from(d)))
        .chain((2..=d).map(|j| rat(1, i64::from(j))))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Imbalances `t/d` of the cap; an unbounded cap (an R-set with `r = 1`,
/// which is an interval for every `n`) is replaced by 2.
fn imbalance_grid(r: &Rational, side: Side, d: u32) -> Vec<Rational> {
    let cap = LrSetParams::imbalance_cap(r, side).unwrap_or_else(|| int(2));
    if cap.is_zero() {
        return vec![Rational::zero()];
    }
    unit_lattice(d).into_iter().map(|t| t * &cap).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub case: Case,
    pub first: LrSetParams,
    pub second: LrSetParams,
    pub m: Rational,
}

impl Cell {
    fn params_json(&self) -> serde_json::Value {
        json!({
            "case": self.case,
            "r1": format_rational(self.first.r()),
            "n1": format_rational(self.first.n()),
            "r2": format_rational(self.second.r()),
            "n2": format_rational(self.second.n()),
            "m": format_rational(&self.m),
        })
    }
}

/// Every cell of the grid, in a fixed order.
pub fn grid_cells(cfg: &SweepConfig) -> Result<Vec<Cell>> {
    cfg.validate()?;
    let mut cases = cfg.cases.clone();
    cases.sort();
    cases.dedup();
    let ms = scale_grid(cfg.m);
    let mut out = Vec::new();
    for case in cases {
        let (s1, s2) = case.sides();
        for r1 in unit_lattice(cfg.r1) {
            for n1 in imbalance_grid(&r1, s1, cfg.n1) {
                let first = LrSetParams::new(r1.clone(), n1, s1)?;
                for r2 in unit_lattice(cfg.r2) {
                    for n2 in imbalance_grid(&r2, s2, cfg.n2) {
                        let second = LrSetParams::new(r2.clone(), n2, s2)?;
                        for m in &ms {
                            out.push(Cell {
                                case,
                                first: first.clone(),
                                second: second.clone(),
                                m: m.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRecord {
    pub cell: Cell,
    pub c1: Rational,
    pub c2: Rational,
    pub engine_value: Rational,
    pub bound: Rational,
    /// `engine_value - bound`; negative would refute the bound.
    pub slack: Rational,
}

impl CellRecord {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "params": self.cell.params_json(),
            "c1": format_rational(&self.c1),
            "c2": format_rational(&self.c2),
            "engine_value": format_rational(&self.engine_value),
            "bound": format_rational(&self.bound),
            "slack": format_rational(&self.slack),
        })
    }
}

/// Smallest observed index of a sum for one pair of component indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMinimum {
    pub c1: Rational,
    pub c2: Rational,
    pub observed_min: Rational,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<CellRecord>,
    pub violations: usize,
    pub worst_slack: Rational,
    pub equality_cells: usize,
    /// Keyed by `(c1, c2)`, ascending.
    pub minima: Vec<PairMinimum>,
}

impl SweepReport {
    pub fn summary_json(&self) -> serde_json::Value {
        let equal_pairs: Vec<serde_json::Value> = self
            .minima
            .iter()
            .filter(|p| p.observed_min == p.bound)
            .map(|p| json!([format_rational(&p.c1), format_rational(&p.c2)]))
            .collect();
        json!({
            "summary": true,
            "config": self.config,
            "cells": self.records.len(),
            "violations": self.violations,
            "worst_slack": format_rational(&self.worst_slack),
            "equality_cells": self.equality_cells,
            "pairs": self.minima.len(),
            "pairs_attaining_bound": equal_pairs,
        })
    }

    /// One JSON object per cell, then the summary.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            writeln!(w, "{}", r.to_json())?;
        }
        writeln!(w, "{}", self.summary_json())
    }

    pub fn minimum_for(&self, c1: &Rational, c2: &Rational) -> Option<&PairMinimum> {
        self.minima.iter().find(|p| p.c1 == *c1 && p.c2 == *c2)
    }
}

/// Checks `c(A1 + m A2) ≥ L(c(A1), c(A2))` on every grid cell.
pub fn verify_lower_bound_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let cells = grid_cells(cfg)?;
    let records: Vec<CellRecord> = cells
        .into_par_iter()
        .map(|cell| {
            let a1 = make_lr_set(&cell.first);
            let a2 = make_lr_set(&cell.second)
                .scale(&cell.m)
                .expect("grid scales are positive");
            let (c1, c2) = (cell.first.index(), cell.second.index());
            debug_assert_eq!(schneider_index(&a1), c1);
            let engine_value = sum_index(&[a1, a2]).expect("two summands");
            let bound = lower_bound_l(&c1, &c2).expect("indices lie in [0, 1]");
            let slack = &engine_value - &bound;
            CellRecord {
                cell,
                c1,
                c2,
                engine_value,
                bound,
                slack,
            }
        })
        .collect();

    let zero = Rational::zero();
    let violations = records.iter().filter(|r| r.slack < zero).count();
    let equality_cells = records.iter().filter(|r| r.slack.is_zero()).count();
    let worst_slack = records
        .iter()
        .map(|r| r.slack.clone())
        .min()
        .unwrap_or_else(Rational::zero);
    let mut minima: BTreeMap<(Rational, Rational), PairMinimum> = BTreeMap::new();
    for r in &records {
        minima
            .entry((r.c1.clone(), r.c2.clone()))
            .and_modify(|p| {
                if r.engine_value < p.observed_min {
                    p.observed_min = r.engine_value.clone();
                }
            })
            .or_insert_with(|| PairMinimum {
                c1: r.c1.clone(),
                c2: r.c2.clone(),
                observed_min: r.engine_value.clone(),
                bound: r.bound.clone(),
            });
    }
    Ok(SweepReport {
        config: cfg.clone(),
        records,
        violations,
        worst_slack,
        equality_cells,
        minima: minima.into_values().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMismatch {
    pub cell: Cell,
    pub predicted: Rational,
    pub engine: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapClaimReport {
    pub checked: usize,
    /// Cells outside the regime `min(1 - r_i - 2 r_j) > 0`.
    pub skipped: usize,
    pub mismatches: Vec<GapMismatch>,
}

impl GapClaimReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mism: Vec<serde_json::Value> = self
            .mismatches
            .iter()
            .map(|g| {
                json!({
                    "params": g.cell.params_json(),
                    "predicted": format_rational(&g.predicted),
                    "engine": format_rational(&g.engine),
                })
            })
            .collect();
        json!({
            "checked": self.checked,
            "skipped": self.skipped,
            "mismatches": mism,
        })
    }
}

/// Compares the closed-form largest gap of `A1 + m A2` with the engine on
/// every grid cell where the formulas apply.
pub fn verify_gap_claims(cfg: &SweepConfig) -> Result<GapClaimReport> {
    let cells = grid_cells(cfg)?;
    let outcomes: Vec<Option<Option<GapMismatch>>> = cells
        .into_par_iter()
        .map(|cell| {
            let applies = positive_assumption(&cell.first.index(), &cell.second.index())
                .expect("indices lie in [0, 1]");
            if !applies {
                return None;
            }
            let predicted = gap_candidates(&cell.first, &cell.second, &cell.m)
                .expect("grid scales lie in (0, 1]")
                .predicted;
            let engine = engine_gap(&cell.first, &cell.second, &cell.m).expect("positive scale");
            Some((predicted != engine).then_some(GapMismatch {
                cell,
                predicted,
                engine,
            }))
        })
        .collect();
    let skipped = outcomes.iter().filter(|o| o.is_none()).count();
    let checked = outcomes.len() - skipped;
    let mismatches = outcomes.into_iter().flatten().flatten().collect();
    Ok(GapClaimReport {
        checked,
        skipped,
        mismatches,
    })
}

/// Shape of random sets: endpoints are multiples of `1 / denominator` in
/// `[0, span]`, up to `max_intervals` pieces, each degenerate with
/// probability `point_chance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSetParams {
    pub max_intervals: usize,
    pub denominator: u32,
    pub span: u32,
    pub point_chance: f64,
}

impl Default for RandomSetParams {
    fn default() -> Self {
        Self {
            max_intervals: 4,
            denominator: 4,
            span: 6,
            point_chance: 0.3,
        }
    }
}

pub fn random_set<R: Rng + ?Sized>(rng: &mut R, p: &RandomSetParams) -> CompactSet1D {
    let count = rng.gen_range(1..=p.max_intervals.max(1));
    let top = i64::from(p.span) * i64::from(p.denominator);
    let den = i64::from(p.denominator);
    let raw = (0..count)
        .map(|_| {
            let lo = rng.gen_range(0..=top);
            let len = if rng.gen_bool(p.point_chance) {
                0
            } else {
                rng.gen_range(1..=(top / 2).max(1))
            };
            let hi = (lo + len).min(top);
            Interval::new(rat(lo, den), rat(hi, den)).expect("lo <= hi")
        })
        .collect();
    CompactSet1D::normalize(raw).expect("count >= 1")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsumSample {
    pub sets: Vec<CompactSet1D>,
    pub indices: Vec<Rational>,
    pub engine_value: Rational,
    pub bound: Rational,
}

impl KsumSample {
    pub fn slack(&self) -> Rational {
        &self.engine_value - &self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsumSearchReport {
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub min_slack: Rational,
    /// The sample with the smallest slack.
    pub tightest: Option<KsumSample>,
    /// Samples whose sum index is strictly below the candidate.
    pub below: Vec<KsumSample>,
}

impl KsumSearchReport {
    pub fn to_json(&self) -> serde_json::Value {
        let sample = |s: &KsumSample| {
            json!({
                "sets": s.sets.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "indices": s.indices.iter().map(format_rational).collect::<Vec<_>>(),
                "engine_value": format_rational(&s.engine_value),
                "bound": format_rational(&s.bound),
            })
        };
        json!({
            "k": self.k,
            "samples": self.samples,
            "seed": self.seed,
            "min_slack": format_rational(&self.min_slack),
            "tightest": self.tightest.as_ref().map(sample),
            "below": self.below.iter().map(sample).collect::<Vec<_>>(),
        })
    }
}

pub fn evaluate_ksum(sets: Vec<CompactSet1D>) -> Result<KsumSample> {
    let indices: Vec<Rational> = sets.iter().map(schneider_index).collect();
    let bound = ksum_candidate_bound(&indices)?;
    let engine_value = sum_index(&sets)?;
    Ok(KsumSample {
        sets,
        indices,
        engine_value,
        bound,
    })
}

/// Random `k`-tuples compared against the k-sum candidate bound. Sample `i`
/// draws from its own stream seeded by `(seed, i)`, so results do not depend
/// on scheduling.
pub fn search_ksum_counterexample(k: usize, samples: usize, seed: u64) -> Result<KsumSearchReport> {
    if k < 3 {
        return Err(Error::KTooSmall { k, min: 3 });
    }
    if k > 5 {
        return Err(Error::KTooLarge { k, max: 5 });
    }
    let params = RandomSetParams::default();
    let evaluated: Vec<KsumSample> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let sets = (0..k).map(|_| random_set(&mut rng, &params)).collect();
            evaluate_ksum(sets).expect("k within range")
        })
        .collect();
    let zero = Rational::zero();
    let tightest = evaluated
        .iter()
        .min_by(|a, b| a.slack().cmp(&b.slack()))
        .cloned();
    let min_slack = tightest.as_ref().map(KsumSample::slack).unwrap_or(Rational::one());
    let below = evaluated.into_iter().filter(|s| s.slack() < zero).collect();
    Ok(KsumSearchReport {
        k,
        samples,
        seed,
        min_slack,
        tightest,
        below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::ksum_candidate_witness;

    #[test]
    fn grids() {
        assert_eq!(unit_lattice(2), vec![int(0), rat(1, 2), int(1)]);
        assert_eq!(scale_grid(3), vec![rat(1, 3), rat(1, 2), rat(2, 3), int(1)]);
        assert_eq!(imbalance_grid(&int(0), Side::Left, 4), vec![int(0)]);
        assert_eq!(imbalance_grid(&int(1), Side::Right, 2), vec![int(0), int(1), int(2)]);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::uniform(2).validate().is_ok());
        assert!(SweepConfig::uniform(1).validate().is_err());
        let mut c = SweepConfig::uniform(3);
        c.cases.clear();
        assert_eq!(c.validate(), Err(Error::EmptyList));
        let parsed: SweepConfig =
            serde_json::from_str(r#"{"r1":2,"r2":2,"n1":2,"n2":2,"m":2,"cases":["LR"]}"#).unwrap();
        assert_eq!(parsed.cases, vec![Case::LR]);
        assert!(serde_json::from_str::<SweepConfig>(r#"{"r1":2}"#).is_err());
    }

    #[test]
    fn small_sweep_has_no_violations() {
        let rep = verify_lower_bound_sweep(&SweepConfig::uniform(3)).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.worst_slack >= int(0));
        assert!(rep.equality_cells > 0);
        let p = rep.minimum_for(&int(1), &int(1)).unwrap();
        assert_eq!((p.observed_min.clone(), p.bound.clone()), (rat(1, 3), rat(1, 3)));
        let p = rep.minimum_for(&int(0), &rat(1, 2)).unwrap();
        assert_eq!(p.bound, int(0));
    }

    #[test]
    fn sweep_jsonl_shape() {
        let mut cfg = SweepConfig::uniform(2);
        cfg.cases = vec![Case::LL];
        let rep = verify_lower_bound_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        rep.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), rep.records.len() + 1);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        for key in ["params", "engine_value", "bound", "slack"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        let last: serde_json::Value = serde_json::from_str(lines[lines.len() - 1]).unwrap();
        assert_eq!(last["summary"], true);
        assert_eq!(last["violations"], 0);
    }

    #[test]
    fn sweep_is_deterministic() {
        let cfg = SweepConfig::uniform(2);
        assert_eq!(
            verify_lower_bound_sweep(&cfg).unwrap(),
            verify_lower_bound_sweep(&cfg).unwrap()
        );
    }

    #[test]
    fn gap_claims_small_grid() {
        for case in Case::ALL {
            let mut cfg = SweepConfig::uniform(3);
            cfg.cases = vec![case];
            let rep = verify_gap_claims(&cfg).unwrap();
            assert!(rep.mismatches.is_empty(), "{case:?}: {:?}", rep.mismatches.first());
            assert!(rep.checked > 0 && rep.skipped > 0);
        }
    }

    #[test]
    fn ksum_search_runs() {
        let rep = search_ksum_counterexample(3, 50, 7).unwrap();
        assert_eq!(rep.samples, 50);
        assert_eq!(rep, search_ksum_counterexample(3, 50, 7).unwrap());
        assert!(search_ksum_counterexample(2, 1, 0).is_err());
        assert!(search_ksum_counterexample(6, 1, 0).is_err());
    }

    #[test]
    fn ksum_special_tuples() {
        let ivs = vec![CompactSet1D::interval(int(0), int(1)).unwrap(); 3];
        let s = evaluate_ksum(ivs).unwrap();
        assert_eq!((s.slack(), s.bound), (int(0), int(0)));

        let c = [rat(1, 2), rat(1, 3), int(1)];
        let s = evaluate_ksum(ksum_candidate_witness(&c).unwrap()).unwrap();
        assert_eq!(s.indices, c.to_vec());
        assert_eq!(s.slack(), int(0));
    }

    #[test]
    fn random_sets_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = RandomSetParams::default();
        for _ in 0..200 {
            let a = random_set(&mut rng, &p);
            assert!(*a.min() >= int(0) && *a.max() <= int(6));
            assert!(a.intervals().len() <= 4);
        }
    }
}
