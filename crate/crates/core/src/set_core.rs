//! Nonempty compact subsets of the real line, stored as finite unions of
//! closed intervals with rational endpoints.
//!
//! A [`CompactSet1D`] is always normalized: its intervals are sorted and
//! pairwise separated by a gap of positive length. Intervals that overlap or
//! touch at a point are merged on construction, so structural equality is
//! point-set equality.
//!
//! The empty set is not representable. Its convexity index would be 0 by
//! convention, but nothing downstream ever needs it.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Closed interval `[lo, hi]`; `lo == hi` is a single point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(String, String)", into = "(String, String)")]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }
}

impl TryFrom<(String, String)> for Interval {
    type Error = Error;

    fn try_from((lo, hi): (String, String)) -> Result<Self> {
        use crate::rational::parse_rational;
        Interval::new(parse_rational(&lo)?, parse_rational(&hi)?)
    }
}

impl From<Interval> for (String, String) {
    fn from(i: Interval) -> Self {
        (format_rational(&i.lo), format_rational(&i.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Normalized finite union of disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompactSet1D {
    intervals: Vec<Interval>,
}

impl CompactSet1D {
    /// Sorts and merges `raw` into normal form.
    pub fn normalize(raw: Vec<Interval>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self::merge(raw))
    }

    /// Like [`normalize`](Self::normalize) but checks `lo <= hi` on raw pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let raw = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Self::normalize(raw)
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(Self {
            intervals: vec![Interval::new(lo, hi)?],
        })
    }

    pub fn point(x: Rational) -> Self {
        Self {
            intervals: vec![Interval::point(x)],
        }
    }

    /// Finite point set.
    pub fn points<I: IntoIterator<Item = Rational>>(pts: I) -> Result<Self> {
        Self::normalize(pts.into_iter().map(Interval::point).collect())
    }

    // Sort by left endpoint, then sweep, merging anything that overlaps or
    // touches the running interval.
    fn merge(mut raw: Vec<Interval>) -> Self {
        raw.sort_unstable_by(|a, b| a.lo.cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn min(&self) -> &Rational {
        &self.intervals[0].lo
    }

    pub fn max(&self) -> &Rational {
        &self.intervals[self.intervals.len() - 1].hi
    }

    pub fn convex_hull(&self) -> Interval {
        Interval {
            lo: self.min().clone(),
            hi: self.max().clone(),
        }
    }

    /// Length of the convex hull.
    pub fn diam(&self) -> Rational {
        self.max() - self.min()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    pub fn is_interval(&self) -> bool {
        self.intervals.len() == 1
    }

    pub fn is_point(&self) -> bool {
        self.is_interval() && self.intervals[0].is_point()
    }

    /// Lengths of the gaps between consecutive intervals, left to right.
    pub fn gaps(&self) -> impl Iterator<Item = Rational> + '_ {
        self.intervals.windows(2).map(|w| &w[1].lo - &w[0].hi)
    }

    /// `{x + y : x in self, y in other}`.
    pub fn minkowski_sum(&self, other: &CompactSet1D) -> CompactSet1D {
        let mut raw = Vec::with_capacity(self.intervals.len() * other.intervals.len());
        for a in &self.intervals {
            for b in &other.intervals {
                raw.push(a.add(b));
            }
        }
        Self::merge(raw)
    }

    /// Minkowski sum of every set in `sets`.
    pub fn sum_all<'a, I>(sets: I) -> Result<CompactSet1D>
    where
        I: IntoIterator<Item = &'a CompactSet1D>,
    {
        let mut it = sets.into_iter();
        let first = it.next().ok_or(Error::EmptyList)?.clone();
        Ok(it.fold(first, |acc, s| acc.minkowski_sum(s)))
    }

    /// Homothety `{m x : x in self}` for `m > 0`.
    pub fn scale(&self, m: &Rational) -> Result<CompactSet1D> {
        if !m.is_positive() {
            return Err(Error::NonPositiveScale(format_rational(m)));
        }
        Ok(Self {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    lo: &iv.lo * m,
                    hi: &iv.hi * m,
                })
                .collect(),
        })
    }

    pub fn translate(&self, t: &Rational) -> CompactSet1D {
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    lo: &iv.lo + t,
                    hi: &iv.hi + t,
                })
                .collect(),
        }
    }

    /// Point-set containment `other ⊆ self`.
    pub fn contains(&self, other: &CompactSet1D) -> bool {
        // Each interval of `other` is connected, so it must sit inside a
        // single interval of `self`. Both lists are sorted: two pointers.
        let mut i = 0;
        for b in &other.intervals {
            while i < self.intervals.len() && self.intervals[i].hi < b.lo {
                i += 1;
            }
            match self.intervals.get(i) {
                Some(a) if a.lo <= b.lo && b.hi <= a.hi => {}
                _ => return false,
            }
        }
        true
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|iv| &iv.hi < x);
        self.intervals
            .get(idx)
            .is_some_and(|iv| iv.contains_point(x))
    }

    /// Point-set equality. Normal forms are unique, so this is `==`.
    pub fn equals(&self, other: &CompactSet1D) -> bool {
        self == other
    }
}

impl fmt::Display for CompactSet1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            if iv.is_point() {
                write!(f, "{{{}}}", iv.lo)?;
            } else {
                write!(f, "{iv}")?;
            }
        }
        Ok(())
    }
}
