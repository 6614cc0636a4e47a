//! Finite-depth approximations of `C(N, k)`, the numbers in `[0, 1]` whose
//! base-`N` digits all lie in `{0, ..., k}`.
//!
//! At depth `d` the cover is the union of `(k+1)^d` intervals of length
//! `N^{-d}`, one per digit string, and the endpoint set is their left ends.
//! Endpoints are handled as integers scaled by `N^d` until the very end.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{pow, rat, Rational};
use crate::set_core::{CompactSet1D, Interval};

/// Upper bound on `(k+1)^depth`, the number of intervals in a cover.
pub const MAX_PIECES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FractalSpec {
    n: u32,
    k: u32,
    depth: u32,
}

impl FractalSpec {
    pub fn new(n: u32, k: u32, depth: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadSpec(format!("N = {n} must be at least 3")));
        }
        if k > n - 1 {
            return Err(Error::BadSpec(format!("k = {k} must be at most N - 1 = {}", n - 1)));
        }
        if depth < 1 {
            return Err(Error::BadSpec("depth must be at least 1".into()));
        }
        let pieces = u64::from(k + 1).checked_pow(depth);
        if pieces.is_none_or(|p| p > MAX_PIECES) {
            return Err(Error::BadSpec(format!(
                "(k+1)^depth = {}^{depth} exceeds {MAX_PIECES} intervals",
                k + 1
            )));
        }
        if u128::from(n).checked_pow(depth).is_none() {
            return Err(Error::BadSpec(format!("N^depth = {n}^{depth} is too large")));
        }
        Ok(Self { n, k, depth })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `N^depth`, the common denominator of every endpoint.
    pub fn scale(&self) -> u128 {
        u128::from(self.n).pow(self.depth)
    }

    /// Interval length `N^{-depth}`.
    pub fn cell(&self) -> Rational {
        rat(1, 1) / Rational::from_integer(BigInt::from(self.scale()))
    }
}

/// Numerators `Σ x_j N^{depth-j}` over all digit strings, ascending.
///
/// Lexicographic digit order is numeric order because every digit is below
/// `N`, so the output comes out sorted and distinct.
pub fn endpoint_numerators(s: &FractalSpec) -> Vec<u128> {
    let n = u128::from(s.n);
    let mut cur = vec![0u128];
    for _ in 0..s.depth {
        cur = cur
            .par_iter()
            .flat_map_iter(|&e| (0..=u128::from(s.k)).map(move |x| e * n + x))
            .collect();
    }
    cur
}

fn to_rational(num: u128, den: u128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Union of `[e, e + width]` over sorted integer `starts`, divided by `den`.
pub(crate) fn integer_union(starts: &[u128], width: u128, den: u128) -> CompactSet1D {
    let mut merged: Vec<(u128, u128)> = Vec::new();
    for &e in starts {
        match merged.last_mut() {
            Some(last) if e <= last.1 => last.1 = last.1.max(e + width),
            _ => merged.push((e, e + width)),
        }
    }
    let raw = merged
        .into_iter()
        .map(|(lo, hi)| Interval::new(to_rational(lo, den), to_rational(hi, den)))
        .collect::<Result<Vec<_>>>()
        .expect("lo <= hi by construction");
    CompactSet1D::normalize(raw).expect("at least one digit string")
}

/// `C_depth`: the depth-`d` cover, a superset of `C(N, k)`.
pub fn fractal_cover(s: &FractalSpec) -> CompactSet1D {
    integer_union(&endpoint_numerators(s), 1, s.scale())
}

/// Left endpoints of the cover, a finite subset of `C(N, k)`.
pub fn fractal_endpoints(s: &FractalSpec) -> CompactSet1D {
    integer_union(&endpoint_numerators(s), 0, s.scale())
}

/// `((k+1)/N)^depth`, the measure of the cover when `k < N - 1`.
pub fn fractal_measure(s: &FractalSpec) -> Rational {
    if s.k == s.n - 1 {
        return Rational::one();
    }
    pow(&rat(i64::from(s.k) + 1, i64::from(s.n)), s.depth)
}

/// `diam C(N, k) = k / (N - 1)`.
pub fn fractal_diameter_limit(n: u32, k: u32) -> Result<Rational> {
    FractalSpec::new(n, k, 1)?;
    Ok(rat(i64::from(k), i64::from(n) - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractalDiameter {
    pub limit: Rational,
    /// `k(1 - N^{-d}) / (N - 1) + N^{-d}`.
    pub at_depth: Rational,
}

pub fn fractal_diameter(s: &FractalSpec) -> FractalDiameter {
    let limit = rat(i64::from(s.k), i64::from(s.n) - 1);
    let cell = s.cell();
    let at_depth = &limit * (Rational::one() - &cell) + &cell;
    FractalDiameter { limit, at_depth }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractalSumReport {
    /// Endpoints of `C(N,k) + C(N,l)` equal those of `C(N,k+l)`.
    pub endpoints_equal: bool,
    /// `cover(k) + cover(l) ⊇ cover(k+l)`.
    pub cover_contains: bool,
}

impl FractalSumReport {
    pub fn holds(&self) -> bool {
        self.endpoints_equal && self.cover_contains
    }
}

/// Checks `C(N,k) + C(N,l) = C(N,k+l)` at finite depth.
pub fn fractal_sum_check(n: u32, k: u32, l: u32, depth: u32) -> Result<FractalSumReport> {
    if n >= 1 && k + l > n - 1 {
        return Err(Error::DigitOverflow {
            sum: (k + l) as usize,
            max: n.saturating_sub(1) as usize,
        });
    }
    let (sk, sl, skl) = (
        FractalSpec::new(n, k, depth)?,
        FractalSpec::new(n, l, depth)?,
        FractalSpec::new(n, k + l, depth)?,
    );
    let endpoint_sum = fractal_endpoints(&sk).minkowski_sum(&fractal_endpoints(&sl));
    let cover_sum = fractal_cover(&sk).minkowski_sum(&fractal_cover(&sl));
    Ok(FractalSumReport {
        endpoints_equal: endpoint_sum == fractal_endpoints(&skl),
        cover_contains: cover_sum.contains(&fractal_cover(&skl)),
    })
}

/// Number of endpoints, `(k+1)^depth`.
pub fn piece_count(s: &FractalSpec) -> u64 {
    u64::from(s.k + 1).pow(s.depth)
}

/// `true` when the cover is the single interval `[0, 1]`.
pub fn cover_is_unit_interval(s: &FractalSpec) -> bool {
    let c = fractal_cover(s);
    c.is_interval() && c.min().is_zero() && *c.max() == Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::largest_gap;
    use crate::rational::int;

    fn spec(n: u32, k: u32, d: u32) -> FractalSpec {
        FractalSpec::new(n, k, d).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(FractalSpec::new(2, 1, 1), Err(Error::BadSpec(_))));
        assert!(matches!(FractalSpec::new(3, 3, 1), Err(Error::BadSpec(_))));
        assert!(matches!(FractalSpec::new(3, 1, 0), Err(Error::BadSpec(_))));
        assert!(matches!(FractalSpec::new(3, 1, 20), Err(Error::BadSpec(_))));
        assert!(FractalSpec::new(3, 1, 19).is_ok());
        assert!(FractalSpec::new(3, 0, 70).is_ok());
        assert!(matches!(FractalSpec::new(3, 0, 90), Err(Error::BadSpec(_))));
    }

    #[test]
    fn cover_examples() {
        // The first k+1 of N subintervals are kept: digits 0 and 1 of 3.
        assert_eq!(
            fractal_cover(&spec(3, 1, 1)),
            CompactSet1D::interval(int(0), rat(2, 3)).unwrap()
        );
        assert_eq!(
            fractal_cover(&spec(4, 1, 1)),
            CompactSet1D::from_pairs([(int(0), rat(1, 2))]).unwrap()
        );
        assert_eq!(
            fractal_cover(&spec(5, 1, 1)),
            CompactSet1D::interval(int(0), rat(2, 5)).unwrap()
        );
        for d in 1..=5 {
            assert!(cover_is_unit_interval(&spec(3, 2, d)));
        }
        let c = fractal_cover(&spec(5, 1, 2));
        assert_eq!(c.intervals().len(), 2);
        assert_eq!(c.measure(), rat(4, 25));
    }

    #[test]
    fn endpoint_examples() {
        assert_eq!(
            fractal_endpoints(&spec(3, 1, 2)),
            CompactSet1D::points([int(0), rat(1, 9), rat(1, 3), rat(4, 9)]).unwrap()
        );
        assert_eq!(fractal_endpoints(&spec(3, 0, 4)), CompactSet1D::point(int(0)));
        assert_eq!(
            fractal_endpoints(&spec(7, 3, 1)),
            CompactSet1D::points((0..=3).map(|j| rat(j, 7))).unwrap()
        );
        assert_eq!(endpoint_numerators(&spec(5, 2, 3)).len() as u64, piece_count(&spec(5, 2, 3)));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(fractal_measure(&spec(3, 1, 4)), rat(16, 81));
        assert_eq!(fractal_measure(&spec(3, 2, 7)), int(1));
        assert_eq!(fractal_measure(&spec(5, 0, 3)), rat(1, 125));
        assert_eq!(fractal_cover(&spec(5, 0, 3)).measure(), rat(1, 125));
        assert_eq!(fractal_cover(&spec(7, 2, 3)).measure(), fractal_measure(&spec(7, 2, 3)));
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(fractal_diameter_limit(3, 1).unwrap(), rat(1, 2));
        assert_eq!(fractal_diameter_limit(3, 2).unwrap(), int(1));
        assert_eq!(fractal_diameter_limit(4, 1).unwrap(), rat(1, 3));
        assert!(fractal_diameter_limit(2, 1).is_err());
        for (n, k, d) in [(3, 1, 3), (4, 1, 5), (6, 4, 2), (5, 0, 2)] {
            let s = spec(n, k, d);
            assert_eq!(fractal_diameter(&s).at_depth, fractal_cover(&s).diam());
        }
    }

    #[test]
    fn sum_examples() {
        assert!(fractal_sum_check(3, 1, 1, 5).unwrap().holds());
        assert!(fractal_sum_check(5, 1, 2, 3).unwrap().holds());
        assert_eq!(
            fractal_sum_check(3, 1, 2, 2),
            Err(Error::DigitOverflow { sum: 3, max: 2 })
        );
    }

    #[test]
    fn complementary_covers_fill_an_interval() {
        for (n, k) in [(4, 1), (5, 2), (7, 3)] {
            for d in 1..=3 {
                let a = fractal_cover(&spec(n, k, d));
                let b = fractal_cover(&spec(n, n - 1 - k, d));
                let s = a.minkowski_sum(&b);
                let cell = spec(n, k, d).cell();
                assert_eq!(s, CompactSet1D::interval(int(0), int(1) + cell).unwrap());
                assert!(largest_gap(&s).is_zero());
            }
        }
    }
}
