//! Regions of achievable value vectors: the index region for two sets on the
//! line, the measure region for two sets in `ℝⁿ`, and the fractal
//! construction showing that the three-set measure region is not closed.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::bounds::{lower_bound_l, r_of_c, upper_bound_m};
use crate::error::{Error, Result};
use crate::fractal::{fractal_cover, fractal_diameter, fractal_measure, FractalSpec};
use crate::partitions::{full, members, subset_of, Subset};
use crate::rational::{format_rational, int, parse_rational, pow, Rational};
use crate::set_core::CompactSet1D;

/// Values on the nonempty subsets of `[m]`; the empty set is implicitly 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPoint {
    m: usize,
    values: BTreeMap<Subset, Rational>,
}

/// Nonempty subsets of `[m]` by size, then lexicographically by members:
/// `{1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}` for `m = 3`.
pub fn subset_order(m: usize) -> Vec<Subset> {
    let mut all: Vec<Subset> = (1..=full(m)).collect();
    all.sort_by_key(|&s| (s.count_ones(), members(s)));
    all
}

fn subset_key(s: Subset) -> String {
    let parts: Vec<String> = members(s).iter().map(ToString::to_string).collect();
    parts.join(",")
}

impl RegionPoint {
    /// Every nonempty subset of `[m]` needs a non-negative value.
    pub fn new(m: usize, values: BTreeMap<Subset, Rational>) -> Result<Self> {
        if m == 0 || m > 10 {
            return Err(Error::GroundSetTooLarge { m, max: 10 });
        }
        for s in subset_order(m) {
            match values.get(&s) {
                None => return Err(Error::MissingSubset(subset_key(s))),
                Some(v) if v.is_negative() => return Err(Error::NegativeInput),
                Some(_) => {}
            }
        }
        if values.keys().any(|&s| s == 0 || s & !full(m) != 0) {
            return Err(Error::InvalidPartition("value on a subset outside [m]".into()));
        }
        Ok(Self { m, values })
    }

    /// Builds from values listed in [`subset_order`].
    pub fn from_vector(m: usize, v: &[Rational]) -> Result<Self> {
        let order = subset_order(m);
        if v.len() != order.len() {
            return Err(Error::DimensionMismatch {
                expected: order.len(),
                found: v.len(),
            });
        }
        Self::new(m, order.into_iter().zip(v.iter().cloned()).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn value(&self, s: Subset) -> Rational {
        if s == 0 {
            return Rational::zero();
        }
        self.values.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(v(∅), v(S_1), ..., v([m]))` in [`subset_order`], empty set first.
    pub fn vector(&self) -> Vec<Rational> {
        std::iter::once(Rational::zero())
            .chain(subset_order(self.m).into_iter().map(|s| self.value(s)))
            .collect()
    }

    /// `{"1": "0", "2": "0", "1,2": "1/3"}` in [`subset_order`].
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for s in subset_order(self.m) {
            map.insert(subset_key(s), Value::String(format_rational(&self.value(s))));
        }
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::MissingSubset("expected a JSON object".into()))?;
        let mut values = BTreeMap::new();
        let mut m = 0;
        for (k, val) in obj {
            let elems = k
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::MissingSubset(format!("bad subset key {k:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let s = subset_of(&elems)?;
            m = m.max(elems.iter().copied().max().unwrap_or(0));
            let text = val
                .as_str()
                .ok_or_else(|| Error::ParseRational(val.to_string()))?;
            values.insert(s, parse_rational(text)?);
        }
        Self::new(m, values)
    }
}

impl std::fmt::Display for RegionPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.vector().iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Which part of the two-set index region contains a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum S12Piece {
    /// `c12 ∈ [L(c1, c2), max(c1, c2))`.
    Both,
    /// `c2 = 0` and `c12 = c1`: the second set is convex.
    FirstOnly,
    /// `c1 = 0` and `c12 = c2`: the first set is convex.
    SecondOnly,
    /// `c1 = c2 = c12 = 0`.
    Zero,
}

impl std::fmt::Display for S12Piece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            S12Piece::Both => "{1,2}",
            S12Piece::FirstOnly => "{1}",
            S12Piece::SecondOnly => "{2}",
            S12Piece::Zero => "empty",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S12Membership {
    pub member: bool,
    pub piece: Option<S12Piece>,
    /// `[L, M)` for the given `(c1, c2)` when both lie in `[0, 1]`.
    pub window: Option<(Rational, Rational)>,
}

/// Is `(c1, c2, c12)` the index triple of some pair of compact sets on the
/// line?
pub fn schneider_membership_s12(c1: &Rational, c2: &Rational, c12: &Rational) -> Result<S12Membership> {
    if c1.is_negative() || c2.is_negative() || c12.is_negative() {
        return Err(Error::NegativeInput);
    }
    let one = Rational::one();
    if *c1 > one || *c2 > one {
        return Ok(S12Membership {
            member: false,
            piece: None,
            window: None,
        });
    }
    let l = lower_bound_l(c1, c2)?;
    let m = upper_bound_m(c1, c2)?;
    // (0, 0, 0) also satisfies the singleton clauses; it gets its own label.
    let piece = if c1.is_zero() && c2.is_zero() && c12.is_zero() {
        Some(S12Piece::Zero)
    } else if l <= *c12 && *c12 < m {
        Some(S12Piece::Both)
    } else if c2.is_zero() && c12 == c1 {
        Some(S12Piece::FirstOnly)
    } else if c1.is_zero() && c12 == c2 {
        Some(S12Piece::SecondOnly)
    } else {
        None
    };
    Ok(S12Membership {
        member: piece.is_some(),
        piece,
        window: Some((l, m)),
    })
}

fn balanced(r: &Rational, scale: &Rational) -> CompactSet1D {
    CompactSet1D::from_pairs([
        (Rational::zero(), r * scale),
        (scale.clone(), scale * (Rational::one() + r)),
    ])
    .expect("r >= 0, scale > 0")
}

/// Scale `m ≥ 2` with `c(B(r_first) + m B(r_second)) = c12`, where `B(r)` is
/// the balanced set `[0, r] ∪ [1, 1 + r]`. Needs `c12 < c(B(r_second))`.
pub fn s12_scale(r_first: &Rational, r_second: &Rational, c12: &Rational) -> Rational {
    let one = Rational::one();
    (&one + r_first) * (&one + c12) / ((&one - r_second) - c12 * (&one + r_second))
}

/// A pair with index triple exactly `(c1, c2, c12)`.
pub fn schneider_witness_s12(
    c1: &Rational,
    c2: &Rational,
    c12: &Rational,
) -> Result<(CompactSet1D, CompactSet1D)> {
    let mem = schneider_membership_s12(c1, c2, c12)?;
    let one = Rational::one();
    let zero = Rational::zero();
    match mem.piece {
        None => Err(Error::NotMember),
        Some(S12Piece::Zero) => Ok((
            CompactSet1D::interval(zero.clone(), one.clone())?,
            CompactSet1D::interval(zero, one)?,
        )),
        Some(S12Piece::FirstOnly) => Ok((balanced(&r_of_c(c1)?, &one), CompactSet1D::point(zero))),
        Some(S12Piece::SecondOnly) => Ok((CompactSet1D::point(zero), balanced(&r_of_c(c2)?, &one))),
        Some(S12Piece::Both) => {
            let (lo_c, hi_c) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            if hi_c.is_zero() {
                return Err(Error::DegenerateM);
            }
            // The smaller index goes second while c12 is below it, which
            // reaches down to L; from there up the larger one goes second.
            let second_is_first_input = if c12 < lo_c { c1 < c2 } else { c1 > c2 };
            let (first_c, second_c) = if second_is_first_input { (c2, c1) } else { (c1, c2) };
            let (rf, rs) = (r_of_c(first_c)?, r_of_c(second_c)?);
            let m = s12_scale(&rf, &rs, c12);
            debug_assert!(m >= int(2), "scale {m} below 2");
            let a_first = balanced(&rf, &one);
            let a_second = balanced(&rs, &m);
            if second_is_first_input {
                Ok((a_second, a_first))
            } else {
                Ok((a_first, a_second))
            }
        }
    }
}

/// `true` when the point lies in the sufficient piece
/// `{c1, c2 ∈ [0, 1], 0 ≤ c12 ≤ max(c1, c2)}` of the index region in
/// dimension `n ≥ 2`.
pub fn partial_char_sn2(n: usize, c1: &Rational, c2: &Rational, c12: &Rational) -> Result<bool> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if c1.is_negative() || c2.is_negative() || c12.is_negative() {
        return Err(Error::NegativeInput);
    }
    let one = Rational::one();
    Ok(*c1 <= one && *c2 <= one && c12 <= c1.max(c2))
}

fn is_perfect_power(x: &BigInt, n: u32) -> Option<BigInt> {
    let root = x.nth_root(n);
    (root.pow(n) == *x).then_some(root)
}

/// Exact `n`-th root of a non-negative rational when it is rational.
fn rational_root(x: &Rational, n: u32) -> Option<Rational> {
    let p = is_perfect_power(x.numer(), n)?;
    let q = is_perfect_power(x.denom(), n)?;
    Some(Rational::new(p, q))
}

/// `floor(x^{1/n} · 2^bits)` for `x ≥ 0`.
fn root_floor(x: &Rational, n: u32, bits: u64) -> BigUint {
    let shifted: BigInt = (x.numer() << (bits * u64::from(n))) / x.denom();
    shifted.to_biguint().expect("non-negative").nth_root(n)
}

/// `u^{1/n} + v^{1/n} ≤ 1` for positive rationals.
///
/// Equality forces both roots to be rational (radicals of distinct classes
/// modulo `ℚ*` are linearly independent over `ℚ`), so that case is settled
/// exactly and otherwise the sum differs from 1 and narrowing terminates.
fn root_sum_at_most_one(u: &Rational, v: &Rational, n: u32) -> bool {
    if let (Some(a), Some(b)) = (rational_root(u, n), rational_root(v, n)) {
        return a + b <= Rational::one();
    }
    let mut bits = 32u64;
    loop {
        // True roots lie in [lo, lo + 1) / 2^bits.
        let lo = root_floor(u, n, bits) + root_floor(v, n, bits);
        let unit = BigUint::one() << bits;
        if lo.clone() + 2u32 <= unit {
            return true;
        }
        if lo >= unit {
            return false;
        }
        bits *= 2;
    }
}

/// `c ≥ (a^{1/n} + b^{1/n})^n`, the two-set measure region in `ℝⁿ`.
pub fn lyusternik_membership_l2(n: u32, a: &Rational, b: &Rational, c: &Rational) -> Result<bool> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    if a.is_negative() || b.is_negative() || c.is_negative() {
        return Err(Error::NegativeInput);
    }
    if n == 1 {
        return Ok(*c >= a + b);
    }
    if a.is_zero() {
        return Ok(c >= b);
    }
    if b.is_zero() {
        return Ok(c >= a);
    }
    if c.is_zero() {
        return Ok(false);
    }
    Ok(root_sum_at_most_one(&(a / c), &(b / c), n))
}

/// Integer constants of the fractal witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessParams {
    pub n: u32,
    pub k1: u32,
    pub k2: u32,
    /// `α23 / α13`.
    pub a: Rational,
    /// `α123 / α13`.
    pub b: Rational,
    pub q_a: u64,
    pub q_b: u64,
}

/// Smallest `N ≥ 4` admitting `k1 ≥ 1` with `2 k1 < N - 1` and
/// `k1 / (N - 1) + a < b`, trying `k1 = ⌊(N-1)/3⌋` first and then `k1 = 1`.
pub fn choose_witness_params(alpha13: &Rational, alpha23: &Rational, alpha123: &Rational) -> Result<WitnessParams> {
    if !alpha13.is_positive() || alpha23 < alpha13 || alpha123 <= alpha23 {
        return Err(Error::BadOrdering);
    }
    let a = alpha23 / alpha13;
    let b = alpha123 / alpha13;
    let room = &b - &a;
    let q_a = a.floor().to_integer().to_u64().ok_or(Error::BadOrdering)?;
    let q_b = (&b / &a).floor().to_integer().to_u64().ok_or(Error::BadOrdering)?;
    let mut n: u32 = 4;
    loop {
        let mut candidates = vec![(n - 1) / 3];
        if candidates[0] != 1 {
            candidates.push(1);
        }
        for k1 in candidates {
            let fits = k1 >= 1
                && 2 * k1 < n - 1
                && Rational::new(BigInt::from(k1), BigInt::from(n - 1)) < room;
            if fits {
                return Ok(WitnessParams {
                    n,
                    k1,
                    k2: n - 1 - k1,
                    a,
                    b,
                    q_a,
                    q_b,
                });
            }
        }
        n += 1;
    }
}

/// Sets, measures, and the construction's exact predictions.
#[derive(Debug, Clone)]
pub struct Lyusternik3Witness {
    pub params: WitnessParams,
    pub depth: u32,
    /// `A_j = α13 B_j`.
    pub sets: [CompactSet1D; 3],
    /// Measures of every sub-sum of the `A_j`.
    pub achieved: RegionPoint,
    /// The target `(0, 0, 0, 0, α13, α23, α123)`.
    pub target: RegionPoint,
    pub bounds: WitnessBounds,
}

/// Exact values and bounds implied by the construction, already scaled by
/// `α13`. `δ = N^{-d}` and `μ_k = ((k+1)/N)^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBounds {
    /// `α13 μ_{k1}`.
    pub single1: Rational,
    /// `α13 |T2| μ_{k1}`.
    pub single2_max: Rational,
    /// `α13 μ_{k2}`.
    pub single3: Rational,
    /// `α13 (|T2| (2k1+1)^d 2δ + |P1| |T2| μ_{k1})`.
    pub pair12_max: Rational,
    /// `α13 (1 + δ)`: the fractal component `C(k1) + C(k2)`.
    pub pair13_fractal: Rational,
    /// `α13 (1 + δ + |P1| μ_{k2})`.
    pub pair13_max: Rational,
    /// `α13 (a + δ)`.
    pub pair23: Rational,
    /// `α13 (max(b, a + diam_d C(k1)) + δ)`.
    pub full: Rational,
    /// Measure of the scaled fractal component `α13 (C(k1) + C(k2))`.
    pub pair13_fractal_achieved: Rational,
}

impl Lyusternik3Witness {
    /// Every measure matches or respects its predicted value.
    pub fn within_bounds(&self) -> bool {
        let v = |s: &[usize]| self.achieved.value(subset_of(s).expect("small subset"));
        let b = &self.bounds;
        v(&[1]) == b.single1
            && v(&[2]) <= b.single2_max
            && v(&[3]) == b.single3
            && v(&[1, 2]) <= b.pair12_max
            && b.pair13_fractal_achieved == b.pair13_fractal
            && b.pair13_fractal <= v(&[1, 3])
            && v(&[1, 3]) <= b.pair13_max
            && v(&[2, 3]) == b.pair23
            && v(&[1, 2, 3]) == b.full
    }
}

/// Depth-`d` sets whose sub-sum measures approach
/// `(0, 0, 0, 0, α13, α23, α123)` as `d` grows, a point outside the
/// three-set measure region whenever `α13 > 0`.
pub fn fractal_lyusternik3_witness(
    alpha13: &Rational,
    alpha23: &Rational,
    alpha123: &Rational,
    depth: u32,
) -> Result<Lyusternik3Witness> {
    let params = choose_witness_params(alpha13, alpha23, alpha123)?;
    let s1 = FractalSpec::new(params.n, params.k1, depth)?;
    let s2 = FractalSpec::new(params.n, params.k2, depth)?;
    let f1 = fractal_cover(&s1);
    let f3 = fractal_cover(&s2);
    let a = &params.a;
    let b = &params.b;

    let mut p1: Vec<Rational> = (0..params.q_b).map(|j| a * int(j as i64)).collect();
    p1.push(b - a);
    let mut t2: Vec<Rational> = (0..params.q_a).map(|j| int(j as i64)).collect();
    t2.push(a - Rational::one());
    let p1_set = CompactSet1D::points(p1)?;
    let t2_set = CompactSet1D::points(t2)?;

    let b1 = CompactSet1D::normalize(
        f1.intervals().iter().chain(p1_set.intervals()).cloned().collect(),
    )?;
    let b2 = t2_set.minkowski_sum(&f1);
    let b3 = f3.clone();

    let sets = [b1.scale(alpha13)?, b2.scale(alpha13)?, b3.scale(alpha13)?];
    let s23 = sets[1].minkowski_sum(&sets[2]);
    let mut values = BTreeMap::new();
    values.insert(0b001, sets[0].measure());
    values.insert(0b010, sets[1].measure());
    values.insert(0b100, sets[2].measure());
    values.insert(0b011, sets[0].minkowski_sum(&sets[1]).measure());
    values.insert(0b101, sets[0].minkowski_sum(&sets[2]).measure());
    values.insert(0b110, s23.measure());
    values.insert(0b111, sets[0].minkowski_sum(&s23).measure());
    let achieved = RegionPoint::new(3, values)?;

    let zero = Rational::zero();
    let target = RegionPoint::from_vector(
        3,
        &[
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero,
            alpha13.clone(),
            alpha23.clone(),
            alpha123.clone(),
        ],
    )?;

    let delta = s1.cell();
    let mu1 = fractal_measure(&s1);
    let mu2 = fractal_measure(&s2);
    let n_p1 = int(p1_set.intervals().len() as i64);
    let n_t2 = int(t2_set.intervals().len() as i64);
    let spread = pow(&int(2 * i64::from(params.k1) + 1), depth);
    let diam1 = fractal_diameter(&s1).at_depth;
    let one = Rational::one();
    let bounds = WitnessBounds {
        single1: alpha13 * &mu1,
        single2_max: alpha13 * &n_t2 * &mu1,
        single3: alpha13 * &mu2,
        pair12_max: alpha13 * (&n_t2 * spread * int(2) * &delta + &n_p1 * &n_t2 * &mu1),
        pair13_fractal: alpha13 * (&one + &delta),
        pair13_max: alpha13 * (&one + &delta + &n_p1 * &mu2),
        pair23: alpha13 * (a + &delta),
        full: alpha13 * (b.clone().max(a + diam1) + &delta),
        pair13_fractal_achieved: f1.minkowski_sum(&f3).scale(alpha13)?.measure(),
    };

    Ok(Lyusternik3Witness {
        params,
        depth,
        sets,
        achieved,
        target,
        bounds,
    })
}

/// `(0, 0, 0, 0, 1 - 1/k, 1 - 1/k, 1)`, a sequence in the three-set measure
/// region converging to a point outside it.
pub fn non_closedness_sequence(k: usize) -> Result<RegionPoint> {
    if k < 2 {
        return Err(Error::KTooSmall { k, min: 2 });
    }
    let x = Rational::one() - Rational::new(BigInt::one(), BigInt::from(k));
    let zero = Rational::zero();
    RegionPoint::from_vector(
        3,
        &[zero.clone(), zero.clone(), zero.clone(), zero, x.clone(), x, Rational::one()],
    )
}

/// Limit of [`non_closedness_sequence`].
pub fn non_closedness_limit() -> RegionPoint {
    let (zero, one) = (Rational::zero(), Rational::one());
    RegionPoint::from_vector(
        3,
        &[zero.clone(), zero.clone(), zero.clone(), zero, one.clone(), one.clone(), one],
    )
    .expect("seven values")
}

/// Necessary condition for a measure vector on the line, from the equality
/// case of Brunn-Minkowski: if `|A_i| = 0` and adding `A_i` does not grow a
/// sum of positive measure, then `A_i` is a single point and adding it never
/// changes any measure. Returns `true` when the point breaks this, so it is
/// not achievable.
pub fn lyusternik_limit_excluded(p: &RegionPoint) -> bool {
    let all = full(p.m);
    (0..p.m).any(|i| {
        let bit = 1 << i;
        let rest = all & !bit;
        let forced_point =
            p.value(bit).is_zero() && rest != 0 && p.value(all) == p.value(rest) && p.value(rest).is_positive();
        forced_point
            && (0..p.m)
                .filter(|&j| j != i)
                .any(|j| p.value(bit | 1 << j) != p.value(1 << j))
    })
}
