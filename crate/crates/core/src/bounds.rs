//! Closed-form bounds on the index of a Minkowski sum, and the extremal sets
//! that attain them.
//!
//! The central quantity is
//!
//! ```text
//! L(c1, c2) = max(0, min over orderings (i, j) of
//!                    (1 - r_i - 2 r_j) / (3 + r_i + 2 r_j)),   r = (1 - c) / (1 + c)
//! ```
//!
//! which is the exact minimum of `c(A1 + A2)` over compact `A1, A2 ⊂ ℝ` with
//! prescribed indices. [`tight_witness_pair`] builds a pair attaining it.
//!
//! Every set whose gap structure matters here is a two-interval set
//! `[0, a] ∪ [1, 1 + a']`, parametrized by its `r` value and an imbalance
//! `n ≥ 0` (see [`LrSetParams`]).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::index::largest_gap;
use crate::rational::{format_rational, int, pow2, rat, Rational};
use crate::set_core::CompactSet1D;

/// Largest `k` for which the `k!` orderings are enumerated.
pub const KSUM_MAX: usize = 8;

fn check_unit(name: &'static str, c: &Rational) -> Result<()> {
    if c.is_negative() || *c > Rational::one() {
        return Err(Error::OutOfRange {
            name,
            value: format_rational(c),
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// `r(c) = (1 - c) / (1 + c)`, an involution of `[0, 1]`.
pub fn r_of_c(c: &Rational) -> Result<Rational> {
    check_unit("c", c)?;
    let one = Rational::one();
    Ok((&one - c) / (&one + c))
}

fn r_unchecked(c: &Rational) -> Rational {
    let one = Rational::one();
    (&one - c) / (&one + c)
}

/// `(1 - r_first - 2 r_second) / (3 + r_first + 2 r_second)`, unclamped.
fn ordered_pair_value(r_first: &Rational, r_second: &Rational) -> Rational {
    let weighted = r_first + r_second * int(2);
    (Rational::one() - &weighted) / (int(3) + weighted)
}

/// Best lower bound `L(c1, c2)` on `c(A1 + A2)`.
pub fn lower_bound_l(c1: &Rational, c2: &Rational) -> Result<Rational> {
    check_unit("c1", c1)?;
    check_unit("c2", c2)?;
    let (r1, r2) = (r_unchecked(c1), r_unchecked(c2));
    // The expression is not symmetric before the min; evaluate both orders.
    let v12 = ordered_pair_value(&r1, &r2);
    let v21 = ordered_pair_value(&r2, &r1);
    Ok(v12.min(v21).max(Rational::zero()))
}

/// Upper end `M(c1, c2) = max(c1, c2)` of the two-set region.
pub fn upper_bound_m(c1: &Rational, c2: &Rational) -> Result<Rational> {
    check_unit("c1", c1)?;
    check_unit("c2", c2)?;
    Ok(c1.max(c2).clone())
}

/// `min over orderings (1 - r_i - 2 r_j) > 0`, the regime in which the
/// per-case gap formulas were derived.
pub fn positive_assumption(c1: &Rational, c2: &Rational) -> Result<bool> {
    check_unit("c1", c1)?;
    check_unit("c2", c2)?;
    let (r1, r2) = (r_unchecked(c1), r_unchecked(c2));
    let one = Rational::one();
    let a = &one - &r1 - &r2 * int(2);
    let b = &one - &r2 - &r1 * int(2);
    Ok(a.min(b).is_positive())
}

/// Which interval of a two-interval set is longer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Balanced,
}

impl Side {
    /// +1 when the left interval is the long one, -1 for the right, 0 if equal.
    fn sign(self) -> Rational {
        match self {
            Side::Left => int(1),
            Side::Right => int(-1),
            Side::Balanced => int(0),
        }
    }
}

/// Parameters of `[0, a] ∪ [1, 1 + a']` with index `c` where `r = r(c)`.
///
/// Left:  `a = r + n(1-r)/2`, `a' = r - n(1+r)/2`, needs `n(1+r)/2 ≤ r`.
/// Right: `a = r - n(1-r)/2`, `a' = r + n(1+r)/2`, needs `n(1-r)/2 ≤ r`.
/// Balanced: `a = a' = r`, `n = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LrSetParams {
    r: Rational,
    n: Rational,
    side: Side,
}

impl LrSetParams {
    pub fn new(r: Rational, n: Rational, side: Side) -> Result<Self> {
        check_unit("r", &r)?;
        if n.is_negative() {
            return Err(Error::ConstraintViolated(format!(
                "imbalance n = {n} must be non-negative"
            )));
        }
        let half = rat(1, 2);
        let one = Rational::one();
        match side {
            Side::Left if &n * (&one + &r) * &half > r => Err(Error::ConstraintViolated(
                format!("L-set needs n(1+r)/2 <= r, got n = {n}, r = {r}"),
            )),
            Side::Right if &n * (&one - &r) * &half > r => Err(Error::ConstraintViolated(
                format!("R-set needs n(1-r)/2 <= r, got n = {n}, r = {r}"),
            )),
            Side::Balanced if !n.is_zero() => Err(Error::ConstraintViolated(format!(
                "balanced set needs n = 0, got {n}"
            ))),
            _ => Ok(Self { r, n, side }),
        }
    }

    pub fn balanced(r: Rational) -> Result<Self> {
        Self::new(r, Rational::zero(), Side::Balanced)
    }

    /// Largest admissible imbalance for this side and `r`, or `None` when it
    /// is unbounded (an R-set with `r = 1`, which is an interval anyway).
    pub fn imbalance_cap(r: &Rational, side: Side) -> Option<Rational> {
        let one = Rational::one();
        match side {
            Side::Left => Some(r * int(2) / (&one + r)),
            Side::Right if *r == one => None,
            Side::Right => Some(r * int(2) / (&one - r)),
            Side::Balanced => Some(Rational::zero()),
        }
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Index of the set these parameters describe, `c = r(r)`.
    pub fn index(&self) -> Rational {
        r_unchecked(&self.r)
    }

    /// Lengths `(a, a')` of the left and right intervals.
    pub fn lengths(&self) -> (Rational, Rational) {
        let one = Rational::one();
        let half = rat(1, 2);
        let s = self.side.sign();
        let a = &self.r + &s * &self.n * (&one - &self.r) * &half;
        let a_prime = &self.r - &s * &self.n * (&one + &self.r) * &half;
        (a, a_prime)
    }
}

/// `[0, a] ∪ [1, 1 + a']` for the given parameters.
pub fn make_lr_set(p: &LrSetParams) -> CompactSet1D {
    let (a, a_prime) = p.lengths();
    let one = Rational::one();
    CompactSet1D::from_pairs([(Rational::zero(), a), (one.clone(), one + a_prime)])
        .expect("validated LR parameters give ordered endpoints")
}

fn balanced_set(r: &Rational, scale: &Rational) -> CompactSet1D {
    CompactSet1D::from_pairs([
        (Rational::zero(), r * scale),
        (scale.clone(), scale + r * scale),
    ])
    .expect("r >= 0 and scale > 0")
}

/// A pair with indices `(c1, c2)` whose sum has index exactly `L(c1, c2)`:
/// the balanced set for the first index of the minimizing ordering, and twice
/// the balanced set for the second.
pub fn tight_witness_pair(
    c1: &Rational,
    c2: &Rational,
) -> Result<(CompactSet1D, CompactSet1D)> {
    check_unit("c1", c1)?;
    check_unit("c2", c2)?;
    let (r1, r2) = (r_unchecked(c1), r_unchecked(c2));
    let one = Rational::one();
    let two = int(2);
    if ordered_pair_value(&r1, &r2) <= ordered_pair_value(&r2, &r1) {
        Ok((balanced_set(&r1, &one), balanced_set(&r2, &two)))
    } else {
        Ok((balanced_set(&r1, &two), balanced_set(&r2, &one)))
    }
}

/// Gap candidates for `A1 + m A2` with `A1`, `A2` two-interval sets.
///
/// With `A1 = I1 ∪ J1` and `m A2 = I2 ∪ J2`:
/// `g1 = L(I1+J2) - R(I1+I2)`, `g2 = L(J1+I2) - R(I1+J2)`,
/// `g3 = L(J1+J2) - R(J1+I2)`, `g4 = L(J1+J2) - R(I1+J2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCandidates {
    pub g1: Rational,
    pub g2: Rational,
    pub g3: Rational,
    pub g4: Rational,
    /// `max{g1, g2, min(g3, g4), 0}`.
    pub predicted: Rational,
}

/// Closed-form gap candidates for the (side₁, side₂) case; balanced sets
/// enter with zero imbalance.
pub fn gap_candidates(p1: &LrSetParams, p2: &LrSetParams, m: &Rational) -> Result<GapCandidates> {
    if !m.is_positive() || *m > Rational::one() {
        return Err(Error::OutOfRange {
            name: "m",
            value: format_rational(m),
            range: "(0, 1]",
        });
    }
    let one = Rational::one();
    let half = rat(1, 2);
    let (r1, n1, s1) = (&p1.r, &p1.n, p1.side.sign());
    let (r2, n2, s2) = (&p2.r, &p2.n, p2.side.sign());

    // Imbalance terms for each side pairing, signed by side.
    let t1_short = &s1 * n1 * (&one - r1) * &half; // shifts the end of I1
    let t1_long = &s1 * n1 * (&one + r1) * &half; // shifts the end of J1
    let t2_short = &s2 * m * n2 * (&one - r2) * &half;
    let t2_long = &s2 * m * n2 * (&one + r2) * &half;
    let base = m - r1 - m * r2;

    let g1 = &base - &t1_short - &t2_short;
    let g2 = &one - m - r1 - m * r2 - &t1_short + &t2_long;
    let g3 = &base + &t1_long - &t2_short;
    let g4 = &one - r1 - m * r2 - &t1_short + &t2_long;
    let predicted = g1
        .clone()
        .max(g2.clone())
        .max(g3.clone().min(g4.clone()))
        .max(Rational::zero());
    Ok(GapCandidates {
        g1,
        g2,
        g3,
        g4,
        predicted,
    })
}

/// Engine value the gap candidates must reproduce.
pub fn engine_gap(p1: &LrSetParams, p2: &LrSetParams, m: &Rational) -> Result<Rational> {
    let a1 = make_lr_set(p1);
    let a2 = make_lr_set(p2).scale(m)?;
    Ok(largest_gap(&a1.minkowski_sum(&a2)))
}

/// Cartesian-product lower bound: the largest per-axis `L`.
pub fn product_lower_bound(c: &[Vec<Rational>; 2]) -> Result<Rational> {
    if c[0].len() != c[1].len() {
        return Err(Error::DimensionMismatch {
            expected: c[0].len(),
            found: c[1].len(),
        });
    }
    if c[0].is_empty() {
        return Err(Error::EmptyList);
    }
    let mut best = Rational::zero();
    for (a, b) in c[0].iter().zip(&c[1]) {
        best = best.max(lower_bound_l(a, b)?);
    }
    Ok(best)
}

fn check_gap_list(g: &[Rational]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::EmptyList);
    }
    if g.iter().any(Signed::is_negative) {
        return Err(Error::Negative);
    }
    if g.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotSorted);
    }
    Ok(())
}

/// `max over r of (g_r - Σ_{j > r} g_j)` for descending `g`: the sharp upper
/// bound on the largest gap of a sum of sets with those largest gaps.
pub fn gap_sum_upper_bound(g: &[Rational]) -> Result<Rational> {
    check_gap_list(g)?;
    let mut tail = Rational::zero();
    let mut best: Option<Rational> = None;
    for gr in g.iter().rev() {
        let v = gr - &tail;
        best = Some(match best {
            Some(b) if b >= v => b,
            _ => v,
        });
        tail += gr;
    }
    Ok(best.expect("list is nonempty"))
}

/// Two-point sets `{0, g_j}` whose sum attains [`gap_sum_upper_bound`].
pub fn gap_bound_witness(g: &[Rational]) -> Result<Vec<CompactSet1D>> {
    check_gap_list(g)?;
    g.iter()
        .map(|gj| CompactSet1D::points([Rational::zero(), gj.clone()]))
        .collect()
}

/// All orderings of `0..k`, lexicographic.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

fn check_ksum(c: &[Rational]) -> Result<Vec<Rational>> {
    if c.len() < 2 {
        return Err(Error::KTooSmall { k: c.len(), min: 2 });
    }
    if c.len() > KSUM_MAX {
        return Err(Error::KTooLarge {
            k: c.len(),
            max: KSUM_MAX,
        });
    }
    c.iter()
        .map(|cj| {
            check_unit("c", cj)?;
            Ok(r_unchecked(cj))
        })
        .collect()
}

/// Value and minimizing ordering of the k-sum candidate, before clamping.
fn ksum_minimizer(r: &[Rational]) -> (Rational, Vec<usize>) {
    let k = r.len() as u32;
    let total = pow2(k) - Rational::one();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for perm in permutations(r.len()) {
        let weighted = perm
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, &idx)| acc + pow2(j as u32) * &r[idx]);
        let v = (Rational::one() - &weighted) / (&total + &weighted);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, perm));
        }
    }
    best.expect("k >= 2 has orderings")
}

/// Candidate for the minimal index of a k-fold sum with given indices:
/// `max(0, min over σ of (1 - Σ 2^{j-1} r_σ(j)) / (2^k - 1 + Σ 2^{j-1} r_σ(j)))`.
pub fn ksum_candidate_bound(c: &[Rational]) -> Result<Rational> {
    let r = check_ksum(c)?;
    Ok(ksum_minimizer(&r).0.max(Rational::zero()))
}

/// Sets `[0, 2^{j-1} r] ∪ [2^{j-1}, 2^{j-1}(1 + r)]` assigned along the
/// minimizing ordering, returned in input order.
pub fn ksum_candidate_witness(c: &[Rational]) -> Result<Vec<CompactSet1D>> {
    let r = check_ksum(c)?;
    let (_, perm) = ksum_minimizer(&r);
    let mut out: Vec<Option<CompactSet1D>> = vec![None; r.len()];
    for (j, &idx) in perm.iter().enumerate() {
        out[idx] = Some(balanced_set(&r[idx], &pow2(j as u32)));
    }
    Ok(out.into_iter().map(|s| s.expect("permutation covers all")).collect())
}

/// `c*` under the k-sum candidate: `⌈log₂(1 / (1 - c))⌉`, or infinite at
/// `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CStar {
    Finite(u32),
    Infinite,
}

impl std::fmt::Display for CStar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CStar::Finite(k) => write!(f, "{k}"),
            CStar::Infinite => f.write_str("inf"),
        }
    }
}

pub fn induced_index_cstar(c: &Rational) -> Result<CStar> {
    check_unit("c", c)?;
    let one = Rational::one();
    if *c == one {
        return Ok(CStar::Infinite);
    }
    let x = &one / (&one - c);
    // Smallest k >= 0 with 2^k >= x, compared exactly.
    let mut k = 0u32;
    while pow2(k) < x {
        k += 1;
    }
    Ok(CStar::Finite(k))
}

/// Index `(c1 - m) / (1 + m)` of the annulus sum `A(c1, 1) + m A(c2, 1)`.
pub fn annulus_sum_index(c1: &Rational, m: &Rational) -> Result<Rational> {
    check_unit("c1", c1)?;
    if !m.is_positive() || m > c1 {
        return Err(Error::OutOfRange {
            name: "m",
            value: format_rational(m),
            range: "(0, c1]",
        });
    }
    Ok((c1 - m) / (Rational::one() + m))
}
