//! Reference computations that avoid the library's interval machinery: sets
//! are raw `(lo, hi)` lists and everything is decided pointwise on a lattice.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use sumset_core::{CompactSet1D, Rational};

pub type Raw = Vec<(Rational, Rational)>;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn raw_of(a: &CompactSet1D) -> Raw {
    a.intervals().iter().map(|iv| (iv.lo().clone(), iv.hi().clone())).collect()
}

pub fn build(raw: &Raw) -> CompactSet1D {
    CompactSet1D::from_pairs(raw.iter().cloned()).unwrap()
}

pub fn member(a: &Raw, x: &Rational) -> bool {
    a.iter().any(|(lo, hi)| lo <= x && x <= hi)
}

/// `x ∈ A + B` iff `(x - B) ∩ A ≠ ∅`, tested one interval of `B` at a time.
pub fn sum_member(a: &Raw, b: &Raw, x: &Rational) -> bool {
    b.iter().any(|(blo, bhi)| {
        let (lo, hi) = (x - bhi, x - blo);
        a.iter().any(|(alo, ahi)| *alo <= hi && lo <= *ahi)
    })
}

/// Every pairwise interval sum, unmerged.
pub fn brute_sum(a: &Raw, b: &Raw) -> Raw {
    let mut out = Vec::new();
    for (alo, ahi) in a {
        for (blo, bhi) in b {
            out.push((alo + blo, ahi + bhi));
        }
    }
    out
}

fn bounds(a: &Raw) -> (Rational, Rational) {
    let lo = a.iter().map(|p| p.0.clone()).min().unwrap();
    let hi = a.iter().map(|p| p.1.clone()).max().unwrap();
    (lo, hi)
}

/// Largest gap by scanning the lattice of step `step / 2`. Exact when every
/// endpoint is a multiple of `step`.
pub fn scan_gap(a: &Raw, step: &Rational) -> Rational {
    let (lo, hi) = bounds(a);
    let half = step / Rational::from_integer(BigInt::from(2));
    let mut best = Rational::zero();
    let mut last_in = lo.clone();
    let mut prev_in = true;
    let mut x = lo;
    while x <= hi {
        let here = member(a, &x);
        if here {
            if !prev_in && &x - &last_in > best {
                best = &x - &last_in;
            }
            last_in = x.clone();
        }
        prev_in = here;
        x += &half;
    }
    best
}

/// `G / diam`, with a single point giving 0.
pub fn scan_index(a: &Raw, step: &Rational) -> Rational {
    let (lo, hi) = bounds(a);
    let d = hi - lo;
    if d.is_zero() {
        return Rational::zero();
    }
    scan_gap(a, step) / d
}

/// Covered length by summing lattice cells of width `step / 2` whose midpoint
/// is covered. Exact when every endpoint is a multiple of `step`.
pub fn scan_measure(a: &Raw, step: &Rational) -> Rational {
    let (lo, hi) = bounds(a);
    let half = step / Rational::from_integer(BigInt::from(2));
    let quarter = &half / Rational::from_integer(BigInt::from(2));
    let mut total = Rational::zero();
    let mut x = lo;
    while x < hi {
        if member(a, &(&x + &quarter)) {
            total += &half;
        }
        x += &half;
    }
    total
}

/// Random union on the lattice `Z / den` inside `[0, span]`.
pub fn random_raw<R: Rng>(rng: &mut R, pieces: usize, den: i64, span: i64) -> Raw {
    let count = rng.gen_range(1..=pieces);
    (0..count)
        .map(|_| {
            let lo = rng.gen_range(0..=span * den);
            let len = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=span * den / 2) };
            (r(lo, den), r((lo + len).min(span * den), den))
        })
        .collect()
}

/// `(1 - c) / (1 + c)` written out again.
pub fn r_value(c: &Rational) -> Rational {
    let one = Rational::one();
    (&one - c) / (&one + c)
}

/// Minimum over both orderings of `(1 - r_i - 2 r_j) / (3 + r_i + 2 r_j)`,
/// clamped at 0.
pub fn reference_l(c1: &Rational, c2: &Rational) -> Rational {
    let (r1, r2) = (r_value(c1), r_value(c2));
    let two = Rational::from_integer(BigInt::from(2));
    let three = Rational::from_integer(BigInt::from(3));
    let one = Rational::one();
    let v = |a: &Rational, b: &Rational| (&one - a - &two * b) / (&three + a + &two * b);
    v(&r1, &r2).min(v(&r2, &r1)).max(Rational::zero())
}
