//! One PASS/FAIL line per acceptance criterion. Every check is an exact
//! rational comparison; the only tolerances are wall-clock limits.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{r, reference_l};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumset_core::bounds::{
    gap_bound_witness, gap_sum_upper_bound, induced_index_cstar, lower_bound_l,
    tight_witness_pair, CStar,
};
use sumset_core::fractal::{
    cover_is_unit_interval, fractal_cover, fractal_diameter, fractal_measure, fractal_sum_check,
    FractalSpec,
};
use sumset_core::index::{largest_gap, product_sum_index, schneider_index, sum_index, ProductSet};
use sumset_core::oracle::{random_set, verify_gap_claims, verify_lower_bound_sweep, RandomSetParams, SweepConfig};
use sumset_core::partitions::{
    check_fractional_subadditive_c, full, EqualityCondition, FractionalPartition, SetSystem, Subset,
};
use sumset_core::rational::pow;
use sumset_core::regions::{
    fractal_lyusternik3_witness, lyusternik_limit_excluded, non_closedness_limit,
    non_closedness_sequence,
};
use sumset_core::{CompactSet1D, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

const SEED: u64 = 20_240_601;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut g = ChaCha8Rng::seed_from_u64(SEED);
    g.set_stream(stream);
    g
}

fn two_intervals() -> CompactSet1D {
    CompactSet1D::from_pairs([(r(0, 1), r(1, 1)), (r(2, 1), r(3, 1))]).unwrap()
}

fn two_interval_value() -> Outcome {
    let a = two_intervals();
    let c = schneider_index(&a);
    ensure(c == r(1, 3), || format!("c(A) = {c}"))?;
    let prod = ProductSet::new(vec![a, CompactSet1D::interval(r(0, 1), r(1, 1)).unwrap()]).unwrap();
    let cp = product_sum_index(&[prod]).unwrap();
    ensure(cp == r(1, 3), || format!("product index = {cp}"))?;
    Ok("c = 1/3, product c = 1/3".into())
}

fn extremes() -> Outcome {
    let iv = CompactSet1D::interval(r(-2, 1), r(5, 3)).unwrap();
    ensure(schneider_index(&iv).is_zero(), || "interval index is not 0".into())?;
    let pts = CompactSet1D::points([r(1, 1), r(4, 1)]).unwrap();
    ensure(schneider_index(&pts).is_one(), || "two-point index is not 1".into())?;
    let mut g = rng(2);
    let params = RandomSetParams::default();
    for i in 0..1000 {
        let a = random_set(&mut g, &params);
        let c = schneider_index(&a);
        ensure(!(c < Rational::zero() || c > Rational::one()), || format!("sample {i}: c = {c}"))?;
    }
    Ok("interval 0, two points 1, 1000 random in [0,1]".into())
}

fn tightness() -> Outcome {
    let mut hits = 0;
    for i in 0..=10 {
        for j in 0..=10 {
            let (c1, c2) = (r(i, 10), r(j, 10));
            let (a, b) = tight_witness_pair(&c1, &c2).unwrap();
            ensure(schneider_index(&a) == c1 && schneider_index(&b) == c2, || {
                format!("witness indices differ at ({c1}, {c2})")
            })?;
            let l = lower_bound_l(&c1, &c2).unwrap();
            ensure(l == reference_l(&c1, &c2), || format!("L({c1}, {c2}) = {l}"))?;
            let got = sum_index(&[a, b]).unwrap();
            ensure(got == l, || format!("({c1}, {c2}): sum index {got}, L = {l}"))?;
            hits += 1;
        }
    }
    Ok(format!("{hits}/121 cells exact"))
}

fn soundness_sweep() -> Outcome {
    let cfg = SweepConfig::uniform(5);
    let sweep = verify_lower_bound_sweep(&cfg).unwrap();
    ensure(sweep.violations == 0, || {
        format!("{} violations, worst slack {}", sweep.violations, sweep.worst_slack)
    })?;
    let gaps = verify_gap_claims(&cfg).unwrap();
    ensure(gaps.mismatches.is_empty(), || format!("{} gap mismatches", gaps.mismatches.len()))?;
    Ok(format!(
        "{} cells, 0 violations; {} gap cells checked ({} outside regime), 0 mismatches",
        sweep.records.len(),
        gaps.checked,
        gaps.skipped
    ))
}

fn gap_sum_bound() -> Outcome {
    let mut g = rng(5);
    for i in 0..500 {
        let k = g.gen_range(1..=6);
        let mut list: Vec<Rational> = (0..k).map(|_| r(g.gen_range(0..=48), 8)).collect();
        list.sort_by(|a, b| b.cmp(a));
        let sum = CompactSet1D::sum_all(&gap_bound_witness(&list).unwrap()).unwrap();
        let (got, want) = (largest_gap(&sum), gap_sum_upper_bound(&list).unwrap());
        ensure(got == want, || format!("list {i}: G = {got}, bound = {want}"))?;
    }
    let params = RandomSetParams::default();
    for i in 0..500 {
        let k = g.gen_range(1..=6);
        let sets: Vec<CompactSet1D> = (0..k).map(|_| random_set(&mut g, &params)).collect();
        let mut gaps: Vec<Rational> = sets.iter().map(largest_gap).collect();
        gaps.sort_by(|a, b| b.cmp(a));
        let got = largest_gap(&CompactSet1D::sum_all(&sets).unwrap());
        let bound = gap_sum_upper_bound(&gaps).unwrap();
        ensure(got <= bound, || format!("set list {i}: G = {got} > {bound}"))?;
    }
    Ok("500 witnesses exact, 500 random lists within bound".into())
}

/// Random edges padded with singletons to equal coverage, then normalized.
fn random_partition(g: &mut ChaCha8Rng, m: usize) -> FractionalPartition {
    let mut mult = vec![0i64; 1 << m];
    for _ in 0..g.gen_range(1..=5) {
        mult[g.gen_range(1..=full(m)) as usize] += g.gen_range(1..=3);
    }
    let cover = |mult: &[i64], i: usize| -> i64 {
        (1..mult.len()).filter(|s| s >> i & 1 == 1).map(|s| mult[s]).sum()
    };
    let top = (0..m).map(|i| cover(&mult, i)).max().unwrap();
    for i in 0..m {
        mult[1 << i] += top - cover(&mult, i);
    }
    let edges = (1..mult.len())
        .filter(|&s| mult[s] > 0)
        .map(|s| (s as Subset, r(mult[s], top)))
        .collect();
    FractionalPartition::new(m, edges).unwrap()
}

fn subadditivity() -> Outcome {
    let mut g = rng(6);
    let params = RandomSetParams {
        point_chance: 0.4,
        ..RandomSetParams::default()
    };
    let (mut equal, mut trivial, mut intervals) = (0, 0, 0);
    for i in 0..500 {
        let m = g.gen_range(2..=4);
        let sys = SetSystem::new((0..m).map(|_| random_set(&mut g, &params)).collect()).unwrap();
        let p = random_partition(&mut g, m);
        let rep = check_fractional_subadditive_c(&sys, &p).unwrap();
        ensure(rep.holds, || format!("instance {i}: {} > {}", rep.lhs, rep.rhs))?;
        ensure(rep.classified_correctly(), || format!("instance {i}: misclassified {rep:?}"))?;
        if rep.is_equality {
            equal += 1;
            match rep.condition {
                EqualityCondition::TrivialTranslated => trivial += 1,
                EqualityCondition::AllIntervals => intervals += 1,
                EqualityCondition::None => {}
            }
        }
    }
    Ok(format!(
        "500 hold; {equal} equalities ({trivial} trivial translated, {intervals} all intervals), 0 misclassified"
    ))
}

fn fractal_identities() -> Outcome {
    let mut checks = 0;
    for n in 3..=7u32 {
        for depth in 1..=4u32 {
            for k in 0..n {
                for l in 0..n - k {
                    let rep = fractal_sum_check(n, k, l, depth).unwrap();
                    ensure(rep.holds(), || format!("C({n},{k}) + C({n},{l}) at depth {depth}: {rep:?}"))?;
                    checks += 1;
                }
                let s = FractalSpec::new(n, k, depth).unwrap();
                let cover = fractal_cover(&s);
                let formula = pow(&r(i64::from(k) + 1, i64::from(n)), depth);
                ensure(cover.measure() == formula && fractal_measure(&s) == formula, || {
                    format!("measure of C({n},{k}) at depth {depth}")
                })?;
                ensure(cover.diam() == fractal_diameter(&s).at_depth, || {
                    format!("diameter of C({n},{k}) at depth {depth}")
                })?;
            }
            let s = FractalSpec::new(n, n - 1, depth).unwrap();
            ensure(cover_is_unit_interval(&s), || format!("C({n},{}) is not [0,1]", n - 1))?;
        }
    }
    Ok(format!("{checks} sum identities, measures, diameters, full digit sets"))
}

fn non_closedness() -> Outcome {
    let (one, two) = (r(1, 1), r(2, 1));
    let w = fractal_lyusternik3_witness(&one, &one, &two, 6).unwrap();
    ensure(w.within_bounds(), || format!("bounds not met: {:?}", w.bounds))?;
    let n6 = pow(&r(1, i64::from(w.params.n)), 6);
    let fractal_part = &one + &n6;
    ensure(w.bounds.pair13_fractal_achieved == fractal_part, || {
        format!("fractal component {} != 1 + N^-6", w.bounds.pair13_fractal_achieved)
    })?;
    let full_value = w.achieved.value(0b111);
    let drift = if full_value >= two { &full_value - &two } else { &two - &full_value };
    ensure(full_value == w.bounds.full, || format!("full sum {full_value} != {}", w.bounds.full))?;
    for k in 2..=10 {
        let p = non_closedness_sequence(k).unwrap();
        ensure(!lyusternik_limit_excluded(&p), || format!("sequence point {k} rejected"))?;
    }
    ensure(lyusternik_limit_excluded(&non_closedness_limit()), || "limit point accepted".into())?;
    Ok(format!(
        "N = {}, k1 = {}, k2 = {}; |B1+B2| = {} <= {}; full sum off target by {}; 9 sequence points; limit excluded",
        w.params.n,
        w.params.k1,
        w.params.k2,
        w.achieved.value(0b011),
        w.bounds.pair12_max,
        drift
    ))
}

fn brunn_minkowski() -> Outcome {
    let mut g = rng(9);
    let params = RandomSetParams::default();
    for i in 0..1000 {
        let (a, b) = (random_set(&mut g, &params), random_set(&mut g, &params));
        let s = a.minkowski_sum(&b);
        ensure(s.measure() >= a.measure() + b.measure(), || format!("pair {i}: {a} + {b}"))?;
    }
    Ok("1000 pairs".into())
}

fn cstar_values() -> Outcome {
    let cases = [
        (r(0, 1), CStar::Finite(0)),
        (r(1, 3), CStar::Finite(1)),
        (r(1, 2), CStar::Finite(1)),
        (r(3, 4), CStar::Finite(2)),
        (r(1, 1), CStar::Infinite),
    ];
    for (c, want) in cases {
        let got = induced_index_cstar(&c).unwrap();
        ensure(got == want, || format!("c* ({c}) = {got}, expected {want}"))?;
    }
    Ok("{0, 1, 1, 2, inf}".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("index of [0,1] u [2,3]", Duration::from_millis(1), two_interval_value),
        ("index extremes", Duration::from_secs(1), extremes),
        ("lower bound tightness", Duration::from_secs(1), tightness),
        ("lower bound sweep", Duration::from_secs(60), soundness_sweep),
        ("gap sum bound", Duration::from_secs(30), gap_sum_bound),
        ("fractional subadditivity", Duration::from_secs(60), subadditivity),
        ("fractal identities", Duration::from_secs(30), fractal_identities),
        ("three-set measure region", Duration::from_secs(60), non_closedness),
        ("Brunn-Minkowski", Duration::from_secs(5), brunn_minkowski),
        ("c* values", Duration::from_millis(1), cstar_values),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if took <= *limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; took {took:?}, limit {limit:?}")),
            Err(why) => ("FAIL", why),
        };
        if verdict.0 == "FAIL" {
            failed += 1;
        }
        println!("{} {:>2} {name}: {} [{took:.2?}]", verdict.0, i + 1, verdict.1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
