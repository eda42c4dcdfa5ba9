//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS or FAIL line; the process fails if any does.
//!
//! Each criterion times only the computation under test. Oracles and
//! bookkeeping run outside the timed region. Budgets are checked against
//! whatever profile the suite was built with, debug included.

#![allow(clippy::needless_range_loop)]

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nodal_core::classifier::fibres::{elliptic_fibre_search, DualGraph, FibreType, KodairaFibre};
use nodal_core::exact::int;
use nodal_core::f2::nodal_embedding_obstruction;
use nodal_core::invariants::bmy_solution_enumerator;
use nodal_core::lattice::{
    determinant, direct_sum, signature, smith_normal_form, square_discriminant_test, GramMatrix,
};
use nodal_core::singularity::{bmy_check, solve_discrepancies, BmyVerdict, CanonicalClass, OrbifoldSurface};
use nodal_core::{BigInt, BigRational};
use num_traits::{One, Signed, Zero};
use proptest::prop_oneof;
use proptest::strategy::{Just, Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

const ONE_MS: Duration = Duration::from_millis(1);
const ONE_S: Duration = Duration::from_secs(1);
const FIVE_S: Duration = Duration::from_secs(5);
const TEN_S: Duration = Duration::from_secs(10);
/// Replays have no budget of their own; this only guards against hangs.
const REPLAY_BUDGET: Duration = Duration::from_secs(30);

const LATTICE_SAMPLES: u32 = 500;
const CHAIN_SAMPLES: u32 = 256;

type Outcome = Result<Duration, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Repetitions for the sub-millisecond criteria; the fastest run counts, so
/// scheduler noise does not decide the outcome.
const REPEATS: usize = 5;

fn timed_best<T>(f: impl Fn() -> T) -> (T, Duration) {
    let (mut out, mut best) = timed(&f);
    for _ in 1..REPEATS {
        let (next, t) = timed(&f);
        if t < best {
            (out, best) = (next, t);
        }
    }
    (out, best)
}

/// `count` values drawn from a fixed-seed generator, so every run checks the
/// same samples.
fn samples<S: Strategy>(strategy: &S, count: u32) -> Vec<S::Value> {
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    (0..count).map(|_| strategy.new_tree(&mut runner).expect("strategies here never reject").current()).collect()
}

fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .filter(|&c| m[0][c] != 0)
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * cofactor_det(&minor)
        })
        .sum()
}

fn square_table() -> Outcome {
    let (rows, elapsed) = timed_best(|| {
        (0..=6usize)
            .map(|k| {
                let g = direct_sum(&GramMatrix::nodal(k), &GramMatrix::scalar(9 - k as i64));
                (determinant(&g).abs(), square_discriminant_test(&g))
            })
            .collect::<Vec<_>>()
    });
    for (k, ((det, square), expected)) in rows.into_iter().zip([9, 16, 28, 48, 80, 128, 192]).enumerate() {
        ensure!(det == BigInt::from(expected), "k = {k}: |det| = {det}, expected {expected}");
        let square = square.map_err(|e| e.to_string())?;
        ensure!(square == (k <= 1), "k = {k}: square flag {square}");
    }
    Ok(elapsed)
}

fn max_nodal_enumeration() -> Outcome {
    let (found, elapsed) = timed_best(|| bmy_solution_enumerator(&BigRational::new(1.into(), 2.into()), 1));
    ensure!(found.len() == 1, "expected one solution, got {}", found.len());
    let x = found[0];
    ensure!((x.q, x.pg, x.h11) == (0, 0, 1), "got {x:?}");
    ensure!(x.ksq() == 9 && x.euler() == 3, "K^2 = {}, e = {}", x.ksq(), x.euler());
    Ok(elapsed)
}

fn near_max_enumeration() -> Outcome {
    let (found, elapsed) = timed_best(|| bmy_solution_enumerator(&int(5), 2));
    let got: Vec<(u64, u64, u64)> = found.iter().map(|x| (x.q, x.pg, x.h11)).collect();
    let mut expected: Vec<(u64, u64, u64)> = (2..=10).map(|h| (0, 0, h)).collect();
    expected.extend([(0, 1, 2), (1, 0, 2)]);
    expected.sort();
    ensure!(got == expected, "got {got:?}");
    Ok(elapsed)
}

fn mod2_sweep() -> Outcome {
    let (reports, elapsed) =
        timed(|| (0..=8usize).map(|mu| nodal_embedding_obstruction(mu, mu + 2)).collect::<Vec<_>>());
    for (mu, r) in reports.into_iter().enumerate() {
        let r = r.map_err(|e| e.to_string())?;
        ensure!(r.feasible == !matches!(mu, 3 | 5), "mu = {mu}: feasible = {}", r.feasible);
        if let Some(w) = &r.witness {
            ensure!(w.dimension() == r.min_kernel_dim, "mu = {mu}: witness dimension {}", w.dimension());
            ensure!(w.elements().count() == 1 << w.dimension(), "mu = {mu}: basis is dependent");
            ensure!(w.elements().all(|v| v.weight() % 4 == 0), "mu = {mu}: witness not doubly even");
        }
        if (6..=8).contains(&mu) {
            ensure!(r.witness.as_ref().is_some_and(|w| w.dimension() > 0), "mu = {mu}: no nontrivial witness");
        }
    }
    Ok(elapsed)
}

fn discrepancies() -> Outcome {
    let mut total = Duration::ZERO;
    let node = solve_discrepancies(&[-2]).map_err(|e| e.to_string())?;
    ensure!(node.discrepancies == [BigRational::zero()], "[-2] gives {:?}", node.discrepancies);

    let chains = proptest::collection::vec(prop_oneof![3 => Just(-2i64), 1 => -7i64..=-3], 1..=8);
    for b in samples(&chains, CHAIN_SAMPLES) {
        let (s, dt) = timed(|| solve_discrepancies(&b));
        total += dt;
        let s = s.map_err(|e| format!("{b:?}: {e}"))?;
        let n = b.len();
        let m: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => b[i] as i128,
                        1 => 1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let det = cofactor_det(&m);
        for i in 0..n {
            let mut mi = m.clone();
            for (row, &bj) in mi.iter_mut().zip(&b) {
                row[i] = 2 + bj as i128;
            }
            let cramer = BigRational::new(BigInt::from(cofactor_det(&mi)), BigInt::from(det));
            ensure!(s.discrepancies[i] == cramer, "{b:?}: a_{i} = {} but Cramer gives {cramer}", s.discrepancies[i]);
        }
        let all_nodal = b.iter().all(|&x| x == -2);
        let all_zero = s.discrepancies.iter().all(Zero::is_zero);
        let some_positive = s.discrepancies.iter().any(|a| a.is_positive());
        ensure!(all_nodal == all_zero && all_nodal != some_positive, "{b:?}: discrepancies {:?}", s.discrepancies);
        ensure!(
            s.discrepancies.iter().all(|a| !a.is_negative() && *a < BigRational::one()),
            "{b:?}: discrepancy outside [0, 1)"
        );
    }
    for len in 1..=8 {
        let s = solve_discrepancies(&vec![-2; len]).map_err(|e| e.to_string())?;
        ensure!(s.is_rational_double_point(), "A_{len} has nonzero discrepancy");
    }
    Ok(total)
}

fn mis_by_subsets(g: &DualGraph) -> usize {
    let n = g.minus_two.len();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || g.minus_two[i]))
        .filter(|&s| g.edges.iter().all(|&(a, b)| s >> a & 1 == 0 || s >> b & 1 == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn fibre_budget() -> Outcome {
    let (found, elapsed) = timed(|| elliptic_fibre_search(12, 8));
    ensure!(found.len() == 1, "expected a unique multiset, got {}", found.len());
    let kinds: Vec<FibreType> = found[0].iter().map(|f| f.kind).collect();
    ensure!(kinds == [FibreType::IStar(0); 2], "got {kinds:?}");
    for t in FibreType::singular_types_up_to(12) {
        let f = KodairaFibre::new(t);
        let oracle = mis_by_subsets(&t.dual_graph());
        ensure!(f.nodal_capacity == oracle, "{t}: capacity {} but subset oracle gives {oracle}", f.nodal_capacity);
    }
    Ok(elapsed)
}

fn bmy_equality() -> Outcome {
    let ball = OrbifoldSurface { euler: 6, singularities: vec![], ksq: Some(int(18)) };
    let fpp = OrbifoldSurface { euler: 3, singularities: vec![], ksq: Some(int(9)) };
    let ((a, b), elapsed) =
        timed_best(|| (bmy_check(&ball, CanonicalClass::Nef), bmy_check(&fpp, CanonicalClass::Nef)));
    let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
    ensure!(a == BmyVerdict::Equality, "(18, 6) gives {a:?}");
    ensure!(b == BmyVerdict::Equality, "(9, 3) gives {b:?}");
    Ok(elapsed)
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("nodal").chain(args.iter().copied());
    let code = nodal::run(argv, &mut std::io::empty(), &mut out, &mut err);
    ensure!(code == 0, "{args:?} exited {code}: {}", String::from_utf8_lossy(&err));
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn tags(report: &Value) -> Vec<String> {
    report["verdict"]["cases"]
        .as_array()
        .map(|cases| cases.iter().filter_map(|c| c["tag"].as_str().map(String::from)).collect())
        .unwrap_or_default()
}

fn replays() -> Outcome {
    let mut total = Duration::ZERO;
    let mut reports = Vec::new();
    for id in ["theorem-1.3", "cor-1.2", "theorem-1.4"] {
        let (first, dt) = timed(|| run_cli(&["replay", id]));
        total += dt;
        let first = first?;
        let second = run_cli(&["replay", id])?;
        ensure!(first == second, "{id}: reports differ between runs");
        reports.push(serde_json::from_str::<Value>(&first).map_err(|e| e.to_string())?);
    }
    ensure!(tags(&reports[0]) == ["FPP", "P2", "F2"], "theorem-1.3 gives {:?}", tags(&reports[0]));
    ensure!(tags(&reports[1]) == ["P2", "FPP", "cone"], "cor-1.2 gives {:?}", tags(&reports[1]));

    let cases = reports[2]["verdict"]["cases"].as_array().cloned().unwrap_or_default();
    let mut distinct = tags(&reports[2]);
    distinct.sort();
    distinct.dedup();
    let expected = ["1-a", "1-b", "1-c", "1-d", "1-e", "1-f", "2-a", "2-b", "2-c", "2-d", "2-e", "2-f"];
    ensure!(distinct == expected, "theorem-1.4 gives {distinct:?}");
    for c in cases.iter().filter(|c| c["tag"] == "1-f") {
        let ksq = c["ksq"].as_i64().ok_or("1-f without K^2")?;
        let want = match ksq {
            2 | 4 | 6 | 8 => "exists",
            1 | 7 => "open",
            _ => return Err(format!("unexpected 1-f with K^2 = {ksq}")),
        };
        ensure!(c["existence"] == want, "1-f K^2 = {ksq}: {} instead of {want}", c["existence"]);
    }
    let mut ksq: Vec<i64> = cases.iter().filter(|c| c["tag"] == "1-f").filter_map(|c| c["ksq"].as_i64()).collect();
    ksq.sort();
    ensure!(ksq == [1, 2, 4, 6, 7, 8], "1-f K^2 values {ksq:?}");
    Ok(total)
}

fn lattice_suite() -> Outcome {
    let matrices = (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(-20i128..=20, n * (n + 1) / 2).prop_map(move |upper| {
            let mut m = vec![vec![0i128; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = it.next().unwrap();
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            m
        })
    });
    let drawn = samples(&matrices, LATTICE_SAMPLES);
    ensure!(drawn.len() == LATTICE_SAMPLES as usize, "drew {} samples", drawn.len());
    let start = Instant::now();
    for m in &drawn {
        let rows: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
        let g = GramMatrix::from_i64_rows(&rows).map_err(|e| e.to_string())?;
        let det = determinant(&g);
        ensure!(det == BigInt::from(cofactor_det(m)), "{m:?}: Bareiss {det} differs from cofactor expansion");
        let sig = signature(&g);
        ensure!(
            sig.positive + sig.negative + sig.zero == m.len(),
            "{m:?}: signature {sig} does not sum to {}",
            m.len()
        );
        if sig.is_nondegenerate() {
            let product: BigInt = smith_normal_form(&g).elementary_divisors.iter().product();
            ensure!(product == det.abs(), "{m:?}: Smith product {product} vs |det| {}", det.abs());
        }
    }
    Ok(start.elapsed())
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("square-determinant table", ONE_MS, square_table),
        ("maximal nodal enumeration", ONE_MS, max_nodal_enumeration),
        ("near-maximal enumeration", ONE_MS, near_max_enumeration),
        ("mod-2 obstruction sweep", FIVE_S, mod2_sweep),
        ("discrepancy correctness", ONE_S, discrepancies),
        ("elliptic fibre budget", FIVE_S, fibre_budget),
        ("BMY equality detection", ONE_MS, bmy_equality),
        ("end-to-end replays", REPLAY_BUDGET, replays),
        ("lattice property suite", TEN_S, lattice_suite),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let line = match check() {
            Ok(t) if t <= *budget => format!("PASS  {}  {name:<27} {:>10.3?} (budget {budget:?})", i + 1, t),
            Ok(t) => format!("FAIL  {}  {name:<27} {:>10.3?} exceeds budget {budget:?}", i + 1, t),
            Err(e) => format!("FAIL  {}  {name:<27} {e}", i + 1),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
