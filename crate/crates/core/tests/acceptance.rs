//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oddtown_core::constructions::{
    build_b22_pair, build_cover_33, build_cover_43, build_cover_t2, build_kt_oddtown_family,
    build_partition_cover, partition_cover_size, reduce_triple_b33_at, reduce_tuple_to_pair,
    reduced_pair_count, trivial_gp_cover,
};
use oddtown_core::covers::{
    cells, cover_to_ok_biclique_cover, cover_to_tuple, is_target_edge, link_cover,
    parity_difference, permute_gp_cover, tuple_to_cover, verify_mod2_cover,
    verify_ok_biclique_cover,
};
use oddtown_core::gf2::{is_linearly_independent, rank_gf2, rank_gfp};
use oddtown_core::ranks::{
    build_inclusion_matrix, cover_size_lower_bound, kneser_rank_lower_bound, wilson_rank,
    KneserGraphView,
};
use oddtown_core::search::{
    bounds_table, exact_b, galois_violations, min_mod2_cover, BValue, CoverSearch, SearchConfig,
    TableConfig,
};
use oddtown_core::set_systems::{
    oddtown_certificate, reduce_33_oddtown, verify_bollobas_tuple, verify_oddtown,
    verify_skew_oddtown, IndependenceCertificate, SetFamily, TupleSystem,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure!(
        elapsed <= limit,
        "{what} took {:.1}s, over the {:.0}s limit",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    Ok(())
}

fn oddtown_bound() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd);
    let mut largest = 0;
    for trial in 0..200 {
        let n = 1 + trial % 16;
        let f = common::greedy_oddtown(&mut rng, n, 400);
        ensure!(verify_oddtown(&f).valid, "greedy family {trial} is not oddtown");
        ensure!(f.len() <= n, "family of size {} on [{n}]", f.len());
        ensure!(
            is_linearly_independent(f.sets()).map_err(|e| e.to_string())?,
            "dependent oddtown family on [{n}]"
        );
        match oddtown_certificate(&f).map_err(|e| e.to_string())? {
            IndependenceCertificate::Independent { rank } => ensure!(rank == f.len(), "rank mismatch"),
            IndependenceCertificate::Dependent { combination } => {
                return Err(format!("dependency {combination:?} in a valid family"))
            }
        }
        largest = largest.max(f.len());
    }
    within(start.elapsed(), Duration::from_secs(5), "200 families")?;
    Ok(format!("200 families, largest {largest}, all independent"))
}

fn skew_oddtown() -> Outcome {
    for n in 1..=10 {
        let diag = SetFamily::from_lists(n, (1..=n).map(|i| vec![i])).unwrap();
        ensure!(
            verify_skew_oddtown(&diag, &diag).unwrap().valid,
            "diagonal singletons on [{n}] rejected"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e3);
    let mut instances = 0;
    let mut mutations = 0;
    for trial in 0..100 {
        let n = 2 + trial % 9;
        let (a, b) = common::greedy_skew(&mut rng, n, 300);
        ensure!(verify_skew_oddtown(&a, &b).unwrap().valid, "greedy instance invalid");
        ensure!(a.len() <= n, "valid instance with m={} > n={n}", a.len());
        instances += 1;
        for i in 0..a.len() {
            for j in 0..a.len() {
                let (ma, mb) = common::flip_one_parity(&a, &b, i, j);
                let report = verify_skew_oddtown(&ma, &mb).unwrap();
                if i <= j {
                    ensure!(
                        !report.valid && report.violations[0].index == vec![i + 1, j + 1],
                        "flipping |A_{} ∩ B_{}| went undetected",
                        i + 1,
                        j + 1
                    );
                    mutations += 1;
                } else {
                    ensure!(report.valid, "unconstrained pair ({}, {}) flagged", i + 1, j + 1);
                }
            }
        }
    }
    Ok(format!("{instances} instances, {mutations} constrained flips all detected"))
}

fn b22_values() -> Outcome {
    for n in (2..=12).step_by(2) {
        let t = build_b22_pair(n).unwrap();
        ensure!(verify_bollobas_tuple(&t).valid, "extremal pair on [{n}] invalid");
        ensure!(t.m() == n + 1, "extremal pair on [{n}] has m={}", t.m());
    }
    let mut tuples: Vec<(String, TupleSystem)> = common::valid_tuples()
        .into_iter()
        .filter(|(_, t)| (t.k(), t.t()) == (2, 2))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb22);
    for trial in 0..100 {
        tuples.push((format!("greedy {trial}"), common::greedy_pairs(&mut rng, 1 + trial % 10, 400)));
    }
    for (name, t) in &tuples {
        ensure!(verify_bollobas_tuple(t).valid, "{name} invalid");
        ensure!(t.m() <= t.n() + 1, "{name}: m={} > n+1={}", t.m(), t.n() + 1);
    }
    let config = SearchConfig::default();
    for (m, expected) in [(3, 3), (4, 5)] {
        let start = Instant::now();
        let got = exact_b(2, 2, m, &config).map_err(|e| e.to_string())?;
        ensure!(got == BValue::Exact(expected), "b(2,2,{m}) = {got:?}, expected {expected}");
        within(start.elapsed(), Duration::from_secs(60), "exact b")?;
    }
    Ok(format!(
        "pairs n<=12 valid, {} tuples within m<=n+1, b(3)=3, b(4)=5",
        tuples.len()
    ))
}

fn f22_values() -> Outcome {
    let start = Instant::now();
    let exhaustive = SearchConfig {
        symmetry: false,
        rank_bound: false,
        ..SearchConfig::default()
    };
    for (n, f) in [(2, 2), (3, 2), (4, 4)] {
        for config in [SearchConfig::default(), exhaustive] {
            let run = min_mod2_cover(2, 2, n, &config).map_err(|e| e.to_string())?;
            ensure!(run.outcome.exact() == Some(f), "f(2,2,{n}) = {:?}", run.outcome);
            let below = SearchConfig {
                budget: f - 1,
                ..config
            };
            match min_mod2_cover(2, 2, n, &below).map_err(|e| e.to_string())?.outcome {
                CoverSearch::ExceedsBudget { lower_bound } if lower_bound == f => {}
                other => return Err(format!("refutation below {f} at n={n} failed: {other:?}")),
            }
        }
    }
    let config = SearchConfig::default();
    let mut f_values = Vec::new();
    for n in 1..=6 {
        let run = min_mod2_cover(2, 2, n, &config).map_err(|e| e.to_string())?;
        let f = run.outcome.exact().ok_or(format!("no exact f(2,2,{n})"))?;
        f_values.push((n, f));
    }
    let mut b_values = Vec::new();
    for m in 1..=5 {
        match exact_b(2, 2, m, &config).map_err(|e| e.to_string())? {
            BValue::Exact(b) => b_values.push((m, b)),
            other => return Err(format!("b(2,2,{m}) not exact: {other:?}")),
        }
    }
    let bad = galois_violations(&f_values, &b_values);
    ensure!(bad.is_empty(), "Galois connection fails at {bad:?}");
    let table = bounds_table(2, 2, 2..=6, &TableConfig::default()).map_err(|e| e.to_string())?;
    ensure!(
        table.notes.iter().any(|n| n.starts_with("erratum")),
        "table carries no erratum note"
    );
    within(start.elapsed(), Duration::from_secs(300), "f(2,2) searches")?;
    let fs: Vec<String> = f_values.iter().map(|(_, f)| f.to_string()).collect();
    Ok(format!("f(1..6) = {}, Galois grid 6x5 consistent", fs.join(",")))
}

fn correspondence() -> Outcome {
    let covers = common::valid_covers();
    let mut checked = 0;
    for (name, c) in &covers {
        if !(2..=4).contains(&c.k()) || !(2..=4).contains(&c.n()) {
            continue;
        }
        let t = cover_to_tuple(c).unwrap();
        ensure!(verify_bollobas_tuple(&t).valid, "{name}: tuple invalid");
        let back = tuple_to_cover(&t).unwrap();
        ensure!(back.dropped.is_empty(), "{name}: products dropped on the way back");
        let diff = parity_difference(c, &back.cover).unwrap();
        ensure!(diff.is_empty(), "{name}: parity differs at {:?}", diff[0]);
        checked += 1;
    }
    ensure!(checked >= 10, "only {checked} fixture covers");
    Ok(format!("{checked} covers round-trip with identical parity"))
}

fn construction_validity() -> Outcome {
    let limit = Duration::from_secs(30);
    let start = Instant::now();
    for n in 1..=5 {
        let c = build_cover_33(n).unwrap();
        ensure!(c.len() == 3 * n + 1, "cover33({n}) has size {}", c.len());
        ensure!(verify_mod2_cover(&c).valid, "cover33({n}) invalid");
    }
    within(start.elapsed(), limit, "cover33")?;
    let start = Instant::now();
    for k in 2..=5 {
        for n in 1..=5 {
            let c = build_cover_t2(k, n).unwrap();
            ensure!(c.len() == n + 1, "diagonal({k},{n}) has size {}", c.len());
            ensure!(verify_mod2_cover(&c).valid, "diagonal({k},{n}) invalid");
        }
    }
    within(start.elapsed(), limit, "diagonal covers")?;
    let start = Instant::now();
    for n in 1..=4 {
        let c = build_cover_43(n).unwrap();
        ensure!(verify_mod2_cover(&c).valid, "cover43({n}) invalid");
        // Products with an empty part are not representable, so the four
        // free-singleton families vanish at n = 1.
        let expected = if n == 1 { 2 } else { 3 * n * n + 2 * n + 1 };
        ensure!(c.len() == expected, "cover43({n}) has size {}", c.len());
        ensure!(c.len() <= 3 * n * n + 4 * n + 1, "cover43({n}) above 3n^2+4n+1");
    }
    within(start.elapsed(), limit, "cover43")?;
    let start = Instant::now();
    let mut count = 0;
    for k in 2..=5 {
        for t in 2..=k {
            for n in 1..=4 {
                let c = build_partition_cover(k, t, n).unwrap();
                ensure!(verify_mod2_cover(&c).valid, "partition({k},{t},{n}) invalid");
                ensure!(
                    c.len() as u128 == partition_cover_size(k, t, n).unwrap(),
                    "partition({k},{t},{n}) size mismatch"
                );
                count += 1;
            }
        }
    }
    within(start.elapsed(), limit, "partition covers")?;
    Ok(format!("cover33, diagonal, cover43 and {count} partition covers valid"))
}

fn kneser_pipeline() -> Outcome {
    let start = Instant::now();
    let gp = trivial_gp_cover(5, 4).unwrap();
    let c = permute_gp_cover(&gp).unwrap();
    ensure!(c.len() == 120, "permuted cover has size {}", c.len());
    let table = c.coverage_table();
    for (i, idx) in cells(5, 4).enumerate() {
        ensure!(
            table[i] == is_target_edge(&idx, 4) as u32,
            "cell {idx:?} covered {} times",
            table[i]
        );
    }
    let b = cover_to_ok_biclique_cover(&c).unwrap();
    ensure!(verify_ok_biclique_cover(&b).valid, "biclique image invalid");
    let lb = cover_size_lower_bound(5, 2).unwrap();
    ensure!(lb == 3, "rank bound is {lb}");
    ensure!(c.len() >= lb && b.len() >= lb, "sizes below the rank bound");
    for (name, cover) in common::valid_covers() {
        if cover.k() == 4 && cover.t() == 4 && cover.n() >= 4 {
            let lb = cover_size_lower_bound(cover.n(), 2).unwrap();
            ensure!(cover.len() >= lb, "{name} below the rank bound {lb}");
        }
    }
    let h33 = [
        ("cover33", build_cover_33(3).unwrap()),
        ("permuted", permute_gp_cover(&trivial_gp_cover(3, 3).unwrap()).unwrap()),
    ];
    for (name, cover) in h33 {
        let link = link_cover(&cover).unwrap();
        ensure!((link.k(), link.n()) == (2, 2), "{name}: link has wrong shape");
        ensure!(verify_mod2_cover(&link).valid, "{name}: link invalid");
    }
    within(start.elapsed(), Duration::from_secs(60), "pipeline")?;
    Ok(format!("120 products exact once, {} bicliques valid, links valid", b.len()))
}

fn wilson_oracle() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 0..=12 {
        for l in 0..=n {
            for k in 0..=l.min(n - l) {
                let m = build_inclusion_matrix(n, k, l).unwrap();
                for p in [2u64, 3, 5] {
                    let direct = if p == 2 {
                        rank_gf2(&m.matrix)
                    } else {
                        rank_gfp(&m.to_gfp(p).unwrap())
                    };
                    let formula = wilson_rank(n, k, l, p).unwrap();
                    ensure!(
                        formula == direct as u128,
                        "M({n},{k},{l}) mod {p}: formula {formula}, elimination {direct}"
                    );
                    cases += 1;
                }
            }
        }
    }
    let r = rank_gf2(&build_inclusion_matrix(3, 1, 2).unwrap().matrix);
    ensure!(r == 2, "rank M(3,1,2) = {r}");
    let r = rank_gf2(&build_inclusion_matrix(5, 2, 3).unwrap().matrix);
    ensure!(r == 6, "rank M(5,2,3) = {r}");
    let r = rank_gf2(&KneserGraphView::new(28, 2).unwrap().adjacency());
    ensure!(r == 378, "rank A(K(28,2)) = {r}");
    let lb = kneser_rank_lower_bound(28, 2).unwrap();
    ensure!(lb == 378, "Kneser lower bound {lb}");
    within(start.elapsed(), Duration::from_secs(600), "Wilson oracle")?;
    Ok(format!("{cases} cases agree; K(28,2) has full rank 378"))
}

fn reductions() -> Outcome {
    let f = build_kt_oddtown_family(3, 4).unwrap();
    let r = reduce_33_oddtown(&f).unwrap();
    ensure!(r.input_report.valid, "input family not (3,3)-oddtown");
    ensure!(r.family.len() == 3, "reduction has {} sets", r.family.len());
    ensure!(verify_oddtown(&r.family).valid, "reduced family not oddtown");

    let mut pairs = 0;
    for (name, t) in common::valid_tuples() {
        if (t.k(), t.t()) == (2, 2) {
            continue;
        }
        let (k, tt, m, g) = (t.k(), t.t(), t.m(), t.n());
        let need = if 2 * tt - 2 <= k { tt - 1 } else { k - tt + 1 + (2 * tt - k - 2) };
        if m >= need {
            let p = reduce_tuple_to_pair(&t).map_err(|e| format!("{name}: {e}"))?;
            ensure!(verify_bollobas_tuple(&p).valid, "{name}: reduced pair invalid");
            let count = reduced_pair_count(k, tt, m).unwrap();
            ensure!(p.m() as u128 == count, "{name}: {} pairs, expected {count}", p.m());
            ensure!(count <= g as u128 + 1, "{name}: {count} pairs on ground {g}");
            pairs += 1;
        }
        if (k, tt) == (3, 3) && m >= 2 {
            for anchor in 1..=m {
                let p = reduce_triple_b33_at(&t, anchor).map_err(|e| format!("{name}: {e}"))?;
                ensure!(verify_bollobas_tuple(&p).valid, "{name}: triple reduction invalid");
                ensure!(p.m() == m - 1 && p.m() <= g + 1, "{name}: triple reduction size");
            }
            pairs += 1;
        }
    }
    Ok(format!("oddtown reduction valid, {pairs} tuple reductions valid"))
}

fn bound_grid() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    let mut exact = 0;
    for k in 2..=5 {
        for t in 2..=k {
            let table = bounds_table(k, t, 1..=5, &TableConfig::default()).map_err(|e| e.to_string())?;
            let bad = table.violations();
            ensure!(bad.is_empty(), "{}", bad.join("; "));
            rows += table.rows.len();
            exact += table.rows.iter().filter(|r| r.exact.is_some()).count();
        }
    }
    Ok(format!(
        "{rows} rows, {exact} exact values, zero violations ({:.1}s)",
        start.elapsed().as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oddtown bound", oddtown_bound),
        ("skew oddtown", skew_oddtown),
        ("b22 values", b22_values),
        ("f22 exact values", f22_values),
        ("cover/tuple round trip", correspondence),
        ("construction validity", construction_validity),
        ("permutation and ordered Kneser pipeline", kneser_pipeline),
        ("Wilson rank oracle", wilson_oracle),
        ("pair reductions", reductions),
        ("bound grid", bound_grid),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
