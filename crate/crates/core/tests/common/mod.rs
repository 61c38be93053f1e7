//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use oddtown_core::constructions::{
    build_b22_pair, build_cover_33, build_cover_43, build_cover_t2, build_partition_cover,
    trivial_gp_cover,
};
use oddtown_core::covers::{cover_to_tuple, permute_gp_cover, verify_mod2_cover, Mod2Cover};
use oddtown_core::search::{min_mod2_cover, CoverSearch, SearchConfig};
use oddtown_core::set_systems::{SetFamily, SubsetBits, TupleSystem};
use rand::Rng;

/// Valid covers with `2 <= t <= k <= 4` and `n <= 4`, labelled.
pub fn valid_covers() -> Vec<(String, Mod2Cover)> {
    let mut out = Vec::new();
    for k in 2..=4 {
        for n in 2..=4 {
            out.push((format!("diagonal k={k} n={n}"), build_cover_t2(k, n).unwrap()));
        }
    }
    for n in 2..=4 {
        out.push((format!("cover33 n={n}"), build_cover_33(n).unwrap()));
        out.push((format!("cover43 n={n}"), build_cover_43(n).unwrap()));
    }
    for k in 2..=4 {
        for t in 2..=k {
            for n in 2..=4 {
                out.push((
                    format!("partition k={k} t={t} n={n}"),
                    build_partition_cover(k, t, n).unwrap(),
                ));
            }
        }
    }
    for (k, n) in [(2, 3), (2, 4), (3, 3), (3, 4), (4, 4)] {
        out.push((
            format!("permuted k={k} n={n}"),
            permute_gp_cover(&trivial_gp_cover(n, k).unwrap()).unwrap(),
        ));
    }
    for (k, t, n) in [(2, 2, 2), (2, 2, 3), (2, 2, 4), (3, 2, 3), (3, 3, 3)] {
        let run = min_mod2_cover(k, t, n, &SearchConfig::default()).unwrap();
        if let CoverSearch::Exact { cover, .. } = run.outcome {
            out.push((format!("optimal k={k} t={t} n={n}"), cover));
        }
    }
    for (name, c) in &out {
        assert!(verify_mod2_cover(c).valid, "fixture {name} is invalid");
    }
    out
}

/// Valid Bollobás tuples: the images of [`valid_covers`] plus extremal pairs.
pub fn valid_tuples() -> Vec<(String, TupleSystem)> {
    let mut out: Vec<(String, TupleSystem)> = valid_covers()
        .into_iter()
        .map(|(name, c)| (name, cover_to_tuple(&c).unwrap()))
        .collect();
    for n in (2..=12).step_by(2) {
        out.push((format!("pair n={n}"), build_b22_pair(n).unwrap()));
    }
    out
}

fn random_subset(rng: &mut impl Rng, n: usize) -> SubsetBits {
    SubsetBits::from_elements(n, (1..=n).filter(|_| rng.gen_bool(0.5))).unwrap()
}

/// Greedy oddtown family: random odd sets kept while all pairwise
/// intersections stay even.
pub fn greedy_oddtown(rng: &mut impl Rng, n: usize, attempts: usize) -> SetFamily {
    let mut sets: Vec<SubsetBits> = Vec::new();
    for _ in 0..attempts {
        let s = random_subset(rng, n);
        if s.len() % 2 == 1 && sets.iter().all(|x| x.intersection_len(&s) % 2 == 0) {
            sets.push(s);
        }
    }
    SetFamily::new(n, sets).unwrap()
}

/// Greedy skew-oddtown instance: random pairs appended while the diagonal
/// stays odd and every earlier `A_i ∩ B_new` stays even.
pub fn greedy_skew(rng: &mut impl Rng, n: usize, attempts: usize) -> (SetFamily, SetFamily) {
    let (mut a, mut b): (Vec<SubsetBits>, Vec<SubsetBits>) = (Vec::new(), Vec::new());
    for _ in 0..attempts {
        let (x, y) = (random_subset(rng, n), random_subset(rng, n));
        if x.intersection_len(&y) % 2 == 1 && a.iter().all(|ai| ai.intersection_len(&y) % 2 == 0) {
            a.push(x);
            b.push(y);
        }
    }
    (SetFamily::new(n, a).unwrap(), SetFamily::new(n, b).unwrap())
}

/// Greedy (2,2)-tuple: pairs appended while the diagonal stays even and
/// every cross intersection with earlier pairs stays odd.
pub fn greedy_pairs(rng: &mut impl Rng, n: usize, attempts: usize) -> TupleSystem {
    let (mut a, mut b): (Vec<SubsetBits>, Vec<SubsetBits>) = (Vec::new(), Vec::new());
    for _ in 0..attempts {
        let (x, y) = (random_subset(rng, n), random_subset(rng, n));
        let ok = x.intersection_len(&y) % 2 == 0
            && a.iter().all(|ai| ai.intersection_len(&y) % 2 == 1)
            && b.iter().all(|bi| x.intersection_len(bi) % 2 == 1);
        if ok {
            a.push(x);
            b.push(y);
        }
    }
    TupleSystem::new(2, 2, n, vec![a, b]).unwrap()
}

/// Adds a fresh element `n+1` to `A_i` and `B_j` only, flipping the parity
/// of `|A_i ∩ B_j|` and no other cross intersection (0-based `i`, `j`).
pub fn flip_one_parity(a: &SetFamily, b: &SetFamily, i: usize, j: usize) -> (SetFamily, SetFamily) {
    let n = a.ground_size() + 1;
    let lift = |f: &SetFamily, target: usize| {
        let sets = f
            .sets()
            .iter()
            .enumerate()
            .map(|(x, s)| {
                let mut s = s.with_ground(n);
                if x == target {
                    s.insert(n).unwrap();
                }
                s
            })
            .collect();
        SetFamily::new(n, sets).unwrap()
    };
    (lift(a, i), lift(b, j))
}
