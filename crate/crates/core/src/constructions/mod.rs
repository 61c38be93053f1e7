//! Explicit families, tuples and covers, and the reductions that map
//! (k,t)-tuples onto set pairs.

mod toolkit;

pub use toolkit::{
    binomial, binomial_signed, colex_rank, colex_subsets, factorial, falling_factorial,
    set_partitions, stirling2, PatternPartition,
};

use itertools::Itertools;

use crate::covers::{GpCover, GpProduct, KPartiteProduct, Mod2Cover};
use crate::error::{Error, Result};
use crate::set_systems::{verify_bollobas_tuple, SetFamily, SubsetBits, TupleSystem};

/// The extremal set pair: `A_i = {i}`, `B_i = [n] \ {i}` for `i ∈ [n]`,
/// and `A_{n+1} = B_{n+1} = [n]`.
pub fn build_b22_pair(n: usize) -> Result<TupleSystem> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::params(format!("n must be even and >= 2, got {n}")));
    }
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let s = SubsetBits::singleton(n, i)?;
        b.push(s.complement());
        a.push(s);
    }
    a.push(SubsetBits::full(n));
    b.push(SubsetBits::full(n));
    TupleSystem::new(2, 2, n, vec![a, b])
}

/// One failing parity condition of [`admissible_n`]: `C(n-d, t-1-d)` is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialWitness {
    pub d: usize,
    pub top: i64,
    pub bottom: i64,
    pub value: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub failing: Vec<BinomialWitness>,
}

/// Whether every `d`-wise intersection size `C(n-d, t-1-d)`, `1 <= d <= t-1`,
/// of the `(t-1)`-subset family is odd.
pub fn admissible_n(t: usize, n: usize) -> Result<Admissibility> {
    if t < 2 {
        return Err(Error::params("t must be at least 2"));
    }
    let mut failing = Vec::new();
    for d in 1..t {
        let (top, bottom) = (n as i64 - d as i64, (t - 1 - d) as i64);
        let value = binomial_signed(top, bottom)?;
        if value % 2 == 0 {
            failing.push(BinomialWitness {
                d,
                top,
                bottom,
                value,
            });
        }
    }
    Ok(Admissibility {
        admissible: failing.is_empty(),
        failing,
    })
}

/// `A_i = {A ∈ C([n], t-1) : i ∈ A}` for `i ∈ [n]`, on the ground set of all
/// `(t-1)`-subsets of `[n]` numbered in colex order.
pub fn build_kt_oddtown_family(t: usize, n: usize) -> Result<SetFamily> {
    let adm = admissible_n(t, n)?;
    if !adm.admissible {
        let list = adm
            .failing
            .iter()
            .map(|w| format!("C({},{})={}", w.top, w.bottom, w.value))
            .join(", ");
        return Err(Error::params(format!(
            "n={n} is not admissible for t={t}: even binomials {list}"
        )));
    }
    if n > 63 {
        return Err(Error::params("n must be at most 63"));
    }
    let ground = colex_subsets(n, t - 1);
    let g = ground.len();
    let sets = (0..n)
        .map(|i| {
            let members = ground
                .iter()
                .enumerate()
                .filter(|(_, &mask)| mask >> i & 1 == 1)
                .map(|(pos, _)| pos + 1);
            SubsetBits::from_elements(g, members)
        })
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(g, sets)
}

fn product(n: usize, parts: Vec<Vec<usize>>) -> Result<KPartiteProduct> {
    KPartiteProduct::from_lists(n, parts)
}

/// Exact-once products for the cells whose coincidence pattern is `pi`.
///
/// With a singleton block, the other blocks take all ordered injections of
/// distinct values and the first singleton block takes every remaining
/// value. Without one, every block is pinned.
pub fn pattern_products(pi: &PatternPartition, n: usize) -> Result<Vec<KPartiteProduct>> {
    let k = pi.k();
    let r = pi.block_count();
    let free = pi.first_singleton();
    let pinned: Vec<usize> = (0..r).filter(|&b| Some(b) != free).collect();
    let mut out = Vec::new();
    for values in (1..=n).permutations(pinned.len()) {
        let mut parts = vec![Vec::new(); k];
        for (&b, &v) in pinned.iter().zip(&values) {
            for &c in &pi.blocks()[b] {
                parts[c - 1] = vec![v];
            }
        }
        if let Some(b) = free {
            let rest: Vec<usize> = (1..=n).filter(|v| !values.contains(v)).collect();
            if rest.is_empty() {
                continue;
            }
            parts[pi.blocks()[b][0] - 1] = rest;
        }
        out.push(product(n, parts)?);
    }
    Ok(out)
}

/// Number of products [`pattern_products`] emits.
pub fn pattern_cost(pi: &PatternPartition, n: usize) -> Result<u128> {
    let r = pi.block_count() as u64;
    match pi.first_singleton() {
        Some(_) if (n as u64) < r => Ok(0),
        Some(_) => falling_factorial(n as u64, r - 1),
        None => falling_factorial(n as u64, r),
    }
}

fn check_kt(k: usize, t: usize) -> Result<()> {
    if t < 2 || t > k {
        return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
    }
    Ok(())
}

/// `[n]^k` plus exact-once covers of every coincidence pattern with at most
/// `t-1` blocks, so that non-edges are covered twice and edges once.
pub fn build_partition_cover(k: usize, t: usize, n: usize) -> Result<Mod2Cover> {
    check_kt(k, t)?;
    if n == 0 {
        return Err(Error::params("n must be at least 1"));
    }
    let mut products = Vec::new();
    for pi in set_partitions(k).iter().filter(|p| p.block_count() < t) {
        products.extend(pattern_products(pi, n)?);
    }
    products.push(KPartiteProduct::full(k, n)?);
    Mod2Cover::new(k, t, n, products)
}

/// `1 + Σ_{|π| <= t-1} cost(π)`.
pub fn partition_cover_size(k: usize, t: usize, n: usize) -> Result<u128> {
    set_partitions(k)
        .iter()
        .filter(|p| p.block_count() < t)
        .try_fold(1u128, |acc, p| Ok(acc + pattern_cost(p, n)?))
}

/// Diagonal singletons `{i}^k` plus `[n]^k`: the diagonal is covered twice
/// and every other cell once.
pub fn build_cover_t2(k: usize, n: usize) -> Result<Mod2Cover> {
    if k < 2 || n == 0 {
        return Err(Error::params(format!("need k >= 2 and n >= 1, got k={k}, n={n}")));
    }
    let mut products = (1..=n)
        .map(|i| product(n, vec![vec![i]; k]))
        .collect::<Result<Vec<_>>>()?;
    products.push(KPartiteProduct::full(k, n)?);
    Mod2Cover::new(k, 2, n, products)
}

/// `{i}×{i}×[n]`, `{i}×[n]×{i}`, `[n]×{i}×{i}` for every `i`, plus `[n]^3`.
pub fn build_cover_33(n: usize) -> Result<Mod2Cover> {
    if n == 0 {
        return Err(Error::params("n must be at least 1"));
    }
    let all: Vec<usize> = (1..=n).collect();
    let mut products = Vec::with_capacity(3 * n + 1);
    for i in 1..=n {
        products.push(product(n, vec![vec![i], vec![i], all.clone()])?);
        products.push(product(n, vec![vec![i], all.clone(), vec![i]])?);
        products.push(product(n, vec![all.clone(), vec![i], vec![i]])?);
    }
    products.push(KPartiteProduct::full(3, n)?);
    Mod2Cover::new(3, 3, n, products)
}

/// [`build_cover_t2`] for `k = 4`, plus exact-once covers of the seven
/// two-block patterns of `[4]`. At `n = 1` the `(3,1)` patterns are empty
/// and contribute no product.
pub fn build_cover_43(n: usize) -> Result<Mod2Cover> {
    let mut products = build_cover_t2(4, n)?.into_products();
    for pi in set_partitions(4).iter().filter(|p| p.block_count() == 2) {
        products.extend(pattern_products(pi, n)?);
    }
    Mod2Cover::new(4, 3, n, products)
}

/// All `C(n,k)` products of `k` distinct singletons.
pub fn trivial_gp_cover(n: usize, k: usize) -> Result<GpCover> {
    if k == 0 || k > n {
        return Err(Error::params(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let products = (1..=n)
        .combinations(k)
        .map(|c| GpProduct::from_lists(n, c.into_iter().map(|a| vec![a])))
        .collect::<Result<Vec<_>>>()?;
    GpCover::new(k, n, products)
}

/// The set pair obtained from a valid (k,t)-tuple.
///
/// When `2t-2 <= k`, pairs are indexed by `I = {i_1 < … < i_{t-1}} ⊆ [m]`:
/// `A_I` intersects families `1..t-1` at `i_1..i_{t-1}` and families
/// `2t-1..k` at `i_1`, while `B_I` intersects families `t..2t-2`. Every
/// cross intersection then has exactly `|I ∪ J|` distinct indices.
///
/// When `2t-2 > k`, families `1..a` with `a = 2t-k-2` are pinned at indices
/// `1..a`, and `I ⊆ [a+1, m]` has `s = k-t+1` elements: `A_I` uses families
/// `a+1..a+s` and `B_I` families `a+s+1..k`. The distinct count is
/// `a + |I ∪ J|`, which is `t-1` on the diagonal and at least `t` off it.
pub fn reduce_tuple_to_pair(tuple: &TupleSystem) -> Result<TupleSystem> {
    let (k, t, m, n) = (tuple.k(), tuple.t(), tuple.m(), tuple.n());
    let report = verify_bollobas_tuple(tuple);
    if !report.valid {
        return Err(Error::pre("input tuple is not a valid Bollobás tuple"));
    }
    let intersect = |terms: &[(usize, usize)]| {
        let mut acc = SubsetBits::full(n);
        for &(j, i) in terms {
            acc.and_assign(tuple.set(j, i));
        }
        acc
    };
    let mut a_sets = Vec::new();
    let mut b_sets = Vec::new();
    if 2 * t - 2 <= k {
        for idx in (1..=m).combinations(t - 1) {
            let mut a_terms: Vec<(usize, usize)> =
                idx.iter().enumerate().map(|(s, &i)| (s + 1, i)).collect();
            a_terms.extend((2 * t - 1..=k).map(|j| (j, idx[0])));
            let b_terms: Vec<(usize, usize)> =
                idx.iter().enumerate().map(|(s, &i)| (t + s, i)).collect();
            a_sets.push(intersect(&a_terms));
            b_sets.push(intersect(&b_terms));
        }
    } else {
        let a = 2 * t - k - 2;
        let s = k - t + 1;
        if m < a + s {
            return Err(Error::params(format!(
                "m={m} is too small: need m >= {} for (k,t)=({k},{t})",
                a + s
            )));
        }
        for idx in (a + 1..=m).combinations(s) {
            let mut a_terms: Vec<(usize, usize)> = (1..=a).map(|j| (j, j)).collect();
            a_terms.extend(idx.iter().enumerate().map(|(r, &i)| (a + 1 + r, i)));
            let b_terms: Vec<(usize, usize)> = idx
                .iter()
                .enumerate()
                .map(|(r, &i)| (a + s + 1 + r, i))
                .collect();
            a_sets.push(intersect(&a_terms));
            b_sets.push(intersect(&b_terms));
        }
    }
    TupleSystem::new(2, 2, n, vec![a_sets, b_sets])
}

/// Number of pairs [`reduce_tuple_to_pair`] produces from a size-`m` tuple.
pub fn reduced_pair_count(k: usize, t: usize, m: usize) -> Result<u128> {
    check_kt(k, t)?;
    if 2 * t - 2 <= k {
        binomial(m as u64, (t - 1) as u64)
    } else {
        let a = 2 * t - k - 2;
        binomial(m.saturating_sub(a) as u64, (k - t + 1) as u64)
    }
}

pub fn reduce_triple_b33(tuple: &TupleSystem) -> Result<TupleSystem> {
    reduce_triple_b33_at(tuple, 1)
}

/// `F_1 = {A_{1,a} ∩ A_{2,i}}`, `F_2 = {A_{1,a} ∩ A_{3,i}}` over `i != a`.
pub fn reduce_triple_b33_at(tuple: &TupleSystem, anchor: usize) -> Result<TupleSystem> {
    if tuple.k() != 3 || tuple.t() != 3 {
        return Err(Error::params("expected a (3,3)-tuple"));
    }
    if tuple.m() < 2 {
        return Err(Error::params("the triple reduction needs m >= 2"));
    }
    if anchor == 0 || anchor > tuple.m() {
        return Err(Error::params(format!("anchor {anchor} out of range")));
    }
    if !verify_bollobas_tuple(tuple).valid {
        return Err(Error::pre("input tuple is not a valid Bollobás tuple"));
    }
    let pin = tuple.set(1, anchor);
    let side = |j: usize| -> Vec<SubsetBits> {
        (1..=tuple.m())
            .filter(|&i| i != anchor)
            .map(|i| {
                let mut s = pin.clone();
                s.and_assign(tuple.set(j, i));
                s
            })
            .collect()
    };
    TupleSystem::new(2, 2, tuple.n(), vec![side(2), side(3)])
}
