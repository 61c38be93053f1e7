//! Inclusion matrices, Kneser graphs and their ranks over small prime fields.
//!
//! Subsets are indexed colexicographically everywhere in this module.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{binomial, binomial_signed, colex_subsets, falling_factorial};
use crate::error::{Error, Result};
use crate::gf2::{self, check_prime, Gf2Matrix, GfpMatrix};
use crate::par;

/// `C(n, k) mod p` from the base-`p` digits of `n` and `k`.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> Result<u64> {
    check_prime(p)?;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return Ok(0);
        }
        acc = acc * (binomial(a, b)? % p as u128) as u64 % p;
        n /= p;
        k /= p;
    }
    Ok(acc)
}

fn subset_limit(n: usize) -> Result<()> {
    if n > 63 {
        return Err(Error::params(format!("n = {n} exceeds the supported 63")));
    }
    Ok(())
}

/// `M_{n,k,l}`: rows are `k`-subsets, columns `l`-subsets, entry 1 iff the
/// row subset is contained in the column subset.
#[derive(Clone, Debug)]
pub struct InclusionMatrix {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub matrix: Gf2Matrix,
}

pub fn build_inclusion_matrix(n: usize, k: usize, l: usize) -> Result<InclusionMatrix> {
    subset_limit(n)?;
    if k > n || l > n {
        return Err(Error::params(format!("need k, l <= n, got n={n}, k={k}, l={l}")));
    }
    let rows = colex_subsets(n, k);
    let cols = colex_subsets(n, l);
    let matrix = bitmask_matrix(&rows, &cols, |r, c| r & !c == 0);
    Ok(InclusionMatrix { n, k, l, matrix })
}

fn bitmask_matrix(rows: &[u64], cols: &[u64], rel: impl Fn(u64, u64) -> bool + Sync) -> Gf2Matrix {
    let built = par::map_slice(rows, |&r| {
        gf2::BitVector::from_bools(&cols.iter().map(|&c| rel(r, c)).collect::<Vec<_>>())
    });
    Gf2Matrix::from_rows(cols.len(), &built).expect("row lengths agree")
}

impl InclusionMatrix {
    pub fn rank_gf2(&self) -> usize {
        self.matrix.rank()
    }

    pub fn to_gfp(&self, p: u64) -> Result<GfpMatrix> {
        GfpMatrix::from_gf2(&self.matrix, p)
    }

    pub fn rank_mod(&self, p: u64) -> Result<usize> {
        if p == 2 {
            check_prime(p)?;
            return Ok(self.rank_gf2());
        }
        Ok(self.to_gfp(p)?.rank())
    }
}

/// `K_{n:k}`: `k`-subsets of `[n]`, adjacent iff disjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KneserGraphView {
    pub n: usize,
    pub k: usize,
}

impl KneserGraphView {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        subset_limit(n)?;
        if k > n {
            return Err(Error::params(format!("k = {k} exceeds n = {n}")));
        }
        Ok(KneserGraphView { n, k })
    }

    pub fn vertices(&self) -> Vec<u64> {
        colex_subsets(self.n, self.k)
    }

    pub fn adjacency(&self) -> Gf2Matrix {
        let v = self.vertices();
        bitmask_matrix(&v, &v, |a, b| a & b == 0)
    }
}

/// `OK_{n:k}`: ordered `k`-tuples of distinct elements, adjacent iff the
/// underlying sets are disjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderedKneserView {
    pub n: usize,
    pub k: usize,
}

impl OrderedKneserView {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        subset_limit(n)?;
        Ok(OrderedKneserView { n, k })
    }

    /// Lexicographic order of the tuples.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        (1..=self.n).permutations(self.k).collect()
    }

    pub fn vertex_count(&self) -> Result<u128> {
        falling_factorial(self.n as u64, self.k as u64)
    }

    pub fn adjacency(&self) -> Gf2Matrix {
        let masks: Vec<u64> = self
            .vertices()
            .iter()
            .map(|v| v.iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
            .collect();
        bitmask_matrix(&masks, &masks, |a, b| a & b == 0)
    }

    /// The underlying `k`-set of every vertex, as a colex position.
    pub fn projection(&self) -> Vec<usize> {
        let index: std::collections::HashMap<u64, usize> = colex_subsets(self.n, self.k)
            .into_iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        self.vertices()
            .iter()
            .map(|v| index[&v.iter().fold(0u64, |m, &e| m | 1 << (e - 1))])
            .collect()
    }
}

/// Wilson's rank of `M_{n,k,l}` over `F_p` for `k <= min(l, n-l)`:
/// the sum of `C(n,i) - C(n,i-1)` over `0 <= i <= k` with `p ∤ C(l-i, k-i)`.
pub fn wilson_rank(n: usize, k: usize, l: usize, p: u64) -> Result<u128> {
    check_prime(p)?;
    if l > n || k > l.min(n - l) {
        return Err(Error::params(format!(
            "the formula needs k <= min(l, n-l), got n={n}, k={k}, l={l}"
        )));
    }
    let mut rank = 0u128;
    for i in 0..=k {
        if binomial_mod_p((l - i) as u64, (k - i) as u64, p)? != 0 {
            rank += binomial(n as u64, i as u64)? - binomial_signed(n as i64, i as i64 - 1)?;
        }
    }
    Ok(rank)
}

/// `C(n,k) - C(n,k-4)` when `n - 2k ≡ 24 (mod 36)`, after checking that the
/// binomials `C(n-k-i, k-i)`, `max(0,k-3) <= i <= k`, are odd.
pub fn kneser_rank_lower_bound(n: usize, k: usize) -> Result<u128> {
    if k == 0 || n < 2 * k || (n - 2 * k) % 36 != 24 {
        return Err(Error::params(format!(
            "need k >= 1 and n - 2k ≡ 24 (mod 36), got n={n}, k={k}"
        )));
    }
    for i in k.saturating_sub(3)..=k {
        if binomial_mod_p((n - k - i) as u64, (k - i) as u64, 2)? == 0 {
            return Err(Error::Internal(format!(
                "C({}, {}) is even although the congruence holds",
                n - k - i,
                k - i
            )));
        }
    }
    let value = binomial(n as u64, k as u64)? - binomial_signed(n as i64, k as i64 - 4)?;
    let exact = wilson_rank(n, k, n - k, 2)?;
    if exact < value {
        return Err(Error::Internal(format!(
            "Wilson rank {exact} is below the claimed lower bound {value}"
        )));
    }
    Ok(value)
}

/// `ceil(rank_2 A(K_{n:k}) / 2)`: each biclique adjacency has rank at most 2.
pub fn cover_size_lower_bound(n: usize, k: usize) -> Result<usize> {
    if 2 * k > n {
        return Err(Error::params(format!("need 2k <= n, got n={n}, k={k}")));
    }
    let rank = KneserGraphView::new(n, k)?.adjacency().rank();
    Ok(rank.div_ceil(2))
}

/// Rank over `F_p` of a matrix with the support of `M_{n,k,l}` and entries
/// drawn uniformly from `1..p`. Experimental; no bound is claimed.
pub fn sample_mstar_rank(n: usize, k: usize, l: usize, p: u64, seed: u64) -> Result<usize> {
    let m = build_inclusion_matrix(n, k, l)?;
    check_prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GfpMatrix::zeros(m.matrix.rows(), m.matrix.cols(), p)?;
    for r in 0..m.matrix.rows() {
        for c in 0..m.matrix.cols() {
            if m.matrix.get(r, c) {
                g.set(r, c, rng.gen_range(1..p));
            }
        }
    }
    Ok(g.rank())
}
