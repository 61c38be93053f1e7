//! Exact counting helpers and set-partition enumeration.

use crate::error::{Error, Result};

/// `C(n, k)` in exact arithmetic; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial"))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// `C(n, k)` with the convention that negative arguments give zero.
pub fn binomial_signed(n: i64, k: i64) -> Result<u128> {
    if n < 0 || k < 0 {
        return Ok(0);
    }
    binomial(n as u64, k as u64)
}

/// Stirling number of the second kind `S(k, t)`.
pub fn stirling2(k: u64, t: u64) -> Result<u128> {
    if t > k {
        return Ok(0);
    }
    // Row-by-row recurrence S(a, b) = b S(a-1, b) + S(a-1, b-1).
    let mut row = vec![0u128; t as usize + 1];
    row[0] = 1;
    for _ in 0..k {
        for b in (1..=t as usize).rev() {
            row[b] = (b as u128)
                .checked_mul(row[b])
                .and_then(|x| x.checked_add(row[b - 1]))
                .ok_or(Error::Overflow("stirling2"))?;
        }
        row[0] = 0;
    }
    Ok(row[t as usize])
}

/// `(n)_r = n (n-1) ... (n-r+1)`; zero when `r > n`.
pub fn falling_factorial(n: u64, r: u64) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    (0..r).try_fold(1u128, |acc, i| {
        acc.checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("falling factorial"))
    })
}

pub fn factorial(n: u64) -> Result<u128> {
    falling_factorial(n, n)
}

/// All `k`-subsets of `{0, …, n-1}` as bitmasks, in colexicographic order
/// (which is increasing numeric order of the masks).
pub fn colex_subsets(n: usize, k: usize) -> Vec<u64> {
    assert!(n <= 63, "colex enumeration is limited to n <= 63");
    if k > n {
        return vec![];
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while x < limit {
        out.push(x);
        // Gosper's hack: next mask with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Position of a mask in [`colex_subsets`] order: `Σ C(e_i, i+1)` over its
/// sorted elements `e_0 < e_1 < …`.
pub fn colex_rank(mask: u64) -> u128 {
    let mut rank = 0u128;
    let mut m = mask;
    let mut i = 0u64;
    while m != 0 {
        let e = m.trailing_zeros() as u64;
        rank += binomial(e, i + 1).expect("small binomial");
        m &= m - 1;
        i += 1;
    }
    rank
}

/// A set partition of the coordinates `[k]` into nonempty blocks.
///
/// Blocks are stored 1-based, each sorted, ordered by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl PatternPartition {
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k + 1];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::params("partition blocks must be nonempty"));
            }
            b.sort_unstable();
            for &c in b.iter() {
                if c == 0 || c > k || seen[c] {
                    return Err(Error::params(format!(
                        "coordinate {c} is out of range or repeated"
                    )));
                }
                seen[c] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::params("blocks do not cover every coordinate"));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(PatternPartition { k, blocks })
    }

    /// From a restricted growth string (0-based labels, `rgs[0] = 0`).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let r = rgs.iter().max().map_or(0, |&x| x + 1);
        let mut blocks = vec![Vec::new(); r];
        for (c, &b) in rgs.iter().enumerate() {
            blocks[b].push(c + 1);
        }
        PatternPartition {
            k: rgs.len(),
            blocks,
        }
    }

    /// Coincidence pattern of an index tuple: coordinates are in the same
    /// block iff they carry the same value.
    pub fn of(idx: &[usize]) -> Self {
        let mut labels: Vec<usize> = Vec::new();
        let rgs: Vec<usize> = idx
            .iter()
            .map(|v| match labels.iter().position(|x| x == v) {
                Some(p) => p,
                None => {
                    labels.push(*v);
                    labels.len() - 1
                }
            })
            .collect();
        PatternPartition::from_rgs(&rgs)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the first block of size one, if any.
    pub fn first_singleton(&self) -> Option<usize> {
        self.blocks.iter().position(|b| b.len() == 1)
    }

    pub fn matches(&self, idx: &[usize]) -> bool {
        idx.len() == self.k && PatternPartition::of(idx) == *self
    }
}

/// All set partitions of `[k]`, in lexicographic order of their restricted
/// growth strings.
pub fn set_partitions(k: usize) -> Vec<PatternPartition> {
    if k == 0 {
        return vec![PatternPartition {
            k: 0,
            blocks: vec![],
        }];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    fn rec(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<PatternPartition>) {
        if pos == rgs.len() {
            out.push(PatternPartition::from_rgs(rgs));
            return;
        }
        for v in 0..=max + 1 {
            rgs[pos] = v;
            rec(pos + 1, max.max(v), rgs, out);
        }
    }
    rec(1, 0, &mut rgs, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(10, 2).unwrap(), 45);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(64, 32).unwrap(), 1832624140942590534);
        assert_eq!(binomial_signed(-1, 0).unwrap(), 0);
        assert_eq!(binomial(32, 4).unwrap(), 35960);
    }

    #[test]
    fn binomial_pascal() {
        for n in 1..=64u64 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k).unwrap() + binomial(n - 1, k - 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(4, 2).unwrap(), 7);
        assert_eq!(stirling2(5, 5).unwrap(), 1);
        assert_eq!(stirling2(0, 0).unwrap(), 1);
        assert_eq!(stirling2(3, 0).unwrap(), 0);
        for k in 0..8 {
            for t in 0..=k {
                let count = set_partitions(k)
                    .iter()
                    .filter(|p| p.block_count() == t)
                    .count();
                assert_eq!(stirling2(k as u64, t as u64).unwrap(), count as u128);
            }
        }
    }

    #[test]
    fn falling_values() {
        assert_eq!(falling_factorial(5, 2).unwrap(), 20);
        assert_eq!(falling_factorial(3, 0).unwrap(), 1);
        assert_eq!(falling_factorial(3, 4).unwrap(), 0);
        assert_eq!(factorial(4).unwrap(), 24);
    }

    #[test]
    fn colex_order() {
        let s = colex_subsets(4, 2);
        assert_eq!(s, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        for (i, &m) in s.iter().enumerate() {
            assert_eq!(colex_rank(m), i as u128);
        }
        assert_eq!(colex_subsets(5, 0), vec![0]);
        assert!(colex_subsets(2, 3).is_empty());
        assert_eq!(colex_subsets(10, 3).len(), 120);
    }

    #[test]
    fn partitions_of_three() {
        let p = set_partitions(3);
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].blocks(), &[vec![1, 2, 3]]);
        assert_eq!(p[4].blocks(), &[vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn pattern_of_tuples() {
        let p = PatternPartition::of(&[5, 2, 5, 1]);
        assert_eq!(p.blocks(), &[vec![1, 3], vec![2], vec![4]]);
        assert_eq!(p.first_singleton(), Some(1));
        assert!(p.matches(&[1, 2, 1, 3]));
        assert!(!p.matches(&[1, 1, 1, 3]));
        let q = PatternPartition::new(4, vec![vec![3, 1], vec![4], vec![2]]).unwrap();
        assert_eq!(p, q);
        assert!(PatternPartition::new(3, vec![vec![1, 2]]).is_err());
    }
}
