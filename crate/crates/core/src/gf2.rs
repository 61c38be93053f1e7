//! Dense linear algebra over F_2 and small prime fields.
//!
//! [`Gf2Matrix`] stores rows bit-packed into `u64` words, row-major, so a
//! row addition is one pass of word XORs. Elimination always takes the
//! leftmost available pivot, which makes every reported rank and every
//! solver result reproducible bit for bit.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};
use crate::par;
use crate::set_systems::SubsetBits;

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over F_2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![!0; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0-based positions; positions `>= len` are an error.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = BitVector::zeros(len);
        for p in positions {
            if p >= len {
                return Err(Error::DimensionMismatch(format!(
                    "position {p} out of range for length {len}"
                )));
            }
            v.set(p, true);
        }
        Ok(v)
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { len, words };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in and");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in or");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn not(&self) -> BitVector {
        let mut v = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    /// Number of positions set in both vectors.
    pub fn and_count(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product over F_2.
    pub fn dot(&self, other: &BitVector) -> bool {
        self.and_count(other) % 2 == 1
    }

    /// Set positions in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// Same bits, reinterpreted at a different length (truncating or zero-padding).
    pub fn resized(&self, len: usize) -> BitVector {
        BitVector::from_words(len, self.words.clone())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

/// Dense matrix over F_2.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Gf2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Stacks row vectors; all must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Gf2Matrix::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has length {}, expected {cols}",
                    v.len()
                )));
            }
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in BitVector::from_words(self.cols, self.row_words(r).to_vec()).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · x` over F_2.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2;
            if parity == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Returns `(rank, pivot columns)` of the row echelon form.
    fn echelon_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let wi = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * self.stride + wi] & mask != 0)
            else {
                continue;
            };
            if p != rank {
                for w in 0..self.stride {
                    self.data.swap(p * self.stride + w, rank * self.stride + w);
                }
            }
            for r in rank + 1..self.rows {
                if self.data[r * self.stride + wi] & mask != 0 {
                    for w in wi..self.stride {
                        let v = self.data[rank * self.stride + w];
                        self.data[r * self.stride + w] ^= v;
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon_in_place().len()
    }

    /// Any `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        // Augment with b as the last column.
        let mut aug = Gf2Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                aug.set(r, c, true);
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let pivots = aug.echelon_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        // Back substitution; free variables are zero.
        let mut x = BitVector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate().rev() {
            let mut v = aug.get(r, self.cols);
            for &c2 in &pivots[r + 1..] {
                if aug.get(r, c2) && x.get(c2) {
                    v = !v;
                }
            }
            x.set(c, v);
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn rank_gf2(m: &Gf2Matrix) -> usize {
    m.rank()
}

/// Rank over F_2 of at most 64 columns, rows given as bitmasks. Clobbers `rows`.
pub fn rank_of_masks(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

/// A nonzero combination of the vectors summing to zero, if one exists.
/// The returned vector selects vectors by index.
pub fn find_dependency(vectors: &[BitVector]) -> Result<Option<BitVector>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    let n = first.len();
    let m = vectors.len();
    // Augmented rows [v_i | e_i].
    let mut rows: Vec<BitVector> = Vec::with_capacity(m);
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector {i} has length {}, expected {n}",
                v.len()
            )));
        }
        let mut aug = BitVector::zeros(n + m);
        for p in v.iter_ones() {
            aug.set(p, true);
        }
        aug.set(n + i, true);
        rows.push(aug);
    }
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(p, rank);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        rank += 1;
    }
    if rank == m {
        return Ok(None);
    }
    let combo = BitVector::from_positions(m, rows[rank].iter_ones().filter(|&p| p >= n).map(|p| p - n))?;
    Ok(Some(combo))
}

/// Whether the characteristic vectors of `vectors` are independent over F_2.
pub fn is_linearly_independent(vectors: &[SubsetBits]) -> Result<bool> {
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let n = first.ground_size();
    if let Some(bad) = vectors.iter().find(|v| v.ground_size() != n) {
        return Err(Error::GroundMismatch {
            expected: n,
            found: bad.ground_size(),
        });
    }
    let rows: Vec<BitVector> = vectors.iter().map(|v| v.bits().clone()).collect();
    let m = Gf2Matrix::from_rows(n, &rows)?;
    Ok(m.rank() == vectors.len())
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

pub const MAX_PRIME: u64 = 251;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<u8> {
    if p <= MAX_PRIME && is_prime(p) {
        Ok(p as u8)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Dense matrix over F_p for a prime `p <= 251`, one byte per entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GfpMatrix {
    rows: usize,
    cols: usize,
    p: u8,
    data: Vec<u8>,
}

impl GfpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Result<Self> {
        let p = check_prime(p)?;
        Ok(GfpMatrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(n: usize, p: u64) -> Result<Self> {
        let mut m = GfpMatrix::zeros(n, n, p)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Entries are reduced modulo `p`.
    pub fn from_fn(rows: usize, cols: usize, p: u64, f: impl Fn(usize, usize) -> u64) -> Result<Self> {
        let mut m = GfpMatrix::zeros(rows, cols, p)?;
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        Ok(m)
    }

    pub fn from_gf2(m: &Gf2Matrix, p: u64) -> Result<Self> {
        GfpMatrix::from_fn(m.rows(), m.cols(), p, |r, c| m.get(r, c) as u64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p as u64
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = (value % self.p as u64) as u8;
    }

    pub fn rank(&self) -> usize {
        let p = self.p as u32;
        let inv = inverse_table(self.p);
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..cols {
                    a.swap(piv * cols + j, rank * cols + j);
                }
            }
            // Normalise the pivot row.
            let s = inv[a[rank * cols + c] as usize] as u32;
            for j in c..cols {
                let v = a[rank * cols + j] as u32;
                a[rank * cols + j] = (v * s % p) as u8;
            }
            let (head, tail) = a.split_at_mut((rank + 1) * cols);
            let pivot_row = &head[rank * cols..];
            for row in tail.chunks_exact_mut(cols) {
                let f = row[c] as u32;
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for j in c..cols {
                    row[j] = ((row[j] as u32 + neg * pivot_row[j] as u32) % p) as u8;
                }
            }
            rank += 1;
        }
        rank
    }
}

fn inverse_table(p: u8) -> Vec<u8> {
    let p = p as u32;
    let mut inv = vec![0u8; p as usize];
    for a in 1..p {
        // Fermat: a^(p-2).
        let mut result = 1u32;
        let mut base = a;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        inv[a as usize] = result as u8;
    }
    inv
}

pub fn rank_gfp(m: &GfpMatrix) -> usize {
    m.rank()
}

// ---------------------------------------------------------------------------
// Minimum-weight solutions of A·x = b
// ---------------------------------------------------------------------------

/// A lower bound on how many further columns are needed to cancel a residual.
///
/// Implementations must be sound: if some `w` columns sum to `residual` then
/// `lower_bound(residual) <= w`.
pub trait ResidualBound: Sync {
    fn lower_bound(&self, residual: &[u64]) -> usize;
}

#[derive(Clone, Copy)]
pub struct MinWeightOptions<'a> {
    pub max_weight: usize,
    /// Extra pruning bound on top of the built-in Hamming-weight bound.
    pub bound: Option<&'a dyn ResidualBound>,
    /// Restrict the first chosen column to these indices, then allow every
    /// other column afterwards. Sound only when each solution can be mapped
    /// by a symmetry of `(A, b)` onto one that contains a listed column.
    pub first_level: Option<&'a [usize]>,
    /// Node budget per first-level branch and weight level.
    pub node_limit: Option<u64>,
}

impl<'a> MinWeightOptions<'a> {
    pub fn new(max_weight: usize) -> Self {
        MinWeightOptions {
            max_weight,
            bound: None,
            first_level: None,
            node_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinWeight {
    /// A minimum-weight solution; every smaller weight was refuted.
    Found { x: BitVector, support: Vec<usize> },
    /// `b` is not in the column space of `A`.
    Infeasible,
    /// No solution of weight `<= max_weight`; `lower_bound` is certified.
    ExceedsBudget { lower_bound: usize },
    /// The node limit was hit while exploring `weight`; all smaller weights
    /// were refuted.
    Aborted { weight: usize },
}

impl MinWeight {
    pub fn weight(&self) -> Option<usize> {
        match self {
            MinWeight::Found { support, .. } => Some(support.len()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinWeightRun {
    pub outcome: MinWeight,
    /// Lower bound at the root, before any branching.
    pub root_bound: usize,
    pub nodes: u64,
}

/// Minimum-weight `x` with `A·x = b`, searched up to `max_weight`.
pub fn min_weight_solution(a: &Gf2Matrix, b: &BitVector, max_weight: usize) -> Result<MinWeight> {
    Ok(min_weight_solution_with(a, b, &MinWeightOptions::new(max_weight))?.outcome)
}

struct Columns {
    stride: usize,
    data: Vec<u64>,
    count: usize,
    max_popcount: usize,
}

impl Columns {
    #[inline]
    fn get(&self, c: usize) -> &[u64] {
        &self.data[c * self.stride..(c + 1) * self.stride]
    }
}

enum Dfs {
    Found(Vec<usize>),
    Exhausted,
    Aborted,
}

#[derive(Clone, Copy)]
struct LevelSearch<'a> {
    cols: &'a Columns,
    nonzero: &'a [usize],
    last_level: &'a HashMap<&'a [u64], Vec<usize>>,
    bound: Option<&'a dyn ResidualBound>,
    node_limit: u64,
    weight: usize,
    /// Set in symmetric mode: the first-level column, excluded afterwards.
    excluded: Option<usize>,
}

impl LevelSearch<'_> {
    fn lower_bound(&self, residual: &[u64]) -> usize {
        let pop: usize = residual.iter().map(|w| w.count_ones() as usize).sum();
        if pop == 0 {
            return 0;
        }
        let mut lb = pop.div_ceil(self.cols.max_popcount.max(1)).max(1);
        if let Some(b) = self.bound {
            lb = lb.max(b.lower_bound(residual));
        }
        lb
    }

    /// Depth-first search for `remaining` more columns, each with index in
    /// the `nonzero` list at position `>= start`.
    fn dfs(
        &self,
        residual: &mut [u64],
        chosen: &mut Vec<usize>,
        start: usize,
        nodes: &mut u64,
    ) -> Dfs {
        let remaining = self.weight - chosen.len();
        if remaining == 0 {
            return if residual.iter().all(|&w| w == 0) {
                Dfs::Found(chosen.clone())
            } else {
                Dfs::Exhausted
            };
        }
        *nodes += 1;
        if *nodes > self.node_limit {
            return Dfs::Aborted;
        }
        if self.lower_bound(residual) > remaining {
            return Dfs::Exhausted;
        }
        let min_index = self.nonzero.get(start).copied().unwrap_or(usize::MAX);
        if remaining == 1 {
            if let Some(cands) = self.last_level.get(&*residual) {
                if let Some(&c) = cands
                    .iter()
                    .find(|&&c| c >= min_index && Some(c) != self.excluded)
                {
                    let mut out = chosen.clone();
                    out.push(c);
                    return Dfs::Found(out);
                }
            }
            return Dfs::Exhausted;
        }
        let mut aborted = false;
        for pos in start..self.nonzero.len() {
            // Not enough columns left to reach the weight.
            if self.nonzero.len() - pos < remaining {
                break;
            }
            let c = self.nonzero[pos];
            if Some(c) == self.excluded {
                continue;
            }
            xor_into(residual, self.cols.get(c));
            chosen.push(c);
            let r = self.dfs(residual, chosen, pos + 1, nodes);
            chosen.pop();
            xor_into(residual, self.cols.get(c));
            match r {
                Dfs::Found(s) => return Dfs::Found(s),
                Dfs::Aborted => aborted = true,
                Dfs::Exhausted => {}
            }
        }
        if aborted {
            Dfs::Aborted
        } else {
            Dfs::Exhausted
        }
    }
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Iterative deepening over the weight with branch-and-bound pruning.
///
/// Without `first_level`, supports are explored in lexicographic order, so
/// the returned support is the lexicographically smallest one of minimum
/// weight. Branches of the first level may run in parallel; the merge keeps
/// the earliest branch, so the result never depends on the thread count.
pub fn min_weight_solution_with(
    a: &Gf2Matrix,
    b: &BitVector,
    opts: &MinWeightOptions<'_>,
) -> Result<MinWeightRun> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            a.rows()
        )));
    }
    let t = a.transpose();
    let cols = Columns {
        stride: words_for(a.rows()),
        data: (0..t.rows()).flat_map(|c| t.row_words(c).to_vec()).collect(),
        count: a.cols(),
        max_popcount: (0..t.rows())
            .map(|c| t.row_words(c).iter().map(|w| w.count_ones() as usize).sum())
            .max()
            .unwrap_or(0),
    };
    if let Some(first) = opts.first_level {
        if let Some(&bad) = first.iter().find(|&&c| c >= cols.count) {
            return Err(Error::DimensionMismatch(format!(
                "first-level column {bad} out of range"
            )));
        }
    }

    // Consistency: rank(A) == rank([A | b]).
    let mut with_b = Gf2Matrix::zeros(t.rows() + 1, a.rows());
    for c in 0..t.rows() {
        with_b.row_words_mut(c).copy_from_slice(t.row_words(c));
    }
    with_b.row_words_mut(t.rows()).copy_from_slice(b.words());
    if with_b.rank() != t.rank() {
        return Ok(MinWeightRun {
            outcome: MinWeight::Infeasible,
            root_bound: 0,
            nodes: 0,
        });
    }

    let nonzero: Vec<usize> = (0..cols.count)
        .filter(|&c| cols.get(c).iter().any(|&w| w != 0))
        .collect();
    let mut last_level: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for &c in &nonzero {
        last_level.entry(cols.get(c)).or_default().push(c);
    }

    let mut search = LevelSearch {
        cols: &cols,
        nonzero: &nonzero,
        last_level: &last_level,
        bound: opts.bound,
        node_limit: opts.node_limit.unwrap_or(u64::MAX),
        weight: 0,
        excluded: None,
    };
    let root_bound = search.lower_bound(b.words());
    if root_bound == 0 {
        return Ok(MinWeightRun {
            outcome: MinWeight::Found {
                x: BitVector::zeros(cols.count),
                support: vec![],
            },
            root_bound,
            nodes: 0,
        });
    }

    let mut total_nodes = 0u64;
    let branches: Vec<usize> = match opts.first_level {
        Some(first) => first
            .iter()
            .copied()
            .filter(|&c| nonzero.binary_search(&c).is_ok())
            .collect(),
        None => (0..nonzero.len()).collect(),
    };
    for weight in root_bound..=opts.max_weight {
        search.weight = weight;
        let aborted = AtomicBool::new(false);
        let node_counts = std::sync::Mutex::new(0u64);
        let found = par::find_map_first_slice(&branches, |&branch| {
            let mut local = search;
            let (first_col, start) = match opts.first_level {
                Some(_) => {
                    local.excluded = Some(branch);
                    (branch, 0)
                }
                None => (nonzero[branch], branch + 1),
            };
            let mut residual = b.words().to_vec();
            xor_into(&mut residual, cols.get(first_col));
            let mut chosen = vec![first_col];
            let mut nodes = 0u64;
            let r = local.dfs(&mut residual, &mut chosen, start, &mut nodes);
            *node_counts.lock().unwrap() += nodes;
            match r {
                Dfs::Found(s) => Some(s),
                Dfs::Aborted => {
                    aborted.store(true, Ordering::Relaxed);
                    None
                }
                Dfs::Exhausted => None,
            }
        });
        total_nodes += node_counts.into_inner().unwrap();
        if let Some(mut support) = found {
            support.sort_unstable();
            let x = BitVector::from_positions(cols.count, support.iter().copied())?;
            if a.mul_vec(&x)? != *b {
                return Err(Error::Internal(
                    "minimum-weight solver returned a non-solution".into(),
                ));
            }
            return Ok(MinWeightRun {
                outcome: MinWeight::Found { x, support },
                root_bound,
                nodes: total_nodes,
            });
        }
        if aborted.load(Ordering::Relaxed) {
            return Ok(MinWeightRun {
                outcome: MinWeight::Aborted { weight },
                root_bound,
                nodes: total_nodes,
            });
        }
    }
    Ok(MinWeightRun {
        outcome: MinWeight::ExceedsBudget {
            lower_bound: root_bound.max(opts.max_weight + 1),
        },
        root_bound,
        nodes: total_nodes,
    })
}
