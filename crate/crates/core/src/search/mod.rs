//! Exact `f_{k,t}(n)` and `b_{k,t}(m)` at small parameters.
//!
//! A cover is a set of columns of the cell-by-product incidence matrix
//! whose sum is the edge indicator of `H_{k,t}(n)`, so the minimum cover
//! size is a minimum-weight solution of a parity system.

mod table;

pub use table::{
    bounds_table, constructive_upper_bound, lower_bound_formula, upper_bound_formula, BoundsRow,
    BoundsTable, TableConfig,
};

use itertools::Itertools;

use crate::covers::{cell_at, cell_count, is_target_edge, KPartiteProduct, Mod2Cover};
use crate::error::{Error, Result};
use crate::gf2::{
    min_weight_solution_with, rank_of_masks, BitVector, Gf2Matrix, MinWeight, MinWeightOptions,
    ResidualBound,
};
use crate::par;
use crate::set_systems::SubsetBits;

pub const DEFAULT_CATALOG_CAP: usize = 4096;

/// `(2^n - 1)^k`, the number of products with nonempty parts.
pub fn catalog_size(k: usize, n: usize) -> u128 {
    if n >= 127 {
        return u128::MAX;
    }
    let per = (1u128 << n) - 1;
    (0..k).try_fold(1u128, |acc, _| acc.checked_mul(per)).unwrap_or(u128::MAX)
}

/// All products over `[n]^k` as columns of a parity system, together with
/// the edge indicator of `H_{k,t}(n)`.
#[derive(Clone, Debug)]
pub struct SearchInstance {
    k: usize,
    t: usize,
    n: usize,
    matrix: Gf2Matrix,
    target: BitVector,
}

impl SearchInstance {
    pub fn new(k: usize, t: usize, n: usize, cap: usize) -> Result<Self> {
        if t < 2 || t > k {
            return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
        }
        if n == 0 || n > 16 {
            return Err(Error::params(format!("need 1 <= n <= 16, got {n}")));
        }
        let size = catalog_size(k, n);
        if size > cap as u128 {
            return Err(Error::CatalogTooLarge { size, cap });
        }
        let size = size as usize;
        let cells = cell_count(n, k);
        let radix = (1usize << n) - 1;
        // Column c has part masks given by the mixed-radix digits of c.
        let columns = par::map_range(size, |c| {
            let masks = column_masks(c, radix, k);
            BitVector::from_bools(
                &(0..cells)
                    .map(|cell| {
                        cell_at(cell, n, k)
                            .iter()
                            .zip(&masks)
                            .all(|(&i, &m)| m >> (i - 1) & 1 == 1)
                    })
                    .collect::<Vec<_>>(),
            )
        });
        let matrix = Gf2Matrix::from_rows(cells, &columns)?.transpose();
        let target = BitVector::from_bools(
            &(0..cells)
                .map(|cell| is_target_edge(&cell_at(cell, n, k), t))
                .collect::<Vec<_>>(),
        );
        Ok(SearchInstance {
            k,
            t,
            n,
            matrix,
            target,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn catalog_len(&self) -> usize {
        self.matrix.cols()
    }

    /// Rows are cells in lexicographic order, columns are products.
    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn target(&self) -> &BitVector {
        &self.target
    }

    /// Part masks of a column (bit `i-1` set iff element `i` is in the part).
    pub fn column_masks(&self, c: usize) -> Vec<u64> {
        column_masks(c, (1usize << self.n) - 1, self.k)
    }

    pub fn product(&self, c: usize) -> KPartiteProduct {
        let parts = self
            .column_masks(c)
            .into_iter()
            .map(|m| {
                SubsetBits::from_elements(self.n, (0..self.n).filter(|i| m >> i & 1 == 1).map(|i| i + 1))
                    .expect("mask fits the ground set")
            })
            .collect();
        KPartiteProduct::new(parts).expect("catalog parts are nonempty")
    }

    pub fn cover(&self, support: &[usize]) -> Result<Mod2Cover> {
        Mod2Cover::new(
            self.k,
            self.t,
            self.n,
            support.iter().map(|&c| self.product(c)).collect(),
        )
    }

    fn index_of(&self, masks: &[u64]) -> usize {
        let radix = (1usize << self.n) - 1;
        masks.iter().fold(0, |acc, &m| acc * radix + (m as usize - 1))
    }

    /// Smallest column index in the orbit of `c` under value permutations of
    /// `[n]` combined with coordinate permutations.
    pub fn canonical_index(&self, c: usize) -> usize {
        let tables = value_permutation_tables(self.n);
        let coords: Vec<Vec<usize>> = (0..self.k).permutations(self.k).collect();
        self.canonical_with(c, &tables, &coords)
    }

    fn canonical_with(&self, c: usize, tables: &[Vec<u64>], coords: &[Vec<usize>]) -> usize {
        let masks = self.column_masks(c);
        let mut best = c;
        let mut buf = vec![0u64; self.k];
        for table in tables {
            let mapped: Vec<u64> = masks.iter().map(|&m| table[m as usize]).collect();
            for perm in coords {
                for (j, &src) in perm.iter().enumerate() {
                    buf[j] = mapped[src];
                }
                best = best.min(self.index_of(&buf));
            }
        }
        best
    }

    /// Columns equal to their canonical index, one per orbit.
    pub fn symmetry_representatives(&self) -> Vec<usize> {
        let tables = value_permutation_tables(self.n);
        let coords: Vec<Vec<usize>> = (0..self.k).permutations(self.k).collect();
        let keep = par::map_range(self.catalog_len(), |c| {
            self.canonical_with(c, &tables, &coords) == c
        });
        keep.iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(c, _)| c)
            .collect()
    }
}

fn column_masks(mut c: usize, radix: usize, k: usize) -> Vec<u64> {
    let mut masks = vec![0u64; k];
    for j in (0..k).rev() {
        masks[j] = (c % radix + 1) as u64;
        c /= radix;
    }
    masks
}

fn value_permutation_tables(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .permutations(n)
        .map(|sigma| {
            (0..1u64 << n)
                .map(|m| {
                    (0..n)
                        .filter(|&i| m >> i & 1 == 1)
                        .fold(0u64, |acc, i| acc | 1 << sigma[i])
                })
                .collect()
        })
        .collect()
}

/// Every product is a rank-one tensor, so it lowers the GF(2) rank of each
/// flattening of the residual by at most one. The bound is the largest such
/// rank over all splits of the coordinates into two nonempty groups.
#[derive(Clone, Debug)]
pub struct FlatteningRankBound {
    splits: Vec<Split>,
}

#[derive(Clone, Debug)]
struct Split {
    rows: usize,
    cols: usize,
    /// Per cell: (row, column) of the flattening.
    place: Vec<(u32, u32)>,
}

impl FlatteningRankBound {
    pub fn new(k: usize, n: usize) -> Self {
        let cells = cell_count(n, k);
        let mut splits = Vec::new();
        // Coordinate 0 always sits on the row side; this lists each split once.
        for mask in 0..(1usize << (k - 1)) {
            let row_side = 1 | (mask << 1);
            if row_side == (1 << k) - 1 {
                continue;
            }
            let a = row_side.count_ones();
            let (rows, cols) = (n.pow(a), n.pow(k as u32 - a));
            let place = (0..cells)
                .map(|cell| {
                    let idx = cell_at(cell, n, k);
                    let (mut r, mut c) = (0usize, 0usize);
                    for (j, &i) in idx.iter().enumerate() {
                        if row_side >> j & 1 == 1 {
                            r = r * n + (i - 1);
                        } else {
                            c = c * n + (i - 1);
                        }
                    }
                    (r as u32, c as u32)
                })
                .collect();
            splits.push(Split { rows, cols, place });
        }
        FlatteningRankBound { splits }
    }

    fn split_rank(split: &Split, residual: &BitVector) -> usize {
        let (rows, cols, transpose) = if split.cols <= 64 {
            (split.rows, split.cols, false)
        } else {
            (split.cols, split.rows, true)
        };
        if cols <= 64 {
            let mut masks = vec![0u64; rows];
            for cell in residual.iter_ones() {
                let (r, c) = split.place[cell];
                let (r, c) = if transpose { (c, r) } else { (r, c) };
                masks[r as usize] |= 1 << c;
            }
            rank_of_masks(&mut masks)
        } else {
            let mut m = Gf2Matrix::zeros(split.rows, split.cols);
            for cell in residual.iter_ones() {
                let (r, c) = split.place[cell];
                m.set(r as usize, c as usize, true);
            }
            m.rank()
        }
    }

    pub fn bound_of(&self, residual: &BitVector) -> usize {
        self.splits
            .iter()
            .map(|s| Self::split_rank(s, residual))
            .max()
            .unwrap_or(0)
    }
}

impl ResidualBound for FlatteningRankBound {
    fn lower_bound(&self, residual: &[u64]) -> usize {
        let len = self.splits.first().map_or(0, |s| s.place.len());
        self.bound_of(&BitVector::from_words(len, residual.to_vec()))
    }
}

/// Edge indicator of `H_{k,t}(n)` over the lexicographic cells.
pub fn target_vector(k: usize, t: usize, n: usize) -> BitVector {
    BitVector::from_bools(
        &(0..cell_count(n, k))
            .map(|cell| is_target_edge(&cell_at(cell, n, k), t))
            .collect::<Vec<_>>(),
    )
}

/// Largest flattening rank of the target; a lower bound on `f_{k,t}(n)`
/// that needs no catalog.
pub fn target_flattening_rank(k: usize, t: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    FlatteningRankBound::new(k, n).bound_of(&target_vector(k, t, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest cover size tried.
    pub budget: usize,
    /// Largest catalog accepted.
    pub cap: usize,
    /// Restrict the first chosen product to orbit representatives.
    pub symmetry: bool,
    /// Prune with [`FlatteningRankBound`].
    pub rank_bound: bool,
    pub node_limit: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 16,
            cap: DEFAULT_CATALOG_CAP,
            symmetry: true,
            rank_bound: true,
            node_limit: None,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: usize) -> Self {
        SearchConfig {
            budget,
            ..SearchConfig::default()
        }
    }
}

/// Outcome of [`min_mod2_cover`]. Every variant records the weights that
/// were refuted exhaustively.
#[derive(Clone, Debug)]
pub enum CoverSearch {
    /// `f_{k,t}(n) = size`; the cover re-verifies.
    Exact { size: usize, cover: Mod2Cover },
    /// No cover of size `<= budget`; `f_{k,t}(n) >= lower_bound`.
    ExceedsBudget { lower_bound: usize },
    /// The node limit stopped the search at `weight`; every smaller size was
    /// refuted, so `f_{k,t}(n) >= weight`.
    Aborted { weight: usize },
}

impl CoverSearch {
    pub fn exact(&self) -> Option<usize> {
        match self {
            CoverSearch::Exact { size, .. } => Some(*size),
            _ => None,
        }
    }

    /// The certified lower bound on `f_{k,t}(n)`.
    pub fn lower_bound(&self) -> usize {
        match self {
            CoverSearch::Exact { size, .. } => *size,
            CoverSearch::ExceedsBudget { lower_bound } => *lower_bound,
            CoverSearch::Aborted { weight } => *weight,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoverSearchRun {
    pub outcome: CoverSearch,
    /// Lower bound at the root of the search.
    pub root_bound: usize,
    pub nodes: u64,
    pub catalog: usize,
    pub representatives: Option<usize>,
}

/// Minimum size of a modulo-2 cover of `H_{k,t}(n)`, exhaustively.
pub fn min_mod2_cover(k: usize, t: usize, n: usize, config: &SearchConfig) -> Result<CoverSearchRun> {
    let inst = SearchInstance::new(k, t, n, config.cap)?;
    let bound = config.rank_bound.then(|| FlatteningRankBound::new(k, n));
    let reps = config.symmetry.then(|| inst.symmetry_representatives());
    let opts = MinWeightOptions {
        max_weight: config.budget,
        bound: bound.as_ref().map(|b| b as &dyn ResidualBound),
        first_level: reps.as_deref(),
        node_limit: config.node_limit,
    };
    let run = min_weight_solution_with(inst.matrix(), inst.target(), &opts)?;
    let outcome = match run.outcome {
        MinWeight::Found { support, .. } => {
            let cover = inst.cover(&support)?;
            let report = crate::covers::verify_mod2_cover(&cover);
            if !report.valid {
                return Err(Error::Internal("search returned an invalid cover".into()));
            }
            CoverSearch::Exact {
                size: support.len(),
                cover,
            }
        }
        MinWeight::ExceedsBudget { lower_bound } => CoverSearch::ExceedsBudget { lower_bound },
        MinWeight::Aborted { weight } => CoverSearch::Aborted { weight },
        MinWeight::Infeasible => {
            // [n]^k alone spans the all-cells vector; the target is always
            // reachable through the partition construction.
            return Err(Error::Internal("cover system reported infeasible".into()));
        }
    };
    Ok(CoverSearchRun {
        outcome,
        root_bound: run.root_bound,
        nodes: run.nodes,
        catalog: inst.catalog_len(),
        representatives: reps.map(|r| r.len()),
    })
}

/// `b_{k,t}(m)` or an interval containing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BValue {
    Exact(usize),
    /// `low <= b <= high`; `high` is `None` when no analytic cut-off was found.
    Bracket { low: usize, high: Option<usize> },
}

/// Largest `n` probed before the analytic cut-off gives up.
const MAX_PROBE: usize = 64;

/// `max{n : f_{k,t}(n) <= m}`, probing `n = 1, 2, …`. Relies on `f` being
/// nondecreasing in `n` (restriction of a cover is a cover).
pub fn exact_b(k: usize, t: usize, m: usize, config: &SearchConfig) -> Result<BValue> {
    if t < 2 || t > k {
        return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
    }
    let config = SearchConfig {
        budget: m,
        ..*config
    };
    let mut n = 1;
    loop {
        if n < t {
            // H_{k,t}(n) has no edges; the empty cover works.
            n += 1;
            continue;
        }
        let outcome = match min_mod2_cover(k, t, n, &config) {
            Ok(run) => Some(run.outcome),
            Err(Error::CatalogTooLarge { .. }) => None,
            Err(e) => return Err(e),
        };
        match outcome {
            Some(CoverSearch::Exact { .. }) => n += 1,
            Some(CoverSearch::ExceedsBudget { .. }) => return Ok(BValue::Exact(n - 1)),
            Some(CoverSearch::Aborted { .. }) | None => {
                return Ok(BValue::Bracket {
                    low: n - 1,
                    high: analytic_cutoff(k, t, m, n),
                })
            }
        }
    }
}

/// Largest `n' >= from - 1` before the first `n'` whose analytic lower bound
/// on `f` exceeds `m`.
fn analytic_cutoff(k: usize, t: usize, m: usize, from: usize) -> Option<usize> {
    (from..=MAX_PROBE)
        .find(|&n| table::lower_bound_formula(k, t, n).is_ok_and(|lb| lb > m as u128))
        .map(|n| n - 1)
}

/// Checks `f(n) <= m ⇔ b(m) >= n` for every `n` in `f_values` and `m` in
/// `b_values`; returns the violating pairs.
pub fn galois_violations(
    f_values: &[(usize, usize)],
    b_values: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &(n, f) in f_values {
        for &(m, b) in b_values {
            if (f <= m) != (b >= n) {
                out.push((n, m));
            }
        }
    }
    out
}
