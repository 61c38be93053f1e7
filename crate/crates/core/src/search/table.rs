//! Bound tables for `f_{k,t}(n)`: closed-form lower and upper bounds, the
//! best verified construction and, where the search finishes, the exact value.

use std::fmt::Write as _;

use crate::constructions::{
    binomial, binomial_signed, build_b22_pair, build_cover_33, build_cover_43, build_cover_t2,
    build_partition_cover, factorial, trivial_gp_cover,
};
use crate::covers::{permute_gp_cover, tuple_to_cover, verify_mod2_cover, Mod2Cover};
use crate::error::{Error, Result};
use crate::ranks::cover_size_lower_bound;

use super::{min_mod2_cover, target_flattening_rank, CoverSearch, SearchConfig};

/// Cells above which the flattening bound is skipped in closed-form rows.
const FLATTENING_CELL_LIMIT: usize = 1 << 16;

/// Lower bound on `f_{k,t}(n)` from the tuple-to-pair reduction, the
/// flattening rank of the target, the Kneser rank (even `t = k`) and the
/// link recursion (odd `t = k`).
pub fn lower_bound_formula(k: usize, t: usize, n: usize) -> Result<u128> {
    if t < 2 || t > k {
        return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
    }
    // A cover of size s gives a (k,t)-tuple of size n on ground [s], whose
    // pair reduction has at most s+1 pairs.
    let pairs = if 2 * t - 2 <= k {
        binomial(n as u64, (t - 1) as u64)?
    } else {
        let a = 2 * t - k - 2;
        binomial_signed(n as i64 - a as i64, (k - t + 1) as i64)?
    };
    let mut lb = pairs.saturating_sub(1);
    if n > 0 && n.checked_pow(k as u32).is_some_and(|c| c <= FLATTENING_CELL_LIMIT) {
        lb = lb.max(target_flattening_rank(k, t, n) as u128);
    }
    if t == k && k.is_multiple_of(2) && n >= k && n <= 24 {
        lb = lb.max(cover_size_lower_bound(n, k / 2)? as u128);
    }
    if t == k && k % 2 == 1 && k >= 3 && n >= 1 {
        lb = lb.max(lower_bound_formula(k - 1, k - 1, n - 1)?);
    }
    Ok(lb)
}

/// Closed-form upper bounds on `f_{k,t}(n)`, the smallest applicable one.
pub fn upper_bound_formula(k: usize, t: usize, n: usize) -> Result<Option<u128>> {
    if t < 2 || t > k {
        return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
    }
    let n128 = n as u128;
    let mut best: Option<u128> = None;
    let mut offer = |v: u128| best = Some(best.map_or(v, |b: u128| b.min(v)));
    if t == 2 {
        offer(n128 + 1);
    }
    if (k, t) == (3, 3) {
        offer(3 * n128 + 1);
    }
    if (k, t) == (4, 3) {
        offer(3 * n128 * n128 + 4 * n128 + 1);
    }
    if t == k {
        offer(factorial(k as u64)? * binomial(n as u64, (k / 2) as u64)?);
    }
    Ok(best)
}

/// Smallest verified construction for `H_{k,t}(n)` and its name.
pub fn constructive_upper_bound(k: usize, t: usize, n: usize) -> Result<(u128, &'static str)> {
    if t < 2 || t > k {
        return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
    }
    if n < t {
        return Ok((0, "empty"));
    }
    let mut candidates: Vec<(Mod2Cover, &'static str)> = Vec::new();
    if t == 2 {
        candidates.push((build_cover_t2(k, n)?, "diagonal"));
    }
    if (k, t) == (3, 3) {
        candidates.push((build_cover_33(n)?, "cover33"));
    }
    if (k, t) == (4, 3) {
        candidates.push((build_cover_43(n)?, "cover43"));
    }
    if (k, t) == (2, 2) {
        // The extremal pair on ground [2r] converts to a cover of H_{2,2}(2r+1)
        // of size 2r; restrict it when n is even.
        let r2 = if n % 2 == 1 { n - 1 } else { n };
        if r2 >= 2 {
            let full = tuple_to_cover(&build_b22_pair(r2)?)?.cover;
            let cover = if full.n() > n { full.restricted(n)? } else { full };
            candidates.push((cover, "pair"));
        }
    }
    if t == k && n >= k {
        candidates.push((permute_gp_cover(&trivial_gp_cover(n, k)?)?, "permuted"));
    }
    candidates.push((build_partition_cover(k, t, n)?, "partition"));

    let mut best: Option<(u128, &'static str)> = None;
    for (cover, name) in candidates {
        if !verify_mod2_cover(&cover).valid {
            return Err(Error::Internal(format!(
                "construction {name} is invalid for (k,t,n)=({k},{t},{n})"
            )));
        }
        let size = cover.len() as u128;
        if best.is_none_or(|(b, _)| size < b) {
            best = Some((size, name));
        }
    }
    Ok(best.expect("the partition construction always applies"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsRow {
    pub k: usize,
    pub t: usize,
    pub n: usize,
    pub lower: u128,
    pub upper: Option<u128>,
    pub constructive: u128,
    pub construction: &'static str,
    pub exact: Option<usize>,
    /// Certified lower bound from an unfinished search.
    pub search_floor: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct TableConfig {
    /// Run the exact search where the catalog fits.
    pub exact: bool,
    pub search: SearchConfig,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            exact: true,
            search: SearchConfig {
                node_limit: Some(200_000),
                ..SearchConfig::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsTable {
    pub rows: Vec<BoundsRow>,
    pub notes: Vec<String>,
}

const F22_NOTE: &str = "erratum: f_{2,2}(n) = n-1 for odd n and n for even n \
(equivalently b_{2,2}(n) = n+1 for even n and n for odd n); the case split \
that assigns n to odd n and n-1 to even n is reversed, as the exact values \
in this table confirm";

pub fn bounds_table(
    k: usize,
    t: usize,
    ns: impl IntoIterator<Item = usize>,
    config: &TableConfig,
) -> Result<BoundsTable> {
    let mut rows = Vec::new();
    for n in ns {
        let lower = lower_bound_formula(k, t, n)?;
        let upper = upper_bound_formula(k, t, n)?;
        let (constructive, construction) = constructive_upper_bound(k, t, n)?;
        let (mut exact, mut search_floor) = (None, None);
        if config.exact {
            if n < t {
                exact = Some(0);
            } else {
                let search = SearchConfig {
                    budget: constructive as usize,
                    ..config.search
                };
                match min_mod2_cover(k, t, n, &search) {
                    Ok(run) => match run.outcome {
                        CoverSearch::Exact { size, .. } => exact = Some(size),
                        CoverSearch::ExceedsBudget { .. } => {
                            return Err(Error::Internal(format!(
                                "no cover within the constructive size {constructive} \
                                 for (k,t,n)=({k},{t},{n})"
                            )))
                        }
                        CoverSearch::Aborted { weight } => search_floor = Some(weight),
                    },
                    Err(Error::CatalogTooLarge { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        rows.push(BoundsRow {
            k,
            t,
            n,
            lower,
            upper,
            constructive,
            construction,
            exact,
            search_floor,
        });
    }
    let mut notes = Vec::new();
    if (k, t) == (2, 2) {
        notes.push(F22_NOTE.to_string());
    }
    Ok(BoundsTable { rows, notes })
}

impl BoundsTable {
    /// Rows where some value falls outside the bounds, with a description.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            let tag = format!("(k,t,n)=({},{},{})", r.k, r.t, r.n);
            if r.constructive < r.lower {
                out.push(format!("{tag}: constructive {} < lower {}", r.constructive, r.lower));
            }
            if let Some(u) = r.upper {
                if r.constructive > u {
                    out.push(format!("{tag}: constructive {} > upper {u}", r.constructive));
                }
            }
            if let Some(e) = r.exact {
                let e = e as u128;
                if e < r.lower {
                    out.push(format!("{tag}: exact {e} < lower {}", r.lower));
                }
                if r.upper.is_some_and(|u| e > u) {
                    out.push(format!("{tag}: exact {e} > upper {:?}", r.upper));
                }
                if e > r.constructive {
                    out.push(format!("{tag}: exact {e} > constructive {}", r.constructive));
                }
            }
            if let Some(f) = r.search_floor {
                if f as u128 > r.constructive {
                    out.push(format!("{tag}: search floor {f} > constructive {}", r.constructive));
                }
            }
        }
        out
    }

    /// Aligned text with a header line and trailing notes.
    pub fn to_text(&self) -> String {
        let header = ["k", "t", "n", "lower", "upper", "constructive", "exact"];
        let mut cells: Vec<[String; 7]> = vec![header.map(String::from)];
        for r in &self.rows {
            cells.push([
                r.k.to_string(),
                r.t.to_string(),
                r.n.to_string(),
                r.lower.to_string(),
                r.upper.map_or("-".into(), |u| u.to_string()),
                format!("{} ({})", r.constructive, r.construction),
                match (r.exact, r.search_floor) {
                    (Some(e), _) => e.to_string(),
                    (None, Some(f)) => format!(">={f}"),
                    (None, None) => "-".into(),
                },
            ]);
        }
        let widths: Vec<usize> = (0..7)
            .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line = row
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            let _ = writeln!(out, "{}", line.trim_end());
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    /// One tab-separated record per row: k, t, n, lower, upper,
    /// constructive, exact (blank when unknown).
    pub fn to_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.k,
                r.t,
                r.n,
                r.lower,
                r.upper.map_or(String::new(), |u| u.to_string()),
                r.constructive,
                r.exact.map_or(String::new(), |e| e.to_string())
            );
        }
        out
    }
}
