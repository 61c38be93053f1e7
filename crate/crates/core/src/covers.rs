//! Complete k-partite products, modulo-2 covers of `H_{k,t}(n)`,
//! exact Graham–Pollak covers, and the structural conversions between them.
//!
//! A cell of `[n]^k` is an index tuple `(i_1, …, i_k)`; it is an edge of
//! `H_{k,t}(n)` when at least `t` of its entries are distinct. Cells are
//! enumerated lexicographically, first coordinate most significant.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::par;
use crate::set_systems::{
    Expectation, SubsetBits, TupleSystem, VerifyReport, Violation, DEFAULT_VIOLATION_CAP,
};

/// Number of distinct entries of an index tuple over `[n]`.
pub fn distinct_index_count(idx: &[usize], n: usize) -> Result<usize> {
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::ElementOutOfRange {
            element: bad,
            ground: n,
        });
    }
    Ok(idx.iter().unique().count())
}

pub fn is_target_edge(idx: &[usize], t: usize) -> bool {
    idx.iter().unique().count() >= t
}

/// Lexicographic enumeration of `[n]^k` (1-based entries), `k >= 1`.
pub fn cells(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..cell_count(n, k)).map(move |i| cell_at(i, n, k))
}

pub fn cell_count(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

pub fn cell_index(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + (i - 1))
}

pub fn cell_at(mut index: usize, n: usize, k: usize) -> Vec<usize> {
    let mut idx = vec![0; k];
    for j in (0..k).rev() {
        idx[j] = index % n + 1;
        index /= n;
    }
    idx
}

/// `X_1 × … × X_k` with every part a nonempty subset of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KPartiteProduct {
    parts: Vec<SubsetBits>,
}

impl KPartiteProduct {
    pub fn new(parts: Vec<SubsetBits>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::params("a product needs at least one part"));
        };
        let n = first.ground_size();
        for (j, p) in parts.iter().enumerate() {
            if p.ground_size() != n {
                return Err(Error::GroundMismatch {
                    expected: n,
                    found: p.ground_size(),
                });
            }
            if p.is_empty() {
                return Err(Error::EmptyPart {
                    product: 0,
                    coordinate: j + 1,
                });
            }
        }
        Ok(KPartiteProduct { parts })
    }

    pub fn from_lists<I, S>(n: usize, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let parts = parts
            .into_iter()
            .map(|p| SubsetBits::from_elements(n, p))
            .collect::<Result<Vec<_>>>()?;
        KPartiteProduct::new(parts)
    }

    /// `[n]^k`.
    pub fn full(k: usize, n: usize) -> Result<Self> {
        KPartiteProduct::new(vec![SubsetBits::full(n); k])
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn ground_size(&self) -> usize {
        self.parts[0].ground_size()
    }

    pub fn parts(&self) -> &[SubsetBits] {
        &self.parts
    }

    pub fn contains(&self, idx: &[usize]) -> bool {
        idx.len() == self.parts.len() && self.parts.iter().zip(idx).all(|(p, &i)| p.contains(i))
    }

    /// Number of cells, `Π |X_j|`.
    pub fn volume(&self) -> usize {
        self.parts.iter().map(|p| p.len()).product()
    }

    /// Restricts every part to `[n']`; `None` when a part empties.
    pub fn restricted(&self, n: usize) -> Option<KPartiteProduct> {
        let parts: Vec<SubsetBits> = self.parts.iter().map(|p| p.with_ground(n)).collect();
        if parts.iter().any(|p| p.is_empty()) {
            None
        } else {
            Some(KPartiteProduct { parts })
        }
    }

    fn permuted(&self, perm: &[usize]) -> KPartiteProduct {
        KPartiteProduct {
            parts: perm.iter().map(|&j| self.parts[j].clone()).collect(),
        }
    }
}

/// A modulo-2 cover candidate for `H_{k,t}(n)`: an ordered multiset of products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Cover {
    k: usize,
    t: usize,
    n: usize,
    products: Vec<KPartiteProduct>,
}

impl Mod2Cover {
    pub fn new(k: usize, t: usize, n: usize, products: Vec<KPartiteProduct>) -> Result<Self> {
        if k < 2 || t < 2 || t > k {
            return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
        }
        for p in &products {
            if p.k() != k {
                return Err(Error::params(format!(
                    "product with {} parts in a {k}-partite cover",
                    p.k()
                )));
            }
            if p.ground_size() != n {
                return Err(Error::GroundMismatch {
                    expected: n,
                    found: p.ground_size(),
                });
            }
        }
        Ok(Mod2Cover { k, t, n, products })
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

    pub fn products(&self) -> &[KPartiteProduct] {
        &self.products
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }

    pub fn into_products(self) -> Vec<KPartiteProduct> {
        self.products
    }

    /// How many products contain the cell, multiplicity included.
    pub fn coverage_count(&self, idx: &[usize]) -> usize {
        self.products.iter().filter(|p| p.contains(idx)).count()
    }

    pub fn coverage_parity(&self, idx: &[usize]) -> crate::set_systems::Parity {
        crate::set_systems::Parity::of(self.coverage_count(idx))
    }

    /// Coverage counts of every cell, in lexicographic cell order.
    pub fn coverage_table(&self) -> Vec<u32> {
        let (n, k) = (self.n, self.k);
        let mut table = vec![0u32; cell_count(n, k)];
        if n == 0 {
            return table;
        }
        for p in &self.products {
            let lists: Vec<Vec<usize>> = p.parts.iter().map(|s| s.elements()).collect();
            // Odometer over the product's own cells.
            let mut pos = vec![0usize; k];
            'outer: loop {
                let idx = pos
                    .iter()
                    .zip(&lists)
                    .fold(0, |acc, (&q, l)| acc * n + (l[q] - 1));
                table[idx] += 1;
                for j in (0..k).rev() {
                    pos[j] += 1;
                    if pos[j] < lists[j].len() {
                        continue 'outer;
                    }
                    pos[j] = 0;
                }
                break;
            }
        }
        table
    }

    /// Parity of the coverage of every cell, in lexicographic cell order.
    pub fn parity_table(&self) -> Vec<bool> {
        self.coverage_table().into_iter().map(|c| c % 2 == 1).collect()
    }

    /// Restricts every product to `[n']`, dropping products that empty.
    pub fn restricted(&self, n: usize) -> Result<Mod2Cover> {
        if n > self.n {
            return Err(Error::params(format!(
                "cannot restrict a cover on [{}] to [{n}]",
                self.n
            )));
        }
        let products = self.products.iter().filter_map(|p| p.restricted(n)).collect();
        Mod2Cover::new(self.k, self.t, n, products)
    }
}

pub fn verify_mod2_cover(c: &Mod2Cover) -> VerifyReport {
    verify_mod2_cover_with(c, DEFAULT_VIOLATION_CAP)
}

/// Exhaustive over the `n^k` cells: odd coverage exactly on target edges.
pub fn verify_mod2_cover_with(c: &Mod2Cover, cap: usize) -> VerifyReport {
    let table = c.coverage_table();
    let (n, k, t) = (c.n, c.k, c.t);
    let chunk = 256;
    let chunks = par::map_range(table.len().div_ceil(chunk), |ci| {
        let mut out = Vec::new();
        let start = ci * chunk;
        for (index, &count) in table.iter().enumerate().skip(start).take(chunk) {
            if out.len() >= cap {
                break;
            }
            let idx = cell_at(index, n, k);
            let expected = if is_target_edge(&idx, t) {
                Expectation::Odd
            } else {
                Expectation::Even
            };
            let observed = count as usize;
            if !expected.holds(observed) {
                out.push(Violation {
                    index: idx,
                    observed,
                    expected,
                });
            }
        }
        out
    });
    VerifyReport::merge(chunks, cap)
}

/// Cells where the two covers' coverage parities differ (1-based tuples).
pub fn parity_difference(a: &Mod2Cover, b: &Mod2Cover) -> Result<Vec<Vec<usize>>> {
    if a.k != b.k || a.n != b.n {
        return Err(Error::params(format!(
            "covers live on different grids: k={}, n={} vs k={}, n={}",
            a.k, a.n, b.k, b.n
        )));
    }
    let (pa, pb) = (a.parity_table(), b.parity_table());
    Ok(pa
        .iter()
        .zip(&pb)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, _)| cell_at(i, a.n, a.k))
        .collect())
}

// ---------------------------------------------------------------------------
// Graham–Pollak covers
// ---------------------------------------------------------------------------

/// A product with pairwise disjoint nonempty parts inside one `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpProduct {
    parts: Vec<SubsetBits>,
}

impl GpProduct {
    pub fn new(parts: Vec<SubsetBits>) -> Result<Self> {
        let product = KPartiteProduct::new(parts)?;
        for (a, b) in (0..product.k()).tuple_combinations() {
            if product.parts[a].intersection_len(&product.parts[b]) != 0 {
                return Err(Error::params(format!(
                    "parts {} and {} of a Graham-Pollak product intersect",
                    a + 1,
                    b + 1
                )));
            }
        }
        Ok(GpProduct {
            parts: product.parts,
        })
    }

    pub fn from_lists<I, S>(n: usize, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        GpProduct::new(KPartiteProduct::from_lists(n, parts)?.parts)
    }

    pub fn parts(&self) -> &[SubsetBits] {
        &self.parts
    }

    /// A k-set is covered when it meets every part in exactly one element.
    pub fn covers(&self, set: &SubsetBits) -> bool {
        self.parts.iter().all(|p| p.intersection_len(set) == 1)
    }
}

/// A candidate exact (each edge once) cover of the complete k-graph on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpCover {
    k: usize,
    n: usize,
    products: Vec<GpProduct>,
}

impl GpCover {
    pub fn new(k: usize, n: usize, products: Vec<GpProduct>) -> Result<Self> {
        if k == 0 {
            return Err(Error::params("k must be positive"));
        }
        for p in &products {
            if p.parts.len() != k {
                return Err(Error::params(format!(
                    "product with {} parts in a {k}-partite cover",
                    p.parts.len()
                )));
            }
            if p.parts[0].ground_size() != n {
                return Err(Error::GroundMismatch {
                    expected: n,
                    found: p.parts[0].ground_size(),
                });
            }
        }
        Ok(GpCover { k, n, products })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn products(&self) -> &[GpProduct] {
        &self.products
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }
}

pub fn verify_exact_gp_cover(c: &GpCover) -> VerifyReport {
    verify_exact_gp_cover_with(c, DEFAULT_VIOLATION_CAP)
}

pub fn verify_exact_gp_cover_with(c: &GpCover, cap: usize) -> VerifyReport {
    let ksets: Vec<Vec<usize>> = (1..=c.n).combinations(c.k).collect();
    let chunks = par::map_slice(&ksets, |set| {
        let bits = SubsetBits::from_elements(c.n, set.iter().copied()).expect("in range");
        let observed = c.products.iter().filter(|p| p.covers(&bits)).count();
        if observed == 1 {
            vec![]
        } else {
            vec![Violation {
                index: set.clone(),
                observed,
                expected: Expectation::Exactly(1),
            }]
        }
    });
    VerifyReport::merge(chunks, cap)
}

/// Every coordinate permutation of every product of a verified exact cover.
/// The result covers each all-distinct cell of `[n]^k` exactly once.
pub fn permute_gp_cover(c: &GpCover) -> Result<Mod2Cover> {
    if c.k < 2 {
        return Err(Error::params("permuting needs k >= 2"));
    }
    if !verify_exact_gp_cover(c).valid {
        return Err(Error::pre("input is not an exact cover of the complete k-graph"));
    }
    let perms: Vec<Vec<usize>> = (0..c.k).permutations(c.k).collect();
    let mut products = Vec::with_capacity(perms.len() * c.len());
    for p in &c.products {
        let base = KPartiteProduct {
            parts: p.parts.clone(),
        };
        for perm in &perms {
            products.push(base.permuted(perm));
        }
    }
    Mod2Cover::new(c.k, c.k, c.n, products)
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

/// Product `s` becomes ground element `s`: `A_{j,i} = {s : i ∈ X_{s,j}}`.
/// The tuple has `n` sets per family over the ground `[|C|]`.
pub fn cover_to_tuple(c: &Mod2Cover) -> Result<TupleSystem> {
    let ground = c.len();
    let families = (0..c.k)
        .map(|j| {
            (1..=c.n)
                .map(|i| {
                    let members = c
                        .products
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.parts[j].contains(i))
                        .map(|(s, _)| s + 1);
                    SubsetBits::from_elements(ground, members)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    TupleSystem::new(c.k, c.t, ground, families)
}

/// Result of [`tuple_to_cover`]; ground elements whose product would have
/// an empty part are dropped (they cover nothing) and listed here.
#[derive(Clone, Debug)]
pub struct TupleConversion {
    pub cover: Mod2Cover,
    pub dropped: Vec<usize>,
}

/// Ground element `g` becomes the product with parts `{i : g ∈ A_{j,i}}`.
pub fn tuple_to_cover(t: &TupleSystem) -> Result<TupleConversion> {
    let m = t.m();
    let mut products = Vec::new();
    let mut dropped = Vec::new();
    for g in 1..=t.n() {
        let parts = (1..=t.k())
            .map(|j| SubsetBits::from_elements(m, (1..=m).filter(|&i| t.set(j, i).contains(g))))
            .collect::<Result<Vec<_>>>()?;
        if parts.iter().any(|p| p.is_empty()) {
            dropped.push(g);
        } else {
            products.push(KPartiteProduct { parts });
        }
    }
    Ok(TupleConversion {
        cover: Mod2Cover::new(t.k(), t.t(), m, products)?,
        dropped,
    })
}

/// Left and right vertex lists of one biclique.
pub type Biclique = (Vec<Vec<usize>>, Vec<Vec<usize>>);

/// A family of bicliques on the vertices of the ordered Kneser graph
/// `OK_{n:k}`: ordered k-tuples of distinct elements of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkBicliqueCover {
    n: usize,
    k: usize,
    bicliques: Vec<Biclique>,
}

impl OkBicliqueCover {
    pub fn new(n: usize, k: usize, bicliques: Vec<Biclique>) -> Result<Self> {
        for (l, r) in &bicliques {
            for v in l.iter().chain(r) {
                if v.len() != k || distinct_index_count(v, n)? != k {
                    return Err(Error::params(format!(
                        "{v:?} is not a vertex of OK_{{{n}:{k}}}"
                    )));
                }
            }
        }
        Ok(OkBicliqueCover { n, k, bicliques })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bicliques(&self) -> &[Biclique] {
        &self.bicliques
    }

    pub fn len(&self) -> usize {
        self.bicliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bicliques.is_empty()
    }
}

/// Vertices of `OK_{n:k}` in lexicographic order.
pub fn ordered_kneser_vertices(n: usize, k: usize) -> Vec<Vec<usize>> {
    (1..=n).permutations(k).collect()
}

/// Splits each product of a cover of `H_{2κ,2κ}(n)` into the biclique
/// `(Π_{j≤κ} X_j ∩ V, Π_{j>κ} X_j ∩ V)` on `V = V(OK_{n:κ})`.
pub fn cover_to_ok_biclique_cover(c: &Mod2Cover) -> Result<OkBicliqueCover> {
    if !c.k.is_multiple_of(2) {
        return Err(Error::params(format!("k = {} must be even", c.k)));
    }
    if c.t != c.k {
        return Err(Error::params("the target must be H_{k,k}(n)"));
    }
    let kappa = c.k / 2;
    let side = |parts: &[SubsetBits]| -> Vec<Vec<usize>> {
        let lists: Vec<Vec<usize>> = parts.iter().map(|p| p.elements()).collect();
        lists
            .into_iter()
            .multi_cartesian_product()
            .filter(|v| v.iter().all_unique())
            .collect()
    };
    let bicliques = c
        .products
        .iter()
        .map(|p| (side(&p.parts[..kappa]), side(&p.parts[kappa..])))
        .filter(|(l, r)| !l.is_empty() && !r.is_empty())
        .collect();
    Ok(OkBicliqueCover {
        n: c.n,
        k: kappa,
        bicliques,
    })
}

/// Checks every ordered vertex pair `(u, v)`: the number of bicliques with
/// `u` on the left and `v` on the right must be odd exactly when `u` and `v`
/// are disjoint.
pub fn verify_ok_biclique_cover(b: &OkBicliqueCover) -> VerifyReport {
    verify_ok_biclique_cover_with(b, DEFAULT_VIOLATION_CAP)
}

pub fn verify_ok_biclique_cover_with(b: &OkBicliqueCover, cap: usize) -> VerifyReport {
    let verts = ordered_kneser_vertices(b.n, b.k);
    let index_of: std::collections::HashMap<&[usize], usize> =
        verts.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let nv = verts.len();
    let mut counts = vec![0u32; nv * nv];
    for (l, r) in &b.bicliques {
        let ri: Vec<usize> = r.iter().map(|v| index_of[v.as_slice()]).collect();
        for u in l {
            let ui = index_of[u.as_slice()];
            for &vi in &ri {
                counts[ui * nv + vi] += 1;
            }
        }
    }
    let masks: Vec<u128> = verts
        .iter()
        .map(|v| v.iter().fold(0u128, |m, &e| m | 1 << (e - 1)))
        .collect();
    let chunks = par::map_range(nv, |ui| {
        let mut out = Vec::new();
        for vi in 0..nv {
            if out.len() >= cap {
                break;
            }
            let expected = if masks[ui] & masks[vi] == 0 {
                Expectation::Odd
            } else {
                Expectation::Even
            };
            let observed = counts[ui * nv + vi] as usize;
            if !expected.holds(observed) {
                out.push(Violation {
                    index: verts[ui].iter().chain(&verts[vi]).copied().collect(),
                    observed,
                    expected,
                });
            }
        }
        out
    });
    VerifyReport::merge(chunks, cap)
}

/// Link of the element `n` in the last coordinate.
pub fn link_cover(c: &Mod2Cover) -> Result<Mod2Cover> {
    link_cover_at(c, c.n, c.k)
}

/// Link of element `v` in coordinate `coord` (both 1-based): keep products
/// whose `coord` part contains `v`, drop that coordinate, remove `v` from
/// the other parts and relabel the elements above `v` down by one.
pub fn link_cover_at(c: &Mod2Cover, v: usize, coord: usize) -> Result<Mod2Cover> {
    if c.t != c.k || c.k < 3 {
        return Err(Error::params("link needs a cover of H_{k,k}(n) with k >= 3"));
    }
    if v == 0 || v > c.n || coord == 0 || coord > c.k {
        return Err(Error::params(format!(
            "vertex {v} / coordinate {coord} out of range"
        )));
    }
    let report = verify_mod2_cover(c);
    if !report.valid {
        return Err(Error::pre(format!(
            "input cover is invalid ({} violations shown)",
            report.violations.len()
        )));
    }
    let n = c.n - 1;
    let relabel = |s: &SubsetBits| {
        SubsetBits::from_elements(
            n,
            s.elements()
                .into_iter()
                .filter(|&e| e != v)
                .map(|e| if e > v { e - 1 } else { e }),
        )
    };
    let mut products = Vec::new();
    for p in &c.products {
        if !p.parts[coord - 1].contains(v) {
            continue;
        }
        let parts = p
            .parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != coord - 1)
            .map(|(_, s)| relabel(s))
            .collect::<Result<Vec<_>>>()?;
        if parts.iter().all(|s| !s.is_empty()) {
            products.push(KPartiteProduct { parts });
        }
    }
    Mod2Cover::new(c.k - 1, c.k - 1, n, products)
}
