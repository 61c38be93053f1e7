//! Subsets, set families, tuple systems and their parity predicates.
//!
//! Elements are 1-based throughout (`[n] = {1, …, n}`), as are the indices
//! reported in violation witnesses.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{self, BitVector};
use crate::par;

pub const DEFAULT_VIOLATION_CAP: usize = 16;

/// A subset of the ground set `[n]`, stored as its characteristic vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetBits {
    bits: BitVector,
}

impl SubsetBits {
    pub fn empty(n: usize) -> Self {
        SubsetBits {
            bits: BitVector::zeros(n),
        }
    }

    pub fn full(n: usize) -> Self {
        SubsetBits {
            bits: BitVector::ones(n),
        }
    }

    pub fn singleton(n: usize, element: usize) -> Result<Self> {
        SubsetBits::from_elements(n, [element])
    }

    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = SubsetBits::empty(n);
        for e in elements {
            s.insert(e)?;
        }
        Ok(s)
    }

    pub fn from_bits(bits: BitVector) -> Self {
        SubsetBits { bits }
    }

    pub fn ground_size(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn contains(&self, element: usize) -> bool {
        element >= 1 && element <= self.ground_size() && self.bits.get(element - 1)
    }

    pub fn insert(&mut self, element: usize) -> Result<()> {
        if element == 0 || element > self.ground_size() {
            return Err(Error::ElementOutOfRange {
                element,
                ground: self.ground_size(),
            });
        }
        self.bits.set(element - 1, true);
        Ok(())
    }

    pub fn remove(&mut self, element: usize) {
        if element >= 1 && element <= self.ground_size() {
            self.bits.set(element - 1, false);
        }
    }

    /// Cardinality.
    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(&self) -> Vec<usize> {
        self.bits.iter_ones().map(|p| p + 1).collect()
    }

    fn check_ground(&self, other: &SubsetBits) -> Result<()> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::GroundMismatch {
                expected: self.ground_size(),
                found: other.ground_size(),
            });
        }
        Ok(())
    }

    pub fn intersection(&self, other: &SubsetBits) -> Result<SubsetBits> {
        self.check_ground(other)?;
        let mut out = self.clone();
        out.bits.and_assign(&other.bits);
        Ok(out)
    }

    pub fn intersection_len(&self, other: &SubsetBits) -> usize {
        self.bits.and_count(&other.bits)
    }

    pub fn complement(&self) -> SubsetBits {
        SubsetBits {
            bits: self.bits.not(),
        }
    }

    /// The same elements viewed in `[n']`; elements above `n'` are dropped.
    pub fn with_ground(&self, n: usize) -> SubsetBits {
        SubsetBits {
            bits: self.bits.resized(n),
        }
    }

    pub(crate) fn and_assign(&mut self, other: &SubsetBits) {
        self.bits.and_assign(&other.bits);
    }
}

impl fmt::Debug for SubsetBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/[{}]", self.elements(), self.ground_size())
    }
}

/// Parity of a cardinality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(count: usize) -> Parity {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Parity of `|S_1 ∩ … ∩ S_r|`; the list must be nonempty.
pub fn intersection_parity(sets: &[SubsetBits]) -> Result<Parity> {
    let (first, rest) = sets
        .split_first()
        .ok_or_else(|| Error::params("intersection of an empty list of sets"))?;
    let mut acc = first.clone();
    for s in rest {
        acc.check_ground(s)?;
        acc.and_assign(s);
    }
    Ok(Parity::of(acc.len()))
}

/// What a checked quantity should have been.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Odd,
    Even,
    Exactly(usize),
}

impl Expectation {
    pub fn parity(p: Parity) -> Self {
        match p {
            Parity::Even => Expectation::Even,
            Parity::Odd => Expectation::Odd,
        }
    }

    pub fn holds(self, observed: usize) -> bool {
        match self {
            Expectation::Odd => observed % 2 == 1,
            Expectation::Even => observed.is_multiple_of(2),
            Expectation::Exactly(v) => observed == v,
        }
    }
}

/// One failed condition: the 1-based index tuple, the observed size or
/// count, and what was required.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: Vec<usize>,
    pub observed: usize,
    pub expected: Expectation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        VerifyReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn ok() -> Self {
        VerifyReport::from_violations(vec![])
    }

    /// Concatenates per-chunk violation lists (already in order) and caps.
    pub(crate) fn merge(chunks: Vec<Vec<Violation>>, cap: usize) -> Self {
        let mut all: Vec<Violation> = chunks.into_iter().flatten().collect();
        all.truncate(cap);
        VerifyReport::from_violations(all)
    }
}

/// An indexed family of subsets of `[n]`; duplicates are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    sets: Vec<SubsetBits>,
}

impl SetFamily {
    pub fn new(n: usize, sets: Vec<SubsetBits>) -> Result<Self> {
        if let Some(bad) = sets.iter().find(|s| s.ground_size() != n) {
            return Err(Error::GroundMismatch {
                expected: n,
                found: bad.ground_size(),
            });
        }
        Ok(SetFamily { n, sets })
    }

    pub fn from_lists<I, S>(n: usize, lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let sets = lists
            .into_iter()
            .map(|l| SubsetBits::from_elements(n, l))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(n, sets)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[SubsetBits] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Adds the fresh element `n + 1` to every set.
    pub fn with_auxiliary_element(&self) -> SetFamily {
        let n = self.n + 1;
        let sets = self
            .sets
            .iter()
            .map(|s| {
                let mut t = s.with_ground(n);
                t.insert(n).expect("fresh element is in range");
                t
            })
            .collect();
        SetFamily { n, sets }
    }
}

/// `k` ordered families `A_1, …, A_k` of `m` subsets of `[n]` each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSystem {
    k: usize,
    t: usize,
    n: usize,
    families: Vec<Vec<SubsetBits>>,
}

impl TupleSystem {
    pub fn new(k: usize, t: usize, n: usize, families: Vec<Vec<SubsetBits>>) -> Result<Self> {
        if k < 2 || t < 2 || t > k {
            return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
        }
        if families.len() != k {
            return Err(Error::params(format!(
                "expected {k} families, got {}",
                families.len()
            )));
        }
        let m = families[0].len();
        for (j, fam) in families.iter().enumerate() {
            if fam.len() != m {
                return Err(Error::params(format!(
                    "family {} has {} sets, family 1 has {m}",
                    j + 1,
                    fam.len()
                )));
            }
            if let Some(bad) = fam.iter().find(|s| s.ground_size() != n) {
                return Err(Error::GroundMismatch {
                    expected: n,
                    found: bad.ground_size(),
                });
            }
        }
        Ok(TupleSystem { k, t, n, families })
    }

    /// Every family equal to `family`.
    pub fn uniform(family: &SetFamily, k: usize, t: usize) -> Result<Self> {
        TupleSystem::new(k, t, family.ground_size(), vec![family.sets().to_vec(); k])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Ground size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sets per family.
    pub fn m(&self) -> usize {
        self.families[0].len()
    }

    pub fn families(&self) -> &[Vec<SubsetBits>] {
        &self.families
    }

    /// `A_{j,i}` with 1-based `j` and `i`.
    pub fn set(&self, j: usize, i: usize) -> &SubsetBits {
        &self.families[j - 1][i - 1]
    }

    /// Adds the fresh element `n + 1` to every set of every family, which
    /// flips the parity of every intersection.
    pub fn with_auxiliary_element(&self) -> TupleSystem {
        let n = self.n + 1;
        let families = self
            .families
            .iter()
            .map(|fam| {
                fam.iter()
                    .map(|s| {
                        let mut t = s.with_ground(n);
                        t.insert(n).expect("fresh element is in range");
                        t
                    })
                    .collect()
            })
            .collect();
        TupleSystem {
            k: self.k,
            t: self.t,
            n,
            families,
        }
    }
}

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

/// Oddtown rules: odd sizes, even pairwise intersections.
pub fn verify_oddtown(f: &SetFamily) -> VerifyReport {
    verify_oddtown_with(f, DEFAULT_VIOLATION_CAP)
}

pub fn verify_oddtown_with(f: &SetFamily, cap: usize) -> VerifyReport {
    kt_oddtown_report(f, 2, 2, cap)
}

/// Which off-diagonal pairs a skew-oddtown check constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SkewMode {
    /// `|A_i ∩ B_j|` even for `i < j` only.
    #[default]
    UpperTriangular,
    /// `|A_i ∩ B_j|` even for every `i != j`.
    Symmetric,
}

pub fn verify_skew_oddtown(a: &SetFamily, b: &SetFamily) -> Result<VerifyReport> {
    verify_skew_oddtown_with(a, b, SkewMode::UpperTriangular, DEFAULT_VIOLATION_CAP)
}

pub fn verify_skew_oddtown_with(
    a: &SetFamily,
    b: &SetFamily,
    mode: SkewMode,
    cap: usize,
) -> Result<VerifyReport> {
    if a.len() != b.len() {
        return Err(Error::params(format!(
            "skew oddtown needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.ground_size() != b.ground_size() {
        return Err(Error::GroundMismatch {
            expected: a.ground_size(),
            found: b.ground_size(),
        });
    }
    let m = a.len();
    let chunks = par::map_range(m, |i| {
        let mut out = Vec::new();
        for j in 0..m {
            if out.len() >= cap {
                break;
            }
            let expected = if i == j {
                Expectation::Odd
            } else if i < j || mode == SkewMode::Symmetric {
                Expectation::Even
            } else {
                continue;
            };
            let observed = a.sets[i].intersection_len(&b.sets[j]);
            if !expected.holds(observed) {
                out.push(Violation {
                    index: vec![i + 1, j + 1],
                    observed,
                    expected,
                });
            }
        }
        out
    });
    Ok(VerifyReport::merge(chunks, cap))
}

/// (k,t)-oddtown rules: for `d` distinct sets with `d <= k`, the
/// intersection is odd when `d < t` and even when `d >= t`.
pub fn verify_kt_oddtown(f: &SetFamily, k: usize, t: usize) -> Result<VerifyReport> {
    verify_kt_oddtown_with(f, k, t, DEFAULT_VIOLATION_CAP)
}

pub fn verify_kt_oddtown_with(f: &SetFamily, k: usize, t: usize, cap: usize) -> Result<VerifyReport> {
    if t < 2 || t > k {
        return Err(Error::params(format!("need 2 <= t <= k, got k={k}, t={t}")));
    }
    if f.is_empty() {
        return Err(Error::params("(k,t)-oddtown check needs a nonempty family"));
    }
    Ok(kt_oddtown_report(f, k, t, cap))
}

fn kt_oddtown_report(f: &SetFamily, k: usize, t: usize, cap: usize) -> VerifyReport {
    let m = f.len();
    let depth = k.min(m);
    let chunks = par::map_range(m, |first| {
        let mut out = Vec::new();
        let mut idx = vec![first];
        subsets_from(f, &mut idx, f.sets[first].clone(), depth, t, cap, &mut out);
        out
    });
    VerifyReport::merge(chunks, cap)
}

// Visits index sets in lexicographic order with a running intersection.
fn subsets_from(
    f: &SetFamily,
    idx: &mut Vec<usize>,
    acc: SubsetBits,
    depth: usize,
    t: usize,
    cap: usize,
    out: &mut Vec<Violation>,
) {
    if out.len() >= cap {
        return;
    }
    let d = idx.len();
    let expected = if d < t {
        Expectation::Odd
    } else {
        Expectation::Even
    };
    let observed = acc.len();
    if !expected.holds(observed) {
        out.push(Violation {
            index: idx.iter().map(|i| i + 1).collect(),
            observed,
            expected,
        });
    }
    if d == depth {
        return;
    }
    let last = *idx.last().expect("nonempty index set");
    for next in last + 1..f.len() {
        let mut a = acc.clone();
        a.and_assign(&f.sets[next]);
        idx.push(next);
        subsets_from(f, idx, a, depth, t, cap, out);
        idx.pop();
        if out.len() >= cap {
            return;
        }
    }
}

/// Which parity marks an index tuple with fewer than `t` distinct indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParityConvention {
    /// Even iff fewer than `t` distinct indices (Bollobás tuples modulo 2).
    #[default]
    EvenBelowThreshold,
    /// Odd iff fewer than `t` distinct indices, the convention obtained
    /// after adding an auxiliary element to every set.
    OddBelowThreshold,
}

impl ParityConvention {
    pub fn expected(self, distinct: usize, t: usize) -> Parity {
        let below = if distinct < t {
            Parity::Even
        } else {
            Parity::Odd
        };
        match self {
            ParityConvention::EvenBelowThreshold => below,
            ParityConvention::OddBelowThreshold => below.flip(),
        }
    }
}

/// Exhaustive check over all `m^k` index tuples.
pub fn verify_bollobas_tuple(t: &TupleSystem) -> VerifyReport {
    verify_tuple_with(t, ParityConvention::EvenBelowThreshold, DEFAULT_VIOLATION_CAP)
}

pub fn verify_tuple_with(tuple: &TupleSystem, convention: ParityConvention, cap: usize) -> VerifyReport {
    let m = tuple.m();
    let k = tuple.k;
    let chunks = par::map_range(m, |first| {
        let mut out = Vec::new();
        let mut idx = vec![first];
        let mut counts = vec![0usize; m];
        counts[first] = 1;
        tuple_dfs(
            tuple,
            &mut idx,
            &mut counts,
            1,
            tuple.families[0][first].clone(),
            convention,
            cap,
            &mut out,
        );
        out
    });
    debug_assert!(k >= 2);
    VerifyReport::merge(chunks, cap)
}

#[allow(clippy::too_many_arguments)]
fn tuple_dfs(
    tuple: &TupleSystem,
    idx: &mut Vec<usize>,
    counts: &mut [usize],
    distinct: usize,
    acc: SubsetBits,
    convention: ParityConvention,
    cap: usize,
    out: &mut Vec<Violation>,
) {
    if out.len() >= cap {
        return;
    }
    let j = idx.len();
    if j == tuple.k {
        let expected = convention.expected(distinct, tuple.t);
        let observed = acc.len();
        if Parity::of(observed) != expected {
            out.push(Violation {
                index: idx.iter().map(|i| i + 1).collect(),
                observed,
                expected: Expectation::parity(expected),
            });
        }
        return;
    }
    for i in 0..tuple.m() {
        let mut a = acc.clone();
        a.and_assign(&tuple.families[j][i]);
        let fresh = counts[i] == 0;
        counts[i] += 1;
        idx.push(i);
        tuple_dfs(
            tuple,
            idx,
            counts,
            distinct + fresh as usize,
            a,
            convention,
            cap,
            out,
        );
        idx.pop();
        counts[i] -= 1;
        if out.len() >= cap {
            return;
        }
    }
}

/// Outcome of the linear-algebra certificate for an oddtown family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceCertificate {
    /// Characteristic vectors are independent; `rank == |F|`.
    Independent { rank: usize },
    /// 0-based indices of a nonempty subfamily whose vectors sum to zero.
    Dependent { combination: Vec<usize> },
}

/// Certifies `|F| <= n` for an oddtown family by independence of its
/// characteristic vectors.
pub fn oddtown_certificate(f: &SetFamily) -> Result<IndependenceCertificate> {
    let report = verify_oddtown(f);
    if !report.valid {
        return Err(Error::pre("family does not follow oddtown rules"));
    }
    let vectors: Vec<BitVector> = f.sets.iter().map(|s| s.bits.clone()).collect();
    match gf2::find_dependency(&vectors)? {
        None => Ok(IndependenceCertificate::Independent { rank: f.len() }),
        Some(combo) => Ok(IndependenceCertificate::Dependent {
            combination: combo.iter_ones().collect(),
        }),
    }
}

/// `{A_anchor ∩ A_i : i != anchor}` together with the (3,3)-oddtown report
/// of the input; the output is computed even when the input fails.
#[derive(Clone, Debug)]
pub struct Reduction33 {
    pub family: SetFamily,
    pub input_report: VerifyReport,
}

pub fn reduce_33_oddtown(f: &SetFamily) -> Result<Reduction33> {
    reduce_33_oddtown_at(f, 1)
}

/// As [`reduce_33_oddtown`] with a 1-based anchor index.
pub fn reduce_33_oddtown_at(f: &SetFamily, anchor: usize) -> Result<Reduction33> {
    if f.len() < 2 {
        return Err(Error::params("reduction needs at least two sets"));
    }
    if anchor == 0 || anchor > f.len() {
        return Err(Error::params(format!("anchor {anchor} out of range")));
    }
    let a = &f.sets[anchor - 1];
    let sets = f
        .sets
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != anchor - 1)
        .map(|(_, s)| {
            let mut x = a.clone();
            x.and_assign(s);
            x
        })
        .collect();
    Ok(Reduction33 {
        family: SetFamily::new(f.n, sets)?,
        input_report: kt_oddtown_report(f, 3, 3, DEFAULT_VIOLATION_CAP),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, e: &[usize]) -> SubsetBits {
        SubsetBits::from_elements(n, e.iter().copied()).unwrap()
    }

    fn pairs_family() -> SetFamily {
        // Ground = the six 2-subsets of [4] in colex order.
        let pairs = [[1, 2], [1, 3], [2, 3], [1, 4], [2, 4], [3, 4]];
        let lists: Vec<Vec<usize>> = (1..=4)
            .map(|i| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.contains(&i))
                    .map(|(g, _)| g + 1)
                    .collect()
            })
            .collect();
        SetFamily::from_lists(6, lists).unwrap()
    }

    #[test]
    fn subset_basics() {
        let a = s(5, &[1, 3, 5]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.elements(), vec![1, 3, 5]);
        assert_eq!(a.complement().elements(), vec![2, 4]);
        assert!(SubsetBits::from_elements(3, [4]).is_err());
        assert!(SubsetBits::from_elements(3, [0]).is_err());
        assert!(a.intersection(&s(4, &[1])).is_err());
        assert_eq!(a.with_ground(3).elements(), vec![1, 3]);
    }

    #[test]
    fn intersection_parity_examples() {
        assert_eq!(intersection_parity(&[s(3, &[1, 2, 3])]).unwrap(), Parity::Odd);
        assert_eq!(
            intersection_parity(&[s(4, &[1, 2]), s(4, &[2, 3])]).unwrap(),
            Parity::Odd
        );
        assert_eq!(
            intersection_parity(&[s(4, &[1, 2]), s(4, &[3, 4])]).unwrap(),
            Parity::Even
        );
        assert!(intersection_parity(&[]).is_err());
    }

    #[test]
    fn oddtown_examples() {
        let singles = SetFamily::from_lists(5, (1..=5).map(|i| vec![i])).unwrap();
        assert!(verify_oddtown(&singles).valid);

        let bad = SetFamily::from_lists(3, [vec![1, 2], vec![2, 3]]).unwrap();
        let r = verify_oddtown(&bad);
        assert!(!r.valid);
        assert_eq!(r.violations[0].index, vec![1]);
        assert_eq!(r.violations[0].observed, 2);
        assert_eq!(r.violations[0].expected, Expectation::Odd);
    }

    #[test]
    fn skew_examples() {
        let n = 4;
        let diag = SetFamily::from_lists(n, (1..=n).map(|i| vec![i])).unwrap();
        assert!(verify_skew_oddtown(&diag, &diag).unwrap().valid);

        let a = SetFamily::from_lists(2, [vec![1], vec![1]]).unwrap();
        let b = SetFamily::from_lists(2, [vec![1], vec![2]]).unwrap();
        let r = verify_skew_oddtown(&a, &b).unwrap();
        assert!(!r.valid);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].index, vec![2, 2]);

        let short = SetFamily::from_lists(2, [vec![1]]).unwrap();
        assert!(verify_skew_oddtown(&a, &short).is_err());
    }

    #[test]
    fn skew_lower_triangle_is_free_unless_symmetric() {
        // |A_2 ∩ B_1| = 1 is unconstrained in the upper-triangular reading.
        let a = SetFamily::from_lists(2, [vec![1], vec![1, 2]]).unwrap();
        let b = SetFamily::from_lists(2, [vec![1], vec![2]]).unwrap();
        assert!(verify_skew_oddtown(&a, &b).unwrap().valid);
        let r = verify_skew_oddtown_with(&a, &b, SkewMode::Symmetric, 16).unwrap();
        assert_eq!(r.violations[0].index, vec![2, 1]);
    }

    #[test]
    fn kt_oddtown_examples() {
        let f = pairs_family();
        assert!(verify_kt_oddtown(&f, 3, 3).unwrap().valid);

        let singles = SetFamily::from_lists(4, (1..=4).map(|i| vec![i])).unwrap();
        assert!(verify_kt_oddtown(&singles, 2, 2).unwrap().valid);

        let bad = SetFamily::from_lists(4, [vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4]]).unwrap();
        let r = verify_kt_oddtown(&bad, 3, 3).unwrap();
        assert!(!r.valid);
        assert_eq!(r.violations[0].index.len(), 2);

        assert!(verify_kt_oddtown(&f, 2, 3).is_err());
        assert!(verify_kt_oddtown(&SetFamily::new(3, vec![]).unwrap(), 3, 3).is_err());
    }

    #[test]
    fn tuple_diagonal_must_be_even() {
        let fam = vec![s(1, &[1])];
        let t = TupleSystem::new(2, 2, 1, vec![fam.clone(), fam]).unwrap();
        let r = verify_bollobas_tuple(&t);
        assert!(!r.valid);
        assert_eq!(r.violations[0].index, vec![1, 1]);
    }

    #[test]
    fn tuple_shape_checked() {
        let a = vec![s(2, &[1])];
        let b = vec![s(2, &[1]), s(2, &[2])];
        assert!(TupleSystem::new(2, 2, 2, vec![a.clone(), b]).is_err());
        assert!(TupleSystem::new(2, 3, 2, vec![a.clone(), a.clone()]).is_err());
        assert!(TupleSystem::new(2, 2, 3, vec![a.clone(), a]).is_err());
    }

    #[test]
    fn auxiliary_element_bridges_conventions() {
        let f = pairs_family();
        let plain = TupleSystem::uniform(&f, 3, 3).unwrap();
        // Same family as a tuple: every parity is the complement of Def-style.
        assert!(!verify_bollobas_tuple(&plain).valid);
        assert!(verify_tuple_with(&plain, ParityConvention::OddBelowThreshold, 16).valid);
        let aux = plain.with_auxiliary_element();
        assert!(verify_bollobas_tuple(&aux).valid);
        assert!(!verify_tuple_with(&aux, ParityConvention::OddBelowThreshold, 16).valid);
        let twice = aux.with_auxiliary_element();
        assert!(verify_tuple_with(&twice, ParityConvention::OddBelowThreshold, 16).valid);
    }

    #[test]
    fn certificate_examples() {
        let singles = SetFamily::from_lists(4, (1..=4).map(|i| vec![i])).unwrap();
        assert_eq!(
            oddtown_certificate(&singles).unwrap(),
            IndependenceCertificate::Independent { rank: 4 }
        );
        let empty = SetFamily::new(4, vec![]).unwrap();
        assert_eq!(
            oddtown_certificate(&empty).unwrap(),
            IndependenceCertificate::Independent { rank: 0 }
        );
        let bad = SetFamily::from_lists(3, [vec![1, 2]]).unwrap();
        assert!(matches!(oddtown_certificate(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn reduce_33_examples() {
        let f = pairs_family();
        let red = reduce_33_oddtown(&f).unwrap();
        assert!(red.input_report.valid);
        assert_eq!(red.family.len(), 3);
        assert!(verify_oddtown(&red.family).valid);

        // Two disjoint odd sets break the pairwise-odd rule but still reduce.
        let g = SetFamily::from_lists(4, [vec![1], vec![2, 3, 4]]).unwrap();
        let red = reduce_33_oddtown(&g).unwrap();
        assert!(!red.input_report.valid);
        assert_eq!(red.family.len(), 1);

        let full = SetFamily::from_lists(3, [vec![1, 2, 3], vec![1], vec![2, 3]]).unwrap();
        let red = reduce_33_oddtown(&full).unwrap();
        assert_eq!(red.family.sets(), &full.sets()[1..]);

        assert!(reduce_33_oddtown(&SetFamily::from_lists(2, [vec![1]]).unwrap()).is_err());
    }
}
