//! JSON file formats for families, tuples, covers and reports.
//!
//! Elements are 1-based and strictly increasing within each set. Output is
//! canonical: compact JSON, fixed field order, one trailing newline, so a
//! load-save cycle reproduces a written file byte for byte.

use serde::{Deserialize, Serialize};

use crate::covers::{GpCover, GpProduct, KPartiteProduct, Mod2Cover};
use crate::error::{Error, Result};
use crate::set_systems::{SetFamily, SubsetBits, TupleSystem, VerifyReport};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    n: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleFile {
    n: usize,
    k: usize,
    t: usize,
    m: usize,
    families: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverFile {
    n: usize,
    k: usize,
    t: usize,
    products: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GpCoverFile {
    n: usize,
    k: usize,
    products: Vec<Vec<Vec<usize>>>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::format(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn subset(n: usize, elements: &[usize], at: impl Fn() -> String) -> Result<SubsetBits> {
    if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::format(
            at(),
            format!("elements must be strictly increasing, found {} then {}", w[0], w[1]),
        ));
    }
    if let Some(&e) = elements.iter().find(|&&e| e == 0 || e > n) {
        return Err(Error::format(at(), format!("element {e} is outside [1, {n}]")));
    }
    SubsetBits::from_elements(n, elements.iter().copied())
}

fn lists(sets: &[SubsetBits]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.elements()).collect()
}

fn semantic(at: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Format { .. } => e,
        other => Error::format(at, other.to_string()),
    }
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let raw: FamilyFile = parse(text)?;
    let sets = raw
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| subset(raw.n, s, || format!("sets[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(raw.n, sets).map_err(semantic("sets"))
}

pub fn family_to_json(f: &SetFamily) -> String {
    emit(&FamilyFile {
        n: f.ground_size(),
        sets: lists(f.sets()),
    })
}

pub fn parse_tuple(text: &str) -> Result<TupleSystem> {
    let raw: TupleFile = parse(text)?;
    if raw.families.len() != raw.k {
        return Err(Error::format(
            "families",
            format!("expected k = {} families, found {}", raw.k, raw.families.len()),
        ));
    }
    let mut families = Vec::with_capacity(raw.k);
    for (j, fam) in raw.families.iter().enumerate() {
        if fam.len() != raw.m {
            return Err(Error::format(
                format!("families[{j}]"),
                format!("expected m = {} sets, found {}", raw.m, fam.len()),
            ));
        }
        families.push(
            fam.iter()
                .enumerate()
                .map(|(i, s)| subset(raw.n, s, || format!("families[{j}][{i}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    TupleSystem::new(raw.k, raw.t, raw.n, families).map_err(semantic("header"))
}

pub fn tuple_to_json(t: &TupleSystem) -> String {
    emit(&TupleFile {
        n: t.n(),
        k: t.k(),
        t: t.t(),
        m: t.m(),
        families: t.families().iter().map(|f| lists(f)).collect(),
    })
}

fn products(n: usize, k: usize, raw: &[Vec<Vec<usize>>]) -> Result<Vec<Vec<SubsetBits>>> {
    raw.iter()
        .enumerate()
        .map(|(p, parts)| {
            if parts.len() != k {
                return Err(Error::format(
                    format!("products[{p}]"),
                    format!("expected {k} parts, found {}", parts.len()),
                ));
            }
            parts
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    if s.is_empty() {
                        return Err(Error::format(
                            format!("products[{p}][{j}]"),
                            "parts must be nonempty",
                        ));
                    }
                    subset(n, s, || format!("products[{p}][{j}]"))
                })
                .collect()
        })
        .collect()
}

pub fn parse_cover(text: &str) -> Result<Mod2Cover> {
    let raw: CoverFile = parse(text)?;
    let parts = products(raw.n, raw.k, &raw.products)?;
    let products = parts
        .into_iter()
        .map(KPartiteProduct::new)
        .collect::<Result<Vec<_>>>()?;
    Mod2Cover::new(raw.k, raw.t, raw.n, products).map_err(semantic("header"))
}

pub fn cover_to_json(c: &Mod2Cover) -> String {
    emit(&CoverFile {
        n: c.n(),
        k: c.k(),
        t: c.t(),
        products: c.products().iter().map(|p| lists(p.parts())).collect(),
    })
}

pub fn parse_gp_cover(text: &str) -> Result<GpCover> {
    let raw: GpCoverFile = parse(text)?;
    let parts = products(raw.n, raw.k, &raw.products)?;
    let products = parts
        .into_iter()
        .enumerate()
        .map(|(p, parts)| GpProduct::new(parts).map_err(semantic(&format!("products[{p}]"))))
        .collect::<Result<Vec<_>>>()?;
    GpCover::new(raw.k, raw.n, products).map_err(semantic("header"))
}

pub fn gp_cover_to_json(c: &GpCover) -> String {
    emit(&GpCoverFile {
        n: c.n(),
        k: c.k(),
        products: c.products().iter().map(|p| lists(p.parts())).collect(),
    })
}

pub fn report_to_json(r: &VerifyReport) -> String {
    emit(r)
}
