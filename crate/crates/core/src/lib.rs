//! Verification, constructions and exact search for modulo-2 oddtown
//! problems.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2`]: bit-packed linear algebra over F_2 and small prime fields,
//!   including a minimum-weight solver for parity systems.
//! - [`set_systems`]: subsets, set families, tuple systems and the parity
//!   predicates (oddtown, skew oddtown, (k,t)-oddtown, Bollobás tuples).
//! - [`covers`]: complete k-partite products, modulo-2 covers of the
//!   targets `H_{k,t}(n)`, Graham–Pollak covers and the reductions between
//!   covers, tuples and ordered-Kneser biclique covers.
//! - [`constructions`]: every explicit family and cover, plus the tuple
//!   reductions that turn (k,t)-tuples into set pairs.
//! - [`ranks`]: inclusion matrices, Kneser graphs, Lucas binomials and
//!   Wilson's rank formula.
//! - [`search`]: exact `f_{k,t}(n)` / `b_{k,t}(m)` at small parameters and
//!   the bounds table.
//! - [`io`]: the JSON file formats used by the command-line tool.
//!
//! With the default `parallel` feature the exhaustive sweeps run on rayon;
//! without it every sweep runs sequentially and produces identical output.

pub mod constructions;
pub mod covers;
pub mod error;
pub mod gf2;
pub mod io;
mod par;
pub mod ranks;
pub mod search;
pub mod set_systems;

pub use error::{Error, Result};
