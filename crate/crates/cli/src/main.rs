//! `oddtown`: verify, construct, convert, rank, search and tabulate.
//!
//! Exit status: 0 valid/success, 1 invalid object, 2 usage or format error,
//! 3 internal inconsistency. The last line printed is always the verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oddtown_core::constructions::{
    build_b22_pair, build_cover_33, build_cover_43, build_cover_t2, build_kt_oddtown_family,
    build_partition_cover, reduce_triple_b33, reduce_tuple_to_pair, trivial_gp_cover,
};
use oddtown_core::covers::{
    cover_to_tuple, parity_difference, permute_gp_cover, tuple_to_cover, verify_exact_gp_cover,
    verify_mod2_cover,
};
use oddtown_core::io;
use oddtown_core::ranks::{build_inclusion_matrix, sample_mstar_rank, wilson_rank};
use oddtown_core::search::{
    bounds_table, exact_b, min_mod2_cover, BValue, CoverSearch, SearchConfig, TableConfig,
    DEFAULT_CATALOG_CAP,
};
use oddtown_core::set_systems::{
    verify_bollobas_tuple, verify_kt_oddtown, verify_oddtown, verify_skew_oddtown_with, SkewMode,
    VerifyReport,
};
use oddtown_core::Error;

const DIRECT_RANK_LIMIT: u128 = 1_000_000;

#[derive(Parser)]
#[command(name = "oddtown", version, about = "Modulo-2 oddtown workbench")]
struct Cli {
    /// Worker threads for the parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a file against its defining parity rules.
    Verify {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        file: PathBuf,
        /// Second family (the B side) for `--kind skew`.
        #[arg(long, required_if_eq("kind", "skew"))]
        other: Option<PathBuf>,
        /// Check every off-diagonal pair of a skew instance.
        #[arg(long)]
        symmetric: bool,
        #[arg(long, required_if_eq("kind", "kt"))]
        k: Option<usize>,
        #[arg(long, required_if_eq("kind", "kt"))]
        t: Option<usize>,
        /// Compare the coverage parity of a cover file with this one instead.
        #[arg(long, value_name = "COVER")]
        parity_diff: Option<PathBuf>,
        /// Print the report as JSON before the verdict.
        #[arg(long)]
        json: bool,
    },
    /// Build a named construction and write it in the matching format.
    Construct {
        #[arg(long, value_enum)]
        name: Construction,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Input tuple for the `reduce-*` constructions.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate between covers and tuples.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank of the inclusion matrix M(n,k,l) over F_p: formula and elimination.
    Rank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Also report the rank with random nonzero entries on the same support.
        #[arg(long, requires = "seed")]
        mstar: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact f_{k,t}(n), or b_{k,t}(m) with --m.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, required_unless_present = "m", conflicts_with = "m")]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 16)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_CATALOG_CAP)]
        cap: usize,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        no_rank_bound: bool,
        /// Write the optimal cover here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds table for fixed (k,t) over a range of n.
    Table {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Skip the exact searches.
        #[arg(long)]
        no_exact: bool,
        /// Tab-separated copy of the rows.
        #[arg(long)]
        rows: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Family,
    Skew,
    Kt,
    Tuple,
    Cover,
    Gp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    B22Pair,
    KtFamily,
    Cover33,
    Cover43,
    CoverT2,
    Partition,
    GpTrivial,
    Permuted,
    ReducePair,
    ReduceTriple,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    CoverToTuple,
    TupleToCover,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Overflow(_) => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Verdict line and whether the object was valid.
type Outcome = Result<(String, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn need(value: Option<usize>, flag: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this construction")))
}

fn report_verdict(report: &VerifyReport, json: bool, shape: String) -> (String, bool) {
    if json {
        print!("{}", io::report_to_json(report));
    }
    if report.valid {
        (format!("valid {shape}"), true)
    } else {
        let first = &report.violations[0];
        (
            format!(
                "invalid {shape} violations={} first={:?} observed={}",
                report.violations.len(),
                first.index,
                first.observed
            ),
            false,
        )
    }
}

fn check_built(report: VerifyReport, what: &str) -> Result<(), Failure> {
    if report.valid {
        Ok(())
    } else {
        Err(Failure::Internal(format!("constructed {what} fails its verifier")))
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    kind: Kind,
    file: &Path,
    other: Option<&Path>,
    symmetric: bool,
    k: Option<usize>,
    t: Option<usize>,
    parity_diff: Option<&Path>,
    json: bool,
) -> Outcome {
    let text = read(file)?;
    if let Some(second) = parity_diff {
        if kind != Kind::Cover {
            return Err(Failure::Usage("--parity-diff needs --kind cover".into()));
        }
        let a = io::parse_cover(&text)?;
        let b = io::parse_cover(&read(second)?)?;
        let diff = parity_difference(&a, &b)?;
        return Ok(match diff.first() {
            None => (format!("parity-equal k={} n={}", a.k(), a.n()), true),
            Some(cell) => (format!("parity-differs cells={} first={cell:?}", diff.len()), false),
        });
    }
    Ok(match kind {
        Kind::Family => {
            let f = io::parse_family(&text)?;
            report_verdict(&verify_oddtown(&f), json, format!("m={} n={}", f.len(), f.ground_size()))
        }
        Kind::Skew => {
            let a = io::parse_family(&text)?;
            let b = io::parse_family(&read(other.expect("clap enforces --other"))?)?;
            let mode = if symmetric {
                SkewMode::Symmetric
            } else {
                SkewMode::UpperTriangular
            };
            let report = verify_skew_oddtown_with(&a, &b, mode, 16)?;
            report_verdict(&report, json, format!("m={} n={}", a.len(), a.ground_size()))
        }
        Kind::Kt => {
            let f = io::parse_family(&text)?;
            let (k, t) = (k.expect("clap enforces --k"), t.expect("clap enforces --t"));
            let report = verify_kt_oddtown(&f, k, t)?;
            report_verdict(&report, json, format!("m={} n={} k={k} t={t}", f.len(), f.ground_size()))
        }
        Kind::Tuple => {
            let tu = io::parse_tuple(&text)?;
            let shape = format!("m={} n={}", tu.m(), tu.n());
            report_verdict(&verify_bollobas_tuple(&tu), json, shape)
        }
        Kind::Cover => {
            let c = io::parse_cover(&text)?;
            let shape = format!("size={} k={} t={} n={}", c.len(), c.k(), c.t(), c.n());
            report_verdict(&verify_mod2_cover(&c), json, shape)
        }
        Kind::Gp => {
            let c = io::parse_gp_cover(&text)?;
            let shape = format!("size={} k={} n={}", c.len(), c.k(), c.n());
            report_verdict(&verify_exact_gp_cover(&c), json, shape)
        }
    })
}

fn construct(
    name: Construction,
    n: Option<usize>,
    k: Option<usize>,
    t: Option<usize>,
    file: Option<&Path>,
    out: Option<&Path>,
) -> Outcome {
    let (text, verdict) = match name {
        Construction::B22Pair => {
            let p = build_b22_pair(need(n, "n")?)?;
            check_built(verify_bollobas_tuple(&p), "pair")?;
            (io::tuple_to_json(&p), format!("constructed b22-pair m={} n={}", p.m(), p.n()))
        }
        Construction::KtFamily => {
            let t = need(t, "t")?;
            let f = build_kt_oddtown_family(t, need(n, "n")?)?;
            check_built(verify_kt_oddtown(&f, k.unwrap_or(t), t)?, "family")?;
            (io::family_to_json(&f), format!("constructed kt-family m={} n={}", f.len(), f.ground_size()))
        }
        Construction::GpTrivial => {
            let g = trivial_gp_cover(need(n, "n")?, need(k, "k")?)?;
            check_built(verify_exact_gp_cover(&g), "Graham-Pollak cover")?;
            (io::gp_cover_to_json(&g), format!("constructed gp-trivial size={} k={} n={}", g.len(), g.k(), g.n()))
        }
        Construction::ReducePair | Construction::ReduceTriple => {
            let path = file.ok_or_else(|| Failure::Usage("--file is required".into()))?;
            let tuple = io::parse_tuple(&read(path)?)?;
            let p = if name == Construction::ReducePair {
                reduce_tuple_to_pair(&tuple)?
            } else {
                reduce_triple_b33(&tuple)?
            };
            check_built(verify_bollobas_tuple(&p), "pair")?;
            (io::tuple_to_json(&p), format!("constructed pair m={} n={}", p.m(), p.n()))
        }
        _ => {
            let n = need(n, "n")?;
            let c = match name {
                Construction::Cover33 => build_cover_33(n)?,
                Construction::Cover43 => build_cover_43(n)?,
                Construction::CoverT2 => build_cover_t2(need(k, "k")?, n)?,
                Construction::Partition => build_partition_cover(need(k, "k")?, need(t, "t")?, n)?,
                Construction::Permuted => permute_gp_cover(&trivial_gp_cover(n, need(k, "k")?)?)?,
                _ => unreachable!("handled above"),
            };
            check_built(verify_mod2_cover(&c), "cover")?;
            let verdict = format!("constructed cover size={} k={} t={} n={}", c.len(), c.k(), c.t(), c.n());
            (io::cover_to_json(&c), verdict)
        }
    };
    write_or_print(out, &text)?;
    Ok((verdict, true))
}

fn convert(direction: Direction, file: &Path, out: Option<&Path>) -> Outcome {
    let text = read(file)?;
    let (json, verdict) = match direction {
        Direction::CoverToTuple => {
            let t = cover_to_tuple(&io::parse_cover(&text)?)?;
            (io::tuple_to_json(&t), format!("converted tuple k={} t={} m={} n={}", t.k(), t.t(), t.m(), t.n()))
        }
        Direction::TupleToCover => {
            let conv = tuple_to_cover(&io::parse_tuple(&text)?)?;
            if !conv.dropped.is_empty() {
                println!("dropped ground elements with an empty part: {:?}", conv.dropped);
            }
            let c = &conv.cover;
            (io::cover_to_json(c), format!("converted cover size={} k={} t={} n={}", c.len(), c.k(), c.t(), c.n()))
        }
    };
    write_or_print(out, &json)?;
    Ok((verdict, true))
}

fn rank(n: usize, k: usize, l: usize, p: u64, mstar: Option<u64>) -> Outcome {
    println!("n={n} k={k} l={l} p={p}");
    let formula = wilson_rank(n, k, l, p)?;
    let m = build_inclusion_matrix(n, k, l)?;
    let entries = m.matrix.rows() as u128 * m.matrix.cols() as u128;
    if let Some(seed) = mstar {
        println!("mstar_rank={} seed={seed}", sample_mstar_rank(n, k, l, p, seed)?);
    }
    if entries > DIRECT_RANK_LIMIT {
        return Ok((format!("formula={formula} direct=skipped"), true));
    }
    let direct = m.rank_mod(p)? as u128;
    if direct != formula {
        return Err(Failure::Internal(format!(
            "formula={formula} direct={direct} agree=no"
        )));
    }
    Ok((format!("formula={formula} direct={direct} agree=yes"), true))
}

fn search(
    k: usize,
    t: usize,
    n: Option<usize>,
    m: Option<usize>,
    config: SearchConfig,
    out: Option<&Path>,
) -> Outcome {
    if let Some(m) = m {
        return Ok(match exact_b(k, t, m, &config)? {
            BValue::Exact(b) => (format!("b={b} k={k} t={t} m={m}"), true),
            BValue::Bracket { low, high } => {
                let high = high.map_or("?".to_string(), |h| h.to_string());
                (format!("b in [{low}, {high}] k={k} t={t} m={m}"), true)
            }
        });
    }
    let n = n.expect("clap enforces --n or --m");
    let run = min_mod2_cover(k, t, n, &config)?;
    println!(
        "catalog={} representatives={} root_bound={} nodes={}",
        run.catalog,
        run.representatives.map_or("-".to_string(), |r| r.to_string()),
        run.root_bound,
        run.nodes
    );
    Ok(match run.outcome {
        CoverSearch::Exact { size, cover } => {
            if let Some(path) = out {
                write_or_print(Some(path), &io::cover_to_json(&cover))?;
            }
            (format!("f={size} k={k} t={t} n={n}"), true)
        }
        CoverSearch::ExceedsBudget { lower_bound } => {
            (format!("f>={lower_bound} k={k} t={t} n={n} exceeds-budget"), true)
        }
        CoverSearch::Aborted { weight } => (format!("f>={weight} k={k} t={t} n={n} aborted"), true),
    })
}

fn table(k: usize, t: usize, ns: std::ops::RangeInclusive<usize>, exact: bool, rows: Option<&Path>) -> Outcome {
    let config = TableConfig {
        exact,
        ..TableConfig::default()
    };
    let table = bounds_table(k, t, ns, &config)?;
    print!("{}", table.to_text());
    if let Some(path) = rows {
        fs::write(path, table.to_rows()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let bad = table.violations();
    if !bad.is_empty() {
        return Err(Failure::Internal(bad.join("; ")));
    }
    Ok((format!("rows={} violations=0", table.rows.len()), true))
}

fn set_threads(threads: Option<usize>) -> Result<(), Failure> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    set_threads(cli.threads)?;
    match cli.command {
        Command::Verify {
            kind,
            file,
            other,
            symmetric,
            k,
            t,
            parity_diff,
            json,
        } => verify(kind, &file, other.as_deref(), symmetric, k, t, parity_diff.as_deref(), json),
        Command::Construct {
            name,
            n,
            k,
            t,
            file,
            out,
        } => construct(name, n, k, t, file.as_deref(), out.as_deref()),
        Command::Convert {
            direction,
            file,
            out,
        } => convert(direction, &file, out.as_deref()),
        Command::Rank {
            n,
            k,
            l,
            p,
            mstar,
            seed,
        } => rank(n, k, l, p, if mstar { seed } else { None }),
        Command::Search {
            k,
            t,
            n,
            m,
            budget,
            cap,
            node_limit,
            no_symmetry,
            no_rank_bound,
            out,
        } => {
            let config = SearchConfig {
                budget,
                cap,
                symmetry: !no_symmetry,
                rank_bound: !no_rank_bound,
                node_limit,
            };
            search(k, t, n, m, config, out.as_deref())
        }
        Command::Table {
            k,
            t,
            n_min,
            n_max,
            no_exact,
            rows,
        } => table(k, t, n_min..=n_max, !no_exact, rows.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code == 2 {
                println!("error usage");
            }
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((verdict, valid)) => {
            println!("{verdict}");
            ExitCode::from(if valid { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            println!("error usage");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("{msg}");
            println!("error internal");
            ExitCode::from(3)
        }
    }
}
