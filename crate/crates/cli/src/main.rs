use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use diatomic::extremal::theorem_ranks;
use diatomic::stern::{brute_force_top_capped, stern_row_capped, top_of_row};
use diatomic::{
    canonical_expansion, closed_form_l, continuant, kappa, run_suite, sibling_expansion,
    stern_big, stern_continuant_bridge, Composition, KappaShape, MemoryCap, Suite, VerdictRecord,
};
use num_bigint::BigUint;
use serde_json::{json, Value};

/// Environment variable holding the entry-count cap for rows and enumerations.
const MEM_CAP_VAR: &str = "STERN_MEM_CAP";

#[derive(Parser)]
#[command(name = "diatomic", version, about = "Stern's diatomic array, continuants and the largest row values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print row r of the diatomic array, s(2^r) .. s(2^{r+1}).
    Row {
        r: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print the distinct values, ascending, instead of the row.
        #[arg(long)]
        distinct_only: bool,
        /// Append a JSON line with the maximum, distinct count and argmax positions.
        #[arg(long)]
        stats: bool,
        /// With csv, add a header line holding the sequence index of each column.
        #[arg(long)]
        header: bool,
    },
    /// Print the m largest distinct values of row r as JSON lines.
    Top {
        r: u32,
        m: u64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Include the positions n in [2^r, 2^{r+1}] attaining each value.
        #[arg(long)]
        positions: bool,
    },
    /// Show both alternating binary expansions of n and s(n).
    Expand { n: BigUint },
    /// Evaluate the continuant K(l1,...,ld).
    Continuant {
        /// Comma-separated positive integers; an empty string is the empty composition.
        composition: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate kappa for a padded shape written as p0,...,ps|X1,...,Xs.
    Kappa {
        shape: String,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite; exits 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Sweep bound; its meaning depends on the suite (see README).
        #[arg(long)]
        r_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Emit::Summary)]
        emit: Emit,
    },
    /// Timing helpers.
    Bench {
        #[command(subcommand)]
        target: BenchTarget,
    },
}

#[derive(Subcommand)]
enum BenchTarget {
    /// Time building row r and scanning it for its largest values.
    Row { r: u32 },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Brute,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Summary,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Theorem,
    Bridge,
    Expansions,
    Identities,
    Bounds,
    Conjecture7,
    Conjecture9,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Theorem => Suite::Theorem,
            SuiteArg::Bridge => Suite::Bridge,
            SuiteArg::Expansions => Suite::Expansions,
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Conjecture7 => Suite::Conjecture7,
            SuiteArg::Conjecture9 => Suite::Conjecture9,
            SuiteArg::All => Suite::All,
        }
    }
}

fn memory_cap() -> Result<MemoryCap> {
    match std::env::var(MEM_CAP_VAR) {
        Ok(v) => {
            let cap = v
                .trim()
                .parse::<u64>()
                .with_context(|| format!("{MEM_CAP_VAR}={v:?} is not an entry count"))?;
            Ok(MemoryCap(cap))
        }
        Err(std::env::VarError::NotPresent) => Ok(MemoryCap::DEFAULT),
        Err(e) => bail!("{MEM_CAP_VAR}: {e}"),
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|v| v.to_string()).collect()
}

fn write_joined<W: Write, T: std::fmt::Display>(
    out: &mut W,
    items: impl IntoIterator<Item = T>,
    sep: &str,
) -> io::Result<()> {
    for (i, v) in items.into_iter().enumerate() {
        if i > 0 {
            out.write_all(sep.as_bytes())?;
        }
        write!(out, "{v}")?;
    }
    writeln!(out)
}

fn cmd_row(r: u32, format: Format, distinct_only: bool, stats: bool, header: bool) -> Result<bool> {
    let row = stern_row_capped(r, memory_cap()?)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());

    let distinct: Vec<u32>;
    let values: &[u32] = if distinct_only {
        let mut v = row.words().to_vec();
        v.sort_unstable();
        v.dedup();
        distinct = v;
        &distinct
    } else {
        row.words()
    };

    match format {
        Format::Text => write_joined(&mut out, values, " ")?,
        Format::Csv => {
            if header {
                if distinct_only {
                    writeln!(out, "value")?;
                } else {
                    let base = row.first_index();
                    write_joined(&mut out, (0..values.len() as u64).map(|k| base + k), ",")?;
                }
            }
            write_joined(&mut out, values, ",")?;
        }
        Format::Json => {
            writeln!(out, "{}", Value::from(strings(values)))?;
        }
    }

    if stats {
        let max = row.max();
        let record = json!({
            "argmax": strings(row.positions_of(&max)),
            "distinct": row.distinct().len().to_string(),
            "max": max.to_string(),
        });
        writeln!(out, "{record}")?;
    }
    out.flush()?;
    Ok(true)
}

fn cmd_top(r: u32, m: u64, method: Method, positions: bool) -> Result<bool> {
    let cap = memory_cap()?;
    let closed = if method == Method::Brute {
        None
    } else {
        let ranks = theorem_ranks(r as u64);
        if m > ranks {
            bail!(
                "closed form covers ranks 1..={ranks} of row {r}, asked for {m}; use --method brute"
            );
        }
        Some(
            (1..=m)
                .map(|rank| closed_form_l(r as u64, rank))
                .collect::<diatomic::Result<Vec<_>>>()?,
        )
    };
    let scanned = if method != Method::Closed || positions {
        let row = stern_row_capped(r, cap)?;
        Some(top_of_row(&row, m as usize))
    } else {
        None
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut agree_all = true;
    let count = match (&closed, &scanned) {
        (Some(c), _) => c.len(),
        (None, Some(s)) => s.len(),
        (None, None) => 0,
    };
    for idx in 0..count {
        let mut record = BTreeMap::new();
        record.insert("m", Value::from((idx + 1).to_string()));
        let scan = scanned.as_ref().and_then(|s| s.get(idx));
        if let Some(c) = closed.as_ref().map(|c| &c[idx]) {
            record.insert("value", Value::from(c.value.to_string()));
            record.insert("b", Value::from(c.b.to_string()));
            record.insert("i", Value::from(c.i.to_string()));
            record.insert("j", Value::from(c.j.to_string()));
            if method == Method::Both {
                let agree = scan.is_some_and(|s| s.value == c.value);
                agree_all &= agree;
                let brute = scan.map(|s| s.value.to_string()).unwrap_or_default();
                record.insert("brute", Value::from(brute));
                record.insert("agree", Value::from(agree));
            }
        } else if let Some(s) = scan {
            record.insert("value", Value::from(s.value.to_string()));
        }
        if positions {
            if let Some(s) = scan {
                record.insert("positions", Value::from(strings(&s.positions)));
            }
        }
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    }
    if !agree_all {
        eprintln!("error: closed form and row scan disagree for row {r}");
    }
    Ok(agree_all)
}

fn cmd_expand(n: &BigUint) -> Result<bool> {
    let canonical = canonical_expansion(n)?;
    let sibling = sibling_expansion(&canonical)?;
    let tail = Composition::new(canonical.tail().to_vec())?;
    let s = stern_big(n);
    let bridged = stern_continuant_bridge(n)?;
    println!("canonical: {canonical}");
    println!("sibling: {sibling}");
    println!("s({n}) = {s}");
    println!("K{tail} = {bridged}");
    if s != bridged {
        eprintln!("error: s(n) and the continuant of the expansion tail disagree");
        return Ok(false);
    }
    Ok(true)
}

fn cmd_continuant(text: &str, json: bool) -> Result<bool> {
    let c: Composition = text.parse()?;
    let value = continuant(&c);
    if json {
        println!("{}", json!({ "composition": c, "value": value.to_string() }));
    } else {
        println!("{value}");
    }
    Ok(true)
}

fn cmd_kappa(text: &str, json: bool) -> Result<bool> {
    let shape: KappaShape = text.parse()?;
    let value = kappa(&shape);
    if json {
        println!(
            "{}",
            json!({
                "marks": shape.marks(),
                "pads": shape.pads(),
                "value": value.to_string(),
                "w": shape.expand(),
            })
        );
    } else {
        println!("{value}");
    }
    Ok(true)
}

fn summarize(records: &[VerdictRecord]) -> String {
    let mut by_check: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for rec in records {
        let entry = by_check.entry(&rec.check).or_default();
        entry.0 += 1;
        entry.1 += rec.pass as usize;
    }
    let mut lines = Vec::new();
    for (check, (total, passed)) in by_check {
        let tag = if passed == total { "ok  " } else { "FAIL" };
        lines.push(format!("{tag} {check}: {passed}/{total}"));
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    lines.push(format!(
        "{} checks, {} passed, {failed} failed",
        records.len(),
        records.len() - failed
    ));
    lines.join("\n")
}

fn cmd_verify(suite: Suite, r_max: Option<u64>, emit: Emit) -> Result<bool> {
    let records = run_suite(suite, r_max)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match emit {
        Emit::Json => {
            for rec in &records {
                writeln!(out, "{}", rec.to_json_line())?;
            }
        }
        Emit::Summary => writeln!(out, "{}", summarize(&records))?,
    }
    out.flush()?;
    Ok(records.iter().all(|r| r.pass))
}

fn cmd_bench_row(r: u32) -> Result<bool> {
    let cap = memory_cap()?;
    let start = Instant::now();
    let row = stern_row_capped(r, cap)?;
    let built = start.elapsed();
    let ranks = theorem_ranks(r as u64).max(1) as usize;
    let start = Instant::now();
    let top = top_of_row(&row, ranks);
    let scanned = start.elapsed();
    let start = Instant::now();
    brute_force_top_capped(r, ranks, cap)?;
    let total = start.elapsed();
    println!("row {r}: {} entries", row.len());
    println!("build: {built:.3?}");
    println!("top-{ranks} scan: {scanned:.3?} (max {})", top[0].value);
    println!("build + scan: {total:.3?}");
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Row {
            r,
            format,
            distinct_only,
            stats,
            header,
        } => cmd_row(r, format, distinct_only, stats, header),
        Command::Top {
            r,
            m,
            method,
            positions,
        } => cmd_top(r, m, method, positions),
        Command::Expand { n } => cmd_expand(&n),
        Command::Continuant { composition, json } => cmd_continuant(&composition, json),
        Command::Kappa { shape, json } => cmd_kappa(&shape, json),
        Command::Verify { suite, r_max, emit } => cmd_verify(suite.into(), r_max, emit),
        Command::Bench {
            target: BenchTarget::Row { r },
        } => cmd_bench_row(r),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
