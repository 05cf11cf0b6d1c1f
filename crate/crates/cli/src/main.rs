//! `modlag`: display modular Laguerre objects, emit root and pole tables, and
//! run the identity checkers.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use modlag::bpoly::{b1, b_roots_row};
use modlag::glog::{glog, pole_table, render_x_terms};
use modlag::special::{finite_polylog, laguerre_pm1, truncated_exp};
use modlag::verify::{
    verify_c_coefficients_with, verify_with, Fixtures, PairBudget, TheoremId, VerifyReport,
};
use modlag::{Prime, XPoly};

const RENDERING: &str = "\
Rendering: the parameter alpha is printed as `a`. Coefficients in F_p(a) are
canonical fractions `num / den` with a monic denominator; residues are printed
in [0, p), except that constant numerators in G are signed residues in
(-p/2, p/2). Example: `show glog --prime 3` prints `-X - X^2/(a + 2)`.";

#[derive(Parser)]
#[command(name = "modlag", version, about = "Modular Laguerre polynomials and their truncated logarithms", after_help = RENDERING)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print L_{p-1}^(a)(X), G^(a)(X), the b_(1,s)(a), or the finite polylogarithm.
    Show {
        target: ShowTarget,
        #[arg(long, value_parser = parse_primes)]
        prime: Primes,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a CSV table.
    Table {
        target: TableTarget,
        #[arg(long, value_parser = parse_primes)]
        prime: Primes,
    },
    /// Run identity checkers; exit 0 iff none fails.
    Verify {
        /// One odd prime, or an inclusive range `A..B` of odd primes.
        #[arg(long, value_parser = parse_primes)]
        prime: Primes,
        /// A theorem id (case-insensitive) or `all`.
        #[arg(long, default_value = "all", value_parser = parse_theorems)]
        theorem: Theorems,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Seed for the random pairs of CCoefficients.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random pairs for CCoefficients, or `exhaustive`.
        #[arg(long, value_parser = parse_pairs)]
        pairs: Option<Pairs>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShowTarget {
    Glog,
    Laguerre,
    B,
    Polylog,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableTarget {
    BRoots,
    GlogPoles,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
struct Primes(Vec<Prime>);

#[derive(Clone, Debug)]
struct Theorems(Vec<TheoremId>);

#[derive(Clone, Copy, Debug)]
enum Pairs {
    Exhaustive,
    Count(u64),
}

fn parse_prime(s: &str) -> Result<u64, String> {
    s.trim().parse::<u64>().map_err(|e| format!("`{s}`: {e}"))
}

/// `P` or `A..B`; every prime must be odd and a range must contain one.
fn parse_primes(s: &str) -> Result<Primes, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (parse_prime(lo)?, parse_prime(hi)?);
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        if lo <= 2 && hi >= 2 {
            return Err("p = 2 is not allowed; primes must be odd".into());
        }
        let primes: Vec<Prime> = (lo..=hi).filter_map(|q| Prime::new(q).ok()).collect();
        if primes.is_empty() {
            return Err(format!("no odd primes in {lo}..{hi}"));
        }
        Ok(Primes(primes))
    } else {
        let q = parse_prime(s)?;
        Prime::new(q)
            .map(|p| Primes(vec![p]))
            .map_err(|e| e.to_string())
    }
}

fn parse_theorems(s: &str) -> Result<Theorems, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Theorems(TheoremId::ALL.to_vec()));
    }
    s.parse::<TheoremId>()
        .map(|id| Theorems(vec![id]))
        .map_err(|e| {
            let names: Vec<_> = TheoremId::ALL.iter().map(|t| t.name()).collect();
            format!("{e}; expected `all` or one of: {}", names.join(", "))
        })
}

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    if s.eq_ignore_ascii_case("exhaustive") {
        Ok(Pairs::Exhaustive)
    } else {
        s.parse()
            .map(Pairs::Count)
            .map_err(|e| format!("`{s}`: {e}"))
    }
}

fn budget(p: Prime, pairs: Option<Pairs>, seed: Option<u64>) -> PairBudget {
    let seed_or = |d| seed.unwrap_or(d);
    match (pairs, PairBudget::default_for(p)) {
        (Some(Pairs::Exhaustive), _) => PairBudget::Exhaustive,
        (Some(Pairs::Count(count)), _) => PairBudget::Random {
            count,
            seed: seed_or(0),
        },
        (None, PairBudget::Random { count, seed: s }) => PairBudget::Random {
            count,
            seed: seed_or(s),
        },
        (None, default) => default,
    }
}

fn coefficient_json(c: &modlag::RatFn, k: usize) -> serde_json::Value {
    json!({ "k": k, "num": c.num().to_string(), "den": c.den().to_string() })
}

fn laguerre_json(p: Prime, l: &XPoly) -> serde_json::Value {
    json!({
        "prime": p.get(),
        "object": "laguerre",
        "expression": l.to_string(),
        "coefficients": l.coeffs().iter().enumerate().map(|(k, c)| coefficient_json(c, k)).collect::<Vec<_>>(),
    })
}

fn show(out: &mut impl Write, target: ShowTarget, p: Prime, format: Format) -> Result<(), String> {
    let err = |e: modlag::Error| e.to_string();
    let want = |t: ShowTarget| target == ShowTarget::All || target == t;
    let mut lines: Vec<String> = Vec::new();
    if want(ShowTarget::Laguerre) {
        let l = laguerre_pm1(p);
        match format {
            Format::Text => lines.push(format!("p = {p}\nL_{{p-1}}^(a)(X) = {l}")),
            Format::Json => lines.push(laguerre_json(p, &l).to_string()),
        }
    }
    if want(ShowTarget::Glog) {
        let g = glog(p).map_err(err)?;
        match format {
            Format::Text => {
                let mut s = format!("p = {p}\nG^(a)(X) = {g}");
                for (k, c) in g.coeffs().iter().enumerate() {
                    s.push_str(&format!(
                        "\n  X^{}: {}",
                        k + 1,
                        render_x_terms(std::slice::from_ref(c))
                    ));
                }
                lines.push(s);
            }
            Format::Json => lines.push(
                json!({
                    "prime": p.get(),
                    "object": "glog",
                    "expression": g.to_string(),
                    "coefficients": g.coefficient_strings(),
                })
                .to_string(),
            ),
        }
    }
    if want(ShowTarget::B) {
        let mut text = format!("p = {p}");
        let mut polys = Vec::new();
        for s in 1..p.get() - 1 {
            let b = b1(p, s).map_err(err)?;
            let row = b_roots_row(p, s).map_err(err)?;
            text.push_str(&format!(
                "\nb_(1,{s})(a) = {b}    roots: {}",
                row.roots.replace(';', ", ")
            ));
            let roots: Vec<u64> = row
                .roots
                .split(';')
                .filter(|r| !r.is_empty())
                .map(|r| r.parse().unwrap())
                .collect();
            polys.push(json!({ "s": s, "poly": b.to_string(), "roots": roots }));
        }
        match format {
            Format::Text => lines.push(text),
            Format::Json => lines
                .push(json!({ "prime": p.get(), "object": "b", "polynomials": polys }).to_string()),
        }
    }
    if want(ShowTarget::Polylog) {
        let l1 = finite_polylog(p, 1);
        let e = truncated_exp(p);
        match format {
            Format::Text => lines.push(format!("p = {p}\nL1(X) = {l1}\nE(X) = {e}")),
            Format::Json => lines.push(
                json!({ "prime": p.get(), "object": "polylog", "l1": l1.to_string(), "exp": e.to_string() }).to_string(),
            ),
        }
    }
    for l in lines {
        writeln!(out, "{l}").map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn table(out: &mut impl Write, target: TableTarget, primes: &[Prime]) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: &dyn std::fmt::Display| e.to_string();
    for &p in primes {
        match target {
            TableTarget::BRoots => {
                for s in 1..p.get() - 1 {
                    w.serialize(b_roots_row(p, s).map_err(|e| err(&e))?)
                        .map_err(|e| err(&e))?;
                }
            }
            TableTarget::GlogPoles => {
                let g = glog(p).map_err(|e| err(&e))?;
                for row in pole_table(&g) {
                    w.serialize(row).map_err(|e| err(&e))?;
                }
            }
        }
    }
    w.flush().map_err(|e| err(&e))
}

fn render_report(r: &VerifyReport, format: Format) -> String {
    match format {
        Format::Text => r.to_string(),
        Format::Json => serde_json::to_string(r).expect("report serializes"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Show {
            target,
            prime,
            format,
        } => {
            for p in prime.0 {
                if let Err(e) = show(&mut out, target, p, format) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Table { target, prime } => match table(&mut out, target, &prime.0) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Verify {
            prime,
            theorem,
            format,
            seed,
            pairs,
        } => {
            let mut failed = false;
            for p in prime.0 {
                let fx = Fixtures::new(p);
                for &id in &theorem.0 {
                    let report = if id == TheoremId::CCoefficients {
                        verify_c_coefficients_with(&fx, budget(p, pairs, seed))
                    } else {
                        verify_with(&fx, id)
                    };
                    failed |= report.failed();
                    if writeln!(out, "{}", render_report(&report, format)).is_err() {
                        return ExitCode::from(1);
                    }
                }
            }
            if failed {
                eprintln!("one or more checks failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
