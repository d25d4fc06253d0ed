//! Command-line interface.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or I/O error.

pub mod catalog;
pub mod format;

pub use catalog::{Catalog, IndexEntry, CATALOG_ENV};
pub use format::FormulaFile;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::detlab::{reduce_chain, verify_identity, Identity};
use crate::discover::{denominator_smoothness, enumerate_candidates, find_relation};
use crate::error::{Error, Result};
use crate::evalnum::{eval_formula, format_digits, verify_formula_numeric, Formula, Provenance};
use crate::exactnum::{factor_smooth, BigInt};
use crate::prover::{det_a, det_a_closed_form, prove, same_magnitude};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "piseries",
    version,
    about = "Binomial-sum series for pi: prove, evaluate, discover"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the linear system for k and write the certified formula.
    Prove {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest k accepted.
        #[arg(long, default_value_t = 4)]
        max_k: u32,
        /// Digits for the numeric cross-check.
        #[arg(long, default_value_t = 100)]
        digits: u32,
    },
    /// Print a formula's value to the given number of digits.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        /// Group digits in blocks of ten.
        #[arg(long)]
        blocks: bool,
        /// Also compare with the reference value of pi.
        #[arg(long)]
        verify: bool,
    },
    /// Search for an integer relation between pi and the moments s(0..=degree).
    Discover {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        digits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List (m, p, a) whose weight takes an integer value at i or 1+i.
    Candidates {
        #[arg(long, default_value_t = 16)]
        max_m: u32,
    },
    /// Exact determinant of A(k), factored and compared with the closed form.
    Det {
        #[arg(long)]
        k: u32,
    },
    /// Randomized exact test of the M^X determinant identity.
    Thm2 {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Randomized exact test of the M^Z determinant identity.
    Lemma7 {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Check every step of the reduction from M to M'''.
    Chain {
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Manage the formula catalog.
    Catalog {
        /// Catalog directory; defaults to $PISERIES_CATALOG, then ./catalog.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Verify a formula file and store it under a name.
    Add {
        name: String,
        file: PathBuf,
        #[arg(long, default_value_t = catalog::MIN_DIGITS)]
        digits: u32,
    },
    List,
    Show {
        name: String,
    },
    /// Check that the index and the files agree.
    Check,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFY,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::Io(_) => EXIT_USAGE,
        Error::Singular { .. } | Error::Internal(_) | Error::Verification(_) => EXIT_VERIFY,
    }
}

fn read_formula(path: &Path) -> Result<FormulaFile> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    FormulaFile::parse(&text)
}

/// Runs one command; `Ok(false)` means a check failed.
pub fn execute(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Prove {
            k,
            out: path,
            max_k,
            digits,
        } => cmd_prove(k, path.as_deref(), max_k, digits, out),
        Command::Eval {
            file,
            digits,
            blocks,
            verify,
        } => {
            let f = read_formula(&file)?.formula;
            if verify {
                let report = verify_formula_numeric(&f, digits)?;
                writeln!(out, "{}", render_value(&report.value, blocks))?;
                writeln!(out, "{report}")?;
                Ok(report.pass)
            } else {
                writeln!(out, "{}", render_value(&eval_formula(&f, digits)?, blocks))?;
                Ok(true)
            }
        }
        Command::Discover {
            m,
            p,
            a,
            degree,
            digits,
            out: path,
        } => cmd_discover(m, p, &a, degree, digits, path.as_deref(), out),
        Command::Candidates { max_m } => {
            for c in enumerate_candidates(max_m)? {
                writeln!(out, "{c}")?;
            }
            Ok(true)
        }
        Command::Det { k } => cmd_det(k, out),
        Command::Thm2 { k, trials, seed } => cmd_identity(Identity::Thm2, k, trials, seed, out),
        Command::Lemma7 { k, trials, seed } => cmd_identity(Identity::Lemma7, k, trials, seed, out),
        Command::Chain { k } => {
            let report = reduce_chain(k)?;
            writeln!(out, "{report}")?;
            Ok(report.passed())
        }
        Command::Catalog { dir, action } => {
            cmd_catalog(&Catalog::locate(dir.as_deref()), action, out)
        }
    }
}

fn render_value(v: &crate::exactnum::FixedDec, blocks: bool) -> String {
    if blocks {
        format_digits(v)
    } else {
        v.to_string()
    }
}

fn emit(file: &FormulaFile, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, file.render())?;
            writeln!(out, "wrote {}", p.display())?;
        }
        None => write!(out, "{}", file.render())?,
    }
    Ok(())
}

fn cmd_prove(
    k: u32,
    path: Option<&Path>,
    max_k: u32,
    digits: u32,
    out: &mut dyn Write,
) -> Result<bool> {
    if k == 0 || k > max_k {
        return Err(Error::Domain(format!("k must lie in 1..={max_k}")));
    }
    let cert = prove(k)?;
    let four_k = 4 * k;
    let a = BigInt::from(-4).pow(k);
    let formula = Formula::new(
        2 * four_k,
        four_k,
        a,
        cert.r.clone(),
        cert.s_int.clone(),
        Provenance::Proven(k),
    )?;
    let rechecked = cert.recheck()?;
    let report = verify_formula_numeric(&formula, digits)?;
    let mut file = FormulaFile::from_certificate(&cert, formula);
    file.comments.push(format!(
        "residual {}; numeric {report}",
        if cert.residual_zero && rechecked {
            "identically zero"
        } else {
            "NONZERO"
        }
    ));
    emit(&file, path, out)?;
    Ok(cert.residual_zero && rechecked && report.pass)
}

fn cmd_discover(
    m: u32,
    p: u32,
    a: &BigInt,
    degree: usize,
    digits: u32,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    let Some(formula) = find_relation(m, p, a, degree, digits)? else {
        writeln!(out, "no relation found at {digits} digits")?;
        return Ok(false);
    };
    let smooth = denominator_smoothness(&formula)?;
    let mut file = FormulaFile::new(formula);
    file.comments.push(format!(
        "r = {} ({})",
        smooth.to_string().replace(" · ", " * "),
        if smooth.is_complete() {
            "smooth"
        } else {
            "not smooth"
        }
    ));
    emit(&file, path, out)?;
    Ok(true)
}

fn cmd_det(k: u32, out: &mut dyn Write) -> Result<bool> {
    let det = det_a(k)?;
    let closed = det_a_closed_form(k)?;
    let fact = factor_smooth(&det, u64::from(8 * k + 1))?;
    let sign = if det < BigInt::from(0) { "-" } else { "+" };
    let matches = same_magnitude(&det, &closed);
    writeln!(out, "det A({k}) sign {sign}")?;
    writeln!(out, "|det A({k})| = {fact}")?;
    writeln!(
        out,
        "closed form magnitude: {}",
        if matches { "match" } else { "MISMATCH" }
    )?;
    Ok(matches && fact.is_complete())
}

fn cmd_identity(
    which: Identity,
    k: u32,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<bool> {
    let report = verify_identity(which, k, trials, seed)?;
    writeln!(out, "{report}")?;
    Ok(report.passed())
}

fn cmd_catalog(dir: &Path, action: CatalogAction, out: &mut dyn Write) -> Result<bool> {
    let cat = Catalog::open(dir)?;
    match action {
        CatalogAction::Add { name, file, digits } => {
            let e = cat.add(&name, &read_formula(&file)?, digits)?;
            writeln!(
                out,
                "added {} (m={} p={} a={}, {} digits)",
                e.name, e.m, e.p, e.a, e.digits
            )?;
            Ok(true)
        }
        CatalogAction::List => {
            for e in cat.list()? {
                writeln!(
                    out,
                    "{}\tm={} p={} a={}\t{}\t{} digits",
                    e.name, e.m, e.p, e.a, e.provenance, e.digits
                )?;
            }
            Ok(true)
        }
        CatalogAction::Show { name } => {
            write!(out, "{}", cat.load(&name)?.render())?;
            Ok(true)
        }
        CatalogAction::Check => {
            let problems = cat.check()?;
            for p in &problems {
                writeln!(out, "{p}")?;
            }
            if problems.is_empty() {
                writeln!(out, "catalog consistent")?;
            }
            Ok(problems.is_empty())
        }
    }
}
