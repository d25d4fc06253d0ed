//! Plain-text formula files.
//!
//! ```text
//! pi-series v1
//! # provenance: proven k=1
//! m=8 p=4 a=-4 r=11025
//! S: -89286 3875948 -34970134 110202472 -115193600
//! Rcheck: 0 -1/4 ...
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::evalnum::{Formula, Provenance};
use crate::exactnum::{BigInt, Rational};
use crate::polyring::Poly;
use crate::prover::ProofCertificate;

pub const HEADER: &str = "pi-series v1";

/// A formula plus free comments and, for proven formulas, the `Ř`
/// coefficients (ascending from `z^0`) that certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaFile {
    pub formula: Formula,
    pub comments: Vec<String>,
    pub rcheck: Option<Vec<Rational>>,
}

impl FormulaFile {
    pub fn new(formula: Formula) -> Self {
        FormulaFile {
            formula,
            comments: Vec::new(),
            rcheck: None,
        }
    }

    pub fn from_certificate(cert: &ProofCertificate, formula: Formula) -> Self {
        FormulaFile {
            formula,
            comments: Vec::new(),
            rcheck: Some(cert.rcheck.coeffs().to_vec()),
        }
    }

    /// Rebuilds the certificate when the file carries `Ř` and a `proven k=`
    /// provenance. The residual flag is left unset; call `recheck`.
    pub fn certificate(&self) -> Option<ProofCertificate> {
        let Provenance::Proven(k) = self.formula.provenance else {
            return None;
        };
        let rcheck = Poly::new(self.rcheck.clone()?);
        let r = self.formula.r.clone();
        let s = Poly::new(
            self.formula
                .s_int
                .iter()
                .map(|c| Rational::new(c.clone(), r.clone()))
                .collect(),
        );
        Some(ProofCertificate {
            k,
            s,
            r,
            s_int: self.formula.s_int.clone(),
            rcheck,
            residual_zero: false,
        })
    }

    pub fn render(&self) -> String {
        let f = &self.formula;
        let mut out = format!("{HEADER}\n# provenance: {}\n", f.provenance);
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "m={} p={} a={} r={}", f.m, f.p, f.a, f.r);
        let _ = writeln!(out, "S: {}", join(&f.s_int));
        if let Some(rc) = &self.rcheck {
            let _ = writeln!(out, "Rcheck: {}", join(rc));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        if !text.is_ascii() {
            return Err(Error::parse("formula files are ASCII"));
        }
        let mut lines = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some(HEADER) {
            return Err(Error::parse(format!("missing header line '{HEADER}'")));
        }
        let mut provenance = Provenance::Imported;
        let mut comments = Vec::new();
        let mut params = None;
        let mut s_int = None;
        let mut rcheck = None;
        for line in lines {
            if let Some(c) = line.strip_prefix('#') {
                let c = c.strip_prefix(' ').unwrap_or(c);
                match c.strip_prefix("provenance:") {
                    Some(p) => provenance = p.parse()?,
                    None => comments.push(c.to_string()),
                }
            } else if let Some(rest) = line.strip_prefix("S:") {
                set_once(&mut s_int, parse_list::<BigInt>(rest)?, "S")?;
            } else if let Some(rest) = line.strip_prefix("Rcheck:") {
                set_once(&mut rcheck, parse_list::<Rational>(rest)?, "Rcheck")?;
            } else {
                set_once(&mut params, parse_params(line)?, "parameter")?;
            }
        }
        let (m, p, a, r) = params.ok_or_else(|| Error::parse("missing parameter line"))?;
        let s_int = s_int.ok_or_else(|| Error::parse("missing S line"))?;
        Ok(FormulaFile {
            formula: Formula::new(m, p, a, r, s_int, provenance)?,
            comments,
            rcheck,
        })
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn set_once<T>(slot: &mut Option<T>, value: T, what: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::parse(format!("duplicate {what} line")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_list<T: std::str::FromStr>(rest: &str) -> Result<Vec<T>> {
    rest.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(format!("bad number '{t}'")))
        })
        .collect()
}

fn parse_params(line: &str) -> Result<(u32, u32, BigInt, BigInt)> {
    let (mut m, mut p, mut a, mut r) = (None, None, None, None);
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("unexpected line '{line}'")))?;
        let bad = || Error::parse(format!("bad value in '{tok}'"));
        match key {
            "m" => m = Some(val.parse().map_err(|_| bad())?),
            "p" => p = Some(val.parse().map_err(|_| bad())?),
            "a" => a = Some(val.parse().map_err(|_| bad())?),
            "r" => r = Some(val.parse().map_err(|_| bad())?),
            _ => return Err(Error::parse(format!("unknown key '{key}'"))),
        }
    }
    match (m, p, a, r) {
        (Some(m), Some(p), Some(a), Some(r)) => Ok((m, p, a, r)),
        _ => Err(Error::parse(format!(
            "parameter line needs m, p, a and r: '{line}'"
        ))),
    }
}
