//! On-disk catalog of numerically verified formulas.
//!
//! A catalog directory holds one `<name>.pi` formula file per entry and a
//! tab-separated `index` with columns name, m, p, a, provenance, digits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::format::FormulaFile;
use crate::error::{Error, Result};
use crate::evalnum::{verify_formula_numeric, Provenance};
use crate::exactnum::BigInt;

/// Environment variable overriding the catalog directory.
pub const CATALOG_ENV: &str = "PISERIES_CATALOG";
pub const DEFAULT_DIR: &str = "catalog";
/// Minimum precision at which an entry must have been verified.
pub const MIN_DIGITS: u32 = 100;

const INDEX: &str = "index";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub name: String,
    pub m: u32,
    pub p: u32,
    pub a: BigInt,
    pub provenance: Provenance,
    pub digits: u32,
}

impl IndexEntry {
    fn line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.name, self.m, self.p, self.a, self.provenance, self.digits
        )
    }

    fn parse(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split('\t').collect();
        let bad = || Error::parse(format!("bad index line '{line}'"));
        if f.len() != 6 {
            return Err(bad());
        }
        Ok(IndexEntry {
            name: f[0].to_string(),
            m: f[1].parse().map_err(|_| bad())?,
            p: f[2].parse().map_err(|_| bad())?,
            a: f[3].parse().map_err(|_| bad())?,
            provenance: f[4].parse()?,
            digits: f[5].parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    dir: PathBuf,
}

impl Catalog {
    /// `explicit`, else `$PISERIES_CATALOG`, else `./catalog`.
    pub fn locate(explicit: Option<&Path>) -> PathBuf {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR))
    }

    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Catalog { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.pi"))
    }

    pub fn list(&self) -> Result<Vec<IndexEntry>> {
        let path = self.dir.join(INDEX);
        if !path.exists() {
            return Ok(Vec::new());
        }
        fs::read_to_string(path)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(IndexEntry::parse)
            .collect()
    }

    pub fn load(&self, name: &str) -> Result<FormulaFile> {
        check_name(name)?;
        if !self.list()?.iter().any(|e| e.name == name) {
            return Err(Error::domain(format!("no catalog entry '{name}'")));
        }
        FormulaFile::parse(&fs::read_to_string(self.entry_path(name))?)
    }

    /// Verifies `file` at `digits` (at least [`MIN_DIGITS`]) and stores it,
    /// replacing any entry of the same name.
    pub fn add(&self, name: &str, file: &FormulaFile, digits: u32) -> Result<IndexEntry> {
        check_name(name)?;
        if digits < MIN_DIGITS {
            return Err(Error::domain(format!(
                "catalog entries need at least {MIN_DIGITS} verified digits"
            )));
        }
        let report = verify_formula_numeric(&file.formula, digits)?;
        if !report.pass {
            return Err(Error::Verification(format!(
                "'{name}' does not sum to pi: {report}"
            )));
        }
        if let Some(cert) = file.certificate() {
            if !cert.recheck()? {
                return Err(Error::Verification(format!(
                    "'{name}' carries an invalid certificate"
                )));
            }
        }
        let f = &file.formula;
        let entry = IndexEntry {
            name: name.to_string(),
            m: f.m,
            p: f.p,
            a: f.a.clone(),
            provenance: f.provenance,
            digits,
        };
        self.write_atomic(&self.entry_path(name), &file.render())?;
        let mut entries: Vec<IndexEntry> = self
            .list()?
            .into_iter()
            .filter(|e| e.name != name)
            .collect();
        entries.push(entry.clone());
        entries.sort_by(|x, y| x.name.cmp(&y.name));
        let index: String = entries.iter().map(|e| e.line() + "\n").collect();
        self.write_atomic(&self.dir.join(INDEX), &index)?;
        Ok(entry)
    }

    /// Checks that index and files correspond one to one.
    pub fn check(&self) -> Result<Vec<String>> {
        let mut problems = Vec::new();
        let entries = self.list()?;
        for e in &entries {
            match fs::read_to_string(self.entry_path(&e.name))
                .map_err(Error::from)
                .and_then(|t| FormulaFile::parse(&t))
            {
                Ok(file) => {
                    let f = &file.formula;
                    if (f.m, f.p, &f.a, f.provenance) != (e.m, e.p, &e.a, e.provenance) {
                        problems.push(format!("{}: file disagrees with index", e.name));
                    }
                }
                Err(err) => problems.push(format!("{}: {err}", e.name)),
            }
            if e.digits < MIN_DIGITS {
                problems.push(format!("{}: verified at only {} digits", e.name, e.digits));
            }
        }
        for item in fs::read_dir(&self.dir)? {
            let path = item?.path();
            if path.extension().is_some_and(|x| x == "pi") {
                let stem = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or_default();
                if !entries.iter().any(|e| e.name == stem) {
                    problems.push(format!("{stem}: file not in index"));
                }
            }
        }
        Ok(problems)
    }

    fn write_atomic(&self, path: &Path, contents: &str) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("invalid entry name '{name}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalnum::known;
    use crate::exactnum::int;

    #[test]
    fn add_list_load_and_check() {
        let dir = tempfile::tempdir().unwrap();
        let cat = Catalog::open(dir.path()).unwrap();
        assert!(cat.list().unwrap().is_empty());
        let gosper = FormulaFile::new(known::gosper());
        let e = cat.add("gosper", &gosper, 120).unwrap();
        assert_eq!((e.m, e.p, e.a.clone(), e.digits), (3, 1, int(2), 120));
        cat.add(
            "example1",
            &FormulaFile::new(known::example(1).unwrap()),
            100,
        )
        .unwrap();
        cat.add("gosper", &gosper, 150).unwrap();
        let names: Vec<String> = cat.list().unwrap().into_iter().map(|e| e.name).collect();
        assert_eq!(names, ["example1", "gosper"]);
        assert_eq!(cat.list().unwrap()[1].digits, 150);
        assert_eq!(cat.load("gosper").unwrap(), gosper);
        assert!(cat.check().unwrap().is_empty());
        fs::write(dir.path().join("stray.pi"), "x").unwrap();
        assert_eq!(cat.check().unwrap(), ["stray: file not in index"]);
    }

    #[test]
    fn refuses_unverified_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cat = Catalog::open(dir.path()).unwrap();
        let mut f = known::gosper();
        assert!(cat.add("low", &FormulaFile::new(f.clone()), 99).is_err());
        f.s_int[0] = int(-7);
        assert!(matches!(
            cat.add("wrong", &FormulaFile::new(f), 100),
            Err(Error::Verification(_))
        ));
        assert!(cat
            .add("bad/name", &FormulaFile::new(known::gosper()), 100)
            .is_err());
        assert!(cat.list().unwrap().is_empty());
        assert!(cat.load("wrong").is_err());
    }
}
