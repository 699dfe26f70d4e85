//! Persistent table of known LABS optima.
//!
//! File format, one line per sequence length:
//!
//! ```text
//! # comment
//! N E_opt seq1 seq2 ...
//! ```
//!
//! where each `seq` is a `+`/`-` string of length `N`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::labs::{format_sequence, parse_sequence, sidelobe_energy, LabsOptimum};
use crate::error::{Error, Result};
use crate::hamiltonian::Spins;

#[derive(Debug, Clone, PartialEq)]
pub struct BankEntry {
    pub energy: u64,
    pub witnesses: Vec<Spins>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabsSolutionBank {
    entries: BTreeMap<usize, BankEntry>,
}

impl LabsSolutionBank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: usize) -> Option<&BankEntry> {
        self.entries.get(&n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BankEntry)> {
        self.entries.iter().map(|(&n, e)| (n, e))
    }

    /// Inserts an entry after checking every witness.
    pub fn insert(&mut self, n: usize, entry: BankEntry) -> Result<()> {
        validate(n, &entry)?;
        self.entries.insert(n, entry);
        Ok(())
    }

    pub fn insert_optimum(&mut self, opt: &LabsOptimum) -> Result<()> {
        self.insert(
            opt.n,
            BankEntry {
                energy: opt.energy,
                witnesses: opt.witnesses.clone(),
            },
        )
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut bank = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut f = line.split_whitespace();
            let n: usize = f
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(path, lineno, "bad sequence length"))?;
            let energy: u64 = f
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(path, lineno, "bad optimal energy"))?;
            let witnesses = f
                .map(|s| {
                    parse_sequence(s)
                        .filter(|w| w.len() == n)
                        .ok_or_else(|| Error::parse(path, lineno, format!("bad sequence `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let entry = BankEntry { energy, witnesses };
            validate(n, &entry).map_err(|e| match e {
                Error::Integrity(m) => {
                    Error::Integrity(format!("{}:{lineno}: {m}", path.display()))
                }
                other => other,
            })?;
            if bank.entries.insert(n, entry).is_some() {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("duplicate entry for N = {n}"),
                ));
            }
        }
        Ok(bank)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (n, e) in &self.entries {
            let _ = write!(s, "{n} {}", e.energy);
            for w in &e.witnesses {
                let _ = write!(s, " {}", format_sequence(w));
            }
            s.push('\n');
        }
        s
    }

    /// Writes the whole bank to a sibling temporary file, then renames it over
    /// `path`.
    pub fn store(&self, path: &Path) -> Result<()> {
        let file_name = path
            .file_name()
            .ok_or_else(|| Error::input(format!("{} is not a file path", path.display())))?;
        let tmp = path.with_file_name(format!(".{}.tmp", file_name.to_string_lossy()));
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn validate(n: usize, entry: &BankEntry) -> Result<()> {
    if n >= 2 && entry.energy == 0 {
        return Err(Error::Integrity(format!(
            "N = {n} claims zero sidelobe energy"
        )));
    }
    for w in &entry.witnesses {
        if w.len() != n {
            return Err(Error::Integrity(format!(
                "witness {} has length {} for N = {n}",
                format_sequence(w),
                w.len()
            )));
        }
        let e = sidelobe_energy(w);
        if e != entry.energy {
            return Err(Error::Integrity(format!(
                "witness {} has sidelobe energy {e}, bank claims {}",
                format_sequence(w),
                entry.energy
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::labs_exact;

    #[test]
    fn store_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labs.bank");
        let mut bank = LabsSolutionBank::new();
        bank.insert(
            3,
            BankEntry {
                energy: 1,
                witnesses: vec![vec![1, 1, -1]],
            },
        )
        .unwrap();
        for n in [5, 7, 13] {
            bank.insert_optimum(&labs_exact(n, 24).unwrap()).unwrap();
        }
        bank.store(&path).unwrap();
        assert_eq!(LabsSolutionBank::load(&path).unwrap(), bank);
    }

    #[test]
    fn rejects_wrong_witness() {
        let err = LabsSolutionBank::parse("3 1 +++\n", Path::new("b")).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "{err}");
        assert_eq!(sidelobe_energy(&[1, 1, 1]), 5);
    }

    #[test]
    fn empty_and_malformed() {
        assert!(LabsSolutionBank::parse("", Path::new("b"))
            .unwrap()
            .is_empty());
        let err = LabsSolutionBank::parse("# x\n3 1 ++-\n4 x\n", Path::new("b")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = LabsSolutionBank::parse("3 1 ++-+\n", Path::new("b")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
