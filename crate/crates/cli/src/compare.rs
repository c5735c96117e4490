//! Side-by-side table of Wiki-indices and h-indices supplied by the user.
//!
//! Rows file (JSON):
//!
//! ```json
//! {
//!   "sources": ["Scopus", "Web Of Science", "Google Scholar Citations"],
//!   "rows": [
//!     {"scientist": "Enrico Fermi", "report": "fermi.report.json",
//!      "external": {"Scopus": 26, "Web Of Science": null,
//!                   "Google Scholar Citations": {"value": 49, "note": "calculated for \"e. fermi\""}}}
//!   ]
//! }
//! ```
//!
//! A row gives either `report` (path relative to the rows file) or a literal
//! `wiki_index`. External values are never fetched.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use wikiindex::ProbeReport;

use crate::args::CompareArgs;
use crate::error::CliError;

pub const DEFAULT_SOURCES: [&str; 3] = ["Scopus", "Web Of Science", "Google Scholar Citations"];
const PLACEHOLDER: &str = "n/a";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowsFile {
    sources: Option<Vec<String>>,
    #[serde(default)]
    rows: Vec<RowSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowSpec {
    scientist: String,
    report: Option<PathBuf>,
    wiki_index: Option<u64>,
    #[serde(default)]
    external: BTreeMap<String, Option<External>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum External {
    Value(u64),
    Noted { value: Option<u64>, note: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub value: Option<u64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub scientist: String,
    pub wiki_index: u64,
    pub external: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub sources: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

fn malformed(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Malformed(format!("{}: {msg}", path.display()))
}

pub fn load(path: &Path) -> Result<Comparison, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let file: RowsFile = if text.trim().is_empty() {
        RowsFile::default()
    } else {
        serde_json::from_str(&text).map_err(|e| malformed(path, e))?
    };
    let sources = file
        .sources
        .unwrap_or_else(|| DEFAULT_SOURCES.iter().map(|s| s.to_string()).collect());
    let base = path.parent().unwrap_or(Path::new("."));
    let mut rows = Vec::with_capacity(file.rows.len());
    for spec in file.rows {
        if let Some(unknown) = spec.external.keys().find(|k| !sources.contains(k)) {
            return Err(malformed(
                path,
                format!("{}: unknown source {unknown:?}", spec.scientist),
            ));
        }
        let wiki_index = match (&spec.report, spec.wiki_index) {
            (Some(report), _) => ProbeReport::import(&base.join(report))?.wiki_index.wi_rounded,
            (None, Some(wi)) => wi,
            (None, None) => {
                return Err(malformed(
                    path,
                    format!("{}: needs `report` or `wiki_index`", spec.scientist),
                ))
            }
        };
        let external = sources
            .iter()
            .map(|s| match spec.external.get(s) {
                Some(Some(External::Value(v))) => Cell {
                    value: Some(*v),
                    note: None,
                },
                Some(Some(External::Noted { value, note })) => Cell {
                    value: *value,
                    note: note.clone(),
                },
                Some(None) | None => Cell {
                    value: None,
                    note: None,
                },
            })
            .collect();
        rows.push(ComparisonRow {
            scientist: spec.scientist,
            wiki_index,
            external,
        });
    }
    Ok(Comparison { sources, rows })
}

impl Comparison {
    fn header(&self) -> Vec<String> {
        let mut h = vec!["N".to_string(), "Scientist".into(), "Wiki-index".into()];
        h.extend(self.sources.iter().map(|s| format!("h-index {s}")));
        h
    }

    /// Distinct notes in order of first appearance.
    fn notes(&self) -> Vec<&str> {
        let mut notes: Vec<&str> = Vec::new();
        for cell in self.rows.iter().flat_map(|r| &r.external) {
            if let Some(n) = cell.note.as_deref() {
                if !notes.contains(&n) {
                    notes.push(n);
                }
            }
        }
        notes
    }

    pub fn to_text(&self) -> String {
        let notes = self.notes();
        let marker = |note: &Option<String>| match note {
            Some(n) => "*".repeat(notes.iter().position(|x| x == n).unwrap_or(0) + 1),
            None => String::new(),
        };
        let mut table = vec![self.header()];
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells = vec![format!("{}.", i + 1), row.scientist.clone(), row.wiki_index.to_string()];
            cells.extend(row.external.iter().map(|c| {
                let v = c.value.map_or_else(|| PLACEHOLDER.to_string(), |v| v.to_string());
                v + &marker(&c.note)
            }));
            table.push(cells);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|c| table.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &table {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        let absent = self
            .rows
            .iter()
            .flat_map(|r| &r.external)
            .any(|c| c.value.is_none() && c.note.is_none());
        if !notes.is_empty() || absent {
            let _ = writeln!(out);
        }
        for (i, n) in notes.iter().enumerate() {
            let _ = writeln!(out, "{}{n}", "*".repeat(i + 1));
        }
        if absent {
            let _ = writeln!(out, "{PLACEHOLDER}: value not supplied");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), source: e.into() })?;
        let mut header = self.header();
        header.push("notes".into());
        let to_err = |e: csv::Error| CliError::Io {
            path: path.display().to_string(),
            source: e.into(),
        };
        w.write_record(&header).map_err(to_err)?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut rec = vec![(i + 1).to_string(), row.scientist.clone(), row.wiki_index.to_string()];
            rec.extend(row.external.iter().map(|c| c.value.map(|v| v.to_string()).unwrap_or_default()));
            let notes: Vec<String> = self
                .sources
                .iter()
                .zip(&row.external)
                .filter_map(|(s, c)| c.note.as_ref().map(|n| format!("{s}: {n}")))
                .collect();
            rec.push(notes.join("; "));
            w.write_record(&rec).map_err(to_err)?;
        }
        w.flush().map_err(CliError::io(path))
    }
}

pub fn run(args: CompareArgs) -> Result<(), CliError> {
    let cmp = load(&args.rows)?;
    print!("{}", cmp.to_text());
    if let Some(csv) = &args.csv {
        cmp.write_csv(csv)?;
    }
    Ok(())
}
