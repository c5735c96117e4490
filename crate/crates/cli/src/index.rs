use std::fs;
use std::path::Path;

use serde::Deserialize;
use wikiindex::{build_ref_sequence, wiki_index, GrowthFunction, ProbeReport};

use crate::args::IndexArgs;
use crate::error::CliError;

#[derive(Deserialize)]
struct Row {
    title: String,
    mentions: u64,
}

/// `(title, mentions)` pairs from a `title,mentions` CSV or a report JSON.
pub fn read_table(path: &Path) -> Result<Vec<(String, u64)>, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if is_json {
        return Ok(ProbeReport::from_json(&text)?.mention_pairs());
    }
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    if headers.iter().collect::<Vec<_>>() != ["title", "mentions"] {
        return Err(CliError::Malformed(format!(
            "{}: expected header `title,mentions`",
            path.display()
        )));
    }
    reader
        .deserialize::<Row>()
        .map(|r| {
            r.map(|row| (row.title, row.mentions))
                .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
        })
        .collect()
}

pub fn run(args: IndexArgs) -> Result<(), CliError> {
    let growth = GrowthFunction::<f64>::from_name(&args.growth)?;
    let table = read_table(&args.input)?;
    let seq = build_ref_sequence(&table);
    let r = wiki_index(&seq, &growth)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&r).expect("result serializes"));
        return Ok(());
    }
    println!(
        "N={} WH={} WI={} wi_raw={:.6} growth={}",
        r.n, r.wh, r.wi_rounded, r.wi_raw, r.growth
    );
    println!("{}", r.formula_line());
    Ok(())
}
