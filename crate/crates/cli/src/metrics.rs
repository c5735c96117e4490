use std::path::Path;

use wikiindex::export::metrics_text;
use wikiindex::{compute_metrics, import_graph, DomainGraph, GraphFormat, GraphMetrics, ProbeReport};

use crate::args::MetricsArgs;
use crate::error::CliError;

fn load_graph(path: &Path, format: Option<&str>) -> Result<DomainGraph, CliError> {
    let format = match format {
        Some(f) => f.to_ascii_lowercase(),
        None => path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default()
            .to_ascii_lowercase(),
    };
    if format == "json" || format == "report" {
        return Ok(ProbeReport::import(path)?.graph);
    }
    let format: GraphFormat = format.parse()?;
    Ok(import_graph(path, format)?)
}

pub fn run(args: MetricsArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.input, args.format.as_deref())?;
    let m: GraphMetrics = compute_metrics(&graph, args.top_k)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", args.input.display())))?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&m).expect("metrics serialize"));
    } else {
        print!("{}", metrics_text(&m));
    }
    Ok(())
}
