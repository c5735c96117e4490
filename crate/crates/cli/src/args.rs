use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "wikiindex",
    version,
    about = "Wiki-index of an author's popularity from a focused Wikipedia crawl"
)]
pub struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Only errors on stderr.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crawl from a seed article and compute the index.
    Probe(Box<ProbeArgs>),
    /// Compute N, WH and WI from a stored mention table.
    Index(IndexArgs),
    /// Render a comparison table against externally sourced h-indices.
    Compare(CompareArgs),
    /// Print network statistics for a stored graph or report.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args, Default)]
pub struct ProbeArgs {
    /// TOML file with probe settings; flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Seed article title, e.g. Albert_Einstein.
    #[arg(long)]
    pub seed: Option<String>,

    /// Author's full name (default: the seed title).
    #[arg(long)]
    pub full_name: Option<String>,

    /// Surname used for the in-domain test (default: last word of the full name).
    #[arg(long)]
    pub short_name: Option<String>,

    /// Extra key term that marks a page as in-domain. Repeatable.
    #[arg(long = "anchor", value_name = "TERM")]
    pub anchors: Vec<String>,

    /// Count the bare surname in bibliographies too.
    #[arg(long)]
    pub bare_surname: bool,

    /// Bibliography heading to recognize. Repeatable; replaces the defaults.
    #[arg(long = "section", value_name = "HEADING")]
    pub sections: Vec<String>,

    /// live:<api-url> or fixture:<dir>.
    #[arg(long, value_name = "SPEC")]
    pub source: Option<String>,

    #[arg(long, env = "WIKIINDEX_CACHE_DIR", value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, env = "WIKIINDEX_USER_AGENT")]
    pub user_agent: Option<String>,

    /// Live requests per second.
    #[arg(long)]
    pub rate_limit: Option<u32>,

    /// Live request timeout in seconds.
    #[arg(long, value_name = "SECS")]
    pub timeout: Option<f64>,

    /// Stop after this many pages beyond the seed (0 = no limit).
    #[arg(long)]
    pub max_pages: Option<usize>,

    /// Follow at most this many links per page (0 = no limit).
    #[arg(long)]
    pub max_links_per_page: Option<usize>,

    /// Also follow links out of pages with zero mentions.
    #[arg(long)]
    pub expand_endnotes: bool,

    /// sqrt, identity or log1p.
    #[arg(long)]
    pub growth: Option<String>,

    /// Rows in the top-degree table.
    #[arg(long)]
    pub top_k: Option<usize>,

    /// Graph export as <gexf|graphml|edge-csv>:<path>. Repeatable.
    #[arg(long = "export", value_name = "FMT:PATH")]
    pub exports: Vec<String>,

    /// Report file; `.txt` gives the text form, anything else JSON.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Trace file.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,

    /// Save crawl state here (periodically and at the end).
    #[arg(long, value_name = "PATH")]
    pub checkpoint: Option<PathBuf>,

    /// Continue from a saved checkpoint.
    #[arg(long, value_name = "PATH")]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// CSV with header `title,mentions`, or a report JSON.
    pub input: PathBuf,

    #[arg(long, default_value = "sqrt")]
    pub growth: String,

    /// Print the result as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// JSON rows file.
    pub rows: PathBuf,

    /// Also write the table as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// A .gexf, .graphml, .csv edge list or report .json.
    pub input: PathBuf,

    /// Input format when the extension is not enough: gexf, graphml, edge-csv, report.
    #[arg(long)]
    pub format: Option<String>,

    #[arg(long, default_value_t = 10)]
    pub top_k: usize,

    /// Print the metrics as JSON.
    #[arg(long)]
    pub json: bool,
}
