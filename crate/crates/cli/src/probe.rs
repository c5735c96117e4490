use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use wikiindex::crawler::Step;
use wikiindex::source::SourceMode;
use wikiindex::{
    export_graph, write_trace, AuthorPatterns, Checkpoint, Crawler, GraphFormat, GrowthFunction,
    PageRef, PageSource, ProbeConfig, ProbeReport, ReportFormat, SourceConfig,
};

use crate::config::Settings;
use crate::error::CliError;

/// Checkpoints are refreshed after this many fetches.
const CHECKPOINT_EVERY: usize = 25;

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// "Albert_Einstein" -> "Albert Einstein"; a trailing "(physicist)" is dropped.
fn name_from_title(title: &str) -> String {
    let spaced = title.replace('_', " ");
    let base = match spaced.rfind(" (") {
        Some(i) if spaced.ends_with(')') => &spaced[..i],
        _ => spaced.as_str(),
    };
    base.trim().to_string()
}

fn parse_export(spec: &str) -> Result<(GraphFormat, PathBuf), CliError> {
    let (fmt, path) = spec
        .split_once(':')
        .filter(|(_, p)| !p.is_empty())
        .ok_or_else(|| CliError::Usage(format!("--export expects <fmt>:<path>, got {spec:?}")))?;
    Ok((fmt.parse()?, PathBuf::from(path)))
}

fn probe_config(s: &Settings, seed: &str) -> Result<ProbeConfig, CliError> {
    let seed = PageRef::new(seed).map_err(|e| CliError::Usage(format!("--seed: {e}")))?;
    let full_name = s
        .full_name
        .clone()
        .unwrap_or_else(|| name_from_title(seed.title()));
    let mut patterns = AuthorPatterns::new(&full_name, s.short_name.as_deref())
        .map_err(|e| CliError::Usage(e.to_string()))?
        .with_anchors(s.anchors.iter().cloned());
    patterns.match_bare_surname_in_bib = s.bare_surname;
    let mut cfg = ProbeConfig::new(seed, patterns);
    cfg.max_pages = s.max_pages.unwrap_or(0);
    cfg.max_links_per_page = s.max_links_per_page;
    cfg.expand_endnotes = s.expand_endnotes;
    if !s.sections.is_empty() {
        cfg.recognized_sections = s.sections.clone();
    }
    Ok(cfg)
}

fn source_config(s: &Settings) -> Result<SourceConfig, CliError> {
    let mut src = SourceConfig::from_spec(&s.source)?;
    if s.cache_dir.is_some() {
        src.cache_dir = s.cache_dir.clone();
    }
    if let Some(ua) = &s.user_agent {
        src.user_agent = ua.clone();
    }
    if let Some(rate) = s.rate_limit {
        src.rate_limit = rate;
    }
    if let Some(t) = s.timeout {
        src.request_timeout = t;
    }
    src.validate()?;
    Ok(src)
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(CliError::io(&tmp))?;
    fs::rename(&tmp, path).map_err(CliError::io(path))
}

fn load_checkpoint(path: &Path) -> Result<Checkpoint, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    Ok(Checkpoint::from_json(&text)?)
}

pub fn run(s: Settings) -> Result<(), CliError> {
    let growth = GrowthFunction::<f64>::from_name(&s.growth)?;
    let exports = s
        .exports
        .iter()
        .map(|e| parse_export(e))
        .collect::<Result<Vec<_>, _>>()?;
    let src_cfg = source_config(&s)?;
    let live = src_cfg.mode == SourceMode::Live;
    let source = src_cfg.open()?;
    let started = unix_now();

    let mut crawler = match &s.resume {
        Some(path) => {
            let cp = load_checkpoint(path)?;
            let cfg = match &s.seed {
                Some(seed) => probe_config(&s, seed)?,
                None => {
                    let mut cfg = cp.config.clone();
                    if let Some(m) = s.max_pages {
                        cfg.max_pages = m;
                    }
                    cfg
                }
            };
            log::info!("resuming after {} fetched pages", cp.pages_fetched());
            Crawler::resume(cp, cfg, &source)?
        }
        None => {
            let seed = s
                .seed
                .as_deref()
                .ok_or_else(|| CliError::Usage("--seed is required (or set seed in --config)".into()))?;
            Crawler::start(probe_config(&s, seed)?, &source)?
        }
    };

    while crawler.step() == Step::Fetched {
        let n = crawler.pages_fetched();
        log::debug!("fetched {n} pages");
        if let Some(path) = &s.checkpoint {
            if n % CHECKPOINT_EVERY == 0 {
                write_atomic(path, &crawler.checkpoint().to_json())?;
            }
        }
    }
    if let Some(path) = &s.checkpoint {
        write_atomic(path, &crawler.checkpoint().to_json())?;
    }
    let cfg = crawler.config().clone();
    let requests = crawler.source().network_requests();
    let outcome = crawler.finish();

    let mut report = ProbeReport::from_outcome(&cfg, &s.source, &outcome, &growth, s.top_k)?;
    if live {
        report = report.with_timestamps(started, unix_now());
        log::info!("{requests} network requests");
    }

    let seed = cfg.seed.title();
    let out = s
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{seed}.report.json")));
    let format = match out.extension().and_then(|e| e.to_str()) {
        Some("txt") => ReportFormat::Text,
        _ => ReportFormat::Json,
    };
    report.export(format, &out)?;
    let trace = s
        .trace
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{seed}.trace")));
    write_trace(&outcome.trace, &trace)?;
    for (fmt, path) in &exports {
        export_graph(&outcome.graph, *fmt, path)?;
    }

    let wi = &report.wiki_index;
    println!(
        "{seed}: {} pages fetched{}, {} nodes, {} edges",
        outcome.trace.events.len(),
        if outcome.truncated { " (truncated)" } else { "" },
        outcome.graph.nodes().len(),
        outcome.graph.edges().len()
    );
    println!("N={} WH={} WI={}", wi.n, wi.wh, wi.wi_rounded);
    println!("{}", wi.formula_line());
    if !outcome.warnings.is_empty() {
        log::warn!("{} pages could not be read; see the report's warnings", outcome.warnings.len());
    }
    Ok(())
}
