//! The Wiki-index itself: the sorted mention sequence, its Hirsch-like core
//! `WH = max{ i : R_i >= i }` and `WI = WH * f(N)`.
//!
//! The arithmetic is generic over the float type; [`crate::WikiIndexResult`]
//! fixes it to `f64`.

use std::fmt;
use std::sync::Arc;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IndexError {
    #[error("growth function {descriptor} is not non-decreasing: f({at}) > f({next})", next = .at + 1)]
    InvalidFunction { descriptor: String, at: u64 },
    #[error("growth function {descriptor} is not finite at {at}")]
    NonFinite { descriptor: String, at: u64 },
    #[error("WH = {wh} exceeds N = {n}")]
    WhExceedsN { wh: u64, n: u64 },
    #[error("unknown growth function {0:?} (expected sqrt, identity or log1p)")]
    UnknownGrowth(String),
}

/// R_1 >= R_2 >= ... >= R_N, every entry positive, with the article each
/// count came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefSequence {
    counts: Vec<u64>,
    source_titles: Vec<String>,
}

impl RefSequence {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn source_titles(&self) -> &[String] {
        &self.source_titles
    }

    /// N, the number of articles that mention the author at least once.
    pub fn n(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.source_titles
            .iter()
            .map(String::as_str)
            .zip(self.counts.iter().copied())
    }
}

/// Drops zero counts and sorts by count descending, title ascending.
pub fn build_ref_sequence<S: AsRef<str>>(pairs: &[(S, u64)]) -> RefSequence {
    let mut kept: Vec<(&str, u64)> = pairs
        .iter()
        .filter(|(_, m)| *m > 0)
        .map(|(t, m)| (t.as_ref(), *m))
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    RefSequence {
        counts: kept.iter().map(|p| p.1).collect(),
        source_titles: kept.iter().map(|p| p.0.to_string()).collect(),
    }
}

/// Largest 1-based `i` with `counts[i] >= i`; 0 for an empty sequence.
pub fn compute_wh(seq: &RefSequence) -> u64 {
    // Non-increasing counts against increasing ranks: the predicate holds on
    // a prefix, so the answer is the length of that prefix.
    let counts = seq.counts();
    let (mut lo, mut hi) = (0usize, counts.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if counts[mid] >= (mid as u64 + 1) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo as u64
}

/// The non-decreasing `f` in `WI = WH * f(N)`.
#[derive(Clone)]
#[derive(Default)]
pub enum GrowthFunction<T> {
    #[default]
    Sqrt,
    Identity,
    Log1p,
    Custom {
        descriptor: String,
        f: Arc<dyn Fn(u64) -> T + Send + Sync>,
    },
}

impl<T> fmt::Debug for GrowthFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}


impl<T> GrowthFunction<T> {
    pub fn custom(descriptor: impl Into<String>, f: impl Fn(u64) -> T + Send + Sync + 'static) -> Self {
        GrowthFunction::Custom {
            descriptor: descriptor.into(),
            f: Arc::new(f),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            GrowthFunction::Sqrt => "sqrt".into(),
            GrowthFunction::Identity => "identity".into(),
            GrowthFunction::Log1p => "log1p".into(),
            GrowthFunction::Custom { descriptor, .. } => descriptor.clone(),
        }
    }

    /// Parses one of the built-in names.
    pub fn from_name(name: &str) -> Result<Self, IndexError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "sqrt" => Ok(GrowthFunction::Sqrt),
            "identity" | "id" | "linear" => Ok(GrowthFunction::Identity),
            "log1p" => Ok(GrowthFunction::Log1p),
            other => Err(IndexError::UnknownGrowth(other.to_string())),
        }
    }
}

impl<T: Float> GrowthFunction<T> {
    pub fn eval(&self, n: u64) -> T {
        let x = T::from(n).unwrap_or_else(T::infinity);
        match self {
            GrowthFunction::Sqrt => x.sqrt(),
            GrowthFunction::Identity => x,
            GrowthFunction::Log1p => x.ln_1p(),
            GrowthFunction::Custom { f, .. } => f(n),
        }
    }

    /// Checks monotonicity and finiteness of a custom `f` on `0..=n`.
    /// Built-in functions are monotone by construction.
    pub fn check(&self, n: u64) -> Result<(), IndexError> {
        if !matches!(self, GrowthFunction::Custom { .. }) {
            return Ok(());
        }
        let mut prev = self.eval(0);
        if !prev.is_finite() {
            return Err(IndexError::NonFinite {
                descriptor: self.descriptor(),
                at: 0,
            });
        }
        for i in 1..=n {
            let cur = self.eval(i);
            if !cur.is_finite() {
                return Err(IndexError::NonFinite {
                    descriptor: self.descriptor(),
                    at: i,
                });
            }
            if cur < prev {
                return Err(IndexError::InvalidFunction {
                    descriptor: self.descriptor(),
                    at: i - 1,
                });
            }
            prev = cur;
        }
        Ok(())
    }
}

/// WH, N and the resulting index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexResult<T> {
    pub n: u64,
    pub wh: u64,
    /// f(N) as evaluated.
    pub growth_value: T,
    /// WH * f(N).
    pub wi_raw: T,
    /// `wi_raw` rounded half away from zero.
    pub wi_rounded: u64,
    pub growth: String,
}

impl<T: Float + fmt::Display> IndexResult<T> {
    /// `WI = <WH> × <f(N)> = <WI>`, with f(N) printed to two decimals at most.
    pub fn formula_line(&self) -> String {
        format!(
            "WI = {} × {} = {}",
            self.wh,
            format_factor(self.growth_value),
            self.wi_rounded
        )
    }
}

fn format_factor<T: Float + fmt::Display>(v: T) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// WI = WH × f(N).
pub fn compute_wi<T: Float>(wh: u64, n: u64, f: &GrowthFunction<T>) -> Result<IndexResult<T>, IndexError> {
    if wh > n {
        return Err(IndexError::WhExceedsN { wh, n });
    }
    f.check(n)?;
    let growth_value = f.eval(n);
    let wi_raw = T::from(wh).expect("u64 fits any float") * growth_value;
    // `Float::round` rounds half away from zero.
    let wi_rounded = wi_raw.round().to_u64().unwrap_or(u64::MAX);
    Ok(IndexResult {
        n,
        wh,
        growth_value,
        wi_raw,
        wi_rounded,
        growth: f.descriptor(),
    })
}

/// Convenience: sequence → WH → WI.
pub fn wiki_index<T: Float>(seq: &RefSequence, f: &GrowthFunction<T>) -> Result<IndexResult<T>, IndexError> {
    compute_wi(compute_wh(seq), seq.n(), f)
}
