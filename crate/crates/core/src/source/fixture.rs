use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{normalize_title, PageRef, PageSource, RawPage, SourceError};

pub const MANIFEST_NAME: &str = "index.json";

/// One pre-parsed page in a fixture corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixturePageRecord {
    pub title: String,
    #[serde(default)]
    pub body_text: String,
    #[serde(default)]
    pub links: Vec<String>,
    #[serde(default)]
    pub bibliography: Vec<BibliographyRecord>,
    /// Present on redirect stubs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redirect: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BibliographyRecord {
    pub section: String,
    pub text: String,
}

/// `index.json` keeps a title -> file mapping. Entries are read in file order
/// so that duplicate keys are reported instead of silently overwritten.
struct ManifestEntries(Vec<(String, String)>);

impl<'de> Deserialize<'de> for ManifestEntries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;
        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = ManifestEntries;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping titles to page files")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    out.push((k, v));
                }
                Ok(ManifestEntries(out))
            }
        }
        d.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
struct Manifest {
    pages: ManifestEntries,
}

/// Read-only, in-memory view of a fixture corpus directory.
#[derive(Debug, Clone)]
pub struct FixtureCorpus {
    root: PathBuf,
    pages: BTreeMap<String, String>,
}

impl FixtureCorpus {
    /// Loads and validates every manifest entry.
    pub fn load(root: impl AsRef<Path>) -> Result<Self, SourceError> {
        let root = root.as_ref();
        let manifest_path = root.join(MANIFEST_NAME);
        let text = fs::read_to_string(&manifest_path).map_err(|e| {
            SourceError::CorpusError(format!("cannot read {}: {e}", manifest_path.display()))
        })?;
        let manifest: Manifest = serde_json::from_str(&text).map_err(|e| {
            SourceError::CorpusError(format!("malformed {}: {e}", manifest_path.display()))
        })?;

        let mut pages = BTreeMap::new();
        for (title, file) in manifest.pages.0 {
            let key = normalize_title(&title)
                .map_err(|e| SourceError::CorpusError(format!("entry {title:?}: {e}")))?;
            if pages.contains_key(&key) {
                return Err(SourceError::CorpusError(format!("duplicate title {key}")));
            }
            let path = root.join(&file);
            let markup = fs::read_to_string(&path).map_err(|e| {
                SourceError::CorpusError(format!("entry {key}: cannot read {}: {e}", path.display()))
            })?;
            if markup.trim().is_empty() {
                return Err(SourceError::CorpusError(format!("entry {key}: empty page file")));
            }
            if markup.trim_start().starts_with('{') {
                let record: FixturePageRecord = serde_json::from_str(&markup).map_err(|e| {
                    SourceError::CorpusError(format!("entry {key}: malformed page record: {e}"))
                })?;
                let record_title = normalize_title(&record.title)
                    .map_err(|e| SourceError::CorpusError(format!("entry {key}: {e}")))?;
                if record_title != key {
                    return Err(SourceError::CorpusError(format!(
                        "entry {key}: page record is titled {record_title}"
                    )));
                }
            }
            pages.insert(key, markup);
        }
        Ok(FixtureCorpus {
            root: root.to_path_buf(),
            pages,
        })
    }

    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    pub fn titles(&self) -> impl Iterator<Item = &str> {
        self.pages.keys().map(String::as_str)
    }

    pub fn contains(&self, page: &PageRef) -> bool {
        self.pages.contains_key(page.title())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

impl PageSource for FixtureCorpus {
    fn fetch_raw(&self, page: &PageRef) -> Result<RawPage, SourceError> {
        let markup = self
            .pages
            .get(page.title())
            .ok_or_else(|| SourceError::PageNotFound(page.title().to_string()))?;
        Ok(RawPage {
            page: PageRef::new(page.title())?,
            markup: markup.clone(),
            fetched_at: None,
            from_cache: false,
        })
    }

    fn describe(&self) -> String {
        format!("fixture:{}", self.root.display())
    }
}
