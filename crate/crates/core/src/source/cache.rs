//! On-disk page cache: one `<sha256(title)>.page` file per normalized title.
//!
//! File layout: a single JSON header line `{title, fetched_at, checksum}`
//! followed by the raw markup. `checksum` is the hex SHA-256 of the markup.
//! Titles the server reported as missing get a header with `"missing": true`
//! and an empty body, so replays do not ask again.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{PageRef, RawPage};

#[derive(Debug, Error)]
pub enum CacheEntryError {
    #[error("cache entry for {title} is corrupt: {reason}")]
    CacheCorrupt { title: String, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Serialize, Deserialize)]
struct EntryHeader {
    title: String,
    fetched_at: Option<u64>,
    checksum: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    missing: bool,
}

/// What a cache entry holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheEntry {
    Page(RawPage),
    /// The server said the page does not exist.
    Missing,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone)]
pub struct PageCache {
    dir: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl PageCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(PageCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, page: &PageRef) -> PathBuf {
        self.dir
            .join(format!("{}.page", sha256_hex(page.title().as_bytes())))
    }

    /// Reads an entry, distinguishing a miss (`Ok(None)`) from corruption.
    pub fn read(&self, page: &PageRef) -> Result<Option<CacheEntry>, CacheEntryError> {
        let path = self.entry_path(page);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: &str| CacheEntryError::CacheCorrupt {
            title: page.title().to_string(),
            reason: reason.to_string(),
        };
        let split = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| corrupt("missing header line"))?;
        let header: EntryHeader =
            serde_json::from_slice(&bytes[..split]).map_err(|e| corrupt(&e.to_string()))?;
        let body = &bytes[split + 1..];
        if header.title != page.title() {
            return Err(corrupt("title mismatch"));
        }
        if sha256_hex(body) != header.checksum {
            return Err(corrupt("checksum mismatch"));
        }
        if header.missing {
            return if body.is_empty() {
                Ok(Some(CacheEntry::Missing))
            } else {
                Err(corrupt("missing-page entry with a body"))
            };
        }
        let markup = String::from_utf8(body.to_vec()).map_err(|_| corrupt("markup is not UTF-8"))?;
        Ok(Some(CacheEntry::Page(RawPage {
            page: page.clone(),
            markup,
            fetched_at: header.fetched_at,
            from_cache: true,
        })))
    }

    /// Cache lookup that treats corrupt entries as absent (with a warning).
    pub fn lookup(&self, page: &PageRef) -> Option<CacheEntry> {
        match self.read(page) {
            Ok(hit) => hit,
            Err(e) => {
                log::warn!("{e}; ignoring cached copy");
                None
            }
        }
    }

    /// Writes an entry atomically (temp file + rename), so concurrent
    /// readers never observe a partial file.
    pub fn store(&self, raw: &RawPage) -> io::Result<()> {
        self.write_entry(&raw.page, raw.fetched_at, &raw.markup, false)
    }

    /// Remembers that `page` does not exist.
    pub fn store_missing(&self, page: &PageRef, fetched_at: Option<u64>) -> io::Result<()> {
        self.write_entry(page, fetched_at, "", true)
    }

    fn write_entry(
        &self,
        page: &PageRef,
        fetched_at: Option<u64>,
        markup: &str,
        missing: bool,
    ) -> io::Result<()> {
        let header = EntryHeader {
            title: page.title().to_string(),
            fetched_at,
            checksum: sha256_hex(markup.as_bytes()),
            missing,
        };
        let mut bytes = serde_json::to_vec(&header).map_err(io::Error::other)?;
        bytes.push(b'\n');
        bytes.extend_from_slice(markup.as_bytes());

        let path = self.entry_path(page);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            sha256_hex(page.title().as_bytes()),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page(title: &str, markup: &str) -> RawPage {
        RawPage {
            page: PageRef::new(title).unwrap(),
            markup: markup.into(),
            fetched_at: Some(1_700_000_000),
            from_cache: false,
        }
    }

    #[test]
    fn never_fetched_title_is_absent() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PageCache::open(dir.path()).unwrap();
        assert!(cache.lookup(&PageRef::new("Ulm").unwrap()).is_none());
    }

    #[test]
    fn round_trip_returns_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PageCache::open(dir.path()).unwrap();
        let original = page("Albert_Einstein", "<p>Einstein\nline two ü</p>");
        cache.store(&original).unwrap();
        let Some(CacheEntry::Page(hit)) = cache.lookup(&original.page) else {
            panic!("expected a cached page");
        };
        assert_eq!(hit.markup, original.markup);
        assert_eq!(hit.fetched_at, original.fetched_at);
        assert!(hit.from_cache);
    }

    #[test]
    fn flipped_byte_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PageCache::open(dir.path()).unwrap();
        let original = page("Ulm", "Ulm is a city on the Danube.");
        cache.store(&original).unwrap();
        let path = cache.entry_path(&original.page);
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 3;
        bytes[last] ^= 0x01;
        fs::write(&path, &bytes).unwrap();

        assert!(matches!(
            cache.read(&original.page),
            Err(CacheEntryError::CacheCorrupt { .. })
        ));
        assert!(cache.lookup(&original.page).is_none());
    }

    #[test]
    fn missing_pages_are_remembered() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PageCache::open(dir.path()).unwrap();
        let p = PageRef::new("Pauline_Koch").unwrap();
        cache.store_missing(&p, None).unwrap();
        assert_eq!(cache.lookup(&p), Some(CacheEntry::Missing));
        let path = cache.entry_path(&p);
        let mut bytes = fs::read(&path).unwrap();
        bytes.extend_from_slice(b"junk");
        fs::write(&path, bytes).unwrap();
        assert!(cache.lookup(&p).is_none());
    }

    #[test]
    fn entries_are_keyed_by_title_hash() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PageCache::open(dir.path()).unwrap();
        let p = PageRef::new("Ulm").unwrap();
        let name = cache.entry_path(&p).file_name().unwrap().to_string_lossy().into_owned();
        assert_eq!(name.len(), 64 + ".page".len());
        assert!(name.ends_with(".page"));
    }
}
