//! The mock web: an immutable URL-to-document map with a search index,
//! a fetcher over it, and the converter for its mock binary formats.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::robot::{
    normalize_url, Clock, Converter, ExtractError, FetchLogEntry, FetchResult, FetchStatus, Fetcher, Format, MockIndex,
};

use super::CorpusError;

pub const PDF_MAGIC: &str = "%PDF-mock-1.0\n";
pub const PS_MAGIC: &str = "%!PS-mock-1.0\n";

/// Suffix shared by every generated host name.
pub const MOCK_DOMAIN: &str = "mock.example";

/// What a page is, from the generator's point of view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum PageRole {
    /// The genuine full text of an article.
    FullText {
        article: String,
    },
    /// A page on the link chain leading to a full text.
    Landing {
        article: String,
    },
    /// Title and abstract only, with no way to the full text.
    AbstractOnly {
        article: String,
    },
    /// Another paper's full text that quotes the article's title and author up front.
    Impostor {
        article: String,
    },
    Homepage,
    Site,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MockPage {
    pub format: Format,
    pub bytes: Vec<u8>,
    pub role: PageRole,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MockWeb {
    /// Keyed by canonical URL.
    pub pages: BTreeMap<String, MockPage>,
    /// URLs that are referenced on purpose but answer 404.
    pub dead_links: BTreeSet<String>,
    pub index: MockIndex,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    pages: Vec<ManifestEntry>,
    dead_links: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestEntry {
    url: String,
    file: String,
    format: Format,
    #[serde(flatten)]
    role: PageRole,
}

impl MockWeb {
    pub fn insert(&mut self, url: &str, format: Format, bytes: Vec<u8>, role: PageRole) {
        let url = normalize_url(url).expect("generated URLs are valid");
        self.pages.insert(url, MockPage { format, bytes, role });
    }

    pub fn add_dead_link(&mut self, url: &str) {
        self.dead_links
            .insert(normalize_url(url).expect("generated URLs are valid"));
    }

    pub fn get(&self, url: &str) -> Option<&MockPage> {
        let canonical = normalize_url(url).ok()?;
        self.pages.get(&canonical)
    }

    /// Hosts of every stored page and dead link.
    pub fn hosts(&self) -> BTreeSet<String> {
        self.pages
            .keys()
            .chain(self.dead_links.iter())
            .map(|u| crate::robot::host_of(u))
            .collect()
    }

    /// Writes `index.json`, `manifest.json` and one file per page under `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), CorpusError> {
        let pages_dir = dir.join("pages");
        std::fs::create_dir_all(&pages_dir).map_err(|e| CorpusError::io(&pages_dir, e))?;
        let mut entries = Vec::with_capacity(self.pages.len());
        for (i, (url, page)) in self.pages.iter().enumerate() {
            let file = format!("pages/{:06}.{}", i + 1, extension(page.format));
            let path = dir.join(&file);
            std::fs::write(&path, &page.bytes).map_err(|e| CorpusError::io(&path, e))?;
            entries.push(ManifestEntry {
                url: url.clone(),
                file,
                format: page.format,
                role: page.role.clone(),
            });
        }
        let manifest = Manifest {
            pages: entries,
            dead_links: self.dead_links.iter().cloned().collect(),
        };
        write_json(&dir.join("manifest.json"), &manifest)?;
        write_json(&dir.join("index.json"), &self.index)
    }

    pub fn load(dir: &Path) -> Result<MockWeb, CorpusError> {
        let manifest: Manifest = read_json(&dir.join("manifest.json"))?;
        let index: MockIndex = read_json(&dir.join("index.json"))?;
        let mut web = MockWeb {
            index,
            ..MockWeb::default()
        };
        for entry in manifest.pages {
            let path = dir.join(&entry.file);
            let bytes = std::fs::read(&path).map_err(|e| CorpusError::io(&path, e))?;
            let url = normalize_url(&entry.url).map_err(|e| CorpusError::Invalid(format!("{}: {e}", entry.url)))?;
            web.pages.insert(
                url,
                MockPage {
                    format: entry.format,
                    bytes,
                    role: entry.role,
                },
            );
        }
        for url in manifest.dead_links {
            let canonical = normalize_url(&url).map_err(|e| CorpusError::Invalid(format!("{url}: {e}")))?;
            web.dead_links.insert(canonical);
        }
        Ok(web)
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Html => "html",
        Format::Text => "txt",
        Format::Pdf => "pdf",
        Format::Ps => "ps",
        Format::Xml => "xml",
        Format::Latex => "tex",
        Format::Rtf => "rtf",
        Format::Word => "doc",
        Format::Unknown => "bin",
    }
}

pub(super) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CorpusError> {
    let mut body = serde_json::to_string_pretty(value).map_err(|e| CorpusError::Invalid(e.to_string()))?;
    body.push('\n');
    std::fs::write(path, body).map_err(|e| CorpusError::io(path, e))
}

pub(super) fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CorpusError> {
    let body = std::fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
    serde_json::from_str(&body).map_err(|e| CorpusError::Invalid(format!("{}: {e}", path.display())))
}

/// Serves a [`MockWeb`] without any network I/O and logs every request.
pub struct MockFetcher {
    web: Arc<MockWeb>,
    clock: Arc<dyn Clock>,
    log: Option<Mutex<Vec<FetchLogEntry>>>,
}

impl MockFetcher {
    pub fn new(web: Arc<MockWeb>, clock: Arc<dyn Clock>) -> Self {
        MockFetcher {
            web,
            clock,
            log: Some(Mutex::new(Vec::new())),
        }
    }

    /// A fetcher that keeps no log of its own; crawls still report their fetches.
    pub fn unlogged(web: Arc<MockWeb>, clock: Arc<dyn Clock>) -> Self {
        MockFetcher { web, clock, log: None }
    }

    pub fn log(&self) -> Vec<FetchLogEntry> {
        self.log
            .as_ref()
            .map(|l| l.lock().expect("fetch log lock").clone())
            .unwrap_or_default()
    }

    pub fn take_log(&self) -> Vec<FetchLogEntry> {
        self.log
            .as_ref()
            .map(|l| std::mem::take(&mut *l.lock().expect("fetch log lock")))
            .unwrap_or_default()
    }
}

impl Fetcher for MockFetcher {
    fn fetch(&self, url: &str) -> FetchResult {
        let timestamp_ms = self.clock.now_millis();
        let result = match self.web.get(url) {
            Some(page) => FetchResult {
                status: FetchStatus::Http { code: 200 },
                format: page.format,
                bytes: page.bytes.clone(),
                timestamp_ms,
            },
            None => FetchResult::failure(FetchStatus::NotFound, timestamp_ms),
        };
        if let Some(log) = &self.log {
            log.lock()
                .expect("fetch log lock")
                .push(FetchLogEntry::new(url, &result));
        }
        result
    }
}

/// Reads the mock PDF and PostScript files the generator writes.
#[derive(Debug, Clone, Copy, Default)]
pub struct MockDocumentConverter;

impl Converter for MockDocumentConverter {
    fn convert(&self, bytes: &[u8], format: Format) -> Result<String, ExtractError> {
        let magic = match format {
            Format::Pdf => PDF_MAGIC,
            Format::Ps => PS_MAGIC,
            other => return Err(ExtractError::ConverterUnavailable(other)),
        };
        let body = bytes
            .strip_prefix(magic.as_bytes())
            .ok_or_else(|| ExtractError::ConverterFailed(format!("not a mock {format} document")))?;
        String::from_utf8(body.to_vec()).map_err(|_| ExtractError::Undecodable(format))
    }
}

/// Wraps plain text in the mock container of `format`.
pub fn encode_document(text: &str, format: Format) -> Vec<u8> {
    match format {
        Format::Pdf => format!("{PDF_MAGIC}{text}").into_bytes(),
        Format::Ps => format!("{PS_MAGIC}{text}").into_bytes(),
        _ => text.as_bytes().to_vec(),
    }
}
