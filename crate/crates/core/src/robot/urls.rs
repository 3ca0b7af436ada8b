//! URL filtering, canonicalization, deduplication and format-first ordering.

use std::collections::HashSet;

use thiserror::Error;
use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UrlError {
    #[error("unparseable url `{url}`: {reason}")]
    Invalid { url: String, reason: String },
    #[error("url `{0}` has no host")]
    MissingHost(String),
}

/// Host patterns identifying a provider's own, advertising or redirect links.
///
/// A pattern matches its exact host and every subdomain; a leading `*.` is accepted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Blocklist {
    patterns: Vec<String>,
}

impl Blocklist {
    pub fn new<I, S>(patterns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Blocklist {
            patterns: patterns
                .into_iter()
                .map(|p| p.as_ref().trim().trim_start_matches("*.").to_ascii_lowercase())
                .filter(|p| !p.is_empty())
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn blocks(&self, url: &str) -> bool {
        let Some(host) = Url::parse(url)
            .ok()
            .and_then(|u| u.host_str().map(str::to_ascii_lowercase))
        else {
            return false;
        };
        self.patterns.iter().any(|p| {
            host == *p
                || (host.len() > p.len() && host.ends_with(p.as_str()) && host[..host.len() - p.len()].ends_with('.'))
        })
    }
}

/// Drops blocklisted URLs, keeping survivors in order.
pub fn filter_irrelevant_links(urls: &[String], blocklist: &Blocklist) -> Vec<String> {
    urls.iter().filter(|u| !blocklist.blocks(u)).cloned().collect()
}

/// Canonical form used for equality and the visited set.
///
/// Lowercases scheme and host, strips the fragment and default port,
/// resolves dot segments and uppercases percent-escape hex digits.
/// Query parameter order is preserved.
pub fn normalize_url(raw: &str) -> Result<String, UrlError> {
    let mut url = Url::parse(raw.trim()).map_err(|e| UrlError::Invalid {
        url: raw.to_string(),
        reason: e.to_string(),
    })?;
    if url.cannot_be_a_base() || url.host_str().is_none() {
        return Err(UrlError::MissingHost(raw.to_string()));
    }
    // The parser already lowercases scheme/host, drops default ports and
    // resolves dot segments.
    url.set_fragment(None);
    let path = uppercase_escapes(url.path());
    url.set_path(&path);
    if let Some(q) = url.query() {
        let q = uppercase_escapes(q);
        url.set_query(Some(&q));
    }
    Ok(url.to_string())
}

fn uppercase_escapes(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%'
            && i + 2 < bytes.len()
            && bytes[i + 1].is_ascii_hexdigit()
            && bytes[i + 2].is_ascii_hexdigit()
        {
            out.push('%');
            out.push(bytes[i + 1].to_ascii_uppercase() as char);
            out.push(bytes[i + 2].to_ascii_uppercase() as char);
            i += 3;
        } else {
            let ch = s[i..].chars().next().expect("char boundary");
            out.push(ch);
            i += ch.len_utf8();
        }
    }
    out
}

/// Keeps the first occurrence of each canonical URL. Unparseable URLs are dropped.
pub fn dedup_urls(urls: &[String]) -> Vec<String> {
    let mut seen = HashSet::new();
    urls.iter()
        .filter_map(|u| normalize_url(u).ok())
        .filter(|u| seen.insert(u.clone()))
        .collect()
}

/// True when the URL path ends in `.pdf` or `.ps` (case-insensitive).
pub fn is_probable_full_text(url: &str) -> bool {
    let path = match Url::parse(url) {
        Ok(u) => u.path().to_string(),
        Err(_) => url.split(['?', '#']).next().unwrap_or("").to_string(),
    };
    let path = path.to_ascii_lowercase();
    path.ends_with(".pdf") || path.ends_with(".ps")
}

/// Stable partition: `.pdf`/`.ps` URLs first, everything else after.
pub fn prioritize_urls(urls: &[String]) -> Vec<String> {
    let (mut first, rest): (Vec<_>, Vec<_>) = urls.iter().cloned().partition(|u| is_probable_full_text(u));
    first.extend(rest);
    first
}

pub fn host_of(url: &str) -> String {
    Url::parse(url)
        .ok()
        .and_then(|u| u.host_str().map(str::to_string))
        .unwrap_or_default()
}
