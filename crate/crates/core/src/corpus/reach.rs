//! Ground-truth reachability, computed by a breadth-first walk over raw
//! hrefs. It shares no crawling code with the robot.

use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;
use url::Url;

use crate::records::ArticleRecord;
use crate::robot::{extract_text, match_full_text, normalize_url, query_for, CrawlConfig, Format};

use super::web::{MockDocumentConverter, MockWeb, PageRole};

fn href() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"href="([^"]*)""#).unwrap())
}

/// Absolute hrefs of an HTML page.
pub fn page_hrefs(base: &str, html: &str) -> Vec<String> {
    let Ok(base) = Url::parse(base) else {
        return Vec::new();
    };
    href()
        .captures_iter(html)
        .filter_map(|c| {
            let raw = c[1].replace("&amp;", "&");
            base.join(&raw).ok().map(|u| u.to_string())
        })
        .collect()
}

/// Depth of the shallowest genuine full text of `record` within `max_depth`
/// links of its search results, requiring the matcher to accept it.
pub fn reachable_full_text(web: &MockWeb, record: &ArticleRecord, max_depth: u32) -> Option<(String, u32)> {
    let config = CrawlConfig::default();
    let query = query_for(&record.first_author_surname, &record.title);
    let mut level: Vec<String> = web.index.queries.get(&query).cloned().unwrap_or_default();
    let mut seen = HashSet::new();
    for depth in 0..=max_depth {
        let mut next = Vec::new();
        for raw in &level {
            let Ok(url) = normalize_url(raw) else { continue };
            if !seen.insert(url.clone()) {
                continue;
            }
            let Some(page) = web.pages.get(&url) else { continue };
            if page.role
                == (PageRole::FullText {
                    article: record.id.clone(),
                })
            {
                let accepted = extract_text(&page.bytes, page.format, Some(&MockDocumentConverter))
                    .map(|e| match_full_text(&e.text, record, &config).is_found())
                    .unwrap_or(false);
                if accepted {
                    return Some((url, depth));
                }
            }
            if page.format == Format::Html {
                next.extend(page_hrefs(&url, &String::from_utf8_lossy(&page.bytes)));
            }
        }
        level = next;
    }
    None
}

/// Every URL referenced by the index or by an HTML page that is neither
/// stored nor a designated dead link.
pub fn dangling_links(web: &MockWeb) -> Vec<String> {
    let mut referenced: Vec<String> = web.index.queries.values().flatten().cloned().collect();
    for (url, page) in &web.pages {
        if page.format == Format::Html {
            referenced.extend(page_hrefs(url, &String::from_utf8_lossy(&page.bytes)));
        }
    }
    let mut out: Vec<String> = referenced
        .into_iter()
        .filter(|u| match normalize_url(u) {
            Ok(c) => !web.pages.contains_key(&c) && !web.dead_links.contains(&c),
            Err(_) => true,
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
