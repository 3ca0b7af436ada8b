use std::collections::HashSet;

use url::Url;

use crate::records::ArticleRecord;

use super::matcher::{normalize_str, tokens};
use super::text::{html_to_text, Link};
use super::urls::{is_probable_full_text, normalize_url};

/// Anchor phrases that point at a full text regardless of the title.
pub const FULL_TEXT_PHRASES: [&str; 4] = ["full text", "pdf", "download", "postscript"];

const STOPWORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "by", "for", "from", "in", "into", "is", "of", "on", "or", "the", "to", "with",
];

/// Title tokens that count toward the two-token link rule.
pub fn significant_title_tokens(title: &str) -> HashSet<String> {
    tokens(title)
        .into_iter()
        .filter(|t| t.chars().count() >= 3 && !STOPWORDS.contains(&t.as_str()))
        .collect()
}

/// Resolved candidate links of an HTML page, in document order, capped at `cap`.
pub fn extract_candidate_links(html: &str, base: &str, record: &ArticleRecord, cap: usize) -> Vec<String> {
    candidate_links(&html_to_text(html).links, base, record, cap)
}

pub fn candidate_links(links: &[Link], base: &str, record: &ArticleRecord, cap: usize) -> Vec<String> {
    let Ok(base) = Url::parse(base) else {
        return Vec::new();
    };
    let title_tokens = significant_title_tokens(&record.title);
    let mut seen = HashSet::new();
    links
        .iter()
        .filter_map(|link| {
            let url = base.join(&link.href).ok()?;
            if !matches!(url.scheme(), "http" | "https") {
                return None;
            }
            let canonical = normalize_url(url.as_str()).ok()?;
            is_candidate(link, &canonical, &title_tokens).then_some(canonical)
        })
        .filter(|u| seen.insert(u.clone()))
        .take(cap)
        .collect()
}

fn is_candidate(link: &Link, url: &str, title_tokens: &HashSet<String>) -> bool {
    if is_probable_full_text(url) {
        return true;
    }
    let anchor = normalize_str(&link.text);
    let padded = format!(" {anchor} ");
    if FULL_TEXT_PHRASES.iter().any(|p| padded.contains(&format!(" {p} "))) {
        return true;
    }
    let mut seen: HashSet<String> = anchor.split(' ').map(str::to_string).collect();
    if let Ok(u) = Url::parse(url) {
        seen.extend(tokens(&format!("{} {}", u.path(), u.query().unwrap_or(""))));
    }
    title_tokens.iter().filter(|t| seen.contains(*t)).count() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::{IssueKey, OaStatus};

    fn record(title: &str) -> ArticleRecord {
        ArticleRecord {
            id: "a".into(),
            first_author_surname: "Smith".into(),
            title: title.into(),
            journal_id: "J".into(),
            issue_key: IssueKey::new("J", 2000, "1").unwrap(),
            year: 2000,
            discipline: "Law".into(),
            country: "UK".into(),
            citation_count: 0,
            oa_status: OaStatus::Unknown,
        }
    }

    #[test]
    fn full_text_anchor() {
        let html = r#"<p><a href="/files/paper">Full Text (PDF)</a></p>"#;
        assert_eq!(
            extract_candidate_links(html, "http://site.example/abs/1", &record("Unrelated words here"), 20),
            vec!["http://site.example/files/paper".to_string()]
        );
    }

    #[test]
    fn cap_keeps_document_order() {
        let html: String = (0..100).map(|i| format!(r#"<a href="/p{i}.pdf">x</a>"#)).collect();
        let got = extract_candidate_links(&html, "http://s.example/", &record("T t t"), 20);
        let expect: Vec<String> = (0..20).map(|i| format!("http://s.example/p{i}.pdf")).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn navigation_only_page() {
        let html = r#"<nav><a href="/">Home</a> <a href="/login">Login</a> <a href="/about">About us</a></nav>"#;
        let got = extract_candidate_links(html, "http://s.example/", &record("Citation impact of open access"), 20);
        assert!(got.is_empty());
    }

    #[test]
    fn title_tokens_in_anchor_or_url() {
        let rec = record("Citation impact of open access");
        let html = r#"<a href="/a">Open access and its citation impact</a>
                      <a href="/papers/citation-impact">more</a>
                      <a href="/b">Open letter</a>
                      <a href="mailto:x@y.z">full text</a>"#;
        let got = extract_candidate_links(html, "http://s.example/", &rec, 20);
        assert_eq!(
            got,
            vec![
                "http://s.example/a".to_string(),
                "http://s.example/papers/citation-impact".to_string()
            ]
        );
    }
}
