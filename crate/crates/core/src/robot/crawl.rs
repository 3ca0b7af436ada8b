use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::records::{ArticleRecord, DetectionEvidence, EvidenceFlag, NotFoundReason, OaStatus};

use super::clock::Clock;
use super::fetch::{FetchLogEntry, FetchResult, Fetcher};
use super::links::candidate_links;
use super::matcher::{match_full_text, tokens, MatchVerdict};
use super::provider::{ProviderError, SearchProvider};
use super::text::{extract_text, Converter, Format};
use super::urls::{dedup_urls, filter_irrelevant_links, prioritize_urls};
use super::CrawlConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("no search provider configured")]
    NoProviders,
    #[error("all search providers failed: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    AllProvidersFailed(Vec<ProviderError>),
}

/// The robot's output for one article.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub evidence: DetectionEvidence,
    /// Every fetch issued for this article, in issue order.
    pub fetch_log: Vec<FetchLogEntry>,
}

impl Detection {
    pub fn status(&self) -> OaStatus {
        self.evidence.verdict
    }
}

struct Found {
    url: String,
    depth: u32,
    head_offset: usize,
    tail_evidence: String,
}

/// Classifies one article as OA or NOA.
///
/// Levels are crawled breadth-first. Within a level URLs are fetched in
/// chunks of `max_in_flight` and evaluated in level order, so the winning
/// full text is always the earliest in (depth, priority, discovery) order.
pub fn detect_oa(
    record: &ArticleRecord,
    providers: &[&dyn SearchProvider],
    fetcher: &dyn Fetcher,
    converter: Option<&dyn Converter>,
    config: &CrawlConfig,
    clock: &dyn Clock,
) -> Result<Detection, DetectError> {
    if providers.is_empty() {
        return Err(DetectError::NoProviders);
    }
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for provider in providers {
        match provider.query(&record.first_author_surname, &record.title) {
            Ok(urls) => results.extend(filter_irrelevant_links(&urls, provider.blocklist())),
            Err(e) => failures.push(e),
        }
    }
    if failures.len() == providers.len() {
        return Err(DetectError::AllProvidersFailed(failures));
    }

    let mut level = prioritize_urls(&dedup_urls(&results));
    let mut visited: HashSet<String> = level.iter().cloned().collect();
    let mut fetch_log = Vec::new();
    let mut found = None;
    let mut deepest = 0;
    let chunk_size = config.max_in_flight.max(1);

    'levels: for depth in 0..=config.max_depth {
        if level.is_empty() {
            break;
        }
        deepest = depth;
        let mut discovered = Vec::new();
        for chunk in level.chunks(chunk_size) {
            let fetched = fetch_chunk(fetcher, chunk);
            fetch_log.extend(chunk.iter().zip(&fetched).map(|(u, r)| FetchLogEntry::new(u, r)));
            for (url, result) in chunk.iter().zip(fetched) {
                if !result.status.is_success() {
                    continue;
                }
                let Ok(extracted) = extract_text(&result.bytes, result.format, converter) else {
                    continue;
                };
                match match_full_text(&extracted.text, record, config) {
                    MatchVerdict::FullTextFound {
                        head_offset,
                        tail_evidence,
                    } => {
                        found = Some(Found {
                            url: url.clone(),
                            depth,
                            head_offset,
                            tail_evidence,
                        });
                        break 'levels;
                    }
                    v if v.title_only() && result.format == Format::Html && depth < config.max_depth => {
                        discovered.extend(candidate_links(
                            &extracted.links,
                            url,
                            record,
                            config.max_links_followed_per_page,
                        ));
                    }
                    _ => {}
                }
            }
        }
        let fresh: Vec<String> = discovered.into_iter().filter(|u| visited.insert(u.clone())).collect();
        level = prioritize_urls(&fresh);
    }

    let mut flags = Vec::new();
    if tokens(&record.title).len() < 3 {
        flags.push(EvidenceFlag::LowConfidence);
    }
    let timestamp = clock.now_millis();
    let evidence = match found {
        Some(f) => DetectionEvidence {
            article_id: record.id.clone(),
            verdict: OaStatus::Oa,
            url: Some(f.url),
            match_head_offset: Some(f.head_offset),
            match_tail_marker: Some(f.tail_evidence),
            depth: f.depth,
            timestamp,
            reason: None,
            flags,
            error: None,
        },
        None => DetectionEvidence {
            article_id: record.id.clone(),
            verdict: OaStatus::Noa,
            url: None,
            match_head_offset: None,
            match_tail_marker: None,
            depth: deepest,
            timestamp,
            reason: Some(NotFoundReason::Exhausted),
            flags,
            error: None,
        },
    };
    Ok(Detection { evidence, fetch_log })
}

fn fetch_chunk(fetcher: &dyn Fetcher, chunk: &[String]) -> Vec<FetchResult> {
    if chunk.len() == 1 {
        return vec![fetcher.fetch(&chunk[0])];
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = chunk.iter().map(|u| s.spawn(move || fetcher.fetch(u))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fetcher panicked"))
            .collect()
    })
}

/// Owns everything a crawl needs; shareable across worker threads.
#[derive(Clone)]
pub struct Robot {
    providers: Vec<Arc<dyn SearchProvider>>,
    fetcher: Arc<dyn Fetcher>,
    converter: Option<Arc<dyn Converter>>,
    config: CrawlConfig,
    clock: Arc<dyn Clock>,
}

impl Robot {
    pub fn new(
        providers: Vec<Arc<dyn SearchProvider>>,
        fetcher: Arc<dyn Fetcher>,
        config: CrawlConfig,
        clock: Arc<dyn Clock>,
    ) -> Self {
        Robot {
            providers,
            fetcher,
            converter: None,
            config,
            clock,
        }
    }

    pub fn with_converter(mut self, converter: Arc<dyn Converter>) -> Self {
        self.converter = Some(converter);
        self
    }

    pub fn config(&self) -> &CrawlConfig {
        &self.config
    }

    pub fn detect(&self, record: &ArticleRecord) -> Result<Detection, DetectError> {
        let providers: Vec<&dyn SearchProvider> = self.providers.iter().map(|p| p.as_ref()).collect();
        detect_oa(
            record,
            &providers,
            self.fetcher.as_ref(),
            self.converter.as_deref(),
            &self.config,
            self.clock.as_ref(),
        )
    }

    /// Like [`Robot::detect`], but a failed search yields an UNKNOWN verdict
    /// carrying the error text.
    pub fn detect_or_unknown(&self, record: &ArticleRecord) -> Detection {
        self.detect(record).unwrap_or_else(|e| Detection {
            evidence: DetectionEvidence {
                article_id: record.id.clone(),
                verdict: OaStatus::Unknown,
                url: None,
                match_head_offset: None,
                match_tail_marker: None,
                depth: 0,
                timestamp: self.clock.now_millis(),
                reason: None,
                flags: Vec::new(),
                error: Some(e.to_string()),
            },
            fetch_log: Vec::new(),
        })
    }
}
