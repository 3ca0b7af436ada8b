//! The detection robot: query, search fan-out, link filtering, URL
//! deduplication, format-first fetching, text extraction, full-text matching
//! and depth-limited link following.

pub mod clock;
mod crawl;
pub mod fetch;
mod links;
pub mod matcher;
pub mod provider;
mod query;
pub mod text;
pub mod urls;

use std::time::Duration;

pub use clock::{Clock, ManualClock, SystemClock};
pub use crawl::{detect_oa, DetectError, Detection, Robot};
pub use fetch::{
    FetchLogEntry, FetchResult, FetchStatus, Fetcher, HttpFetcher, HttpFetcherConfig, RateLimitedFetcher, RateLimiter,
    RobotsRules,
};
pub use links::{candidate_links, extract_candidate_links, significant_title_tokens, FULL_TEXT_PHRASES};
pub use matcher::{match_full_text, normalize, normalize_str, tokens, MatchVerdict, NormalizedText};
pub use provider::{HttpSearchProvider, MockIndex, MockSearchProvider, ProviderError, SearchProvider};
pub use query::{build_query, query_for};
pub use text::{extract_text, html_to_text, CommandConverter, Converter, ExtractError, Extracted, Format, Link};
pub use urls::{
    dedup_urls, filter_irrelevant_links, host_of, is_probable_full_text, normalize_url, prioritize_urls, Blocklist,
    UrlError,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CrawlConfig {
    pub max_depth: u32,
    /// Requests per second per host; applied by [`RateLimitedFetcher`].
    pub per_host_rate: f64,
    pub max_in_flight: usize,
    pub fetch_timeout: Duration,
    pub max_links_followed_per_page: usize,
    pub title_similarity_threshold: f64,
    pub head_fraction: f64,
    pub tail_fraction: f64,
}

impl Default for CrawlConfig {
    fn default() -> Self {
        CrawlConfig {
            max_depth: 3,
            per_host_rate: 1.0,
            max_in_flight: 4,
            fetch_timeout: Duration::from_secs(30),
            max_links_followed_per_page: 20,
            title_similarity_threshold: 0.90,
            head_fraction: 0.20,
            tail_fraction: 0.20,
        }
    }
}

impl CrawlConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("head_fraction", self.head_fraction),
            ("tail_fraction", self.tail_fraction),
        ] {
            if !(v > 0.0 && v <= 0.5) {
                return Err(format!("{name} must be in (0, 0.5], got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.title_similarity_threshold) {
            return Err(format!(
                "title_similarity_threshold must be in [0, 1], got {}",
                self.title_similarity_threshold
            ));
        }
        if self.per_host_rate.is_nan() || self.per_host_rate <= 0.0 {
            return Err(format!("per_host_rate must be positive, got {}", self.per_host_rate));
        }
        if self.max_in_flight == 0 {
            return Err("max_in_flight must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(CrawlConfig::default().validate().is_ok());
        let bad = CrawlConfig {
            head_fraction: 0.6,
            ..CrawlConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = CrawlConfig {
            tail_fraction: 0.0,
            ..CrawlConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
