//! Fetching: the fetcher interface, per-host rate limiting, robots exclusion
//! and the live HTTP fetcher.

use std::collections::HashMap;
use std::io::Read;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::clock::Clock;
use super::text::Format;
use super::urls::host_of;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FetchStatus {
    /// An HTTP (or HTTP-like) status code.
    Http {
        code: u16,
    },
    NotFound,
    Timeout,
    Disallowed,
    Failed {
        message: String,
    },
}

impl FetchStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, FetchStatus::Http { code } if (200..300).contains(code))
    }

    pub fn code(&self) -> Option<u16> {
        match self {
            FetchStatus::Http { code } => Some(*code),
            FetchStatus::NotFound => Some(404),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchResult {
    pub status: FetchStatus,
    pub format: Format,
    pub bytes: Vec<u8>,
    /// When the request was issued, in clock milliseconds.
    pub timestamp_ms: u64,
}

impl FetchResult {
    pub fn failure(status: FetchStatus, timestamp_ms: u64) -> Self {
        FetchResult {
            status,
            format: Format::Unknown,
            bytes: Vec::new(),
            timestamp_ms,
        }
    }
}

/// Retrieves one URL. Errors are reported through [`FetchStatus`], never by panicking,
/// and implementations must return within their configured timeout.
pub trait Fetcher: Send + Sync {
    fn fetch(&self, url: &str) -> FetchResult;
}

impl<F: Fetcher + ?Sized> Fetcher for Arc<F> {
    fn fetch(&self, url: &str) -> FetchResult {
        (**self).fetch(url)
    }
}

impl<F: Fetcher + ?Sized> Fetcher for Box<F> {
    fn fetch(&self, url: &str) -> FetchResult {
        (**self).fetch(url)
    }
}

/// One line of the fetch log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchLogEntry {
    pub timestamp: u64,
    pub url: String,
    pub status: String,
    pub host: String,
}

impl FetchLogEntry {
    pub fn new(url: &str, result: &FetchResult) -> Self {
        let status = match &result.status {
            FetchStatus::Http { code } => code.to_string(),
            FetchStatus::NotFound => "404".to_string(),
            FetchStatus::Timeout => "timeout".to_string(),
            FetchStatus::Disallowed => "disallowed".to_string(),
            FetchStatus::Failed { .. } => "error".to_string(),
        };
        FetchLogEntry {
            timestamp: result.timestamp_ms,
            url: url.to_string(),
            status,
            host: host_of(url),
        }
    }
}

/// Spaces requests to each host at least `1 / rate` seconds apart, so that any
/// half-open one-second window holds at most `rate` requests per host.
pub struct RateLimiter {
    interval: Duration,
    clock: Arc<dyn Clock>,
    next_slot: Mutex<HashMap<String, Duration>>,
}

impl RateLimiter {
    /// `per_host_rate` is in requests per second and must be positive.
    pub fn new(per_host_rate: f64, clock: Arc<dyn Clock>) -> Self {
        assert!(per_host_rate > 0.0, "rate must be positive");
        RateLimiter {
            interval: Duration::from_secs_f64(1.0 / per_host_rate),
            clock,
            next_slot: Mutex::new(HashMap::new()),
        }
    }

    /// Waits for the host's next slot and returns the slot time.
    pub fn acquire(&self, host: &str) -> Duration {
        let slot = {
            let mut slots = self.next_slot.lock().expect("rate limiter poisoned");
            let now = self.clock.now();
            let slot = slots.get(host).copied().map_or(now, |s| s.max(now));
            slots.insert(host.to_string(), slot + self.interval);
            slot
        };
        self.clock.sleep_until(slot);
        slot
    }
}

/// Applies a shared [`RateLimiter`] in front of another fetcher and stamps
/// results with the slot time.
pub struct RateLimitedFetcher<F> {
    inner: F,
    limiter: Arc<RateLimiter>,
}

impl<F: Fetcher> RateLimitedFetcher<F> {
    pub fn new(inner: F, limiter: Arc<RateLimiter>) -> Self {
        RateLimitedFetcher { inner, limiter }
    }
}

impl<F: Fetcher> Fetcher for RateLimitedFetcher<F> {
    fn fetch(&self, url: &str) -> FetchResult {
        let slot = self.limiter.acquire(&host_of(url));
        let mut result = self.inner.fetch(url);
        result.timestamp_ms = slot.as_millis() as u64;
        result
    }
}

/// Parsed robots.txt rules applying to one user agent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RobotsRules {
    rules: Vec<(bool, String)>,
}

impl RobotsRules {
    /// Keeps the most specific group naming `agent`, else the `*` group.
    pub fn parse(body: &str, agent: &str) -> Self {
        let agent = agent.to_ascii_lowercase();
        let mut specific: Option<Vec<(bool, String)>> = None;
        let mut wildcard: Option<Vec<(bool, String)>> = None;
        let mut group_agents: Vec<String> = Vec::new();
        let mut group_rules: Vec<(bool, String)> = Vec::new();
        let mut in_rules = false;

        let mut flush = |agents: &mut Vec<String>, rules: &mut Vec<(bool, String)>| {
            for a in agents.iter() {
                if a == "*" {
                    wildcard.get_or_insert_with(Vec::new).extend(rules.iter().cloned());
                } else if agent.contains(a.as_str()) {
                    specific.get_or_insert_with(Vec::new).extend(rules.iter().cloned());
                }
            }
            agents.clear();
            rules.clear();
        };

        for line in body.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            let Some((key, value)) = line.split_once(':') else {
                continue;
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            match key.as_str() {
                "user-agent" => {
                    if in_rules {
                        flush(&mut group_agents, &mut group_rules);
                        in_rules = false;
                    }
                    group_agents.push(value.to_ascii_lowercase());
                }
                "allow" | "disallow" => {
                    in_rules = true;
                    if !value.is_empty() {
                        group_rules.push((key == "allow", value.to_string()));
                    }
                }
                _ => {}
            }
        }
        flush(&mut group_agents, &mut group_rules);
        RobotsRules {
            rules: specific.or(wildcard).unwrap_or_default(),
        }
    }

    /// Longest matching rule wins; allow wins ties; no match means allowed.
    pub fn allows(&self, path: &str) -> bool {
        self.rules
            .iter()
            .filter(|(_, pattern)| robots_match(pattern, path))
            .max_by_key(|(allow, pattern)| (pattern.len(), *allow))
            .is_none_or(|(allow, _)| *allow)
    }
}

fn robots_match(pattern: &str, path: &str) -> bool {
    let (pattern, anchored) = match pattern.strip_suffix('$') {
        Some(p) => (p, true),
        None => (pattern, false),
    };
    let parts: Vec<&str> = pattern.split('*').collect();
    let mut pos = 0;
    for (i, part) in parts.iter().enumerate() {
        if i == 0 {
            if !path.starts_with(part) {
                return false;
            }
            pos = part.len();
        } else if let Some(found) = path[pos..].find(part) {
            pos += found + part.len();
        } else {
            return false;
        }
    }
    if anchored {
        let last = parts.last().copied().unwrap_or("");
        return pos == path.len() || (parts.len() > 1 && path.ends_with(last));
    }
    true
}

#[derive(Debug, Clone)]
pub struct HttpFetcherConfig {
    pub user_agent: String,
    pub timeout: Duration,
    pub respect_robots: bool,
    pub max_bytes: usize,
}

impl Default for HttpFetcherConfig {
    fn default() -> Self {
        HttpFetcherConfig {
            user_agent: concat!("oatrawl/", env!("CARGO_PKG_VERSION")).to_string(),
            timeout: Duration::from_secs(30),
            respect_robots: true,
            max_bytes: 32 * 1024 * 1024,
        }
    }
}

/// Live fetcher over HTTP(S) with robots.txt compliance.
///
/// Wrap it in a [`RateLimitedFetcher`] for per-host politeness.
pub struct HttpFetcher {
    client: reqwest::blocking::Client,
    config: HttpFetcherConfig,
    clock: Arc<dyn Clock>,
    robots: Mutex<HashMap<String, Arc<RobotsRules>>>,
}

impl HttpFetcher {
    pub fn new(config: HttpFetcherConfig, clock: Arc<dyn Clock>) -> Result<Self, reqwest::Error> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(config.user_agent.clone())
            .timeout(config.timeout)
            .build()?;
        Ok(HttpFetcher {
            client,
            config,
            clock,
            robots: Mutex::new(HashMap::new()),
        })
    }

    fn robots_for(&self, url: &url::Url) -> Arc<RobotsRules> {
        let origin = url.origin().ascii_serialization();
        if let Some(rules) = self.robots.lock().expect("robots cache poisoned").get(&origin) {
            return rules.clone();
        }
        let rules = self
            .client
            .get(format!("{origin}/robots.txt"))
            .send()
            .ok()
            .filter(|r| r.status().is_success())
            .and_then(|r| r.text().ok())
            .map(|body| RobotsRules::parse(&body, &self.config.user_agent))
            .unwrap_or_default();
        let rules = Arc::new(rules);
        self.robots
            .lock()
            .expect("robots cache poisoned")
            .insert(origin, rules.clone());
        rules
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &str) -> FetchResult {
        let started = self.clock.now_millis();
        let parsed = match url::Url::parse(url) {
            Ok(u) => u,
            Err(e) => return FetchResult::failure(FetchStatus::Failed { message: e.to_string() }, started),
        };
        if self.config.respect_robots && !self.robots_for(&parsed).allows(parsed.path()) {
            return FetchResult::failure(FetchStatus::Disallowed, started);
        }
        let response = match self.client.get(url).send() {
            Ok(r) => r,
            Err(e) if e.is_timeout() => return FetchResult::failure(FetchStatus::Timeout, started),
            Err(e) => return FetchResult::failure(FetchStatus::Failed { message: e.to_string() }, started),
        };
        let code = response.status().as_u16();
        let format = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .map(Format::from_content_type)
            .filter(|f| *f != Format::Unknown)
            .unwrap_or_else(|| Format::from_extension(parsed.path()));
        let mut bytes = Vec::new();
        let read = response.take(self.config.max_bytes as u64).read_to_end(&mut bytes);
        match read {
            Ok(_) => FetchResult {
                status: FetchStatus::Http { code },
                format,
                bytes,
                timestamp_ms: started,
            },
            Err(e) => FetchResult::failure(FetchStatus::Failed { message: e.to_string() }, started),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robot::clock::ManualClock;

    struct Echo;

    impl Fetcher for Echo {
        fn fetch(&self, _url: &str) -> FetchResult {
            FetchResult {
                status: FetchStatus::Http { code: 200 },
                format: Format::Text,
                bytes: Vec::new(),
                timestamp_ms: 0,
            }
        }
    }

    #[test]
    fn limiter_spaces_same_host() {
        let clock = Arc::new(ManualClock::new());
        let limiter = Arc::new(RateLimiter::new(4.0, clock.clone()));
        let f = RateLimitedFetcher::new(Echo, limiter);
        let stamps: Vec<u64> = (0..6).map(|_| f.fetch("http://a.example/x").timestamp_ms).collect();
        assert_eq!(stamps, vec![0, 250, 500, 750, 1000, 1250]);
        // another host is not delayed by the first
        assert_eq!(f.fetch("http://b.example/").timestamp_ms, clock.now_millis());
    }

    #[test]
    fn robots_rules() {
        let body = "User-agent: *\nDisallow: /private\nAllow: /private/open\n\nUser-agent: otherbot\nDisallow: /\n";
        let r = RobotsRules::parse(body, "oatrawl/0.1");
        assert!(r.allows("/public"));
        assert!(!r.allows("/private/x"));
        assert!(r.allows("/private/open/x"));
        let other = RobotsRules::parse(body, "OtherBot/2");
        assert!(!other.allows("/anything"));
        let wild = RobotsRules::parse("User-agent: *\nDisallow: /*.pdf$\n", "x");
        assert!(!wild.allows("/a/b.pdf"));
        assert!(wild.allows("/a/b.pdf.html"));
        assert!(RobotsRules::parse("", "x").allows("/"));
    }
}
