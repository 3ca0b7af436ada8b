//! Run configuration: a flat `key = value` file, overridden by flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use oatrawl::metrics::Weighting;
use oatrawl::robot::CrawlConfig;

/// Every key accepted in a config file or through `--set`.
pub const KEYS: &[&str] = &[
    "records",
    "detections",
    "truth",
    "out",
    "seed",
    "allow_unknown",
    "mock_web",
    "search_template",
    "result_pattern",
    "blocked_hosts",
    "user_agent",
    "respect_robots",
    "max_depth",
    "per_host_rate",
    "max_in_flight",
    "fetch_timeout_secs",
    "max_links_followed_per_page",
    "title_similarity_threshold",
    "head_fraction",
    "tail_fraction",
    "weighting",
    "sample_size",
    "threads",
    "fresh",
    "spec",
    "corpus",
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub records: Option<PathBuf>,
    pub detections: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub allow_unknown: bool,
    pub mock_web: Option<PathBuf>,
    pub search_template: Option<String>,
    pub result_pattern: Option<String>,
    pub blocked_hosts: Vec<String>,
    pub user_agent: Option<String>,
    pub respect_robots: bool,
    pub crawl: CrawlConfig,
    pub weighting: Weighting,
    pub sample_size: usize,
    pub threads: Option<usize>,
    /// Ignore an existing detection journal.
    pub fresh: bool,
    pub spec: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            records: None,
            detections: None,
            truth: None,
            out: PathBuf::from("out"),
            seed: None,
            allow_unknown: false,
            mock_web: None,
            search_template: None,
            result_pattern: None,
            blocked_hosts: Vec::new(),
            user_agent: None,
            respect_robots: true,
            crawl: CrawlConfig::default(),
            weighting: Weighting::Unweighted,
            sample_size: 100,
            threads: None,
            fresh: false,
            spec: None,
            corpus: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("invalid value `{value}` for `{key}`: {e}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("invalid value `{value}` for `{key}`: expected true or false")),
    }
}

impl RunConfig {
    /// Sets one key. Relative paths are resolved against `base` when given.
    pub fn apply(&mut self, key: &str, value: &str, base: Option<&Path>) -> Result<(), String> {
        let value = value.trim();
        let path = || {
            let p = PathBuf::from(value);
            match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        };
        let text = || (!value.is_empty()).then(|| value.to_string());
        match key {
            "records" => self.records = Some(path()),
            "detections" => self.detections = Some(path()),
            "truth" => self.truth = Some(path()),
            "out" => self.out = path(),
            "seed" => self.seed = Some(parse(key, value)?),
            "allow_unknown" => self.allow_unknown = parse_bool(key, value)?,
            "mock_web" => self.mock_web = Some(path()),
            "search_template" => self.search_template = text(),
            "result_pattern" => self.result_pattern = text(),
            "blocked_hosts" => {
                self.blocked_hosts = value
                    .split(',')
                    .map(str::trim)
                    .filter(|h| !h.is_empty())
                    .map(str::to_string)
                    .collect()
            }
            "user_agent" => self.user_agent = text(),
            "respect_robots" => self.respect_robots = parse_bool(key, value)?,
            "max_depth" => self.crawl.max_depth = parse(key, value)?,
            "per_host_rate" => self.crawl.per_host_rate = parse(key, value)?,
            "max_in_flight" => self.crawl.max_in_flight = parse(key, value)?,
            "fetch_timeout_secs" => {
                let secs: f64 = parse(key, value)?;
                self.crawl.fetch_timeout = Duration::try_from_secs_f64(secs)
                    .map_err(|e| format!("invalid value `{value}` for `{key}`: {e}"))?;
            }
            "max_links_followed_per_page" => self.crawl.max_links_followed_per_page = parse(key, value)?,
            "title_similarity_threshold" => self.crawl.title_similarity_threshold = parse(key, value)?,
            "head_fraction" => self.crawl.head_fraction = parse(key, value)?,
            "tail_fraction" => self.crawl.tail_fraction = parse(key, value)?,
            "weighting" => self.weighting = parse(key, value)?,
            "sample_size" => self.sample_size = parse(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            "fresh" => self.fresh = parse_bool(key, value)?,
            "spec" => self.spec = Some(path()),
            "corpus" => self.corpus = Some(path()),
            _ => return Err(format!("unknown configuration key `{key}`")),
        }
        debug_assert!(KEYS.contains(&key));
        Ok(())
    }

    /// Applies a config file: one `key = value` per line, `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let body = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf);
        for (i, raw) in body.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected `key = value`", path.display(), i + 1))?;
            self.apply(key.trim(), value, base.as_deref())
                .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        self.crawl.validate()?;
        if self.threads == Some(0) {
            return Err("threads must be at least 1".into());
        }
        Ok(())
    }
}

/// Splits a `KEY=VALUE` override.
pub fn split_override(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))
}
