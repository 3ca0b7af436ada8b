//! Search providers: the interface, the directory-backed mock, and a
//! template-driven live provider.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fetch::Fetcher;
use super::query::query_for;
use super::text::html_to_text;
use super::urls::Blocklist;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("provider {provider}: {message}")]
    Failed { provider: String, message: String },
    #[error("provider configuration: {0}")]
    Config(String),
}

pub trait SearchProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Ordered result URLs for an author/title request. May be empty.
    fn query(&self, author: &str, title: &str) -> Result<Vec<String>, ProviderError>;

    /// Hosts whose links in this provider's responses are irrelevant.
    fn blocklist(&self) -> &Blocklist;
}

/// `index.json` of a mock web: the query-to-results map plus the provider's blocklist.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockIndex {
    #[serde(default = "default_provider_name")]
    pub provider: String,
    #[serde(default)]
    pub blocked_hosts: Vec<String>,
    pub queries: std::collections::BTreeMap<String, Vec<String>>,
}

fn default_provider_name() -> String {
    "mock".to_string()
}

/// Answers queries from a fixed map keyed by the exact query string.
#[derive(Debug, Clone)]
pub struct MockSearchProvider {
    name: String,
    index: HashMap<String, Vec<String>>,
    blocklist: Blocklist,
    fail: bool,
}

impl MockSearchProvider {
    pub fn new(index: &MockIndex) -> Self {
        MockSearchProvider {
            name: index.provider.clone(),
            index: index.queries.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            blocklist: Blocklist::new(&index.blocked_hosts),
            fail: false,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ProviderError> {
        let body =
            std::fs::read_to_string(path).map_err(|e| ProviderError::Config(format!("{}: {e}", path.display())))?;
        let index: MockIndex =
            serde_json::from_str(&body).map_err(|e| ProviderError::Config(format!("{}: {e}", path.display())))?;
        Ok(MockSearchProvider::new(&index))
    }

    /// A provider whose every query fails, for error-path tests.
    pub fn failing(name: &str) -> Self {
        MockSearchProvider {
            name: name.to_string(),
            index: HashMap::new(),
            blocklist: Blocklist::default(),
            fail: true,
        }
    }
}

impl SearchProvider for MockSearchProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn query(&self, author: &str, title: &str) -> Result<Vec<String>, ProviderError> {
        if self.fail {
            return Err(ProviderError::Failed {
                provider: self.name.clone(),
                message: "unavailable".into(),
            });
        }
        Ok(self.index.get(&query_for(author, title)).cloned().unwrap_or_default())
    }

    fn blocklist(&self) -> &Blocklist {
        &self.blocklist
    }
}

/// Live provider: GETs a URL template and scrapes result anchors from the response.
///
/// `{query}` in the template is replaced by the percent-encoded query.
/// When `result_pattern` is set only hrefs matching it are kept.
pub struct HttpSearchProvider {
    name: String,
    template: String,
    result_pattern: Option<Regex>,
    blocklist: Blocklist,
    fetcher: Arc<dyn Fetcher>,
}

impl HttpSearchProvider {
    pub fn new(
        name: impl Into<String>,
        template: impl Into<String>,
        result_pattern: Option<&str>,
        blocked_hosts: &[String],
        fetcher: Arc<dyn Fetcher>,
    ) -> Result<Self, ProviderError> {
        let template = template.into();
        if !template.contains("{query}") {
            return Err(ProviderError::Config(format!("template `{template}` lacks {{query}}")));
        }
        url::Url::parse(&template.replace("{query}", "q"))
            .map_err(|e| ProviderError::Config(format!("template `{template}`: {e}")))?;
        let result_pattern = result_pattern
            .map(Regex::new)
            .transpose()
            .map_err(|e| ProviderError::Config(e.to_string()))?;
        Ok(HttpSearchProvider {
            name: name.into(),
            template,
            result_pattern,
            blocklist: Blocklist::new(blocked_hosts),
            fetcher,
        })
    }
}

impl SearchProvider for HttpSearchProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn query(&self, author: &str, title: &str) -> Result<Vec<String>, ProviderError> {
        let q: String = url::form_urlencoded::byte_serialize(query_for(author, title).as_bytes()).collect();
        let request = self.template.replace("{query}", &q);
        let failed = |message: String| ProviderError::Failed {
            provider: self.name.clone(),
            message,
        };
        let result = self.fetcher.fetch(&request);
        if !result.status.is_success() {
            return Err(failed(format!("{request}: {:?}", result.status)));
        }
        let body = String::from_utf8_lossy(&result.bytes);
        let base = url::Url::parse(&request).map_err(|e| failed(e.to_string()))?;
        Ok(html_to_text(&body)
            .links
            .into_iter()
            .filter_map(|l| base.join(&l.href).ok())
            .filter(|u| matches!(u.scheme(), "http" | "https"))
            .map(|u| u.to_string())
            .filter(|u| self.result_pattern.as_ref().is_none_or(|re| re.is_match(u)))
            .collect())
    }

    fn blocklist(&self) -> &Blocklist {
        &self.blocklist
    }
}
