use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::records::{ArticleRecord, IssueKey, OaStatus};
use crate::robot::{query_for, Format, MockIndex};

use super::docs::{self, Paper};
use super::rng::CorpusRng;
use super::spec::CorpusSpec;
use super::web::{encode_document, MockWeb, PageRole, MOCK_DOMAIN};
use super::CorpusError;

/// Link depth the robot explores; full texts deeper than this are unreachable.
pub const REACHABLE_DEPTH: u32 = 3;

/// Host of the search engine's own advertising links, blocklisted in the index.
pub const AD_HOST: &str = "ads.search.mock.example";

const N_HOSTS: u64 = 8;

/// How an article is represented on the mock web.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    /// A full text `depth` links away from the search results.
    FullText { depth: u32, format: FullTextFormat },
    /// An abstract page with no route to a full text.
    AbstractOnly,
    /// No page of its own, but another paper's full text quotes it up front.
    Impostor,
    /// Nothing about the article on the web.
    Absent,
}

impl Scenario {
    pub fn is_oa(&self) -> bool {
        matches!(self, Scenario::FullText { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FullTextFormat {
    Pdf,
    Ps,
    Html,
    Text,
}

impl FullTextFormat {
    pub const ALL: [FullTextFormat; 4] = [
        FullTextFormat::Pdf,
        FullTextFormat::Ps,
        FullTextFormat::Html,
        FullTextFormat::Text,
    ];

    pub fn format(self) -> Format {
        match self {
            FullTextFormat::Pdf => Format::Pdf,
            FullTextFormat::Ps => Format::Ps,
            FullTextFormat::Html => Format::Html,
            FullTextFormat::Text => Format::Text,
        }
    }

    fn extension(self) -> &'static str {
        match self {
            FullTextFormat::Pdf => "pdf",
            FullTextFormat::Ps => "ps",
            FullTextFormat::Html => "html",
            FullTextFormat::Text => "txt",
        }
    }
}

/// The generator's labels for one article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub article_id: String,
    /// What a human checker would conclude: a full text exists somewhere.
    pub true_status: OaStatus,
    /// Whether that full text lies within the robot's depth limit.
    pub reachable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_text_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_text_depth: Option<u32>,
    pub scenario: Scenario,
}

impl GroundTruth {
    /// The label the robot should produce given its depth limit.
    pub fn reachable_status(&self) -> OaStatus {
        if self.reachable {
            OaStatus::Oa
        } else {
            OaStatus::Noa
        }
    }
}

/// A generated corpus: records (status UNKNOWN), labels and the mock web.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub records: Vec<ArticleRecord>,
    pub truth: Vec<GroundTruth>,
    pub web: MockWeb,
}

impl Corpus {
    /// Records with `oa_status` set from the true labels.
    pub fn labeled_records(&self) -> Vec<ArticleRecord> {
        self.records
            .iter()
            .zip(&self.truth)
            .map(|(r, t)| ArticleRecord {
                oa_status: t.true_status,
                ..r.clone()
            })
            .collect()
    }
}

/// Generates a corpus whose scenarios are drawn from the spec.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus, CorpusError> {
    spec.validate().map_err(CorpusError::Spec)?;
    Generator::new(spec).run(spec.n_articles, None)
}

/// Generates one article per entry of `scenarios`, in order. The spec
/// supplies everything except the article count and the OA/decoy draws.
pub fn generate_with_scenarios(spec: &CorpusSpec, scenarios: &[Scenario]) -> Result<Corpus, CorpusError> {
    let spec = CorpusSpec {
        n_articles: scenarios.len().max(1),
        ..spec.clone()
    };
    spec.validate().map_err(CorpusError::Spec)?;
    if scenarios.is_empty() {
        return Ok(Corpus {
            records: Vec::new(),
            truth: Vec::new(),
            web: MockWeb {
                index: index_skeleton(),
                ..MockWeb::default()
            },
        });
    }
    Generator::new(&spec).run(scenarios.len(), Some(scenarios))
}

fn index_skeleton() -> MockIndex {
    MockIndex {
        provider: "mock".into(),
        blocked_hosts: vec![AD_HOST.to_string()],
        queries: Default::default(),
    }
}

fn host(kind: &str, k: u64) -> String {
    format!("{kind}{k}.{MOCK_DOMAIN}")
}

fn slug(s: &str) -> String {
    s.split_whitespace()
        .map(|w| {
            w.chars()
                .filter(|c| c.is_ascii_alphanumeric())
                .collect::<String>()
                .to_ascii_uppercase()
        })
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

struct Generator<'a> {
    spec: &'a CorpusSpec,
    rng: CorpusRng,
    web: MockWeb,
    queries: HashSet<String>,
}

impl<'a> Generator<'a> {
    fn new(spec: &'a CorpusSpec) -> Self {
        Generator {
            spec,
            rng: CorpusRng::new(spec.seed),
            web: MockWeb {
                index: index_skeleton(),
                ..MockWeb::default()
            },
            queries: HashSet::new(),
        }
    }

    fn run(mut self, n: usize, scenarios: Option<&[Scenario]>) -> Result<Corpus, CorpusError> {
        let mut records = Vec::with_capacity(n);
        let mut truth = Vec::with_capacity(n);
        for i in 0..n {
            let (record, gt) = self.article(i, scenarios.map(|s| s[i]))?;
            records.push(record);
            truth.push(gt);
        }
        for kind in ["pub", "repo", "uni"] {
            for k in 0..N_HOSTS {
                let h = host(kind, k);
                let home = docs::site_page(&h, "Welcome");
                let contact = docs::site_page(&h, "Contact");
                self.web
                    .insert(&format!("http://{h}/"), Format::Html, home.into_bytes(), PageRole::Site);
                self.web.insert(
                    &format!("http://{h}/contact.html"),
                    Format::Html,
                    contact.into_bytes(),
                    PageRole::Site,
                );
            }
        }
        Ok(Corpus {
            records,
            truth,
            web: self.web,
        })
    }

    fn article(&mut self, i: usize, planned: Option<Scenario>) -> Result<(ArticleRecord, GroundTruth), CorpusError> {
        let spec = self.spec;
        let rng = &mut self.rng;
        let id = format!("A{:06}", i + 1);
        let discipline = rng.pick(&spec.disciplines).clone();
        let journal_index = rng.below(spec.journals_per_discipline as u64) as usize;
        let year = spec.years.first + rng.below(spec.years.len() as u64) as i32;
        let issue = 1 + rng.below(spec.issues_per_year as u64);
        let country = rng.pick(&spec.countries).clone();
        let (surname, initial, title) = loop {
            let surname = docs::surname(rng);
            let initial = docs::initial(rng);
            let title = docs::title(rng);
            if self.queries.insert(query_for(&surname, &title)) {
                break (surname, initial, title);
            }
        };
        let journal_id = format!("{}-J{}", slug(&discipline), journal_index + 1);
        let issue_key = IssueKey::new(&journal_id, year, &issue.to_string()).map_err(CorpusError::Invalid)?;

        let p_oa = spec.oa_probability.at(&discipline, year, spec.years);
        let scenario = match planned {
            Some(s) => s,
            None => {
                if rng.bernoulli(p_oa) {
                    let depth = rng.weighted(&spec.decoys.chain_depth_distribution) as u32;
                    let format = FullTextFormat::ALL[rng.weighted(&spec.format_weights)];
                    Scenario::FullText { depth, format }
                } else {
                    let u = rng.unit();
                    if u < spec.decoys.abstract_page_prob {
                        Scenario::AbstractOnly
                    } else if u < spec.decoys.abstract_page_prob + spec.decoys.impostor_prob {
                        Scenario::Impostor
                    } else {
                        Scenario::Absent
                    }
                }
            }
        };
        let citation_count = self.citations(scenario.is_oa()) as i64;

        let record = ArticleRecord {
            id: id.clone(),
            first_author_surname: surname.clone(),
            title: title.clone(),
            journal_id,
            issue_key,
            year,
            discipline: discipline.clone(),
            country,
            citation_count,
            oa_status: OaStatus::Unknown,
        };
        let byline = format!("{initial}. {surname}");
        let venue = format!("{}, {year}", docs::journal_name(&discipline, journal_index));
        let gt = self.pages(&record, scenario, &byline, &venue);
        Ok((record, gt))
    }

    /// Zero with probability `uncited_mass`, else geometric. For OA articles
    /// the overall mean is multiplied by `oa_citation_multiplier`.
    fn citations(&mut self, oa: bool) -> u64 {
        let model = &self.spec.citation_model;
        let k = if oa { self.spec.oa_citation_multiplier } else { 1.0 };
        let (p_cited, mean_cited) = if k == 1.0 {
            (1.0 - model.uncited_mass, model.mean_cited)
        } else if k * model.mean_cited >= 1.0 {
            (1.0 - model.uncited_mass, k * model.mean_cited)
        } else {
            // A cited article has at least one citation, so shrink the cited share instead.
            ((1.0 - model.uncited_mass) * model.mean_cited * k, 1.0)
        };
        if self.rng.bernoulli(p_cited) {
            self.rng.geometric(mean_cited)
        } else {
            0
        }
    }

    fn pages(&mut self, record: &ArticleRecord, scenario: Scenario, byline: &str, venue: &str) -> GroundTruth {
        let id = record.id.as_str();
        let rng = &mut self.rng;
        let mut results: Vec<String> = vec![format!("http://{AD_HOST}/click?ref={id}")];
        self.web.add_dead_link(&results[0]);
        if rng.bernoulli(self.spec.decoys.dead_link_prob) {
            let dead = format!("http://{}/archive/{id}.pdf", host("gone", rng.below(N_HOSTS)));
            self.web.add_dead_link(&dead);
            results.push(dead);
        }
        let site = format!("{} online", venue.split(',').next().unwrap_or(venue));
        let mut truth = GroundTruth {
            article_id: id.to_string(),
            true_status: if scenario.is_oa() { OaStatus::Oa } else { OaStatus::Noa },
            reachable: false,
            full_text_url: None,
            full_text_depth: None,
            scenario,
        };

        match scenario {
            Scenario::FullText { depth, format } => {
                let repo = host("repo", rng.below(N_HOSTS));
                let ft_url = format!("http://{repo}/papers/{id}/paper.{}", format.extension());
                let paper = Paper::generate(rng, &record.title, byline, venue, None);
                let bytes = match format {
                    FullTextFormat::Html => paper.to_html().into_bytes(),
                    other => encode_document(&paper.to_text(), other.format()),
                };
                self.web.insert(
                    &ft_url,
                    format.format(),
                    bytes,
                    PageRole::FullText {
                        article: id.to_string(),
                    },
                );
                // Chain pages L0 .. L(depth-1); L0 is the search result.
                let chain: Vec<String> = (0..depth)
                    .map(|level| {
                        if level == 0 {
                            format!("http://{}/article/{id}.html", host("pub", rng.below(N_HOSTS)))
                        } else {
                            format!(
                                "http://{}/~{}/{id}/step{level}.html",
                                host("uni", rng.below(N_HOSTS)),
                                record.first_author_surname.to_ascii_lowercase()
                            )
                        }
                    })
                    .collect();
                for (level, url) in chain.iter().enumerate() {
                    let next = chain.get(level + 1).unwrap_or(&ft_url);
                    let anchor = if level + 1 == chain.len() {
                        "Full text"
                    } else {
                        "Download options"
                    };
                    let html =
                        docs::abstract_page(rng, &site, &record.title, byline, &[(next.clone(), anchor.to_string())]);
                    self.web.insert(
                        url,
                        Format::Html,
                        html.into_bytes(),
                        PageRole::Landing {
                            article: id.to_string(),
                        },
                    );
                }
                let entry = chain.first().cloned().unwrap_or_else(|| ft_url.clone());
                results.push(entry.clone());
                results.push(format!("{entry}#top"));
                truth.reachable = depth <= REACHABLE_DEPTH;
                truth.full_text_url = Some(crate::robot::normalize_url(&ft_url).expect("valid"));
                truth.full_text_depth = Some(depth);
            }
            Scenario::AbstractOnly => {
                let h = host("pub", rng.below(N_HOSTS));
                let url = format!("http://{h}/article/{id}.html");
                let buy = format!("http://{h}/contact.html");
                let html = docs::abstract_page(
                    rng,
                    &site,
                    &record.title,
                    byline,
                    &[(buy, "Purchase access".to_string())],
                );
                self.web.insert(
                    &url,
                    Format::Html,
                    html.into_bytes(),
                    PageRole::AbstractOnly {
                        article: id.to_string(),
                    },
                );
                results.push(url);
            }
            Scenario::Impostor => {
                let url = format!("http://{}/reviews/{id}-review.pdf", host("repo", rng.below(N_HOSTS)));
                let reviewer = format!("{}. {}", docs::initial(rng), docs::surname(rng));
                let title = format!("A Critical Review of {}", docs::title(rng));
                let lead = format!(
                    "This review revisits the study {} by {byline} and places it in a wider literature.",
                    record.title
                );
                let paper = Paper::generate(rng, &title, &reviewer, venue, Some(&lead));
                self.web.insert(
                    &url,
                    Format::Pdf,
                    encode_document(&paper.to_text(), Format::Pdf),
                    PageRole::Impostor {
                        article: id.to_string(),
                    },
                );
                results.push(url);
            }
            Scenario::Absent => {
                if rng.bernoulli(0.5) {
                    let url = format!(
                        "http://{}/~{}{}/index.html",
                        host("uni", rng.below(N_HOSTS)),
                        record.first_author_surname.to_ascii_lowercase(),
                        id.to_ascii_lowercase()
                    );
                    let html = docs::homepage(rng, byline);
                    self.web
                        .insert(&url, Format::Html, html.into_bytes(), PageRole::Homepage);
                    results.push(url);
                }
            }
        }
        self.web
            .index
            .queries
            .insert(query_for(&record.first_author_surname, &record.title), results);
        truth
    }
}
