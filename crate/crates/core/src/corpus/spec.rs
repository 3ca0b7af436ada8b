use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const DEFAULT_DISCIPLINES: [&str; 10] = [
    "Biology",
    "Psychology",
    "Sociology",
    "Health",
    "Political Science",
    "Economics",
    "Education",
    "Law",
    "Business",
    "Management",
];

pub const DEFAULT_COUNTRIES: [&str; 8] = ["US", "UK", "CA", "DE", "FR", "JP", "AU", "NL"];

/// Parameters of a synthetic corpus. Serialized as JSON for `synth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub n_articles: usize,
    #[serde(default = "default_disciplines")]
    pub disciplines: Vec<String>,
    pub years: YearRange,
    pub oa_probability: OaProbability,
    pub citation_model: CitationModel,
    #[serde(default = "one")]
    pub oa_citation_multiplier: f64,
    #[serde(default)]
    pub decoys: DecoySpec,
    pub seed: u64,
    #[serde(default = "default_journals")]
    pub journals_per_discipline: usize,
    #[serde(default = "default_issues")]
    pub issues_per_year: usize,
    #[serde(default = "default_countries")]
    pub countries: Vec<String>,
    /// Relative weights of full-text formats: pdf, ps, html, text.
    #[serde(default = "default_format_weights")]
    pub format_weights: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

impl YearRange {
    pub fn len(&self) -> usize {
        (self.last - self.first + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Probability that an article has a web full text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OaProbability {
    Constant(f64),
    /// Linear in the year, from `first` in the first year to `last` in the last.
    YearRamp {
        first: f64,
        last: f64,
    },
    /// Per discipline; disciplines missing from the map use `default`.
    ByDiscipline {
        by_discipline: BTreeMap<String, f64>,
        default: f64,
    },
}

impl OaProbability {
    pub fn at(&self, discipline: &str, year: i32, years: YearRange) -> f64 {
        match self {
            OaProbability::Constant(p) => *p,
            OaProbability::YearRamp { first, last } => {
                if years.len() <= 1 {
                    *first
                } else {
                    let t = (year - years.first) as f64 / (years.len() - 1) as f64;
                    first + (last - first) * t
                }
            }
            OaProbability::ByDiscipline { by_discipline, default } => {
                by_discipline.get(discipline).copied().unwrap_or(*default)
            }
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            OaProbability::Constant(p) => vec![*p],
            OaProbability::YearRamp { first, last } => vec![*first, *last],
            OaProbability::ByDiscipline { by_discipline, default } => {
                by_discipline.values().copied().chain([*default]).collect()
            }
        }
    }
}

/// Point mass at zero plus a geometric tail on {1, 2, ...}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationModel {
    #[serde(default = "geometric_mixture")]
    pub family: String,
    pub uncited_mass: f64,
    /// Mean citation count of cited articles (>= 1).
    pub mean_cited: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoySpec {
    /// Chance that an article without a full text has an abstract-only page.
    #[serde(default)]
    pub abstract_page_prob: f64,
    /// Weights of the number of links between search result and full text (0..=5).
    #[serde(default = "default_chain")]
    pub chain_depth_distribution: [f64; 6],
    /// Chance that an article's search results include a dead link.
    #[serde(default)]
    pub dead_link_prob: f64,
    /// Chance that an article without a full text is shadowed by another
    /// paper's full text that quotes its title and author up front.
    #[serde(default)]
    pub impostor_prob: f64,
}

impl Default for DecoySpec {
    fn default() -> Self {
        DecoySpec {
            abstract_page_prob: 0.0,
            chain_depth_distribution: default_chain(),
            dead_link_prob: 0.0,
            impostor_prob: 0.0,
        }
    }
}

fn default_disciplines() -> Vec<String> {
    DEFAULT_DISCIPLINES.iter().map(|s| s.to_string()).collect()
}

fn default_countries() -> Vec<String> {
    DEFAULT_COUNTRIES.iter().map(|s| s.to_string()).collect()
}

fn default_chain() -> [f64; 6] {
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
}

fn default_format_weights() -> [f64; 4] {
    [0.5, 0.1, 0.3, 0.1]
}

fn default_journals() -> usize {
    3
}

fn default_issues() -> usize {
    4
}

fn one() -> f64 {
    1.0
}

fn geometric_mixture() -> String {
    "geometric-mixture".to_string()
}

impl CorpusSpec {
    /// A small valid spec; override fields as needed.
    pub fn new(n_articles: usize, seed: u64) -> Self {
        CorpusSpec {
            n_articles,
            disciplines: default_disciplines(),
            years: YearRange {
                first: 1992,
                last: 2003,
            },
            oa_probability: OaProbability::Constant(0.12),
            citation_model: CitationModel {
                family: geometric_mixture(),
                uncited_mass: 0.61,
                mean_cited: 4.0,
            },
            oa_citation_multiplier: 1.0,
            decoys: DecoySpec::default(),
            seed,
            journals_per_discipline: default_journals(),
            issues_per_year: default_issues(),
            countries: default_countries(),
            format_weights: default_format_weights(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(format!("{name} must be a probability in [0, 1], got {p}"))
            }
        };
        if self.n_articles == 0 {
            return Err("n_articles must be at least 1".into());
        }
        if self.years.is_empty() {
            return Err(format!("empty year range {}..={}", self.years.first, self.years.last));
        }
        if self.disciplines.is_empty() || self.countries.is_empty() {
            return Err("disciplines and countries must be non-empty".into());
        }
        if self.disciplines.iter().any(|d| d.contains('|')) {
            return Err("discipline names must not contain '|'".into());
        }
        if self.journals_per_discipline == 0 || self.issues_per_year == 0 {
            return Err("journals_per_discipline and issues_per_year must be positive".into());
        }
        for p in self.oa_probability.values() {
            prob("oa_probability", p)?;
        }
        if self.citation_model.family != "geometric-mixture" {
            return Err(format!("unsupported citation model `{}`", self.citation_model.family));
        }
        prob("citation_model.uncited_mass", self.citation_model.uncited_mass)?;
        if self.citation_model.uncited_mass >= 1.0 && self.oa_citation_multiplier != 1.0 {
            return Err("uncited_mass 1 leaves no mean to scale".into());
        }
        if self.citation_model.mean_cited.is_nan() || self.citation_model.mean_cited < 1.0 {
            return Err(format!(
                "mean_cited must be >= 1, got {}",
                self.citation_model.mean_cited
            ));
        }
        if !self.oa_citation_multiplier.is_finite() || self.oa_citation_multiplier < 0.0 {
            return Err(format!(
                "oa_citation_multiplier must be >= 0, got {}",
                self.oa_citation_multiplier
            ));
        }
        prob("decoys.abstract_page_prob", self.decoys.abstract_page_prob)?;
        prob("decoys.dead_link_prob", self.decoys.dead_link_prob)?;
        prob("decoys.impostor_prob", self.decoys.impostor_prob)?;
        if self.decoys.abstract_page_prob + self.decoys.impostor_prob > 1.0 {
            return Err("abstract_page_prob + impostor_prob must not exceed 1".into());
        }
        let weights_ok = |w: &[f64]| w.iter().all(|x| *x >= 0.0 && x.is_finite()) && w.iter().sum::<f64>() > 0.0;
        if !weights_ok(&self.decoys.chain_depth_distribution) {
            return Err("chain_depth_distribution needs non-negative weights with positive sum".into());
        }
        if !weights_ok(&self.format_weights) {
            return Err("format_weights needs non-negative weights with positive sum".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_with_defaults() {
        let json = r#"{"n_articles": 10, "years": {"first": 1992, "last": 2003},
            "oa_probability": {"first": 0.05, "last": 0.16},
            "citation_model": {"uncited_mass": 0.61, "mean_cited": 4.0}, "seed": 9}"#;
        let spec: CorpusSpec = serde_json::from_str(json).unwrap();
        assert!(spec.validate().is_ok());
        assert_eq!(spec.disciplines.len(), 10);
        assert_eq!(spec.oa_probability.at("Law", 2003, spec.years), 0.16);
        let back: CorpusSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn invalid_specs() {
        let mut s = CorpusSpec::new(10, 1);
        s.oa_probability = OaProbability::Constant(1.5);
        assert!(s.validate().is_err());
        let mut s = CorpusSpec::new(0, 1);
        assert!(s.validate().is_err());
        s.n_articles = 1;
        s.years = YearRange {
            first: 2000,
            last: 1999,
        };
        assert!(s.validate().is_err());
    }
}
