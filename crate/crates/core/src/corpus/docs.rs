//! Vocabulary and page builders for the mock web.

use super::rng::CorpusRng;

const TITLE_WORDS: &[&str] = &[
    "adaptive",
    "analysis",
    "anomalous",
    "archival",
    "assessment",
    "asymmetric",
    "behavioral",
    "bilateral",
    "boundary",
    "canonical",
    "capital",
    "cellular",
    "change",
    "cognitive",
    "cohort",
    "collective",
    "comparative",
    "competition",
    "conflict",
    "consumer",
    "contract",
    "cooperation",
    "corporate",
    "coupling",
    "crisis",
    "cultural",
    "decision",
    "demand",
    "dynamics",
    "ecological",
    "effects",
    "elasticity",
    "electoral",
    "emergence",
    "empirical",
    "enzyme",
    "equilibrium",
    "estimation",
    "evidence",
    "evolution",
    "exchange",
    "expression",
    "federal",
    "feedback",
    "fiscal",
    "framework",
    "functional",
    "genetic",
    "governance",
    "growth",
    "habitat",
    "health",
    "heterogeneity",
    "identity",
    "incentives",
    "inequality",
    "inference",
    "innovation",
    "institutional",
    "judicial",
    "labor",
    "learning",
    "legislative",
    "liability",
    "longitudinal",
    "market",
    "maternal",
    "membrane",
    "memory",
    "metabolic",
    "migration",
    "mobility",
    "monetary",
    "motivation",
    "neural",
    "networks",
    "norms",
    "outcomes",
    "parental",
    "patterns",
    "perception",
    "performance",
    "policy",
    "population",
    "poverty",
    "predictors",
    "protein",
    "public",
    "randomized",
    "regional",
    "regulation",
    "reform",
    "resilience",
    "response",
    "risk",
    "rural",
    "schooling",
    "selection",
    "signaling",
    "social",
    "spatial",
    "stability",
    "strategic",
    "stress",
    "structure",
    "survey",
    "teacher",
    "temporal",
    "theory",
    "trade",
    "transition",
    "trust",
    "urban",
    "variation",
    "voting",
    "welfare",
    "workplace",
    "youth",
];

const CONNECTIVES: &[&str] = &["of", "in", "and", "for", "under", "across", "among", "within"];

const SURNAMES: &[&str] = &[
    "Abbott",
    "Alvarez",
    "Baker",
    "Bianchi",
    "Brennan",
    "Castillo",
    "Chen",
    "Dahl",
    "Dubois",
    "Eklund",
    "Fischer",
    "Fontaine",
    "Garcia",
    "Goldberg",
    "Hansen",
    "Hayashi",
    "Ivanova",
    "Jansen",
    "Kaplan",
    "Kowalski",
    "Larsen",
    "Lindqvist",
    "Martin",
    "Moreau",
    "Nakamura",
    "Novak",
    "Okafor",
    "Olsen",
    "Patel",
    "Petrov",
    "Quinn",
    "Rossi",
    "Russo",
    "Sato",
    "Schmidt",
    "Silva",
    "Tanaka",
    "Thompson",
    "Ueda",
    "Varga",
    "Wagner",
    "Weber",
    "Xu",
    "Yamamoto",
    "Young",
    "Zhang",
    "Zimmerman",
    "Okonkwo",
    "Haddad",
    "Lefebvre",
];

const BODY_WORDS: &[&str] = &[
    "we",
    "examine",
    "the",
    "relation",
    "between",
    "measured",
    "variables",
    "across",
    "several",
    "samples",
    "results",
    "indicate",
    "a",
    "robust",
    "association",
    "that",
    "persists",
    "after",
    "controlling",
    "for",
    "observed",
    "covariates",
    "model",
    "estimates",
    "suggest",
    "moderate",
    "effect",
    "sizes",
    "data",
    "were",
    "collected",
    "over",
    "period",
    "using",
    "standard",
    "procedures",
    "our",
    "findings",
    "extend",
    "prior",
    "work",
    "on",
    "this",
    "question",
    "and",
    "highlight",
    "limitations",
    "further",
    "research",
    "should",
    "address",
    "alternative",
    "explanations",
    "sample",
    "consisted",
    "of",
    "participants",
    "drawn",
    "from",
    "multiple",
    "sites",
    "analyses",
    "reveal",
    "consistent",
    "differences",
    "in",
    "outcomes",
    "these",
    "patterns",
    "are",
    "discussed",
    "with",
    "respect",
    "to",
    "theory",
    "and",
    "practice",
];

const JOURNAL_STEMS: &[&str] = &["Journal of", "Annals of", "Review of", "Quarterly of", "Bulletin of"];

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

/// A title of 5 to 9 words.
pub fn title(rng: &mut CorpusRng) -> String {
    let n = 5 + rng.below(5) as usize;
    let mut words = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && i + 1 < n && rng.bernoulli(0.2) {
            words.push(rng.pick(CONNECTIVES).to_string());
        } else {
            words.push(capitalize(rng.pick(TITLE_WORDS)));
        }
    }
    words.join(" ")
}

pub fn surname(rng: &mut CorpusRng) -> String {
    rng.pick(SURNAMES).to_string()
}

pub fn initial(rng: &mut CorpusRng) -> char {
    (b'A' + rng.below(26) as u8) as char
}

pub fn journal_name(discipline: &str, index: usize) -> String {
    format!(
        "{} {} {}",
        JOURNAL_STEMS[index % JOURNAL_STEMS.len()],
        discipline,
        index / JOURNAL_STEMS.len() + 1
    )
}

fn sentence(rng: &mut CorpusRng, words: usize) -> String {
    let mut s = (0..words).map(|_| *rng.pick(BODY_WORDS)).collect::<Vec<_>>().join(" ");
    s = capitalize(&s);
    s.push('.');
    s
}

/// A paragraph of roughly `words` words without parentheses or brackets.
pub fn paragraph(rng: &mut CorpusRng, words: usize) -> String {
    let mut out = Vec::new();
    let mut left = words;
    while left > 0 {
        let n = (8 + rng.below(8) as usize).min(left);
        out.push(sentence(rng, n));
        left -= n;
    }
    out.join(" ")
}

fn reference(rng: &mut CorpusRng, i: usize) -> String {
    let year = 1960 + rng.below(44);
    format!(
        "[{i}] {}, {}. ({year}). {}. {}.",
        surname(rng),
        initial(rng),
        title(rng),
        journal_name(&capitalize(rng.pick(TITLE_WORDS)), rng.below(10) as usize)
    )
}

/// Content shared by the text, PDF, PostScript and HTML renderings of a paper.
pub struct Paper {
    pub title: String,
    pub byline: String,
    pub venue: String,
    pub abstract_text: String,
    pub body: Vec<String>,
    pub references: Vec<String>,
}

impl Paper {
    /// Body long enough that the title and byline sit well inside the first
    /// fifth of the text and the references heading inside the last fifth.
    pub fn generate(rng: &mut CorpusRng, title: &str, byline: &str, venue: &str, lead: Option<&str>) -> Paper {
        let n = 40 + rng.below(20) as usize;
        let abstract_text = paragraph(rng, n);
        let mut body: Vec<String> = (0..7)
            .map(|_| {
                let n = 70 + rng.below(20) as usize;
                paragraph(rng, n)
            })
            .collect();
        if let Some(lead) = lead {
            body.insert(0, lead.to_string());
        }
        let n_refs = 4 + rng.below(4) as usize;
        let references = (1..=n_refs).map(|i| reference(rng, i)).collect();
        Paper {
            title: title.to_string(),
            byline: byline.to_string(),
            venue: venue.to_string(),
            abstract_text,
            body,
            references,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = vec![
            self.title.clone(),
            self.byline.clone(),
            self.venue.clone(),
            String::new(),
            "Abstract".to_string(),
            self.abstract_text.clone(),
            String::new(),
        ];
        for p in &self.body {
            out.push(p.clone());
            out.push(String::new());
        }
        out.push("References".to_string());
        out.extend(self.references.iter().cloned());
        out.join("\n") + "\n"
    }

    pub fn to_html(&self) -> String {
        let mut s = format!(
            "<!DOCTYPE html>\n<html><head><title>{}</title></head><body>\n<h1>{}</h1>\n<p class=\"byline\">{}</p>\n<p>{}</p>\n<h2>Abstract</h2>\n<p>{}</p>\n",
            esc(&self.title),
            esc(&self.title),
            esc(&self.byline),
            esc(&self.venue),
            esc(&self.abstract_text)
        );
        for p in &self.body {
            s.push_str(&format!("<p>{}</p>\n", esc(p)));
        }
        s.push_str("<h2>References</h2>\n<ol>\n");
        for r in &self.references {
            s.push_str(&format!("<li>{}</li>\n", esc(r)));
        }
        s.push_str("</ol>\n</body></html>\n");
        s
    }
}

pub fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// An article landing or abstract page: title, byline, abstract and extra links.
pub fn abstract_page(rng: &mut CorpusRng, site: &str, title: &str, byline: &str, links: &[(String, String)]) -> String {
    let n = 110 + rng.below(40) as usize;
    let abstract_text = paragraph(rng, n);
    let mut s = format!(
        "<!DOCTYPE html>\n<html><head><title>{}</title></head><body>\n<h1>{}</h1>\n<p class=\"byline\">{}</p>\n<h2>Abstract</h2>\n<p>{}</p>\n",
        esc(site),
        esc(title),
        esc(byline),
        esc(&abstract_text)
    );
    for (href, text) in links {
        s.push_str(&format!("<p><a href=\"{}\">{}</a></p>\n", esc(href), esc(text)));
    }
    s.push_str("<p class=\"nav\"><a href=\"/\">Home</a> <a href=\"/contact.html\">Contact</a></p>\n</body></html>\n");
    s
}

/// A personal page listing publications other than the one searched for.
pub fn homepage(rng: &mut CorpusRng, name: &str) -> String {
    let mut s = format!(
        "<!DOCTYPE html>\n<html><head><title>{}</title></head><body>\n<h1>{}</h1>\n<p>{}</p>\n<h2>Selected publications</h2>\n<ul>\n",
        esc(name),
        esc(name),
        esc(&paragraph(rng, 30))
    );
    for _ in 0..3 {
        s.push_str(&format!("<li>{}</li>\n", esc(&title(rng))));
    }
    s.push_str("</ul>\n<p class=\"nav\"><a href=\"/\">Home</a></p>\n</body></html>\n");
    s
}

/// The shared pages every mock host serves.
pub fn site_page(host: &str, heading: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html><head><title>{}</title></head><body>\n<h1>{}</h1>\n<p>{}</p>\n<p class=\"nav\"><a href=\"/\">Home</a> <a href=\"/contact.html\">Contact</a></p>\n</body></html>\n",
        esc(host),
        esc(heading),
        esc(host)
    )
}
