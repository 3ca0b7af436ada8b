//! Full-text test: title and surname near the start, a references section near the end.

use std::sync::OnceLock;

use regex::Regex;

use crate::records::{ArticleRecord, NotFoundReason};

use super::CrawlConfig;

/// Casefolded, punctuation-free, single-spaced text with a map back to
/// source character positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalizedText {
    pub chars: Vec<char>,
    /// `source_index[i]` is the character offset in the source of `chars[i]`.
    pub source_index: Vec<usize>,
}

impl NormalizedText {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn as_string(&self) -> String {
        self.chars.iter().collect()
    }
}

pub fn normalize(src: &str) -> NormalizedText {
    let mut out = NormalizedText::default();
    let mut pending_space = false;
    for (ci, ch) in src.chars().enumerate() {
        if ch.is_alphanumeric() {
            if pending_space && !out.chars.is_empty() {
                out.chars.push(' ');
                out.source_index.push(ci);
            }
            pending_space = false;
            for lc in ch.to_lowercase() {
                out.chars.push(lc);
                out.source_index.push(ci);
            }
        } else {
            pending_space = true;
        }
    }
    out
}

pub fn normalize_str(src: &str) -> String {
    normalize(src).as_string()
}

/// Tokens of the normalized form.
pub fn tokens(src: &str) -> Vec<String> {
    normalize_str(src)
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchVerdict {
    FullTextFound {
        /// Character offset of the title match in the source text.
        head_offset: usize,
        tail_evidence: String,
    },
    NotFound {
        reason: NotFoundReason,
    },
}

impl MatchVerdict {
    pub fn is_found(&self) -> bool {
        matches!(self, MatchVerdict::FullTextFound { .. })
    }

    /// Title and surname were found in the head but no references in the tail.
    pub fn title_only(&self) -> bool {
        matches!(
            self,
            MatchVerdict::NotFound {
                reason: NotFoundReason::NoReferencesSection
            }
        )
    }
}

pub const REFERENCE_HEADINGS: [&str; 4] = ["references", "bibliography", "works cited", "literature cited"];
pub const MIN_CITATION_LINES: usize = 3;

pub fn match_full_text(text: &str, record: &ArticleRecord, config: &CrawlConfig) -> MatchVerdict {
    let norm = normalize(text);
    if norm.is_empty() {
        return MatchVerdict::NotFound {
            reason: NotFoundReason::EmptyText,
        };
    }
    let n = norm.len();
    let head_len = ((config.head_fraction * n as f64).ceil() as usize).min(n);
    let head = &norm.chars[..head_len];

    let title = normalize(&record.title).chars;
    let title_at = best_title_match(&title, head)
        .filter(|&(dist, _)| 1.0 - dist as f64 / title.len() as f64 >= config.title_similarity_threshold);
    let surname = normalize_str(&record.first_author_surname);
    // A word cut by the head boundary is read whole, so a prefix of it never passes for the surname.
    let word_end = norm.chars[head_len..]
        .iter()
        .position(|&c| c == ' ')
        .map_or(n, |p| head_len + p);
    let head_str: String = norm.chars[..word_end].iter().collect();
    let surname_ok = !surname.is_empty() && format!(" {head_str} ").contains(&format!(" {surname} "));

    let Some((_, start)) = title_at.filter(|_| surname_ok) else {
        return MatchVerdict::NotFound {
            reason: NotFoundReason::NoTitleMatch,
        };
    };

    let tail_start = ((1.0 - config.tail_fraction) * n as f64).floor() as usize;
    let src_tail_start = norm.source_index[tail_start.min(n - 1)];
    match references_in_tail(text, src_tail_start) {
        Some(tail_evidence) => MatchVerdict::FullTextFound {
            head_offset: norm.source_index[start],
            tail_evidence,
        },
        None => MatchVerdict::NotFound {
            reason: NotFoundReason::NoReferencesSection,
        },
    }
}

/// Minimum edit distance between `title` and any substring of `head`,
/// with the start of the earliest best substring.
fn best_title_match(title: &[char], head: &[char]) -> Option<(usize, usize)> {
    if title.is_empty() || head.is_empty() {
        return None;
    }
    let head_str: String = head.iter().collect();
    let title_str: String = title.iter().collect();
    if let Some(b) = head_str.find(&title_str) {
        return Some((0, head_str[..b].chars().count()));
    }

    let h = head.len();
    let mut prev: Vec<usize> = vec![0; h + 1];
    let mut prev_start: Vec<usize> = (0..=h).collect();
    let mut cur = vec![0; h + 1];
    let mut cur_start = vec![0; h + 1];
    for (i, &tc) in title.iter().enumerate() {
        cur[0] = i + 1;
        cur_start[0] = 0;
        for j in 1..=h {
            let sub = prev[j - 1] + usize::from(tc != head[j - 1]);
            let del = prev[j] + 1;
            let ins = cur[j - 1] + 1;
            let (cost, start) = if sub <= del && sub <= ins {
                (sub, prev_start[j - 1])
            } else if del <= ins {
                (del, prev_start[j])
            } else {
                (ins, cur_start[j - 1])
            };
            cur[j] = cost;
            cur_start[j] = start;
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut prev_start, &mut cur_start);
    }
    let (end, dist) = prev
        .iter()
        .enumerate()
        .skip(1)
        .min_by_key(|&(j, &d)| (d, j))
        .map(|(j, &d)| (j, d))?;
    Some((dist, prev_start[end].min(h - 1)))
}

/// Looks for a references section among the source lines that reach past `src_tail_start`.
fn references_in_tail(text: &str, src_tail_start: usize) -> Option<String> {
    let mut offset = 0usize;
    let mut citation_lines = 0usize;
    for line in text.split('\n') {
        let len = line.chars().count();
        let end = offset + len;
        offset = end + 1;
        if end <= src_tail_start {
            continue;
        }
        if let Some(h) = heading(line) {
            return Some(format!("heading:{h}"));
        }
        if citation_line().is_match(line) {
            citation_lines += 1;
        }
    }
    (citation_lines >= MIN_CITATION_LINES).then(|| format!("citation_lines:{citation_lines}"))
}

fn heading(line: &str) -> Option<&'static str> {
    let norm = normalize_str(line);
    let mut toks: Vec<&str> = norm.split(' ').filter(|t| !t.is_empty()).collect();
    if toks.len() > 1 && is_section_number(toks[0]) {
        toks.remove(0);
    }
    let joined = toks.join(" ");
    REFERENCE_HEADINGS.iter().copied().find(|h| *h == joined)
}

fn is_section_number(tok: &str) -> bool {
    tok.chars().all(|c| c.is_ascii_digit()) || tok.chars().all(|c| matches!(c, 'i' | 'v' | 'x' | 'l' | 'c'))
}

/// A leading `[n]` marker or a parenthesized year.
fn citation_line() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*\[\d{1,4}\]|\((?:1[5-9]|20)\d{2}[a-z]?\)").unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::{IssueKey, OaStatus};

    fn record(surname: &str, title: &str) -> ArticleRecord {
        ArticleRecord {
            id: "a".into(),
            first_author_surname: surname.into(),
            title: title.into(),
            journal_id: "J".into(),
            issue_key: IssueKey::new("J", 2000, "1").unwrap(),
            year: 2000,
            discipline: "Biology".into(),
            country: "CA".into(),
            citation_count: 0,
            oa_status: OaStatus::Unknown,
        }
    }

    fn body(words: usize) -> String {
        (0..words)
            .map(|i| format!("word{}", i % 17))
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn normalization_maps_offsets() {
        let n = normalize("  Hello, World!! ");
        assert_eq!(n.as_string(), "hello world");
        assert_eq!(n.source_index[0], 2);
        assert_eq!(n.source_index[6], 9);
    }

    #[test]
    fn empty_text() {
        let cfg = CrawlConfig::default();
        assert_eq!(
            match_full_text("  \n ...", &record("Smith", "A title here"), &cfg),
            MatchVerdict::NotFound {
                reason: NotFoundReason::EmptyText
            }
        );
    }

    #[test]
    fn heading_variants() {
        assert_eq!(heading("References"), Some("references"));
        assert_eq!(heading("7. REFERENCES"), Some("references"));
        assert_eq!(heading("IV Literature Cited"), Some("literature cited"));
        assert_eq!(heading("see the references below"), None);
    }

    #[test]
    fn fuzzy_title_tolerates_small_damage() {
        let cfg = CrawlConfig::default();
        let rec = record("Harnad", "Ten year cross disciplinary comparison of open access growth");
        let text = format!(
            "Ten-year cross-disciplinry comparison of open acess growth\nS. Harnad\n{}\nReferences\n[1] A (1999)\n",
            body(400)
        );
        assert!(match_full_text(&text, &rec, &cfg).is_found());
        let mangled = format!("Ten-year comparison of growth\nS. Harnad\n{}\nReferences\n", body(400));
        assert_eq!(
            match_full_text(&mangled, &rec, &cfg),
            MatchVerdict::NotFound {
                reason: NotFoundReason::NoTitleMatch
            }
        );
    }

    #[test]
    fn surname_required_as_token() {
        let cfg = CrawlConfig::default();
        let rec = record("Gin", "Open access impact study");
        let text = format!("Open access impact study\nby Gingras\n{}\nReferences\n", body(300));
        assert_eq!(
            match_full_text(&text, &rec, &cfg),
            MatchVerdict::NotFound {
                reason: NotFoundReason::NoTitleMatch
            }
        );
    }

    #[test]
    fn word_cut_by_head_boundary_is_not_a_surname() {
        let rec = record("Gin", "Open access impact study");
        let text = format!("Open access impact study by Gingras {}\nReferences\n", body(100));
        let cut = text.find("Gingras").unwrap() + 3;
        let cfg = CrawlConfig {
            head_fraction: cut as f64 / normalize(&text).len() as f64,
            ..CrawlConfig::default()
        };
        assert!(!match_full_text(&text, &rec, &cfg).is_found());
    }

    #[test]
    fn citation_lines_count_as_references() {
        let cfg = CrawlConfig::default();
        let rec = record("Smith", "Citation advantage in biology");
        let text = format!(
            "Citation advantage in biology\nJ. Smith\n{}\nJones, A. (1998) X.\nBrown, B. (2001) Y.\n[3] Lee C. Z.\n",
            body(200)
        );
        match match_full_text(&text, &rec, &cfg) {
            MatchVerdict::FullTextFound {
                tail_evidence,
                head_offset,
            } => {
                assert_eq!(tail_evidence, "citation_lines:3");
                assert_eq!(head_offset, 0);
            }
            v => panic!("{v:?}"),
        }
        let two = format!(
            "Citation advantage in biology\nJ. Smith\n{}\nJones (1998)\nBrown (2001)\n",
            body(200)
        );
        assert!(match_full_text(&two, &rec, &cfg).title_only());
    }

    #[test]
    fn title_outside_head_rejected() {
        let cfg = CrawlConfig::default();
        let rec = record("Smith", "Citation advantage in biology");
        let text = format!(
            "{}\nCitation advantage in biology\nJ. Smith\n{}\nReferences\n",
            body(200),
            body(200)
        );
        assert_eq!(
            match_full_text(&text, &rec, &cfg),
            MatchVerdict::NotFound {
                reason: NotFoundReason::NoTitleMatch
            }
        );
    }
}
