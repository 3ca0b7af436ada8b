use crate::records::ArticleRecord;

/// Search query for one article: the surname bare, the title as a quoted phrase.
///
/// Internal double quotes are backslash-escaped and all whitespace runs,
/// including newlines, collapse to one space.
pub fn build_query(record: &ArticleRecord) -> String {
    query_for(&record.first_author_surname, &record.title)
}

pub fn query_for(surname: &str, title: &str) -> String {
    let surname = surname.split_whitespace().collect::<Vec<_>>().join(" ");
    let title = title
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .replace('\\', "\\\\")
        .replace('"', "\\\"");
    format!("{surname} \"{title}\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surname_and_quoted_title() {
        assert_eq!(
            query_for("Lawrence", "Online or Invisible?"),
            r#"Lawrence "Online or Invisible?""#
        );
    }

    #[test]
    fn internal_quotes_escaped_on_one_line() {
        let q = query_for("Harnad", "The \"Green\" road\nto OA");
        assert_eq!(q, r#"Harnad "The \"Green\" road to OA""#);
        assert!(!q.contains('\n'));
    }

    #[test]
    fn diacritics_preserved() {
        assert_eq!(query_for("Gingràs-Hajjém", "Étude"), "Gingràs-Hajjém \"Étude\"");
    }
}
