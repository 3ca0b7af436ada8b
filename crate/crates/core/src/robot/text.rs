//! Document-to-text conversion.
//!
//! HTML and plain text are handled in-process; every other format goes
//! through a [`Converter`], normally an external command.

use std::fmt;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use scraper::{Html, Node, Selector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Html,
    Xml,
    Text,
    Pdf,
    Ps,
    Latex,
    Rtf,
    Word,
    Unknown,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Html => "html",
            Format::Xml => "xml",
            Format::Text => "text",
            Format::Pdf => "pdf",
            Format::Ps => "ps",
            Format::Latex => "latex",
            Format::Rtf => "rtf",
            Format::Word => "word",
            Format::Unknown => "unknown",
        }
    }

    pub fn from_content_type(content_type: &str) -> Format {
        let mime = content_type.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
        match mime.as_str() {
            "text/html" | "application/xhtml+xml" => Format::Html,
            "text/xml" | "application/xml" => Format::Xml,
            "text/plain" => Format::Text,
            "application/pdf" => Format::Pdf,
            "application/postscript" => Format::Ps,
            "application/x-latex" | "application/x-tex" | "text/x-tex" => Format::Latex,
            "application/rtf" | "text/rtf" => Format::Rtf,
            "application/msword" | "application/vnd.openxmlformats-officedocument.wordprocessingml.document" => {
                Format::Word
            }
            _ => Format::Unknown,
        }
    }

    pub fn from_extension(path: &str) -> Format {
        let lower = path.to_ascii_lowercase();
        let ext = lower.rsplit_once('.').map(|(_, e)| e).unwrap_or("");
        match ext {
            "html" | "htm" | "xhtml" | "shtml" | "php" | "asp" | "aspx" | "jsp" => Format::Html,
            "xml" => Format::Xml,
            "txt" => Format::Text,
            "pdf" => Format::Pdf,
            "ps" => Format::Ps,
            "tex" | "latex" => Format::Latex,
            "rtf" => Format::Rtf,
            "doc" | "docx" => Format::Word,
            _ => Format::Unknown,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("bytes are not valid UTF-8 {0} text")]
    Undecodable(Format),
    #[error("CONVERTER_UNAVAILABLE: no converter configured for {0}")]
    ConverterUnavailable(Format),
    #[error("converter failed: {0}")]
    ConverterFailed(String),
    #[error("converter timed out after {0:?}")]
    ConverterTimeout(Duration),
}

/// An anchor found in an HTML page, before resolution against the page URL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub href: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Extracted {
    pub text: String,
    pub links: Vec<Link>,
}

/// Converts non-HTML document bytes to UTF-8 text.
pub trait Converter: Send + Sync {
    fn convert(&self, bytes: &[u8], format: Format) -> Result<String, ExtractError>;
}

pub fn extract_text(
    bytes: &[u8],
    format: Format,
    converter: Option<&dyn Converter>,
) -> Result<Extracted, ExtractError> {
    match format {
        Format::Html => {
            let src = decode_utf8(bytes).ok_or(ExtractError::Undecodable(format))?;
            Ok(html_to_text(src))
        }
        Format::Text => {
            let src = decode_utf8(bytes).ok_or(ExtractError::Undecodable(format))?;
            Ok(Extracted {
                text: src.to_string(),
                links: Vec::new(),
            })
        }
        other => match converter {
            Some(c) => Ok(Extracted {
                text: c.convert(bytes, other)?,
                links: Vec::new(),
            }),
            None => Err(ExtractError::ConverterUnavailable(other)),
        },
    }
}

fn decode_utf8(bytes: &[u8]) -> Option<&str> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    std::str::from_utf8(bytes).ok()
}

const SKIPPED: &[&str] = &["script", "style", "noscript", "template", "head"];
const BLOCKS: &[&str] = &[
    "address",
    "article",
    "aside",
    "blockquote",
    "br",
    "dd",
    "div",
    "dl",
    "dt",
    "figcaption",
    "figure",
    "footer",
    "form",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "header",
    "hr",
    "li",
    "main",
    "nav",
    "ol",
    "p",
    "pre",
    "section",
    "table",
    "td",
    "th",
    "title",
    "tr",
    "ul",
];

/// Linearizes an HTML document: one line per block element, scripts and
/// styles dropped, anchors collected separately.
pub fn html_to_text(src: &str) -> Extracted {
    let doc = Html::parse_document(src);
    let mut raw = String::new();
    // <title> lives in <head>, which is otherwise skipped.
    if let Some(title) = doc.select(&Selector::parse("head > title").unwrap()).next() {
        raw.push_str(&title.text().collect::<String>());
        raw.push('\n');
    }
    walk(doc.tree.root(), &mut raw);

    let text = raw
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n");

    let anchors = Selector::parse("a[href]").unwrap();
    let links = doc
        .select(&anchors)
        .filter_map(|a| {
            let href = a.value().attr("href")?.trim().to_string();
            let text = a.text().collect::<Vec<_>>().join(" ");
            Some(Link {
                href,
                text: text.split_whitespace().collect::<Vec<_>>().join(" "),
            })
        })
        .collect();
    Extracted { text, links }
}

fn walk(node: ego_tree::NodeRef<'_, Node>, out: &mut String) {
    match node.value() {
        Node::Text(t) => out.push_str(t),
        Node::Element(e) => {
            let name = e.name();
            if SKIPPED.contains(&name) {
                return;
            }
            let block = BLOCKS.contains(&name);
            if block {
                out.push('\n');
            }
            for child in node.children() {
                walk(child, out);
            }
            if block {
                out.push('\n');
            }
        }
        _ => {
            for child in node.children() {
                walk(child, out);
            }
        }
    }
}

/// Runs a shell command template per document.
///
/// `{input}` in the template is replaced by the path of a temporary file
/// holding the bytes; without it the bytes are written to stdin. `{format}`
/// is replaced by the format tag. Stdout must be UTF-8 text; a nonzero exit
/// status is a failure.
#[derive(Debug, Clone)]
pub struct CommandConverter {
    template: String,
    timeout: Duration,
}

impl CommandConverter {
    pub fn new(template: impl Into<String>, timeout: Duration) -> Self {
        CommandConverter {
            template: template.into(),
            timeout,
        }
    }

    /// Reads the template from an environment variable, if set and non-empty.
    pub fn from_env(var: &str, timeout: Duration) -> Option<Self> {
        std::env::var(var)
            .ok()
            .filter(|t| !t.trim().is_empty())
            .map(|t| CommandConverter::new(t, timeout))
    }
}

impl Converter for CommandConverter {
    fn convert(&self, bytes: &[u8], format: Format) -> Result<String, ExtractError> {
        let failed = |e: std::io::Error| ExtractError::ConverterFailed(e.to_string());
        let uses_file = self.template.contains("{input}");
        let mut tmp = None;
        let mut script = self.template.replace("{format}", format.as_str());
        if uses_file {
            let mut file = tempfile::NamedTempFile::new().map_err(failed)?;
            file.write_all(bytes).map_err(failed)?;
            file.flush().map_err(failed)?;
            let quoted = format!("'{}'", file.path().display().to_string().replace('\'', r"'\''"));
            script = script.replace("{input}", &quoted);
            tmp = Some(file);
        }

        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&script)
            .stdin(if uses_file { Stdio::null() } else { Stdio::piped() })
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(failed)?;

        let writer = child.stdin.take().map(|mut stdin| {
            let data = bytes.to_vec();
            std::thread::spawn(move || {
                // The child may exit without draining stdin.
                let _ = stdin.write_all(&data);
            })
        });
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut buf = Vec::new();
            stdout.read_to_end(&mut buf).map(|_| buf)
        });
        let mut stderr = child.stderr.take().expect("piped stderr");
        let err_reader = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stderr.read_to_string(&mut buf);
            buf
        });

        let deadline = Instant::now() + self.timeout;
        let status = loop {
            match child.try_wait().map_err(failed)? {
                Some(status) => break status,
                None if Instant::now() >= deadline => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(ExtractError::ConverterTimeout(self.timeout));
                }
                None => std::thread::sleep(Duration::from_millis(5)),
            }
        };
        if let Some(w) = writer {
            let _ = w.join();
        }
        let out = reader
            .join()
            .map_err(|_| ExtractError::ConverterFailed("stdout reader panicked".into()))?
            .map_err(failed)?;
        let err = err_reader.join().unwrap_or_default();
        drop(tmp);
        if !status.success() {
            return Err(ExtractError::ConverterFailed(format!(
                "`{}` exited with {}: {}",
                self.template,
                status,
                err.trim()
            )));
        }
        String::from_utf8(out).map_err(|_| ExtractError::ConverterFailed("converter output is not UTF-8".into()))
    }
}
