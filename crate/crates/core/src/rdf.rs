//! N-Triples ingestion, term normalization and object-category maps.
//!
//! Only the line-oriented N-Triples subset is accepted: one statement per
//! line, IRIs for subject and predicate, an IRI or a literal for the
//! object. Blank nodes are rejected. Language tags and datatype IRIs on
//! literals are parsed and then dropped.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use indexmap::IndexSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RdfError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("invalid UTF-8 at byte offset {0}")]
    InvalidUtf8(usize),
    #[error("term {0:?} normalizes to an empty token")]
    EmptyToken(String),
    #[error("read error: {0}")]
    Io(String),
}

impl RdfError {
    fn malformed(line: usize, reason: impl Into<String>) -> Self {
        RdfError::MalformedLine {
            line,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Iri,
    Literal,
}

/// An IRI or literal, holding its unescaped lexical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RdfTerm {
    pub kind: TermKind,
    pub lexical: String,
}

impl RdfTerm {
    pub fn iri(lexical: impl Into<String>) -> Self {
        RdfTerm {
            kind: TermKind::Iri,
            lexical: lexical.into(),
        }
    }

    pub fn literal(lexical: impl Into<String>) -> Self {
        RdfTerm {
            kind: TermKind::Literal,
            lexical: lexical.into(),
        }
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    /// Parses a single term written in N-Triples syntax (`<iri>` or
    /// `"literal"` with optional annotation).
    pub fn parse(text: &str) -> Result<Self, RdfError> {
        let mut cursor = Cursor::new(text.trim(), 0);
        let term = cursor.term()?;
        cursor.skip_ws();
        if !cursor.at_end() {
            return Err(RdfError::malformed(0, "trailing characters after term"));
        }
        Ok(term)
    }
}

/// Canonical N-Triples rendering of the term.
impl fmt::Display for RdfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write!(f, "<{}>", self.lexical),
            TermKind::Literal => {
                f.write_str("\"")?;
                for c in self.lexical.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c if (c as u32) < 0x20 => write!(f, "\\u{:04X}", c as u32)?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub subject: RdfTerm,
    pub predicate: RdfTerm,
    pub object: RdfTerm,
    /// 1-based line in the source file.
    pub source_line: usize,
    /// 0-based position among the triples sharing this subject.
    pub doc_order: usize,
}

impl Triple {
    /// Canonical single-line N-Triples statement, without line terminator.
    pub fn to_ntriples(&self) -> String {
        format!("{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Streaming N-Triples reader. Yields triples in file order.
pub struct NTriplesParser<R> {
    reader: R,
    buf: Vec<u8>,
    line: usize,
    offset: usize,
    per_subject: HashMap<String, usize>,
    done: bool,
}

impl<R: BufRead> NTriplesParser<R> {
    pub fn new(reader: R) -> Self {
        NTriplesParser {
            reader,
            buf: Vec::new(),
            line: 0,
            offset: 0,
            per_subject: HashMap::new(),
            done: false,
        }
    }

    fn next_statement(&mut self) -> Result<Option<Triple>, RdfError> {
        loop {
            self.buf.clear();
            let read = self
                .reader
                .read_until(b'\n', &mut self.buf)
                .map_err(|e| RdfError::Io(e.to_string()))?;
            if read == 0 {
                return Ok(None);
            }
            self.line += 1;
            let start = self.offset;
            self.offset += read;
            let text = std::str::from_utf8(&self.buf)
                .map_err(|e| RdfError::InvalidUtf8(start + e.valid_up_to()))?;
            let text = text.trim_end_matches(['\n', '\r']);
            let Some((subject, predicate, object)) = parse_statement(text, self.line)? else {
                continue;
            };
            let slot = self.per_subject.entry(subject.lexical.clone()).or_insert(0);
            let doc_order = *slot;
            *slot += 1;
            return Ok(Some(Triple {
                subject,
                predicate,
                object,
                source_line: self.line,
                doc_order,
            }));
        }
    }
}

impl<R: BufRead> Iterator for NTriplesParser<R> {
    type Item = Result<Triple, RdfError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_statement() {
            Ok(Some(t)) => Some(Ok(t)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses a whole N-Triples stream, stopping at the first bad line.
pub fn parse_ntriples<R: BufRead>(input: R) -> Result<Vec<Triple>, RdfError> {
    NTriplesParser::new(input).collect()
}

/// Serializes triples one statement per line, LF-terminated.
pub fn write_ntriples(triples: &[Triple]) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&t.to_ntriples());
        out.push('\n');
    }
    out
}

fn parse_statement(
    text: &str,
    line: usize,
) -> Result<Option<(RdfTerm, RdfTerm, RdfTerm)>, RdfError> {
    let mut cur = Cursor::new(text, line);
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let subject = cur.term()?;
    if !subject.is_iri() {
        return Err(RdfError::malformed(line, "subject must be an IRI"));
    }
    cur.require_ws()?;
    let predicate = cur.term()?;
    if !predicate.is_iri() {
        return Err(RdfError::malformed(line, "predicate must be an IRI"));
    }
    cur.require_ws()?;
    let object = cur.term()?;
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(RdfError::malformed(line, "expected '.' after object"));
    }
    cur.bump();
    cur.skip_ws();
    if !cur.at_end() && cur.peek() != Some('#') {
        return Err(RdfError::malformed(line, "trailing characters after '.'"));
    }
    Ok(Some((subject, predicate, object)))
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.chars.next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
        }
    }

    fn require_ws(&mut self) -> Result<(), RdfError> {
        if !matches!(self.peek(), Some(' ' | '\t')) {
            return Err(self.err("expected whitespace between terms"));
        }
        self.skip_ws();
        Ok(())
    }

    fn err(&self, reason: &str) -> RdfError {
        RdfError::malformed(self.line, reason)
    }

    fn term(&mut self) -> Result<RdfTerm, RdfError> {
        match self.peek() {
            Some('<') => self.iri().map(RdfTerm::iri),
            Some('"') => self.literal(),
            Some('_') => Err(self.err("blank nodes are not supported")),
            Some(_) => Err(self.err("expected '<' or '\"'")),
            None => Err(self.err("unexpected end of line")),
        }
    }

    fn iri(&mut self) -> Result<String, RdfError> {
        self.bump();
        let mut out = String::new();
        loop {
            let c = match self.bump() {
                None => return Err(self.err("unterminated IRI")),
                Some('>') => break,
                Some('\\') => {
                    let c = self.escape(false)?;
                    if forbidden_in_iri(c) {
                        return Err(self.err("escaped character not allowed in IRI"));
                    }
                    c
                }
                Some(c) if forbidden_in_iri(c) => {
                    return Err(self.err("character not allowed in IRI"));
                }
                Some(c) => c,
            };
            out.push(c);
        }
        if out.is_empty() {
            return Err(self.err("empty IRI"));
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<RdfTerm, RdfError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated literal")),
                Some('"') => break,
                Some('\\') => out.push(self.escape(true)?),
                Some('\n' | '\r') => return Err(self.err("raw line break in literal")),
                Some(c) => out.push(c),
            }
        }
        // Annotations are validated but not kept.
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() || !tag.chars().next().unwrap().is_ascii_alphabetic() {
                    return Err(self.err("malformed language tag"));
                }
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') || self.peek() != Some('<') {
                    return Err(self.err("malformed datatype annotation"));
                }
                self.iri()?;
            }
            _ => {}
        }
        Ok(RdfTerm::literal(out))
    }

    fn escape(&mut self, in_literal: bool) -> Result<char, RdfError> {
        let c = self.bump().ok_or_else(|| self.err("dangling escape"))?;
        let simple = match c {
            'u' => return self.hex_escape(4),
            'U' => return self.hex_escape(8),
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            _ => return Err(self.err("unknown escape sequence")),
        };
        if !in_literal {
            return Err(self.err("only \\u and \\U escapes are allowed in IRIs"));
        }
        Ok(simple)
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.err("bad hex digit in escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.err("escape is not a Unicode scalar value"))
    }
}

fn forbidden_in_iri(c: char) -> bool {
    (c as u32) <= 0x20 || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

/// Maps a term to the token used for topic modelling and matching.
///
/// IRIs keep the part after the last `#`, or failing that the last `/`,
/// lowercased. Literals are lowercased with whitespace runs collapsed to a
/// single space and trimmed.
pub fn normalize_term(term: &RdfTerm) -> Result<String, RdfError> {
    let token = match term.kind {
        TermKind::Iri => {
            let lex = term.lexical.as_str();
            let tail = match lex.rfind('#') {
                Some(i) => &lex[i + 1..],
                None => match lex.rfind('/') {
                    Some(i) => &lex[i + 1..],
                    None => lex,
                },
            };
            tail.to_lowercase()
        }
        TermKind::Literal => normalize_text(&term.lexical),
    };
    if token.is_empty() {
        return Err(RdfError::EmptyToken(term.lexical.clone()));
    }
    Ok(token)
}

/// Token for building documents and matching. Like [`normalize_term`], but
/// an IRI whose tail is empty (`http://example.org/`) retries without the
/// trailing `/` or `#` characters, then falls back to the whole lowercased
/// IRI. Returns `None` only for blank literals.
pub fn term_token(term: &RdfTerm) -> Option<String> {
    match normalize_term(term) {
        Ok(t) => Some(t),
        Err(_) if term.is_iri() => {
            let trimmed = term.lexical.trim_end_matches(['/', '#']);
            normalize_term(&RdfTerm::iri(trimmed))
                .ok()
                .or_else(|| Some(term.lexical.to_lowercase()))
        }
        Err(_) => None,
    }
}

/// Literal rule on bare text: lowercase, collapse whitespace, trim.
pub fn normalize_text(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Normalizes a value from a TSV column: `<iri>` and `"literal"` forms are
/// parsed as terms, anything else is treated as literal text.
pub fn normalize_field(field: &str) -> Result<String, RdfError> {
    let trimmed = field.trim();
    if trimmed.starts_with('<') || trimmed.starts_with('"') {
        if let Ok(term) = RdfTerm::parse(trimmed) {
            return term_token(&term).ok_or_else(|| RdfError::EmptyToken(field.to_string()));
        }
    }
    let token = normalize_text(trimmed);
    if token.is_empty() {
        return Err(RdfError::EmptyToken(field.to_string()));
    }
    Ok(token)
}

/// Object token → category tokens, duplicates removed, first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryMap {
    entries: HashMap<String, IndexSet<String>>,
}

impl CategoryMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, object: impl Into<String>, category: impl Into<String>) {
        self.entries
            .entry(object.into())
            .or_default()
            .insert(category.into());
    }

    /// Categories of `token`; empty for unknown tokens.
    pub fn categories(&self, token: &str) -> Vec<&str> {
        self.entries
            .get(token)
            .map(|set| set.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    pub fn category_count(&self, token: &str) -> usize {
        self.entries.get(token).map_or(0, IndexSet::len)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads `object<TAB>category` lines. Blank lines and `#` comments are skipped.
pub fn load_category_map<R: BufRead>(input: R) -> Result<CategoryMap, RdfError> {
    let mut map = CategoryMap::new();
    for (idx, line) in input.split(b'\n').enumerate() {
        let line_no = idx + 1;
        let bytes = line.map_err(|e| RdfError::Io(e.to_string()))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| RdfError::malformed(line_no, "invalid UTF-8"))?;
        let text = text.trim_end_matches('\r');
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        let mut parts = text.split('\t');
        let (Some(object), Some(category), None) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(RdfError::malformed(line_no, "expected exactly one tab"));
        };
        let object =
            normalize_field(object).map_err(|e| RdfError::malformed(line_no, e.to_string()))?;
        let category =
            normalize_field(category).map_err(|e| RdfError::malformed(line_no, e.to_string()))?;
        map.insert(object, category);
    }
    Ok(map)
}
