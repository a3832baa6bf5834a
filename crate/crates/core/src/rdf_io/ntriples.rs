//! Streaming N-Triples reader.
//!
//! One statement per line. Comment lines and blank lines are skipped, string
//! escapes are decoded, and the first malformed line aborts the parse unless
//! the caller opts into [`parse_lenient`].

use std::io::BufRead;

use thiserror::Error;

use super::term::{is_valid_iri, Literal, LiteralKind, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based character column; 0 when the whole line is unreadable.
    pub column: usize,
    pub message: String,
}

/// Iterator over the triples of an N-Triples document.
pub struct NTriplesParser<R> {
    reader: R,
    line_no: usize,
    buf: Vec<u8>,
    failed: bool,
}

impl<R: BufRead> NTriplesParser<R> {
    pub fn new(reader: R) -> Self {
        NTriplesParser { reader, line_no: 0, buf: Vec::new(), failed: false }
    }
}

impl<R: BufRead> Iterator for NTriplesParser<R> {
    type Item = Result<Triple, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.failed = true;
                    return Some(Err(ParseError {
                        line: self.line_no + 1,
                        column: 0,
                        message: format!("read failed: {e}"),
                    }));
                }
            }
            self.line_no += 1;
            let line = match std::str::from_utf8(&self.buf) {
                Ok(s) => s,
                Err(e) => {
                    return Some(Err(ParseError {
                        line: self.line_no,
                        column: 0,
                        message: format!("invalid UTF-8: {e}"),
                    }))
                }
            };
            match parse_line(line) {
                Ok(None) => continue,
                Ok(Some(triple)) => return Some(Ok(triple)),
                Err((column, message)) => return Some(Err(ParseError { line: self.line_no, column, message })),
            }
        }
    }
}

/// Parses a whole document, stopping at the first malformed line.
pub fn parse_ntriples<R: BufRead>(source: R) -> Result<Vec<Triple>, ParseError> {
    NTriplesParser::new(source).collect()
}

/// Parses a document, skipping malformed lines. Returns the triples and the
/// errors for every skipped line.
pub fn parse_lenient<R: BufRead>(source: R) -> (Vec<Triple>, Vec<ParseError>) {
    let mut triples = Vec::new();
    let mut errors = Vec::new();
    for item in NTriplesParser::new(source) {
        match item {
            Ok(t) => triples.push(t),
            Err(e) => errors.push(e),
        }
    }
    (triples, errors)
}

pub fn parse_str(source: &str) -> Result<Vec<Triple>, ParseError> {
    parse_ntriples(source.as_bytes())
}

/// Serializes triples back to N-Triples, one statement per line.
pub fn write_ntriples<W: std::io::Write>(mut out: W, triples: &[Triple]) -> std::io::Result<()> {
    for t in triples {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

type LineResult<T> = Result<T, (usize, String)>;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err<T>(&self, message: impl Into<String>) -> LineResult<T> {
        Err((self.column(), message.into()))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> LineResult<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of line")),
        }
    }

    fn hex_escape(&mut self, digits: usize) -> LineResult<char> {
        let start = self.column();
        let mut value = 0u32;
        for _ in 0..digits {
            match self.bump().and_then(|c| c.to_digit(16)) {
                Some(d) => value = value * 16 + d,
                None => return Err((start, format!("expected {digits} hex digits in escape"))),
            }
        }
        char::from_u32(value).ok_or((start, format!("escape U+{value:X} is not a scalar value")))
    }

    fn iri(&mut self) -> LineResult<String> {
        let start = self.column();
        self.expect('<')?;
        let mut iri = String::new();
        loop {
            match self.bump() {
                None => return Err((start, "unterminated IRI".into())),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => iri.push(self.hex_escape(4)?),
                    Some('U') => iri.push(self.hex_escape(8)?),
                    _ => return self.err("invalid escape in IRI"),
                },
                Some(c) => iri.push(c),
            }
        }
        if !is_valid_iri(&iri) {
            return Err((start, format!("invalid IRI <{iri}>")));
        }
        if !has_scheme(&iri) {
            return Err((start, format!("relative IRI <{iri}>")));
        }
        Ok(iri)
    }

    fn blank_node(&mut self) -> LineResult<String> {
        self.expect('_')?;
        self.expect(':')?;
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphanumeric() || c == '_' => {}
            _ => return self.err("invalid blank node label"),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                self.pos += 1;
            } else {
                break;
            }
        }
        // A trailing '.' belongs to the statement terminator.
        while self.pos > start + 1 && self.chars[self.pos - 1] == '.' {
            self.pos -= 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn literal(&mut self) -> LineResult<Literal> {
        let start = self.column();
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err((start, "unterminated string literal".into())),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return Err((self.pos, "invalid string escape".into())),
                    };
                    lexical.push(c);
                }
                Some(c @ ('\n' | '\r')) => return Err((self.pos, format!("raw {c:?} inside string literal"))),
                Some(c) => lexical.push(c),
            }
        }
        let kind = match self.peek() {
            Some('^') => {
                self.pos += 1;
                self.expect('^')?;
                LiteralKind::Typed(self.iri()?)
            }
            Some('@') => {
                self.pos += 1;
                LiteralKind::Lang(self.lang_tag()?)
            }
            _ => LiteralKind::Plain,
        };
        Ok(Literal { lexical, kind })
    }

    fn lang_tag(&mut self) -> LineResult<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("empty language tag");
        }
        while self.peek() == Some('-') {
            self.pos += 1;
            let sub = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                self.pos += 1;
            }
            if self.pos == sub {
                return self.err("empty language subtag");
            }
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn subject(&mut self) -> LineResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') => Ok(Term::BlankNode(self.blank_node()?)),
            Some(_) => self.err("subject must be an IRI or blank node"),
            None => self.err("missing subject"),
        }
    }

    fn predicate(&mut self) -> LineResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some(_) => self.err("predicate must be an IRI"),
            None => self.err("missing predicate"),
        }
    }

    fn object(&mut self) -> LineResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') => Ok(Term::BlankNode(self.blank_node()?)),
            Some('"') => Ok(Term::Literal(self.literal()?)),
            Some('.') | None => self.err("missing object"),
            Some(c) => self.err(format!("unexpected '{c}' at start of object")),
        }
    }
}

/// `scheme ":"` prefix as required of absolute IRIs.
fn has_scheme(iri: &str) -> bool {
    match iri.split_once(':') {
        Some((scheme, _)) => {
            let mut chars = scheme.chars();
            chars.next().is_some_and(|c| c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        None => false,
    }
}

fn parse_line(line: &str) -> LineResult<Option<Triple>> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut cur = Cursor { chars: line.chars().collect(), pos: 0 };
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }
    let subject = cur.subject()?;
    cur.skip_ws();
    let predicate = cur.predicate()?;
    cur.skip_ws();
    let object = cur.object()?;
    cur.skip_ws();
    cur.expect('.')?;
    cur.skip_ws();
    match cur.peek() {
        None | Some('#') => {}
        Some(c) => return cur.err(format!("trailing content '{c}' after statement")),
    }
    Ok(Some(Triple { subject, predicate, object }))
}
