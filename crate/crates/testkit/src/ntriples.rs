//! Generated N-Triples statements with their decoded meaning, and a fixed set
//! of malformed documents.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::{RawTerm, RawTriple};

/// Characters drawn for literal bodies; the first few need escaping.
const LITERAL_POOL: &[char] = &[
    '"',
    '\\',
    '\n',
    '\r',
    '\t',
    '\u{8}',
    '\u{c}',
    '\'',
    'a',
    'b',
    'z',
    'Q',
    '0',
    '9',
    ' ',
    '.',
    '#',
    '<',
    '>',
    '^',
    '@',
    '_',
    ':',
    'é',
    'ß',
    'λ',
    '中',
    '😀',
    '\u{10FFFF}',
];

const IRI_POOL: &[char] = &['a', 'k', 'z', 'A', '0', '7', '/', '#', '-', '.', '_', '~', '%', '=', '?', 'é', 'λ', '中'];

fn uchar(c: char) -> String {
    if (c as u32) <= 0xFFFF {
        format!("\\u{:04X}", c as u32)
    } else {
        format!("\\U{:08X}", c as u32)
    }
}

fn gen_iri<R: Rng>(rng: &mut R) -> (String, String) {
    let scheme = *["http", "https", "urn", "tag"].choose(rng).unwrap();
    let mut value = format!("{scheme}://ex.org/");
    let mut text = value.clone();
    for _ in 0..rng.gen_range(1..10) {
        let c = *IRI_POOL.choose(rng).unwrap();
        value.push(c);
        if !c.is_ascii() && rng.gen_bool(0.5) {
            text.push_str(&uchar(c));
        } else {
            text.push(c);
        }
    }
    (text, value)
}

fn gen_blank<R: Rng>(rng: &mut R) -> (String, String) {
    let mut label = String::from(*["b", "node", "x_", "B0"].choose(rng).unwrap());
    for _ in 0..rng.gen_range(0..4) {
        label.push(*['a', '1', '-', '_', '.', 'z'].choose(rng).unwrap());
    }
    while label.ends_with('.') {
        label.pop();
    }
    (format!("_:{label}"), label)
}

fn gen_literal<R: Rng>(rng: &mut R) -> (String, RawTerm) {
    let mut value = String::new();
    let mut text = String::from("\"");
    for _ in 0..rng.gen_range(0..12) {
        let c = *LITERAL_POOL.choose(rng).unwrap();
        value.push(c);
        let escaped = match c {
            '"' => "\\\"".to_string(),
            '\\' => "\\\\".to_string(),
            '\n' => "\\n".to_string(),
            '\r' => "\\r".to_string(),
            '\t' if rng.gen_bool(0.5) => "\\t".to_string(),
            '\u{8}' => "\\b".to_string(),
            '\u{c}' => "\\f".to_string(),
            '\'' if rng.gen_bool(0.5) => "\\'".to_string(),
            other if rng.gen_bool(0.2) => uchar(other),
            other => other.to_string(),
        };
        text.push_str(&escaped);
    }
    text.push('"');
    let (datatype, lang) = match rng.gen_range(0..3) {
        0 => (None, None),
        1 => {
            let (iri_text, iri) = gen_iri(rng);
            text.push_str(&format!("^^<{iri_text}>"));
            (Some(iri), None)
        }
        _ => {
            let tag = *["en", "de", "en-US", "zh-Hant-TW", "x-a1"].choose(rng).unwrap();
            text.push('@');
            text.push_str(tag);
            (None, Some(tag.to_string()))
        }
    };
    (text, RawTerm::Literal { lexical: value, datatype, lang })
}

fn gap<R: Rng>(rng: &mut R) -> &'static str {
    ["", " ", "  ", "\t", " \t "].choose(rng).unwrap()
}

/// One well-formed statement line (no trailing newline) and the triple it
/// denotes. Lines mix escaped and literal characters, blank nodes, typed and
/// language-tagged literals, irregular whitespace and trailing comments.
pub fn random_statement<R: Rng>(rng: &mut R) -> (String, RawTriple) {
    let (s_text, s) = if rng.gen_bool(0.25) {
        let (t, l) = gen_blank(rng);
        (t, RawTerm::Blank(l))
    } else {
        let (t, v) = gen_iri(rng);
        (format!("<{t}>"), RawTerm::Iri(v))
    };
    let (p_text, p) = gen_iri(rng);
    let (o_text, o) = match rng.gen_range(0..4) {
        0 => {
            let (t, v) = gen_iri(rng);
            (format!("<{t}>"), RawTerm::Iri(v))
        }
        1 => {
            let (t, l) = gen_blank(rng);
            (t, RawTerm::Blank(l))
        }
        _ => gen_literal(rng),
    };
    // The separator before '.' must not be empty after a blank node label.
    let before_dot = if matches!(o, RawTerm::Blank(_)) { " " } else { gap(rng) };
    let mut line = format!(
        "{}{s_text} {}<{p_text}>{}{o_text}{before_dot}.{}",
        gap(rng),
        gap(rng),
        if matches!(s, RawTerm::Blank(_)) || rng.gen_bool(0.5) { " " } else { gap(rng) },
        gap(rng)
    );
    if rng.gen_bool(0.1) {
        line.push_str("# trailing comment");
    }
    (line, RawTriple { s, p, o })
}

/// Documents with exactly one bad statement, paired with its 1-based line
/// number.
pub fn malformed_documents() -> Vec<(String, usize)> {
    let ok = "<http://ex/a> <http://ex/p> <http://ex/b> .";
    let bad = [
        "<http://ex/a> <http://ex/p> .",
        "<http://ex/a> <http://ex/p> <http://ex/b>",
        "<http://ex/a <http://ex/p> <http://ex/b> .",
        "<http://ex/a> <http://ex/p> \"open .",
        "\"lit\" <http://ex/p> <http://ex/b> .",
        "<http://ex/a> \"lit\" <http://ex/b> .",
        "<http://ex/a> _:p <http://ex/b> .",
        "<http://ex/a> <http://ex/p> \"bad \\q escape\" .",
        "<http://ex/a> <http://ex/p> \"\\u12G4\" .",
        "<http://ex/a b> <http://ex/p> <http://ex/b> .",
        "<http://ex/a> <http://ex/p> <http://ex/b> . extra",
        "<http://ex/a> <http://ex/p> \"x\"@ .",
        "<http://ex/a> <http://ex/p> \"x\"^^xsd:string .",
        "_: <http://ex/p> <http://ex/b> .",
        "<http://ex/a> <http://ex/p> <http://ex/b> <http://ex/c> .",
        "<relative> <http://ex/p> <http://ex/b> .",
        "<http://ex/a> <http://ex/p> \"a\"b\" .",
        "<http://ex/a> <http://ex/p> \"x\"^^ .",
        "<http://ex/a> <http://ex/p> <http://ex/b> ;",
        "<http://ex/a> <http://ex/p> \"x\"@en- .",
    ];
    bad.iter()
        .enumerate()
        .map(|(i, line)| {
            let before = i % 4;
            let mut doc = String::new();
            for k in 0..before {
                if k == 1 {
                    doc.push_str("# comment\n\n");
                }
                doc.push_str(ok);
                doc.push('\n');
            }
            let line_no = doc.lines().count() + 1;
            doc.push_str(line);
            doc.push('\n');
            doc.push_str(ok);
            doc.push('\n');
            (doc, line_no)
        })
        .collect()
}
