//! Literal values reached along fixed predicate paths.

use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::graph::{Direction, GraphError, HopSource, VertexId};
use crate::parallel;
use crate::rdf_io::{Literal, Term};

/// Predicate IRIs followed from a seed. All but the last are traversed as
/// forward hops; the last selects literal objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LiteralPath {
    pub predicates: Vec<String>,
}

impl LiteralPath {
    /// `None` for an empty path.
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(predicates: I) -> Option<Self> {
        let predicates: Vec<String> = predicates.into_iter().map(Into::into).collect();
        (!predicates.is_empty()).then_some(LiteralPath { predicates })
    }

    /// Column name: predicates joined with `.`.
    pub fn name(&self) -> String {
        self.predicates.join(".")
    }
}

impl fmt::Display for LiteralPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicates.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LiteralValue {
    Number(f64),
    Text(String),
}

fn numeric_grammar() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?$").unwrap())
}

impl LiteralValue {
    /// Numeric when the lexical form is a decimal or scientific-notation
    /// number; the datatype is ignored.
    pub fn from_lexical(lexical: &str) -> Self {
        let trimmed = lexical.trim();
        if numeric_grammar().is_match(trimmed) {
            if let Ok(x) = trimmed.parse::<f64>() {
                if x.is_finite() {
                    return LiteralValue::Number(x);
                }
            }
        }
        LiteralValue::Text(lexical.to_owned())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            LiteralValue::Number(x) => Some(*x),
            LiteralValue::Text(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            LiteralValue::Number(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            LiteralValue::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<&Literal> for LiteralValue {
    fn from(l: &Literal) -> Self {
        LiteralValue::from_lexical(&l.lexical)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LiteralResult {
    Missing,
    Single(LiteralValue),
    /// Two or more values in graph insertion order.
    Many(Vec<LiteralValue>),
}

impl LiteralResult {
    pub fn from_values(mut values: Vec<LiteralValue>) -> Self {
        match values.len() {
            0 => LiteralResult::Missing,
            1 => LiteralResult::Single(values.pop().unwrap()),
            _ => LiteralResult::Many(values),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LiteralResult::Missing => 0,
            LiteralResult::Single(_) => 1,
            LiteralResult::Many(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.is_missing()
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, LiteralResult::Missing)
    }

    pub fn values(&self) -> &[LiteralValue] {
        match self {
            LiteralResult::Missing => &[],
            LiteralResult::Single(v) => std::slice::from_ref(v),
            LiteralResult::Many(v) => v,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            LiteralResult::Missing => Value::Null,
            LiteralResult::Single(v) => v.to_json(),
            LiteralResult::Many(vs) => Value::Array(vs.iter().map(LiteralValue::to_json).collect()),
        }
    }
}

/// Seeds × paths matrix of extracted values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LiteralTable {
    pub seeds: Vec<Term>,
    pub paths: Vec<LiteralPath>,
    /// One row per seed, one cell per path.
    pub rows: Vec<Vec<LiteralResult>>,
}

impl LiteralTable {
    pub fn get(&self, seed: usize, path: usize) -> &LiteralResult {
        &self.rows[seed][path]
    }

    /// Array of row objects: `{"entity": <seed>, "<path name>": value, ...}`
    /// with `null` for missing values and arrays for multiple values.
    pub fn to_json(&self) -> Value {
        let rows = self
            .seeds
            .iter()
            .zip(&self.rows)
            .map(|(seed, row)| {
                let mut obj = Map::new();
                obj.insert("entity".into(), Value::String(seed.token()));
                for (path, cell) in self.paths.iter().zip(row) {
                    obj.insert(path.name(), cell.to_json());
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

fn follow<S: HopSource + ?Sized>(source: &S, root: VertexId, path: &LiteralPath) -> Result<LiteralResult, GraphError> {
    let (last, steps) = path.predicates.split_last().expect("literal paths are non-empty");
    let mut frontier = vec![root];
    for step in steps {
        if source.wants_prefetch() {
            let terms: Vec<Term> = frontier.iter().map(|&v| source.vertex_term(v)).collect();
            source.prefetch(&terms, Direction::Forward)?;
        }
        let mut next = Vec::new();
        for &v in &frontier {
            for hop in source.hops(v, Direction::Forward)?.iter() {
                if *source.predicate_token(hop.predicate) == **step {
                    next.push(hop.target);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            return Ok(LiteralResult::Missing);
        }
    }
    let mut values = Vec::new();
    for &v in &frontier {
        values.extend(source.literals(v, last)?.iter().map(LiteralValue::from));
    }
    Ok(LiteralResult::from_values(values))
}

/// Follows every path from every seed over all matching branches.
///
/// Seeds that are not in the graph and paths that cannot be realized yield
/// [`LiteralResult::Missing`].
pub fn extract_literals<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    paths: &[LiteralPath],
    workers: usize,
) -> Result<LiteralTable, GraphError> {
    let rows = parallel::map_indexed(seeds, workers, |_, seed| -> Result<Vec<LiteralResult>, GraphError> {
        let Some(root) = source.resolve(seed)? else {
            return Ok(vec![LiteralResult::Missing; paths.len()]);
        };
        paths.iter().map(|p| follow(source, root, p)).collect()
    });
    Ok(LiteralTable { seeds: seeds.to_vec(), paths: paths.to_vec(), rows: rows.into_iter().collect::<Result<_, _>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::KnowledgeGraph;
    use crate::rdf_io::Triple;

    fn iri(s: &str) -> Term {
        Term::iri(format!("http://ex/{s}"))
    }

    fn path(ps: &[&str]) -> LiteralPath {
        LiteralPath::new(ps.iter().map(|p| format!("http://ex/{p}"))).unwrap()
    }

    fn graph() -> KnowledgeGraph {
        let e = |s: &str, p: &str, o: &str| Triple::new(iri(s), iri(p), iri(o)).unwrap();
        let l = |s: &str, p: &str, v: &str| Triple::new(iri(s), iri(p), Term::Literal(Literal::plain(v))).unwrap();
        KnowledgeGraph::build(
            vec![
                e("m1", "hasAtom", "a1"),
                l("a1", "charge", "0.12"),
                e("m2", "hasAtom", "a2"),
                e("m2", "hasAtom", "a3"),
                l("a2", "charge", "0.1"),
                l("a3", "charge", "0.2"),
                l("m3", "name", "benzene"),
            ],
            Vec::<String>::new(),
        )
    }

    #[test]
    fn single_many_and_missing() {
        let g = graph();
        let seeds = [iri("m1"), iri("m2"), iri("m3"), iri("absent")];
        let paths = [path(&["hasAtom", "charge"]), path(&["name"])];
        let t = extract_literals(&g, &seeds, &paths, 1).unwrap();
        assert_eq!(t.get(0, 0), &LiteralResult::Single(LiteralValue::Number(0.12)));
        assert_eq!(t.get(1, 0), &LiteralResult::Many(vec![LiteralValue::Number(0.1), LiteralValue::Number(0.2)]));
        assert!(t.get(2, 0).is_missing());
        assert_eq!(t.get(2, 1), &LiteralResult::Single(LiteralValue::Text("benzene".into())));
        assert!(t.get(3, 0).is_missing() && t.get(3, 1).is_missing());
        assert_eq!(extract_literals(&g, &seeds, &paths, 4).unwrap(), t);
    }

    #[test]
    fn json_layout() {
        let g = graph();
        let t = extract_literals(&g, &[iri("m2"), iri("m3")], &[path(&["hasAtom", "charge"])], 1).unwrap();
        let json = t.to_json();
        assert_eq!(
            json,
            serde_json::json!([
                {"entity": "http://ex/m2", "http://ex/hasAtom.http://ex/charge": [0.1, 0.2]},
                {"entity": "http://ex/m3", "http://ex/hasAtom.http://ex/charge": null},
            ])
        );
    }

    #[test]
    fn numeric_detection_is_lexical() {
        for (s, numeric) in [
            ("1", true),
            ("-2.5e-3", true),
            (".5", true),
            ("+7.", true),
            ("1e400", false),
            ("NaN", false),
            ("inf", false),
            ("0x10", false),
            ("1,5", false),
            ("", false),
            ("e5", false),
        ] {
            assert_eq!(LiteralValue::from_lexical(s).as_f64().is_some(), numeric, "{s:?}");
        }
    }
}
