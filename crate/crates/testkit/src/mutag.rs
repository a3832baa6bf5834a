//! Small molecule graph in the shape of the carcinogenesis dataset.
//!
//! Molecules have atoms (`hasAtom`) with a `charge` literal and an atom
//! class (`type`), bonds (`hasBond`) with an `inBond` literal, and an
//! `isMutagenic` link to a label resource.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{RawTerm, RawTriple, XSD_DOUBLE};

pub const NS: &str = "http://dl-learner.org/carcinogenesis#";

pub fn iri(local: &str) -> String {
    format!("{NS}{local}")
}

/// Number of values a literal path is built to yield for one molecule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Missing,
    Single,
    Many(usize),
}

impl Shape {
    fn of(n: usize) -> Shape {
        match n {
            0 => Shape::Missing,
            1 => Shape::Single,
            n => Shape::Many(n),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MutagGraph {
    pub triples: Vec<RawTriple>,
    pub molecules: Vec<String>,
    /// Per molecule: shape of `[hasAtom, charge]`.
    pub charge_shapes: Vec<Shape>,
    /// Per molecule: shape of `[hasBond, inBond]`.
    pub bond_shapes: Vec<Shape>,
    /// Per molecule: the charges in insertion order.
    pub charges: Vec<Vec<f64>>,
}

impl MutagGraph {
    pub fn has_atom() -> String {
        iri("hasAtom")
    }
    pub fn charge() -> String {
        iri("charge")
    }
    pub fn has_bond() -> String {
        iri("hasBond")
    }
    pub fn in_bond() -> String {
        iri("inBond")
    }
    pub fn is_mutagenic() -> String {
        iri("isMutagenic")
    }
}

/// Molecule `i` gets `i % 3` charged atoms plus one uncharged atom when
/// `i % 4 == 0`, and `(i + 1) % 3` bonds, so every Missing/Single/Many
/// combination occurs among the first dozen molecules.
pub fn mutag_graph(molecules: usize, seed: u64) -> MutagGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = ["Carbon", "Oxygen", "Nitrogen", "Hydrogen"];
    let mut g = MutagGraph {
        triples: Vec::new(),
        molecules: Vec::new(),
        charge_shapes: Vec::new(),
        bond_shapes: Vec::new(),
        charges: Vec::new(),
    };
    for m in 0..molecules {
        let mol = iri(&format!("d{m}"));
        let mol_term = RawTerm::iri(&mol);
        g.triples.push(RawTriple::new(mol_term.clone(), iri("type"), RawTerm::iri(iri("Compound"))));
        let label = if rng.gen_bool(0.5) { "true" } else { "false" };
        g.triples.push(RawTriple::new(mol_term.clone(), MutagGraph::is_mutagenic(), RawTerm::iri(iri(label))));

        let charged = m % 3;
        let uncharged = usize::from(m % 4 == 0);
        let mut charges = Vec::new();
        for a in 0..charged + uncharged {
            let atom = RawTerm::iri(iri(&format!("d{m}_{a}")));
            g.triples.push(RawTriple::new(mol_term.clone(), MutagGraph::has_atom(), atom.clone()));
            let class = classes[rng.gen_range(0..classes.len())];
            g.triples.push(RawTriple::new(atom.clone(), iri("type"), RawTerm::iri(iri(class))));
            if a < charged {
                let c = (rng.gen_range(-500..500) as f64) / 1000.0;
                charges.push(c);
                g.triples.push(RawTriple::new(atom, MutagGraph::charge(), RawTerm::typed(c.to_string(), XSD_DOUBLE)));
            }
        }
        let bonds = (m + 1) % 3;
        for b in 0..bonds {
            let bond = RawTerm::iri(iri(&format!("bond{m}_{b}")));
            g.triples.push(RawTriple::new(mol_term.clone(), MutagGraph::has_bond(), bond.clone()));
            g.triples.push(RawTriple::new(
                bond.clone(),
                iri("type"),
                RawTerm::iri(iri(&format!("Bond-{}", b % 2 + 1))),
            ));
            g.triples.push(RawTriple::new(
                bond,
                MutagGraph::in_bond(),
                RawTerm::literal(format!("{}", rng.gen_range(1..=3))),
            ));
        }
        g.molecules.push(mol);
        g.charge_shapes.push(Shape::of(charged));
        g.bond_shapes.push(Shape::of(bonds));
        g.charges.push(charges);
    }
    g
}
