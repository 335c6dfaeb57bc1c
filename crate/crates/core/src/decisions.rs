//! Triviality, freeness, torsion-freeness and index, read off `Γ(H)`.

use std::fmt;

use crate::amalgam::{Amalgam, Factor};
use crate::graph::{classify, LabelledGraph};
use crate::word::{Letter, Word};

/// `[G:H]`, finite or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    /// A vertex missing some letter, and a word `w'` leaving the graph there
    /// (the tree path to the vertex followed by escape letters).
    Infinite { witness: usize, escape: Word },
}

impl Index {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Index::Finite(k) => Some(*k),
            Index::Infinite { .. } => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(k) => write!(f, "{k}"),
            Index::Infinite { witness, .. } => write!(f, "infinite (witness: v{witness})"),
        }
    }
}

/// Freeness verdict with the first component that is not a full Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionReport {
    pub trivial: bool,
    pub free: bool,
    pub torsion_free: bool,
    pub index: Index,
    pub free_witness: Option<usize>,
}

pub fn is_trivial(g: &LabelledGraph) -> bool {
    g.is_trivial()
}

/// Free iff every monochromatic component has `|G_i|` vertices.
pub fn is_free(g: &LabelledGraph, amalgam: &Amalgam) -> FreenessReport {
    let report = classify(g, amalgam);
    let witness = report
        .components
        .iter()
        .position(|c| c.vertices.len() != amalgam.order(c.factor));
    FreenessReport {
        free: witness.is_none(),
        witness,
    }
}

/// Same criterion as [`is_free`].
pub fn is_torsion_free(g: &LabelledGraph, amalgam: &Amalgam) -> bool {
    is_free(g, amalgam).free
}

/// `|V|` when every vertex reads every letter; otherwise infinite with the
/// first unsaturated vertex.
pub fn index(g: &LabelledGraph, amalgam: &Amalgam) -> Index {
    let Some((witness, _)) = g.unsaturated_vertex(0..2 * g.num_gens) else {
        return Index::Finite(g.num_vertices);
    };
    Index::Infinite {
        witness,
        escape: escape_word(g, amalgam, witness),
    }
}

/// Tree path to `v` followed by a letter of the missing factor not in `A`,
/// and then a letter of the other factor not in `A`. No proper power of the
/// resulting element reads back to the basepoint.
fn escape_word(g: &LabelledGraph, amalgam: &Amalgam, v: usize) -> Word {
    let tree = crate::subgroup_presentation::SpanningTree::new(g);
    let t = g.transitions();
    let missing = Factor::both()
        .into_iter()
        .find(|&f| !t.has_letter_in(v, amalgam.letters_of(f)))
        .unwrap_or(Factor::One);
    let outside_a = |f: Factor| {
        amalgam.gens_of(f).find(|&gen| {
            let e = amalgam.eval_in(f, &Word::from_letters(vec![Letter::pos(gen)]));
            amalgam.edge.locate(f, e).is_none()
        })
    };
    let mut w = tree.approach[v].clone();
    for f in [missing, missing.other()] {
        if let Some(gen) = outside_a(f) {
            w.push(Letter::pos(gen));
        }
    }
    w
}

pub fn decide(g: &LabelledGraph, amalgam: &Amalgam) -> DecisionReport {
    let free = is_free(g, amalgam);
    DecisionReport {
        trivial: is_trivial(g),
        free: free.free,
        torsion_free: free.free,
        index: index(g, amalgam),
        free_witness: free.witness,
    }
}
