//! Presentations of subgroups read off `Γ(H)` by restricted
//! Reidemeister–Schreier rewriting, with basic Tietze elimination.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::amalgam::Amalgam;
use crate::graph::{LabelledGraph, NONE};
use crate::word::{Letter, Word};

/// BFS spanning tree from the basepoint, scanning letters in index order.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    /// Positive edge indices in the tree.
    pub tree_edges: Vec<usize>,
    /// Label of the tree path from the basepoint to each vertex.
    pub approach: Vec<Word>,
    /// Non-tree positive edges in discovery order.
    pub non_tree: Vec<usize>,
    /// `(vertex, letter index) -> positive edge index`.
    edge_at: Vec<usize>,
    /// Generator number of each non-tree edge.
    generator_of: Vec<Option<usize>>,
    width: usize,
}

impl SpanningTree {
    pub fn new(g: &LabelledGraph) -> Self {
        let width = 2 * g.num_gens;
        let mut edge_at = vec![NONE; g.num_vertices * width];
        for (i, e) in g.edges.iter().enumerate() {
            edge_at[e.src * width + 2 * e.gen] = i;
            edge_at[e.dst * width + 2 * e.gen + 1] = i;
        }
        let t = g.transitions();
        let mut approach: Vec<Option<Word>> = vec![None; g.num_vertices];
        let mut in_tree = vec![false; g.edges.len()];
        let mut seen_edge = vec![false; g.edges.len()];
        let mut tree_edges = Vec::new();
        let mut non_tree = Vec::new();
        let mut generator_of = vec![None; g.edges.len()];
        approach[g.basepoint] = Some(Word::empty());
        let mut queue = VecDeque::from([g.basepoint]);
        while let Some(u) = queue.pop_front() {
            for l in 0..width {
                let Some(v) = t.get(u, l) else { continue };
                let e = edge_at[u * width + l];
                if approach[v].is_none() {
                    let mut w = approach[u].clone().expect("visited");
                    w.push(Letter::from_index(l));
                    approach[v] = Some(w);
                    in_tree[e] = true;
                    seen_edge[e] = true;
                    tree_edges.push(e);
                    queue.push_back(v);
                } else if !in_tree[e] && !seen_edge[e] {
                    seen_edge[e] = true;
                    generator_of[e] = Some(non_tree.len());
                    non_tree.push(e);
                }
            }
        }
        SpanningTree {
            tree_edges,
            approach: approach
                .into_iter()
                .map(|w| w.unwrap_or_default())
                .collect(),
            non_tree,
            edge_at,
            generator_of,
            width,
        }
    }

    /// `lab(t_{ι(e)} e t̄_{τ(e)})`, freely reduced.
    pub fn defining_word(&self, g: &LabelledGraph, e: usize) -> Word {
        let edge = g.edges[e];
        let mut w = self.approach[edge.src].clone();
        w.push(Letter::pos(edge.gen));
        w.concat(&self.approach[edge.dst].inverse()).free_reduce()
    }

    /// Rewrites the path labelled `w` starting at `start` as a word in the
    /// generators: tree edges vanish, non-tree edges become `h_k^{±1}`.
    /// `None` when the path does not exist.
    pub fn rewrite_from(&self, g: &LabelledGraph, start: usize, w: &Word) -> Option<Word> {
        let t = g.transitions();
        let mut v = start;
        let mut out = Word::empty();
        for &l in w.letters() {
            let next = t.step(v, l)?;
            let e = self.edge_at[v * self.width + l.index()];
            if let Some(k) = self.generator_of[e] {
                out.push(Letter {
                    gen: k,
                    inverse: l.inverse,
                });
            }
            v = next;
        }
        Some(out.free_reduce())
    }
}

/// `gp< generators | relators >` for a subgroup; relator letters index
/// `generators`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupPresentation {
    /// `(name, defining word over X)`.
    pub generators: Vec<(String, Word)>,
    pub relators: Vec<Word>,
}

impl SubgroupPresentation {
    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Substitutes defining words for generators.
    pub fn expand(&self, r: &Word) -> Word {
        let mut out = Word::empty();
        for &l in r.letters() {
            let w = &self.generators[l.gen].1;
            out = out.concat(&if l.inverse { w.inverse() } else { w.clone() });
        }
        out
    }

    pub fn display<'a>(&'a self, amalgam: &'a Amalgam) -> PresentationDisplay<'a> {
        PresentationDisplay { p: self, amalgam }
    }

    /// `gp< h1, h2 | r1, r2 >` on one line.
    pub fn header(&self) -> String {
        let names = self.names();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display_with(&names).to_string())
            .collect();
        if rels.is_empty() {
            format!("gp< {} | >", names.join(", "))
        } else {
            format!("gp< {} | {} >", names.join(", "), rels.join(", "))
        }
    }
}

pub struct PresentationDisplay<'a> {
    p: &'a SubgroupPresentation,
    amalgam: &'a Amalgam,
}

impl fmt::Display for PresentationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.p.header())?;
        for (name, w) in &self.p.generators {
            writeln!(f, "  {name} = {}", self.amalgam.show(w))?;
        }
        Ok(())
    }
}

/// Relator instances `(v, r)` such that `r` labels a closed path at `v`, for
/// every defining relator of `G`.
pub fn compute_qv(g: &LabelledGraph, amalgam: &Amalgam) -> Vec<(usize, Word)> {
    let t = g.transitions();
    let relators = amalgam.global_relators();
    let mut out = Vec::new();
    for v in 0..g.num_vertices {
        for r in &relators {
            if t.read(v, r).end() == Some(v) {
                out.push((v, r.clone()));
            }
        }
    }
    out
}

fn dedupe(relators: Vec<Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        let r = r.cyclic_reduce();
        if r.is_empty() {
            continue;
        }
        if seen.insert(r.cyclic_canonical()) {
            out.push(r);
        }
    }
    out
}

/// Raw presentation: generators from non-tree edges, relators from
/// rewriting every relator instance.
pub fn compute_presentation(g: &LabelledGraph, amalgam: &Amalgam) -> SubgroupPresentation {
    let tree = SpanningTree::new(g);
    let generators = tree
        .non_tree
        .iter()
        .enumerate()
        .map(|(k, &e)| (format!("h{}", k + 1), tree.defining_word(g, e)))
        .collect();
    let rewritten = compute_qv(g, amalgam)
        .into_iter()
        .filter_map(|(v, r)| tree.rewrite_from(g, v, &r))
        .collect();
    SubgroupPresentation {
        generators,
        relators: dedupe(rewritten),
    }
}

/// Eliminates generators occurring exactly once in some relator, until none
/// do. Relators are kept freely and cyclically reduced without duplicates.
pub fn tietze_simplify(p: &SubgroupPresentation) -> SubgroupPresentation {
    let mut alive: Vec<bool> = vec![true; p.generators.len()];
    let mut relators = dedupe(p.relators.clone());
    loop {
        let pick = relators.iter().enumerate().find_map(|(i, r)| {
            (0..p.generators.len())
                .rev()
                .find(|&g| r.occurrences(g) == 1)
                .map(|g| (i, g))
        });
        let Some((i, gen)) = pick else { break };
        let r = relators.remove(i);
        let pos = r.letters().iter().position(|l| l.gen == gen).expect("occurs");
        let rotated = r.rotate(pos);
        let first = rotated.letters()[0];
        let rest = Word::from_letters(rotated.letters()[1..].to_vec());
        // g^e u = 1, so g = u^-1 when e = +1 and g = u when e = -1.
        let value = if first.inverse { rest } else { rest.inverse() };
        let substitute = |w: &Word| {
            let mut out = Word::empty();
            for &l in w.letters() {
                if l.gen == gen {
                    out = out.concat(&if l.inverse {
                        value.inverse()
                    } else {
                        value.clone()
                    });
                } else {
                    out.push(l);
                }
            }
            out
        };
        relators = dedupe(relators.iter().map(substitute).collect());
        alive[gen] = false;
    }

    let mut new_index = vec![NONE; p.generators.len()];
    let mut generators = Vec::new();
    for (k, gen) in p.generators.iter().enumerate() {
        if alive[k] {
            new_index[k] = generators.len();
            generators.push(gen.clone());
        }
    }
    let relators = relators
        .into_iter()
        .map(|r| {
            Word::from_letters(
                r.letters()
                    .iter()
                    .map(|l| Letter {
                        gen: new_index[l.gen],
                        inverse: l.inverse,
                    })
                    .collect(),
            )
        })
        .collect();
    SubgroupPresentation {
        generators,
        relators,
    }
}
