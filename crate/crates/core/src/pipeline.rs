//! The generalized folding algorithm producing `Γ(H)`, precover checks and
//! membership.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::amalgam::{Amalgam, Factor};
use crate::graph::{
    classify, component_matches_table, cut_hairs, fold_with, Colour, Folded, LabelledGraph,
};
use crate::normal_form::normal_form;
use crate::word::Word;

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Randomises folding and identification order; the result is the same
    /// up to isomorphism.
    pub order_seed: Option<u64>,
    /// Keep a snapshot after every step.
    pub trace: bool,
}

/// `Γ(H)` with its basepoint at vertex 0.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    pub graph: LabelledGraph,
    pub generators: Vec<Word>,
    pub trace: Vec<(String, LabelledGraph)>,
}

impl SubgroupGraph {
    pub fn basepoint(&self) -> usize {
        self.graph.basepoint
    }
}

pub(crate) struct Orderer {
    rng: Option<StdRng>,
}

impl Orderer {
    pub(crate) fn new(seed: Option<u64>) -> Self {
        Orderer {
            rng: seed.map(StdRng::seed_from_u64),
        }
    }

    pub(crate) fn fold(&mut self, g: &LabelledGraph, pairs: &[(usize, usize)]) -> Folded {
        match self.rng.as_mut() {
            Some(rng) => {
                let mut pairs = pairs.to_vec();
                pairs.shuffle(rng);
                fold_with(g, &pairs, Some(rng))
            }
            None => fold_with(g, pairs, None),
        }
    }
}

/// One subdivided loop at the basepoint per generator.
pub fn build_bouquet(num_gens: usize, generators: &[Word]) -> LabelledGraph {
    let mut g = LabelledGraph::trivial(num_gens);
    for w in generators {
        g.add_path(0, w, 0);
    }
    g
}

/// Folds and cuts hairs: the free-group Stallings graph.
pub fn step2_fold_and_trim(g: &LabelledGraph) -> LabelledGraph {
    step2_with(g, &mut Orderer::new(None))
}

fn step2_with(g: &LabelledGraph, ord: &mut Orderer) -> LabelledGraph {
    let folded = ord.fold(g, &[]).graph;
    cut_hairs(&folded).0
}

/// Whether the component is saturated in its factor and every relator of the
/// factor closes at each of its vertices.
fn component_is_cover(
    t: &crate::graph::Transitions,
    vertices: &[usize],
    f: Factor,
    amalgam: &Amalgam,
) -> bool {
    let letters = amalgam.letters_of(f);
    let relators = &amalgam.model(f).presentation.relators;
    vertices.iter().all(|&v| {
        letters.clone().all(|l| t.get(v, l).is_some())
            && relators
                .iter()
                .all(|r| t.read(v, &amalgam.globalize(f, r)).end() == Some(v))
    })
}

/// Glues a copy of `Cayley(G_i)` at the initial vertex of the lowest edge of
/// every monochromatic component, then folds.
pub fn step3_glue_cayley(g: &LabelledGraph, amalgam: &Amalgam) -> LabelledGraph {
    step3_with(g, amalgam, &mut Orderer::new(None))
}

fn step3_with(g: &LabelledGraph, amalgam: &Amalgam, ord: &mut Orderer) -> LabelledGraph {
    let mut g = g.clone();
    let mut first = true;
    loop {
        let report = classify(&g, amalgam);
        let t = g.transitions();
        let targets: Vec<(Factor, usize)> = report
            .components
            .iter()
            .filter(|c| first || !component_is_cover(&t, &c.vertices, c.factor, amalgam))
            .map(|c| (c.factor, g.edges[c.edges[0]].src))
            .collect();
        first = false;
        if targets.is_empty() {
            return g;
        }
        let mut glued = g.clone();
        let mut pairs = Vec::new();
        for (f, v) in targets {
            let cay = cayley_graph(amalgam, f, &[]);
            let off = glued.num_vertices;
            glued.num_vertices += cay.num_vertices;
            glued.edges.extend(cay.edges.iter().map(|e| crate::graph::Edge {
                src: e.src + off,
                gen: e.gen,
                dst: e.dst + off,
            }));
            pairs.push((v, off));
        }
        g = ord.fold(&glued, &pairs).graph;
    }
}

/// `Cayley(G_f, phi_f(K))` over the global alphabet, basepoint `K·1`.
pub fn cayley_graph(amalgam: &Amalgam, f: Factor, k: &[usize]) -> LabelledGraph {
    let table = if k.is_empty() {
        amalgam.relative_cayley_edge(f, &[0])
    } else {
        amalgam.relative_cayley_edge(f, k)
    };
    LabelledGraph::from_coset_table(&table, amalgam.offset(f), amalgam.num_gens())
}

/// Vertex pairs `(v·phi1(a), v·phi2(a))` that differ, over bichromatic `v`.
fn incompatible_pairs(g: &LabelledGraph, amalgam: &Amalgam) -> Vec<(usize, usize)> {
    let report = classify(g, amalgam);
    let t = g.transitions();
    let words: Vec<[Word; 2]> = (1..amalgam.edge.order())
        .map(|a| {
            [
                amalgam.spell_edge(a, Factor::One),
                amalgam.spell_edge(a, Factor::Two),
            ]
        })
        .collect();
    let mut pairs = Vec::new();
    for v in report.bichromatic() {
        for [w1, w2] in &words {
            if let (Some(u1), Some(u2)) = (t.read(v, w1).end(), t.read(v, w2).end()) {
                if u1 != u2 {
                    pairs.push((u1, u2));
                }
            }
        }
    }
    pairs
}

/// Identifies `v·phi1(a)` with `v·phi2(a)` at bichromatic vertices and folds,
/// until nothing changes.
pub fn step4_compatibility(g: &LabelledGraph, amalgam: &Amalgam) -> LabelledGraph {
    step4_with(g, amalgam, &mut Orderer::new(None))
}

fn step4_with(g: &LabelledGraph, amalgam: &Amalgam, ord: &mut Orderer) -> LabelledGraph {
    let mut g = g.clone();
    loop {
        let pairs = incompatible_pairs(&g, amalgam);
        if pairs.is_empty() {
            return g;
        }
        g = ord.fold(&g, &pairs).graph;
    }
}

/// Removes redundant monochromatic components, then collapses a lone
/// `Cayley(G_i)` to the trivial graph.
pub fn step5_remove_redundant(g: &LabelledGraph, amalgam: &Amalgam) -> LabelledGraph {
    let mut g = g.clone();
    'outer: loop {
        let report = classify(&g, amalgam);
        let t = g.transitions();
        let v0 = g.basepoint;
        for (ci, comp) in report.components.iter().enumerate() {
            let f = comp.factor;
            let vb = report.vb(ci);
            if vb.is_empty() {
                continue;
            }
            let v0_in = comp.vertices.contains(&v0);
            let v0_mono = v0_in && report.colour[v0] == Colour::Mono(f);
            for k in amalgam.edge_subgroups() {
                if vb.len() * k.len() != amalgam.edge.order() {
                    continue;
                }
                let trivial = k.len() == 1;
                if (trivial && v0_mono) || (!trivial && v0_in) {
                    continue;
                }
                let table = amalgam.relative_cayley_edge(f, k);
                if table.len() != comp.vertices.len() {
                    continue;
                }
                let matches = vb
                    .iter()
                    .any(|&v| component_matches_table(&t, v, &table, amalgam, f).is_some());
                if matches {
                    let mut keep_vertex = vec![true; g.num_vertices];
                    for &v in &comp.vertices {
                        if report.colour[v] == Colour::Mono(f) {
                            keep_vertex[v] = false;
                        }
                    }
                    let mut keep_edge = vec![true; g.edges.len()];
                    for &e in &comp.edges {
                        keep_edge[e] = false;
                    }
                    g = g.retain(&keep_vertex, &keep_edge).0;
                    continue 'outer;
                }
            }
        }
        break;
    }

    let report = classify(&g, amalgam);
    if report.bichromatic().is_empty() && report.components.len() == 1 {
        let comp = &report.components[0];
        let f = comp.factor;
        if comp.vertices.len() == g.num_vertices && g.num_vertices == amalgam.order(f) {
            let table = amalgam.relative_cayley_edge(f, &[0]);
            if component_matches_table(&g.transitions(), g.basepoint, &table, amalgam, f).is_some()
            {
                return LabelledGraph::trivial(g.num_gens);
            }
        }
    }
    g
}

/// When the basepoint is monochromatic and its stabilizer meets `A`
/// non-trivially in `L`, glues `Cayley(G_j, L)` along the `A`-orbit of the
/// basepoint.
pub fn step6_basepoint_completion(g: &LabelledGraph, amalgam: &Amalgam) -> LabelledGraph {
    let report = classify(g, amalgam);
    let v0 = g.basepoint;
    let Colour::Mono(f) = report.colour[v0] else {
        return g.clone();
    };
    let t = g.transitions();
    let endpoint = |a: usize| t.read(v0, &amalgam.spell_edge(a, f)).end();
    let l: Vec<usize> = (0..amalgam.edge.order())
        .filter(|&a| endpoint(a) == Some(v0))
        .collect();
    if l.len() == 1 {
        return g.clone();
    }
    let j = f.other();
    let d = cayley_graph(amalgam, j, &l);
    let td = d.transitions();
    let pairs: Vec<(usize, usize)> = (0..amalgam.edge.order())
        .filter_map(|a| {
            let u = endpoint(a)?;
            let w = td.read(0, &amalgam.spell_edge(a, j)).end()?;
            Some((u, w))
        })
        .collect();
    crate::graph::pushout(g, &d, &pairs).0
}

/// Runs all six steps and relabels canonically.
pub fn build_subgroup_graph(
    amalgam: &Amalgam,
    generators: &[Word],
    options: &BuildOptions,
) -> SubgroupGraph {
    let mut ord = Orderer::new(options.order_seed);
    let mut trace = Vec::new();
    let snap = |name: &str, g: &LabelledGraph, trace: &mut Vec<(String, LabelledGraph)>| {
        if options.trace {
            trace.push((name.to_string(), g.canonical_relabel()));
        }
    };
    let g1 = build_bouquet(amalgam.num_gens(), generators);
    snap("step1", &g1, &mut trace);
    let g2 = step2_with(&g1, &mut ord);
    snap("step2", &g2, &mut trace);
    let g3 = step3_with(&g2, amalgam, &mut ord);
    snap("step3", &g3, &mut trace);
    let g4 = step4_with(&g3, amalgam, &mut ord);
    snap("step4", &g4, &mut trace);
    let g5 = step5_remove_redundant(&g4, amalgam);
    snap("step5", &g5, &mut trace);
    let g6 = step6_basepoint_completion(&g5, amalgam);
    let graph = g6.canonical_relabel();
    snap("step6", &graph, &mut trace);
    SubgroupGraph {
        graph,
        generators: generators.to_vec(),
        trace,
    }
}

/// Outcome of [`verify_precover`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrecoverReport {
    pub diagnostics: Vec<String>,
}

impl PrecoverReport {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Checks well-labelling, that every monochromatic component is a cover of
/// its factor, and compatibility at bichromatic vertices.
pub fn verify_precover(g: &LabelledGraph, amalgam: &Amalgam) -> PrecoverReport {
    let mut diagnostics = Vec::new();
    if !g.is_well_labelled() {
        diagnostics.push("graph is not well-labelled".to_string());
        return PrecoverReport { diagnostics };
    }
    let report = classify(g, amalgam);
    let t = g.transitions();
    for (ci, comp) in report.components.iter().enumerate() {
        if !component_is_cover(&t, &comp.vertices, comp.factor, amalgam) {
            diagnostics.push(format!(
                "component {ci} (factor {}) is not a cover",
                comp.factor
            ));
        }
    }
    if diagnostics.is_empty() {
        for v in report.bichromatic() {
            for a in 1..amalgam.edge.order() {
                let u1 = t.read(v, &amalgam.spell_edge(a, Factor::One)).end();
                let u2 = t.read(v, &amalgam.spell_edge(a, Factor::Two)).end();
                if u1 != u2 {
                    diagnostics.push(format!("incompatible at vertex {v} for edge element {a}"));
                }
            }
        }
    }
    PrecoverReport { diagnostics }
}

/// Reads a normal form of `w` from the basepoint.
pub fn reads_to(g: &LabelledGraph, amalgam: &Amalgam, w: &Word) -> Option<usize> {
    let nf = normal_form(amalgam, w);
    let t = g.transitions();
    if nf.is_identity() {
        return Some(g.basepoint);
    }
    if nf.syllables.is_empty() {
        return Factor::both()
            .into_iter()
            .find_map(|f| t.read(g.basepoint, &nf.to_word(amalgam, f)).end());
    }
    t.read(g.basepoint, &nf.to_word(amalgam, Factor::One)).end()
}

/// Whether `w` represents an element of the subgroup.
pub fn is_member(sg: &SubgroupGraph, amalgam: &Amalgam, w: &Word) -> bool {
    graph_accepts(&sg.graph, amalgam, w)
}

/// Whether a normal form of `w` labels a loop at the basepoint.
pub fn graph_accepts(g: &LabelledGraph, amalgam: &Amalgam, w: &Word) -> bool {
    reads_to(g, amalgam, w) == Some(g.basepoint)
}
