//! Pointed labelled graphs over `X±`: folding, hair cutting, chromatic
//! classification, pointed isomorphism and pushouts.
//!
//! Only positively labelled edges are stored; reading an inverse letter walks
//! an edge backwards.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::amalgam::{Amalgam, Factor};
use crate::todd_coxeter::CosetTable;
use crate::word::{Letter, Word};

pub(crate) const NONE: usize = usize::MAX;

/// A positively labelled edge `src --gen--> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub gen: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    pub num_gens: usize,
    pub num_vertices: usize,
    pub edges: Vec<Edge>,
    pub basepoint: usize,
}

/// Outcome of reading a word from a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadResult {
    End(usize),
    /// No edge for the letter at `position`; `vertex` is where reading stopped.
    Stuck { position: usize, vertex: usize },
}

impl ReadResult {
    pub fn end(self) -> Option<usize> {
        match self {
            ReadResult::End(v) => Some(v),
            ReadResult::Stuck { .. } => None,
        }
    }
}

impl LabelledGraph {
    /// A single basepoint and no edges.
    pub fn trivial(num_gens: usize) -> Self {
        LabelledGraph {
            num_gens,
            num_vertices: 1,
            edges: Vec::new(),
            basepoint: 0,
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    /// Adds `src --l--> dst`, stored positively.
    pub fn add_edge(&mut self, src: usize, l: Letter, dst: usize) {
        let e = if l.inverse {
            Edge {
                src: dst,
                gen: l.gen,
                dst: src,
            }
        } else {
            Edge {
                src,
                gen: l.gen,
                dst,
            }
        };
        self.edges.push(e);
    }

    /// Adds a subdivided path spelling `w` from `start` to `end`.
    pub fn add_path(&mut self, start: usize, w: &Word, end: usize) {
        let letters = w.letters();
        if letters.is_empty() {
            return;
        }
        let mut cur = start;
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                end
            } else {
                self.add_vertex()
            };
            self.add_edge(cur, l, next);
            cur = next;
        }
    }

    /// Graph view of a coset table, restricted to generators `0..num_gens` of
    /// the table and shifted by `offset` into a `total_gens` alphabet.
    pub fn from_coset_table(table: &CosetTable, offset: usize, total_gens: usize) -> Self {
        let mut g = LabelledGraph {
            num_gens: total_gens,
            num_vertices: table.len(),
            edges: Vec::new(),
            basepoint: 0,
        };
        for (c, row) in table.action.iter().enumerate() {
            for gen in 0..table.num_gens {
                g.edges.push(Edge {
                    src: c,
                    gen: gen + offset,
                    dst: row[Letter::pos(gen).index()],
                });
            }
        }
        g
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_vertices == 1 && self.edges.is_empty()
    }

    pub fn transitions(&self) -> Transitions {
        Transitions::new(self)
    }

    /// Degree counting loops twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices];
        for e in &self.edges {
            d[e.src] += 1;
            d[e.dst] += 1;
        }
        d
    }

    /// At most one edge per vertex and letter.
    pub fn is_well_labelled(&self) -> bool {
        let width = 2 * self.num_gens;
        let mut seen = vec![false; self.num_vertices * width];
        for e in &self.edges {
            for (v, l) in [(e.src, 2 * e.gen), (e.dst, 2 * e.gen + 1)] {
                if std::mem::replace(&mut seen[v * width + l], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Renumbers vertices by BFS from the basepoint over letters in index
    /// order; vertices not reached keep their relative order at the end.
    /// Edges are sorted. Requires a well-labelled graph.
    pub fn canonical_relabel(&self) -> LabelledGraph {
        self.relabel(&self.canonical_order())
    }

    /// The permutation applied by [`canonical_relabel`](Self::canonical_relabel),
    /// as `order[old] = new`.
    pub fn canonical_order(&self) -> Vec<usize> {
        let t = self.transitions();
        let mut order = vec![NONE; self.num_vertices];
        let mut seq = Vec::with_capacity(self.num_vertices);
        let start = |v: usize, order: &mut Vec<usize>, seq: &mut Vec<usize>| {
            if order[v] != NONE {
                return;
            }
            order[v] = seq.len();
            seq.push(v);
            let mut head = seq.len() - 1;
            while head < seq.len() {
                let u = seq[head];
                head += 1;
                for l in 0..t.width {
                    if let Some(w) = t.get(u, l) {
                        if order[w] == NONE {
                            order[w] = seq.len();
                            seq.push(w);
                        }
                    }
                }
            }
        };
        start(self.basepoint, &mut order, &mut seq);
        for v in 0..self.num_vertices {
            start(v, &mut order, &mut seq);
        }
        order
    }

    /// Applies a vertex permutation `order[old] = new`.
    pub fn relabel(&self, order: &[usize]) -> LabelledGraph {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                src: order[e.src],
                gen: e.gen,
                dst: order[e.dst],
            })
            .collect();
        edges.sort_unstable();
        LabelledGraph {
            num_gens: self.num_gens,
            num_vertices: self.num_vertices,
            edges,
            basepoint: order[self.basepoint],
        }
    }

    /// Keeps the marked vertices and the edges between them. Returns the
    /// compacted graph and the old-to-new vertex map (`NONE` when dropped).
    /// The basepoint must be kept.
    pub fn retain(&self, keep_vertex: &[bool], keep_edge: &[bool]) -> (LabelledGraph, Vec<usize>) {
        let mut map = vec![NONE; self.num_vertices];
        let mut n = 0;
        for v in 0..self.num_vertices {
            if keep_vertex[v] {
                map[v] = n;
                n += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(keep_edge)
            .filter(|(e, &k)| k && keep_vertex[e.src] && keep_vertex[e.dst])
            .map(|(e, _)| Edge {
                src: map[e.src],
                gen: e.gen,
                dst: map[e.dst],
            })
            .collect();
        let g = LabelledGraph {
            num_gens: self.num_gens,
            num_vertices: n,
            edges,
            basepoint: map[self.basepoint],
        };
        (g, map)
    }

    /// The connected component of the basepoint.
    pub fn basepoint_component(&self) -> (LabelledGraph, Vec<usize>) {
        let reach = self.reachable_from(self.basepoint);
        let keep_edge = vec![true; self.edges.len()];
        self.retain(&reach, &keep_edge)
    }

    pub fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut seen = vec![false; self.num_vertices];
        seen[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from(self.basepoint).iter().all(|&b| b)
    }

    /// Every vertex has an edge for every letter in `letters`.
    pub fn is_saturated_in(&self, letters: std::ops::Range<usize>) -> bool {
        self.unsaturated_vertex(letters).is_none()
    }

    /// The first vertex missing some letter of `letters`, with that letter.
    pub fn unsaturated_vertex(&self, letters: std::ops::Range<usize>) -> Option<(usize, usize)> {
        let t = self.transitions();
        (0..self.num_vertices).find_map(|v| {
            letters
                .clone()
                .find(|&l| t.get(v, l).is_none())
                .map(|l| (v, l))
        })
    }

    /// Plain-text format: vertex count, then sorted `src dst label` lines.
    /// Graphs should be canonically relabelled first so the basepoint is 0.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut edges = self.edges.clone();
        edges.sort_unstable_by_key(|e| (e.src, e.dst, e.gen));
        let mut out = format!("{}\n", self.num_vertices);
        for e in edges {
            let _ = writeln!(out, "{} {} {}", e.src, e.dst, names[e.gen]);
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output; the basepoint is vertex 0.
    pub fn from_text(text: &str, names: &[String]) -> Option<LabelledGraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines.next()?.trim().parse().ok()?;
        let mut g = LabelledGraph {
            num_gens: names.len(),
            num_vertices: n,
            edges: Vec::new(),
            basepoint: 0,
        };
        for line in lines {
            let mut parts = line.split_whitespace();
            let src: usize = parts.next()?.parse().ok()?;
            let dst: usize = parts.next()?.parse().ok()?;
            let label = parts.next()?;
            let gen = names.iter().position(|n| n == label)?;
            if src >= n || dst >= n {
                return None;
            }
            g.edges.push(Edge { src, gen, dst });
        }
        Some(g)
    }

    /// DOT with the basepoint double circled; factor-1 edges solid and
    /// factor-2 edges dashed.
    pub fn to_dot(&self, names: &[String], factor_of: impl Fn(usize) -> Factor) -> String {
        let mut out = String::from("digraph G {\n  rankdir=LR;\n  node [shape=circle];\n");
        for v in 0..self.num_vertices {
            let shape = if v == self.basepoint {
                ", shape=doublecircle"
            } else {
                ""
            };
            let _ = writeln!(out, "  v{v} [label=\"{v}\"{shape}];");
        }
        for e in &self.edges {
            let style = match factor_of(e.gen) {
                Factor::One => "solid",
                Factor::Two => "dashed",
            };
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"{}\", style={style}];",
                e.src, e.dst, names[e.gen]
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Dense `(vertex, letter) -> vertex` lookup for a well-labelled graph.
#[derive(Debug, Clone)]
pub struct Transitions {
    width: usize,
    next: Vec<usize>,
}

impl Transitions {
    pub fn new(g: &LabelledGraph) -> Self {
        let width = 2 * g.num_gens;
        let mut next = vec![NONE; g.num_vertices * width];
        for e in &g.edges {
            next[e.src * width + 2 * e.gen] = e.dst;
            next[e.dst * width + 2 * e.gen + 1] = e.src;
        }
        Transitions { width, next }
    }

    #[inline]
    pub fn get(&self, v: usize, letter_index: usize) -> Option<usize> {
        let t = self.next[v * self.width + letter_index];
        (t != NONE).then_some(t)
    }

    #[inline]
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        self.get(v, l.index())
    }

    pub fn read(&self, start: usize, w: &Word) -> ReadResult {
        let mut v = start;
        for (position, &l) in w.letters().iter().enumerate() {
            match self.step(v, l) {
                Some(u) => v = u,
                None => return ReadResult::Stuck { position, vertex: v },
            }
        }
        ReadResult::End(v)
    }

    pub fn has_letter_in(&self, v: usize, letters: std::ops::Range<usize>) -> bool {
        letters.into_iter().any(|l| self.get(v, l).is_some())
    }
}

/// Result of folding: the folded graph and where each old vertex went.
#[derive(Debug, Clone)]
pub struct Folded {
    pub graph: LabelledGraph,
    pub map: Vec<usize>,
}

struct Folder<'r> {
    width: usize,
    parent: Vec<usize>,
    rows: Vec<usize>,
    pending: Vec<(usize, usize)>,
    rng: Option<&'r mut StdRng>,
}

impl Folder<'_> {
    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = v;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn row(&mut self, v: usize, l: usize) -> Option<usize> {
        let t = self.rows[v * self.width + l];
        (t != NONE).then(|| self.find(t))
    }

    fn insert(&mut self, u: usize, l: usize, v: usize) {
        let (u, v) = (self.find(u), self.find(v));
        let fwd = self.row(u, l);
        let back = self.row(v, l ^ 1);
        match fwd {
            Some(x) if x != v => self.pending.push((x, v)),
            Some(_) => {}
            None => self.rows[u * self.width + l] = v,
        }
        match back {
            Some(y) if y != u => self.pending.push((y, u)),
            Some(_) => {}
            None => self.rows[v * self.width + (l ^ 1)] = u,
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let swap = self.rng.as_deref_mut().map(|rng| rng.gen_bool(0.5));
        let (root, other) = match swap {
            Some(true) => (b, a),
            Some(false) => (a, b),
            None => (a.min(b), a.max(b)),
        };
        self.parent[other] = root;
        for l in 0..self.width {
            let t = self.rows[other * self.width + l];
            if t != NONE {
                self.rows[other * self.width + l] = NONE;
                self.insert(root, l, t);
            }
        }
    }

    fn drain(&mut self) {
        while !self.pending.is_empty() {
            let k = match self.rng.as_deref_mut() {
                Some(rng) => rng.gen_range(0..self.pending.len()),
                None => self.pending.len() - 1,
            };
            let (a, b) = self.pending.swap_remove(k);
            self.merge(a, b);
        }
    }
}

/// Identifies the given vertex pairs and folds until well-labelled. With an
/// rng, edge insertion order, merge order and surviving representatives are
/// randomised; the result is the same up to pointed isomorphism.
pub fn fold_with(
    g: &LabelledGraph,
    identifications: &[(usize, usize)],
    rng: Option<&mut StdRng>,
) -> Folded {
    let width = 2 * g.num_gens;
    let n = g.num_vertices;
    let mut folder = Folder {
        width,
        parent: (0..n).collect(),
        rows: vec![NONE; n * width],
        pending: Vec::new(),
        rng,
    };
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    if let Some(rng) = folder.rng.as_deref_mut() {
        order.shuffle(rng);
    }
    folder.pending.extend_from_slice(identifications);
    folder.drain();
    for i in order {
        let e = g.edges[i];
        folder.insert(e.src, 2 * e.gen, e.dst);
        folder.drain();
    }

    let mut map = vec![NONE; n];
    let mut count = 0;
    for v in 0..n {
        let r = folder.find(v);
        if map[r] == NONE {
            map[r] = count;
            count += 1;
        }
    }
    for v in 0..n {
        let r = folder.find(v);
        map[v] = map[r];
    }
    let mut edges = Vec::new();
    for v in 0..n {
        if folder.find(v) != v {
            continue;
        }
        for gen in 0..g.num_gens {
            if let Some(t) = folder.row(v, 2 * gen) {
                edges.push(Edge {
                    src: map[v],
                    gen,
                    dst: map[t],
                });
            }
        }
    }
    Folded {
        graph: LabelledGraph {
            num_gens: g.num_gens,
            num_vertices: count,
            edges,
            basepoint: map[g.basepoint],
        },
        map,
    }
}

pub fn fold_all(g: &LabelledGraph) -> LabelledGraph {
    fold_with(g, &[], None).graph
}

/// Repeatedly removes degree-one vertices other than the basepoint, together
/// with isolated vertices other than the basepoint.
pub fn cut_hairs(g: &LabelledGraph) -> (LabelledGraph, Vec<usize>) {
    let mut deg = g.degrees();
    let mut incident = vec![Vec::new(); g.num_vertices];
    for (i, e) in g.edges.iter().enumerate() {
        incident[e.src].push(i);
        if e.dst != e.src {
            incident[e.dst].push(i);
        }
    }
    let mut alive_edge = vec![true; g.edges.len()];
    let mut alive_vertex = vec![true; g.num_vertices];
    let mut queue: VecDeque<usize> = (0..g.num_vertices)
        .filter(|&v| v != g.basepoint && deg[v] <= 1)
        .collect();
    while let Some(v) = queue.pop_front() {
        if !alive_vertex[v] || deg[v] > 1 || v == g.basepoint {
            continue;
        }
        alive_vertex[v] = false;
        for &i in &incident[v] {
            if !alive_edge[i] {
                continue;
            }
            alive_edge[i] = false;
            let e = g.edges[i];
            let other = if e.src == v { e.dst } else { e.src };
            deg[v] -= 1;
            deg[other] -= 1;
            if other != g.basepoint && deg[other] <= 1 {
                queue.push_back(other);
            }
        }
    }
    g.retain(&alive_vertex, &alive_edge)
}

/// Disjoint union; returns the vertex offset of each part. The basepoint is
/// the first part's.
pub fn disjoint_union(parts: &[&LabelledGraph]) -> (LabelledGraph, Vec<usize>) {
    let num_gens = parts.iter().map(|p| p.num_gens).max().unwrap_or(0);
    let mut g = LabelledGraph {
        num_gens,
        num_vertices: 0,
        edges: Vec::new(),
        basepoint: 0,
    };
    let mut offsets = Vec::with_capacity(parts.len());
    for (k, p) in parts.iter().enumerate() {
        let off = g.num_vertices;
        offsets.push(off);
        if k == 0 {
            g.basepoint = p.basepoint;
        }
        g.num_vertices += p.num_vertices;
        g.edges.extend(p.edges.iter().map(|e| Edge {
            src: e.src + off,
            gen: e.gen,
            dst: e.dst + off,
        }));
    }
    (g, offsets)
}

/// Pushout of `g1` and `g2` along identified vertex pairs `(u in g1, v in g2)`,
/// followed by folding. Returns the result and the images of both inputs'
/// vertices.
pub fn pushout(
    g1: &LabelledGraph,
    g2: &LabelledGraph,
    identifications: &[(usize, usize)],
) -> (LabelledGraph, Vec<usize>, Vec<usize>) {
    let (u, offsets) = disjoint_union(&[g1, g2]);
    let pairs: Vec<(usize, usize)> = identifications
        .iter()
        .map(|&(a, b)| (a, b + offsets[1]))
        .collect();
    let folded = fold_with(&u, &pairs, None);
    let left = folded.map[..g1.num_vertices].to_vec();
    let right = folded.map[offsets[1]..].to_vec();
    (folded.graph, left, right)
}

/// Pointed label-preserving isomorphism between connected well-labelled
/// graphs, as the vertex map from `g1` to `g2`.
pub fn isomorphic(g1: &LabelledGraph, g2: &LabelledGraph) -> Option<Vec<usize>> {
    if g1.num_vertices != g2.num_vertices
        || g1.edges.len() != g2.edges.len()
        || g1.num_gens != g2.num_gens
    {
        return None;
    }
    let t1 = g1.transitions();
    let t2 = g2.transitions();
    let map = pointed_map(&t1, g1.basepoint, &t2, g2.basepoint, 0..2 * g1.num_gens)?;
    (map.iter().all(|&m| m != NONE)).then_some(map)
}

/// Simultaneous traversal from `a` in `t1` and `b` in `t2` over the given
/// letters; the partial vertex map when the two reachable parts match
/// exactly (same defined letters, injective).
pub fn pointed_map(
    t1: &Transitions,
    a: usize,
    t2: &Transitions,
    b: usize,
    letters: std::ops::Range<usize>,
) -> Option<Vec<usize>> {
    let n1 = t1.next.len() / t1.width.max(1);
    let n2 = t2.next.len() / t2.width.max(1);
    let mut fwd = vec![NONE; n1];
    let mut bwd = vec![NONE; n2];
    fwd[a] = b;
    bwd[b] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        let v = fwd[u];
        for l in letters.clone() {
            match (t1.get(u, l), t2.get(v, l)) {
                (None, None) => {}
                (Some(u2), Some(v2)) => {
                    if fwd[u2] == NONE && bwd[v2] == NONE {
                        fwd[u2] = v2;
                        bwd[v2] = u2;
                        queue.push_back(u2);
                    } else if fwd[u2] != v2 || bwd[v2] != u2 {
                        return None;
                    }
                }
                _ => return None,
            }
        }
    }
    Some(fwd)
}

/// Whether the monochromatic component of `v` (letters of `f`) is pointed
/// isomorphic to the relative Cayley graph `table` at coset 0, and if so the
/// map from cosets to vertices.
pub fn component_matches_table(
    t: &Transitions,
    v: usize,
    table: &CosetTable,
    g: &Amalgam,
    f: Factor,
) -> Option<Vec<usize>> {
    let letters = g.letters_of(f);
    let base = letters.start;
    let mut map = vec![NONE; table.len()];
    let mut used = std::collections::HashMap::new();
    map[0] = v;
    used.insert(v, 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let u = map[c];
        for l in letters.clone() {
            let d = table.action[c][l - base];
            let w = t.get(u, l)?;
            if map[d] == NONE {
                if used.contains_key(&w) {
                    return None;
                }
                map[d] = w;
                used.insert(w, d);
                queue.push_back(d);
            } else if map[d] != w {
                return None;
            }
        }
    }
    Some(map)
}

/// Colour of a vertex with respect to the two factor alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colour {
    Isolated,
    Mono(Factor),
    Bichromatic,
}

/// A maximal connected single-colour subgraph with at least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub factor: Factor,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ChromaticReport {
    pub colour: Vec<Colour>,
    pub components: Vec<Component>,
    /// Per factor, the component of each vertex, if any.
    pub component_of: [Vec<Option<usize>>; 2],
}

impl ChromaticReport {
    pub fn monochromatic(&self, f: Factor) -> Vec<usize> {
        (0..self.colour.len())
            .filter(|&v| self.colour[v] == Colour::Mono(f))
            .collect()
    }

    pub fn bichromatic(&self) -> Vec<usize> {
        (0..self.colour.len())
            .filter(|&v| self.colour[v] == Colour::Bichromatic)
            .collect()
    }

    /// Bichromatic vertices of a component.
    pub fn vb(&self, c: usize) -> Vec<usize> {
        self.components[c]
            .vertices
            .iter()
            .copied()
            .filter(|&v| self.colour[v] == Colour::Bichromatic)
            .collect()
    }
}

/// Splits the graph into chromatic classes and monochromatic components.
/// Components are ordered by their lowest edge index.
pub fn classify(g: &LabelledGraph, amalgam: &Amalgam) -> ChromaticReport {
    let n = g.num_vertices;
    let mut has = vec![[false; 2]; n];
    for e in &g.edges {
        let f = amalgam.factor_of(e.gen).index();
        has[e.src][f] = true;
        has[e.dst][f] = true;
    }
    let colour = has
        .iter()
        .map(|h| match h {
            [false, false] => Colour::Isolated,
            [true, false] => Colour::Mono(Factor::One),
            [false, true] => Colour::Mono(Factor::Two),
            [true, true] => Colour::Bichromatic,
        })
        .collect();

    let mut uf: Vec<usize> = (0..2 * n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for e in &g.edges {
        let f = amalgam.factor_of(e.gen).index();
        let a = find(&mut uf, f * n + e.src);
        let b = find(&mut uf, f * n + e.dst);
        if a != b {
            uf[a.max(b)] = a.min(b);
        }
    }
    let mut comp_of_root = vec![NONE; 2 * n];
    let mut components: Vec<Component> = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let f = amalgam.factor_of(e.gen);
        let r = find(&mut uf, f.index() * n + e.src);
        if comp_of_root[r] == NONE {
            comp_of_root[r] = components.len();
            components.push(Component {
                factor: f,
                vertices: Vec::new(),
                edges: Vec::new(),
            });
        }
        components[comp_of_root[r]].edges.push(i);
    }
    let mut component_of = [vec![None; n], vec![None; n]];
    for v in 0..n {
        for f in Factor::both() {
            if has[v][f.index()] {
                let r = find(&mut uf, f.index() * n + v);
                let c = comp_of_root[r];
                component_of[f.index()][v] = Some(c);
                components[c].vertices.push(v);
            }
        }
    }
    ChromaticReport {
        colour,
        components,
        component_of,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::sl2z_spec;
    use rand::SeedableRng;

    fn loops(words: &[Vec<Letter>], gens: usize) -> LabelledGraph {
        let mut g = LabelledGraph::trivial(gens);
        for w in words {
            g.add_path(0, &Word::from_letters(w.clone()), 0);
        }
        g
    }

    const X: Letter = Letter {
        gen: 0,
        inverse: false,
    };
    const Y: Letter = Letter {
        gen: 1,
        inverse: false,
    };

    #[test]
    fn two_equal_loops_fold_to_one() {
        let g = loops(&[vec![X], vec![X]], 2);
        let f = fold_all(&g);
        assert_eq!(f.num_vertices, 1);
        assert_eq!(f.edges.len(), 1);
    }

    #[test]
    fn folding_a_well_labelled_graph_changes_nothing() {
        let g = loops(&[vec![X, Y]], 2);
        let f = fold_all(&g);
        assert!(isomorphic(&g, &f).is_some());
    }

    #[test]
    fn figure_one_style_fold_then_cut() {
        // Two a-edges leave v0; one returns by b, the other dangles.
        let mut g = LabelledGraph::trivial(2);
        let v1 = g.add_vertex();
        let v2 = g.add_vertex();
        g.add_edge(0, X, v1);
        g.add_edge(0, X, v2);
        g.add_edge(v1, Y, 0);
        let folded = fold_all(&g);
        assert_eq!(folded.num_vertices, 2);
        assert!(folded.is_well_labelled());
        let (cut, _) = cut_hairs(&folded);
        assert_eq!(cut.num_vertices, 2);

        let mut h = LabelledGraph::trivial(2);
        let a = h.add_vertex();
        let b = h.add_vertex();
        h.add_edge(0, X, a);
        h.add_edge(a, Y, b);
        let (cut, _) = cut_hairs(&h);
        assert!(cut.is_trivial());
    }

    #[test]
    fn cycle_has_no_hairs() {
        let g = loops(&[vec![X, Y, X]], 2);
        let (cut, _) = cut_hairs(&g);
        assert_eq!(cut, g);
    }

    #[test]
    fn reading_paths() {
        let g = loops(&[vec![X, Y]], 2);
        let t = g.transitions();
        assert_eq!(t.read(0, &Word::from_letters(vec![X])), ReadResult::End(1));
        assert_eq!(
            t.read(0, &Word::from_letters(vec![Y])),
            ReadResult::Stuck {
                position: 0,
                vertex: 0
            }
        );
        assert_eq!(t.read(0, &Word::from_letters(vec![X, Y])), ReadResult::End(0));
        assert_eq!(t.read(0, &Word::from_letters(vec![Y.inv()])), ReadResult::End(1));
    }

    #[test]
    fn permuted_graph_is_isomorphic() {
        let g = loops(&[vec![X, Y, Y], vec![Y, X]], 2);
        let g = fold_all(&g);
        let n = g.num_vertices;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(3));
        let h = g.relabel(&perm);
        let m = isomorphic(&g, &h).unwrap();
        assert_eq!(m, perm);
        let xl = loops(&[vec![X]], 2);
        let yl = loops(&[vec![Y]], 2);
        assert!(isomorphic(&xl, &yl).is_none());
    }

    #[test]
    fn random_fold_orders_agree() {
        let g = loops(&[vec![X, Y, X.inv()], vec![X, X, Y], vec![Y, X, Y.inv(), X]], 2);
        let base = fold_all(&g);
        for seed in 0..20 {
            let mut rng = StdRng::seed_from_u64(seed);
            let f = fold_with(&g, &[], Some(&mut rng)).graph;
            assert!(f.is_well_labelled());
            assert!(isomorphic(&base, &f).is_some());
        }
    }

    #[test]
    fn pushout_identifying_parallel_vertices_cascades() {
        // Two x-paths of length 2 from different starts; identifying the
        // starts collapses both paths.
        let mut g = LabelledGraph::trivial(2);
        let p = g.add_vertex();
        let q = g.add_vertex();
        let r = g.add_vertex();
        let s = g.add_vertex();
        let t = g.add_vertex();
        g.add_edge(0, X, p);
        g.add_edge(p, X, q);
        g.add_edge(r, X, s);
        g.add_edge(s, X, t);
        let f = fold_with(&g, &[(0, r)], None);
        assert_eq!(f.graph.num_vertices, 3);
        assert_eq!(f.map[q], f.map[t]);
        let empty = LabelledGraph {
            num_gens: 2,
            num_vertices: 0,
            edges: vec![],
            basepoint: 0,
        };
        let (po, left, _) = pushout(&g, &empty, &[]);
        assert_eq!(po.num_vertices, g.num_vertices);
        assert_eq!(left, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn gluing_cayley_z4_onto_an_edge() {
        let amalgam = crate::amalgam::Amalgam::new(sl2z_spec()).unwrap();
        let cay = LabelledGraph::from_coset_table(
            &amalgam.model(Factor::One).relative_cayley(&[]),
            0,
            2,
        );
        let g = loops(&[vec![X, Y]], 2);
        let (po, left, right) = pushout(&g, &cay, &[(0, 0)]);
        assert!(po.is_well_labelled());
        assert_eq!(po.num_vertices, 4);
        assert_eq!(left[1], right[1]);
        let report = classify(&po, &amalgam);
        assert_eq!(report.bichromatic(), vec![left[0], left[1]].into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn classify_examples() {
        let amalgam = crate::amalgam::Amalgam::new(sl2z_spec()).unwrap();
        let g = loops(&[vec![X]], 2);
        let r = classify(&g, &amalgam);
        assert_eq!(r.monochromatic(Factor::One), vec![0]);
        assert!(r.bichromatic().is_empty());
        let r = classify(&LabelledGraph::trivial(2), &amalgam);
        assert!(r.components.is_empty());
        assert_eq!(r.colour, vec![Colour::Isolated]);
    }

    #[test]
    fn text_format_round_trips() {
        let names = vec!["x".to_string(), "y".to_string()];
        let g = fold_all(&loops(&[vec![X, Y], vec![Y, Y]], 2)).canonical_relabel();
        let text = g.to_text(&names);
        let back = LabelledGraph::from_text(&text, &names).unwrap();
        assert!(isomorphic(&g, &back).is_some());
        assert_eq!(back.to_text(&names), text);
        let dot = g.to_dot(&names, |gen| Factor::from_index(gen));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("style=dashed"));
    }
}
