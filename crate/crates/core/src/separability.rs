//! Separating a finitely generated subgroup from an element by a subgroup of
//! finite index.
//!
//! A precover is first made saturated in one colour `β` by gluing relative
//! Cayley graphs of `G_β` at its `β`-deficient vertices, then embedded into a
//! cover by amalgamating copies of it with relative Cayley graphs of the other
//! factor `α` along `A`-orbits with equal stabilizers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;

use crate::amalgam::{Amalgam, Factor};
use crate::error::{Error, Result};
use crate::graph::{classify, disjoint_union, pushout, Colour, LabelledGraph, Transitions, NONE};
use crate::normal_form::normal_form;
use crate::pipeline::{cayley_graph, graph_accepts, is_member, verify_precover, SubgroupGraph};
use crate::word::{Letter, Word};

/// An `A`-orbit `A(v)` inside a monochromatic component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Monochromatic component containing the orbit.
    pub component: usize,
    /// The orbit vertex whose stabilizer has the least subgroup id.
    pub rep: usize,
    pub vertices: Vec<usize>,
    /// Id of `A_rep` in [`Amalgam::edge_subgroups`].
    pub stabilizer: usize,
    /// Whether the orbit lies in `VM_f`.
    pub monochromatic: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// `A`-orbits and stabilizers of a precover, read through one factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    pub factor: Factor,
    pub orbits: Vec<Orbit>,
    /// Orbit of each vertex carrying edges of `factor`, `NONE` otherwise.
    pub orbit_of: Vec<usize>,
    /// Stabilizer id of each vertex carrying edges of `factor`.
    pub stabilizer_of: Vec<usize>,
    /// `n(Γ)`: lengths of the monochromatic orbits.
    pub lengths: BTreeSet<usize>,
    /// `m_j` per stabilizer class `S_j`, over monochromatic orbits.
    pub class_counts: BTreeMap<usize, usize>,
}

impl OrbitData {
    pub fn monochromatic(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| o.monochromatic)
    }

    /// Stabilizer classes whose orbits have length `n`, with their counts.
    pub fn classes_of_length(&self, n: usize, order: usize, amalgam: &Amalgam) -> Vec<(usize, usize)> {
        self.class_counts
            .iter()
            .filter(|(&s, _)| order / amalgam.edge_subgroups()[s].len() == n)
            .map(|(&s, &m)| (s, m))
            .collect()
    }
}

/// Endpoints `v·phi_f(a)` for every `a ∈ A`.
fn orbit_images(t: &Transitions, amalgam: &Amalgam, words: &[Word], v: usize) -> Result<Vec<usize>> {
    words
        .iter()
        .map(|w| {
            t.read(v, w)
                .end()
                .ok_or_else(|| Error::Invariant(format!("edge element does not read at vertex {v}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(|images| {
            debug_assert_eq!(images.len(), amalgam.edge.order());
            images
        })
}

/// Computes `A_v` and `A(v)` for every vertex with edges of colour `f`, by
/// reading `phi_f(a)` inside its component.
pub fn orbit_analysis(g: &LabelledGraph, amalgam: &Amalgam, f: Factor) -> Result<OrbitData> {
    let report = classify(g, amalgam);
    let t = g.transitions();
    let order = amalgam.edge.order();
    let words: Vec<Word> = (0..order).map(|a| amalgam.spell_edge(a, f)).collect();
    let n = g.num_vertices;
    let mut orbit_of = vec![NONE; n];
    let mut stabilizer_of = vec![NONE; n];
    let mut orbits = Vec::new();
    for v in 0..n {
        let Some(component) = report.component_of[f.index()][v] else {
            continue;
        };
        if orbit_of[v] != NONE {
            continue;
        }
        let images = orbit_images(&t, amalgam, &words, v)?;
        let mut vertices: Vec<usize> = Vec::new();
        for &u in &images {
            if !vertices.contains(&u) {
                vertices.push(u);
            }
        }
        let mut best = (NONE, NONE);
        for &u in &vertices {
            let from_u = orbit_images(&t, amalgam, &words, u)?;
            let stab: Vec<usize> = (0..order).filter(|&a| from_u[a] == u).collect();
            if order != vertices.len() * stab.len() {
                return Err(Error::Invariant(format!(
                    "orbit-stabilizer count fails at vertex {u}: |A| = {order}, |A(v)| = {}, |A_v| = {}",
                    vertices.len(),
                    stab.len()
                )));
            }
            let id = amalgam.subgroup_id(&stab);
            stabilizer_of[u] = id;
            orbit_of[u] = orbits.len();
            if id < best.0 {
                best = (id, u);
            }
        }
        orbits.push(Orbit {
            component,
            rep: best.1,
            vertices,
            stabilizer: best.0,
            monochromatic: report.colour[v] == Colour::Mono(f),
        });
    }
    let mut lengths = BTreeSet::new();
    let mut class_counts = BTreeMap::new();
    for o in orbits.iter().filter(|o| o.monochromatic) {
        lengths.insert(o.len());
        *class_counts.entry(o.stabilizer).or_insert(0) += 1;
    }
    Ok(OrbitData {
        factor: f,
        orbits,
        orbit_of,
        stabilizer_of,
        lengths,
        class_counts,
    })
}

/// A graph together with the image of every vertex of the graph it was
/// built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedded {
    pub graph: LabelledGraph,
    pub map: Vec<usize>,
}

impl Embedded {
    fn identity(g: &LabelledGraph) -> Self {
        Embedded {
            graph: g.clone(),
            map: (0..g.num_vertices).collect(),
        }
    }

    fn then(mut self, map: &[usize], graph: LabelledGraph) -> Self {
        for m in &mut self.map {
            *m = map[*m];
        }
        self.graph = graph;
        self
    }

    fn keep_basepoint_component(self) -> Self {
        let (g, map) = self.graph.basepoint_component();
        self.then(&map, g)
    }
}

/// Pushout along `pairs`, rejected unless both sides embed, that is, unless
/// no folding happens.
fn glue(
    g1: &LabelledGraph,
    g2: &LabelledGraph,
    pairs: &[(usize, usize)],
) -> Result<(LabelledGraph, Vec<usize>, Vec<usize>)> {
    let (g, left, right) = pushout(g1, g2, pairs);
    let glued: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    let lefts: BTreeSet<usize> = glued.iter().map(|p| p.0).collect();
    let rights: BTreeSet<usize> = glued.iter().map(|p| p.1).collect();
    let expected = g1.num_vertices + g2.num_vertices - glued.len();
    if lefts.len() != glued.len()
        || rights.len() != glued.len()
        || g.num_vertices != expected
        || g.edges.len() != g1.edges.len() + g2.edges.len()
    {
        return Err(Error::Invariant(format!(
            "orbit gluing folded: expected {expected} vertices and {} edges, got {} and {}",
            g1.edges.len() + g2.edges.len(),
            g.num_vertices,
            g.edges.len()
        )));
    }
    Ok((g, left, right))
}

/// Pairs orbits of equal stabilizer positionally and lists the identified
/// vertices `(w·phi_f1(a), u·phi_f2(a))`.
fn match_orbits(
    amalgam: &Amalgam,
    (t1, f1, side1): (&Transitions, Factor, Vec<&Orbit>),
    (t2, f2, side2): (&Transitions, Factor, Vec<&Orbit>),
) -> Result<Vec<(usize, usize)>> {
    let group = |side: Vec<&Orbit>| {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for o in side {
            by.entry(o.stabilizer).or_default().push(o.rep);
        }
        by
    };
    let by1 = group(side1);
    let by2 = group(side2);
    let counts = |by: &BTreeMap<usize, Vec<usize>>| -> Vec<(usize, usize)> {
        by.iter().map(|(&s, r)| (s, r.len())).collect()
    };
    if counts(&by1) != counts(&by2) {
        return Err(Error::Invariant(format!(
            "orbit classes do not balance: {:?} vs {:?}",
            counts(&by1),
            counts(&by2)
        )));
    }
    let words1: Vec<Word> = (0..amalgam.edge.order()).map(|a| amalgam.spell_edge(a, f1)).collect();
    let words2: Vec<Word> = (0..amalgam.edge.order()).map(|a| amalgam.spell_edge(a, f2)).collect();
    let mut pairs = Vec::new();
    for (s, reps1) in &by1 {
        for (&w, &u) in reps1.iter().zip(&by2[s]) {
            let i1 = orbit_images(t1, amalgam, &words1, w)?;
            let i2 = orbit_images(t2, amalgam, &words2, u)?;
            pairs.extend(i1.into_iter().zip(i2));
        }
    }
    Ok(pairs)
}

/// Which monochromatic orbits of a part take part in a gluing.
#[derive(Debug, Clone, Copy)]
enum Select {
    All,
    Length(usize),
    Stabilizer(usize),
    NotStabilizer(usize),
}

impl Select {
    fn accepts(self, o: &Orbit) -> bool {
        match self {
            Select::All => true,
            Select::Length(n) => o.len() == n,
            Select::Stabilizer(s) => o.stabilizer == s,
            Select::NotStabilizer(s) => o.stabilizer != s,
        }
    }
}

/// Disjoint union of `copies` of each part, with the part index of every
/// vertex.
fn expand(parts: &[(&LabelledGraph, usize)]) -> (LabelledGraph, Vec<usize>) {
    let mut refs = Vec::new();
    let mut part_of = Vec::new();
    for (i, &(g, copies)) in parts.iter().enumerate() {
        for _ in 0..copies {
            refs.push(g);
            part_of.extend(std::iter::repeat(i).take(g.num_vertices));
        }
    }
    (disjoint_union(&refs).0, part_of)
}

/// `Γ1 *_{w·a = u·a} Γ2`: side one contributes the selected `f1`-monochromatic
/// orbits, side two all of its `f2`-monochromatic orbits. Returns the
/// amalgam and the images of side one's vertices.
fn amalgamate(
    amalgam: &Amalgam,
    f1: Factor,
    side1: &[(&LabelledGraph, usize, Select)],
    side2: &[(&LabelledGraph, usize)],
) -> Result<(LabelledGraph, Vec<usize>)> {
    let f2 = f1.other();
    let parts1: Vec<(&LabelledGraph, usize)> = side1.iter().map(|&(g, c, _)| (g, c)).collect();
    let (u1, part_of1) = expand(&parts1);
    let (u2, _) = expand(side2);
    let d1 = orbit_analysis(&u1, amalgam, f1)?;
    let d2 = orbit_analysis(&u2, amalgam, f2)?;
    let chosen1: Vec<&Orbit> = d1
        .monochromatic()
        .filter(|o| side1[part_of1[o.rep]].2.accepts(o))
        .collect();
    let chosen2: Vec<&Orbit> = d2.monochromatic().collect();
    let t1 = u1.transitions();
    let t2 = u2.transitions();
    let pairs = match_orbits(amalgam, (&t1, f1, chosen1), (&t2, f2, chosen2))?;
    let (g, left, _) = glue(&u1, &u2, &pairs)?;
    Ok((g, left))
}

fn require_saturated(g: &LabelledGraph, amalgam: &Amalgam, f: Factor) -> Result<()> {
    let letters = amalgam.letters_of(f);
    if g.num_vertices > 0 && !g.is_saturated_in(letters) {
        return Err(Error::Invariant(format!("graph is not saturated in factor {f}")));
    }
    Ok(())
}

/// Embeds a finite precover into an `X_β`-saturated precover: at every
/// `X_α`-monochromatic vertex `v` with `S = A_v`, glue `Cayley(G_β, S)` along
/// `v·a = (S·1)·a`.
pub fn saturate(g: &LabelledGraph, amalgam: &Amalgam, beta: Factor) -> Result<Embedded> {
    let alpha = beta.other();
    let mut cur = Embedded::identity(g);
    loop {
        let data = orbit_analysis(&cur.graph, amalgam, alpha)?;
        let Some(orbit) = data.monochromatic().next() else {
            return Ok(cur);
        };
        let before: usize = data.monochromatic().map(Orbit::len).sum();
        let s = &amalgam.edge_subgroups()[orbit.stabilizer];
        let cay = cayley_graph(amalgam, beta, s);
        let t = cur.graph.transitions();
        let tc = cay.transitions();
        let pairs = match_orbits(
            amalgam,
            (&t, alpha, vec![orbit]),
            (&tc, beta, vec![&cay_orbit(amalgam, &cay, beta)?]),
        )?;
        let (next, left, _) = glue(&cur.graph, &cay, &pairs)?;
        let after: usize = orbit_analysis(&next, amalgam, alpha)?
            .monochromatic()
            .map(Orbit::len)
            .sum();
        if after + orbit.len() != before {
            return Err(Error::Invariant(format!(
                "saturation step left {after} deficient vertices, expected {}",
                before - orbit.len()
            )));
        }
        cur = cur.then(&left, next);
    }
}

/// The orbit of the base coset `S·1` in a relative Cayley graph.
fn cay_orbit(amalgam: &Amalgam, cay: &LabelledGraph, f: Factor) -> Result<Orbit> {
    let data = orbit_analysis(cay, amalgam, f)?;
    let o = &data.orbits[data.orbit_of[cay.basepoint]];
    Ok(Orbit {
        rep: cay.basepoint,
        stabilizer: data.stabilizer_of[cay.basepoint],
        ..o.clone()
    })
}

/// Cover embedding when `A` is central in `G_α`: per orbit length `n`,
/// `t = [G_α:A]` copies of the graph against `m_j` copies of
/// `Cayley(G_α, S_j)`.
pub fn embed_in_cover_central(g: &LabelledGraph, amalgam: &Amalgam, alpha: Factor) -> Result<Embedded> {
    let beta = alpha.other();
    require_saturated(g, amalgam, beta)?;
    let order = amalgam.edge.order();
    let t = amalgam.order(alpha) / order;
    let mut cur = Embedded::identity(g);
    loop {
        let data = orbit_analysis(&cur.graph, amalgam, beta)?;
        let Some(&n) = data.lengths.iter().next() else {
            return Ok(cur);
        };
        let cayleys: Vec<(LabelledGraph, usize)> = data
            .classes_of_length(n, order, amalgam)
            .into_iter()
            .map(|(s, m)| (cayley_graph(amalgam, alpha, &amalgam.edge_subgroups()[s]), m))
            .collect();
        let side2: Vec<(&LabelledGraph, usize)> = cayleys.iter().map(|(c, m)| (c, *m)).collect();
        let (next, left) = amalgamate(amalgam, beta, &[(&cur.graph, t, Select::Length(n))], &side2)?;
        cur = cur.then(&left, next).keep_basepoint_component();
    }
}

/// Cover embedding when `A` is malnormal in `G_α`: per orbit length `n`,
/// `d = [G_β:A]` copies of the graph and `Σ m_j c_j` copies of
/// `Cayley(G_β)` against `m_j d` copies of `Cayley(G_α, S_j)`, where
/// `c_j = (|G_α|/|S_j| - n)/|A|` counts the free orbits of `Cayley(G_α, S_j)`.
pub fn embed_in_cover_malnormal(g: &LabelledGraph, amalgam: &Amalgam, alpha: Factor) -> Result<Embedded> {
    let beta = alpha.other();
    require_saturated(g, amalgam, beta)?;
    let order = amalgam.edge.order();
    let d = amalgam.order(beta) / order;
    let full_beta = cayley_graph(amalgam, beta, &[]);
    let mut cur = Embedded::identity(g);
    loop {
        let data = orbit_analysis(&cur.graph, amalgam, beta)?;
        let Some(&n) = data.lengths.iter().next() else {
            return Ok(cur);
        };
        let mut cayleys = Vec::new();
        let mut free_copies = 0;
        for (s, m) in data.classes_of_length(n, order, amalgam) {
            let sub = &amalgam.edge_subgroups()[s];
            let vertices = amalgam.order(alpha) / sub.len();
            if (vertices - n) % order != 0 {
                return Err(Error::Invariant(format!(
                    "free orbits of Cayley(G_{alpha}, S) do not divide evenly: {vertices} vertices, n = {n}"
                )));
            }
            free_copies += m * (vertices - n) / order;
            cayleys.push((cayley_graph(amalgam, alpha, sub), m * d));
        }
        let side2: Vec<(&LabelledGraph, usize)> = cayleys.iter().map(|(c, k)| (c, *k)).collect();
        let side1 = [
            (&cur.graph, d, Select::Length(n)),
            (&full_beta, free_copies, Select::All),
        ];
        let (next, left) = amalgamate(amalgam, beta, &side1, &side2)?;
        cur = cur.then(&left, next).keep_basepoint_component();
    }
}

/// A finite `X_α`-saturated precover containing `Cayley(G_α, S)` whose
/// `X_α`-monochromatic vertices form `N` orbits, all with stabilizer `S`.
/// Requires `A` cyclic.
pub fn cyclic_claim(amalgam: &Amalgam, s: usize, alpha: Factor) -> Result<(LabelledGraph, usize)> {
    let mut memo = HashMap::new();
    claim(amalgam, s, alpha, &mut memo)
}

fn claim(
    amalgam: &Amalgam,
    s: usize,
    alpha: Factor,
    memo: &mut HashMap<(usize, usize), (LabelledGraph, usize)>,
) -> Result<(LabelledGraph, usize)> {
    if let Some(hit) = memo.get(&(s, alpha.index())) {
        return Ok(hit.clone());
    }
    let cay = cayley_graph(amalgam, alpha, &amalgam.edge_subgroups()[s]);
    let data = orbit_analysis(&cay, amalgam, alpha)?;
    let t_s = data.class_counts.get(&s).copied().unwrap_or(0);
    let lower: Vec<(usize, usize)> = data
        .class_counts
        .iter()
        .filter(|(&id, _)| id != s)
        .map(|(&id, &t)| (id, t))
        .collect();
    let result = if lower.is_empty() {
        (cay, t_s)
    } else {
        let mut subs = Vec::new();
        for &(id, _) in &lower {
            let size = amalgam.edge_subgroups()[id].len();
            if size >= amalgam.edge_subgroups()[s].len() {
                return Err(Error::Invariant(format!(
                    "stabilizer of order {size} is not below |S|; is A cyclic?"
                )));
            }
            subs.push(claim(amalgam, id, alpha.other(), memo)?);
        }
        let l = subs.iter().fold(1, |acc, (_, k)| acc.lcm(k));
        let side2: Vec<(&LabelledGraph, usize)> = subs
            .iter()
            .zip(&lower)
            .map(|((c, k), &(_, t))| (c, t * l / k))
            .collect();
        let (c, _) = amalgamate(amalgam, alpha, &[(&cay, l, Select::NotStabilizer(s))], &side2)?;
        let n = t_s * l;
        let check = orbit_analysis(&c, amalgam, alpha)?;
        if check.class_counts.len() > 1 || check.class_counts.get(&s).copied().unwrap_or(0) != n {
            return Err(Error::Invariant(format!(
                "claim graph has monochromatic classes {:?}, expected {n} orbits of class {s}",
                check.class_counts
            )));
        }
        (c, n)
    };
    memo.insert((s, alpha.index()), result.clone());
    Ok(result)
}

/// Cover embedding when `A` is cyclic: per stabilizer `S` of the
/// `X_β`-monochromatic orbits, `N` copies of the graph against `m` copies of
/// the claim graph `C`.
pub fn embed_in_cover_cyclic(g: &LabelledGraph, amalgam: &Amalgam, alpha: Factor) -> Result<Embedded> {
    let beta = alpha.other();
    require_saturated(g, amalgam, beta)?;
    let mut memo = HashMap::new();
    let mut cur = Embedded::identity(g);
    loop {
        let data = orbit_analysis(&cur.graph, amalgam, beta)?;
        let Some((&s, &m)) = data.class_counts.iter().next_back() else {
            return Ok(cur);
        };
        let (c, n) = claim(amalgam, s, alpha, &mut memo)?;
        let (next, left) = amalgamate(amalgam, beta, &[(&cur.graph, n, Select::Stabilizer(s))], &[(&c, m)])?;
        cur = cur.then(&left, next).keep_basepoint_component();
    }
}

/// Result of [`glue_stem`]: the enlarged precover, the image of every
/// original vertex, and the vertex the excluded word reads to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stem {
    pub embedded: Embedded,
    pub end: usize,
}

/// Reads the normal form of `w` from the basepoint; wherever a syllable of
/// `G_f` meets a vertex without `X_f` edges, glues `Cayley(G_f, A_v)` along
/// the orbit of that vertex and continues.
pub fn glue_stem(g: &LabelledGraph, amalgam: &Amalgam, w: &Word) -> Result<Stem> {
    let nf = normal_form(amalgam, w);
    let mut cur = Embedded::identity(g);
    if nf.syllables.is_empty() {
        let end = crate::pipeline::reads_to(g, amalgam, w).unwrap_or(g.basepoint);
        return Ok(Stem { embedded: cur, end });
    }
    let mut syllables = Vec::new();
    for (i, &(f, r)) in nf.syllables.iter().enumerate() {
        let e = if i == 0 {
            amalgam.model(f).mul(amalgam.edge.element(nf.prefix, f), r)
        } else {
            r
        };
        syllables.push((f, amalgam.spell(f, e)));
    }
    let mut v = cur.graph.basepoint;
    for (f, word) in syllables {
        if let Some(u) = cur.graph.transitions().read(v, &word).end() {
            v = u;
            continue;
        }
        let report = classify(&cur.graph, amalgam);
        let (next, left) = match report.colour[v] {
            Colour::Mono(other) if other != f => {
                let data = orbit_analysis(&cur.graph, amalgam, other)?;
                let orbit = Orbit {
                    rep: v,
                    stabilizer: data.stabilizer_of[v],
                    ..data.orbits[data.orbit_of[v]].clone()
                };
                let s = &amalgam.edge_subgroups()[orbit.stabilizer];
                let cay = cayley_graph(amalgam, f, s);
                let t = cur.graph.transitions();
                let tc = cay.transitions();
                let pairs = match_orbits(
                    amalgam,
                    (&t, other, vec![&orbit]),
                    (&tc, f, vec![&cay_orbit(amalgam, &cay, f)?]),
                )?;
                let (next, left, _) = glue(&cur.graph, &cay, &pairs)?;
                (next, left)
            }
            Colour::Isolated => {
                let cay = cayley_graph(amalgam, f, &[]);
                let (next, left, _) = glue(&cur.graph, &cay, &[(v, cay.basepoint)])?;
                (next, left)
            }
            _ => {
                return Err(Error::Invariant(format!(
                    "syllable of factor {f} unreadable at a vertex carrying its edges"
                )))
            }
        };
        v = left[v];
        cur = cur.then(&left, next);
        v = cur
            .graph
            .transitions()
            .read(v, &word)
            .end()
            .ok_or_else(|| Error::Invariant("syllable unreadable after gluing".to_string()))?;
    }
    Ok(Stem { embedded: cur, end: v })
}

/// The case of the separability theorem used for a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationCase {
    Cyclic,
    Central(Factor),
    Malnormal(Factor),
}

impl SeparationCase {
    /// The factor `α` whose relative Cayley graphs close the cover.
    pub fn alpha(self) -> Factor {
        match self {
            SeparationCase::Cyclic => Factor::Two,
            SeparationCase::Central(f) | SeparationCase::Malnormal(f) => f,
        }
    }
}

impl fmt::Display for SeparationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationCase::Cyclic => write!(f, "cyclic"),
            SeparationCase::Central(j) => write!(f, "central_in_{j}"),
            SeparationCase::Malnormal(j) => write!(f, "malnormal_in_{j}"),
        }
    }
}

/// Picks a case: cyclic, then central, then malnormal.
pub fn dispatch(amalgam: &Amalgam) -> Result<SeparationCase> {
    let c = amalgam.classification();
    if c.cyclic {
        return Ok(SeparationCase::Cyclic);
    }
    for f in Factor::both() {
        if c.central[f.index()] {
            return Ok(SeparationCase::Central(f));
        }
    }
    for f in Factor::both() {
        if c.malnormal[f.index()] {
            return Ok(SeparationCase::Malnormal(f));
        }
    }
    Err(Error::UnsupportedSeparability)
}

/// A finite-index subgroup `K ≥ H` missing the excluded element, given by its
/// cover `Γ(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingSubgroup {
    pub cover: LabelledGraph,
    /// `[G:K] = |V(Γ(K))|`.
    pub index: usize,
    /// Image in the cover of every vertex of `Γ(H)`.
    pub embedding: Vec<usize>,
    pub case: SeparationCase,
    /// Vertex reached by the excluded word.
    pub excluded_end: usize,
}

/// Checks that `map` is an injective label-preserving morphism from `g` to
/// `target` sending basepoint to basepoint.
pub fn is_embedding(g: &LabelledGraph, target: &LabelledGraph, map: &[usize]) -> bool {
    if map.len() != g.num_vertices || map.iter().any(|&m| m >= target.num_vertices) {
        return false;
    }
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    if distinct.len() != map.len() || map[g.basepoint] != target.basepoint {
        return false;
    }
    let t = target.transitions();
    g.edges
        .iter()
        .all(|e| t.step(map[e.src], Letter::pos(e.gen)) == Some(map[e.dst]))
}

/// Builds a cover of finite index containing `Γ(H)` in which `w` does not
/// label a loop at the basepoint.
pub fn separate(sg: &SubgroupGraph, amalgam: &Amalgam, w: &Word) -> Result<SeparatingSubgroup> {
    if is_member(sg, amalgam, w) {
        return Err(Error::IsMember);
    }
    let case = dispatch(amalgam)?;
    let alpha = case.alpha();
    let beta = alpha.other();
    let (start, start_map) = if sg.graph.is_trivial() {
        (cayley_graph(amalgam, Factor::One, &[]), vec![0])
    } else {
        (sg.graph.clone(), (0..sg.graph.num_vertices).collect())
    };
    let stem = glue_stem(&start, amalgam, w)?;
    let sat = saturate(&stem.embedded.graph, amalgam, beta)?;
    let cover = match case {
        SeparationCase::Cyclic => embed_in_cover_cyclic(&sat.graph, amalgam, alpha)?,
        SeparationCase::Central(_) => embed_in_cover_central(&sat.graph, amalgam, alpha)?,
        SeparationCase::Malnormal(_) => embed_in_cover_malnormal(&sat.graph, amalgam, alpha)?,
    };
    let cover = {
        let order = cover.graph.canonical_order();
        let graph = cover.graph.relabel(&order);
        cover.then(&order, graph)
    };
    let through = |v: usize| cover.map[sat.map[v]];
    let embedding: Vec<usize> = start_map.iter().map(|&v| through(stem.embedded.map[v])).collect();
    let result = SeparatingSubgroup {
        index: cover.graph.num_vertices,
        excluded_end: through(stem.end),
        cover: cover.graph,
        embedding,
        case,
    };
    check_separation(&result, sg, amalgam, w)?;
    Ok(result)
}

/// Re-checks every postcondition of [`separate`].
pub fn check_separation(
    k: &SeparatingSubgroup,
    sg: &SubgroupGraph,
    amalgam: &Amalgam,
    w: &Word,
) -> Result<()> {
    let fail = |m: &str| Err(Error::Invariant(format!("separating cover: {m}")));
    if !k.cover.is_saturated_in(0..2 * amalgam.num_gens()) {
        return fail("not saturated");
    }
    let report = verify_precover(&k.cover, amalgam);
    if !report.ok() {
        return fail(&report.diagnostics.join("; "));
    }
    if k.index != k.cover.num_vertices {
        return fail("index differs from vertex count");
    }
    if !is_embedding(&sg.graph, &k.cover, &k.embedding) {
        return fail("Γ(H) does not embed");
    }
    if let Some(h) = sg.generators.iter().find(|h| !graph_accepts(&k.cover, amalgam, h)) {
        return fail(&format!("generator {} does not loop", amalgam.show(h)));
    }
    if graph_accepts(&k.cover, amalgam, w) || k.excluded_end == k.cover.basepoint {
        return fail("excluded element loops");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{build_subgroup_graph, BuildOptions};
    use crate::presentation::{sl2z_spec, AmalgamSpec};

    fn sl2z() -> Amalgam {
        Amalgam::new(sl2z_spec()).unwrap()
    }

    fn build(g: &Amalgam, ws: &[&str]) -> SubgroupGraph {
        let gens: Vec<Word> = ws.iter().map(|w| g.parse_word(w).unwrap()).collect();
        build_subgroup_graph(g, &gens, &BuildOptions::default())
    }

    fn malnormal_spec() -> Amalgam {
        let spec = AmalgamSpec::from_strs(
            &["s", "r"],
            &["s^2", "r^3", "s r s r"],
            &["u"],
            &["u^4"],
            &[("a", "s", "u^2")],
        )
        .unwrap();
        Amalgam::new(spec).unwrap()
    }

    fn deep_cyclic_spec() -> Amalgam {
        let spec = AmalgamSpec::from_strs(
            &["b"],
            &["b^8"],
            &["z", "s", "r"],
            &["z^4", "s^2", "r^3", "s r s r", "z s z^-1 s^-1", "z r z^-1 r^-1"],
            &[("a", "b^2", "z s")],
        )
        .unwrap();
        Amalgam::new(spec).unwrap()
    }

    #[test]
    fn orbits_of_relative_cayley_graphs() {
        let g = sl2z();
        let a = g.subgroup_id(&[0, 1]);
        let quotient = cayley_graph(&g, Factor::One, &g.edge_subgroups()[a]);
        let d = orbit_analysis(&quotient, &g, Factor::One).unwrap();
        assert!(d.orbits.iter().all(|o| o.len() == 1 && o.stabilizer == a));
        let full = cayley_graph(&g, Factor::One, &[]);
        let d = orbit_analysis(&full, &g, Factor::One).unwrap();
        assert_eq!(d.orbits.len(), 2);
        assert!(d.orbits.iter().all(|o| o.len() == 2 && o.stabilizer == 0));
        assert_eq!(d.lengths, BTreeSet::from([2]));
    }

    #[test]
    fn trivial_graph_is_already_saturated_in_nothing() {
        let g = sl2z();
        let t = LabelledGraph::trivial(g.num_gens());
        let s = saturate(&t, &g, Factor::One).unwrap();
        assert_eq!(s.graph, t);
    }

    #[test]
    fn saturation_of_h1() {
        let g = sl2z();
        let h1 = build(&g, &["x y"]);
        let s = saturate(&h1.graph, &g, Factor::One).unwrap();
        assert!(s.graph.is_saturated_in(g.letters_of(Factor::One)));
        assert!(verify_precover(&s.graph, &g).ok());
        assert!(is_embedding(&h1.graph, &s.graph, &s.map));
        let again = saturate(&s.graph, &g, Factor::One).unwrap();
        assert_eq!(again.graph, s.graph);
    }

    #[test]
    fn paper_example_separation() {
        let g = sl2z();
        let h1 = build(&g, &["x y"]);
        let w = g.parse_word("x y^-1").unwrap();
        let k = separate(&h1, &g, &w).unwrap();
        assert_eq!(k.case, SeparationCase::Cyclic);
        assert!(graph_accepts(&k.cover, &g, &g.parse_word("x y").unwrap()));
        assert!(!graph_accepts(&k.cover, &g, &w));
    }

    #[test]
    fn member_is_rejected() {
        let g = sl2z();
        let h1 = build(&g, &["x y"]);
        let w = g.parse_word("x y x y").unwrap();
        assert_eq!(separate(&h1, &g, &w), Err(Error::IsMember));
    }

    #[test]
    fn cover_needs_no_work() {
        let g = sl2z();
        let h2 = build(&g, &["x y^2 x", "y x y x"]);
        let w = g.parse_word("x").unwrap();
        let k = separate(&h2, &g, &w).unwrap();
        assert_eq!(k.index, 2);
    }

    #[test]
    fn stem_for_unreadable_suffix() {
        let g = sl2z();
        let h = build(&g, &["x^2"]);
        let w = g.parse_word("x y x").unwrap();
        let stem = glue_stem(&h.graph, &g, &w).unwrap();
        assert!(verify_precover(&stem.embedded.graph, &g).ok());
        assert_ne!(stem.end, stem.embedded.graph.basepoint);
        assert_eq!(crate::pipeline::reads_to(&stem.embedded.graph, &g, &w), Some(stem.end));
        let k = separate(&h, &g, &w).unwrap();
        assert!(k.index > 0);
    }

    #[test]
    fn central_and_cyclic_agree_on_validity() {
        let g = sl2z();
        let h1 = build(&g, &["x y"]);
        let s = saturate(&h1.graph, &g, Factor::One).unwrap();
        for cover in [
            embed_in_cover_central(&s.graph, &g, Factor::Two).unwrap(),
            embed_in_cover_cyclic(&s.graph, &g, Factor::Two).unwrap(),
        ] {
            assert!(cover.graph.is_saturated_in(0..4));
            assert!(verify_precover(&cover.graph, &g).ok());
            assert!(is_embedding(&s.graph, &cover.graph, &cover.map));
        }
    }

    #[test]
    fn malnormal_cover() {
        let g = malnormal_spec();
        assert!(g.classification().malnormal[0]);
        for ws in [&["s"][..], &["u"], &["r u"], &["s u r"]] {
            let h = build(&g, ws);
            let s = saturate(&h.graph, &g, Factor::Two).unwrap();
            let cover = embed_in_cover_malnormal(&s.graph, &g, Factor::One).unwrap();
            assert!(cover.graph.is_saturated_in(0..2 * g.num_gens()));
            assert!(verify_precover(&cover.graph, &g).ok());
            assert!(is_embedding(&s.graph, &cover.graph, &cover.map));
        }
    }

    #[test]
    fn malnormal_free_orbits_only() {
        let g = malnormal_spec();
        let cay = cayley_graph(&g, Factor::Two, &[]);
        let cover = embed_in_cover_malnormal(&cay, &g, Factor::One).unwrap();
        assert!(cover.graph.is_saturated_in(0..2 * g.num_gens()));
        assert!(verify_precover(&cover.graph, &g).ok());
    }

    #[test]
    fn claim_recurses_twice() {
        let g = deep_cyclic_spec();
        let c = g.classification();
        assert!(c.cyclic && !c.central[1] && !c.malnormal[1]);
        let top = g.edge_subgroups().len() - 1;
        assert_eq!(g.edge_subgroups()[top].len(), 4);
        let cay = cayley_graph(&g, Factor::Two, &g.edge_subgroups()[top]);
        let d = orbit_analysis(&cay, &g, Factor::Two).unwrap();
        assert!(d.class_counts.len() >= 2);
        let (claim, n) = cyclic_claim(&g, top, Factor::Two).unwrap();
        assert!(n > 0);
        assert!(claim.is_saturated_in(g.letters_of(Factor::Two)));
        assert!(verify_precover(&claim, &g).ok());
    }

    #[test]
    fn deep_cyclic_separation() {
        let g = deep_cyclic_spec();
        let h = build(&g, &["b^2"]);
        let w = g.parse_word("b").unwrap();
        let k = separate(&h, &g, &w).unwrap();
        assert!(graph_accepts(&k.cover, &g, &g.parse_word("z s").unwrap()));
        assert!(!graph_accepts(&k.cover, &g, &w));
    }
}
