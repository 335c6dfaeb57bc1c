//! The validated amalgam `G = G1 *_A G2` with both factors enumerated and the
//! edge group realised inside each of them.

use std::fmt;

use crate::error::{Error, Result};
use crate::finite_groups::{subgroups_of, CayleyModel};
use crate::presentation::AmalgamSpec;
use crate::todd_coxeter::{CosetTable, DEFAULT_COSET_CAP};
use crate::word::{Alphabet, Letter, Word};

/// Which free factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    One,
    Two,
}

impl Factor {
    pub fn index(self) -> usize {
        match self {
            Factor::One => 0,
            Factor::Two => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Factor::One
        } else {
            Factor::Two
        }
    }

    pub fn other(self) -> Self {
        match self {
            Factor::One => Factor::Two,
            Factor::Two => Factor::One,
        }
    }

    pub fn both() -> [Factor; 2] {
        [Factor::One, Factor::Two]
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// `A` enumerated as pairs `(phi1(a), phi2(a))`. Index 0 is the identity.
#[derive(Debug, Clone)]
pub struct EdgeGroup {
    /// `pairs[k] = [element of G1, element of G2]`.
    pub pairs: Vec<[usize; 2]>,
    /// Per factor: element of `G_i` to index in `A`, if it lies in `phi_i(A)`.
    lookup: [Vec<Option<usize>>; 2],
    /// `mul[a][b]` in `A`.
    mul: Vec<Vec<usize>>,
}

impl EdgeGroup {
    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn element(&self, a: usize, f: Factor) -> usize {
        self.pairs[a][f.index()]
    }

    /// The index in `A` of a factor element, when it lies in the image.
    pub fn locate(&self, f: Factor, element: usize) -> Option<usize> {
        self.lookup[f.index()][element]
    }

    /// Subgroup of `A` generated by the given indices, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let p = self.mul(out[i], g);
                if !out.contains(&p) {
                    out.push(p);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn images(&self, f: Factor, subset: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = subset.iter().map(|&a| self.element(a, f)).collect();
        v.sort_unstable();
        v
    }
}

/// Which cases of the separability theorem apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeClassification {
    pub cyclic: bool,
    pub central: [bool; 2],
    pub malnormal: [bool; 2],
}

impl EdgeClassification {
    pub fn tags(&self) -> Vec<&'static str> {
        let mut tags = Vec::new();
        if self.cyclic {
            tags.push("cyclic");
        }
        for (i, name) in ["malnormal_in_1", "malnormal_in_2"].iter().enumerate() {
            if self.malnormal[i] {
                tags.push(name);
            }
        }
        for (i, name) in ["central_in_1", "central_in_2"].iter().enumerate() {
            if self.central[i] {
                tags.push(name);
            }
        }
        if tags.is_empty() {
            tags.push("none");
        }
        tags
    }
}

/// A validated amalgam. Global generators are numbered `X1` first, then `X2`.
#[derive(Debug, Clone)]
pub struct Amalgam {
    pub spec: AmalgamSpec,
    pub models: [CayleyModel; 2],
    pub edge: EdgeGroup,
    alphabet: Alphabet,
    offset2: usize,
    /// Per factor: transversal element for each right coset `A g`, and the
    /// coset id of every element.
    transversal: [Vec<usize>; 2],
    coset_of: [Vec<usize>; 2],
    /// Subgroups of `A` as sorted index lists, trivial first.
    subgroups: Vec<Vec<usize>>,
    classification: EdgeClassification,
}

impl Amalgam {
    pub fn new(spec: AmalgamSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_COSET_CAP)
    }

    pub fn with_cap(spec: AmalgamSpec, cap: usize) -> Result<Self> {
        for name in spec.factor1.alphabet.names() {
            if spec.factor2.alphabet.index_of(name).is_some() {
                return Err(Error::AlphabetClash(name.clone()));
            }
        }
        let m1 = CayleyModel::enumerate(&spec.factor1, cap)?;
        let m2 = CayleyModel::enumerate(&spec.factor2, cap)?;
        let gens: Vec<[usize; 2]> = spec
            .phi1
            .iter()
            .zip(&spec.phi2)
            .map(|(w1, w2)| [m1.eval(w1), m2.eval(w2)])
            .collect();

        let mut pairs = vec![[0usize, 0usize]];
        let mut i = 0;
        while i < pairs.len() {
            let [p1, p2] = pairs[i];
            for g in &gens {
                let next = [m1.mul(p1, g[0]), m2.mul(p2, g[1])];
                if !pairs.contains(&next) {
                    pairs.push(next);
                }
            }
            i += 1;
        }
        let image1 = m1.closure(&gens.iter().map(|g| g[0]).collect::<Vec<_>>());
        let image2 = m2.closure(&gens.iter().map(|g| g[1]).collect::<Vec<_>>());
        if image1.len() != pairs.len() || image2.len() != pairs.len() {
            return Err(Error::NonInjective {
                image1: image1.len(),
                image2: image2.len(),
                joint: pairs.len(),
            });
        }
        if pairs.len() == m1.order() {
            return Err(Error::ImproperEdgeSubgroup(1));
        }
        if pairs.len() == m2.order() {
            return Err(Error::ImproperEdgeSubgroup(2));
        }

        let mut lookup = [vec![None; m1.order()], vec![None; m2.order()]];
        for (k, p) in pairs.iter().enumerate() {
            lookup[0][p[0]] = Some(k);
            lookup[1][p[1]] = Some(k);
        }
        let mul = pairs
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .map(|q| lookup[0][m1.mul(p[0], q[0])].expect("image is a subgroup"))
                    .collect()
            })
            .collect();
        let edge = EdgeGroup { pairs, lookup, mul };

        let transversal = [m1.coset_transversal(&image1), m2.coset_transversal(&image2)];
        let coset_of = [m1.right_coset_ids(&image1), m2.right_coset_ids(&image2)];
        let all: Vec<usize> = (0..edge.order()).collect();
        let subgroups = subgroups_in_edge(&edge, &m1, &all);

        let mut classification = EdgeClassification {
            cyclic: m1.is_cyclic(&image1),
            ..Default::default()
        };
        for (i, (m, img)) in [(&m1, &image1), (&m2, &image2)].into_iter().enumerate() {
            classification.central[i] = m.commutes_with_all(img);
            classification.malnormal[i] = m.is_malnormal(img);
        }

        let alphabet = spec.global_alphabet();
        let offset2 = spec.factor1.num_gens();
        Ok(Amalgam {
            spec,
            models: [m1, m2],
            edge,
            alphabet,
            offset2,
            transversal,
            coset_of,
            subgroups,
            classification,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_gens(&self) -> usize {
        self.alphabet.len()
    }

    pub fn model(&self, f: Factor) -> &CayleyModel {
        &self.models[f.index()]
    }

    pub fn offset(&self, f: Factor) -> usize {
        match f {
            Factor::One => 0,
            Factor::Two => self.offset2,
        }
    }

    pub fn factor_of(&self, gen: usize) -> Factor {
        if gen < self.offset2 {
            Factor::One
        } else {
            Factor::Two
        }
    }

    /// Global generator range of a factor.
    pub fn gens_of(&self, f: Factor) -> std::ops::Range<usize> {
        match f {
            Factor::One => 0..self.offset2,
            Factor::Two => self.offset2..self.num_gens(),
        }
    }

    /// Letter indices of a factor in the global numbering.
    pub fn letters_of(&self, f: Factor) -> std::ops::Range<usize> {
        let r = self.gens_of(f);
        2 * r.start..2 * r.end
    }

    pub fn classification(&self) -> EdgeClassification {
        self.classification
    }

    pub fn order(&self, f: Factor) -> usize {
        self.model(f).order()
    }

    /// Local factor word to global word.
    pub fn globalize(&self, f: Factor, w: &Word) -> Word {
        w.shifted(self.offset(f))
    }

    /// Global single-factor word to local word.
    pub fn localize(&self, f: Factor, w: &Word) -> Word {
        let off = self.offset(f);
        Word::from_letters(
            w.letters()
                .iter()
                .map(|l| Letter {
                    gen: l.gen - off,
                    inverse: l.inverse,
                })
                .collect(),
        )
    }

    /// Element of `G_f` named by a global single-factor word.
    pub fn eval_in(&self, f: Factor, w: &Word) -> usize {
        let off = self.offset(f);
        let m = self.model(f);
        w.letters().iter().fold(0, |e, l| {
            m.act(
                e,
                Letter {
                    gen: l.gen - off,
                    inverse: l.inverse,
                },
            )
        })
    }

    /// Global word spelling a factor element.
    pub fn spell(&self, f: Factor, element: usize) -> Word {
        self.globalize(f, self.model(f).word(element))
    }

    /// Global word for `phi_f(a)`.
    pub fn spell_edge(&self, a: usize, f: Factor) -> Word {
        self.spell(f, self.edge.element(a, f))
    }

    /// Right coset transversal of `phi_f(A)` in `G_f`, identity first.
    pub fn transversal(&self, f: Factor) -> &[usize] {
        &self.transversal[f.index()]
    }

    /// Index into [`transversal`](Self::transversal) of the coset `A g`.
    pub fn coset_index(&self, f: Factor, element: usize) -> usize {
        self.coset_of[f.index()][element]
    }

    /// Subgroups of `A`, trivial first, ordered by size.
    pub fn edge_subgroups(&self) -> &[Vec<usize>] {
        &self.subgroups
    }

    /// Position of a subgroup (sorted index list) in [`edge_subgroups`](Self::edge_subgroups).
    pub fn subgroup_id(&self, subgroup: &[usize]) -> usize {
        self.subgroups
            .iter()
            .position(|s| s == subgroup)
            .expect("closed subsets of A are listed")
    }

    /// `Cayley(G_f, phi_f(K))` for a subgroup `K` of `A`.
    pub fn relative_cayley_edge(&self, f: Factor, k: &[usize]) -> CosetTable {
        self.model(f).relative_cayley_of(&self.edge.images(f, k))
    }

    /// The full presentation `< X1, X2 | R1, R2, phi1(y) phi2(y)^-1 >` over
    /// the global alphabet.
    pub fn global_relators(&self) -> Vec<Word> {
        let mut rels: Vec<Word> = self
            .spec
            .factor1
            .relators
            .iter()
            .map(|r| self.globalize(Factor::One, r))
            .collect();
        rels.extend(
            self.spec
                .factor2
                .relators
                .iter()
                .map(|r| self.globalize(Factor::Two, r)),
        );
        for (w1, w2) in self.spec.phi1.iter().zip(&self.spec.phi2) {
            let r = self
                .globalize(Factor::One, w1)
                .concat(&self.globalize(Factor::Two, w2).inverse());
            rels.push(r);
        }
        rels
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        crate::word::parse_word(text, &self.alphabet)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.alphabet).to_string()
    }
}

fn subgroups_in_edge(edge: &EdgeGroup, m1: &CayleyModel, all: &[usize]) -> Vec<Vec<usize>> {
    let image: Vec<usize> = all.iter().map(|&a| edge.element(a, Factor::One)).collect();
    let mut out: Vec<Vec<usize>> = subgroups_of(m1, &image)
        .into_iter()
        .map(|s| {
            let mut v: Vec<usize> = s
                .iter()
                .map(|&e| edge.locate(Factor::One, e).expect("inside the image"))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
