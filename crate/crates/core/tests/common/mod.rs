//! Independent oracles for the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use amalgam_core::pipeline::{build_subgroup_graph, BuildOptions, SubgroupGraph};
use amalgam_core::presentation::sl2z_spec;
use amalgam_core::{parse_amalgam, Amalgam, Letter, Word};
use rand::rngs::StdRng;
use rand::Rng;

const UNDEF: usize = usize::MAX;

/// Plain HLT coset enumeration over signed generator indices: `g` is
/// column `2g`, its inverse column `2g + 1`.
pub struct ToddCoxeter {
    width: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: VecDeque<usize>,
    cap: usize,
}

fn inv(col: usize) -> usize {
    col ^ 1
}

impl ToddCoxeter {
    fn find(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.table.len() >= self.cap {
            return false;
        }
        let d = self.table.len();
        self.table.push(vec![UNDEF; self.width]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][inv(x)] = c;
        true
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.queue.push_back(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.width {
                let f = self.table[e][x];
                if f == UNDEF {
                    continue;
                }
                self.table[f][inv(x)] = UNDEF;
                let e1 = self.find(e);
                let f1 = self.find(f);
                if self.table[e1][x] != UNDEF {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][inv(x)] != UNDEF {
                    let t = self.table[f1][inv(x)];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv(x)] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0isize;
        let mut j = w.len() as isize - 1;
        loop {
            while i <= j && self.table[f][w[i as usize]] != UNDEF {
                f = self.table[f][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i && self.table[b][inv(w[j as usize])] != UNDEF {
                b = self.table[b][inv(w[j as usize])];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return true;
            }
            if i == j {
                let x = w[i as usize];
                self.table[f][x] = b;
                self.table[b][inv(x)] = f;
                return true;
            }
            if !self.define(f, w[i as usize]) {
                return false;
            }
        }
    }

    /// Enumerates the cosets of `⟨subgroup⟩`; `None` past `cap` cosets.
    pub fn run(num_gens: usize, relators: &[Vec<usize>], subgroup: &[Vec<usize>], cap: usize) -> Option<CosetOracle> {
        let width = 2 * num_gens;
        let mut tc = ToddCoxeter {
            width,
            table: vec![vec![UNDEF; width]],
            parent: vec![0],
            queue: VecDeque::new(),
            cap,
        };
        for h in subgroup {
            if !tc.scan_and_fill(0, h) {
                return None;
            }
        }
        let mut c = 0;
        while c < tc.table.len() {
            for r in relators {
                if tc.find(c) != c {
                    break;
                }
                if !tc.scan_and_fill(c, r) {
                    return None;
                }
            }
            if tc.find(c) == c {
                for x in 0..width {
                    if tc.table[c][x] == UNDEF && !tc.define(c, x) {
                        return None;
                    }
                }
            }
            c += 1;
        }
        let live: Vec<usize> = (0..tc.table.len()).filter(|&c| tc.parent[c] == c).collect();
        let mut renumber = vec![UNDEF; tc.table.len()];
        for (k, &c) in live.iter().enumerate() {
            renumber[c] = k;
        }
        let mut table = Vec::with_capacity(live.len());
        for &c in &live {
            let row = (0..width).map(|x| {
                let t = tc.table[c][x];
                renumber[tc.find(t)]
            });
            table.push(row.collect::<Vec<usize>>());
        }
        Some(CosetOracle { table })
    }
}

/// A complete coset table.
pub struct CosetOracle {
    pub table: Vec<Vec<usize>>,
}

impl CosetOracle {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn apply(&self, start: usize, w: &[usize]) -> usize {
        w.iter().fold(start, |c, &x| self.table[c][x])
    }
}

pub fn columns(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| 2 * l.gen + usize::from(l.inverse)).collect()
}

/// The full presentation of `G` as column lists.
pub fn full_relators(g: &Amalgam) -> Vec<Vec<usize>> {
    g.global_relators().iter().map(columns).collect()
}

pub fn coset_oracle(g: &Amalgam, subgroup: &[Word], cap: usize) -> Option<CosetOracle> {
    let sub: Vec<Vec<usize>> = subgroup.iter().map(columns).collect();
    ToddCoxeter::run(g.num_gens(), &full_relators(g), &sub, cap)
}

/// Integer 2x2 matrices under `x ↦ [[0,1],[-1,0]]`, `y ↦ [[0,-1],[1,1]]`.
pub type Mat = [[i64; 2]; 2];

pub const IDENTITY: Mat = [[1, 0], [0, 1]];

fn mul(a: Mat, b: Mat) -> Mat {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Matrix image of a word over `{x, y}` (global generators 0 and 1).
pub fn sl2z_matrix(w: &Word) -> Mat {
    let gens: [Mat; 2] = [[[0, 1], [-1, 0]], [[0, -1], [1, 1]]];
    let invs: [Mat; 2] = [[[0, -1], [1, 0]], [[1, 1], [-1, 0]]];
    w.letters().iter().fold(IDENTITY, |m, l| {
        mul(m, if l.inverse { invs[l.gen] } else { gens[l.gen] })
    })
}

/// `w ∈ ⟨xy⟩`: the image is `[[1,k],[0,1]] = (xy)^k` for some `|k| ≤ bound`.
pub fn in_xy(w: &Word, bound: usize) -> bool {
    let m = sl2z_matrix(w);
    (-(bound as i64)..=bound as i64).any(|k| m == [[1, k], [0, 1]])
}

/// `w ∈ ⟨x^2⟩ = {I, -I}`.
pub fn in_x_squared(w: &Word) -> bool {
    let m = sl2z_matrix(w);
    m == IDENTITY || m == [[-1, 0], [0, -1]]
}

pub fn sl2z() -> Amalgam {
    Amalgam::new(sl2z_spec()).unwrap()
}

pub fn s3_z4() -> Amalgam {
    let text = "factor1.generators: s, r\nfactor1.relators: s^2, r^3, s r s r\n\
                factor2.generators: u\nfactor2.relators: u^4\n\
                edge.generators: a\nphi1: a = s\nphi2: a = u^2\n";
    Amalgam::new(parse_amalgam(text).unwrap()).unwrap()
}

pub fn z8_z4s3() -> Amalgam {
    let text = "factor1.generators: b\nfactor1.relators: b^8\n\
                factor2.generators: z, s, r\n\
                factor2.relators: z^4, s^2, r^3, s r s r, z s z^-1 s^-1, z r z^-1 r^-1\n\
                edge.generators: a\nphi1: a = b^2\nphi2: a = z s\n";
    Amalgam::new(parse_amalgam(text).unwrap()).unwrap()
}

pub fn words(g: &Amalgam, texts: &[&str]) -> Vec<Word> {
    texts.iter().map(|t| g.parse_word(t).unwrap()).collect()
}

pub fn build(g: &Amalgam, texts: &[&str]) -> SubgroupGraph {
    build_subgroup_graph(g, &words(g, texts), &BuildOptions::default())
}

pub fn random_word(rng: &mut StdRng, num_gens: usize, len: usize) -> Word {
    Word::from_letters(
        (0..len)
            .map(|_| Letter {
                gen: rng.gen_range(0..num_gens),
                inverse: rng.gen_bool(0.5),
            })
            .collect(),
    )
}

/// Between one and `max_gens` non-empty words of length at most `max_len`.
pub fn random_generators(rng: &mut StdRng, num_gens: usize, max_gens: usize, max_len: usize) -> Vec<Word> {
    let k = rng.gen_range(1..=max_gens);
    (0..k)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_word(rng, num_gens, len)
        })
        .collect()
}

/// Cyclic-word canonical form up to rotation and inversion, over
/// `(gen, inverse)` pairs.
pub fn cyclic_key(w: &[(usize, bool)]) -> Vec<(usize, bool)> {
    let inverse: Vec<(usize, bool)> = w.iter().rev().map(|&(g, i)| (g, !i)).collect();
    let mut best: Option<Vec<(usize, bool)>> = None;
    for base in [w.to_vec(), inverse] {
        for r in 0..base.len().max(1) {
            let mut rot = base[r.min(base.len())..].to_vec();
            rot.extend_from_slice(&base[..r.min(base.len())]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}
