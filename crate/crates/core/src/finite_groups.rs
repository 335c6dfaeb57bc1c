//! Finite factors as concrete Cayley tables: element arithmetic, relative
//! Cayley graphs, subgroup closures and right coset transversals.

use std::collections::VecDeque;

use crate::error::Result;
use crate::presentation::GroupPresentation;
use crate::todd_coxeter::{enumerate_cosets, CosetTable};
use crate::word::{Letter, Word};

/// A finite group given by its Cayley table. Element 0 is the identity and
/// elements are numbered in shortlex order of their words over the positive
/// generators.
#[derive(Debug, Clone)]
pub struct CayleyModel {
    pub presentation: GroupPresentation,
    /// `table[e][l]` is `e · letter(l)`.
    table: Vec<Vec<usize>>,
    words: Vec<Word>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl CayleyModel {
    /// Coset enumeration over the trivial subgroup.
    pub fn enumerate(presentation: &GroupPresentation, cap: usize) -> Result<Self> {
        let n = presentation.num_gens();
        let coset_table = enumerate_cosets(n, &presentation.relators, &[], cap)?;
        let order = coset_table.len();

        // Renumber by BFS over positive generators.
        let mut id = vec![usize::MAX; order];
        let mut old_of = vec![0usize];
        let mut words = vec![Word::empty()];
        id[0] = 0;
        let mut head = 0;
        while head < old_of.len() {
            let c = old_of[head];
            for g in 0..n {
                let d = coset_table.apply(c, Letter::pos(g));
                if id[d] == usize::MAX {
                    id[d] = old_of.len();
                    old_of.push(d);
                    let mut w = words[head].clone();
                    w.push(Letter::pos(g));
                    words.push(w);
                }
            }
            head += 1;
        }
        let table: Vec<Vec<usize>> = old_of
            .iter()
            .map(|&c| coset_table.action[c].iter().map(|&d| id[d]).collect())
            .collect();

        // e · g for g in BFS order: e · (parent · letter) = (e · parent) · letter.
        let mut mul = vec![vec![0usize; order]; order];
        for (e, row) in mul.iter_mut().enumerate() {
            row[0] = e;
            for g in 1..order {
                let last = *words[g].letters().last().expect("non-identity has a word");
                let parent = table[g][last.inv().index()];
                row[g] = table[row[parent]][last.index()];
            }
        }
        let inv = (0..order)
            .map(|e| (0..order).find(|&f| mul[e][f] == 0).expect("groups have inverses"))
            .collect();

        Ok(CayleyModel {
            presentation: presentation.clone(),
            table,
            words,
            mul,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn num_gens(&self) -> usize {
        self.presentation.num_gens()
    }

    pub const fn identity(&self) -> usize {
        0
    }

    pub fn act(&self, e: usize, l: Letter) -> usize {
        self.table[e][l.index()]
    }

    /// The element reached from `e` by reading `w`.
    pub fn read(&self, e: usize, w: &Word) -> usize {
        w.letters().iter().fold(e, |e, &l| self.act(e, l))
    }

    pub fn eval(&self, w: &Word) -> usize {
        self.read(0, w)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Shortlex word over the positive generators.
    pub fn word(&self, e: usize) -> &Word {
        &self.words[e]
    }

    pub fn element_order(&self, e: usize) -> usize {
        let mut k = 1;
        let mut p = e;
        while p != 0 {
            p = self.mul(p, e);
            k += 1;
        }
        k
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let f = self.mul(e, g);
                if !seen[f] {
                    seen[f] = true;
                    out.push(f);
                    queue.push_back(f);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The table view of `Cayley(G, S)` for the subgroup `S` generated by
    /// `subgroup_gens`; coset 0 is `S·1`.
    pub fn relative_cayley(&self, subgroup_gens: &[usize]) -> CosetTable {
        let subgroup = self.closure(subgroup_gens);
        self.relative_cayley_of(&subgroup)
    }

    /// As [`relative_cayley`](Self::relative_cayley) with words for the generators.
    pub fn relative_cayley_words(&self, subgroup_words: &[Word]) -> CosetTable {
        let gens: Vec<usize> = subgroup_words.iter().map(|w| self.eval(w)).collect();
        self.relative_cayley(&gens)
    }

    /// `Cayley(G, S)` for an explicit subgroup; cosets numbered by the first
    /// element (in element order) they contain.
    pub fn relative_cayley_of(&self, subgroup: &[usize]) -> CosetTable {
        let coset_of = self.right_coset_ids(subgroup);
        let num_cosets = coset_of.iter().max().map_or(0, |m| m + 1);
        let mut reps = vec![usize::MAX; num_cosets];
        for (e, &c) in coset_of.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = e;
            }
        }
        let action = reps
            .iter()
            .map(|&r| {
                (0..2 * self.num_gens())
                    .map(|l| coset_of[self.table[r][l]])
                    .collect()
            })
            .collect();
        CosetTable {
            num_gens: self.num_gens(),
            action,
        }
    }

    /// Coset id of each element for right cosets `S g`, ids assigned in
    /// element order.
    pub fn right_coset_ids(&self, subgroup: &[usize]) -> Vec<usize> {
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut next = 0;
        for g in 0..self.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &s in subgroup {
                coset_of[self.mul(s, g)] = next;
            }
            next += 1;
        }
        coset_of
    }

    /// One representative element per right coset `S g`: the first element in
    /// shortlex order. The identity coset comes first.
    pub fn coset_transversal(&self, subgroup: &[usize]) -> Vec<usize> {
        let coset_of = self.right_coset_ids(subgroup);
        let mut reps = Vec::new();
        for (g, &c) in coset_of.iter().enumerate() {
            if c == reps.len() {
                reps.push(g);
            }
        }
        reps
    }

    pub fn commutes_with_all(&self, subset: &[usize]) -> bool {
        subset
            .iter()
            .all(|&a| (0..self.order()).all(|g| self.mul(a, g) == self.mul(g, a)))
    }

    /// `g^-1 S g ∩ S = 1` for every `g` outside `S`.
    pub fn is_malnormal(&self, subgroup: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &s in subgroup {
            member[s] = true;
        }
        (0..self.order()).filter(|&g| !member[g]).all(|g| {
            let gi = self.inverse(g);
            subgroup
                .iter()
                .filter(|&&s| s != 0)
                .all(|&s| !member[self.mul(self.mul(gi, s), g)])
        })
    }

    /// Whether some element of the subgroup generates it.
    pub fn is_cyclic(&self, subgroup: &[usize]) -> bool {
        subgroup
            .iter()
            .any(|&s| self.element_order(s) == subgroup.len())
    }

    /// Plain-text coset table: one row per element, one column per generator.
    pub fn table_text(&self) -> String {
        table_text(&self.table, self.num_gens())
    }
}

/// Rows are cosets, columns the images under each positive generator.
pub fn table_text(action: &[Vec<usize>], num_gens: usize) -> String {
    let mut out = String::new();
    for row in action {
        let cells: Vec<String> = (0..num_gens)
            .map(|g| row[Letter::pos(g).index()].to_string())
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// All subgroups of the group generated by `elements`' ambient model,
/// restricted to subgroups of `ambient` (itself a subgroup). Sorted by order,
/// then lexicographically; the trivial subgroup is first.
pub fn subgroups_of(model: &CayleyModel, ambient: &[usize]) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = vec![vec![0]];
    let mut i = 0;
    while i < found.len() {
        let current = found[i].clone();
        for &a in ambient {
            if current.binary_search(&a).is_ok() {
                continue;
            }
            let mut gens = current.clone();
            gens.push(a);
            let next = model.closure(&gens);
            if !found.contains(&next) {
                found.push(next);
            }
        }
        i += 1;
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}
