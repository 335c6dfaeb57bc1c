//! HLT coset enumeration with coincidence processing.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Default upper bound on the number of cosets defined during one enumeration.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

const UNDEF: usize = usize::MAX;

/// A complete coset table: `action[c][l]` is the coset reached from `c` by
/// letter index `l`. Coset 0 is `H·1`; cosets are numbered in BFS order over
/// letter indices, so equal subgroups give equal tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    pub num_gens: usize,
    pub action: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.action.len()
    }

    pub fn is_empty(&self) -> bool {
        self.action.is_empty()
    }

    pub fn apply(&self, coset: usize, letter: Letter) -> usize {
        self.action[coset][letter.index()]
    }

    pub fn apply_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.apply(c, l))
    }
}

struct Enumerator {
    width: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    cap: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(num_gens: usize, cap: usize) -> Self {
        let width = 2 * num_gens;
        Enumerator {
            width,
            table: vec![UNDEF; width],
            parent: vec![0],
            cap,
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: usize, l: usize) -> usize {
        self.table[c * self.width + l]
    }

    #[inline]
    fn set(&mut self, c: usize, l: usize, d: usize) {
        self.table[c * self.width + l] = d;
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, l: usize) -> Result<usize> {
        let d = self.parent.len();
        if d >= self.cap {
            return Err(Error::CosetCapExceeded(self.cap));
        }
        self.parent.push(d);
        self.table.extend(std::iter::repeat(UNDEF).take(self.width));
        self.set(c, l, d);
        self.set(d, l ^ 1, c);
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for l in 0..self.width {
                let f = self.get(e, l);
                if f == UNDEF {
                    continue;
                }
                if self.get(f, l ^ 1) == e {
                    self.set(f, l ^ 1, UNDEF);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let t = self.get(e1, l);
                if t != UNDEF {
                    self.merge(f1, t);
                    continue;
                }
                let s = self.get(f1, l ^ 1);
                if s != UNDEF {
                    self.merge(e1, s);
                    continue;
                }
                self.set(e1, l, f1);
                self.set(f1, l ^ 1, e1);
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j && self.get(f, w[i as usize]) != UNDEF {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let l = w[i as usize];
                self.set(f, l, b);
                self.set(b, l ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

fn letter_indices(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.index()).collect()
}

/// Enumerates the cosets of `<subgroup>` in `gp< num_gens | relators >`.
/// Fails once more than `cap` cosets have been defined.
pub fn enumerate_cosets(
    num_gens: usize,
    relators: &[Word],
    subgroup: &[Word],
    cap: usize,
) -> Result<CosetTable> {
    let mut en = Enumerator::new(num_gens, cap.max(1));
    let rels: Vec<Vec<usize>> = relators
        .iter()
        .map(|r| r.free_reduce())
        .filter(|r| !r.is_empty())
        .map(|r| letter_indices(&r))
        .collect();
    for h in subgroup {
        en.scan_and_fill(0, &letter_indices(&h.free_reduce()))?;
    }
    let mut c = 0;
    while c < en.parent.len() {
        for r in &rels {
            if !en.alive(c) {
                break;
            }
            en.scan_and_fill(c, r)?;
        }
        for l in 0..en.width {
            if !en.alive(c) {
                break;
            }
            if en.get(c, l) == UNDEF {
                en.define(c, l)?;
            }
        }
        c += 1;
    }
    Ok(standardize(&mut en, num_gens))
}

fn standardize(en: &mut Enumerator, num_gens: usize) -> CosetTable {
    let width = en.width;
    let mut order = vec![UNDEF; en.parent.len()];
    let mut live = vec![en.rep(0)];
    order[live[0]] = 0;
    let mut head = 0;
    while head < live.len() {
        let c = live[head];
        head += 1;
        for l in 0..width {
            let d = en.rep(en.get(c, l));
            if order[d] == UNDEF {
                order[d] = live.len();
                live.push(d);
            }
        }
    }
    let action = live
        .iter()
        .map(|&c| {
            (0..width)
                .map(|l| {
                    let d = en.get(c, l);
                    order[en.rep(d)]
                })
                .collect()
        })
        .collect();
    CosetTable { num_gens, action }
}
