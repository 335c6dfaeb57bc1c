//! Normal forms in `G = G1 *_A G2`.
//!
//! A canonical form is `a · r1 · r2 ⋯ rn` where `a ∈ A` and each `ri` is a
//! non-trivial right coset representative of `A` in alternating factors.

use std::fmt;

use crate::amalgam::{Amalgam, Factor};
use crate::word::Word;

/// Canonical representative of an element of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalWord {
    /// Index into `A`.
    pub prefix: usize,
    /// `(factor, transversal element)` pairs; factors alternate and no
    /// element lies in `A`.
    pub syllables: Vec<(Factor, usize)>,
}

impl NormalWord {
    pub fn is_identity(&self) -> bool {
        self.prefix == 0 && self.syllables.is_empty()
    }

    /// Syllable length: the number of syllables, or 1 for a non-trivial
    /// element of `A`.
    pub fn syllable_length(&self) -> usize {
        if self.syllables.is_empty() {
            usize::from(self.prefix != 0)
        } else {
            self.syllables.len()
        }
    }

    /// Serialized as `[A: <word>] (<factor>:<rep>)*`.
    pub fn render(&self, g: &Amalgam) -> String {
        let mut out = format!("[A: {}]", g.show(&g.spell_edge(self.prefix, Factor::One)));
        for &(f, r) in &self.syllables {
            out.push_str(&format!(" ({}:{})", f, g.show(&g.spell(f, r))));
        }
        out
    }

    /// A normal word spelling the element. The `A`-prefix is absorbed into the
    /// first syllable; a lone `A`-element is spelled in `lone`.
    pub fn to_word(&self, g: &Amalgam, lone: Factor) -> Word {
        match self.syllables.split_first() {
            None => g.spell_edge(self.prefix, lone),
            Some((&(f, r), rest)) => {
                let first = g.model(f).mul(g.edge.element(self.prefix, f), r);
                let mut w = g.spell(f, first);
                for &(f, r) in rest {
                    w = w.concat(&g.spell(f, r));
                }
                w
            }
        }
    }

    pub fn display<'a>(&'a self, g: &'a Amalgam) -> NormalWordDisplay<'a> {
        NormalWordDisplay { nw: self, g }
    }
}

pub struct NormalWordDisplay<'a> {
    nw: &'a NormalWord,
    g: &'a Amalgam,
}

impl fmt::Display for NormalWordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.nw.render(self.g))
    }
}

/// Reduced syllable sequence of `w`: adjacent syllables lie in different
/// factors, and with two or more syllables none lies in `A`.
pub fn reduced_syllables(g: &Amalgam, w: &Word) -> Vec<(Factor, usize)> {
    let mut stack: Vec<(Factor, usize)> = Vec::new();
    for (f, part) in w.runs_by(|l| g.factor_of(l.gen)) {
        let mut f = f;
        let mut e = g.eval_in(f, &part);
        loop {
            if e == 0 {
                break;
            }
            let Some(&(tf, th)) = stack.last() else {
                stack.push((f, e));
                break;
            };
            if tf == f {
                stack.pop();
                e = g.model(f).mul(th, e);
                continue;
            }
            if let Some(a) = g.edge.locate(tf, th) {
                stack.pop();
                e = g.model(f).mul(g.edge.element(a, f), e);
                continue;
            }
            if let Some(a) = g.edge.locate(f, e) {
                stack.pop();
                e = g.model(tf).mul(th, g.edge.element(a, tf));
                f = tf;
                continue;
            }
            stack.push((f, e));
            break;
        }
    }
    stack
}

/// Canonical form of the element represented by `w`.
pub fn normal_form(g: &Amalgam, w: &Word) -> NormalWord {
    let stack = reduced_syllables(g, w);
    let mut carry = 0usize;
    let mut syllables = Vec::with_capacity(stack.len());
    for &(f, e) in stack.iter().rev() {
        let m = g.model(f);
        let x = m.mul(e, g.edge.element(carry, f));
        match g.edge.locate(f, x) {
            Some(a) => {
                carry = a;
            }
            None => {
                let r = g.transversal(f)[g.coset_index(f, x)];
                let a_part = m.mul(x, m.inverse(r));
                carry = g.edge.locate(f, a_part).expect("x r^-1 lies in A");
                syllables.push((f, r));
            }
        }
    }
    syllables.reverse();
    NormalWord {
        prefix: carry,
        syllables,
    }
}

pub fn equal_in_g(g: &Amalgam, w1: &Word, w2: &Word) -> bool {
    normal_form(g, &w1.concat(&w2.inverse())).is_identity()
}

pub fn syllable_length(g: &Amalgam, w: &Word) -> usize {
    normal_form(g, w).syllable_length()
}
