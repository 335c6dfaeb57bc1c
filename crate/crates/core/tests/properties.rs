mod common;

use amalgam_core::decisions::{index, is_free, is_torsion_free, is_trivial};
use amalgam_core::graph::isomorphic;
use amalgam_core::normal_form::{equal_in_g, normal_form};
use amalgam_core::pipeline::{build_subgroup_graph, graph_accepts, is_member, verify_precover, BuildOptions};
use amalgam_core::separability::{is_embedding, orbit_analysis, saturate, separate};
use amalgam_core::subgroup_presentation::compute_presentation;
use amalgam_core::{Amalgam, Error, Factor, Letter, Word};
use common::*;
use proptest::prelude::*;

fn word(num_gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..num_gens, any::<bool>()), 0..=max_len).prop_map(|ls| {
        Word::from_letters(ls.into_iter().map(|(gen, inverse)| Letter { gen, inverse }).collect())
    })
}

fn nonempty_words(num_gens: usize, max_gens: usize, max_len: usize) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(
        word(num_gens, max_len).prop_filter("non-empty", |w| !w.letters().is_empty()),
        1..=max_gens,
    )
}

fn specs() -> Vec<Amalgam> {
    vec![sl2z(), s3_z4(), z8_z4s3()]
}

fn build_in(g: &Amalgam, gens: &[Word]) -> amalgam_core::pipeline::SubgroupGraph {
    build_subgroup_graph(g, gens, &BuildOptions::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_then_parse_is_identity(w in word(2, 12)) {
        let g = sl2z();
        let text = g.show(&w.free_reduce());
        prop_assert_eq!(g.parse_word(&text).unwrap(), w.free_reduce());
    }

    #[test]
    fn free_reduce_is_idempotent_and_shortening(w in word(3, 16)) {
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
    }

    #[test]
    fn relators_close_at_every_element(spec in 0usize..3) {
        let g = &specs()[spec];
        for f in Factor::both() {
            let m = g.model(f);
            for e in 0..m.order() {
                for r in &m.presentation.relators {
                    prop_assert_eq!(m.read(e, r), e);
                }
            }
        }
    }

    #[test]
    fn coset_counts_multiply_to_order(spec in 0usize..3) {
        let g = &specs()[spec];
        for f in Factor::both() {
            for k in g.edge_subgroups() {
                let table = g.relative_cayley_edge(f, k);
                prop_assert_eq!(table.len() * k.len(), g.order(f));
            }
            let transversal = g.transversal(f);
            prop_assert_eq!(transversal.len() * g.edge.order(), g.order(f));
            let mut cosets: Vec<usize> = transversal.iter().map(|&r| g.coset_index(f, r)).collect();
            cosets.sort_unstable();
            cosets.dedup();
            prop_assert_eq!(cosets.len(), transversal.len());
        }
    }

    #[test]
    fn normal_form_ignores_inserted_relators(w in word(2, 10), pos in 0usize..11, which in 0usize..3) {
        let g = sl2z();
        let relators = g.global_relators();
        let r = &relators[which % relators.len()];
        let letters = w.letters();
        let at = pos.min(letters.len());
        let mut with = letters[..at].to_vec();
        with.extend_from_slice(r.letters());
        with.extend_from_slice(&letters[at..]);
        prop_assert_eq!(normal_form(&g, &Word::from_letters(with)), normal_form(&g, &w));
    }

    #[test]
    fn normal_forms_agree_with_matrices(u in word(2, 10), v in word(2, 10)) {
        let g = sl2z();
        let same = sl2z_matrix(&u) == sl2z_matrix(&v);
        prop_assert_eq!(equal_in_g(&g, &u, &v), same);
        prop_assert_eq!(normal_form(&g, &u) == normal_form(&g, &v), same);
    }

    #[test]
    fn long_normal_words_are_not_trivial(w in word(2, 14)) {
        let g = sl2z();
        let nf = normal_form(&g, &w);
        if nf.syllables.len() >= 2 {
            prop_assert!(!nf.is_identity());
            prop_assert_ne!(sl2z_matrix(&w), IDENTITY);
        }
        prop_assert!(equal_in_g(&g, &nf.to_word(&g, Factor::One), &w));
    }

    #[test]
    fn generators_are_members_of_a_precover(spec in 0usize..3, gens in nonempty_words(4, 3, 8)) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let sg = build_in(g, &gens);
        prop_assert!(verify_precover(&sg.graph, g).ok());
        for h in &gens {
            prop_assert!(is_member(&sg, g, h));
        }
    }

    #[test]
    fn membership_is_closed(gens in nonempty_words(2, 3, 6), pick in prop::collection::vec((0usize..3, 0usize..3), 1..6)) {
        let g = sl2z();
        let sg = build_in(&g, &gens);
        for (a, b) in pick {
            let u = &gens[a % gens.len()];
            let w = &gens[b % gens.len()];
            prop_assert!(is_member(&sg, &g, &u.concat(w)));
            prop_assert!(is_member(&sg, &g, &u.inverse()));
            prop_assert!(is_member(&sg, &g, &u.concat(&w.inverse()).concat(u)));
        }
    }

    #[test]
    fn redundant_generators_do_not_change_the_graph(spec in 0usize..2, gens in nonempty_words(3, 3, 8), a in 0usize..3, b in 0usize..3) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let mut more = gens.clone();
        more.push(gens[a % gens.len()].concat(&gens[b % gens.len()].inverse()));
        let g1 = build_in(g, &gens).graph;
        let g2 = build_in(g, &more).graph;
        prop_assert!(isomorphic(&g1, &g2).is_some());
    }

    #[test]
    fn folding_order_does_not_matter(spec in 0usize..3, gens in nonempty_words(4, 4, 8), seed in any::<u64>()) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let base = build_in(g, &gens).graph;
        let options = BuildOptions { order_seed: Some(seed), trace: false };
        let other = build_subgroup_graph(g, &gens, &options).graph;
        prop_assert!(isomorphic(&base, &other).is_some());
    }

    #[test]
    fn presentation_relators_hold_in_g(gens in nonempty_words(2, 3, 6)) {
        let g = sl2z();
        let sg = build_in(&g, &gens);
        let p = compute_presentation(&sg.graph, &g);
        if !sg.graph.is_trivial() {
            prop_assert_eq!(p.generators.len(), sg.graph.num_edges() + 1 - sg.graph.num_vertices);
        }
        for (_, w) in &p.generators {
            prop_assert!(is_member(&sg, &g, w));
        }
        for r in &p.relators {
            prop_assert!(equal_in_g(&g, &p.expand(r), &Word::empty()));
        }
    }

    #[test]
    fn decisions_are_consistent(spec in 0usize..3, gens in nonempty_words(4, 3, 6)) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let sg = build_in(g, &gens);
        let free = is_free(&sg.graph, g).free;
        prop_assert_eq!(free, is_torsion_free(&sg.graph, g));
        if is_trivial(&sg.graph) {
            prop_assert!(free);
        }
        if let Some(k) = index(&sg.graph, g).finite() {
            prop_assert_eq!(k, sg.graph.num_vertices);
            let t = sg.graph.transitions();
            for v in 0..k {
                for r in g.global_relators() {
                    prop_assert_eq!(t.read(v, &r).end(), Some(v));
                }
            }
            let oracle = coset_oracle(g, &gens, 200_000).expect("finite index enumerates");
            prop_assert_eq!(oracle.len(), k);
        }
    }

    #[test]
    fn saturation_embeds_and_saturates(spec in 0usize..3, gens in nonempty_words(4, 3, 6), beta in 0usize..2) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let sg = build_in(g, &gens);
        let beta = Factor::from_index(beta);
        let s = saturate(&sg.graph, g, beta).unwrap();
        prop_assert!(verify_precover(&s.graph, g).ok());
        prop_assert!(is_embedding(&sg.graph, &s.graph, &s.map));
        let report = orbit_analysis(&s.graph, g, beta.other()).unwrap();
        prop_assert_eq!(report.monochromatic().count(), 0);
        if !sg.graph.is_trivial() {
            prop_assert!(s.graph.is_saturated_in(g.letters_of(beta)));
        }
    }

    #[test]
    fn orbit_stabilizer_counts(spec in 0usize..3, gens in nonempty_words(4, 3, 6)) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let sg = build_in(g, &gens);
        for f in Factor::both() {
            let data = orbit_analysis(&sg.graph, g, f).unwrap();
            for o in &data.orbits {
                let stab = g.edge_subgroups()[o.stabilizer].len();
                prop_assert_eq!(o.len() * stab, g.edge.order());
            }
        }
    }

    #[test]
    fn separation_postconditions(spec in 0usize..3, gens in nonempty_words(4, 2, 6), w in word(4, 8)) {
        let g = &specs()[spec];
        let gens: Vec<Word> = gens.into_iter().map(|w| clamp(g, w)).collect();
        let w = clamp(g, w);
        let sg = build_in(g, &gens);
        match separate(&sg, g, &w) {
            Err(Error::IsMember) => prop_assert!(is_member(&sg, g, &w)),
            Err(e) => prop_assert!(false, "separate failed: {}", e),
            Ok(k) => {
                prop_assert!(k.cover.is_saturated_in(0..2 * g.num_gens()));
                prop_assert!(verify_precover(&k.cover, g).ok());
                prop_assert!(gens.iter().all(|h| graph_accepts(&k.cover, g, h)));
                prop_assert!(!graph_accepts(&k.cover, g, &w));
                prop_assert!(is_embedding(&sg.graph, &k.cover, &k.embedding));
            }
        }
    }
}

/// Maps generator indices into the spec's alphabet.
fn clamp(g: &Amalgam, w: Word) -> Word {
    let n = g.num_gens();
    Word::from_letters(
        w.letters()
            .iter()
            .map(|l| Letter {
                gen: l.gen % n,
                inverse: l.inverse,
            })
            .collect(),
    )
}
