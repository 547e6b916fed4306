use proptest::prelude::*;

use subcat::cart_std::{from_std, std_equal, std_graph, std_type, to_std};
use subcat::coherence::{conservativity_check, decide_equal};
use subcat::graphs::graph_of;
use subcat::normalize::{aff_normal_form, diagonal_factor_forks, rel_normal_form};
use subcat::oracle::{
    closure_equal, random_diversified_object, random_std_term, random_term, random_walk, replay,
    rewrites, rule_kinds, Budget, OracleVerdict,
};
use subcat::parse::{parse_obj, parse_term};
use subcat::typing::infer_type;
use subcat::{Graph, Kind, Letter};

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(Kind::ALL.to_vec())
}

fn lower_upper() -> impl Strategy<Value = (Kind, Kind)> {
    (kind(), kind()).prop_map(|(a, b)| {
        if a.le(b) {
            (a, b)
        } else if b.le(a) {
            (b, a)
        } else {
            (a, Kind::Cart)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_terms_parse_back(k in kind(), size in 1usize..10, seed in any::<u64>()) {
        let f = random_term(k, size, seed, None);
        prop_assert_eq!(parse_term(&f.to_string()).unwrap(), f.clone());
        let ty = infer_type(&f, k).unwrap();
        prop_assert_eq!(parse_obj(&ty.dom.to_string()).unwrap(), ty.dom);
    }

    #[test]
    fn graphs_are_functorial(k in kind(), size in 1usize..8, seed in any::<u64>()) {
        let f = random_term(k, size, seed, None);
        let cod = infer_type(&f, k).unwrap().cod;
        let g = random_term(k, size, seed ^ 0xabc, Some(&cod));
        let (gf, gg) = (graph_of(&f, k).unwrap(), graph_of(&g, k).unwrap());
        let comp = subcat::MorTerm::comp(g.clone(), f.clone());
        prop_assert_eq!(graph_of(&comp, k).unwrap(), gg.compose(&gf).unwrap());
        let tensor = subcat::MorTerm::tensor(f.clone(), g.clone());
        prop_assert_eq!(graph_of(&tensor, k).unwrap(), gf.tensor(&gg));
    }

    #[test]
    fn graphs_match_the_kind(k in kind(), size in 1usize..10, seed in any::<u64>()) {
        let g = graph_of(&random_term(k, size, seed, None), k).unwrap();
        match k {
            Kind::Mon => prop_assert!(g.is_identity()),
            Kind::SyMon => prop_assert!(g.is_injective() && g.is_surjective()),
            Kind::Rel => prop_assert!(g.is_surjective()),
            Kind::Aff => prop_assert!(g.is_injective()),
            Kind::Cart => {}
        }
    }

    #[test]
    fn graph_json_round_trips(k in kind(), size in 1usize..8, seed in any::<u64>()) {
        let g = graph_of(&random_term(k, size, seed, None), k).unwrap();
        prop_assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn rewrite_steps_preserve_type_and_graph(k in kind(), size in 1usize..6, seed in any::<u64>()) {
        let f = random_term(k, size, seed, None);
        let (ty, g) = (infer_type(&f, k).unwrap(), graph_of(&f, k).unwrap());
        let kinds = rule_kinds();
        for (h, rule, dir) in rewrites(&f, k).unwrap() {
            prop_assert!(kinds[rule].le(k), "{} not admitted at {}", rule, k);
            prop_assert_eq!(&infer_type(&h, k).unwrap(), &ty, "{} {}: {} to {}", rule, dir, f, h);
            prop_assert_eq!(&graph_of(&h, k).unwrap(), &g, "{} {}: {} to {}", rule, dir, f, h);
        }
    }

    #[test]
    fn conservativity_of_decisions((lower, upper) in lower_upper(), size in 1usize..7, seed in any::<u64>()) {
        let f = random_term(lower, size, seed, None);
        let g = random_walk(&f, lower, 3, size + 2, seed ^ 1);
        let h = random_term(lower, size, seed ^ 2, Some(&infer_type(&f, lower).unwrap().dom));
        prop_assert!(conservativity_check(&f, &g, lower, upper).unwrap());
        if infer_type(&h, lower).unwrap().cod == infer_type(&f, lower).unwrap().cod {
            prop_assert!(conservativity_check(&f, &h, lower, upper).unwrap());
        }
    }

    #[test]
    fn rel_normal_forms(size in 1usize..8, letters in 1usize..4, seed in any::<u64>()) {
        let dom = random_diversified_object(letters, seed);
        let f = random_term(Kind::Rel, size, seed ^ 3, Some(&dom));
        let nf = rel_normal_form(&f).unwrap();
        nf.check_shape().unwrap();
        let t = nf.to_term();
        prop_assert_eq!(infer_type(&t, Kind::Rel).unwrap(), infer_type(&f, Kind::Rel).unwrap());
        prop_assert_eq!(graph_of(&t, Kind::Rel).unwrap(), graph_of(&f, Kind::Rel).unwrap());
    }

    #[test]
    fn aff_normal_forms(size in 1usize..8, seed in any::<u64>()) {
        let f = random_term(Kind::Aff, size, seed, None);
        let nf = aff_normal_form(&f).unwrap();
        nf.check_shape().unwrap();
        let t = nf.to_term();
        prop_assert_eq!(infer_type(&t, Kind::Aff).unwrap(), infer_type(&f, Kind::Aff).unwrap());
        prop_assert_eq!(graph_of(&t, Kind::Aff).unwrap(), graph_of(&f, Kind::Aff).unwrap());
    }

    #[test]
    fn diagonal_rounds_decrease(forks in prop::collection::vec(0usize..6, 0..7)) {
        // Fork i may split any of the i + 1 leaves present before it.
        let forks: Vec<usize> = forks.iter().enumerate().map(|(i, f)| f % (i + 1)).collect();
        let fac = diagonal_factor_forks(&Letter::new("p").unwrap(), &forks).unwrap();
        let ns: Vec<usize> = fac.rounds.iter().map(|r| r.n_f).collect();
        prop_assert_eq!(*ns.last().unwrap(), 0);
        prop_assert!(ns.windows(2).all(|w| w[1] < w[0]), "{:?}", ns);
    }

    #[test]
    fn std_translations_round_trip(size in 1usize..8, seed in any::<u64>()) {
        let f = random_term(Kind::Cart, size, seed, None);
        let back = from_std(&to_std(&f).unwrap()).unwrap();
        prop_assert!(decide_equal(&f, &back, Kind::Cart).unwrap().equal, "{} vs {}", f, back);

        let dom = random_diversified_object(1 + (seed % 3) as usize, seed);
        let t = random_std_term(size, seed ^ 5, &dom);
        let again = to_std(&from_std(&t).unwrap()).unwrap();
        prop_assert_eq!(std_type(&again).unwrap(), std_type(&t).unwrap());
        prop_assert!(std_equal(&t, &again).unwrap(), "{} vs {}", t, again);
        prop_assert_eq!(std_graph(&again).unwrap(), std_graph(&t).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_replay_and_agree_with_the_decider(k in kind(), size in 1usize..6, steps in 1usize..4, seed in any::<u64>()) {
        let f = random_term(k, size, seed, None);
        let g = random_walk(&f, k, steps, size + 2, seed ^ 7);
        let v = closure_equal(&f, &g, k, Budget { max_depth: 8, max_states: 20_000 }).unwrap();
        if let OracleVerdict::ProvedEqual { witness } = v {
            replay(&f, &g, &witness, k).unwrap();
            let kinds = rule_kinds();
            prop_assert!(witness.iter().all(|s| kinds[s.rule].le(k)));
            prop_assert!(decide_equal(&f, &g, k).unwrap().equal);
        }
    }
}
