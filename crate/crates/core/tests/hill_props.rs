mod common;

use std::collections::BTreeSet;

use common::ast::{formula, freshen, naming_term, term, var_name};
use hillgraph::hill::{alpha_eq, name, parse_formula, parse_sequent, parse_term, Formula, Name, Sequent, Term};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn terms_round_trip(t in term()) {
        let printed = t.to_string();
        prop_assert_eq!(parse_term(&printed).unwrap(), t, "{}", printed);
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_formula(&printed).unwrap(), f, "{}", printed);
    }

    #[test]
    fn sequents_round_trip(g in prop::collection::vec((var_name(), formula()), 0..3),
                           d in prop::collection::vec((var_name(), formula()), 0..3),
                           t in prop::option::of(term()),
                           goal in formula()) {
        let s = Sequent { sigma: [name("x")].into(), gamma: g, delta: d, term: t, goal };
        let printed = s.to_string();
        prop_assert_eq!(parse_sequent(&printed).unwrap(), s, "{}", printed);
    }

    #[test]
    fn alpha_eq_is_an_equivalence(f in formula(), g in formula()) {
        let f1 = freshen(&f, "p");
        let f2 = freshen(&f1, "q");
        prop_assert!(alpha_eq(&f, &f));
        prop_assert!(alpha_eq(&f, &f1) && alpha_eq(&f1, &f));
        prop_assert!(alpha_eq(&f1, &f2) && alpha_eq(&f, &f2));
        prop_assert_eq!(alpha_eq(&f, &g), alpha_eq(&g, &f));
    }

    #[test]
    fn substitution_respects_alpha(f in formula(), x in var_name(), d in naming_term()) {
        let g = freshen(&f, "r");
        let s = vec![(x, d)];
        prop_assert!(alpha_eq(&f.subst(&s), &g.subst(&s)));
    }

    #[test]
    fn substitution_free_vars(f in formula(), i in any::<usize>(), d in naming_term()) {
        let fv = f.free_vars();
        prop_assume!(!fv.is_empty());
        let x = fv.iter().nth(i % fv.len()).unwrap().clone();
        let mut expected: BTreeSet<Name> = fv.into_iter().filter(|y| *y != x).collect();
        expected.extend(d.free_vars());
        prop_assert_eq!(f.subst1(&x, &d).free_vars(), expected);
    }

    #[test]
    fn term_substitution_free_vars(t in term(), i in any::<usize>(), y in var_name()) {
        let fv = t.free_vars();
        prop_assume!(!fv.is_empty());
        let x = fv.iter().nth(i % fv.len()).unwrap().clone();
        let mut expected: BTreeSet<Name> = fv.into_iter().filter(|z| *z != x).collect();
        expected.insert(y.clone());
        prop_assert_eq!(t.subst(&vec![(x, Term::Var(y))]).free_vars(), expected);
    }

    #[test]
    fn separation_agrees_with_counting(ds in prop::collection::vec(naming_term(), 0..5)) {
        let delta: Vec<(Name, Formula)> = ds
            .iter()
            .enumerate()
            .map(|(i, d)| (name(&format!("n{i}")), Formula::loc(Formula::bang(Formula::atom("T")), d.clone())))
            .collect();
        let s = Sequent::new(vec![], delta, None, Formula::One);
        // separated iff the naming terms' variable sets sum to their union
        let total: usize = ds.iter().map(|d| d.free_vars().len()).sum();
        let union: BTreeSet<Name> = ds.iter().flat_map(|d| d.free_vars()).collect();
        prop_assert_eq!(s.separation_violation().is_none(), total == union.len());
        prop_assert_eq!(s.sigma, union);
    }
}
