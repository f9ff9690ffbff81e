mod common;

use std::sync::Arc;

use common::graphs::{instance, random_graph, shuffled};
use hillgraph::dpo::{apply, find_matches, successors, Rule};
use hillgraph::encoder::{
    certify_parallel, certify_trace, decode, emit_step_derivation, encode_graph, equivalent, parallel_formulas, verify_correspondence,
    Reading,
};
use hillgraph::hypergraph::{is_isomorphic, Label, NodeId, TypeGraph, TypedHypergraph};
use hillgraph::kernel::{check, invariant_violations};
use indexmap::IndexMap;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decoding_inverts_encoding(seed in any::<u64>()) {
        let g = random_graph(seed);
        let e = encode_graph(&g);
        let r = check(&e.derivation);
        prop_assert!(r.ok, "{}", r);
        let back = decode(e.formula(), g.type_graph()).unwrap();
        prop_assert!(is_isomorphic(&back, &g));
        prop_assert!(equivalent(encode_graph(&back).formula(), e.formula()));
    }

    #[test]
    fn isomorphic_graphs_have_equivalent_representatives(seed in any::<u64>()) {
        let g = random_graph(seed);
        let h = shuffled(&g, seed ^ 0x5eed);
        prop_assert!(equivalent(encode_graph(&g).formula(), encode_graph(&h).formula()));
    }

    #[test]
    fn steps_and_derivations_correspond(seed in any::<u64>()) {
        let (rule, host) = instance(seed);
        let c = verify_correspondence(&host, &rule);
        prop_assert!(c.ok(), "{:?}", c.mismatches);
        for s in successors(&host, [&rule]) {
            let t = emit_step_derivation(&rule, &s.step).unwrap();
            prop_assert!(check(&t).ok);
            prop_assert!(invariant_violations(&t).is_empty());
        }
    }
}

fn types() -> Arc<TypeGraph> {
    let mut tg = TypeGraph::new("TG");
    for t in ["a1", "a2", "a3"] {
        tg.add_node_type(t).unwrap();
    }
    tg.add_edge_type("A", vec!["a1".into(), "a2".into()]).unwrap();
    tg.add_edge_type("B", vec!["a2".into()]).unwrap();
    tg.add_edge_type("C", vec!["a1".into()]).unwrap();
    tg.add_edge_type("D", vec!["a3".into(), "a3".into()]).unwrap();
    Arc::new(tg)
}

fn graph(tg: &Arc<TypeGraph>, nodes: &[(&str, &str)], edges: &[(&str, &str, &[&str])]) -> TypedHypergraph {
    let mut g = TypedHypergraph::new("g", tg.clone());
    for (n, l) in nodes {
        g.add_node(*n, *l).unwrap();
    }
    for (e, l, att) in edges {
        g.add_edge(*e, *l, att.iter().map(|s| NodeId::from(*s)).collect()).unwrap();
    }
    g
}

fn interface(ks: &[(&str, &str)]) -> IndexMap<NodeId, Label> {
    ks.iter().map(|(k, t)| (NodeId::from(*k), Label::from(*t))).collect()
}

/// The running example's rule, a rule dropping `B`, a rule dropping `A`,
/// and the host `C(x1), A(x1,x2), A(x1,x3), B(x2)`.
fn system() -> (Rule, Rule, Rule, TypedHypergraph) {
    let tg = types();
    let host = graph(
        &tg,
        &[("x1", "a1"), ("x2", "a2"), ("x3", "a2")],
        &[("c", "C", &["x1"]), ("a12", "A", &["x1", "x2"]), ("a13", "A", &["x1", "x3"]), ("b", "B", &["x2"])],
    );
    let p = Rule::new(
        "p",
        interface(&[("y1", "a1")]),
        graph(&tg, &[("y1", "a1"), ("y2", "a2")], &[("c", "C", &["y1"]), ("a", "A", &["y1", "y2"])]),
        graph(&tg, &[("y1", "a1"), ("z3", "a3"), ("z4", "a3")], &[("c", "C", &["y1"]), ("d", "D", &["z3", "z4"])]),
    )
    .unwrap();
    let drop_b =
        Rule::new("drop_b", interface(&[("w", "a2")]), graph(&tg, &[("w", "a2")], &[("b", "B", &["w"])]), graph(&tg, &[("w", "a2")], &[]))
            .unwrap();
    let ends = [("s", "a1"), ("t", "a2")];
    let drop_a = Rule::new("drop_a", interface(&ends), graph(&tg, &ends, &[("a", "A", &["s", "t"])]), graph(&tg, &ends, &[])).unwrap();
    (p, drop_b, drop_a, host)
}

#[test]
fn dangling_match_is_excluded_on_both_sides() {
    let (p, _, _, host) = system();
    let c = verify_correspondence(&host, &p);
    assert!(c.ok());
    assert_eq!((c.rewriting, c.certified, c.instantiations), (1, 1, 2));
}

#[test]
fn parallel_rules_differ_from_joint_rule() {
    let (p, drop_b, _, host) = system();
    let (par, joint) = parallel_formulas(&p, &drop_b);
    assert!(!equivalent(&par, &joint));
    let m1 = find_matches(&p, &host)[1].morphism.clone();
    let m2 = find_matches(&drop_b, &host)[0].morphism.clone();
    let s1 = apply(&p, &host, &m1).unwrap();
    let m2_after = find_matches(&drop_b, &s1.result)[0].morphism.clone();
    let result = apply(&drop_b, &s1.result, &m2_after).unwrap().result;
    let t = certify_parallel(&p, &m1, &drop_b, &m2, &host, &result).unwrap();
    let r = check(&t);
    assert!(r.ok, "{r}");
}

#[test]
fn reachability_once_each_and_unrestricted() {
    let (p, drop_b, drop_a, host) = system();
    let rules = vec![p.clone(), drop_b.clone()];
    let s1 = apply(&p, &host, &find_matches(&p, &host)[1].morphism).unwrap();
    let s2 = apply(&drop_b, &s1.result, &find_matches(&drop_b, &s1.result)[0].morphism).unwrap();
    let once = certify_trace(&rules, &host, &[(0, s1), (1, s2)], Reading::Once).unwrap();
    assert!(check(&once).ok, "{}", check(&once));

    // drop_a twice needs the rule unrestricted
    let rules = vec![drop_a.clone()];
    let t1 = apply(&drop_a, &host, &find_matches(&drop_a, &host)[0].morphism).unwrap();
    let t2 = apply(&drop_a, &t1.result, &find_matches(&drop_a, &t1.result)[0].morphism).unwrap();
    let trace = [(0, t1), (0, t2)];
    let many = certify_trace(&rules, &host, &trace, Reading::Unrestricted).unwrap();
    assert!(check(&many).ok, "{}", check(&many));
    assert!(certify_trace(&rules, &host, &trace, Reading::Once).is_err());
}
