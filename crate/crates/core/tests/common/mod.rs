#![allow(dead_code)]

use std::collections::HashSet;

use hillgraph::dpo::Rule;
use hillgraph::hypergraph::{check_morphism, EdgeId, Morphism, NodeId, TypedHypergraph};
use indexmap::IndexMap;

/// Every morphism `src → tgt`, by filtering all total maps.
pub fn all_morphisms(src: &TypedHypergraph, tgt: &TypedHypergraph) -> Vec<Morphism> {
    let sn: Vec<&NodeId> = src.node_ids().collect();
    let se: Vec<&EdgeId> = src.edge_ids().collect();
    let tn: Vec<&NodeId> = tgt.node_ids().collect();
    let te: Vec<&EdgeId> = tgt.edge_ids().collect();
    let mut out = Vec::new();
    if (!sn.is_empty() && tn.is_empty()) || (!se.is_empty() && te.is_empty()) {
        return out;
    }
    let total = tn.len().pow(sn.len() as u32) * te.len().pow(se.len() as u32);
    for mut code in 0..total {
        let mut m = Morphism::default();
        for n in &sn {
            m.node_map.insert((*n).clone(), tn[code % tn.len()].clone());
            code /= tn.len();
        }
        for e in &se {
            m.edge_map.insert((*e).clone(), te[code % te.len()].clone());
            code /= te.len();
        }
        if check_morphism(src, tgt, &m) {
            out.push(m);
        }
    }
    out
}

fn deleted_nodes(rule: &Rule) -> Vec<NodeId> {
    let kept: HashSet<&NodeId> = rule.l.values().collect();
    rule.lhs.node_ids().filter(|n| !kept.contains(n)).cloned().collect()
}

/// The identification condition read literally: for x deleted and y any
/// element of the same sort, m(x) = m(y) implies x = y.
pub fn naive_identification(rule: &Rule, m: &Morphism) -> bool {
    for x in deleted_nodes(rule) {
        for y in rule.lhs.node_ids() {
            if m.node_map[&x] == m.node_map[y] && &x != y {
                return false;
            }
        }
    }
    for x in rule.lhs.edge_ids() {
        for y in rule.lhs.edge_ids() {
            if m.edge_map[x] == m.edge_map[y] && x != y {
                return false;
            }
        }
    }
    true
}

/// The dangling condition over all (host node, host edge) pairs.
pub fn naive_dangling(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> bool {
    let deleted = deleted_nodes(rule);
    for v in host.node_ids() {
        let is_deleted_image = deleted.iter().any(|x| &m.node_map[x] == v);
        if !is_deleted_image {
            continue;
        }
        for (e, edge) in host.edges() {
            let attached = edge.attach.contains(v);
            let matched = m.edge_map.values().any(|f| f == e);
            if attached && !matched {
                return false;
            }
        }
    }
    true
}

/// The result graph built set-theoretically: drop m(L∖K), add a tagged copy
/// of R∖K glued along m∘l.
pub fn naive_result(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> TypedHypergraph {
    let mut h = TypedHypergraph::new("H", host.type_graph().clone());
    let deleted: HashSet<NodeId> = deleted_nodes(rule).iter().map(|x| m.node_map[x].clone()).collect();
    let gone: HashSet<&EdgeId> = m.edge_map.values().collect();
    for (n, t) in host.nodes() {
        if !deleted.contains(n) {
            h.add_node(format!("g.{n}"), t.clone()).unwrap();
        }
    }
    for (e, edge) in host.edges() {
        if !gone.contains(e) {
            let att = edge.attach.iter().map(|n| NodeId::from(format!("g.{n}"))).collect();
            h.add_edge(format!("g.{e}"), edge.label.clone(), att).unwrap();
        }
    }
    let r_inv: IndexMap<&NodeId, &NodeId> = rule.r.iter().map(|(k, rk)| (rk, k)).collect();
    let name = |n: &NodeId| match r_inv.get(n) {
        Some(k) => NodeId::from(format!("g.{}", m.node_map[&rule.l[*k]])),
        None => NodeId::from(format!("r.{n}")),
    };
    for (n, t) in rule.rhs.nodes() {
        if !r_inv.contains_key(n) {
            h.add_node(name(n), t.clone()).unwrap();
        }
    }
    for (e, edge) in rule.rhs.edges() {
        h.add_edge(format!("r.{e}"), edge.label.clone(), edge.attach.iter().map(name).collect()).unwrap();
    }
    h
}

pub mod ast {
    use hillgraph::hill::{name, Arg, Formula, Name, Pattern, Term};
    use proptest::prelude::*;

    pub fn var_name() -> impl Strategy<Value = Name> {
        prop::sample::select(vec!["x", "y", "z", "u", "v", "n", "x_1", "w2"]).prop_map(name)
    }

    fn pred_name() -> impl Strategy<Value = Name> {
        prop::sample::select(vec!["A", "B", "E", "T", "a1"]).prop_map(name)
    }

    pub fn pattern() -> impl Strategy<Value = Pattern> {
        let leaf = prop_oneof![var_name().prop_map(Pattern::Var), Just(Pattern::Nil), var_name().prop_map(Pattern::Copy),];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Pattern::Pair(Box::new(a), Box::new(b))),
                (var_name(), var_name(), inner.clone()).prop_map(|(x, n, p)| Pattern::Eps(x, n, Box::new(p))),
                inner.prop_map(|p| Pattern::Bang(Box::new(p))),
            ]
        })
    }

    pub fn term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![var_name().prop_map(Term::Var), Just(Term::Nil), var_name().prop_map(Term::Copy)];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
                (inner.clone(), var_name(), inner.clone()).prop_map(|(d, n, m)| Term::eps(d, n, m)),
                (var_name(), inner.clone()).prop_map(|(x, m)| Term::lam(x, m)),
                (var_name(), inner.clone()).prop_map(|(x, m)| Term::llam(x, m)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::lapp(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
                inner.clone().prop_map(Term::bang),
                (prop::collection::vec(var_name(), 0..3), inner.clone()).prop_map(|(xs, m)| Term::Discard(xs, Box::new(m))),
                (pattern(), inner.clone(), inner).prop_map(|(p, n, m)| Term::let_(p, n, m)),
            ]
        })
    }

    /// Non-linear naming terms: `x` or `!x`.
    pub fn naming_term() -> impl Strategy<Value = Term> {
        prop_oneof![var_name().prop_map(Term::Var), var_name().prop_map(|x| Term::bang(Term::Var(x)))]
    }

    fn node_type() -> impl Strategy<Value = Formula> {
        prop_oneof![pred_name().prop_map(|n| Formula::Pred(n, vec![])), pred_name().prop_map(|n| Formula::bang(Formula::Pred(n, vec![]))),]
    }

    /// Formulas whose embedded terms are naming terms.
    pub fn formula() -> impl Strategy<Value = Formula> {
        let arg = (naming_term(), prop::option::weighted(0.2, node_type())).prop_map(|(term, ty)| Arg { term, ty });
        let leaf =
            prop_oneof![(pred_name(), prop::collection::vec(arg, 0..3)).prop_map(|(n, args)| Formula::Pred(n, args)), Just(Formula::One),];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::lolli(a, b)),
                inner.clone().prop_map(Formula::bang),
                (var_name(), node_type(), inner.clone()).prop_map(|(x, t, b)| Formula::forall(x, t, b)),
                (var_name(), node_type(), inner.clone()).prop_map(|(x, t, b)| Formula::hide(x, t, b)),
                (inner, naming_term()).prop_map(|(a, d)| Formula::loc(a, d)),
            ]
        })
    }

    /// Renames every binder of a formula to a name of the form `b<k><tag>`.
    pub fn freshen(f: &Formula, tag: &str) -> Formula {
        let mut k = 0;
        freshen_at(f, tag, &mut k)
    }

    fn freshen_at(f: &Formula, tag: &str, k: &mut usize) -> Formula {
        match f {
            Formula::Forall(x, t, b) | Formula::Hide(x, t, b) => {
                *k += 1;
                let y = name(&format!("b{k}{tag}"));
                let body = freshen_at(&b.subst1(x, &Term::Var(y.clone())), tag, k);
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(y, t.as_ref().clone(), body)
                } else {
                    Formula::hide(y, t.as_ref().clone(), body)
                }
            }
            Formula::Tensor(a, b) => Formula::tensor(freshen_at(a, tag, k), freshen_at(b, tag, k)),
            Formula::Lolli(a, b) => Formula::lolli(freshen_at(a, tag, k), freshen_at(b, tag, k)),
            Formula::Bang(a) => Formula::bang(freshen_at(a, tag, k)),
            Formula::Loc(a, d) => Formula::loc(freshen_at(a, tag, k), d.clone()),
            Formula::Pred(..) | Formula::One => f.clone(),
        }
    }
}

pub mod laws {
    use hillgraph::hill::{parse_formula, Formula};

    /// Pairs proved equivalent in both directions.
    pub const EQUIVALENCES: &[(&str, &str, &str)] = &[
        ("renaming", "ex x:T. E(x)", "ex y:T. E(y)"),
        ("permutation", "ex x y:T. E(x,y)", "ex y x:T. E(x,y)"),
        ("extrusion", "ex x:T. B * E(x)", "B * (ex x:T. E(x))"),
    ];

    pub const ONE_WAY: &[(&str, &str)] = &[("distribution", "(ex x:T. (B -o E(x))) -o (B -o ex x:T. E(x))")];

    /// Valid for the ordinary existential, not for hiding.
    pub const NON_THEOREMS: &[(&str, &str)] = &[
        ("diagonal", "(ex x:T. E(x,x)) -o ex x y:T. E(x,y)"),
        ("capture", "all x:T. ((ex z:T. E(z,z)) -o ex y:T. E(y,x))"),
        ("splitting", "(ex y x:T. E1(x) * E2(x)) -o (ex x:T. E1(x)) * (ex x:T. E2(x))"),
        ("vacuous elimination", "(ex x:T. B) -o B"),
        ("vacuous introduction", "B -o ex x:T. B"),
    ];

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    /// Every goal expected to be provable, labelled.
    pub fn theorems() -> Vec<(String, Formula)> {
        let mut out = Vec::new();
        for (label, a, b) in EQUIVALENCES {
            let (a, b) = (f(a), f(b));
            out.push((format!("{label} ->"), Formula::lolli(a.clone(), b.clone())));
            out.push((format!("{label} <-"), Formula::lolli(b.clone(), a.clone())));
            out.push((format!("{label} both"), Formula::tensor(Formula::lolli(a.clone(), b.clone()), Formula::lolli(b, a))));
        }
        for (label, s) in ONE_WAY {
            out.push((label.to_string(), f(s)));
        }
        out
    }

    pub fn non_theorems() -> Vec<(String, Formula)> {
        NON_THEOREMS.iter().map(|(l, s)| (l.to_string(), f(s))).collect()
    }
}

pub mod mutate {
    use hillgraph::hill::{name, Arg, Formula, Sequent, Term};
    use hillgraph::kernel::{ProofTree, RuleTag};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reseal(s: &Sequent) -> Sequent {
        Sequent::new(s.gamma.clone(), s.delta.clone(), s.term.clone(), s.goal.clone())
    }

    /// One corruption of one node, chosen by `seed`. `None` when the chosen
    /// corruption does not apply or changes nothing.
    pub fn mutate(tree: &ProofTree, seed: u64) -> Option<(String, ProofTree)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let paths: Vec<Vec<usize>> = tree.nodes().into_iter().map(|(p, _)| p).collect();
        let path = paths.choose(&mut rng)?.clone();
        let mut out = tree.clone();
        let t = out.node_mut(&path)?;
        let kind = rng.gen_range(0..8);
        let label = match kind {
            0 => {
                let old = t.inst.split.clone()?;
                let names: Vec<_> = t.conclusion.delta.iter().map(|(u, _)| u.clone()).collect();
                let new: Vec<_> = names.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                let same = new.len() == old.len() && new.iter().all(|u| old.contains(u));
                if same {
                    return None;
                }
                t.inst.split = Some(new);
                "split"
            }
            1 => {
                let locs: Vec<usize> =
                    (0..t.conclusion.delta.len()).filter(|i| matches!(t.conclusion.delta[*i].1, Formula::Loc(..))).collect();
                let i = *locs.choose(&mut rng)?;
                t.conclusion.delta.remove(i);
                t.conclusion = reseal(&t.conclusion);
                "drop location"
            }
            2 => {
                let extra = t
                    .conclusion
                    .gamma
                    .iter()
                    .map(|(x, _)| x.clone())
                    .find(|x| !t.conclusion.sigma.contains(x))
                    .unwrap_or_else(|| name("zz"));
                t.conclusion.sigma.insert(extra);
                "extra nominal"
            }
            3 => {
                if t.rule != RuleTag::ExR {
                    return None;
                }
                let Some(Term::Eps(d, _, _)) = &t.conclusion.term else { return None };
                let Formula::Hide(x, b, a) = &t.conclusion.goal else { return None };
                if d.free_vars().contains(x) {
                    return None;
                }
                let leak = Formula::Pred(name("E"), vec![Arg { term: (**d).clone(), ty: None }]);
                t.conclusion.goal = Formula::hide(x.clone(), (**b).clone(), Formula::tensor((**a).clone(), leak));
                "freshness"
            }
            4 => {
                let bogus = Term::Var(name("zz"));
                if t.conclusion.term.as_ref() == Some(&bogus) {
                    return None;
                }
                t.conclusion.term = Some(bogus);
                "term"
            }
            5 => {
                let others: Vec<RuleTag> = RuleTag::ALL.iter().copied().filter(|r| *r != t.rule && r.arity() == t.rule.arity()).collect();
                t.rule = *others.choose(&mut rng)?;
                "rule tag"
            }
            6 => {
                if t.premises.is_empty() {
                    return None;
                }
                let i = rng.gen_range(0..t.premises.len());
                t.premises.remove(i);
                "drop premise"
            }
            _ => {
                if t.premises.len() < 2 {
                    return None;
                }
                let i = rng.gen_range(0..t.premises.len());
                let j = (i + 1) % t.premises.len();
                if t.premises[i] == t.premises[j] {
                    return None;
                }
                t.premises.swap(i, j);
                "swap premises"
            }
        };
        (out != *tree).then(|| (format!("{label} at {path:?}"), out))
    }
}

pub mod graphs {
    use hillgraph::dpo::Rule;
    use hillgraph::gen;
    use hillgraph::hypergraph::{NodeId, TypedHypergraph};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// A host of at most 6 nodes and 6 edges and a rule of at most 3
    /// elements per side.
    pub fn instance(seed: u64) -> (Rule, TypedHypergraph) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tg = gen::small_type_graph();
        let rule = gen::rule(&mut rng, &tg, 3, "p");
        let host = gen::host_for(&mut rng, &rule, 6, 6);
        (rule, host)
    }

    pub fn random_graph(seed: u64) -> TypedHypergraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        gen::graph(&mut rng, &gen::small_type_graph(), 6, 6)
    }

    /// An isomorphic copy with new identifiers and shuffled insertion order.
    pub fn shuffled(g: &TypedHypergraph, seed: u64) -> TypedHypergraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes: Vec<_> = g.nodes().collect();
        let mut edges: Vec<_> = g.edges().collect();
        nodes.shuffle(&mut rng);
        edges.shuffle(&mut rng);
        let rename = |n: &NodeId| NodeId::from(format!("w_{n}"));
        let mut h = TypedHypergraph::new("copy", g.type_graph().clone());
        for (n, t) in nodes {
            h.add_node(rename(n), t.clone()).unwrap();
        }
        for (i, (_, e)) in edges.into_iter().enumerate() {
            h.add_edge(format!("f{i}"), e.label.clone(), e.attach.iter().map(rename).collect()).unwrap();
        }
        h
    }
}
