//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::graphs::{instance, random_graph};
use common::{all_morphisms, laws, mutate::mutate, naive_dangling, naive_identification};
use hillgraph::dpo::{apply, check_dangling, check_identification, find_matches, pushout_complement, successors, Rule};
use hillgraph::encoder::{decode, emit_step_derivation, encode_graph, equivalent, represent_rule, verify_correspondence};
use hillgraph::hill::{parse_formula, parse_term, Formula, Sequent};
use hillgraph::hypergraph::{is_isomorphic, Label, NodeId, TypeGraph, TypedHypergraph};
use hillgraph::kernel::{check, cut_corpus, invariant_violations, prove, verify_cut_admissibility, ProofTree};
use indexmap::IndexMap;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Verdict = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Verdict);

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

fn example() -> (Rule, TypedHypergraph, TypedHypergraph) {
    let mut tg = TypeGraph::new("TG");
    for t in ["a1", "a2", "a3"] {
        tg.add_node_type(t).unwrap();
    }
    tg.add_edge_type("A", vec!["a1".into(), "a2".into()]).unwrap();
    tg.add_edge_type("B", vec!["a2".into()]).unwrap();
    tg.add_edge_type("C", vec!["a1".into()]).unwrap();
    tg.add_edge_type("D", vec!["a3".into(), "a3".into()]).unwrap();
    let tg = Arc::new(tg);
    let host = graph(
        &tg,
        &[("x1", "a1"), ("x2", "a2"), ("x3", "a2")],
        &[("c", "C", &["x1"]), ("a12", "A", &["x1", "x2"]), ("a13", "A", &["x1", "x3"]), ("b", "B", &["x2"])],
    );
    let rule = Rule::new(
        "p",
        IndexMap::from([(NodeId::from("y1"), Label::from("a1"))]),
        graph(&tg, &[("y1", "a1"), ("y2", "a2")], &[("c", "C", &["y1"]), ("a", "A", &["y1", "y2"])]),
        graph(&tg, &[("y1", "a1"), ("z3", "a3"), ("z4", "a3")], &[("c", "C", &["y1"]), ("d", "D", &["z3", "z4"])]),
    )
    .unwrap();
    let result = graph(
        &tg,
        &[("z1", "a1"), ("z2", "a2"), ("z3", "a3"), ("z4", "a3")],
        &[("c", "C", &["z1"]), ("a", "A", &["z1", "z2"]), ("d", "D", &["z3", "z4"]), ("b", "B", &["z2"])],
    );
    (rule, host, result)
}

fn golden() -> Verdict {
    let (rule, host, expected) = example();
    let f = |s: &str| parse_formula(s).unwrap();
    let gamma_g = f("ex x1:a1, x2:a2, x3:a2. C(x1) * A(x1,x2) * A(x1,x3) * B(x2)");
    let delta = f("all y1:a1. (ex y2:a2. C(y1) * A(y1,y2)) -o (ex y3 y4:a3. C(y1) * D(y3,y4))");
    let gamma_h = f("ex z1:a1, z2:a2, z3 z4:a3. C(z1) * A(z1,z2) * D(z3,z4) * B(z2)");
    if !equivalent(encode_graph(&host).formula(), &gamma_g) {
        return Err(format!("γ_G is {}", encode_graph(&host).formula()));
    }
    let rr = represent_rule(&rule, &Default::default());
    if !equivalent(&rr.formula, &delta) {
        return Err(format!("δ is {}", rr.formula));
    }
    let m = &find_matches(&rule, &host)[1];
    let step = apply(&rule, &host, &m.morphism).map_err(|e| e.to_string())?;
    if !is_isomorphic(&step.result, &expected) {
        return Err("result not isomorphic to H".into());
    }
    if !equivalent(encode_graph(&step.result).formula(), &gamma_h) {
        return Err(format!("γ_H is {}", encode_graph(&step.result).formula()));
    }
    let tree = emit_step_derivation(&rule, &step).map_err(|e| e.to_string())?;
    let r = check(&tree);
    if !r.ok {
        return Err(r.to_string());
    }
    Ok(format!("derivation of {} nodes checked", r.nodes))
}

fn closed(f: &Formula) -> Sequent {
    Sequent::new(vec![], vec![], None, f.clone())
}

fn law_proofs() -> Result<Vec<ProofTree>, String> {
    let mut out = Vec::new();
    for (label, f) in laws::theorems() {
        let t = prove(&closed(&f), 12).ok_or_else(|| format!("{label}: no proof"))?;
        let r = check(&t);
        if !r.ok {
            return Err(format!("{label}: {r}"));
        }
        out.push(t);
    }
    Ok(out)
}

fn restriction_laws() -> Verdict {
    let proofs = law_proofs()?;
    Ok(format!("{} goals proved and checked", proofs.len()))
}

fn refutations() -> Verdict {
    for (label, f) in laws::non_theorems() {
        if prove(&closed(&f), 12).is_some() {
            return Err(format!("{label} proved"));
        }
    }
    Ok(format!("{} goals without proof at depth 12", laws::non_theorems().len()))
}

fn cuts_and_invariants() -> Verdict {
    let mut corpus = law_proofs()?;
    for (i, t) in cut_corpus(2024, 20, 10).into_iter().enumerate() {
        if !check(&t).ok {
            return Err(format!("cut instance {i} does not check"));
        }
        let cf = verify_cut_admissibility(&t, 12).ok_or_else(|| format!("cut instance {i}: no cut-free proof"))?;
        if cf.contains_cut() || !check(&cf).ok {
            return Err(format!("cut instance {i}: bad cut-free proof"));
        }
        corpus.push(t);
        corpus.push(cf);
    }
    for seed in 0..40 {
        corpus.push(encode_graph(&random_graph(seed)).derivation);
        let (rule, host) = instance(seed);
        for s in successors(&host, [&rule]) {
            corpus.push(emit_step_derivation(&rule, &s.step).map_err(|e| e.to_string())?);
        }
    }
    let mut sequents = 0;
    for t in &corpus {
        let v = invariant_violations(t);
        if !v.is_empty() {
            return Err(format!("{}: {}", t.conclusion, v[0]));
        }
        sequents += t.size();
    }
    Ok(format!("20 cuts eliminated; invariants hold on {sequents} sequents of {} trees", corpus.len()))
}

fn correspondence() -> Verdict {
    let (mut classes, mut applicable) = (0, 0);
    for seed in 0..200 {
        let (rule, host) = instance(seed);
        let c = verify_correspondence(&host, &rule);
        if !c.ok() {
            return Err(format!("seed {seed}: {}", c.mismatches.join("; ")));
        }
        classes += c.rewriting;
        applicable += usize::from(c.rewriting > 0);
    }
    Ok(format!("200 instances, {applicable} with steps, {classes} successor classes, 0 mismatches"))
}

fn gluing() -> Verdict {
    let (mut seen, mut seed) = (0, 0u64);
    let (mut ok, mut rejected) = (0, 0);
    while seen < 1000 {
        seed += 1;
        let (rule, host) = instance(seed);
        for m in all_morphisms(&rule.lhs, &host) {
            let ident = naive_identification(&rule, &m);
            let dang = naive_dangling(&rule, &host, &m);
            if check_identification(&rule, &m) != ident || check_dangling(&rule, &host, &m) != dang {
                return Err(format!("seed {seed}: oracle disagreement"));
            }
            if pushout_complement(&rule, &host, &m).is_ok() != (ident && dang) {
                return Err(format!("seed {seed}: pushout complement disagrees"));
            }
            if ident && dang {
                ok += 1
            } else {
                rejected += 1
            }
            seen += 1;
        }
    }
    Ok(format!("{seen} matches ({ok} applicable, {rejected} violating)"))
}

fn round_trips() -> Verdict {
    let mut runner = TestRunner::deterministic();
    let (terms, formulas) = (common::ast::term(), common::ast::formula());
    for i in 0..250 {
        let t = terms.new_tree(&mut runner).unwrap().current();
        if parse_term(&t.to_string()).ok() != Some(t.clone()) {
            return Err(format!("term {i}: {t}"));
        }
        let f = formulas.new_tree(&mut runner).unwrap().current();
        if parse_formula(&f.to_string()).ok() != Some(f.clone()) {
            return Err(format!("formula {i}: {f}"));
        }
    }
    for seed in 0..200 {
        let g = random_graph(seed);
        let back = decode(encode_graph(&g).formula(), g.type_graph()).map_err(|e| e.to_string())?;
        if !is_isomorphic(&back, &g) {
            return Err(format!("graph {seed} not recovered"));
        }
    }
    let mut corpus = law_proofs()?;
    corpus.extend(cut_corpus(9, 6, 10));
    for seed in 0..20 {
        corpus.push(encode_graph(&random_graph(seed)).derivation);
        let (rule, host) = instance(seed);
        if let Some(s) = successors(&host, [&rule]).first() {
            corpus.push(emit_step_derivation(&rule, &s.step).map_err(|e| e.to_string())?);
        }
    }
    let (mut rejected, mut seed) = (0, 0u64);
    while rejected < 200 {
        seed += 1;
        let t = &corpus[seed as usize % corpus.len()];
        let Some((what, bad)) = mutate(t, seed) else { continue };
        if check(&bad).ok {
            return Err(format!("{what} accepted"));
        }
        rejected += 1;
    }
    Ok("500 ASTs, 200 graphs, 200 corrupted trees rejected".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 worked example", Some(Duration::from_secs(1)), golden),
        ("2 restriction laws", Some(Duration::from_secs(30)), restriction_laws),
        ("3 refutations", Some(Duration::from_secs(300)), refutations),
        ("4 cut admissibility and invariants", None, cuts_and_invariants),
        ("5 rewriting/derivation correspondence", None, correspondence),
        ("6 gluing oracles", None, gluing),
        ("7 round trips and mutation", None, round_trips),
    ];
    let mut all = true;
    for (label, limit, f) in criteria {
        let start = Instant::now();
        let verdict = f();
        let took = start.elapsed();
        let verdict = match (verdict, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
            (v, _) => v,
        };
        match verdict {
            Ok(msg) => println!("PASS {label}: {msg} ({took:.2?})"),
            Err(msg) => {
                all = false;
                println!("FAIL {label}: {msg} ({took:.2?})");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
