//! Seeded random instances: graphs, rules and hosts that tend to contain
//! matches.

use std::sync::Arc;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dpo::Rule;
use crate::hypergraph::{Label, NodeId, TypeGraph, TypedHypergraph};

/// Node types `a`, `b`; edge types `A(a,a)`, `B(a,b)`, `C(a)`, `D(b)`.
pub fn small_type_graph() -> Arc<TypeGraph> {
    let mut tg = TypeGraph::new("TG");
    tg.add_node_type("a").unwrap();
    tg.add_node_type("b").unwrap();
    tg.add_edge_type("A", vec!["a".into(), "a".into()]).unwrap();
    tg.add_edge_type("B", vec!["a".into(), "b".into()]).unwrap();
    tg.add_edge_type("C", vec!["a".into()]).unwrap();
    tg.add_edge_type("D", vec!["b".into()]).unwrap();
    Arc::new(tg)
}

fn random_node_type<R: Rng>(rng: &mut R, tg: &TypeGraph) -> Label {
    let types: Vec<&Label> = tg.node_types().collect();
    (*types.choose(rng).expect("type graph has node types")).clone()
}

/// Adds one random edge whose attachment is drawn from `g`'s nodes, if some
/// edge type can be attached at all.
fn add_random_edge<R: Rng>(rng: &mut R, g: &mut TypedHypergraph, prefix: &str) -> bool {
    let tg = g.type_graph().clone();
    let mut candidates: Vec<(&Label, &[Label])> =
        tg.edge_types().filter(|(_, ar)| ar.iter().all(|t| g.nodes().any(|(_, l)| l == t))).collect();
    candidates.shuffle(rng);
    let Some((label, arity)) = candidates.first() else { return false };
    let attach: Vec<NodeId> = arity
        .iter()
        .map(|t| {
            let pool: Vec<&NodeId> = g.nodes().filter(|(_, l)| *l == t).map(|(n, _)| n).collect();
            (*pool.choose(rng).unwrap()).clone()
        })
        .collect();
    let id = g.fresh_edge_id(prefix);
    g.add_edge(id, (*label).clone(), attach).unwrap();
    true
}

/// A random graph with `1..=max_nodes` nodes and `0..=max_edges` edges.
pub fn graph<R: Rng>(rng: &mut R, tg: &Arc<TypeGraph>, max_nodes: usize, max_edges: usize) -> TypedHypergraph {
    let mut g = TypedHypergraph::new("G", tg.clone());
    let n = rng.gen_range(0..=max_nodes);
    for i in 0..n {
        let t = random_node_type(rng, tg);
        g.add_node(format!("v{}", i + 1), t).unwrap();
    }
    let m = rng.gen_range(0..=max_edges);
    for _ in 0..m {
        add_random_edge(rng, &mut g, "e");
    }
    g
}

/// A random valid rule whose sides have at most `max_side` elements (nodes
/// plus edges) each.
pub fn rule<R: Rng>(rng: &mut R, tg: &Arc<TypeGraph>, max_side: usize, name: &str) -> Rule {
    loop {
        let k = rng.gen_range(0..=max_side.min(2));
        let interface: IndexMap<NodeId, Label> = (0..k).map(|i| (NodeId::from(format!("k{}", i + 1)), random_node_type(rng, tg))).collect();
        let lhs = side(rng, tg, &interface, max_side, "l");
        let rhs = side(rng, tg, &interface, max_side, "r");
        if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
            if let Ok(rule) = Rule::new(name, interface, lhs, rhs) {
                if rule.lhs.node_count() + rule.lhs.edge_count() > 0 {
                    return rule;
                }
            }
        }
    }
}

fn side<R: Rng>(
    rng: &mut R,
    tg: &Arc<TypeGraph>,
    interface: &IndexMap<NodeId, Label>,
    max: usize,
    prefix: &str,
) -> Option<TypedHypergraph> {
    let mut g = TypedHypergraph::new(if prefix == "l" { "L" } else { "R" }, tg.clone());
    for (k, t) in interface {
        g.add_node(k.clone(), t.clone()).unwrap();
    }
    if interface.len() > max {
        return None;
    }
    let budget = max - interface.len();
    let extra_nodes = rng.gen_range(0..=budget);
    for i in 0..extra_nodes {
        let t = random_node_type(rng, tg);
        g.add_node(format!("{prefix}{}", i + 1), t).unwrap();
    }
    let edges = rng.gen_range(0..=budget - extra_nodes);
    for _ in 0..edges {
        add_random_edge(rng, &mut g, &format!("{prefix}e"));
    }
    Some(g)
}

/// A host graph built around a (possibly collapsed) copy of the rule's
/// left-hand side plus random noise, within the size bounds.
pub fn host_for<R: Rng>(rng: &mut R, rule: &Rule, max_nodes: usize, max_edges: usize) -> TypedHypergraph {
    let tg = rule.type_graph().clone();
    let noise_nodes = max_nodes.saturating_sub(rule.lhs.node_count());
    let noise_edges = max_edges.saturating_sub(rule.lhs.edge_count());
    let mut g = graph(rng, &tg, noise_nodes, 0);
    if rng.gen_bool(0.85) {
        let mut image: IndexMap<NodeId, NodeId> = IndexMap::new();
        for (n, t) in rule.lhs.nodes() {
            let existing: Vec<NodeId> = g.nodes().filter(|(_, l)| *l == t).map(|(m, _)| m.clone()).collect();
            let target = if !existing.is_empty() && (g.node_count() >= max_nodes || rng.gen_bool(0.3)) {
                existing.choose(rng).unwrap().clone()
            } else {
                let id = g.fresh_node_id("v");
                g.add_node(id.clone(), t.clone()).unwrap();
                id
            };
            image.insert(n.clone(), target);
        }
        for (_, e) in rule.lhs.edges() {
            let attach = e.attach.iter().map(|n| image[n].clone()).collect();
            let id = g.fresh_edge_id("e");
            g.add_edge(id, e.label.clone(), attach).unwrap();
        }
    }
    let extra = rng.gen_range(0..=noise_edges.min(max_edges.saturating_sub(g.edge_count())));
    for _ in 0..extra {
        add_random_edge(rng, &mut g, "e");
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_are_valid_and_bounded() {
        let tg = small_type_graph();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let r = rule(&mut rng, &tg, 3, "p");
            assert!(r.lhs.node_count() + r.lhs.edge_count() <= 3);
            assert!(r.rhs.node_count() + r.rhs.edge_count() <= 3);
            let h = host_for(&mut rng, &r, 6, 6);
            assert!(h.is_valid());
            assert!(h.node_count() <= 6 && h.edge_count() <= 6, "{} {}", h.node_count(), h.edge_count());
        }
    }
}
