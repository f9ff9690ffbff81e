//! Backtracking search for isomorphisms and homomorphisms.

use std::collections::HashMap;

use indexmap::IndexMap;

use super::{EdgeId, Label, Morphism, NodeId, TypedHypergraph};

/// Node invariant preserved by isomorphisms: its label and the sorted list of
/// `(edge label, position)` incidences.
fn node_signature(g: &TypedHypergraph, n: &NodeId) -> (Label, Vec<(Label, usize)>) {
    let mut inc: Vec<(Label, usize)> = g
        .edges()
        .flat_map(|(_, e)| e.attach.iter().enumerate().filter(move |(_, m)| *m == n).map(move |(i, _)| (e.label.clone(), i)))
        .collect();
    inc.sort();
    (g.node_type(n).cloned().unwrap(), inc)
}

type EdgeKey = (Label, Vec<NodeId>);

struct IsoSearch<'a> {
    g1: &'a TypedHypergraph,
    g2: &'a TypedHypergraph,
    order: Vec<NodeId>,
    candidates: Vec<Vec<NodeId>>,
    /// Edges of g1 to re-check once a given node (by position in `order`) is
    /// assigned: those whose attachment is fully assigned at that point.
    closing_edges: Vec<Vec<EdgeId>>,
    target_counts: HashMap<EdgeKey, usize>,
    used_counts: HashMap<EdgeKey, usize>,
    node_map: IndexMap<NodeId, NodeId>,
    used_targets: std::collections::HashSet<NodeId>,
    limit: usize,
    found: Vec<Morphism>,
}

impl IsoSearch<'_> {
    fn assign(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            self.complete_edges();
            return;
        }
        let src = self.order[depth].clone();
        for cand in self.candidates[depth].clone() {
            if self.used_targets.contains(&cand) {
                continue;
            }
            self.node_map.insert(src.clone(), cand.clone());
            self.used_targets.insert(cand.clone());
            let mut added: Vec<EdgeKey> = Vec::new();
            let mut ok = true;
            for e in &self.closing_edges[depth] {
                let edge = self.g1.edge(e).unwrap();
                let key: EdgeKey = (edge.label.clone(), edge.attach.iter().map(|n| self.node_map[n].clone()).collect());
                let have = self.target_counts.get(&key).copied().unwrap_or(0);
                let used = self.used_counts.entry(key.clone()).or_insert(0);
                *used += 1;
                added.push(key);
                if *used > have {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.assign(depth + 1);
            }
            for key in added {
                *self.used_counts.get_mut(&key).unwrap() -= 1;
            }
            self.used_targets.remove(&cand);
            self.node_map.shift_remove(&src);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }

    /// Node map is complete; enumerate edge bijections compatible with it.
    fn complete_edges(&mut self) {
        let mut groups: IndexMap<EdgeKey, (Vec<EdgeId>, Vec<EdgeId>)> = IndexMap::new();
        for (id, e) in self.g1.edges() {
            let key = (e.label.clone(), e.attach.iter().map(|n| self.node_map[n].clone()).collect());
            groups.entry(key).or_default().0.push(id.clone());
        }
        for (id, e) in self.g2.edges() {
            let key = (e.label.clone(), e.attach.clone());
            if let Some(g) = groups.get_mut(&key) {
                g.1.push(id.clone());
            } else {
                return;
            }
        }
        if groups.values().any(|(a, b)| a.len() != b.len()) {
            return;
        }
        let groups: Vec<(Vec<EdgeId>, Vec<EdgeId>)> = groups.into_values().collect();
        let mut edge_map = IndexMap::new();
        self.permute_groups(&groups, 0, &mut edge_map);
    }

    fn permute_groups(&mut self, groups: &[(Vec<EdgeId>, Vec<EdgeId>)], gi: usize, edge_map: &mut IndexMap<EdgeId, EdgeId>) {
        if self.found.len() >= self.limit {
            return;
        }
        if gi == groups.len() {
            let node_map = self.g1.node_ids().map(|n| (n.clone(), self.node_map[n].clone())).collect();
            let edge_map = self.g1.edge_ids().map(|e| (e.clone(), edge_map[e].clone())).collect();
            self.found.push(Morphism { node_map, edge_map });
            return;
        }
        let (src, tgt) = &groups[gi];
        let mut perm: Vec<usize> = (0..tgt.len()).collect();
        loop {
            for (s, &t) in src.iter().zip(&perm) {
                edge_map.insert(s.clone(), tgt[t].clone());
            }
            self.permute_groups(groups, gi + 1, edge_map);
            if self.found.len() >= self.limit || !next_permutation(&mut perm) {
                break;
            }
        }
        for s in src {
            edge_map.shift_remove(s);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Up to `limit` isomorphisms `g1 → g2`. Empty iff the graphs are not
/// isomorphic (when `limit > 0`).
pub fn find_isomorphisms(g1: &TypedHypergraph, g2: &TypedHypergraph, limit: usize) -> Vec<Morphism> {
    if limit == 0 || g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return Vec::new();
    }
    let mut labels1: Vec<&Label> = g1.edges().map(|(_, e)| &e.label).collect();
    let mut labels2: Vec<&Label> = g2.edges().map(|(_, e)| &e.label).collect();
    labels1.sort();
    labels2.sort();
    if labels1 != labels2 {
        return Vec::new();
    }

    let sig1: IndexMap<NodeId, _> = g1.node_ids().map(|n| (n.clone(), node_signature(g1, n))).collect();
    let sig2: IndexMap<NodeId, _> = g2.node_ids().map(|n| (n.clone(), node_signature(g2, n))).collect();

    // Most constrained first: rare signatures, then connected neighbours.
    let mut order: Vec<NodeId> = Vec::new();
    let mut remaining: Vec<NodeId> = g1.node_ids().cloned().collect();
    let rarity = |n: &NodeId| sig2.values().filter(|s| **s == sig1[n]).count();
    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .enumerate()
            .max_by_key(|(i, n)| {
                let links = g1.incident_edges(n).filter(|e| g1.edge(e).unwrap().attach.iter().any(|m| order.contains(m))).count();
                (links, std::cmp::Reverse(rarity(n)), std::cmp::Reverse(*i))
            })
            .map(|(i, _)| i)
            .unwrap();
        order.push(remaining.remove(pick));
    }

    let mut candidates = Vec::with_capacity(order.len());
    for n in &order {
        let c: Vec<NodeId> = sig2.iter().filter(|(_, s)| **s == sig1[n]).map(|(m, _)| m.clone()).collect();
        if c.is_empty() {
            return Vec::new();
        }
        candidates.push(c);
    }

    let position: HashMap<&NodeId, usize> = order.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut closing_edges = vec![Vec::new(); order.len()];
    for (id, e) in g1.edges() {
        if let Some(last) = e.attach.iter().map(|n| position[n]).max() {
            closing_edges[last].push(id.clone());
        }
    }
    let mut target_counts = HashMap::new();
    for (_, e) in g2.edges() {
        *target_counts.entry((e.label.clone(), e.attach.clone())).or_insert(0) += 1;
    }

    let mut search = IsoSearch {
        g1,
        g2,
        order,
        candidates,
        closing_edges,
        target_counts,
        used_counts: HashMap::new(),
        node_map: IndexMap::new(),
        used_targets: Default::default(),
        limit,
        found: Vec::new(),
    };
    search.assign(0);
    search.found
}

pub fn is_isomorphic(g1: &TypedHypergraph, g2: &TypedHypergraph) -> bool {
    !find_isomorphisms(g1, g2, 1).is_empty()
}

/// Every total, type-preserving morphism `source → target`, in a
/// deterministic order: edges of `source` are assigned first in insertion
/// order, each ranging over `target`'s edges in insertion order; remaining
/// nodes then range over `target`'s nodes.
pub fn homomorphisms(source: &TypedHypergraph, target: &TypedHypergraph) -> Vec<Morphism> {
    let src_edges: Vec<(&EdgeId, &super::Edge)> = source.edges().collect();
    let mut out = Vec::new();
    let mut m = Morphism::default();
    hom_edges(source, target, &src_edges, 0, &mut m, &mut out);
    out
}

fn hom_edges<'a>(
    source: &TypedHypergraph,
    target: &TypedHypergraph,
    src_edges: &[(&'a EdgeId, &'a super::Edge)],
    i: usize,
    m: &mut Morphism,
    out: &mut Vec<Morphism>,
) {
    if i == src_edges.len() {
        let free: Vec<&NodeId> = source.node_ids().filter(|n| !m.node_map.contains_key(*n)).collect();
        hom_nodes(source, target, &free, 0, m, out);
        return;
    }
    let (sid, sedge) = src_edges[i];
    for (tid, tedge) in target.edges() {
        if tedge.label != sedge.label || tedge.attach.len() != sedge.attach.len() {
            continue;
        }
        let mut newly = Vec::new();
        let mut ok = true;
        for (s, t) in sedge.attach.iter().zip(&tedge.attach) {
            match m.node_map.get(s) {
                Some(prev) if prev != t => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    if source.node_type(s) != target.node_type(t) {
                        ok = false;
                        break;
                    }
                    m.node_map.insert(s.clone(), t.clone());
                    newly.push(s.clone());
                }
            }
        }
        if ok {
            m.edge_map.insert(sid.clone(), tid.clone());
            hom_edges(source, target, src_edges, i + 1, m, out);
            m.edge_map.shift_remove(sid);
        }
        for s in newly {
            m.node_map.shift_remove(&s);
        }
    }
}

fn hom_nodes(source: &TypedHypergraph, target: &TypedHypergraph, free: &[&NodeId], i: usize, m: &mut Morphism, out: &mut Vec<Morphism>) {
    if i == free.len() {
        // Normalise key order to the source's insertion order.
        let node_map = source.node_ids().map(|n| (n.clone(), m.node_map[n].clone())).collect();
        let edge_map = source.edge_ids().map(|e| (e.clone(), m.edge_map[e].clone())).collect();
        out.push(Morphism { node_map, edge_map });
        return;
    }
    let s = free[i];
    let label = source.node_type(s).unwrap();
    for (t, tl) in target.nodes() {
        if tl == label {
            m.node_map.insert(s.clone(), t.clone());
            hom_nodes(source, target, free, i + 1, m, out);
            m.node_map.shift_remove(s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::abc_types;
    use crate::hypergraph::{check_morphism, disjoint_union, TypeGraph};
    use proptest::prelude::*;
    use std::sync::Arc;

    /// Oracle: filter every pair of node/edge bijections through
    /// `check_morphism`.
    fn brute_force_isos(g1: &TypedHypergraph, g2: &TypedHypergraph) -> usize {
        if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
            return 0;
        }
        let n1: Vec<NodeId> = g1.node_ids().cloned().collect();
        let n2: Vec<NodeId> = g2.node_ids().cloned().collect();
        let e1: Vec<EdgeId> = g1.edge_ids().cloned().collect();
        let e2: Vec<EdgeId> = g2.edge_ids().cloned().collect();
        let mut count = 0;
        let mut np: Vec<usize> = (0..n2.len()).collect();
        loop {
            let mut ep: Vec<usize> = (0..e2.len()).collect();
            loop {
                let m = Morphism {
                    node_map: n1.iter().cloned().zip(np.iter().map(|&i| n2[i].clone())).collect(),
                    edge_map: e1.iter().cloned().zip(ep.iter().map(|&i| e2[i].clone())).collect(),
                };
                if check_morphism(g1, g2, &m) {
                    count += 1;
                }
                if !next_permutation(&mut ep) {
                    break;
                }
            }
            if !next_permutation(&mut np) {
                break;
            }
        }
        count
    }

    pub(crate) fn arb_graph(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = TypedHypergraph> {
        let tg = abc_types();
        (1..=max_nodes)
            .prop_flat_map(move |n| {
                (proptest::collection::vec(any::<bool>(), n), proptest::collection::vec((0..3usize, 0..n, 0..n), 0..=max_edges))
            })
            .prop_map(move |(kinds, edges)| build_graph(tg.clone(), &kinds, &edges))
    }

    /// Deterministic builder: edges whose endpoints have the wrong type are
    /// retargeted to the first node of the right type, or dropped.
    pub(crate) fn build_graph(tg: Arc<TypeGraph>, kinds: &[bool], edges: &[(usize, usize, usize)]) -> TypedHypergraph {
        let mut g = TypedHypergraph::new("g", tg);
        for (i, b) in kinds.iter().enumerate() {
            g.add_node(format!("v{i}"), if *b { "b" } else { "a" }).unwrap();
        }
        let of = |want_b: bool, i: usize| -> Option<usize> {
            if kinds[i] == want_b {
                Some(i)
            } else {
                kinds.iter().position(|k| *k == want_b)
            }
        };
        for (k, &(t, x, y)) in edges.iter().enumerate() {
            let id = format!("e{k}");
            let attach = match t {
                0 => of(false, x).zip(of(false, y)).map(|(x, y)| vec![x, y]),
                1 => of(false, x).zip(of(true, y)).map(|(x, y)| vec![x, y]),
                _ => of(false, x).map(|x| vec![x]),
            };
            if let Some(a) = attach {
                let label = ["A", "B", "C"][t];
                g.add_edge(id, label, a.into_iter().map(|i| NodeId::new(format!("v{i}"))).collect()).unwrap();
            }
        }
        g
    }

    fn relabel(g: &TypedHypergraph, rev: bool) -> TypedHypergraph {
        let mut h = TypedHypergraph::new("h", g.type_graph().clone());
        let mut nodes: Vec<_> = g.nodes().collect();
        let mut edges: Vec<_> = g.edges().collect();
        if rev {
            nodes.reverse();
            edges.reverse();
        }
        for (n, l) in nodes {
            h.add_node(format!("w_{n}"), l.clone()).unwrap();
        }
        for (e, edge) in edges {
            h.add_edge(format!("f_{e}"), edge.label.clone(), edge.attach.iter().map(|n| NodeId::new(format!("w_{n}"))).collect()).unwrap();
        }
        h
    }

    #[test]
    fn relabelled_graph_is_isomorphic() {
        let g = build_graph(abc_types(), &[false, false, true], &[(0, 0, 1), (1, 1, 2), (2, 0, 0)]);
        let h = relabel(&g, true);
        let isos = find_isomorphisms(&g, &h, 10);
        assert!(!isos.is_empty());
        assert!(isos.iter().all(|m| check_morphism(&g, &h, m) && m.is_bijective_onto(&h)));
    }

    #[test]
    fn different_edge_multisets_are_not_isomorphic() {
        let g = build_graph(abc_types(), &[false, false], &[(0, 0, 1)]);
        let h = build_graph(abc_types(), &[false, false], &[(2, 0, 0)]);
        assert!(find_isomorphisms(&g, &h, 10).is_empty());
    }

    #[test]
    fn three_by_three_matches_bruteforce() {
        // a triangle of A-edges on three a-nodes: 3 rotations only
        let g = build_graph(abc_types(), &[false, false, false], &[(0, 0, 1), (0, 1, 2), (0, 2, 0)]);
        let h = relabel(&g, true);
        assert_eq!(brute_force_isos(&g, &h), 3);
        assert_eq!(find_isomorphisms(&g, &h, usize::MAX).len(), 3);
        // three parallel loops on one node plus two isolated nodes
        let p = build_graph(abc_types(), &[false, false, false], &[(0, 0, 0), (0, 0, 0), (2, 0, 0)]);
        let q = relabel(&p, true);
        let expected = brute_force_isos(&p, &q);
        assert_eq!(expected, 4);
        assert_eq!(find_isomorphisms(&p, &q, usize::MAX).len(), expected);
    }

    #[test]
    fn homomorphisms_include_non_injective() {
        let g = build_graph(abc_types(), &[false, false], &[]);
        let h = build_graph(abc_types(), &[false], &[]);
        let homs = homomorphisms(&g, &h);
        assert_eq!(homs.len(), 1);
        assert!(!homs[0].is_injective());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn iso_agrees_with_bruteforce(g in arb_graph(5, 5), h in arb_graph(5, 5)) {
            let fast = find_isomorphisms(&g, &h, usize::MAX);
            prop_assert_eq!(fast.len(), brute_force_isos(&g, &h));
            for m in &fast {
                prop_assert!(check_morphism(&g, &h, m) && m.is_bijective_onto(&h));
            }
            let h2 = relabel(&g, true);
            let fast = find_isomorphisms(&g, &h2, usize::MAX);
            prop_assert_eq!(fast.len(), brute_force_isos(&g, &h2));
        }

        #[test]
        fn identity_is_always_found(g in arb_graph(5, 5)) {
            let all = find_isomorphisms(&g, &g, usize::MAX);
            prop_assert!(all.contains(&Morphism::identity(&g)));
        }

        #[test]
        fn isomorphism_is_an_equivalence(g in arb_graph(4, 4)) {
            let h = relabel(&g, true);
            let k = relabel(&h, false);
            let f = find_isomorphisms(&g, &h, 1).pop().unwrap();
            let inv = f.inverse().unwrap();
            prop_assert!(check_morphism(&h, &g, &inv));
            let f2 = find_isomorphisms(&h, &k, 1).pop().unwrap();
            let comp = f.then(&f2);
            prop_assert!(check_morphism(&g, &k, &comp) && comp.is_bijective_onto(&k));
        }

        #[test]
        fn union_commutes_up_to_iso(g in arb_graph(3, 3), h in arb_graph(3, 3)) {
            let (u1, i1, i2) = disjoint_union(&g, &h).unwrap();
            let (u2, _, _) = disjoint_union(&h, &g).unwrap();
            prop_assert!(is_isomorphic(&u1, &u2));
            prop_assert!(check_morphism(&g, &u1, &i1));
            prop_assert!(check_morphism(&h, &u1, &i2));
        }
    }
}
