//! Typed hypergraphs and their morphisms.
//!
//! A hypergraph has a set of nodes, a set of edges and an attachment function
//! sending every edge to a sequence of nodes. Typing is a morphism into a fixed
//! [`TypeGraph`]; here it is stored as a label on every node and edge, and the
//! typing morphism commutes when each edge's attachment sequence, read through
//! the node labels, equals the arity of its edge type.

mod iso;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

pub use iso::{find_isomorphisms, homomorphisms, is_isomorphic};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: impl AsRef<str>) -> Self {
                $name(Arc::from(s.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }
    };
}

id_type!(
    /// A node-type or edge-type label of a type graph.
    Label
);
id_type!(
    /// Opaque node identifier.
    NodeId
);
id_type!(
    /// Opaque edge identifier.
    EdgeId
);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeGraphError {
    #[error("duplicate node type `{0}`")]
    DuplicateNodeType(Label),
    #[error("duplicate edge type `{0}`")]
    DuplicateEdgeType(Label),
    #[error("edge type `{edge}` refers to unknown node type `{node}`")]
    UnknownArityLabel { edge: Label, node: Label },
}

/// The type hypergraph `(node types, edge types, arity)`.
///
/// Parallel edge types with the same arity are allowed: labels are the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeGraph {
    pub name: String,
    node_types: BTreeSet<Label>,
    edge_types: IndexMap<Label, Vec<Label>>,
}

impl TypeGraph {
    pub fn new(name: impl Into<String>) -> Self {
        TypeGraph { name: name.into(), node_types: BTreeSet::new(), edge_types: IndexMap::new() }
    }

    pub fn add_node_type(&mut self, label: impl Into<Label>) -> Result<(), TypeGraphError> {
        let label = label.into();
        if !self.node_types.insert(label.clone()) {
            return Err(TypeGraphError::DuplicateNodeType(label));
        }
        Ok(())
    }

    pub fn add_edge_type(&mut self, label: impl Into<Label>, arity: Vec<Label>) -> Result<(), TypeGraphError> {
        let label = label.into();
        if self.edge_types.contains_key(&label) {
            return Err(TypeGraphError::DuplicateEdgeType(label));
        }
        if let Some(bad) = arity.iter().find(|l| !self.node_types.contains(*l)) {
            return Err(TypeGraphError::UnknownArityLabel { edge: label, node: bad.clone() });
        }
        self.edge_types.insert(label, arity);
        Ok(())
    }

    pub fn node_types(&self) -> impl Iterator<Item = &Label> {
        self.node_types.iter()
    }

    pub fn edge_types(&self) -> impl Iterator<Item = (&Label, &[Label])> {
        self.edge_types.iter().map(|(l, a)| (l, a.as_slice()))
    }

    pub fn has_node_type(&self, label: &Label) -> bool {
        self.node_types.contains(label)
    }

    pub fn arity(&self, edge_type: &Label) -> Option<&[Label]> {
        self.edge_types.get(edge_type).map(Vec::as_slice)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: Label,
    pub attach: Vec<NodeId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(NodeId),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("type graphs differ: `{0}` vs `{1}`")]
    TypeGraphMismatch(String, String),
}

/// One violated well-formedness condition of a typed hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownNodeType { node: NodeId, label: Label },
    UnknownEdgeType { edge: EdgeId, label: Label },
    MissingNode { edge: EdgeId, node: NodeId },
    ArityMismatch { edge: EdgeId, expected: usize, found: usize },
    AttachTypeMismatch { edge: EdgeId, position: usize, expected: Label, found: Label },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownNodeType { node, label } => {
                write!(f, "node {node} has unknown type {label}")
            }
            Violation::UnknownEdgeType { edge, label } => {
                write!(f, "edge {edge} has unknown type {label}")
            }
            Violation::MissingNode { edge, node } => {
                write!(f, "edge {edge} is attached to missing node {node}")
            }
            Violation::ArityMismatch { edge, expected, found } => {
                write!(f, "arity mismatch at edge {edge}: type expects {expected} nodes, attached to {found}")
            }
            Violation::AttachTypeMismatch { edge, position, expected, found } => {
                write!(f, "edge {edge} position {position} expects node type {expected}, found {found}")
            }
        }
    }
}

/// A finite hypergraph typed over a [`TypeGraph`].
///
/// Node and edge maps keep insertion order, which is the deterministic
/// allocation order used by every enumeration in this crate.
#[derive(Clone, Debug)]
pub struct TypedHypergraph {
    pub name: String,
    type_graph: Arc<TypeGraph>,
    nodes: IndexMap<NodeId, Label>,
    edges: IndexMap<EdgeId, Edge>,
}

impl TypedHypergraph {
    pub fn new(name: impl Into<String>, type_graph: Arc<TypeGraph>) -> Self {
        TypedHypergraph { name: name.into(), type_graph, nodes: IndexMap::new(), edges: IndexMap::new() }
    }

    pub fn type_graph(&self) -> &Arc<TypeGraph> {
        &self.type_graph
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>, label: impl Into<Label>) -> Result<NodeId, GraphError> {
        let id = id.into();
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        self.nodes.insert(id.clone(), label.into());
        Ok(id)
    }

    pub fn add_edge(&mut self, id: impl Into<EdgeId>, label: impl Into<Label>, attach: Vec<NodeId>) -> Result<EdgeId, GraphError> {
        let id = id.into();
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        self.edges.insert(id.clone(), Edge { label: label.into(), attach });
        Ok(id)
    }

    pub fn remove_node(&mut self, id: &NodeId) -> Option<Label> {
        self.nodes.shift_remove(id)
    }

    pub fn remove_edge(&mut self, id: &EdgeId) -> Option<Edge> {
        self.edges.shift_remove(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &Label)> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &Edge)> {
        self.edges.iter()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.keys()
    }

    pub fn node_type(&self, id: &NodeId) -> Option<&Label> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn has_node(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn has_edge(&self, id: &EdgeId) -> bool {
        self.edges.contains_key(id)
    }

    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.nodes.get_index_of(id)
    }

    /// Edges having `node` somewhere in their attachment sequence.
    pub fn incident_edges<'a>(&'a self, node: &'a NodeId) -> impl Iterator<Item = &'a EdgeId> {
        self.edges.iter().filter(move |(_, e)| e.attach.contains(node)).map(|(id, _)| id)
    }

    pub fn is_isolated(&self, node: &NodeId) -> bool {
        self.incident_edges(node).next().is_none()
    }

    /// Every violated invariant; empty iff the graph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let tg = &self.type_graph;
        let mut out = Vec::new();
        for (id, label) in &self.nodes {
            if !tg.has_node_type(label) {
                out.push(Violation::UnknownNodeType { node: id.clone(), label: label.clone() });
            }
        }
        for (id, edge) in &self.edges {
            for n in &edge.attach {
                if !self.nodes.contains_key(n) {
                    out.push(Violation::MissingNode { edge: id.clone(), node: n.clone() });
                }
            }
            let Some(arity) = tg.arity(&edge.label) else {
                out.push(Violation::UnknownEdgeType { edge: id.clone(), label: edge.label.clone() });
                continue;
            };
            if arity.len() != edge.attach.len() {
                out.push(Violation::ArityMismatch { edge: id.clone(), expected: arity.len(), found: edge.attach.len() });
                continue;
            }
            for (position, (expected, n)) in arity.iter().zip(&edge.attach).enumerate() {
                if let Some(found) = self.nodes.get(n) {
                    if found != expected {
                        out.push(Violation::AttachTypeMismatch {
                            edge: id.clone(),
                            position,
                            expected: expected.clone(),
                            found: found.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// A fresh node identifier derived from `base`, deterministic in the
    /// current contents.
    pub fn fresh_node_id(&self, base: &str) -> NodeId {
        fresh_id(base, |s| self.nodes.contains_key(s))
    }

    pub fn fresh_edge_id(&self, base: &str) -> EdgeId {
        fresh_id(base, |s| self.edges.contains_key(s))
    }
}

fn fresh_id<T: From<String>>(base: &str, taken: impl Fn(&str) -> bool) -> T {
    if !taken(base) {
        return T::from(base.to_string());
    }
    (1..).map(|k| format!("{base}_{k}")).find(|s| !taken(s)).map(T::from).expect("unbounded counter")
}

impl std::borrow::Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for EdgeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A pair of total maps on nodes and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Morphism {
    pub node_map: IndexMap<NodeId, NodeId>,
    pub edge_map: IndexMap<EdgeId, EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    UnmappedNode(NodeId),
    UnmappedEdge(EdgeId),
    NodeOutsideTarget(NodeId, NodeId),
    EdgeOutsideTarget(EdgeId, EdgeId),
    NodeTypeChanged { node: NodeId, from: Label, to: Label },
    EdgeTypeChanged { edge: EdgeId, from: Label, to: Label },
    AttachmentNotPreserved(EdgeId),
    ExtraNodeEntry(NodeId),
    ExtraEdgeEntry(EdgeId),
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MorphismViolation::*;
        match self {
            UnmappedNode(n) => write!(f, "node {n} is not mapped"),
            UnmappedEdge(e) => write!(f, "edge {e} is not mapped"),
            NodeOutsideTarget(n, t) => write!(f, "node {n} mapped to {t}, absent from target"),
            EdgeOutsideTarget(e, t) => write!(f, "edge {e} mapped to {t}, absent from target"),
            NodeTypeChanged { node, from, to } => {
                write!(f, "node {node} of type {from} mapped to a node of type {to}")
            }
            EdgeTypeChanged { edge, from, to } => {
                write!(f, "edge {edge} of type {from} mapped to an edge of type {to}")
            }
            AttachmentNotPreserved(e) => write!(f, "attachment of edge {e} not preserved"),
            ExtraNodeEntry(n) => write!(f, "map entry for {n}, which is not a source node"),
            ExtraEdgeEntry(e) => write!(f, "map entry for {e}, which is not a source edge"),
        }
    }
}

impl Morphism {
    pub fn identity(g: &TypedHypergraph) -> Self {
        Morphism {
            node_map: g.node_ids().map(|n| (n.clone(), n.clone())).collect(),
            edge_map: g.edge_ids().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    pub fn node(&self, n: &NodeId) -> Option<&NodeId> {
        self.node_map.get(n)
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&EdgeId> {
        self.edge_map.get(e)
    }

    /// `other ∘ self`: first `self`, then `other`. Entries whose image is
    /// not in `other`'s domain are dropped.
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism {
            node_map: self.node_map.iter().filter_map(|(k, v)| other.node_map.get(v).map(|w| (k.clone(), w.clone()))).collect(),
            edge_map: self.edge_map.iter().filter_map(|(k, v)| other.edge_map.get(v).map(|w| (k.clone(), w.clone()))).collect(),
        }
    }

    /// Inverse of a bijection; `None` when the maps are not injective.
    pub fn inverse(&self) -> Option<Morphism> {
        let mut inv = Morphism::default();
        for (k, v) in &self.node_map {
            if inv.node_map.insert(v.clone(), k.clone()).is_some() {
                return None;
            }
        }
        for (k, v) in &self.edge_map {
            if inv.edge_map.insert(v.clone(), k.clone()).is_some() {
                return None;
            }
        }
        Some(inv)
    }

    pub fn is_injective(&self) -> bool {
        let nodes: BTreeSet<_> = self.node_map.values().collect();
        let edges: BTreeSet<_> = self.edge_map.values().collect();
        nodes.len() == self.node_map.len() && edges.len() == self.edge_map.len()
    }

    /// Injective and onto the target's nodes and edges.
    pub fn is_bijective_onto(&self, target: &TypedHypergraph) -> bool {
        self.is_injective() && self.node_map.len() == target.node_count() && self.edge_map.len() == target.edge_count()
    }
}

/// Every violated morphism condition of `m: source → target`.
pub fn morphism_violations(source: &TypedHypergraph, target: &TypedHypergraph, m: &Morphism) -> Vec<MorphismViolation> {
    use MorphismViolation::*;
    let mut out = Vec::new();
    for k in m.node_map.keys() {
        if !source.has_node(k) {
            out.push(ExtraNodeEntry(k.clone()));
        }
    }
    for k in m.edge_map.keys() {
        if !source.has_edge(k) {
            out.push(ExtraEdgeEntry(k.clone()));
        }
    }
    for (n, label) in source.nodes() {
        match m.node(n) {
            None => out.push(UnmappedNode(n.clone())),
            Some(t) => match target.node_type(t) {
                None => out.push(NodeOutsideTarget(n.clone(), t.clone())),
                Some(tl) if tl != label => out.push(NodeTypeChanged { node: n.clone(), from: label.clone(), to: tl.clone() }),
                Some(_) => {}
            },
        }
    }
    for (e, edge) in source.edges() {
        let Some(t) = m.edge(e) else {
            out.push(UnmappedEdge(e.clone()));
            continue;
        };
        let Some(tedge) = target.edge(t) else {
            out.push(EdgeOutsideTarget(e.clone(), t.clone()));
            continue;
        };
        if tedge.label != edge.label {
            out.push(EdgeTypeChanged { edge: e.clone(), from: edge.label.clone(), to: tedge.label.clone() });
        }
        let image: Option<Vec<&NodeId>> = edge.attach.iter().map(|n| m.node(n)).collect();
        let preserved =
            image.map(|img| img.len() == tedge.attach.len() && img.iter().zip(&tedge.attach).all(|(a, b)| *a == b)).unwrap_or(false);
        if !preserved {
            out.push(AttachmentNotPreserved(e.clone()));
        }
    }
    out
}

pub fn check_morphism(source: &TypedHypergraph, target: &TypedHypergraph, m: &Morphism) -> bool {
    morphism_violations(source, target, m).is_empty()
}

/// Disjoint union with tagged copies `1.x` / `2.x` and the two injections.
pub fn disjoint_union(g1: &TypedHypergraph, g2: &TypedHypergraph) -> Result<(TypedHypergraph, Morphism, Morphism), GraphError> {
    if g1.type_graph() != g2.type_graph() {
        return Err(GraphError::TypeGraphMismatch(g1.type_graph().name.clone(), g2.type_graph().name.clone()));
    }
    let mut union = TypedHypergraph::new(format!("{}+{}", g1.name, g2.name), g1.type_graph().clone());
    let mut injections = Vec::with_capacity(2);
    for (tag, g) in [("1", g1), ("2", g2)] {
        let mut inj = Morphism::default();
        for (n, label) in g.nodes() {
            let id = union.add_node(format!("{tag}.{n}"), label.clone())?;
            inj.node_map.insert(n.clone(), id);
        }
        for (e, edge) in g.edges() {
            let attach = edge.attach.iter().map(|n| inj.node_map[n].clone()).collect();
            let id = union.add_edge(format!("{tag}.{e}"), edge.label.clone(), attach)?;
            inj.edge_map.insert(e.clone(), id);
        }
        injections.push(inj);
    }
    let i2 = injections.pop().unwrap();
    let i1 = injections.pop().unwrap();
    Ok((union, i1, i2))
}

/// A hypergraph with a discrete interface: a set of external nodes embedded
/// into the body by inclusion.
#[derive(Clone, Debug)]
pub struct InterfaceGraph {
    pub body: TypedHypergraph,
    pub interface: Vec<NodeId>,
}

impl InterfaceGraph {
    pub fn new(body: TypedHypergraph, interface: Vec<NodeId>) -> Self {
        InterfaceGraph { body, interface }
    }

    /// A closed graph: empty interface.
    pub fn closed(body: TypedHypergraph) -> Self {
        InterfaceGraph { body, interface: Vec::new() }
    }

    pub fn is_interface(&self, n: &NodeId) -> bool {
        self.interface.contains(n)
    }

    /// Body violations plus missing or repeated interface nodes.
    pub fn validate(&self) -> Vec<String> {
        let mut out: Vec<String> = self.body.validate().iter().map(ToString::to_string).collect();
        let mut seen = BTreeSet::new();
        for n in &self.interface {
            if !self.body.has_node(n) {
                out.push(format!("interface node {n} is not in the body"));
            }
            if !seen.insert(n) {
                out.push(format!("interface node {n} listed twice"));
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn abc_types() -> Arc<TypeGraph> {
        let mut tg = TypeGraph::new("T");
        tg.add_node_type("a").unwrap();
        tg.add_node_type("b").unwrap();
        tg.add_edge_type("A", vec!["a".into(), "a".into()]).unwrap();
        tg.add_edge_type("B", vec!["a".into(), "b".into()]).unwrap();
        tg.add_edge_type("C", vec!["a".into()]).unwrap();
        Arc::new(tg)
    }

    #[test]
    fn empty_graph_is_valid() {
        let g = TypedHypergraph::new("g", abc_types());
        assert!(g.validate().is_empty());
    }

    #[test]
    fn binary_edge_with_matching_types() {
        let mut g = TypedHypergraph::new("g", abc_types());
        g.add_node("v1", "a").unwrap();
        g.add_node("v2", "a").unwrap();
        g.add_edge("e", "A", vec!["v1".into(), "v2".into()]).unwrap();
        assert!(g.is_valid());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let mut g = TypedHypergraph::new("g", abc_types());
        g.add_node("v1", "a").unwrap();
        g.add_edge("e", "A", vec!["v1".into()]).unwrap();
        let v = g.validate();
        assert!(matches!(v.as_slice(), [Violation::ArityMismatch { expected: 2, found: 1, .. }]));
    }

    #[test]
    fn wrong_attach_type_and_missing_node() {
        let mut g = TypedHypergraph::new("g", abc_types());
        g.add_node("v1", "b").unwrap();
        g.add_edge("e", "C", vec!["v1".into()]).unwrap();
        g.add_edge("f", "C", vec!["nope".into()]).unwrap();
        let v = g.validate();
        assert_eq!(v.len(), 2);
        assert!(v.iter().any(|x| matches!(x, Violation::AttachTypeMismatch { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::MissingNode { .. })));
    }

    #[test]
    fn self_loops_are_allowed() {
        let mut g = TypedHypergraph::new("g", abc_types());
        g.add_node("v", "a").unwrap();
        g.add_edge("e", "A", vec!["v".into(), "v".into()]).unwrap();
        assert!(g.is_valid());
    }

    #[test]
    fn type_graph_rejects_unknown_arity_label() {
        let mut tg = TypeGraph::new("T");
        tg.add_node_type("a").unwrap();
        assert!(tg.add_edge_type("E", vec!["zz".into()]).is_err());
        assert!(tg.add_node_type("a").is_err());
    }

    #[test]
    fn identity_and_collapsing_morphisms() {
        let tg = abc_types();
        let mut g = TypedHypergraph::new("g", tg.clone());
        g.add_node("p", "a").unwrap();
        g.add_node("q", "a").unwrap();
        assert!(check_morphism(&g, &g, &Morphism::identity(&g)));

        let mut h = TypedHypergraph::new("h", tg.clone());
        h.add_node("r", "a").unwrap();
        h.add_node("s", "b").unwrap();
        let mut m = Morphism::default();
        m.node_map.insert("p".into(), "r".into());
        m.node_map.insert("q".into(), "r".into());
        assert!(check_morphism(&g, &h, &m));

        m.node_map.insert("q".into(), "s".into());
        assert!(!check_morphism(&g, &h, &m));
    }

    #[test]
    fn partial_maps_are_violations() {
        let tg = abc_types();
        let mut g = TypedHypergraph::new("g", tg);
        g.add_node("p", "a").unwrap();
        let v = morphism_violations(&g, &g, &Morphism::default());
        assert_eq!(v, vec![MorphismViolation::UnmappedNode("p".into())]);
    }

    #[test]
    fn union_with_empty_and_singletons() {
        let tg = abc_types();
        let mut g = TypedHypergraph::new("g", tg.clone());
        g.add_node("p", "a").unwrap();
        g.add_node("q", "a").unwrap();
        g.add_edge("e", "A", vec!["p".into(), "q".into()]).unwrap();
        let empty = TypedHypergraph::new("e", tg.clone());
        let (u, i1, i2) = disjoint_union(&g, &empty).unwrap();
        assert!(is_isomorphic(&u, &g));
        assert!(check_morphism(&g, &u, &i1));
        assert!(check_morphism(&empty, &u, &i2));

        let mut one = TypedHypergraph::new("one", tg.clone());
        one.add_node("p", "a").unwrap();
        let (u, i1, i2) = disjoint_union(&one, &one).unwrap();
        assert_eq!(u.node_count(), 2);
        assert!(i1.is_injective() && i2.is_injective());
        assert_ne!(i1.node(&"p".into()), i2.node(&"p".into()));
    }

    #[test]
    fn union_requires_same_type_graph() {
        let g = TypedHypergraph::new("g", abc_types());
        let h = TypedHypergraph::new("h", Arc::new(TypeGraph::new("other")));
        assert!(matches!(disjoint_union(&g, &h), Err(GraphError::TypeGraphMismatch(..))));
    }
}
