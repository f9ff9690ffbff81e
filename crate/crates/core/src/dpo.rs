//! Double-pushout rewriting with discrete rule interfaces.
//!
//! A rule is a span `L ← K → R` of injective morphisms where `K` holds nodes
//! only. A match `m: L → G` may be non-injective; it is applicable when the
//! gluing condition (identification + dangling) holds, in which case the
//! pushout complement `D` and the pushout `H` are built set-theoretically.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::hypergraph::{
    check_morphism, find_isomorphisms, homomorphisms, is_isomorphic, EdgeId, Label, Morphism, NodeId, TypeGraph, TypedHypergraph,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule {rule}: interface node {node} is missing from the {side}")]
    InterfaceNodeMissing { rule: String, node: NodeId, side: &'static str },
    #[error("rule {rule}: interface node {node} changes type in the {side}")]
    InterfaceTypeMismatch { rule: String, node: NodeId, side: &'static str },
    #[error("rule {rule}: embedding into the {side} is not injective")]
    NotInjective { rule: String, side: &'static str },
    #[error("rule {rule}: interface node {node} is isolated in both sides")]
    IsolatedInBoth { rule: String, node: NodeId },
    #[error("rule {rule}: {side} is not a valid graph: {detail}")]
    InvalidSide { rule: String, side: &'static str, detail: String },
    #[error("rule {rule}: sides are typed over different type graphs")]
    TypeGraphMismatch { rule: String },
}

/// A rule span `L ← K → R` with a discrete interface `K`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub name: String,
    pub interface: IndexMap<NodeId, Label>,
    pub lhs: TypedHypergraph,
    pub rhs: TypedHypergraph,
    pub l: IndexMap<NodeId, NodeId>,
    pub r: IndexMap<NodeId, NodeId>,
}

impl Rule {
    /// A rule whose interface nodes carry the same identifiers in both sides.
    pub fn new(
        name: impl Into<String>,
        interface: IndexMap<NodeId, Label>,
        lhs: TypedHypergraph,
        rhs: TypedHypergraph,
    ) -> Result<Rule, RuleError> {
        let l = interface.keys().map(|k| (k.clone(), k.clone())).collect();
        let r = interface.keys().map(|k| (k.clone(), k.clone())).collect();
        Rule::with_embeddings(name, interface, lhs, rhs, l, r)
    }

    pub fn with_embeddings(
        name: impl Into<String>,
        interface: IndexMap<NodeId, Label>,
        lhs: TypedHypergraph,
        rhs: TypedHypergraph,
        l: IndexMap<NodeId, NodeId>,
        r: IndexMap<NodeId, NodeId>,
    ) -> Result<Rule, RuleError> {
        let rule = Rule { name: name.into(), interface, lhs, rhs, l, r };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<(), RuleError> {
        let name = || self.name.clone();
        if self.lhs.type_graph() != self.rhs.type_graph() {
            return Err(RuleError::TypeGraphMismatch { rule: name() });
        }
        for (side, g, emb) in [("lhs", &self.lhs, &self.l), ("rhs", &self.rhs, &self.r)] {
            let v = g.validate();
            if let Some(first) = v.first() {
                return Err(RuleError::InvalidSide { rule: name(), side, detail: first.to_string() });
            }
            let mut seen = HashSet::new();
            for (k, label) in &self.interface {
                let Some(img) = emb.get(k) else {
                    return Err(RuleError::InterfaceNodeMissing { rule: name(), node: k.clone(), side });
                };
                match g.node_type(img) {
                    None => return Err(RuleError::InterfaceNodeMissing { rule: name(), node: k.clone(), side }),
                    Some(t) if t != label => return Err(RuleError::InterfaceTypeMismatch { rule: name(), node: k.clone(), side }),
                    Some(_) => {}
                }
                if !seen.insert(img.clone()) {
                    return Err(RuleError::NotInjective { rule: name(), side });
                }
            }
        }
        for k in self.interface.keys() {
            if self.lhs.is_isolated(&self.l[k]) && self.rhs.is_isolated(&self.r[k]) {
                return Err(RuleError::IsolatedInBoth { rule: name(), node: k.clone() });
            }
        }
        Ok(())
    }

    pub fn type_graph(&self) -> &Arc<TypeGraph> {
        self.lhs.type_graph()
    }

    /// Nodes of `L ∖ l(K)`.
    pub fn deleted_nodes(&self) -> Vec<NodeId> {
        let kept: HashSet<&NodeId> = self.l.values().collect();
        self.lhs.node_ids().filter(|n| !kept.contains(n)).cloned().collect()
    }

    /// Nodes of `R ∖ r(K)`.
    pub fn created_nodes(&self) -> Vec<NodeId> {
        let kept: HashSet<&NodeId> = self.r.values().collect();
        self.rhs.node_ids().filter(|n| !kept.contains(n)).cloned().collect()
    }

    /// The inverse rule `R ← K → L`.
    pub fn reversed(&self) -> Rule {
        Rule {
            name: format!("{}~", self.name),
            interface: self.interface.clone(),
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            l: self.r.clone(),
            r: self.l.clone(),
        }
    }
}

/// A graph transformation system `⟨TG, P, π, G₀⟩`.
#[derive(Clone, Debug)]
pub struct Gts {
    pub type_graph: Arc<TypeGraph>,
    pub rules: IndexMap<String, Rule>,
    pub start: TypedHypergraph,
}

/// A match of a rule's left-hand side in a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub rule: String,
    /// Position in the [`find_matches`] enumeration.
    pub index: usize,
    pub morphism: Morphism,
}

/// A violated half of the gluing condition, with witnesses.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluingViolation {
    #[error("identification condition violated: {0}")]
    Identification(IdentificationWitness),
    #[error("dangling condition violated at node {node}, edge {edge}")]
    Dangling { node: NodeId, edge: EdgeId },
    #[error("match is not a morphism of the left-hand side: {0}")]
    NotAMorphism(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentificationWitness {
    Nodes { deleted: NodeId, other: NodeId, image: NodeId },
    Edges { deleted: EdgeId, other: EdgeId, image: EdgeId },
}

impl fmt::Display for IdentificationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentificationWitness::Nodes { deleted, other, image } => {
                write!(f, "deleted node {deleted} and node {other} both map to {image}")
            }
            IdentificationWitness::Edges { deleted, other, image } => {
                write!(f, "deleted edge {deleted} and edge {other} both map to {image}")
            }
        }
    }
}

/// Every total, type-preserving morphism `L → host`, in deterministic order.
/// Gluing is not checked here.
pub fn find_matches(rule: &Rule, host: &TypedHypergraph) -> Vec<Match> {
    homomorphisms(&rule.lhs, host)
        .into_iter()
        .enumerate()
        .map(|(index, morphism)| Match { rule: rule.name.clone(), index, morphism })
        .collect()
}

fn identification_witness(rule: &Rule, m: &Morphism) -> Option<IdentificationWitness> {
    let mut node_owner: HashMap<&NodeId, Vec<&NodeId>> = HashMap::new();
    for n in rule.lhs.node_ids() {
        node_owner.entry(&m.node_map[n]).or_default().push(n);
    }
    for x in rule.deleted_nodes() {
        let image = &m.node_map[&x];
        if let Some(other) = node_owner[image].iter().find(|y| ***y != x) {
            return Some(IdentificationWitness::Nodes { deleted: x.clone(), other: (*other).clone(), image: image.clone() });
        }
    }
    // Discrete interface: every edge of L is deleted.
    let mut edge_owner: HashMap<&EdgeId, &EdgeId> = HashMap::new();
    for e in rule.lhs.edge_ids() {
        let image = &m.edge_map[e];
        if let Some(other) = edge_owner.insert(image, e) {
            return Some(IdentificationWitness::Edges { deleted: e.clone(), other: other.clone(), image: image.clone() });
        }
    }
    None
}

fn dangling_witness(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> Option<(NodeId, EdgeId)> {
    let deleted: HashSet<&NodeId> = rule.deleted_nodes().iter().map(|n| &m.node_map[n]).collect::<Vec<_>>().into_iter().collect();
    let matched: HashSet<&EdgeId> = m.edge_map.values().collect();
    for (e, edge) in host.edges() {
        if matched.contains(e) {
            continue;
        }
        if let Some(v) = edge.attach.iter().find(|v| deleted.contains(v)) {
            return Some((v.clone(), e.clone()));
        }
    }
    None
}

/// For all `x ∈ L ∖ l(K)`, `y ∈ L`: `m(x) = m(y)` implies `x = y`, on nodes
/// and on edges separately.
pub fn check_identification(rule: &Rule, m: &Morphism) -> bool {
    identification_witness(rule, m).is_none()
}

/// No host edge outside `m(L)` is attached to the image of a deleted node.
pub fn check_dangling(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> bool {
    dangling_witness(rule, host, m).is_none()
}

pub fn check_gluing(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> Result<(), GluingViolation> {
    let v = crate::hypergraph::morphism_violations(&rule.lhs, host, m);
    if let Some(first) = v.first() {
        return Err(GluingViolation::NotAMorphism(first.to_string()));
    }
    if let Some(w) = identification_witness(rule, m) {
        return Err(GluingViolation::Identification(w));
    }
    if let Some((node, edge)) = dangling_witness(rule, host, m) {
        return Err(GluingViolation::Dangling { node, edge });
    }
    Ok(())
}

/// The context graph `D` of pushout (1) with `d: K → D` and the inclusion
/// `g: D → G`.
#[derive(Clone, Debug)]
pub struct Complement {
    pub context: TypedHypergraph,
    pub d: IndexMap<NodeId, NodeId>,
    pub g: Morphism,
}

/// Deletes the images of `L ∖ l(K)` from the host.
pub fn pushout_complement(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> Result<Complement, GluingViolation> {
    check_gluing(rule, host, m)?;
    let mut context = host.clone();
    context.name = format!("{}-{}", host.name, rule.name);
    for e in rule.lhs.edge_ids() {
        context.remove_edge(&m.edge_map[e]);
    }
    for n in rule.deleted_nodes() {
        context.remove_node(&m.node_map[&n]);
    }
    let d = rule.interface.keys().map(|k| (k.clone(), m.node_map[&rule.l[k]].clone())).collect();
    let g = Morphism::identity(&context);
    Ok(Complement { context, d, g })
}

/// The result graph `H` of pushout (2) with the inclusion `h: D → H` and the
/// comatch `m*: R → H`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub result: TypedHypergraph,
    pub h: Morphism,
    pub comatch: Morphism,
}

/// Glues a copy of `R ∖ r(K)` onto `D` along `d`. Fresh identifiers reuse the
/// right-hand side's identifier when it is free in `D` and otherwise take the
/// first free `_k` suffix.
pub fn pushout(rule: &Rule, context: &TypedHypergraph, d: &IndexMap<NodeId, NodeId>) -> Pushout {
    let mut result = context.clone();
    let mut comatch = Morphism::default();
    let r_inv: HashMap<&NodeId, &NodeId> = rule.r.iter().map(|(k, rk)| (rk, k)).collect();
    for (n, label) in rule.rhs.nodes() {
        let image = match r_inv.get(n) {
            Some(k) => d[*k].clone(),
            None => {
                let id = result.fresh_node_id(n.as_str());
                result.add_node(id.clone(), label.clone()).expect("fresh id");
                id
            }
        };
        comatch.node_map.insert(n.clone(), image);
    }
    for (e, edge) in rule.rhs.edges() {
        let id = result.fresh_edge_id(e.as_str());
        let attach = edge.attach.iter().map(|n| comatch.node_map[n].clone()).collect();
        result.add_edge(id.clone(), edge.label.clone(), attach).expect("fresh id");
        comatch.edge_map.insert(e.clone(), id);
    }
    let h = Morphism::identity(context);
    Pushout { result, h, comatch }
}

/// A direct transformation `G ⇒ H` with every arrow of the DPO diagram.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub rule: String,
    pub host: TypedHypergraph,
    pub matching: Morphism,
    pub context: TypedHypergraph,
    pub result: TypedHypergraph,
    pub d: IndexMap<NodeId, NodeId>,
    pub g: Morphism,
    pub h: Morphism,
    pub comatch: Morphism,
}

impl StepRecord {
    /// Checks `l;m = d;g`, `r;m* = d;h`, that every arrow is a morphism,
    /// that `g`, `h` are injective and that `m*` is injective on `R ∖ r(K)`.
    pub fn verify(&self, rule: &Rule) -> Result<(), String> {
        let arrows = [
            ("m", &rule.lhs, &self.host, &self.matching),
            ("g", &self.context, &self.host, &self.g),
            ("h", &self.context, &self.result, &self.h),
            ("m*", &rule.rhs, &self.result, &self.comatch),
        ];
        for (name, s, t, f) in arrows {
            if !check_morphism(s, t, f) {
                return Err(format!("{name} is not a morphism"));
            }
        }
        if !self.g.is_injective() || !self.h.is_injective() {
            return Err("g or h is not injective".into());
        }
        for (k, dk) in &self.d {
            if !self.context.has_node(dk) {
                return Err(format!("d({k}) is not in D"));
            }
            if self.matching.node_map[&rule.l[k]] != self.g.node_map[dk] {
                return Err(format!("left square does not commute at {k}"));
            }
            if self.comatch.node_map[&rule.r[k]] != self.h.node_map[dk] {
                return Err(format!("right square does not commute at {k}"));
            }
        }
        let created: Vec<NodeId> = rule.created_nodes();
        let images: HashSet<&NodeId> = created.iter().map(|n| &self.comatch.node_map[n]).collect();
        let h_images: HashSet<&NodeId> = self.h.node_map.values().collect();
        if images.len() != created.len() || images.iter().any(|n| h_images.contains(n)) {
            return Err("comatch is not injective on created nodes".into());
        }
        Ok(())
    }
}

pub fn apply(rule: &Rule, host: &TypedHypergraph, m: &Morphism) -> Result<StepRecord, GluingViolation> {
    let Complement { context, d, g } = pushout_complement(rule, host, m)?;
    let Pushout { mut result, h, comatch } = pushout(rule, &context, &d);
    result.name = format!("{}'", host.name);
    Ok(StepRecord { rule: rule.name.clone(), host: host.clone(), matching: m.clone(), context, result, d, g, h, comatch })
}

/// One successor of a graph, representing its isomorphism class.
#[derive(Clone, Debug)]
pub struct Successor {
    pub rule: String,
    pub match_index: usize,
    pub step: StepRecord,
}

/// All results of applicable steps, deduplicated up to isomorphism. The
/// first step reaching a class (rules in order, then matches in order) is
/// kept as its representative.
pub fn successors<'a>(g: &TypedHypergraph, rules: impl IntoIterator<Item = &'a Rule>) -> Vec<Successor> {
    let mut out: Vec<Successor> = Vec::new();
    for rule in rules {
        for mt in find_matches(rule, g) {
            let Ok(step) = apply(rule, g, &mt.morphism) else { continue };
            if out.iter().any(|s| is_isomorphic(&s.step.result, &step.result)) {
                continue;
            }
            out.push(Successor { rule: rule.name.clone(), match_index: mt.index, step });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub rule: String,
    pub match_index: usize,
    pub result: TypedHypergraph,
}

/// (graph, parent index, step taken)
type Visit = (TypedHypergraph, Option<usize>, Option<(String, usize)>);

/// Breadth-first search over isomorphism classes, up to `depth` steps. An
/// absent answer only means "not within the bound".
pub fn reachable(gts: &Gts, target: &TypedHypergraph, depth: usize) -> Option<Vec<TraceStep>> {
    if is_isomorphic(&gts.start, target) {
        return Some(Vec::new());
    }
    let mut seen: Vec<Visit> = vec![(gts.start.clone(), None, None)];
    let mut frontier: VecDeque<(usize, usize)> = VecDeque::from([(0, 0)]);
    while let Some((idx, level)) = frontier.pop_front() {
        if level == depth {
            continue;
        }
        let current = seen[idx].0.clone();
        for s in successors(&current, gts.rules.values()) {
            let graph = s.step.result;
            if seen.iter().any(|(g, _, _)| find_isomorphisms(g, &graph, 1).len() == 1) {
                continue;
            }
            let hit = is_isomorphic(&graph, target);
            seen.push((graph, Some(idx), Some((s.rule, s.match_index))));
            let new_idx = seen.len() - 1;
            if hit {
                let mut trace = Vec::new();
                let mut cur = new_idx;
                while let (Some(parent), Some((rule, mi))) = (seen[cur].1, seen[cur].2.clone()) {
                    trace.push(TraceStep { rule, match_index: mi, result: seen[cur].0.clone() });
                    cur = parent;
                }
                trace.reverse();
                return Some(trace);
            }
            frontier.push_back((new_idx, level + 1));
        }
    }
    None
}
