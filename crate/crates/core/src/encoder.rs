//! Graphs and rules as formulas, derivations certifying rewriting steps, and
//! the correspondence between rewriting and provability.
//!
//! A node of type `A` is a non-linear variable `x : A` located at
//! `n : loc A @ x`; an edge `E(v1..vk)` is the atom `E(x1..xk)`, produced in
//! a graph encoding by a linear constructor `e : all y1..yk. E(y1..yk)`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::dpo::{find_matches, successors, Rule, StepRecord};
use crate::hill::syntax::is_keyword;
use crate::hill::{alpha_eq, name, normal_form, Arg, Formula, Name, Pattern, Sequent, Term};
use crate::hypergraph::{find_isomorphisms, is_isomorphic, EdgeId, InterfaceGraph, Label, Morphism, NodeId, TypeGraph, TypedHypergraph};
use crate::kernel::check::{lookup, only, with, without};
use crate::kernel::search::{fresh, identity_lolli, node};
use crate::kernel::{check, ProofTree, RuleTag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("not a closed normal graph formula: {0}")]
    NotNormalForm(String),
    #[error("decoded graph is ill-typed: {0}")]
    IllTyped(String),
    #[error("no certificate: {0}")]
    NoCertificate(String),
}

type Ctx = Vec<(Name, Formula)>;

pub fn node_type(label: &Label) -> Formula {
    Formula::atom(label.as_str())
}

pub fn edge_atom(label: &str, args: &[Name]) -> Formula {
    Formula::Pred(name(label), args.iter().map(|x| Arg { term: Term::Var(x.clone()), ty: None }).collect())
}

/// `all y1:A1 ... yk:Ak. E(y1, ..., yk)`
pub fn constructor_type(label: &str, arity: &[Label]) -> Formula {
    let ys: Vec<Name> = (1..=arity.len()).map(|i| name(&format!("y{i}"))).collect();
    ys.iter().zip(arity).rev().fold(edge_atom(label, &ys), |acc, (y, t)| Formula::forall(y.clone(), node_type(t), acc))
}

/// The non-linear edge constructors `Γ′`, one per edge type.
pub fn constructors(tg: &TypeGraph) -> Ctx {
    let mut avoid = BTreeSet::new();
    tg.edge_types()
        .map(|(e, ar)| (fresh(&ident_or(&format!("mk_{}", e.as_str()), "mk"), &mut avoid), constructor_type(e.as_str(), ar)))
        .collect()
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_keyword(s)
}

fn ident_or(s: &str, fallback: &str) -> String {
    if is_ident(s) {
        s.to_string()
    } else {
        fallback.to_string()
    }
}

fn var(x: &Name) -> Term {
    Term::Var(x.clone())
}

/// Nodes ordered by type label, then by first incidence, then by position.
pub fn node_order(g: &TypedHypergraph) -> Vec<NodeId> {
    let mut first: HashMap<&NodeId, (usize, usize)> = HashMap::new();
    for (ei, (_, e)) in g.edges().enumerate() {
        for (pi, n) in e.attach.iter().enumerate() {
            first.entry(n).or_insert((ei, pi));
        }
    }
    let mut v: Vec<(usize, &NodeId, &Label)> = g.nodes().enumerate().map(|(i, (n, l))| (i, n, l)).collect();
    v.sort_by_key(|(i, n, l)| ((*l).clone(), first.get(n).copied().unwrap_or((usize::MAX, usize::MAX)), *i));
    v.into_iter().map(|(_, n, _)| n.clone()).collect()
}

/// A graph, or the body of an interface graph, as a formula.
#[derive(Clone, Debug)]
pub struct Representation {
    /// `all interface. ex hidden. body`
    pub formula: Formula,
    pub interface: Vec<(NodeId, Name, Formula)>,
    pub hidden: Vec<(NodeId, Name, Formula)>,
    /// Edges in tensor-factor order.
    pub edges: Vec<EdgeId>,
    pub body: Formula,
}

impl Representation {
    /// `ex hidden. body`
    pub fn hidden_formula(&self) -> Formula {
        self.hidden.iter().rev().fold(self.body.clone(), |acc, (_, x, t)| Formula::hide(x.clone(), t.clone(), acc))
    }
}

/// Variables for interface nodes are given; the rest are named after their
/// node identifiers where possible.
pub fn represent(g: &TypedHypergraph, interface: &[(NodeId, Name)], avoid: &BTreeSet<Name>) -> Representation {
    let mut avoid = avoid.clone();
    avoid.extend(interface.iter().map(|(_, x)| x.clone()));
    let iface: Vec<(NodeId, Name, Formula)> =
        interface.iter().map(|(n, x)| (n.clone(), x.clone(), node_type(g.node_type(n).expect("interface node")))).collect();
    let hidden: Vec<(NodeId, Name, Formula)> = node_order(g)
        .into_iter()
        .filter(|n| !interface.iter().any(|(m, _)| m == n))
        .enumerate()
        .map(|(i, n)| {
            let x = fresh(&ident_or(n.as_str(), &format!("x{}", i + 1)), &mut avoid);
            let t = node_type(g.node_type(&n).unwrap());
            (n, x, t)
        })
        .collect();
    let pos: HashMap<&NodeId, (usize, &Name)> = iface.iter().chain(&hidden).enumerate().map(|(i, (n, x, _))| (n, (i, x))).collect();
    let mut edges: Vec<(Label, Vec<usize>, EdgeId)> =
        g.edges().map(|(id, e)| (e.label.clone(), e.attach.iter().map(|n| pos[n].0).collect(), id.clone())).collect();
    edges.sort();
    let body = Formula::tensor_all(
        edges
            .iter()
            .map(|(l, _, id)| {
                let args: Vec<Name> = g.edge(id).unwrap().attach.iter().map(|n| pos[n].1.clone()).collect();
                edge_atom(l.as_str(), &args)
            })
            .collect(),
    );
    let mut r = Representation { formula: Formula::One, interface: iface, hidden, edges: edges.into_iter().map(|e| e.2).collect(), body };
    let inner = r.hidden_formula();
    r.formula = r.interface.iter().rev().fold(inner, |acc, (_, x, t)| Formula::forall(x.clone(), t.clone(), acc));
    r
}

#[derive(Clone, Debug, Default)]
pub struct GraphSignature {
    /// node ↦ (location, naming variable, type)
    pub node_locations: IndexMap<NodeId, (Name, Name, Formula)>,
    /// edge ↦ (linear variable, constructor type)
    pub edge_vars: IndexMap<EdgeId, (Name, Formula)>,
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub representation: Representation,
    pub signature: GraphSignature,
    pub sequent: Sequent,
    pub derivation: ProofTree,
}

impl Encoding {
    pub fn formula(&self) -> &Formula {
        &self.representation.formula
    }
}

pub fn encode_graph(g: &TypedHypergraph) -> Encoding {
    encode_abstract(&InterfaceGraph::closed(g.clone()))
}

pub fn encode_abstract(ig: &InterfaceGraph) -> Encoding {
    let g = &ig.body;
    let mut avoid = BTreeSet::new();
    let fixed: Vec<(NodeId, Name)> = ig
        .interface
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), fresh(&ident_or(n.as_str(), &format!("x{}", i + 1)), &mut avoid)))
        .collect();
    let rep = represent(g, &fixed, &avoid);
    avoid.extend(rep.hidden.iter().map(|(_, x, _)| x.clone()));
    let mut sig = GraphSignature::default();
    for (i, (n, x, t)) in rep.hidden.iter().enumerate() {
        let loc = fresh(&format!("n{}", i + 1), &mut avoid);
        sig.node_locations.insert(n.clone(), (loc, x.clone(), t.clone()));
    }
    for (j, e) in rep.edges.iter().enumerate() {
        let u = fresh(&format!("e{}", j + 1), &mut avoid);
        let edge = g.edge(e).unwrap();
        let ar = g.type_graph().arity(&edge.label).expect("typed edge").to_vec();
        sig.edge_vars.insert(e.clone(), (u, constructor_type(edge.label.as_str(), &ar)));
    }
    let gamma: Ctx = rep.hidden.iter().map(|(_, x, t)| (x.clone(), t.clone())).collect();
    let delta: Ctx = sig
        .node_locations
        .values()
        .map(|(n, x, t)| (n.clone(), Formula::loc(t.clone(), var(x))))
        .chain(sig.edge_vars.values().cloned())
        .collect();
    let full_gamma = with(&gamma, &rep.interface.iter().map(|(_, x, t)| (x.clone(), t.clone())).collect::<Vec<_>>());
    let sigma: Vec<Name> = rep.hidden.iter().map(|(_, x, _)| x.clone()).collect();
    let mut tree = close(&full_gamma, &delta, &rep.hidden_formula(), &sigma).expect("graph encodings are derivable");
    for k in (0..rep.interface.len()).rev() {
        let g_k = with(&gamma, &rep.interface[..k].iter().map(|(_, x, t)| (x.clone(), t.clone())).collect::<Vec<_>>());
        let (_, x, t) = &rep.interface[k];
        let goal = Formula::forall(x.clone(), t.clone(), tree.conclusion.goal.clone());
        let term = Term::lam(x.clone(), tree.term().clone());
        tree = node(RuleTag::AllR, &g_k, &delta, term, goal, vec![tree]);
    }
    Encoding { representation: rep, signature: sig, sequent: tree.conclusion.clone(), derivation: tree }
}

/// A rule as `all K. (ex L∖K. body_L) -o (ex R∖K. body_R)`.
#[derive(Clone, Debug)]
pub struct RuleRepresentation {
    pub formula: Formula,
    pub interface: Vec<(NodeId, Name, Formula)>,
    pub lhs: Representation,
    pub rhs: Representation,
}

pub fn represent_rule(rule: &Rule, avoid: &BTreeSet<Name>) -> RuleRepresentation {
    let mut avoid = avoid.clone();
    let names: Vec<(NodeId, Name, Formula)> = rule
        .interface
        .iter()
        .enumerate()
        .map(|(i, (k, t))| (k.clone(), fresh(&ident_or(k.as_str(), &format!("y{}", i + 1)), &mut avoid), node_type(t)))
        .collect();
    let on =
        |emb: &IndexMap<NodeId, NodeId>| -> Vec<(NodeId, Name)> { names.iter().map(|(k, x, _)| (emb[k].clone(), x.clone())).collect() };
    let lhs = represent(&rule.lhs, &on(&rule.l), &avoid);
    let rhs = represent(&rule.rhs, &on(&rule.r), &avoid);
    let body = Formula::lolli(lhs.hidden_formula(), rhs.hidden_formula());
    let formula = names.iter().rev().fold(body, |acc, (_, x, t)| Formula::forall(x.clone(), t.clone(), acc));
    RuleRepresentation { formula, interface: names, lhs, rhs }
}

/// `!all K. γ_L -o γ_R`
pub fn encode_rule(rule: &Rule) -> Formula {
    Formula::bang(represent_rule(rule, &BTreeSet::new()).formula)
}

/// Two rules applied in parallel, `all x̄1 x̄2. (α1 -o β1) * (α2 -o β2)`,
/// and the joint rule `all x̄1 x̄2. α1 * α2 -o β1 * β2`.
pub fn parallel_formulas(r1: &Rule, r2: &Rule) -> (Formula, Formula) {
    let a = represent_rule(r1, &BTreeSet::new());
    let avoid: BTreeSet<Name> = a.interface.iter().map(|(_, x, _)| x.clone()).collect();
    let b = represent_rule(r2, &avoid);
    let prefix: Vec<(Name, Formula)> = a.interface.iter().chain(&b.interface).map(|(_, x, t)| (x.clone(), t.clone())).collect();
    let wrap = |body: Formula| prefix.iter().rev().fold(body, |acc, (x, t)| Formula::forall(x.clone(), t.clone(), acc));
    let (l1, r1f, l2, r2f) = (a.lhs.hidden_formula(), a.rhs.hidden_formula(), b.lhs.hidden_formula(), b.rhs.hidden_formula());
    let par = wrap(Formula::tensor(Formula::lolli(l1.clone(), r1f.clone()), Formula::lolli(l2.clone(), r2f.clone())));
    let joint = wrap(Formula::lolli(Formula::tensor(l1, l2), Formula::tensor(r1f, r2f)));
    (par, joint)
}

/// The graph of a closed normal graph formula, with the node for each
/// prefix position.
pub fn decode_with_prefix(f: &Formula, tg: &Arc<TypeGraph>) -> Result<(TypedHypergraph, Vec<NodeId>), EncodeError> {
    let nf = normal_form(f).ok_or_else(|| EncodeError::NotNormalForm(f.to_string()))?;
    if !nf.closed {
        return Err(EncodeError::NotNormalForm(format!("{f} has free node variables")));
    }
    let mut g = TypedHypergraph::new("decoded", tg.clone());
    let mut current: HashMap<Name, NodeId> = HashMap::new();
    let mut prefix = Vec::new();
    for (x, t) in &nf.prefix {
        let label = match t {
            Formula::Bang(inner) => inner.to_string(),
            _ => t.to_string(),
        };
        let id = g.fresh_node_id(x);
        g.add_node(id.clone(), Label::new(label)).expect("fresh id");
        current.insert(x.clone(), id.clone());
        prefix.push(id);
    }
    for (j, (e, args)) in nf.atoms.iter().enumerate() {
        let attach = args.iter().map(|x| current[x].clone()).collect();
        g.add_edge(EdgeId::new(format!("e{}", j + 1)), Label::new(&**e), attach).expect("fresh id");
    }
    if let Some(v) = g.validate().first() {
        return Err(EncodeError::IllTyped(v.to_string()));
    }
    Ok((g, prefix))
}

/// The smallest type graph a closed normal graph formula is typed over.
pub fn type_graph_of(f: &Formula) -> Result<TypeGraph, EncodeError> {
    let nf = normal_form(f).ok_or_else(|| EncodeError::NotNormalForm(f.to_string()))?;
    let mut tg = TypeGraph::new("TG");
    let mut types: HashMap<Name, Label> = HashMap::new();
    for (x, t) in &nf.prefix {
        let label = Label::new(match t {
            Formula::Bang(inner) => inner.to_string(),
            _ => t.to_string(),
        });
        if !tg.has_node_type(&label) {
            tg.add_node_type(label.clone()).expect("new node type");
        }
        types.insert(x.clone(), label);
    }
    for (e, args) in &nf.atoms {
        let arity: Vec<Label> = args
            .iter()
            .map(|x| types.get(x).cloned().ok_or_else(|| EncodeError::NotNormalForm(format!("{x} is not bound"))))
            .collect::<Result<_, _>>()?;
        let label = Label::new(&**e);
        match tg.arity(&label) {
            Some(known) if known != arity.as_slice() => return Err(EncodeError::IllTyped(format!("edge type {e} used at two arities"))),
            Some(_) => {}
            None => tg.add_edge_type(label, arity).map_err(|err| EncodeError::IllTyped(err.to_string()))?,
        }
    }
    Ok(tg)
}

pub fn decode(f: &Formula, tg: &Arc<TypeGraph>) -> Result<TypedHypergraph, EncodeError> {
    decode_with_prefix(f, tg).map(|(g, _)| g)
}

fn canon(f: &Formula, k: usize) -> Formula {
    let rebind = |x: &Name, body: &Formula| {
        let y = name(&format!("#{k}"));
        (y.clone(), canon(&body.subst1(x, &Term::Var(y)), k + 1))
    };
    match f {
        Formula::Tensor(..) => {
            let mut factors = Vec::new();
            let mut cur = f;
            while let Formula::Tensor(a, b) = cur {
                factors.push(canon(a, k));
                cur = b;
            }
            factors.push(canon(cur, k));
            factors.sort_by_cached_key(|x| format!("{x:?}"));
            Formula::tensor_all(factors)
        }
        Formula::Lolli(a, b) => Formula::lolli(canon(a, k), canon(b, k)),
        Formula::Bang(a) => Formula::bang(canon(a, k)),
        Formula::Forall(x, t, b) => {
            let (y, b) = rebind(x, b);
            Formula::forall(y, canon(t, k), b)
        }
        Formula::Hide(..) => canon_hiding(f, k),
        Formula::Loc(a, d) => Formula::loc(canon(a, k), d.clone()),
        Formula::Pred(..) | Formula::One => f.clone(),
    }
}

/// Longest run of adjacent hiding binders reordered exhaustively.
const MAX_PERMUTED: usize = 7;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Adjacent hiding binders commute, so a run of them is canonicalised under
/// every order and the least result kept.
fn canon_hiding(f: &Formula, k: usize) -> Formula {
    // binders first get distinct names, so shadowing cannot confuse the run
    let mut run = Vec::new();
    let mut body = f.clone();
    while let Formula::Hide(x, t, b) = body {
        let y = name(&format!("#r{k}_{}", run.len()));
        body = b.subst1(&x, &Term::Var(y.clone()));
        run.push((y, canon(&t, k)));
    }
    let orders = if run.len() <= MAX_PERMUTED { permutations(run.len()) } else { vec![(0..run.len()).collect()] };
    orders
        .into_iter()
        .map(|order| {
            let mut b = body.clone();
            for (pos, &i) in order.iter().enumerate() {
                b = b.subst1(&run[i].0, &Term::Var(name(&format!("#{}", k + pos))));
            }
            let b = canon(&b, k + run.len());
            order.iter().enumerate().rev().fold(b, |acc, (pos, &i)| Formula::hide(name(&format!("#{}", k + pos)), run[i].1.clone(), acc))
        })
        .map(|c| (format!("{c:?}"), c))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("at least one order")
        .1
}

/// α-equivalence up to reordering of tensor factors and of adjacent hiding
/// binders.
pub fn equivalent(a: &Formula, b: &Formula) -> bool {
    canon(a, 0) == canon(b, 0)
}

// ---- building derivations ----

fn uid(gamma: &[(Name, Formula)], x: &Name, t: &Formula) -> ProofTree {
    node(RuleTag::UId, gamma, &[], var(x), t.clone(), vec![])
}

/// `Γ ; u : τ |- ? :: f` for an atom `f`, either directly or by
/// instantiating a constructor.
fn factor_proof(gamma: &[(Name, Formula)], u: &Name, ty: &Formula, f: &Formula) -> Option<ProofTree> {
    let delta = vec![(u.clone(), ty.clone())];
    if f.is_atomic() && alpha_eq(ty, f) {
        return Some(node(RuleTag::LId, gamma, &delta, var(u), f.clone(), vec![]));
    }
    let Formula::Forall(..) = ty else { return None };
    let mut binders = Vec::new();
    let mut cur = ty;
    while let Formula::Forall(x, t, b) = cur {
        binders.push((x.clone(), (**t).clone()));
        cur = b;
    }
    let (Formula::Pred(e, params), Formula::Pred(e2, args)) = (cur, f) else { return None };
    if e != e2 || params.len() != args.len() {
        return None;
    }
    let mut witness: HashMap<&Name, &Term> = HashMap::new();
    for (p, a) in params.iter().zip(args) {
        let Term::Var(x) = &p.term else { return None };
        if let Some(prev) = witness.insert(x, &a.term) {
            if prev != &a.term {
                return None;
            }
        }
    }
    let mut avoid: BTreeSet<Name> = gamma.iter().map(|(x, _)| x.clone()).collect();
    avoid.insert(u.clone());
    avoid.extend(f.free_vars());
    let mut chain = Vec::new();
    let mut cur_u = u.clone();
    let mut cur_ty = ty.clone();
    for (x, t) in &binders {
        let Term::Var(w) = witness.get(x)? else { return None };
        let Formula::Forall(bx, _, b) = &cur_ty else { unreachable!() };
        let next = b.subst1(bx, &var(w));
        let v = fresh("u", &mut avoid);
        chain.push((cur_u.clone(), cur_ty.clone(), v.clone(), w.clone(), t.clone()));
        cur_u = v;
        cur_ty = next;
    }
    if !alpha_eq(&cur_ty, f) {
        return None;
    }
    let mut tree = node(RuleTag::LId, gamma, &[(cur_u.clone(), cur_ty)], var(&cur_u), f.clone(), vec![]);
    for (u0, ty0, v, w, t) in chain.into_iter().rev() {
        let term = Term::let_(Pattern::Var(v), Term::app(var(&u0), var(&w)), tree.term().clone());
        tree = node(RuleTag::AllL, gamma, &[(u0, ty0)], term, f.clone(), vec![uid(gamma, &w, &t), tree]);
    }
    Some(tree)
}

fn tensor_proof(gamma: &[(Name, Formula)], delta: &[(Name, Formula)], f: &Formula) -> Option<ProofTree> {
    match f {
        Formula::One if delta.is_empty() => Some(node(RuleTag::OneR, gamma, &[], Term::Nil, Formula::One, vec![])),
        Formula::Tensor(a, b) => {
            for (i, (u, ty)) in delta.iter().enumerate() {
                let Some(p1) = factor_proof(gamma, u, ty, a) else { continue };
                let mut rest = delta.to_vec();
                rest.remove(i);
                let Some(p2) = tensor_proof(gamma, &rest, b) else { continue };
                let t = Term::pair(p1.term().clone(), p2.term().clone());
                return Some(node(RuleTag::TensorR, gamma, delta, t, f.clone(), vec![p1, p2]).with_split(vec![u.clone()]));
            }
            None
        }
        Formula::Pred(..) => match delta {
            [(u, ty)] => factor_proof(gamma, u, ty, f),
            _ => None,
        },
        _ => None,
    }
}

fn location_of<'a>(delta: &'a [(Name, Formula)], x: &Name) -> Option<&'a Name> {
    delta.iter().find(|(_, f)| matches!(f, Formula::Loc(_, Term::Var(y)) if y == x)).map(|(n, _)| n)
}

/// Proves a normal graph formula from locations and atoms (or
/// constructors), hiding `sigma[i]` under the i-th binder. Side conditions
/// are not pre-checked: the checker decides.
pub fn close(gamma: &[(Name, Formula)], delta: &[(Name, Formula)], goal: &Formula, sigma: &[Name]) -> Option<ProofTree> {
    let Formula::Hide(x, b, a) = goal else {
        return if sigma.is_empty() { tensor_proof(gamma, delta, goal) } else { None };
    };
    let (d, rest_sigma) = sigma.split_first()?;
    let n = location_of(delta, d)?.clone();
    let dt = var(d);
    let p3 = close(gamma, &without(delta, std::slice::from_ref(&n)), &a.subst1(x, &dt), rest_sigma)?;
    let mut avoid: BTreeSet<Name> = gamma.iter().map(|(y, _)| y.clone()).collect();
    avoid.extend(goal.free_vars());
    let y = fresh(x, &mut avoid);
    let g1 = vec![d.clone()];
    let g2y = with(&without(gamma, &g1), &[(y.clone(), (**b).clone())]);
    let p1 = identity_lolli(&g2y, &a.subst1(x, &var(&y)))?;
    let p2 = uid(&only(gamma, &g1), d, b);
    let t = Term::eps(dt, n, p3.term().clone());
    let mut r = node(RuleTag::ExR, gamma, delta, t, goal.clone(), vec![p1, p2, p3]);
    r.inst.gamma_split = Some(g1);
    Some(r)
}

#[derive(Clone, Debug)]
enum Step {
    ExL { u: Name, z: Name, n: Name, v: Name },
    TensorL { u: Name, a: Name, b: Name },
    OneL { u: Name },
    AllL { u: Name, v: Name, w: Name, ty: Formula },
    Contr { x: Name, u: Name },
    LolliL { v: Name, u: Name, split: Vec<Name>, left: Box<ProofTree> },
}

/// A derivation under construction: a sequence of left rules applied to
/// `Γ ; Δ`, closed at the end by building the goal graph.
pub struct Session {
    tg: Arc<TypeGraph>,
    gamma: Ctx,
    delta: Ctx,
    avoid: BTreeSet<Name>,
    steps: Vec<(Ctx, Ctx, Step)>,
}

impl Session {
    pub fn new(tg: Arc<TypeGraph>, gamma: Ctx, delta: Ctx) -> Session {
        let avoid = crate::kernel::search::used_names(&gamma, &delta, &Formula::One);
        Session { tg, gamma, delta, avoid, steps: Vec::new() }
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        fresh(base, &mut self.avoid)
    }

    pub fn gamma(&self) -> &[(Name, Formula)] {
        &self.gamma
    }

    pub fn delta(&self) -> &[(Name, Formula)] {
        &self.delta
    }

    fn record(&mut self, step: Step) {
        self.steps.push((self.gamma.clone(), self.delta.clone(), step));
    }

    fn take(&mut self, u: &Name) -> Result<Formula, String> {
        let i = self.delta.iter().position(|(x, _)| x == u).ok_or_else(|| format!("{u} is not available"))?;
        Ok(self.delta.remove(i).1)
    }

    fn ty(&self, u: &Name) -> Result<Formula, String> {
        lookup(&self.delta, u).cloned().ok_or_else(|| format!("{u} is not available"))
    }

    /// Opens quantifiers and tensors of `u` down to atoms and locations.
    /// Returns the node variables introduced, in binder order.
    pub fn decompose(&mut self, u: &Name) -> Result<Vec<Name>, String> {
        let mut created = Vec::new();
        let mut work = VecDeque::from([u.clone()]);
        while let Some(x) = work.pop_front() {
            match self.ty(&x)? {
                Formula::Hide(b, t, a) => {
                    let z = self.fresh(&b);
                    let n = self.fresh("n");
                    let v = self.fresh("u");
                    self.record(Step::ExL { u: x.clone(), z: z.clone(), n: n.clone(), v: v.clone() });
                    self.take(&x)?;
                    self.gamma.push((z.clone(), (*t).clone()));
                    self.delta.push((n, Formula::loc((*t).clone(), var(&z))));
                    self.delta.push((v.clone(), a.subst1(&b, &var(&z))));
                    created.push(z);
                    work.push_front(v);
                }
                Formula::Tensor(a, b) => {
                    let p = self.fresh("u");
                    let q = self.fresh("u");
                    self.record(Step::TensorL { u: x.clone(), a: p.clone(), b: q.clone() });
                    self.take(&x)?;
                    self.delta.push((p.clone(), *a));
                    self.delta.push((q.clone(), *b));
                    work.push_front(q);
                    work.push_front(p);
                }
                Formula::One => {
                    self.record(Step::OneL { u: x.clone() });
                    self.take(&x)?;
                }
                _ => {}
            }
        }
        Ok(created)
    }

    pub fn tensor_left(&mut self, u: &Name) -> Result<(Name, Name), String> {
        let Formula::Tensor(a, b) = self.ty(u)? else { return Err(format!("{u} is not a tensor")) };
        let p = self.fresh("u");
        let q = self.fresh("u");
        self.record(Step::TensorL { u: u.clone(), a: p.clone(), b: q.clone() });
        self.take(u)?;
        self.delta.push((p.clone(), *a));
        self.delta.push((q.clone(), *b));
        Ok((p, q))
    }

    /// A linear copy of the non-linear hypothesis `x`.
    pub fn copy(&mut self, x: &Name) -> Result<Name, String> {
        let t = lookup(&self.gamma, x).cloned().ok_or_else(|| format!("{x} is not in Γ"))?;
        let u = self.fresh("u");
        self.record(Step::Contr { x: x.clone(), u: u.clone() });
        self.delta.push((u.clone(), t));
        Ok(u)
    }

    /// Instantiates the universal prefix of `u` with `witnesses`.
    pub fn instantiate(&mut self, u: &Name, witnesses: &[Name]) -> Result<Name, String> {
        let mut cur = u.clone();
        for w in witnesses {
            let Formula::Forall(x, t, a) = self.ty(&cur)? else { return Err(format!("{cur} has no more universals")) };
            let v = self.fresh("u");
            self.record(Step::AllL { u: cur.clone(), v: v.clone(), w: w.clone(), ty: (*t).clone() });
            self.take(&cur)?;
            self.delta.push((v.clone(), a.subst1(&x, &var(w))));
            cur = v;
        }
        Ok(cur)
    }

    /// Applies `v : α -o β`, proving α from the locations of `hidden` and
    /// matching atoms, then opens β. Returns the node variables β creates.
    pub fn fire(&mut self, v: &Name, hidden: &[Name]) -> Result<Vec<Name>, String> {
        let Formula::Lolli(a, b) = self.ty(v)? else { return Err(format!("{v} is not an implication")) };
        let mut body = (*a).clone();
        for d in hidden {
            let Formula::Hide(x, _, inner) = body else { return Err("too many hidden nodes".into()) };
            body = inner.subst1(&x, &var(d));
        }
        let mut chosen: Vec<Name> = Vec::new();
        for d in hidden {
            let n = location_of(&self.delta, d).ok_or_else(|| format!("no location for {d}"))?;
            if chosen.contains(n) {
                return Err(format!("location of {d} used twice"));
            }
            chosen.push(n.clone());
        }
        let mut factors = Vec::new();
        let mut cur = &body;
        while let Formula::Tensor(l, r) = cur {
            factors.push((**l).clone());
            cur = r;
        }
        if *cur != Formula::One {
            factors.push(cur.clone());
        }
        for f in &factors {
            let e = self
                .delta
                .iter()
                .find(|(u, t)| u != v && !chosen.contains(u) && f.is_atomic() && alpha_eq(t, f))
                .map(|(u, _)| u.clone())
                .ok_or_else(|| format!("no edge for {f}"))?;
            chosen.push(e);
        }
        let delta1: Ctx = self.delta.iter().filter(|(u, _)| chosen.contains(u)).cloned().collect();
        let left = close(&self.gamma, &delta1, &a, hidden).ok_or_else(|| format!("cannot build {a}"))?;
        let u = self.fresh("u");
        self.record(Step::LolliL { v: v.clone(), u: u.clone(), split: chosen.clone(), left: Box::new(left) });
        self.take(v)?;
        self.delta.retain(|(x, _)| !chosen.contains(x));
        self.delta.push((u.clone(), *b));
        self.decompose(&u)
    }

    /// The graph held by the locations and atoms of Δ. Node and edge
    /// identifiers are the variables.
    pub fn graph(&self) -> Result<TypedHypergraph, String> {
        let mut g = TypedHypergraph::new("session", self.tg.clone());
        for (_, f) in &self.delta {
            if let Formula::Loc(t, Term::Var(x)) = f {
                g.add_node(NodeId::new(&**x), Label::new(t.to_string())).map_err(|e| e.to_string())?;
            }
        }
        for (u, f) in &self.delta {
            if let Formula::Pred(e, args) = f {
                let mut attach = Vec::new();
                for a in args {
                    let Term::Var(x) = &a.term else { return Err(format!("{u} : {f} is not an edge")) };
                    attach.push(NodeId::new(&**x));
                }
                g.add_edge(EdgeId::new(&**u), Label::new(&**e), attach).map_err(|e| e.to_string())?;
            }
        }
        if let Some(v) = g.validate().first() {
            return Err(v.to_string());
        }
        Ok(g)
    }

    /// Closes the derivation by proving `goal` from the current graph.
    pub fn finish(self, goal: &Formula) -> Result<ProofTree, String> {
        if let Some((u, f)) = self.delta.iter().find(|(_, f)| !matches!(f, Formula::Loc(..) | Formula::Pred(..))) {
            return Err(format!("unused hypothesis {u} : {f}"));
        }
        let h = self.graph()?;
        let (target, prefix) = decode_with_prefix(goal, &self.tg).map_err(|e| e.to_string())?;
        let iso = find_isomorphisms(&target, &h, 1).into_iter().next().ok_or("result is not isomorphic to the goal")?;
        let sigma: Vec<Name> = prefix.iter().map(|p| name(iso.node(p).unwrap().as_str())).collect();
        let closing = close(&self.gamma, &self.delta, goal, &sigma).ok_or("cannot build the goal")?;
        Ok(fold(self.steps, closing, goal))
    }

    /// Closes with the representative of whatever graph Δ holds.
    pub fn finish_any(self) -> Result<(ProofTree, TypedHypergraph), String> {
        let h = self.graph()?;
        let goal = encode_graph(&h).representation.formula;
        Ok((self.finish(&goal)?, h))
    }
}

fn fold(steps: Vec<(Ctx, Ctx, Step)>, closing: ProofTree, goal: &Formula) -> ProofTree {
    let mut t = closing;
    for (g, d, step) in steps.into_iter().rev() {
        let m = t.term().clone();
        let goal = goal.clone();
        t = match step {
            Step::ExL { u, z, n, v } => {
                let pat = Pattern::Eps(z, n, Box::new(Pattern::Var(v)));
                node(RuleTag::ExL, &g, &d, Term::let_(pat, var(&u), m), goal, vec![t])
            }
            Step::TensorL { u, a, b } => {
                let pat = Pattern::Pair(Box::new(Pattern::Var(a)), Box::new(Pattern::Var(b)));
                node(RuleTag::TensorL, &g, &d, Term::let_(pat, var(&u), m), goal, vec![t])
            }
            Step::OneL { u } => node(RuleTag::OneL, &g, &d, Term::let_(Pattern::Nil, var(&u), m), goal, vec![t]),
            Step::AllL { u, v, w, ty } => {
                let term = Term::let_(Pattern::Var(v), Term::app(var(&u), var(&w)), m);
                node(RuleTag::AllL, &g, &d, term, goal, vec![uid(&g, &w, &ty), t])
            }
            Step::Contr { x, u } => node(RuleTag::Contr, &g, &d, Term::let_(Pattern::Var(u), Term::Copy(x), m), goal, vec![t]),
            Step::LolliL { v, u, split, left } => {
                let term = Term::let_(Pattern::Var(u), Term::lapp(var(&v), left.term().clone()), m);
                node(RuleTag::LolliL, &g, &d, term, goal, vec![*left, t]).with_split(split)
            }
        };
    }
    t
}

/// Node variables of the session graph for a rule match given on an
/// isomorphic host.
fn transport(
    host: &TypedHypergraph,
    session: &TypedHypergraph,
    m: &Morphism,
    rule: &Rule,
    rr: &RuleRepresentation,
) -> Result<(Vec<Name>, Vec<Name>), String> {
    let iso = find_isomorphisms(host, session, 1).into_iter().next().ok_or("host and derivation state differ")?;
    let to_var = |n: &NodeId| -> Result<Name, String> {
        let img = m.node(n).ok_or_else(|| format!("match misses {n}"))?;
        Ok(name(iso.node(img).ok_or("partial isomorphism")?.as_str()))
    };
    let witnesses = rr.interface.iter().map(|(k, _, _)| to_var(&rule.l[k])).collect::<Result<_, _>>()?;
    let hidden = rr.lhs.hidden.iter().map(|(n, _, _)| to_var(n)).collect::<Result<_, _>>()?;
    Ok((witnesses, hidden))
}

/// How rule hypotheses are offered to a reachability sequent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    /// Rules as linear hypotheses: each applied exactly once.
    Once,
    /// Rules as non-linear hypotheses: applied any number of times.
    Unrestricted,
}

/// A derivation of `Γ′ ; δ |- γ_G -o γ_H` for one rewriting step.
pub fn emit_step_derivation(rule: &Rule, step: &StepRecord) -> Result<ProofTree, EncodeError> {
    let goal = encode_graph(&step.result).representation.formula;
    step_derivation(rule, &step.host, &step.matching, Some(&goal)).map(|(t, _)| t)
}

/// Builds the step derivation for `m` from the logic side alone; the
/// result graph is read off the derivation. With `goal`, the derivation
/// must end in that formula.
pub fn step_derivation(
    rule: &Rule,
    host: &TypedHypergraph,
    m: &Morphism,
    goal: Option<&Formula>,
) -> Result<(ProofTree, TypedHypergraph), EncodeError> {
    let err = EncodeError::NoCertificate;
    let tg = host.type_graph().clone();
    let gamma0 = constructors(&tg);
    let mut avoid: BTreeSet<Name> = gamma0.iter().map(|(x, _)| x.clone()).collect();
    let rr = represent_rule(rule, &avoid);
    let gamma_g = encode_graph(host).representation.formula;
    let d = fresh("d", &mut avoid);
    let g = fresh("g", &mut avoid);
    let mut s = Session::new(tg, gamma0.clone(), vec![(d.clone(), rr.formula.clone()), (g.clone(), gamma_g.clone())]);
    s.decompose(&g).map_err(err)?;
    let (witnesses, hidden) = transport(host, &s.graph().map_err(err)?, m, rule, &rr).map_err(err)?;
    let v = s.instantiate(&d, &witnesses).map_err(err)?;
    s.fire(&v, &hidden).map_err(err)?;
    let (inner, h) = match goal {
        Some(goal) => {
            let h = s.graph().map_err(err)?;
            (s.finish(goal).map_err(err)?, h)
        }
        None => s.finish_any().map_err(err)?,
    };
    let gamma_h = inner.conclusion.goal.clone();
    let term = Term::llam(g, inner.term().clone());
    let root = node(RuleTag::LolliR, &gamma0, &[(d, rr.formula)], term, Formula::lolli(gamma_g, gamma_h), vec![inner]);
    Ok((root, h))
}

/// A derivation of the reachability sequent for a rewriting sequence.
/// `trace[i] = (rule index, step)`; with [`Reading::Once`] every rule is
/// used exactly once.
pub fn certify_trace(
    rules: &[Rule],
    start: &TypedHypergraph,
    trace: &[(usize, StepRecord)],
    reading: Reading,
) -> Result<ProofTree, EncodeError> {
    let err = EncodeError::NoCertificate;
    let tg = start.type_graph().clone();
    let mut gamma = constructors(&tg);
    let mut avoid: BTreeSet<Name> = gamma.iter().map(|(x, _)| x.clone()).collect();
    let reps: Vec<RuleRepresentation> = rules.iter().map(|r| represent_rule(r, &avoid)).collect();
    let hyps: Vec<Name> = rules.iter().map(|r| fresh(&ident_or(&format!("p_{}", r.name), "p"), &mut avoid)).collect();
    let g = fresh("g", &mut avoid);
    let mut delta = Vec::new();
    for (h, rr) in hyps.iter().zip(&reps) {
        match reading {
            Reading::Once => delta.push((h.clone(), rr.formula.clone())),
            Reading::Unrestricted => gamma.push((h.clone(), rr.formula.clone())),
        }
    }
    delta.push((g.clone(), encode_graph(start).representation.formula));
    let mut s = Session::new(tg, gamma, delta);
    s.decompose(&g).map_err(err)?;
    for (ri, step) in trace {
        let (rule, rr) = (&rules[*ri], &reps[*ri]);
        let (witnesses, hidden) = transport(&step.host, &s.graph().map_err(err)?, &step.matching, rule, rr).map_err(err)?;
        let entry = match reading {
            Reading::Once => hyps[*ri].clone(),
            Reading::Unrestricted => s.copy(&hyps[*ri]).map_err(err)?,
        };
        let v = s.instantiate(&entry, &witnesses).map_err(err)?;
        s.fire(&v, &hidden).map_err(err)?;
    }
    let last = trace.last().map(|(_, st)| &st.result).unwrap_or(start);
    s.finish(&encode_graph(last).representation.formula).map_err(err)
}

/// Two independent steps certified from the parallel formula
/// `all x̄1 x̄2. (α1 -o β1) * (α2 -o β2)`; both matches are on `start`.
pub fn certify_parallel(
    r1: &Rule,
    m1: &Morphism,
    r2: &Rule,
    m2: &Morphism,
    start: &TypedHypergraph,
    result: &TypedHypergraph,
) -> Result<ProofTree, EncodeError> {
    let err = EncodeError::NoCertificate;
    let tg = start.type_graph().clone();
    let gamma = constructors(&tg);
    let mut avoid: BTreeSet<Name> = gamma.iter().map(|(x, _)| x.clone()).collect();
    let (par, _) = parallel_formulas(r1, r2);
    let a = represent_rule(r1, &BTreeSet::new());
    let b = represent_rule(r2, &a.interface.iter().map(|(_, x, _)| x.clone()).collect());
    let p = fresh("p", &mut avoid);
    let g = fresh("g", &mut avoid);
    let mut s = Session::new(tg, gamma, vec![(p.clone(), par), (g.clone(), encode_graph(start).representation.formula)]);
    s.decompose(&g).map_err(err)?;
    let now = s.graph().map_err(err)?;
    let (w1, h1) = transport(start, &now, m1, r1, &a).map_err(err)?;
    let (w2, h2) = transport(start, &now, m2, r2, &b).map_err(err)?;
    let both = s.instantiate(&p, &[w1, w2].concat()).map_err(err)?;
    let (f1, f2) = s.tensor_left(&both).map_err(err)?;
    s.fire(&f1, &h1).map_err(err)?;
    s.fire(&f2, &h2).map_err(err)?;
    s.finish(&encode_graph(result).representation.formula).map_err(err)
}

#[derive(Clone, Debug, Serialize)]
pub struct Correspondence {
    /// Successor classes found by rewriting.
    pub rewriting: usize,
    /// Classes certified by checked derivations.
    pub certified: usize,
    /// Matches tried on the logic side.
    pub instantiations: usize,
    pub mismatches: Vec<String>,
}

impl Correspondence {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the successor classes of `g` under `rule` with the graphs
/// whose step derivations pass the checker.
pub fn verify_correspondence(g: &TypedHypergraph, rule: &Rule) -> Correspondence {
    let dpo: Vec<TypedHypergraph> = successors(g, [rule]).into_iter().map(|s| s.step.result).collect();
    let mut certified: Vec<TypedHypergraph> = Vec::new();
    let ms: Vec<Morphism> = find_matches(rule, g).into_iter().map(|m| m.morphism).collect();
    for m in &ms {
        let Ok((tree, h)) = step_derivation(rule, g, m, None) else { continue };
        if !check(&tree).ok {
            continue;
        }
        if !certified.iter().any(|c| is_isomorphic(c, &h)) {
            certified.push(h);
        }
    }
    let mut mismatches = Vec::new();
    for (i, h) in dpo.iter().enumerate() {
        if !certified.iter().any(|c| is_isomorphic(c, h)) {
            mismatches.push(format!("successor {i} has no certified derivation"));
        }
    }
    for (i, h) in certified.iter().enumerate() {
        if !dpo.iter().any(|c| is_isomorphic(c, h)) {
            mismatches.push(format!("certified graph {i} is not a successor"));
        }
    }
    Correspondence { rewriting: dpo.len(), certified: certified.len(), instantiations: ms.len(), mismatches }
}
