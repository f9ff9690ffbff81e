//! Cut admissibility by bounded search, plus location invariants and the
//! location-balance diagnostic.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hill::{name, Formula, Name, Pattern, Sequent, Term};

use super::check::{with, without};
use super::proof::{ProofTree, RuleTag};
use super::search::{node, prove};

/// A cut-free proof of the same conclusion, if one exists within `depth`.
/// Cut-free inputs are returned unchanged.
pub fn verify_cut_admissibility(tree: &ProofTree, depth: usize) -> Option<ProofTree> {
    if !tree.contains_cut() {
        return Some(tree.clone());
    }
    let mut goal = tree.conclusion.clone();
    goal.term = None;
    prove(&goal, depth)
}

/// `x ↦ D` for each nominal variable, checked total, single-valued and onto
/// the proper naming terms.
pub fn loc_map(s: &Sequent) -> Result<BTreeMap<Name, Term>, String> {
    let mut map = BTreeMap::new();
    let mut at: BTreeMap<Name, &Name> = BTreeMap::new();
    for (n, _, d) in s.locations() {
        for x in d.free_vars() {
            if let Some(m) = at.insert(x.clone(), n) {
                return Err(format!("{x} is located at both {m} and {n}"));
            }
            map.insert(x, d.clone());
        }
    }
    for x in &s.sigma {
        if !map.contains_key(x) {
            return Err(format!("nominal variable {x} has no naming term"));
        }
    }
    let image: Vec<&Term> = map.values().collect();
    for (n, _, d) in s.locations() {
        if !d.free_vars().is_empty() && !image.contains(&d) {
            return Err(format!("naming term {d} at {n} is not in the image"));
        }
    }
    if map.keys().any(|x| !s.sigma.contains(x)) {
        return Err("Σ does not cover the naming terms".into());
    }
    Ok(map)
}

/// Violations of the location map and linearity invariants in every
/// sequent of `tree`.
pub fn invariant_violations(tree: &ProofTree) -> Vec<String> {
    let mut out = Vec::new();
    for (path, t) in tree.nodes() {
        let s = &t.conclusion;
        if let Err(e) = loc_map(s) {
            out.push(format!("{path:?}: {e}"));
        }
        if let Some(term) = &s.term {
            for (u, _) in &s.delta {
                let k = term.count_free(u);
                if k != 1 {
                    out.push(format!("{path:?}: {u} used {k} times"));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Balance {
    pub ty: String,
    pub negative: usize,
    pub positive: usize,
    /// Whether the non-derivability precondition appears to hold; judged
    /// syntactically from Γ.
    pub precondition: bool,
}

impl Balance {
    pub fn balanced(&self) -> bool {
        self.negative == self.positive
    }
}

fn count_locations(f: &Formula, positive: bool, acc: &mut BTreeMap<String, (usize, usize)>) {
    let mut bump = |ty: &Formula, pos: bool| {
        let e = acc.entry(ty.to_string()).or_default();
        if pos {
            e.1 += 1
        } else {
            e.0 += 1
        }
    };
    match f {
        Formula::Pred(..) | Formula::One => {}
        Formula::Tensor(a, b) => {
            count_locations(a, positive, acc);
            count_locations(b, positive, acc);
        }
        Formula::Lolli(a, b) => {
            count_locations(a, !positive, acc);
            count_locations(b, positive, acc);
        }
        Formula::Bang(a) | Formula::Forall(_, _, a) => count_locations(a, positive, acc),
        Formula::Hide(_, t, a) => {
            bump(t, positive);
            count_locations(a, positive, acc);
        }
        Formula::Loc(t, _) => bump(t, positive),
    }
}

fn produces(f: &Formula, ty: &str) -> bool {
    match f {
        Formula::Bang(a) | Formula::Forall(_, _, a) => produces(a, ty),
        Formula::Lolli(_, b) => produces(b, ty),
        Formula::Loc(t, _) => t.to_string() == ty,
        _ => f.to_string() == ty,
    }
}

/// Negative versus positive β-locations in a sequent, per closed type β.
/// Counts free locations in Δ and hidden ones under the quantifier.
pub fn location_balance(s: &Sequent) -> Vec<Balance> {
    let mut acc = BTreeMap::new();
    for (_, f) in &s.delta {
        count_locations(f, false, &mut acc);
    }
    count_locations(&s.goal, true, &mut acc);
    acc.into_iter()
        .map(|(ty, (negative, positive))| {
            let precondition = !s.gamma.iter().any(|(_, f)| f.is_closed() && produces(f, &ty) && !matches!(f, Formula::Pred(..)));
            Balance { ty, negative, positive, precondition }
        })
        .collect()
}

// ---- generated cut instances ----

fn random_formula(rng: &mut ChaCha8Rng, depth: usize, bound: &[Name], counter: &mut usize) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match (bound.is_empty(), rng.gen_range(0..3)) {
            (false, 0) | (false, 1) => {
                let x = bound.choose(rng).unwrap();
                Formula::Pred(name("E"), vec![crate::hill::Arg { term: Term::Var(x.clone()), ty: None }])
            }
            (_, 2) => Formula::One,
            _ => Formula::atom(["P", "Q"].choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 | 1 => Formula::tensor(random_formula(rng, depth - 1, bound, counter), random_formula(rng, depth - 1, bound, counter)),
        _ => {
            *counter += 1;
            let x = name(&format!("w{counter}"));
            let mut b = bound.to_vec();
            b.push(x.clone());
            Formula::hide(x, Formula::atom("T"), random_formula(rng, depth - 1, &b, counter))
        }
    }
}

/// Commutes tensors and renames binders; provably equivalent to `f`.
fn twist(f: &Formula) -> Formula {
    match f {
        Formula::Tensor(a, b) => Formula::tensor(twist(b), twist(a)),
        Formula::Hide(x, t, a) => {
            let y = name(&format!("{x}r"));
            Formula::hide(y.clone(), (**t).clone(), twist(&a.subst1(x, &Term::Var(y))))
        }
        _ => f.clone(),
    }
}

/// The linear resources a proof of `f` would be built from.
fn resources(f: &Formula, gamma: &mut Vec<(Name, Formula)>, delta: &mut Vec<(Name, Formula)>) {
    match f {
        Formula::One => {}
        Formula::Tensor(a, b) => {
            resources(a, gamma, delta);
            resources(b, gamma, delta);
        }
        Formula::Hide(x, t, a) => {
            let z = name(&format!("z{}", gamma.len() + 1));
            gamma.push((z.clone(), (**t).clone()));
            delta.push((name(&format!("n{}", gamma.len())), Formula::loc((**t).clone(), Term::Var(z.clone()))));
            resources(&a.subst1(x, &Term::Var(z)), gamma, delta);
        }
        _ => delta.push((name(&format!("e{}", delta.len() + 1)), f.clone())),
    }
}

/// Small checked proofs ending in Cut (even indices) or !Cut (odd), built
/// from random graph-like formulas.
pub fn cut_corpus(seed: u64, count: usize, depth: usize) -> Vec<ProofTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut counter = 0;
    while out.len() < count {
        let a = random_formula(&mut rng, 3, &[], &mut counter);
        let mut gamma = Vec::new();
        let mut delta = Vec::new();
        resources(&a, &mut gamma, &mut delta);
        let tree = if out.len() % 2 == 0 { make_cut(&gamma, &delta, &a, depth) } else { make_bang_cut(&gamma, &delta, &a, depth) };
        if let Some(t) = tree {
            out.push(t);
        }
    }
    out
}

fn make_cut(gamma: &[(Name, Formula)], delta: &[(Name, Formula)], a: &Formula, depth: usize) -> Option<ProofTree> {
    let c = twist(a);
    let left = prove(&Sequent::new(gamma.to_vec(), delta.to_vec(), None, a.clone()), depth)?;
    let u = name("cut");
    let right = prove(&Sequent::new(gamma.to_vec(), vec![(u.clone(), a.clone())], None, c.clone()), depth)?;
    let t = Term::let_(Pattern::Var(u), left.term().clone(), right.term().clone());
    let split = delta.iter().map(|(x, _)| x.clone()).collect();
    Some(node(RuleTag::Cut, gamma, delta, t, c, vec![left, right]).with_split(split))
}

fn make_bang_cut(gamma: &[(Name, Formula)], delta: &[(Name, Formula)], a: &Formula, depth: usize) -> Option<ProofTree> {
    // the premise uses z1 (or a spare variable); the conclusion instantiates it with y
    let x = gamma.first().map(|(z, _)| z.clone()).unwrap_or_else(|| name("z0"));
    let y = name("y");
    let ty = Formula::atom("T");
    let mut g2 = without(gamma, std::slice::from_ref(&x));
    g2.push((y.clone(), ty.clone()));
    let prem_gamma = with(&g2, &[(x.clone(), ty.clone())]);
    let right = prove(&Sequent::new(prem_gamma, delta.to_vec(), None, a.clone()), depth)?;
    let left = node(RuleTag::UId, &g2, &[], Term::Var(y.clone()), ty, vec![]);
    let dy = Term::Var(y);
    let concl_delta: Vec<(Name, Formula)> = delta.iter().map(|(u, f)| (u.clone(), f.subst1(&x, &dy))).collect();
    let t = Term::let_(Pattern::Var(x.clone()), dy.clone(), right.term().clone());
    Some(node(RuleTag::BangCut, &g2, &concl_delta, t, a.subst1(&x, &dy), vec![left, right]))
}
