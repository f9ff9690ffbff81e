//! Bounded backward proof search.
//!
//! Iterative deepening on tree height. Axioms are tried first, then the
//! invertible rules are applied eagerly (without backtracking), then the
//! remaining rules in a fixed order. Weakening is never needed because the
//! axioms ignore unused Γ entries; Cut is never searched.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::hill::{alpha_eq, fresh_name, Formula, Name, Pattern, Sequent, Term};

use super::check::{only, with, without};
use super::proof::{ProofTree, RuleTag};

type Ctx = Vec<(Name, Formula)>;

/// A proof node whose conclusion is `Γ ; Δ |- term :: goal` with Σ inferred.
pub fn node(
    rule: RuleTag,
    gamma: &[(Name, Formula)],
    delta: &[(Name, Formula)],
    term: Term,
    goal: Formula,
    premises: Vec<ProofTree>,
) -> ProofTree {
    ProofTree::new(rule, Sequent::new(gamma.to_vec(), delta.to_vec(), Some(term), goal), premises)
}

pub fn used_names(gamma: &[(Name, Formula)], delta: &[(Name, Formula)], goal: &Formula) -> BTreeSet<Name> {
    let mut out: BTreeSet<Name> = gamma.iter().chain(delta).map(|(x, _)| x.clone()).collect();
    for (_, f) in gamma.iter().chain(delta) {
        out.extend(f.free_vars());
    }
    out.extend(goal.free_vars());
    out
}

pub fn fresh(base: &str, avoid: &mut BTreeSet<Name>) -> Name {
    let n = fresh_name(base, &|s| avoid.iter().any(|a| &**a == s));
    avoid.insert(n.clone());
    n
}

fn var(x: &Name) -> Term {
    Term::Var(x.clone())
}

fn pvar(x: &Name) -> Pattern {
    Pattern::Var(x.clone())
}

fn without_at(delta: &[(Name, Formula)], i: usize) -> Ctx {
    let mut d = delta.to_vec();
    d.remove(i);
    d
}

/// A cut-free proof of `Γ ; u : α |- ? :: α`, by η-expansion. Fails on
/// location types, which have no identity.
pub fn identity(gamma: &[(Name, Formula)], u: &Name, a: &Formula) -> Option<ProofTree> {
    let delta = vec![(u.clone(), a.clone())];
    let mut avoid = used_names(gamma, &delta, a);
    let g = gamma;
    Some(match a {
        Formula::Pred(..) => node(RuleTag::LId, g, &delta, var(u), a.clone(), vec![]),
        Formula::One => {
            let p = node(RuleTag::OneR, g, &[], Term::Nil, Formula::One, vec![]);
            node(RuleTag::OneL, g, &delta, Term::let_(Pattern::Nil, var(u), Term::Nil), Formula::One, vec![p])
        }
        Formula::Tensor(b, c) => {
            let v = fresh("u", &mut avoid);
            let w = fresh("u", &mut avoid);
            let pb = identity(g, &v, b)?;
            let pc = identity(g, &w, c)?;
            let inner_delta = vec![(v.clone(), (**b).clone()), (w.clone(), (**c).clone())];
            let pair = Term::pair(pb.term().clone(), pc.term().clone());
            let inner = node(RuleTag::TensorR, g, &inner_delta, pair, a.clone(), vec![pb, pc]).with_split(vec![v.clone()]);
            let pat = Pattern::Pair(Box::new(pvar(&v)), Box::new(pvar(&w)));
            node(RuleTag::TensorL, g, &delta, Term::let_(pat, var(u), inner.term().clone()), a.clone(), vec![inner])
        }
        Formula::Lolli(b, c) => {
            let w = fresh("u", &mut avoid);
            let v = fresh("u", &mut avoid);
            let pw = identity(g, &w, b)?;
            let pv = identity(g, &v, c)?;
            let t = Term::let_(pvar(&v), Term::lapp(var(u), pw.term().clone()), pv.term().clone());
            let app_delta = vec![(u.clone(), a.clone()), (w.clone(), (**b).clone())];
            let app = node(RuleTag::LolliL, g, &app_delta, t, (**c).clone(), vec![pw, pv]).with_split(vec![w.clone()]);
            node(RuleTag::LolliR, g, &delta, Term::llam(w, app.term().clone()), a.clone(), vec![app])
        }
        Formula::Forall(x, b, body) => {
            let y = fresh(x, &mut avoid);
            let v = fresh("u", &mut avoid);
            let gy = with(g, &[(y.clone(), (**b).clone())]);
            let by = body.subst1(x, &var(&y));
            let pw = node(RuleTag::UId, &gy, &[], var(&y), (**b).clone(), vec![]);
            let pv = identity(&gy, &v, &by)?;
            let t = Term::let_(pvar(&v), Term::app(var(u), var(&y)), pv.term().clone());
            let app = node(RuleTag::AllL, &gy, &delta, t, by, vec![pw, pv]);
            node(RuleTag::AllR, g, &delta, Term::lam(y, app.term().clone()), a.clone(), vec![app])
        }
        Formula::Hide(x, b, body) => {
            let z = fresh(x, &mut avoid);
            let n = fresh("n", &mut avoid);
            let v = fresh("u", &mut avoid);
            let y = fresh(x, &mut avoid);
            let gz = with(g, &[(z.clone(), (**b).clone())]);
            let bz = body.subst1(x, &var(&z));
            let p1 = identity_lolli(&with(g, &[(y.clone(), (**b).clone())]), &body.subst1(x, &var(&y)))?;
            let p2 = node(RuleTag::UId, &only(&gz, std::slice::from_ref(&z)), &[], var(&z), (**b).clone(), vec![]);
            let p3 = identity(&gz, &v, &bz)?;
            let inner_delta = vec![(n.clone(), Formula::loc((**b).clone(), var(&z))), (v.clone(), bz)];
            let eps = Term::eps(var(&z), n.clone(), p3.term().clone());
            let mut r = node(RuleTag::ExR, &gz, &inner_delta, eps, a.clone(), vec![p1, p2, p3]);
            r.inst.gamma_split = Some(vec![z.clone()]);
            let pat = Pattern::Eps(z, n, Box::new(pvar(&v)));
            node(RuleTag::ExL, g, &delta, Term::let_(pat, var(u), r.term().clone()), a.clone(), vec![r])
        }
        Formula::Bang(b) if b.is_closed() => {
            let x = fresh("x", &mut avoid);
            let gx = with(g, &[(x.clone(), (**b).clone())]);
            let pu = node(RuleTag::UId, &gx, &[], var(&x), (**b).clone(), vec![]);
            let br = node(RuleTag::BangR, &gx, &[], Term::bang(var(&x)), a.clone(), vec![pu]);
            let pat = Pattern::Bang(Box::new(pvar(&x)));
            node(RuleTag::BangL, g, &delta, Term::let_(pat, var(u), br.term().clone()), a.clone(), vec![br])
        }
        Formula::Bang(_) | Formula::Loc(..) => return None,
    })
}

/// A proof of `Γ ; . |- llam u. M :: α -o α`.
pub fn identity_lolli(gamma: &[(Name, Formula)], a: &Formula) -> Option<ProofTree> {
    let mut avoid = used_names(gamma, &[], a);
    let u = fresh("u", &mut avoid);
    let p = identity(gamma, &u, a)?;
    Some(node(RuleTag::LolliR, gamma, &[], Term::llam(u, p.term().clone()), Formula::lolli(a.clone(), a.clone()), vec![p]))
}

/// Subsets of `delta` in a fixed order, as (chosen, rest).
fn splits(delta: &[(Name, Formula)]) -> impl Iterator<Item = (Ctx, Ctx)> + '_ {
    let k = delta.len();
    assert!(k < 20, "linear context too large to split");
    (0u32..(1 << k)).map(move |mask| {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, e) in delta.iter().enumerate() {
            if mask & (1 << i) != 0 {
                a.push(e.clone());
            } else {
                b.push(e.clone());
            }
        }
        (a, b)
    })
}

const MAX_CONTR: usize = 2;

#[derive(Default)]
pub struct Prover {
    failed: HashMap<String, usize>,
    contr: BTreeMap<Name, usize>,
    /// Number of search nodes expanded so far.
    pub visited: usize,
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    fn key(&self, g: &[(Name, Formula)], dl: &[(Name, Formula)], goal: &Formula) -> String {
        let ctx = |c: &[(Name, Formula)]| c.iter().map(|(x, f)| format!("{x}:{f}")).collect::<Vec<_>>().join(",");
        let contr: Vec<String> = self.contr.iter().filter(|(_, k)| **k > 0).map(|(x, k)| format!("{x}{k}")).collect();
        format!("{};{};{};{}", ctx(g), ctx(dl), goal, contr.join(","))
    }

    /// Searches for a proof of height at most `d`.
    pub fn search(&mut self, g: &[(Name, Formula)], dl: &[(Name, Formula)], goal: &Formula, d: usize) -> Option<ProofTree> {
        if d == 0 {
            return None;
        }
        let key = self.key(g, dl, goal);
        if self.failed.get(&key).is_some_and(|&f| f >= d) {
            return None;
        }
        self.visited += 1;
        let r = self.expand(g, dl, goal, d);
        if r.is_none() {
            let e = self.failed.entry(key).or_insert(0);
            *e = (*e).max(d);
        }
        r
    }

    fn expand(&mut self, g: &[(Name, Formula)], dl: &[(Name, Formula)], goal: &Formula, d: usize) -> Option<ProofTree> {
        // axioms
        if dl.is_empty() && *goal == Formula::One {
            return Some(node(RuleTag::OneR, g, dl, Term::Nil, Formula::One, vec![]));
        }
        if let [(u, a)] = dl {
            if a.is_atomic() && alpha_eq(a, goal) {
                return Some(node(RuleTag::LId, g, dl, var(u), goal.clone(), vec![]));
            }
        }
        if dl.is_empty() && goal.is_closed() {
            if let Some((x, _)) = g.iter().find(|(_, t)| alpha_eq(t, goal)) {
                return Some(node(RuleTag::UId, g, dl, var(x), goal.clone(), vec![]));
            }
        }
        if d == 1 {
            return None;
        }
        let mut avoid = used_names(g, dl, goal);

        // invertible rules, committed to
        match goal {
            Formula::Lolli(a, b) => {
                let u = fresh("u", &mut avoid);
                let p = self.search(g, &with(dl, &[(u.clone(), (**a).clone())]), b, d - 1)?;
                let t = Term::llam(u, p.term().clone());
                return Some(node(RuleTag::LolliR, g, dl, t, goal.clone(), vec![p]));
            }
            Formula::Forall(x, b, a) => {
                let y = fresh(x, &mut avoid);
                let gy = with(g, &[(y.clone(), (**b).clone())]);
                let p = self.search(&gy, dl, &a.subst1(x, &var(&y)), d - 1)?;
                let t = Term::lam(y, p.term().clone());
                return Some(node(RuleTag::AllR, g, dl, t, goal.clone(), vec![p]));
            }
            _ => {}
        }
        for (i, (u, f)) in dl.iter().enumerate() {
            let rest = without_at(dl, i);
            match f {
                Formula::Tensor(a, b) => {
                    let v = fresh("u", &mut avoid);
                    let w = fresh("u", &mut avoid);
                    let d2 = with(&rest, &[(v.clone(), (**a).clone()), (w.clone(), (**b).clone())]);
                    let p = self.search(g, &d2, goal, d - 1)?;
                    let pat = Pattern::Pair(Box::new(pvar(&v)), Box::new(pvar(&w)));
                    let t = Term::let_(pat, var(u), p.term().clone());
                    return Some(node(RuleTag::TensorL, g, dl, t, goal.clone(), vec![p]));
                }
                Formula::One => {
                    let p = self.search(g, &rest, goal, d - 1)?;
                    let t = Term::let_(Pattern::Nil, var(u), p.term().clone());
                    return Some(node(RuleTag::OneL, g, dl, t, goal.clone(), vec![p]));
                }
                Formula::Bang(a) if a.is_closed() => {
                    let x = fresh("x", &mut avoid);
                    let p = self.search(&with(g, &[(x.clone(), (**a).clone())]), &rest, goal, d - 1)?;
                    let t = Term::let_(Pattern::Bang(Box::new(pvar(&x))), var(u), p.term().clone());
                    return Some(node(RuleTag::BangL, g, dl, t, goal.clone(), vec![p]));
                }
                Formula::Hide(x, b, a) => {
                    let z = fresh(x, &mut avoid);
                    let n = fresh("n", &mut avoid);
                    let v = fresh("u", &mut avoid);
                    let gz = with(g, &[(z.clone(), (**b).clone())]);
                    let d2 = with(&rest, &[(n.clone(), Formula::loc((**b).clone(), var(&z))), (v.clone(), a.subst1(x, &var(&z)))]);
                    let p = self.search(&gz, &d2, goal, d - 1)?;
                    let pat = Pattern::Eps(z, n, Box::new(pvar(&v)));
                    let t = Term::let_(pat, var(u), p.term().clone());
                    return Some(node(RuleTag::ExL, g, dl, t, goal.clone(), vec![p]));
                }
                _ => {}
            }
        }

        // choices
        if let Formula::Hide(x, b, a) = goal {
            if let Some(p) = self.ex_right(g, dl, goal, x, b, a, &mut avoid, d) {
                return Some(p);
            }
        }
        if let Formula::Tensor(a, b) = goal {
            for (left, right) in splits(dl) {
                let Some(p1) = self.search(g, &left, a, d - 1) else { continue };
                let Some(p2) = self.search(g, &right, b, d - 1) else { continue };
                let t = Term::pair(p1.term().clone(), p2.term().clone());
                let names = left.iter().map(|(x, _)| x.clone()).collect();
                return Some(node(RuleTag::TensorR, g, dl, t, goal.clone(), vec![p1, p2]).with_split(names));
            }
        }
        if let Formula::Bang(a) = goal {
            if dl.is_empty() {
                if let Some(p) = self.search(g, dl, a, d - 1) {
                    let t = Term::bang(p.term().clone());
                    return Some(node(RuleTag::BangR, g, dl, t, goal.clone(), vec![p]));
                }
            }
        }
        for (i, (v, f)) in dl.iter().enumerate() {
            let Formula::Lolli(a, b) = f else { continue };
            let rest = without_at(dl, i);
            let u = fresh("u", &mut avoid.clone());
            for (left, right) in splits(&rest) {
                let Some(p1) = self.search(g, &left, a, d - 1) else { continue };
                let Some(p2) = self.search(g, &with(&right, &[(u.clone(), (**b).clone())]), goal, d - 1) else { continue };
                let t = Term::let_(pvar(&u), Term::lapp(var(v), p1.term().clone()), p2.term().clone());
                let names = left.iter().map(|(x, _)| x.clone()).collect();
                return Some(node(RuleTag::LolliL, g, dl, t, goal.clone(), vec![p1, p2]).with_split(names));
            }
        }
        for (i, (u, f)) in dl.iter().enumerate() {
            let Formula::Forall(x, b, a) = f else { continue };
            let rest = without_at(dl, i);
            let v = fresh("u", &mut avoid.clone());
            for (y, t) in g {
                if !alpha_eq(t, b) {
                    continue;
                }
                let p1 = node(RuleTag::UId, g, &[], var(y), (**b).clone(), vec![]);
                let d2 = with(&rest, &[(v.clone(), a.subst1(x, &var(y)))]);
                let Some(p2) = self.search(g, &d2, goal, d - 1) else { continue };
                let t = Term::let_(pvar(&v), Term::app(var(u), var(y)), p2.term().clone());
                return Some(node(RuleTag::AllL, g, dl, t, goal.clone(), vec![p1, p2]));
            }
        }
        for (x, t) in g {
            if t.is_atomic() || self.contr.get(x).copied().unwrap_or(0) >= MAX_CONTR {
                continue;
            }
            let u = fresh("u", &mut avoid.clone());
            *self.contr.entry(x.clone()).or_insert(0) += 1;
            let p = self.search(g, &with(dl, &[(u.clone(), t.clone())]), goal, d - 1);
            *self.contr.get_mut(x).unwrap() -= 1;
            if let Some(p) = p {
                let term = Term::let_(pvar(&u), Term::Copy(x.clone()), p.term().clone());
                return Some(node(RuleTag::Contr, g, dl, term, goal.clone(), vec![p]));
            }
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn ex_right(
        &mut self,
        g: &[(Name, Formula)],
        dl: &[(Name, Formula)],
        goal: &Formula,
        x: &Name,
        b: &Formula,
        a: &Formula,
        avoid: &mut BTreeSet<Name>,
        d: usize,
    ) -> Option<ProofTree> {
        let goal_fv = goal.free_vars();
        for (i, (n, f)) in dl.iter().enumerate() {
            let Formula::Loc(lb, dt) = f else { continue };
            if !alpha_eq(lb, b) {
                continue;
            }
            let fvd = dt.free_vars();
            if !fvd.is_disjoint(&goal_fv) || fvd.iter().any(|y| g.iter().all(|(z, _)| z != y)) {
                continue;
            }
            let g1_names: Vec<Name> = fvd.iter().cloned().collect();
            let g1 = only(g, &g1_names);
            let g2 = without(g, &g1_names);
            let y = fresh(x, &mut avoid.clone());
            let ay = a.subst1(x, &var(&y));
            let g2y = with(&g2, &[(y, b.clone())]);
            let p1 = match identity_lolli(&g2y, &ay) {
                Some(p) if p.height() < d => Some(p),
                _ => self.search(&g2y, &[], &Formula::lolli(ay.clone(), ay), d - 1),
            };
            let Some(p1) = p1 else { continue };
            let p2 = match dt {
                Term::Var(z) => Some(node(RuleTag::UId, &g1, &[], var(z), b.clone(), vec![])),
                _ => self.search(&g1, &[], b, d - 1),
            };
            let Some(p2) = p2 else { continue };
            let Some(p3) = self.search(g, &without_at(dl, i), &a.subst1(x, dt), d - 1) else { continue };
            let t = Term::eps(dt.clone(), n.clone(), p3.term().clone());
            let mut r = node(RuleTag::ExR, g, dl, t, goal.clone(), vec![p1, p2, p3]);
            r.inst.gamma_split = Some(g1_names);
            return Some(r);
        }
        None
    }
}

/// Iterative deepening up to height `depth`; deterministic in its inputs.
/// The goal's term, if any, is ignored.
pub fn prove(goal: &Sequent, depth: usize) -> Option<ProofTree> {
    prove_counting(goal, depth).0
}

/// As [`prove`], also returning the number of search nodes expanded.
pub fn prove_counting(goal: &Sequent, depth: usize) -> (Option<ProofTree>, usize) {
    let mut p = Prover::new();
    for d in 1..=depth {
        if let Some(t) = p.search(&goal.gamma, &goal.delta, &goal.goal, d) {
            return (Some(t), p.visited);
        }
    }
    (None, p.visited)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hill::{parse_formula, parse_sequent};
    use crate::kernel::check;

    fn closed(f: &str) -> Sequent {
        Sequent::new(vec![], vec![], None, parse_formula(f).unwrap())
    }

    #[test]
    fn unit() {
        let t = prove(&closed("one"), 1).unwrap();
        assert_eq!(t.rule, RuleTag::OneR);
    }

    #[test]
    fn identities_check() {
        for f in ["A", "A * B -o B * A", "ex x:T. E(x)", "ex x y:T. E(x, y) * B", "all x:T. E(x)", "!A"] {
            let a = parse_formula(f).unwrap();
            let t = identity_lolli(&[], &a).unwrap();
            let r = check(&t);
            assert!(r.ok, "{f}: {r}");
        }
    }

    #[test]
    fn scope_extrusion() {
        let s = closed("(ex x:T. B * E(x)) -o B * (ex x:T. E(x))");
        let t = prove(&s, 12).expect("provable");
        assert!(check(&t).ok, "{}", check(&t));
    }

    #[test]
    fn eta_fails() {
        assert!(prove(&closed("(ex x:T. B) -o B"), 12).is_none());
        assert!(prove(&closed("B -o (ex x:T. B)"), 12).is_none());
    }

    #[test]
    fn location_is_not_an_identity() {
        let s = parse_sequent("[] ; x : T ; . |- ? :: (loc T @ x) -o (loc T @ x)").unwrap();
        assert!(prove(&s, 8).is_none());
    }
}
