//! Syntax-directed checking of derivations against the rule table.
//!
//! Every node is checked for well-formedness (contexts, Σ, separation,
//! linearity) and against its rule's schema. Premise contexts are compared
//! up to permutation and formulas up to α-equivalence.

use std::collections::BTreeSet;

use crate::hill::{alpha_eq, alpha_eq_term, Formula, Name, Pattern, Sequent, Term};

use super::proof::{CheckReport, Failure, ProofTree, RuleTag};

pub type Ctx = [(Name, Formula)];

pub fn lookup<'a>(ctx: &'a Ctx, x: &Name) -> Option<&'a Formula> {
    ctx.iter().find(|(y, _)| y == x).map(|(_, f)| f)
}

pub fn without(ctx: &Ctx, xs: &[Name]) -> Vec<(Name, Formula)> {
    ctx.iter().filter(|(y, _)| !xs.contains(y)).cloned().collect()
}

pub fn only(ctx: &Ctx, xs: &[Name]) -> Vec<(Name, Formula)> {
    ctx.iter().filter(|(y, _)| xs.contains(y)).cloned().collect()
}

pub fn with(ctx: &Ctx, extra: &[(Name, Formula)]) -> Vec<(Name, Formula)> {
    let mut out = ctx.to_vec();
    out.extend_from_slice(extra);
    out
}

/// Equality of contexts up to permutation; the first difference otherwise.
pub fn ctx_diff(expected: &Ctx, actual: &Ctx) -> Option<String> {
    for (x, f) in expected {
        match lookup(actual, x) {
            None => return Some(format!("{x} : {f} is missing")),
            Some(g) if !alpha_eq(f, g) => return Some(format!("{x} has type {g}, expected {f}")),
            _ => {}
        }
    }
    for (x, f) in actual {
        if lookup(expected, x).is_none() {
            return Some(format!("unexpected {x} : {f}"));
        }
    }
    if expected.len() != actual.len() {
        return Some("repeated entries".into());
    }
    None
}

type Issues = Vec<(String, String)>;

fn issue(out: &mut Issues, cond: &str, witness: impl Into<String>) {
    out.push((cond.to_string(), witness.into()));
}

/// Well-formedness of a single sequent.
pub fn sequent_issues(s: &Sequent) -> Issues {
    let mut out = Issues::new();
    let Some(term) = &s.term else {
        issue(&mut out, "missing term", s.to_string());
        return out;
    };
    let mut seen = BTreeSet::new();
    for (x, _) in s.gamma.iter().chain(&s.delta) {
        if !seen.insert(x.clone()) {
            issue(&mut out, "context names not distinct", x.to_string());
        }
    }
    let gamma: BTreeSet<Name> = s.gamma.iter().map(|(x, _)| x.clone()).collect();
    for (x, f) in &s.gamma {
        if !f.is_closed() {
            issue(&mut out, "non-linear type not closed", format!("{x} : {f}"));
        }
    }
    for (x, f) in &s.delta {
        if let Some(y) = f.free_vars().into_iter().find(|y| !gamma.contains(y)) {
            issue(&mut out, "free variable not declared", format!("{y} in {x} : {f}"));
        }
        if let Formula::Loc(a, d) = f {
            if !a.is_closed() {
                issue(&mut out, "location type not closed", format!("{x} : {f}"));
            }
            if !d.is_nonlinear_form() {
                issue(&mut out, "naming term not non-linear", format!("{x} : {f}"));
            }
        }
    }
    if let Some(y) = s.goal.free_vars().into_iter().find(|y| !gamma.contains(y)) {
        issue(&mut out, "free variable not declared", format!("{y} in goal {}", s.goal));
    }
    if let Some((n1, n2, x)) = s.separation_violation() {
        issue(&mut out, "separation condition violated", format!("locations {n1} and {n2} share {x}"));
    }
    let inferred = s.nominal_vars();
    if inferred != s.sigma {
        let show = |v: &BTreeSet<Name>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        issue(&mut out, "Σ mismatch", format!("annotated [{}] but locations name [{}]", show(&s.sigma), show(&inferred)));
    }
    for (u, _) in &s.delta {
        let k = term.count_free(u);
        if k != 1 {
            issue(&mut out, "linearity violated", format!("{u} occurs {k} times in {term}"));
        }
    }
    let declared: BTreeSet<&Name> = s.gamma.iter().chain(&s.delta).map(|(x, _)| x).collect();
    if let Some(y) = term.free_vars().iter().find(|y| !declared.contains(y)) {
        issue(&mut out, "free variable not declared", format!("{y} in term {term}"));
    }
    out
}

struct Expect<'a> {
    gamma: Vec<(Name, Formula)>,
    delta: Vec<(Name, Formula)>,
    term: &'a Term,
    goal: Formula,
    gamma_cond: &'static str,
    delta_cond: &'static str,
}

impl<'a> Expect<'a> {
    fn new(gamma: Vec<(Name, Formula)>, delta: Vec<(Name, Formula)>, term: &'a Term, goal: Formula) -> Self {
        Expect { gamma, delta, term, goal, gamma_cond: "non-linear context mismatch", delta_cond: "premise linear context mismatch" }
    }
    fn split(mut self) -> Self {
        self.delta_cond = "linear context split mismatch";
        self
    }
    fn gamma_split(mut self) -> Self {
        self.gamma_cond = "non-linear context split mismatch";
        self
    }
    fn against(&self, i: usize, p: &ProofTree, out: &mut Issues) {
        let s = &p.conclusion;
        if let Some(d) = ctx_diff(&self.gamma, &s.gamma) {
            issue(out, self.gamma_cond, format!("premise {i}: {d}"));
        }
        if let Some(d) = ctx_diff(&self.delta, &s.delta) {
            issue(out, self.delta_cond, format!("premise {i}: {d}"));
        }
        match &s.term {
            Some(t) if alpha_eq_term(t, self.term) => {}
            Some(t) => issue(out, "premise term mismatch", format!("premise {i}: {t}, expected {}", self.term)),
            None => {}
        }
        if !alpha_eq(&self.goal, &s.goal) {
            issue(out, "premise goal mismatch", format!("premise {i}: {}, expected {}", s.goal, self.goal));
        }
    }
}

fn shape(out: &mut Issues, rule: RuleTag, term: &Term) {
    issue(out, "term does not have the rule's shape", format!("{rule} cannot conclude {term}"));
}

fn split_of(tree: &ProofTree, out: &mut Issues) -> Option<Vec<Name>> {
    match &tree.inst.split {
        Some(s) => {
            for x in s {
                if lookup(&tree.conclusion.delta, x).is_none() {
                    issue(out, "linear context split mismatch", format!("{x} is not in the linear context"));
                }
            }
            Some(s.clone())
        }
        None => {
            issue(out, "missing split instantiation", tree.rule.to_string());
            None
        }
    }
}

fn disjoint(out: &mut Issues, a: &BTreeSet<Name>, b: &BTreeSet<Name>) {
    if let Some(x) = a.intersection(b).next() {
        issue(out, "Σ not disjoint", format!("{x} is named on both sides"));
    }
}

fn linear_principal<'a>(out: &mut Issues, c: &'a Sequent, u: &Term) -> Option<(&'a Name, &'a Formula)> {
    let Term::Var(u) = u else {
        issue(out, "principal variable not in linear context", u.to_string());
        return None;
    };
    match c.delta.iter().find(|(y, _)| y == u) {
        Some((n, f)) => Some((n, f)),
        None => {
            issue(out, "principal variable not in linear context", u.to_string());
            None
        }
    }
}

fn connective(out: &mut Issues, f: &Formula, expected: &str) {
    issue(out, "principal formula has wrong connective", format!("{f} is not {expected}"));
}

/// Checks one inference against its schema, assuming its premises' own
/// sequents are checked separately.
pub fn rule_issues(t: &ProofTree) -> Issues {
    let mut out = Issues::new();
    let c = &t.conclusion;
    let Some(term) = &c.term else { return out };
    if t.premises.len() != t.rule.arity() {
        issue(&mut out, "wrong number of premises", format!("{} has {}", t.rule, t.premises.len()));
        return out;
    }
    let p = &t.premises;
    let psig = |i: usize| &p[i].conclusion.sigma;
    match t.rule {
        RuleTag::LId => {
            let ok = matches!((term, c.delta.as_slice()), (Term::Var(u), [(v, _)]) if u == v);
            if !ok {
                shape(&mut out, t.rule, term);
            } else {
                let a = &c.delta[0].1;
                if !alpha_eq(a, &c.goal) {
                    issue(&mut out, "premise goal mismatch", format!("{a} does not match {}", c.goal));
                }
                if !a.is_atomic() {
                    issue(&mut out, "α not atomic", a.to_string());
                }
            }
        }
        RuleTag::UId => {
            if !c.delta.is_empty() {
                issue(&mut out, "linear context not empty", format!("{} entries", c.delta.len()));
            }
            match term {
                Term::Var(x) => match lookup(&c.gamma, x) {
                    Some(a) => {
                        if !alpha_eq(a, &c.goal) {
                            issue(&mut out, "premise goal mismatch", format!("{a} does not match {}", c.goal));
                        }
                        if !a.is_closed() {
                            issue(&mut out, "α not closed", a.to_string());
                        }
                    }
                    None => issue(&mut out, "principal variable not in non-linear context", x.to_string()),
                },
                _ => shape(&mut out, t.rule, term),
            }
        }
        RuleTag::OneR => {
            if *term != Term::Nil || c.goal != Formula::One {
                shape(&mut out, t.rule, term);
            }
            if !c.delta.is_empty() {
                issue(&mut out, "linear context not empty", format!("{} entries", c.delta.len()));
            }
        }
        RuleTag::OneL => match term {
            Term::Let(pat, u, n) if **pat == Pattern::Nil => {
                if let Some((u, f)) = linear_principal(&mut out, c, u) {
                    if *f != Formula::One {
                        connective(&mut out, f, "one");
                    }
                    Expect::new(c.gamma.clone(), without(&c.delta, std::slice::from_ref(u)), n, c.goal.clone()).against(0, &p[0], &mut out);
                }
            }
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::TensorR => match (term, &c.goal) {
            (Term::Pair(m, n), Formula::Tensor(a, b)) => {
                if let Some(s) = split_of(t, &mut out) {
                    Expect::new(c.gamma.clone(), only(&c.delta, &s), m, (**a).clone()).split().against(0, &p[0], &mut out);
                    Expect::new(c.gamma.clone(), without(&c.delta, &s), n, (**b).clone()).split().against(1, &p[1], &mut out);
                }
                disjoint(&mut out, psig(0), psig(1));
            }
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::TensorL => match term {
            Term::Let(pat, w, n) => match &**pat {
                Pattern::Pair(pu, pv) => match (&**pu, &**pv) {
                    (Pattern::Var(u), Pattern::Var(v)) => {
                        if let Some((w, f)) = linear_principal(&mut out, c, w) {
                            match f {
                                Formula::Tensor(a, b) => {
                                    let delta = with(
                                        &without(&c.delta, std::slice::from_ref(w)),
                                        &[(u.clone(), (**a).clone()), (v.clone(), (**b).clone())],
                                    );
                                    Expect::new(c.gamma.clone(), delta, n, c.goal.clone()).against(0, &p[0], &mut out);
                                }
                                _ => connective(&mut out, f, "a tensor"),
                            }
                        }
                    }
                    _ => shape(&mut out, t.rule, term),
                },
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::LolliR => match (term, &c.goal) {
            (Term::LLam(u, m), Formula::Lolli(a, b)) => {
                let delta = with(&c.delta, &[(u.clone(), (**a).clone())]);
                Expect::new(c.gamma.clone(), delta, m, (**b).clone()).against(0, &p[0], &mut out);
            }
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::LolliL => match term {
            Term::Let(pat, bound, n) => match (&**pat, &**bound) {
                (Pattern::Var(u), Term::LApp(v, m)) => {
                    if let Some((v, f)) = linear_principal(&mut out, c, v) {
                        match f {
                            Formula::Lolli(a, b) => {
                                if let Some(s) = split_of(t, &mut out) {
                                    if s.contains(v) {
                                        issue(&mut out, "linear context split mismatch", format!("{v} is principal"));
                                    }
                                    Expect::new(c.gamma.clone(), only(&c.delta, &s), m, (**a).clone()).split().against(0, &p[0], &mut out);
                                    let mut rest = s.clone();
                                    rest.push(v.clone());
                                    let delta = with(&without(&c.delta, &rest), &[(u.clone(), (**b).clone())]);
                                    Expect::new(c.gamma.clone(), delta, n, c.goal.clone()).split().against(1, &p[1], &mut out);
                                }
                                disjoint(&mut out, psig(0), psig(1));
                            }
                            _ => connective(&mut out, f, "a linear implication"),
                        }
                    }
                }
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::AllR => match (term, &c.goal) {
            (Term::Lam(x, m), Formula::Forall(y, b, a)) => {
                if lookup(&c.gamma, x).is_some() {
                    issue(&mut out, "eigenvariable not fresh", x.to_string());
                }
                let gamma = with(&c.gamma, &[(x.clone(), (**b).clone())]);
                let goal = a.subst1(y, &Term::Var(x.clone()));
                Expect::new(gamma, c.delta.clone(), m, goal).against(0, &p[0], &mut out);
            }
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::AllL => match term {
            Term::Let(pat, bound, n) => match (&**pat, &**bound) {
                (Pattern::Var(v), Term::App(u, d)) => {
                    if !d.is_nonlinear_form() {
                        issue(&mut out, "witness not non-linear", d.to_string());
                    }
                    if let Some((u, f)) = linear_principal(&mut out, c, u) {
                        match f {
                            Formula::Forall(x, b, a) => {
                                Expect::new(c.gamma.clone(), vec![], d, (**b).clone()).split().against(0, &p[0], &mut out);
                                let delta = with(&without(&c.delta, std::slice::from_ref(u)), &[(v.clone(), a.subst1(x, d))]);
                                Expect::new(c.gamma.clone(), delta, n, c.goal.clone()).split().against(1, &p[1], &mut out);
                                disjoint(&mut out, psig(0), psig(1));
                            }
                            _ => connective(&mut out, f, "a universal"),
                        }
                    }
                }
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::ExR => match (term, &c.goal) {
            (Term::Eps(d, n, m), Formula::Hide(x, b, a)) => ex_right(t, d, n, m, x, b, a, &mut out),
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::ExL => match term {
            Term::Let(pat, u, body) => match &**pat {
                Pattern::Eps(z, n, inner) => match &**inner {
                    Pattern::Var(v) => {
                        if let Some((u, f)) = linear_principal(&mut out, c, u) {
                            match f {
                                Formula::Hide(x, b, a) => {
                                    if c.sigma.contains(z) {
                                        issue(&mut out, "Σ not disjoint", format!("{z} is already nominal"));
                                    }
                                    if lookup(&c.gamma, z).is_some() {
                                        issue(&mut out, "eigenvariable not fresh", z.to_string());
                                    }
                                    let gamma = with(&c.gamma, &[(z.clone(), (**b).clone())]);
                                    let delta = with(
                                        &without(&c.delta, std::slice::from_ref(u)),
                                        &[
                                            (n.clone(), Formula::loc((**b).clone(), Term::Var(z.clone()))),
                                            (v.clone(), a.subst1(x, &Term::Var(z.clone()))),
                                        ],
                                    );
                                    Expect::new(gamma, delta, body, c.goal.clone()).against(0, &p[0], &mut out);
                                }
                                _ => connective(&mut out, f, "a resource-bound quantifier"),
                            }
                        }
                    }
                    _ => shape(&mut out, t.rule, term),
                },
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::BangR => match (term, &c.goal) {
            (Term::Bang(m), Formula::Bang(a)) => {
                if !c.delta.is_empty() {
                    issue(&mut out, "linear context not empty", format!("{} entries", c.delta.len()));
                }
                Expect::new(c.gamma.clone(), vec![], m, (**a).clone()).against(0, &p[0], &mut out);
            }
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::BangL => match term {
            Term::Let(pat, u, n) => match &**pat {
                Pattern::Bang(inner) => match &**inner {
                    Pattern::Var(x) => {
                        if let Some((u, f)) = linear_principal(&mut out, c, u) {
                            match f {
                                Formula::Bang(a) => {
                                    let gamma = with(&c.gamma, &[(x.clone(), (**a).clone())]);
                                    let delta = without(&c.delta, std::slice::from_ref(u));
                                    Expect::new(gamma, delta, n, c.goal.clone()).against(0, &p[0], &mut out);
                                }
                                _ => connective(&mut out, f, "a bang"),
                            }
                        }
                    }
                    _ => shape(&mut out, t.rule, term),
                },
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::Weak => match term {
            Term::Discard(xs, n) => {
                for x in xs {
                    if lookup(&c.gamma, x).is_none() {
                        issue(&mut out, "principal variable not in non-linear context", x.to_string());
                    }
                }
                Expect::new(without(&c.gamma, xs), c.delta.clone(), n, c.goal.clone()).against(0, &p[0], &mut out);
            }
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::Contr => match term {
            Term::Let(pat, bound, n) => match (&**pat, &**bound) {
                (Pattern::Var(u), Term::Copy(x)) => match lookup(&c.gamma, x) {
                    Some(a) => {
                        let delta = with(&c.delta, &[(u.clone(), a.clone())]);
                        Expect::new(c.gamma.clone(), delta, n, c.goal.clone()).against(0, &p[0], &mut out);
                    }
                    None => issue(&mut out, "principal variable not in non-linear context", x.to_string()),
                },
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::Cut => match term {
            Term::Let(pat, n, m) => match &**pat {
                Pattern::Var(u) => {
                    if let Some(s) = split_of(t, &mut out) {
                        let a = p[0].conclusion.goal.clone();
                        Expect::new(c.gamma.clone(), only(&c.delta, &s), n, a.clone()).split().against(0, &p[0], &mut out);
                        let delta = with(&without(&c.delta, &s), &[(u.clone(), a)]);
                        Expect::new(c.gamma.clone(), delta, m, c.goal.clone()).split().against(1, &p[1], &mut out);
                    }
                    disjoint(&mut out, psig(0), psig(1));
                }
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
        RuleTag::BangCut => match term {
            Term::Let(pat, d, m) => match &**pat {
                Pattern::Var(x) => {
                    if !d.is_nonlinear_form() {
                        issue(&mut out, "witness not non-linear", d.to_string());
                    }
                    let a = p[0].conclusion.goal.clone();
                    Expect::new(c.gamma.clone(), vec![], d, a.clone()).against(0, &p[0], &mut out);
                    let q = &p[1].conclusion;
                    let gamma = with(&c.gamma, &[(x.clone(), a)]);
                    if let Some(diff) = ctx_diff(&gamma, &q.gamma) {
                        issue(&mut out, "non-linear context mismatch", format!("premise 1: {diff}"));
                    }
                    // Δ[D/x] and β[D/x] in the conclusion
                    let substituted: Vec<(Name, Formula)> = q.delta.iter().map(|(u, f)| (u.clone(), f.subst1(x, d))).collect();
                    if let Some(diff) = ctx_diff(&substituted, &c.delta) {
                        issue(&mut out, "linear context split mismatch", format!("conclusion: {diff}"));
                    }
                    if !alpha_eq(&q.goal.subst1(x, d), &c.goal) {
                        issue(&mut out, "premise goal mismatch", format!("premise 1: {}", q.goal));
                    }
                    match &q.term {
                        Some(qt) if alpha_eq_term(qt, m) => {}
                        Some(qt) => issue(&mut out, "premise term mismatch", format!("premise 1: {qt}, expected {m}")),
                        None => {}
                    }
                }
                _ => shape(&mut out, t.rule, term),
            },
            _ => shape(&mut out, t.rule, term),
        },
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn ex_right(t: &ProofTree, d: &Term, n: &Name, m: &Term, x: &Name, b: &Formula, a: &Formula, out: &mut Issues) {
    let c = &t.conclusion;
    let p = &t.premises;
    if !d.is_nonlinear_form() {
        issue(out, "witness not non-linear", d.to_string());
    }
    match lookup(&c.delta, n) {
        Some(Formula::Loc(lb, ld)) => {
            if !alpha_eq(lb, b) || !alpha_eq_term(ld, d) {
                issue(out, "location mismatch", format!("{n} : loc {lb} @ {ld} does not locate {d} : {b}"));
            }
        }
        Some(f) => issue(out, "location mismatch", format!("{n} : {f} is not a location")),
        None => issue(out, "location mismatch", format!("{n} is not in the linear context")),
    }
    let fv_d = d.free_vars();
    let whole = Formula::hide(x.clone(), b.clone(), a.clone());
    if let Some(y) = fv_d.intersection(&whole.free_vars()).next() {
        issue(out, "freshness condition violated", format!("{y} occurs in {d} and in {whole}"));
    }
    let Some(g1) = &t.inst.gamma_split else {
        issue(out, "missing split instantiation", "gamma_split".to_string());
        return;
    };
    for y in g1 {
        if lookup(&c.gamma, y).is_none() {
            issue(out, "non-linear context split mismatch", format!("{y} is not in the non-linear context"));
        }
    }
    let gamma1 = only(&c.gamma, g1);
    let gamma2 = without(&c.gamma, g1);
    // identity premise over Γ2 and one fresh variable of type β
    let q = &p[0].conclusion;
    let extra: Vec<&(Name, Formula)> = q.gamma.iter().filter(|(y, _)| lookup(&gamma2, y).is_none()).collect();
    match extra.as_slice() {
        [(y, _)] => {
            if lookup(&c.gamma, y).is_some() {
                issue(out, "non-linear context split mismatch", format!("{y} is not fresh"));
            }
            let ay = a.subst1(x, &Term::Var(y.clone()));
            let mut e =
                Expect::new(with(&gamma2, &[(y.clone(), b.clone())]), vec![], &Term::Nil, Formula::lolli(ay.clone(), ay)).gamma_split();
            let id_term = q.term.clone().unwrap_or(Term::Nil);
            e.term = &id_term;
            e.against(0, &p[0], out);
        }
        _ => issue(out, "non-linear context split mismatch", "identity premise must add exactly one variable to Γ2".to_string()),
    }
    Expect::new(gamma1, vec![], d, b.clone()).gamma_split().against(1, &p[1], out);
    let delta = without(&c.delta, std::slice::from_ref(n));
    Expect::new(c.gamma.clone(), delta, m, a.subst1(x, d)).against(2, &p[2], out);
    let s3 = &p[2].conclusion.sigma;
    if let Some(y) = s3.intersection(&fv_d).next() {
        issue(out, "Σ not disjoint", format!("{y} is named by {d} and in the body"));
    }
    for q in &p[..2] {
        if !q.conclusion.sigma.is_empty() {
            issue(out, "Σ not disjoint", "side premises must name nothing".to_string());
        }
    }
}

fn visit(t: &ProofTree, path: &mut Vec<usize>, failures: &mut Vec<Failure>, nodes: &mut usize) {
    *nodes += 1;
    let mut issues = sequent_issues(&t.conclusion);
    issues.extend(rule_issues(t));
    for (condition, witness) in issues {
        failures.push(Failure { path: path.clone(), rule: t.rule, condition, witness });
    }
    for (i, p) in t.premises.iter().enumerate() {
        path.push(i);
        visit(p, path, failures, nodes);
        path.pop();
    }
}

pub fn check(tree: &ProofTree) -> CheckReport {
    let mut failures = Vec::new();
    let mut nodes = 0;
    visit(tree, &mut Vec::new(), &mut failures, &mut nodes);
    CheckReport { ok: failures.is_empty(), nodes, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hill::{name, parse_sequent};

    fn seq(s: &str) -> Sequent {
        let mut q = parse_sequent(s).unwrap();
        q.sigma = q.nominal_vars();
        q
    }

    fn conditions(t: &ProofTree) -> Vec<String> {
        check(t).failures.into_iter().map(|f| f.condition).collect()
    }

    #[test]
    fn identity_on_atoms_only() {
        let ok = ProofTree::new(RuleTag::LId, seq("[] ; . ; u : A |- u :: A"), vec![]);
        assert!(check(&ok).ok);
        let bad = ProofTree::new(RuleTag::LId, seq("[] ; . ; u : A * B |- u :: A * B"), vec![]);
        assert_eq!(conditions(&bad), ["α not atomic"]);
    }

    #[test]
    fn tensor_split_is_checked() {
        let leaf = |s: &str| ProofTree::new(RuleTag::LId, seq(s), vec![]);
        let tree = ProofTree::new(
            RuleTag::TensorR,
            seq("[] ; . ; u : A, v : B |- u * v :: A * B"),
            vec![leaf("[] ; . ; u : A |- u :: A"), leaf("[] ; . ; v : B |- v :: B")],
        );
        assert!(check(&tree.clone().with_split(vec![name("u")])).ok);
        let r = check(&tree.with_split(vec![name("v")]));
        assert!(r.failures.iter().any(|f| f.condition == "linear context split mismatch"));
    }

    #[test]
    fn hiding_an_isolated_node() {
        // [x] ; x : T ; n : loc T @ x |- eps(x|n). nil :: ex y:T. one
        let p1 = ProofTree::new(
            RuleTag::LolliR,
            seq("[] ; y : T ; . |- llam u. let nil = u in nil :: one -o one"),
            vec![ProofTree::new(
                RuleTag::OneL,
                seq("[] ; y : T ; u : one |- let nil = u in nil :: one"),
                vec![ProofTree::new(RuleTag::OneR, seq("[] ; y : T ; . |- nil :: one"), vec![])],
            )],
        );
        let p2 = ProofTree::new(RuleTag::UId, seq("[] ; x : T ; . |- x :: T"), vec![]);
        let p3 = ProofTree::new(RuleTag::OneR, seq("[] ; x : T ; . |- nil :: one"), vec![]);
        let mut t = ProofTree::new(RuleTag::ExR, seq("[x] ; x : T ; n : loc T @ x |- eps(x|n). nil :: ex y:T. one"), vec![p1, p2, p3]);
        t.inst.gamma_split = Some(vec![name("x")]);
        let r = check(&t);
        assert!(r.ok, "{r}");
        t.conclusion.sigma.clear();
        assert!(conditions(&t).contains(&"Σ mismatch".to_string()));
    }

    #[test]
    fn separation_is_enforced() {
        let t = ProofTree::new(RuleTag::LId, seq("[x] ; x : T ; n : loc T @ x, m : loc T @ x, u : A |- u :: A"), vec![]);
        let c = conditions(&t);
        assert!(c.contains(&"separation condition violated".to_string()));
        assert!(c.contains(&"linearity violated".to_string()));
    }
}
