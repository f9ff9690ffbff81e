//! Terms, patterns, formulas and sequents.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Proof terms. Variables are not sorted syntactically: whether a name is
/// linear, non-linear or a location follows from the context it is declared
/// in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Nil,
    /// `M * N`
    Pair(Box<Term>, Box<Term>),
    /// `eps(D|n). M`
    Eps(Box<Term>, Name, Box<Term>),
    /// `lam x. M`
    Lam(Name, Box<Term>),
    /// `llam u. M`
    LLam(Name, Box<Term>),
    /// `M ^ N`
    LApp(Box<Term>, Box<Term>),
    /// `N D`
    App(Box<Term>, Box<Term>),
    Bang(Box<Term>),
    /// `discard(x, y) in N`
    Discard(Vec<Name>, Box<Term>),
    Copy(Name),
    /// `let P = N in M`
    Let(Box<Pattern>, Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(Name),
    Nil,
    Pair(Box<Pattern>, Box<Pattern>),
    /// `eps(x|n). P`
    Eps(Name, Name, Box<Pattern>),
    Bang(Box<Pattern>),
    Copy(Name),
}

/// An argument of an edge predicate, optionally annotated with its type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arg {
    pub term: Term,
    pub ty: Option<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Atomic formula or edge predicate `E(D1, ..., Dn)`; no arguments for a
    /// plain atom.
    Pred(Name, Vec<Arg>),
    One,
    Tensor(Box<Formula>, Box<Formula>),
    Lolli(Box<Formula>, Box<Formula>),
    Bang(Box<Formula>),
    Forall(Name, Box<Formula>, Box<Formula>),
    /// The resource-bound quantifier, written `ex x:T. α`.
    Hide(Name, Box<Formula>, Box<Formula>),
    /// Location type `loc α @ D`.
    Loc(Box<Formula>, Term),
}

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(name(s))
    }
    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }
    pub fn eps(d: Term, n: Name, m: Term) -> Term {
        Term::Eps(Box::new(d), n, Box::new(m))
    }
    pub fn lam(x: Name, m: Term) -> Term {
        Term::Lam(x, Box::new(m))
    }
    pub fn llam(u: Name, m: Term) -> Term {
        Term::LLam(u, Box::new(m))
    }
    pub fn lapp(a: Term, b: Term) -> Term {
        Term::LApp(Box::new(a), Box::new(b))
    }
    pub fn app(a: Term, b: Term) -> Term {
        Term::App(Box::new(a), Box::new(b))
    }
    pub fn bang(a: Term) -> Term {
        Term::Bang(Box::new(a))
    }
    pub fn let_(p: Pattern, n: Term, m: Term) -> Term {
        Term::Let(Box::new(p), Box::new(n), Box::new(m))
    }

    /// Non-linear terms are `x` and `!N`.
    pub fn is_nonlinear_form(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Bang(_))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(x) => Some(x),
            _ => None,
        }
    }
}

impl Pattern {
    pub fn var(s: &str) -> Pattern {
        Pattern::Var(name(s))
    }

    /// Variables bound by the pattern, left to right.
    pub fn binders(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_binders(&mut out);
        out
    }

    fn collect_binders(&self, out: &mut Vec<Name>) {
        match self {
            Pattern::Var(x) | Pattern::Copy(x) => out.push(x.clone()),
            Pattern::Nil => {}
            Pattern::Pair(a, b) => {
                a.collect_binders(out);
                b.collect_binders(out);
            }
            Pattern::Eps(x, n, p) => {
                out.push(x.clone());
                out.push(n.clone());
                p.collect_binders(out);
            }
            Pattern::Bang(p) => p.collect_binders(out),
        }
    }

    /// No variable is bound twice.
    pub fn is_linear(&self) -> bool {
        let b = self.binders();
        let set: BTreeSet<&Name> = b.iter().collect();
        set.len() == b.len()
    }

    fn rename(&self, from: &Name, to: &Name) -> Pattern {
        let r = |x: &Name| if x == from { to.clone() } else { x.clone() };
        match self {
            Pattern::Var(x) => Pattern::Var(r(x)),
            Pattern::Copy(x) => Pattern::Copy(r(x)),
            Pattern::Nil => Pattern::Nil,
            Pattern::Pair(a, b) => Pattern::Pair(Box::new(a.rename(from, to)), Box::new(b.rename(from, to))),
            Pattern::Eps(x, n, p) => Pattern::Eps(r(x), r(n), Box::new(p.rename(from, to))),
            Pattern::Bang(p) => Pattern::Bang(Box::new(p.rename(from, to))),
        }
    }
}

impl Formula {
    pub fn atom(s: &str) -> Formula {
        Formula::Pred(name(s), Vec::new())
    }
    /// `E(x1, ..., xn)` over variables.
    pub fn pred(s: &str, vars: &[&str]) -> Formula {
        Formula::Pred(name(s), vars.iter().map(|v| Arg { term: Term::var(v), ty: None }).collect())
    }
    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }
    pub fn lolli(a: Formula, b: Formula) -> Formula {
        Formula::Lolli(Box::new(a), Box::new(b))
    }
    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Box::new(a))
    }
    pub fn forall(x: Name, t: Formula, body: Formula) -> Formula {
        Formula::Forall(x, Box::new(t), Box::new(body))
    }
    pub fn hide(x: Name, t: Formula, body: Formula) -> Formula {
        Formula::Hide(x, Box::new(t), Box::new(body))
    }
    pub fn loc(a: Formula, d: Term) -> Formula {
        Formula::Loc(Box::new(a), d)
    }

    /// Right-nested tensor of the factors, `one` when there are none.
    pub fn tensor_all(factors: Vec<Formula>) -> Formula {
        let mut it = factors.into_iter().rev();
        match it.next() {
            None => Formula::One,
            Some(last) => it.fold(last, |acc, f| Formula::tensor(f, acc)),
        }
    }

    /// Atoms and edge predicates. Location types are not atomic: no identity
    /// axiom proves them.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred(..))
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

// ---- free variables ----

impl Term {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut add = |x: &Name, bound: &Vec<Name>| {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        };
        match self {
            Term::Var(x) | Term::Copy(x) => add(x, bound),
            Term::Nil => {}
            Term::Pair(a, b) | Term::LApp(a, b) | Term::App(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Eps(d, n, m) => {
                add(n, bound);
                d.collect_free(bound, out);
                m.collect_free(bound, out);
            }
            Term::Lam(x, m) | Term::LLam(x, m) => {
                bound.push(x.clone());
                m.collect_free(bound, out);
                bound.pop();
            }
            Term::Bang(m) => m.collect_free(bound, out),
            Term::Discard(xs, m) => {
                for x in xs {
                    add(x, bound);
                }
                m.collect_free(bound, out);
            }
            Term::Let(p, n, m) => {
                n.collect_free(bound, out);
                let b = p.binders();
                let k = b.len();
                bound.extend(b);
                m.collect_free(bound, out);
                bound.truncate(bound.len() - k);
            }
        }
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        self.count_free(x) > 0
    }

    /// Free occurrences of `x`, counted on let-forms directly.
    pub fn count_free(&self, x: &Name) -> usize {
        match self {
            Term::Var(y) | Term::Copy(y) => usize::from(y == x),
            Term::Nil => 0,
            Term::Pair(a, b) | Term::LApp(a, b) | Term::App(a, b) => a.count_free(x) + b.count_free(x),
            Term::Eps(d, n, m) => usize::from(n == x) + d.count_free(x) + m.count_free(x),
            Term::Lam(y, m) | Term::LLam(y, m) => {
                if y == x {
                    0
                } else {
                    m.count_free(x)
                }
            }
            Term::Bang(m) => m.count_free(x),
            Term::Discard(ys, m) => ys.iter().filter(|y| *y == x).count() + m.count_free(x),
            Term::Let(p, n, m) => n.count_free(x) + if p.binders().contains(x) { 0 } else { m.count_free(x) },
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Pred(_, args) => {
                for a in args {
                    for x in a.term.free_vars() {
                        if !bound.contains(&x) {
                            out.insert(x);
                        }
                    }
                    if let Some(t) = &a.ty {
                        t.collect_free(bound, out);
                    }
                }
            }
            Formula::One => {}
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Bang(a) => a.collect_free(bound, out),
            Formula::Forall(x, t, body) | Formula::Hide(x, t, body) => {
                t.collect_free(bound, out);
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Loc(a, d) => {
                a.collect_free(bound, out);
                for x in d.free_vars() {
                    if !bound.contains(&x) {
                        out.insert(x);
                    }
                }
            }
        }
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        self.free_vars().contains(x)
    }
}

// ---- fresh names ----

/// `base` itself if unused, otherwise `base_k` for the smallest free `k`.
/// Any existing `_k` suffix of `base` is stripped first.
pub fn fresh_name(base: &str, avoid: &dyn Fn(&str) -> bool) -> Name {
    let stem = match base.rsplit_once('_') {
        Some((s, k)) if !s.is_empty() && !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => s,
        _ => base,
    };
    if !avoid(base) {
        return name(base);
    }
    (1..).map(|k| format!("{stem}_{k}")).find(|c| !avoid(c)).map(|c| name(&c)).unwrap()
}

// ---- substitution ----

/// A simultaneous substitution of terms for variables.
pub type Subst = Vec<(Name, Term)>;

fn lookup<'a>(s: &'a Subst, x: &Name) -> Option<&'a Term> {
    s.iter().find(|(y, _)| y == x).map(|(_, t)| t)
}

fn range_vars(s: &Subst) -> BTreeSet<Name> {
    s.iter().flat_map(|(_, t)| t.free_vars()).collect()
}

fn without(s: &Subst, xs: &[Name]) -> Subst {
    s.iter().filter(|(y, _)| !xs.contains(y)).cloned().collect()
}

/// Picks a name for binder `x` that captures nothing in the range of `s`.
fn rebind(x: &Name, s: &Subst, body_free: &BTreeSet<Name>) -> Option<Name> {
    let range = range_vars(s);
    if !range.contains(x) {
        return None;
    }
    let used = |c: &str| range.contains(c) || body_free.contains(c) || s.iter().any(|(y, _)| &**y == c);
    Some(fresh_name(x, &used))
}

impl Term {
    pub fn subst(&self, s: &Subst) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => lookup(s, x).cloned().unwrap_or_else(|| self.clone()),
            Term::Copy(x) => match lookup(s, x) {
                Some(Term::Var(y)) => Term::Copy(y.clone()),
                _ => self.clone(),
            },
            Term::Nil => Term::Nil,
            Term::Pair(a, b) => Term::pair(a.subst(s), b.subst(s)),
            Term::LApp(a, b) => Term::lapp(a.subst(s), b.subst(s)),
            Term::App(a, b) => Term::app(a.subst(s), b.subst(s)),
            Term::Eps(d, n, m) => {
                let n2 = match lookup(s, n) {
                    Some(Term::Var(y)) => y.clone(),
                    _ => n.clone(),
                };
                Term::eps(d.subst(s), n2, m.subst(s))
            }
            Term::Lam(x, m) | Term::LLam(x, m) => {
                let inner = without(s, std::slice::from_ref(x));
                let (x2, m2) = match rebind(x, &inner, &m.free_vars()) {
                    Some(y) => (y.clone(), m.subst(&vec![(x.clone(), Term::Var(y))])),
                    None => (x.clone(), (**m).clone()),
                };
                let body = m2.subst(&inner);
                if matches!(self, Term::Lam(..)) {
                    Term::lam(x2, body)
                } else {
                    Term::llam(x2, body)
                }
            }
            Term::Bang(m) => Term::bang(m.subst(s)),
            Term::Discard(xs, m) => {
                let xs2 = xs
                    .iter()
                    .map(|x| match lookup(s, x) {
                        Some(Term::Var(y)) => y.clone(),
                        _ => x.clone(),
                    })
                    .collect();
                Term::Discard(xs2, Box::new(m.subst(s)))
            }
            Term::Let(p, n, m) => {
                let n2 = n.subst(s);
                let binders = p.binders();
                let inner = without(s, &binders);
                let mut p2 = (**p).clone();
                let mut m2 = (**m).clone();
                for x in &binders {
                    let mut avoid = m2.free_vars();
                    avoid.extend(p2.binders());
                    if let Some(y) = rebind(x, &inner, &avoid) {
                        p2 = p2.rename(x, &y);
                        m2 = m2.subst(&vec![(x.clone(), Term::Var(y))]);
                    }
                }
                Term::let_(p2, n2, m2.subst(&inner))
            }
        }
    }
}

impl Formula {
    pub fn subst(&self, s: &Subst) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Pred(e, args) => Formula::Pred(
                e.clone(),
                args.iter().map(|a| Arg { term: a.term.subst(s), ty: a.ty.as_ref().map(|t| t.subst(s)) }).collect(),
            ),
            Formula::One => Formula::One,
            Formula::Tensor(a, b) => Formula::tensor(a.subst(s), b.subst(s)),
            Formula::Lolli(a, b) => Formula::lolli(a.subst(s), b.subst(s)),
            Formula::Bang(a) => Formula::bang(a.subst(s)),
            Formula::Forall(x, t, body) | Formula::Hide(x, t, body) => {
                let t2 = t.subst(s);
                let inner = without(s, std::slice::from_ref(x));
                let (x2, b2) = match rebind(x, &inner, &body.free_vars()) {
                    Some(y) => (y.clone(), body.subst(&vec![(x.clone(), Term::Var(y))])),
                    None => (x.clone(), (**body).clone()),
                };
                let b3 = b2.subst(&inner);
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(x2, t2, b3)
                } else {
                    Formula::hide(x2, t2, b3)
                }
            }
            Formula::Loc(a, d) => Formula::loc(a.subst(s), d.subst(s)),
        }
    }

    /// `self[t/x]`
    pub fn subst1(&self, x: &Name, t: &Term) -> Formula {
        self.subst(&vec![(x.clone(), t.clone())])
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("substituting for {var} would duplicate linear variable {linear}")]
    Linearity { var: Name, linear: Name },
}

/// `t[n/x]`, refusing to copy linear variables of `n` when `x` occurs more
/// than once.
pub fn subst_checked(t: &Term, x: &Name, n: &Term, linear: &BTreeSet<Name>) -> Result<Term, SubstError> {
    if t.count_free(x) > 1 {
        if let Some(l) = n.free_vars().into_iter().find(|v| linear.contains(v)) {
            return Err(SubstError::Linearity { var: x.clone(), linear: l });
        }
    }
    Ok(t.subst(&vec![(x.clone(), n.clone())]))
}

// ---- alpha equivalence ----

/// Paired binder stack; a bound variable on the left matches one on the
/// right when both resolve to the same depth.
#[derive(Default)]
struct Binders {
    left: Vec<Name>,
    right: Vec<Name>,
}

impl Binders {
    fn push(&mut self, a: &Name, b: &Name) {
        self.left.push(a.clone());
        self.right.push(b.clone());
    }
    fn pop(&mut self, k: usize) {
        self.left.truncate(self.left.len() - k);
        self.right.truncate(self.right.len() - k);
    }
    fn same(&self, a: &Name, b: &Name) -> bool {
        let i = self.left.iter().rposition(|x| x == a);
        let j = self.right.iter().rposition(|x| x == b);
        match (i, j) {
            (None, None) => a == b,
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }
}

fn pattern_shape_eq(p: &Pattern, q: &Pattern) -> bool {
    match (p, q) {
        (Pattern::Var(_), Pattern::Var(_)) | (Pattern::Nil, Pattern::Nil) | (Pattern::Copy(_), Pattern::Copy(_)) => true,
        (Pattern::Pair(a, b), Pattern::Pair(c, d)) => pattern_shape_eq(a, c) && pattern_shape_eq(b, d),
        (Pattern::Eps(_, _, a), Pattern::Eps(_, _, b)) | (Pattern::Bang(a), Pattern::Bang(b)) => pattern_shape_eq(a, b),
        _ => false,
    }
}

fn term_eq(a: &Term, b: &Term, env: &mut Binders) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) | (Term::Copy(x), Term::Copy(y)) => env.same(x, y),
        (Term::Nil, Term::Nil) => true,
        (Term::Pair(a1, a2), Term::Pair(b1, b2)) | (Term::LApp(a1, a2), Term::LApp(b1, b2)) | (Term::App(a1, a2), Term::App(b1, b2)) => {
            term_eq(a1, b1, env) && term_eq(a2, b2, env)
        }
        (Term::Eps(d1, n1, m1), Term::Eps(d2, n2, m2)) => env.same(n1, n2) && term_eq(d1, d2, env) && term_eq(m1, m2, env),
        (Term::Lam(x, m1), Term::Lam(y, m2)) | (Term::LLam(x, m1), Term::LLam(y, m2)) => {
            env.push(x, y);
            let r = term_eq(m1, m2, env);
            env.pop(1);
            r
        }
        (Term::Bang(m1), Term::Bang(m2)) => term_eq(m1, m2, env),
        (Term::Discard(xs, m1), Term::Discard(ys, m2)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| env.same(x, y)) && term_eq(m1, m2, env)
        }
        (Term::Let(p, n1, m1), Term::Let(q, n2, m2)) => {
            if !pattern_shape_eq(p, q) || !term_eq(n1, n2, env) {
                return false;
            }
            let (bp, bq) = (p.binders(), q.binders());
            for (x, y) in bp.iter().zip(&bq) {
                env.push(x, y);
            }
            let r = term_eq(m1, m2, env);
            env.pop(bp.len());
            r
        }
        _ => false,
    }
}

fn formula_eq(a: &Formula, b: &Formula, env: &mut Binders) -> bool {
    match (a, b) {
        (Formula::Pred(e, xs), Formula::Pred(f, ys)) => {
            e == f
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    term_eq(&x.term, &y.term, env)
                        && match (&x.ty, &y.ty) {
                            (None, None) => true,
                            (Some(s), Some(t)) => formula_eq(s, t, env),
                            _ => false,
                        }
                })
        }
        (Formula::One, Formula::One) => true,
        (Formula::Tensor(a1, a2), Formula::Tensor(b1, b2)) | (Formula::Lolli(a1, a2), Formula::Lolli(b1, b2)) => {
            formula_eq(a1, b1, env) && formula_eq(a2, b2, env)
        }
        (Formula::Bang(a1), Formula::Bang(b1)) => formula_eq(a1, b1, env),
        (Formula::Forall(x, s, a1), Formula::Forall(y, t, b1)) | (Formula::Hide(x, s, a1), Formula::Hide(y, t, b1)) => {
            if !formula_eq(s, t, env) {
                return false;
            }
            env.push(x, y);
            let r = formula_eq(a1, b1, env);
            env.pop(1);
            r
        }
        (Formula::Loc(a1, d1), Formula::Loc(b1, d2)) => formula_eq(a1, b1, env) && term_eq(d1, d2, env),
        _ => false,
    }
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    term_eq(a, b, &mut Binders::default())
}

pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    formula_eq(a, b, &mut Binders::default())
}

// ---- let desugaring ----

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("pattern {pattern} cannot match {bound}")]
pub struct ShapeMismatch {
    pub pattern: String,
    pub bound: String,
}

/// `let P = N in M` as the substitution `M[N/P]`. A pattern facing a term
/// without constructor shape (a variable, an application) leaves the let in
/// place; a constructor of the wrong shape is an error.
pub fn desugar_let(p: &Pattern, n: &Term, m: &Term) -> Result<Term, ShapeMismatch> {
    let stuck = || Term::let_(p.clone(), n.clone(), m.clone());
    let mismatch = || ShapeMismatch { pattern: p.to_string(), bound: n.to_string() };
    match (p, n) {
        (Pattern::Var(x), _) => Ok(m.subst(&vec![(x.clone(), n.clone())])),
        (Pattern::Nil, Term::Nil) => Ok(m.clone()),
        (Pattern::Pair(p1, p2), Term::Pair(n1, n2)) => {
            let inner = desugar_let(p2, n2, m)?;
            desugar_let(p1, n1, &inner)
        }
        (Pattern::Bang(q), Term::Bang(inner)) => desugar_let(q, inner, m),
        (Pattern::Eps(x, loc, q), Term::Eps(d, nloc, body)) => {
            let m1 = m.subst(&vec![(x.clone(), (**d).clone()), (loc.clone(), Term::Var(nloc.clone()))]);
            desugar_let(q, body, &m1)
        }
        (Pattern::Copy(x), Term::Copy(y)) => Ok(m.subst(&vec![(x.clone(), Term::Var(y.clone()))])),
        (_, Term::Var(_) | Term::App(..) | Term::LApp(..) | Term::Let(..) | Term::Copy(_)) => Ok(stuck()),
        _ => Err(mismatch()),
    }
}

// ---- sequents ----

/// `[Σ] ; Γ ; Δ |- N :: α`. A missing term stands for a hole to be filled by
/// search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub sigma: BTreeSet<Name>,
    pub gamma: Vec<(Name, Formula)>,
    pub delta: Vec<(Name, Formula)>,
    pub term: Option<Term>,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(gamma: Vec<(Name, Formula)>, delta: Vec<(Name, Formula)>, term: Option<Term>, goal: Formula) -> Self {
        let mut s = Sequent { sigma: BTreeSet::new(), gamma, delta, term, goal };
        s.sigma = s.nominal_vars();
        s
    }

    pub fn gamma_type(&self, x: &Name) -> Option<&Formula> {
        self.gamma.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn delta_type(&self, x: &Name) -> Option<&Formula> {
        self.delta.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    /// Location entries of Δ as `(location, type, naming term)`.
    pub fn locations(&self) -> impl Iterator<Item = (&Name, &Formula, &Term)> {
        self.delta.iter().filter_map(|(n, f)| match f {
            Formula::Loc(a, d) => Some((n, &**a, d)),
            _ => None,
        })
    }

    /// Free variables of the naming terms of Δ's locations.
    pub fn nominal_vars(&self) -> BTreeSet<Name> {
        self.locations().flat_map(|(_, _, d)| d.free_vars()).collect()
    }

    /// The first pair of distinct locations whose naming terms share a free
    /// variable.
    pub fn separation_violation(&self) -> Option<(Name, Name, Name)> {
        let locs: Vec<(&Name, BTreeSet<Name>)> = self.locations().map(|(n, _, d)| (n, d.free_vars())).collect();
        for (i, (n1, f1)) in locs.iter().enumerate() {
            for (n2, f2) in &locs[i + 1..] {
                if let Some(x) = f1.intersection(f2).next() {
                    return Some(((*n1).clone(), (*n2).clone(), x.clone()));
                }
            }
        }
        None
    }

    pub fn with_term(mut self, t: Term) -> Self {
        self.term = Some(t);
        self
    }
}

// ---- printing ----

const KEYWORDS: &[&str] = &["all", "ex", "loc", "one", "nil", "lam", "llam", "eps", "let", "in", "discard", "copy", "formula", "sequent"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

// Term precedence: 0 binders, 1 pair, 2 linear application, 3 application, 4 atoms.
fn term_level(t: &Term) -> u8 {
    match t {
        Term::Lam(..) | Term::LLam(..) | Term::Eps(..) | Term::Let(..) | Term::Discard(..) => 0,
        Term::Pair(..) => 1,
        Term::LApp(..) => 2,
        Term::App(..) => 3,
        _ => 4,
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if term_level(t) < min {
        write!(f, "(")?;
        write_term(f, t, 0)?;
        return write!(f, ")");
    }
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::Nil => write!(f, "nil"),
        Term::Copy(x) => write!(f, "copy({x})"),
        Term::Pair(a, b) => {
            write_term(f, a, 2)?;
            write!(f, " * ")?;
            write_term(f, b, 1)
        }
        Term::LApp(a, b) => {
            write_term(f, a, 2)?;
            write!(f, " ^ ")?;
            write_term(f, b, 3)
        }
        Term::App(a, b) => {
            write_term(f, a, 3)?;
            write!(f, " ")?;
            write_term(f, b, 4)
        }
        Term::Bang(a) => {
            write!(f, "!")?;
            write_term(f, a, 4)
        }
        Term::Eps(d, n, m) => {
            write!(f, "eps(")?;
            write_term(f, d, 0)?;
            write!(f, "|{n}). ")?;
            write_term(f, m, 0)
        }
        Term::Lam(x, m) => {
            write!(f, "lam {x}. ")?;
            write_term(f, m, 0)
        }
        Term::LLam(x, m) => {
            write!(f, "llam {x}. ")?;
            write_term(f, m, 0)
        }
        Term::Discard(xs, m) => {
            let xs: Vec<&str> = xs.iter().map(|x| &**x).collect();
            write!(f, "discard({}) in ", xs.join(", "))?;
            write_term(f, m, 0)
        }
        Term::Let(p, n, m) => {
            write!(f, "let {p} = ")?;
            write_term(f, n, 0)?;
            write!(f, " in ")?;
            write_term(f, m, 0)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

fn write_pattern(f: &mut fmt::Formatter<'_>, p: &Pattern, operand: bool) -> fmt::Result {
    match p {
        Pattern::Var(x) => write!(f, "{x}"),
        Pattern::Nil => write!(f, "nil"),
        Pattern::Copy(x) => write!(f, "copy({x})"),
        Pattern::Bang(q) => {
            write!(f, "!")?;
            write_pattern(f, q, true)
        }
        Pattern::Pair(a, b) => {
            if operand {
                write!(f, "(")?;
            }
            write_pattern(f, a, true)?;
            write!(f, " * ")?;
            write_pattern(f, b, matches!(**b, Pattern::Eps(..)))?;
            if operand {
                write!(f, ")")?;
            }
            Ok(())
        }
        Pattern::Eps(x, n, q) => {
            if operand {
                write!(f, "(")?;
            }
            write!(f, "eps({x}|{n}). ")?;
            write_pattern(f, q, false)?;
            if operand {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pattern(f, self, false)
    }
}

// Formula precedence: 0 binders, 1 lolli, 2 tensor, 3 unary and atoms.
fn formula_level(a: &Formula) -> u8 {
    match a {
        Formula::Forall(..) | Formula::Hide(..) => 0,
        Formula::Lolli(..) => 1,
        Formula::Tensor(..) => 2,
        _ => 3,
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, a: &Formula, min: u8) -> fmt::Result {
    if formula_level(a) < min {
        write!(f, "(")?;
        write_formula(f, a, 0)?;
        return write!(f, ")");
    }
    match a {
        Formula::Pred(e, args) => {
            write!(f, "{e}")?;
            if !args.is_empty() {
                write!(f, "(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_term(f, &arg.term, 0)?;
                    if let Some(t) = &arg.ty {
                        write!(f, " : ")?;
                        write_formula(f, t, 0)?;
                    }
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::One => write!(f, "one"),
        Formula::Tensor(x, y) => {
            write_formula(f, x, 3)?;
            write!(f, " * ")?;
            write_formula(f, y, 2)
        }
        Formula::Lolli(x, y) => {
            write_formula(f, x, 2)?;
            write!(f, " -o ")?;
            write_formula(f, y, 1)
        }
        Formula::Bang(x) => {
            write!(f, "!")?;
            write_formula(f, x, 3)
        }
        Formula::Forall(x, t, body) | Formula::Hide(x, t, body) => {
            let q = if matches!(a, Formula::Forall(..)) { "all" } else { "ex" };
            write!(f, "{q} {x}:")?;
            write_formula(f, t, 3)?;
            write!(f, ". ")?;
            write_formula(f, body, 0)
        }
        Formula::Loc(x, d) => {
            write!(f, "loc ")?;
            write_formula(f, x, 3)?;
            write!(f, " @ ")?;
            write_term(f, d, 4)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

fn write_context(f: &mut fmt::Formatter<'_>, ctx: &[(Name, Formula)]) -> fmt::Result {
    if ctx.is_empty() {
        return write!(f, ".");
    }
    for (i, (x, t)) in ctx.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x} : {t}")?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigma: Vec<&str> = self.sigma.iter().map(|x| &**x).collect();
        write!(f, "[{}] ; ", sigma.join(", "))?;
        write_context(f, &self.gamma)?;
        write!(f, " ; ")?;
        write_context(f, &self.delta)?;
        write!(f, " |- ")?;
        match &self.term {
            Some(t) => write!(f, "{t}")?,
            None => write!(f, "?")?,
        }
        write!(f, " :: {}", self.goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(name_: &str, vars: &[&str]) -> Formula {
        Formula::pred(name_, vars)
    }

    #[test]
    fn substitution_avoids_capture() {
        // (all x. E(x, y))[x/y] = all x_1. E(x_1, x)
        let f = Formula::forall(name("x"), Formula::atom("T"), e("E", &["x", "y"]));
        let g = f.subst1(&name("y"), &Term::var("x"));
        let expected = Formula::forall(name("x_1"), Formula::atom("T"), e("E", &["x_1", "x"]));
        assert_eq!(g, expected);
        assert_eq!(f.subst1(&name("x"), &Term::var("x")), f);
        assert_eq!(e("E", &["x"]).subst1(&name("x"), &Term::var("d")), e("E", &["d"]));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::hide(name("x"), Formula::atom("a"), e("E", &["x"]));
        let b = Formula::hide(name("y"), Formula::atom("a"), e("E", &["y"]));
        assert!(alpha_eq(&a, &b));
        let xy = Formula::hide(name("x"), Formula::atom("a"), Formula::hide(name("y"), Formula::atom("a"), e("E", &["x", "y"])));
        let yx = Formula::hide(name("x"), Formula::atom("a"), Formula::hide(name("y"), Formula::atom("a"), e("E", &["y", "x"])));
        assert!(!alpha_eq(&xy, &yx));
        // a bound name never matches a free one
        assert!(!alpha_eq(&a, &Formula::hide(name("y"), Formula::atom("a"), e("E", &["x"]))));
    }

    #[test]
    fn term_free_vars_and_counts() {
        let t = Term::let_(
            Pattern::Eps(name("z"), name("n"), Box::new(Pattern::var("v"))),
            Term::var("u"),
            Term::pair(Term::var("v"), Term::var("w")),
        );
        let fv: Vec<String> = t.free_vars().iter().map(|x| x.to_string()).collect();
        assert_eq!(fv, ["u", "w"]);
        assert_eq!(t.count_free(&name("v")), 0);
        let e = Term::eps(Term::var("x"), name("n"), Term::Nil);
        assert_eq!(e.count_free(&name("n")), 1);
        assert!(Term::Nil.free_vars().is_empty());
    }

    #[test]
    fn let_desugaring() {
        let body = Term::pair(Term::var("a"), Term::var("b"));
        let r = desugar_let(&Pattern::Nil, &Term::var("u"), &body).unwrap();
        assert!(matches!(r, Term::Let(..)));
        let r = desugar_let(&Pattern::Nil, &Term::Nil, &body).unwrap();
        assert_eq!(r, body);
        let p = Pattern::Pair(Box::new(Pattern::var("a")), Box::new(Pattern::var("b")));
        let r = desugar_let(&p, &Term::pair(Term::var("u"), Term::var("w")), &body).unwrap();
        assert_eq!(r, Term::pair(Term::var("u"), Term::var("w")));
        let r = desugar_let(&Pattern::Bang(Box::new(Pattern::var("x"))), &Term::bang(Term::var("d")), &Term::var("x"));
        assert_eq!(r.unwrap(), Term::var("d"));
        assert!(desugar_let(&p, &Term::Nil, &body).is_err());
    }

    #[test]
    fn checked_substitution_refuses_duplication() {
        let t = Term::pair(Term::var("x"), Term::var("x"));
        let linear: BTreeSet<Name> = [name("u")].into();
        assert!(subst_checked(&t, &name("x"), &Term::var("u"), &linear).is_err());
        assert!(subst_checked(&t, &name("x"), &Term::var("y"), &linear).is_ok());
    }

    #[test]
    fn sigma_and_separation() {
        let loc = |x: &str| Formula::loc(Formula::bang(Formula::atom("T")), Term::var(x));
        let s = Sequent::new(vec![], vec![(name("n1"), loc("x1")), (name("n2"), loc("x2"))], None, Formula::One);
        assert_eq!(s.sigma, [name("x1"), name("x2")].into());
        assert!(s.separation_violation().is_none());
        let s = Sequent::new(vec![], vec![(name("n1"), loc("x")), (name("n2"), loc("x"))], None, Formula::One);
        assert_eq!(s.separation_violation(), Some((name("n1"), name("n2"), name("x"))));
    }

    #[test]
    fn fresh_names_strip_suffixes() {
        let used = |c: &str| ["x", "x_1"].contains(&c);
        assert_eq!(&*fresh_name("x", &used), "x_2");
        assert_eq!(&*fresh_name("x_1", &used), "x_2");
        assert_eq!(&*fresh_name("y", &used), "y");
    }
}
