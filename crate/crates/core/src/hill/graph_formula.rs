//! Graph formulas: the `one`, `*`, `ex`, `all`, `loc` fragment over node and
//! edge primitives, and the normal form `ex x1:T1 ... xk:Tk. E1(..) * ... * Em(..)`.

use super::syntax::{Formula, Name, Term};

/// A normal graph formula taken apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub prefix: Vec<(Name, Formula)>,
    /// Edge atoms with their argument variables; empty for `one`.
    pub atoms: Vec<(Name, Vec<Name>)>,
    /// Every atom argument is bound by the prefix.
    pub closed: bool,
}

/// Node types are atoms or banged atoms without arguments.
pub fn is_node_type(t: &Formula) -> bool {
    match t {
        Formula::Pred(_, args) => args.is_empty(),
        Formula::Bang(inner) => matches!(&**inner, Formula::Pred(_, args) if args.is_empty()),
        _ => false,
    }
}

pub fn is_graph_formula(f: &Formula) -> bool {
    match f {
        Formula::One => true,
        Formula::Pred(_, args) => args.iter().all(|a| a.ty.is_none() || a.ty.as_ref().is_some_and(is_node_type)),
        Formula::Tensor(a, b) => is_graph_formula(a) && is_graph_formula(b),
        Formula::Hide(_, t, body) | Formula::Forall(_, t, body) => is_node_type(t) && is_graph_formula(body),
        Formula::Loc(t, d) => is_node_type(t) && d.is_nonlinear_form(),
        Formula::Lolli(..) | Formula::Bang(_) => false,
    }
}

fn flatten<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Tensor(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        _ => out.push(f),
    }
}

/// Splits `ex x̄:T̄. α` with `α = one` or a tensor of edge atoms whose
/// arguments are variables.
pub fn normal_form(f: &Formula) -> Option<NormalForm> {
    let mut prefix = Vec::new();
    let mut cur = f;
    while let Formula::Hide(x, t, body) = cur {
        if !is_node_type(t) {
            return None;
        }
        prefix.push((x.clone(), (**t).clone()));
        cur = body;
    }
    let mut atoms = Vec::new();
    if *cur != Formula::One {
        let mut factors = Vec::new();
        flatten(cur, &mut factors);
        for fac in factors {
            let Formula::Pred(e, args) = fac else { return None };
            let mut vars = Vec::new();
            for a in args {
                match &a.term {
                    Term::Var(x) if a.ty.is_none() || a.ty.as_ref().is_some_and(is_node_type) => vars.push(x.clone()),
                    _ => return None,
                }
            }
            atoms.push((e.clone(), vars));
        }
    }
    let closed = atoms.iter().all(|(_, vs)| vs.iter().all(|v| prefix.iter().any(|(x, _)| x == v)));
    Some(NormalForm { prefix, atoms, closed })
}

impl NormalForm {
    pub fn to_formula(&self) -> Formula {
        let body = Formula::tensor_all(
            self.atoms
                .iter()
                .map(|(e, vs)| {
                    let vs: Vec<&str> = vs.iter().map(|v| &**v).collect();
                    Formula::pred(e, &vs)
                })
                .collect(),
        );
        self.prefix.iter().rev().fold(body, |acc, (x, t)| Formula::hide(x.clone(), t.clone(), acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hill::parse::parse_formula;

    #[test]
    fn one_is_normal() {
        let n = normal_form(&Formula::One).unwrap();
        assert!(n.prefix.is_empty() && n.atoms.is_empty() && n.closed);
    }

    #[test]
    fn example_graph_is_normal() {
        let f = parse_formula("ex x1:!a1, x2:!a2, x3:!a3. C(x1) * A(x1,x2) * A(x1,x3) * B(x2)").unwrap();
        assert!(is_graph_formula(&f));
        let n = normal_form(&f).unwrap();
        assert_eq!(n.prefix.len(), 3);
        let names: Vec<&str> = n.atoms.iter().map(|(e, _)| &**e).collect();
        assert_eq!(names, ["C", "A", "A", "B"]);
        assert!(n.closed);
        assert_eq!(n.to_formula(), f);
    }

    #[test]
    fn lolli_is_not_normal() {
        let f = parse_formula("A -o B").unwrap();
        assert!(normal_form(&f).is_none());
        assert!(!is_graph_formula(&f));
        let open = normal_form(&parse_formula("ex x:a. E(x, y)").unwrap()).unwrap();
        assert!(!open.closed);
    }
}
