//! `.prf` proof files: `(Rule key=value* {sequent} premise*)`.
//!
//! Keys are `split=[u, v]`, `gamma_split=[x]`, `principal=u`,
//! `witness={term}`, `location=n` and `fresh=z`. `#` starts a comment.

use std::fmt::Write;

use crate::hill::parse::Parser;
use crate::hill::{Name, ParseError};

use super::proof::{Instantiation, ProofTree, RuleTag};

fn names(xs: &[Name]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn write_tree(t: &ProofTree, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    write!(out, "{pad}({}", t.rule).unwrap();
    let i = &t.inst;
    if let Some(s) = &i.split {
        write!(out, " split=[{}]", names(s)).unwrap();
    }
    if let Some(s) = &i.gamma_split {
        write!(out, " gamma_split=[{}]", names(s)).unwrap();
    }
    if let Some(x) = &i.principal {
        write!(out, " principal={x}").unwrap();
    }
    if let Some(w) = &i.witness {
        write!(out, " witness={{{w}}}").unwrap();
    }
    if let Some(x) = &i.location {
        write!(out, " location={x}").unwrap();
    }
    if let Some(x) = &i.fresh {
        write!(out, " fresh={x}").unwrap();
    }
    write!(out, "\n{pad}  {{{}}}", t.conclusion).unwrap();
    for p in &t.premises {
        out.push('\n');
        write_tree(p, indent + 1, out);
    }
    out.push(')');
}

pub fn write_prf(t: &ProofTree) -> String {
    let mut out = String::new();
    write_tree(t, 0, &mut out);
    out.push('\n');
    out
}

fn name_list(p: &mut Parser) -> Result<Vec<Name>, ParseError> {
    p.expect_sym("[")?;
    let mut out = Vec::new();
    if p.eat("]") {
        return Ok(out);
    }
    loop {
        out.push(p.ident()?);
        if !p.eat(",") {
            break;
        }
    }
    p.expect_sym("]")?;
    Ok(out)
}

fn tree(p: &mut Parser) -> Result<ProofTree, ParseError> {
    p.expect_sym("(")?;
    let tag = p.word()?;
    let rule: RuleTag = tag.parse().map_err(|e: String| p.err(e))?;
    let mut inst = Instantiation::default();
    while p.peek_ident_then("=") {
        let key = p.word()?;
        p.expect_sym("=")?;
        match key.as_str() {
            "split" => inst.split = Some(name_list(p)?),
            "gamma_split" => inst.gamma_split = Some(name_list(p)?),
            "principal" => inst.principal = Some(p.ident()?),
            "location" => inst.location = Some(p.ident()?),
            "fresh" => inst.fresh = Some(p.ident()?),
            "witness" => {
                p.expect_sym("{")?;
                inst.witness = Some(p.term()?);
                p.expect_sym("}")?;
            }
            _ => return Err(p.err(format!("unknown instantiation key {key}"))),
        }
    }
    p.expect_sym("{")?;
    let conclusion = p.sequent()?;
    p.expect_sym("}")?;
    let mut premises = Vec::new();
    while p.peek_is_sym("(") {
        premises.push(tree(p)?);
    }
    p.expect_sym(")")?;
    Ok(ProofTree { rule, conclusion, premises, inst })
}

pub fn parse_prf(src: &str) -> Result<ProofTree, ParseError> {
    let mut p = Parser::new(src)?;
    let t = tree(&mut p)?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hill::parse_formula;
    use crate::hill::Sequent;
    use crate::kernel::{check, prove};

    #[test]
    fn round_trip() {
        let s = Sequent::new(vec![], vec![], None, parse_formula("(ex x:T. B * E(x)) -o B * (ex y:T. E(y))").unwrap());
        let t = prove(&s, 12).unwrap();
        let text = write_prf(&t);
        let back = parse_prf(&text).unwrap();
        assert_eq!(back, t);
        assert!(check(&back).ok);
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_prf("(LId {[] ; . ; u : A |- u :: A}\n  (Bogus").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_prf("(Nope {[] ; . ; . |- nil :: one})").is_err());
    }
}
