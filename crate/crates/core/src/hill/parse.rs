//! Parser for the ASCII syntax of formulas, terms and sequents.
//!
//! ```text
//! formula  ::= ("all" | "ex") binders "." formula | tensor ["-o" formula]
//! tensor   ::= unary ["*" tensor]
//! unary    ::= "!" unary | "loc" unary "@" atom | "one" | name ["(" args ")"] | "(" formula ")"
//! binders  ::= name+ ":" unary ("," name+ ":" unary)*
//! term     ::= "lam" x "." term | "llam" u "." term | "eps" ("(" term "|" n ")")+ "." term
//!            | "let" pattern "=" term "in" term | "discard" "(" names ")" "in" term
//!            | lapp ["*" term-without-binder]
//! sequent  ::= "[" names "]" ";" ctx ";" ctx "|-" (term | "?") "::" formula
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::syntax::{is_keyword, name, Arg, Formula, Name, Pattern, Sequent, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: &[&str] = &["-o", "|-", "::", ":", ".", ",", ";", "(", ")", "[", "]", "*", "!", "^", "@", "|", "=", "?", "{", "}"];

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let (line, col) = (li + 1, i + 1);
            if c.is_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line, col });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Spanned { tok: Tok::Sym(s), line, col });
                    i += s.len();
                }
                None => return Err(ParseError { line, col, message: format!("unexpected character `{c}`") }),
            }
        }
    }
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self.toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1)),
        };
        ParseError { line, col, message: message.into() }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
            None => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, s: &str) -> bool {
        if self.is_kw(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`, found {}", self.describe())))
        }
    }

    pub(crate) fn expect_kw(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_kw(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`, found {}", self.describe())))
        }
    }

    fn is_ident(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if !is_keyword(s))
    }

    pub(crate) fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let n = name(s);
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err(format!("expected a name, found {}", self.describe()))),
        }
    }

    /// Any identifier, keywords included; used for declaration names.
    pub(crate) fn word(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected a name, found {}", self.describe()))),
        }
    }

    // ---- formulas ----

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.is_kw("all") || self.is_kw("ex") {
            let forall = self.is_kw("all");
            self.pos += 1;
            let binders = self.binders()?;
            self.expect_sym(".")?;
            let body = self.formula()?;
            return Ok(binders.into_iter().rev().fold(
                body,
                |acc, (x, t)| {
                    if forall {
                        Formula::forall(x, t, acc)
                    } else {
                        Formula::hide(x, t, acc)
                    }
                },
            ));
        }
        let lhs = self.tensor()?;
        if self.eat_sym("-o") {
            let rhs = self.formula()?;
            return Ok(Formula::lolli(lhs, rhs));
        }
        Ok(lhs)
    }

    fn binders(&mut self) -> Result<Vec<(Name, Formula)>, ParseError> {
        let mut out = Vec::new();
        loop {
            let mut names = vec![self.ident()?];
            while self.is_ident() {
                names.push(self.ident()?);
            }
            self.expect_sym(":")?;
            let t = self.unary()?;
            out.extend(names.into_iter().map(|x| (x, t.clone())));
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat_sym("*") {
            let rhs = self.tensor()?;
            return Ok(Formula::tensor(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat_sym("!") {
            return Ok(Formula::bang(self.unary()?));
        }
        if self.eat_kw("loc") {
            let a = self.unary()?;
            self.expect_sym("@")?;
            let d = self.term_atom()?;
            return Ok(Formula::loc(a, d));
        }
        if self.eat_kw("one") {
            return Ok(Formula::One);
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        if self.is_ident() {
            let e = self.ident()?;
            let mut args = Vec::new();
            if self.eat_sym("(") {
                if !self.is_sym(")") {
                    loop {
                        let term = self.term()?;
                        let ty = if self.eat_sym(":") { Some(self.formula()?) } else { None };
                        args.push(Arg { term, ty });
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym(")")?;
            }
            return Ok(Formula::Pred(e, args));
        }
        Err(self.err(format!("expected a formula, found {}", self.describe())))
    }

    // ---- terms ----

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        if self.eat_kw("lam") {
            let x = self.ident()?;
            self.expect_sym(".")?;
            return Ok(Term::lam(x, self.term()?));
        }
        if self.eat_kw("llam") {
            let x = self.ident()?;
            self.expect_sym(".")?;
            return Ok(Term::llam(x, self.term()?));
        }
        if self.eat_kw("eps") {
            let mut heads = Vec::new();
            while self.eat_sym("(") {
                let d = self.term()?;
                self.expect_sym("|")?;
                let n = self.ident()?;
                self.expect_sym(")")?;
                heads.push((d, n));
            }
            if heads.is_empty() {
                return Err(self.err("expected `(` after `eps`"));
            }
            self.expect_sym(".")?;
            let body = self.term()?;
            return Ok(heads.into_iter().rev().fold(body, |acc, (d, n)| Term::eps(d, n, acc)));
        }
        if self.eat_kw("let") {
            let p = self.pattern()?;
            self.expect_sym("=")?;
            let n = self.term()?;
            self.expect_kw("in")?;
            let m = self.term()?;
            return Ok(Term::let_(p, n, m));
        }
        if self.eat_kw("discard") {
            self.expect_sym("(")?;
            let mut xs = Vec::new();
            if !self.is_sym(")") {
                loop {
                    xs.push(self.ident()?);
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.expect_sym(")")?;
            self.expect_kw("in")?;
            return Ok(Term::Discard(xs, Box::new(self.term()?)));
        }
        self.pair()
    }

    fn pair(&mut self) -> Result<Term, ParseError> {
        let lhs = self.lapp()?;
        if self.eat_sym("*") {
            let rhs = self.pair()?;
            return Ok(Term::pair(lhs, rhs));
        }
        Ok(lhs)
    }

    fn lapp(&mut self) -> Result<Term, ParseError> {
        let mut t = self.app()?;
        while self.eat_sym("^") {
            t = Term::lapp(t, self.app()?);
        }
        Ok(t)
    }

    fn starts_atom(&self) -> bool {
        self.is_ident() || self.is_kw("nil") || self.is_kw("copy") || self.is_sym("(") || self.is_sym("!")
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_atom()?;
        while self.starts_atom() {
            t = Term::app(t, self.term_atom()?);
        }
        Ok(t)
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        if self.eat_kw("nil") {
            return Ok(Term::Nil);
        }
        if self.eat_kw("copy") {
            self.expect_sym("(")?;
            let x = self.ident()?;
            self.expect_sym(")")?;
            return Ok(Term::Copy(x));
        }
        if self.eat_sym("!") {
            return Ok(Term::bang(self.term_atom()?));
        }
        if self.eat_sym("(") {
            let t = self.term()?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        if self.is_ident() {
            return Ok(Term::Var(self.ident()?));
        }
        Err(self.err(format!("expected a term, found {}", self.describe())))
    }

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        let lhs = self.pattern_unary()?;
        if self.eat_sym("*") {
            let rhs = self.pattern()?;
            return Ok(Pattern::Pair(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn pattern_unary(&mut self) -> Result<Pattern, ParseError> {
        if self.eat_kw("eps") {
            self.expect_sym("(")?;
            let x = self.ident()?;
            self.expect_sym("|")?;
            let n = self.ident()?;
            self.expect_sym(")")?;
            self.expect_sym(".")?;
            return Ok(Pattern::Eps(x, n, Box::new(self.pattern()?)));
        }
        if self.eat_sym("!") {
            return Ok(Pattern::Bang(Box::new(self.pattern_unary()?)));
        }
        if self.eat_kw("nil") {
            return Ok(Pattern::Nil);
        }
        if self.eat_kw("copy") {
            self.expect_sym("(")?;
            let x = self.ident()?;
            self.expect_sym(")")?;
            return Ok(Pattern::Copy(x));
        }
        if self.eat_sym("(") {
            let p = self.pattern()?;
            self.expect_sym(")")?;
            return Ok(p);
        }
        Ok(Pattern::Var(self.ident()?))
    }

    // ---- sequents ----

    fn context(&mut self) -> Result<Vec<(Name, Formula)>, ParseError> {
        if self.eat_sym(".") {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        loop {
            let x = self.ident()?;
            self.expect_sym(":")?;
            out.push((x, self.formula()?));
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    pub(crate) fn sequent(&mut self) -> Result<Sequent, ParseError> {
        self.expect_sym("[")?;
        let mut sigma = BTreeSet::new();
        if !self.is_sym("]") {
            loop {
                sigma.insert(self.ident()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        self.expect_sym(";")?;
        let gamma = self.context()?;
        self.expect_sym(";")?;
        let delta = self.context()?;
        self.expect_sym("|-")?;
        let term = if self.eat_sym("?") { None } else { Some(self.term()?) };
        self.expect_sym("::")?;
        let goal = self.formula()?;
        Ok(Sequent { sigma, gamma, delta, term, goal })
    }

    /// `{ sequent }` or `{ term }`, used by proof files.
    pub(crate) fn peek_is_sym(&self, s: &str) -> bool {
        self.is_sym(s)
    }

    pub(crate) fn eat(&mut self, s: &str) -> bool {
        self.eat_sym(s)
    }

    pub(crate) fn peek_ident_then(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_))) && matches!(self.peek_at(1), Some(Tok::Sym(t)) if *t == s)
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected {}", self.describe())))
        }
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser::new(src)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    whole(src, |p| p.formula())
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    whole(src, |p| p.term())
}

pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    whole(src, |p| p.sequent())
}

/// Declarations of a `.hill` file, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HillFile {
    pub formulas: Vec<(String, Formula)>,
    pub sequents: Vec<(String, Sequent)>,
}

impl HillFile {
    pub fn formula(&self, name: &str) -> Option<&Formula> {
        self.formulas.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn sequent(&self, name: &str) -> Option<&Sequent> {
        self.sequents.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, f) in &self.formulas {
            writeln!(out, "formula {n} = {f}").unwrap();
        }
        for (n, s) in &self.sequents {
            writeln!(out, "sequent {n} : {s}").unwrap();
        }
        out
    }
}

pub fn parse_hill(src: &str) -> Result<HillFile, ParseError> {
    let mut p = Parser::new(src)?;
    let mut file = HillFile::default();
    while !p.at_end() {
        if p.eat_kw("formula") {
            let n = p.word()?;
            p.expect_sym("=")?;
            file.formulas.push((n, p.formula()?));
        } else if p.eat_kw("sequent") {
            let n = p.word()?;
            p.expect_sym(":")?;
            file.sequents.push((n, p.sequent()?));
        } else {
            return Err(p.err(format!("expected `formula` or `sequent`, found {}", p.describe())));
        }
    }
    Ok(file)
}
