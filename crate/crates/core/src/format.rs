//! Line-oriented text formats for graphs (`.hg`) and rewriting systems
//! (`.gts`).
//!
//! ```text
//! # a type graph, then any number of graphs over it
//! typegraph TG
//! nodetype a
//! edgetype E : a a
//! graph G over TG
//! node v1 : a
//! edge e1 : E ( v1 v1 )
//! ```
//!
//! A `.gts` file starts with the same type graph declarations, followed by
//! rules and a start graph:
//!
//! ```text
//! rule p interface ( k : a ) lhs { node k : a  edge e : E ( k k ) } rhs { node k : a }
//! start { node v1 : a }
//! ```
//!
//! Tokens are separated by whitespace; `:`, `(`, `)`, `{`, `}` and `,` are
//! tokens on their own, commas are optional separators. `#` starts a comment.

use std::fmt::Write as _;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::dpo::{Gts, Rule};
use crate::hypergraph::{Label, NodeId, TypeGraph, TypedHypergraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut cur = String::new();
        let mut start = 0;
        for (j, c) in line.chars().enumerate() {
            if c.is_whitespace() || ":(){},".contains(c) {
                if !cur.is_empty() {
                    out.push(Token { text: std::mem::take(&mut cur), line: i + 1, col: start + 1 });
                }
                if !c.is_whitespace() {
                    out.push(Token { text: c.to_string(), line: i + 1, col: j + 1 });
                }
            } else {
                if cur.is_empty() {
                    start = j;
                }
                cur.push(c);
            }
        }
        if !cur.is_empty() {
            out.push(Token { text: cur, line: i + 1, col: start + 1 });
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Parser {
        Parser { toks: tokenize(src), pos: 0 }
    }

    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn err(&self, message: impl Into<String>) -> FormatError {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        };
        FormatError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Result<String, FormatError> {
        let t = self.toks.get(self.pos).ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t.text.clone())
    }

    fn expect(&mut self, s: &str) -> Result<(), FormatError> {
        match self.peek() {
            Some(t) if t == s => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected `{s}`, found `{t}`"))),
            None => Err(self.err(format!("expected `{s}`, found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<String, FormatError> {
        match self.peek() {
            Some(t) if !":(){},".contains(t) => self.next(),
            Some(t) => Err(self.err(format!("expected a name, found `{t}`"))),
            None => Err(self.err("expected a name, found end of input")),
        }
    }

    fn skip_comma(&mut self) {
        if self.peek() == Some(",") {
            self.pos += 1;
        }
    }

    /// `typegraph`, `nodetype` and `edgetype` declarations.
    fn type_graph(&mut self) -> Result<Option<TypeGraph>, FormatError> {
        if self.peek() != Some("typegraph") {
            return Ok(None);
        }
        self.pos += 1;
        let mut tg = TypeGraph::new(self.ident()?);
        loop {
            match self.peek() {
                Some("nodetype") => {
                    self.pos += 1;
                    let l = self.ident()?;
                    tg.add_node_type(l.as_str()).map_err(|e| self.err(e.to_string()))?;
                }
                Some("edgetype") => {
                    self.pos += 1;
                    let l = self.ident()?;
                    self.expect(":")?;
                    let mut ar = Vec::new();
                    while let Some(t) = self.peek() {
                        if matches!(t, "nodetype" | "edgetype" | "graph" | "rule" | "start") {
                            break;
                        }
                        ar.push(Label::from(self.ident()?));
                        self.skip_comma();
                    }
                    tg.add_edge_type(l.as_str(), ar).map_err(|e| self.err(e.to_string()))?;
                }
                _ => return Ok(Some(tg)),
            }
        }
    }

    /// `node` and `edge` lines, until `stop` or a keyword outside the body.
    fn body(&mut self, g: &mut TypedHypergraph) -> Result<(), FormatError> {
        loop {
            match self.peek() {
                Some("node") => {
                    self.pos += 1;
                    let id = self.ident()?;
                    self.expect(":")?;
                    let l = self.ident()?;
                    if !g.type_graph().has_node_type(&Label::from(l.as_str())) {
                        return Err(self.err(format!("unknown node type {l}")));
                    }
                    g.add_node(id.as_str(), l.as_str()).map_err(|e| self.err(e.to_string()))?;
                }
                Some("edge") => {
                    self.pos += 1;
                    let id = self.ident()?;
                    self.expect(":")?;
                    let l = self.ident()?;
                    self.expect("(")?;
                    let mut att = Vec::new();
                    while self.peek() != Some(")") {
                        att.push(NodeId::from(self.ident()?));
                        self.skip_comma();
                    }
                    self.expect(")")?;
                    g.add_edge(id.as_str(), l.as_str(), att).map_err(|e| self.err(e.to_string()))?;
                    if let Some(v) = g.validate().into_iter().next() {
                        return Err(self.err(v.to_string()));
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn braced(&mut self, name: &str, tg: &Arc<TypeGraph>) -> Result<TypedHypergraph, FormatError> {
        self.expect("{")?;
        let mut g = TypedHypergraph::new(name, tg.clone());
        self.body(&mut g)?;
        self.expect("}")?;
        Ok(g)
    }
}

/// The contents of a `.hg` file.
#[derive(Clone, Debug)]
pub struct HgDocument {
    pub type_graph: Arc<TypeGraph>,
    pub graphs: Vec<TypedHypergraph>,
}

impl HgDocument {
    pub fn graph(&self, name: &str) -> Option<&TypedHypergraph> {
        self.graphs.iter().find(|g| g.name == name)
    }
}

pub fn parse_hg(src: &str) -> Result<HgDocument, FormatError> {
    let mut p = Parser::new(src);
    let tg = p.type_graph()?.ok_or_else(|| p.err("expected `typegraph`"))?;
    let tg = Arc::new(tg);
    let mut graphs = Vec::new();
    while p.peek().is_some() {
        p.expect("graph")?;
        let name = p.ident()?;
        p.expect("over")?;
        let over = p.ident()?;
        if over != tg.name {
            return Err(p.err(format!("unknown type graph {over}")));
        }
        let mut g = TypedHypergraph::new(name, tg.clone());
        p.body(&mut g)?;
        graphs.push(g);
    }
    Ok(HgDocument { type_graph: tg, graphs })
}

pub fn parse_gts(src: &str) -> Result<Gts, FormatError> {
    let mut p = Parser::new(src);
    let tg = p.type_graph()?.ok_or_else(|| p.err("expected `typegraph`"))?;
    let tg = Arc::new(tg);
    let mut rules = IndexMap::new();
    let mut start = None;
    while let Some(t) = p.peek() {
        match t {
            "rule" => {
                p.pos += 1;
                let name = p.ident()?;
                if rules.contains_key(&name) {
                    return Err(p.err(format!("duplicate rule {name}")));
                }
                p.expect("interface")?;
                p.expect("(")?;
                let mut interface = IndexMap::new();
                while p.peek() != Some(")") {
                    if p.peek() == Some("node") {
                        p.pos += 1;
                    }
                    let id = p.ident()?;
                    p.expect(":")?;
                    let l = p.ident()?;
                    interface.insert(NodeId::from(id), Label::from(l));
                    p.skip_comma();
                }
                p.expect(")")?;
                p.expect("lhs")?;
                let lhs = p.braced("L", &tg)?;
                p.expect("rhs")?;
                let rhs = p.braced("R", &tg)?;
                let rule = Rule::new(name.clone(), interface, lhs, rhs).map_err(|e| p.err(e.to_string()))?;
                rules.insert(name, rule);
            }
            "start" => {
                p.pos += 1;
                start = Some(p.braced("G0", &tg)?);
            }
            other => return Err(p.err(format!("expected `rule` or `start`, found `{other}`"))),
        }
    }
    let start = start.unwrap_or_else(|| TypedHypergraph::new("G0", tg.clone()));
    Ok(Gts { type_graph: tg, rules, start })
}

fn write_type_graph(out: &mut String, tg: &TypeGraph) {
    writeln!(out, "typegraph {}", tg.name).unwrap();
    for l in tg.node_types() {
        writeln!(out, "nodetype {l}").unwrap();
    }
    for (l, ar) in tg.edge_types() {
        let ar: Vec<&str> = ar.iter().map(Label::as_str).collect();
        writeln!(out, "edgetype {l} : {}", ar.join(" ")).unwrap();
    }
}

fn write_body(out: &mut String, g: &TypedHypergraph, indent: &str) {
    for (n, l) in g.nodes() {
        writeln!(out, "{indent}node {n} : {l}").unwrap();
    }
    for (e, edge) in g.edges() {
        let att: Vec<&str> = edge.attach.iter().map(NodeId::as_str).collect();
        writeln!(out, "{indent}edge {e} : {} ( {} )", edge.label, att.join(" ")).unwrap();
    }
}

/// Prints graphs sharing one type graph.
pub fn write_hg(graphs: &[&TypedHypergraph]) -> String {
    let mut out = String::new();
    if let Some(first) = graphs.first() {
        write_type_graph(&mut out, first.type_graph());
    }
    for g in graphs {
        writeln!(out, "graph {} over {}", g.name, g.type_graph().name).unwrap();
        write_body(&mut out, g, "");
    }
    out
}

pub fn write_gts(gts: &Gts) -> String {
    let mut out = String::new();
    write_type_graph(&mut out, &gts.type_graph);
    for rule in gts.rules.values() {
        let iface: Vec<String> = rule.interface.iter().map(|(k, l)| format!("{k} : {l}")).collect();
        writeln!(out, "rule {} interface ( {} )", rule.name, iface.join(", ")).unwrap();
        out.push_str("lhs {\n");
        write_body(&mut out, &rule.lhs, "  ");
        out.push_str("}\nrhs {\n");
        write_body(&mut out, &rule.rhs, "  ");
        out.push_str("}\n");
    }
    out.push_str("start {\n");
    write_body(&mut out, &gts.start, "  ");
    out.push_str("}\n");
    out
}
