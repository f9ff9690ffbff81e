use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::hill::{Name, Sequent, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RuleTag {
    LId,
    UId,
    ExR,
    ExL,
    AllR,
    AllL,
    LolliR,
    LolliL,
    TensorR,
    TensorL,
    OneR,
    OneL,
    BangR,
    BangL,
    Weak,
    Contr,
    Cut,
    BangCut,
}

impl RuleTag {
    pub const ALL: [RuleTag; 18] = [
        RuleTag::LId,
        RuleTag::UId,
        RuleTag::ExR,
        RuleTag::ExL,
        RuleTag::AllR,
        RuleTag::AllL,
        RuleTag::LolliR,
        RuleTag::LolliL,
        RuleTag::TensorR,
        RuleTag::TensorL,
        RuleTag::OneR,
        RuleTag::OneL,
        RuleTag::BangR,
        RuleTag::BangL,
        RuleTag::Weak,
        RuleTag::Contr,
        RuleTag::Cut,
        RuleTag::BangCut,
    ];

    pub fn arity(self) -> usize {
        match self {
            RuleTag::LId | RuleTag::UId | RuleTag::OneR => 0,
            RuleTag::ExR => 3,
            RuleTag::AllL | RuleTag::LolliL | RuleTag::TensorR | RuleTag::Cut | RuleTag::BangCut => 2,
            _ => 1,
        }
    }

    pub fn is_cut(self) -> bool {
        matches!(self, RuleTag::Cut | RuleTag::BangCut)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for RuleTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleTag::ALL.iter().copied().find(|t| t.to_string() == s).ok_or_else(|| format!("unknown rule {s}"))
    }
}

/// Rule-specific data that the conclusion's term does not determine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instantiation {
    /// Linear variables sent to the first premise of a multiplicative rule.
    pub split: Option<Vec<Name>>,
    /// The Γ1 part of the non-linear context in ∃-style introduction.
    pub gamma_split: Option<Vec<Name>>,
    pub principal: Option<Name>,
    pub witness: Option<Term>,
    pub location: Option<Name>,
    pub fresh: Option<Name>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: RuleTag,
    pub conclusion: Sequent,
    pub premises: Vec<ProofTree>,
    pub inst: Instantiation,
}

impl ProofTree {
    pub fn new(rule: RuleTag, conclusion: Sequent, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree { rule, conclusion, premises, inst: Instantiation::default() }
    }

    pub fn with_split(mut self, split: Vec<Name>) -> ProofTree {
        self.inst.split = Some(split);
        self
    }

    pub fn term(&self) -> &Term {
        self.conclusion.term.as_ref().expect("proof nodes carry terms")
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn contains_cut(&self) -> bool {
        self.rule.is_cut() || self.premises.iter().any(ProofTree::contains_cut)
    }

    /// Every node with its path from the root.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &ProofTree)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, t)) = stack.pop() {
            for (i, p) in t.premises.iter().enumerate().rev() {
                let mut q = path.clone();
                q.push(i);
                stack.push((q, p));
            }
            out.push((path, t));
        }
        out
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut ProofTree> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get_mut(*i)?.node_mut(rest),
        }
    }

    pub fn count_rule(&self, tag: RuleTag) -> usize {
        self.nodes().iter().filter(|(_, t)| t.rule == tag).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub path: Vec<usize>,
    pub rule: RuleTag,
    pub condition: String,
    pub witness: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at /{} ({}): {}: {}", path.join("/"), self.rule, self.condition, self.witness)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub nodes: usize,
    pub failures: Vec<Failure>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return writeln!(f, "ok: {} nodes checked", self.nodes);
        }
        writeln!(f, "rejected: {} failure(s) in {} nodes", self.failures.len(), self.nodes)?;
        for fl in &self.failures {
            writeln!(f, "  {fl}")?;
        }
        Ok(())
    }
}
