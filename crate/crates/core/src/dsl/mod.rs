//! The `.haem` proof-file format.
//!
//! A file is a sequence of top-level forms:
//!
//! ```text
//! (defrec add 2 (base (p 1)) (step (succ rec)))   # add(0,x)=x, add(S v,x)=S(add(v,x))
//! (defpred iszero 1 sg)                            # iszero(t) iff sg(t) = 0
//! (formula goal (exists z (= z 3)))
//! (proof three (exists-i 3 goal (refl 3)))
//! ```
//!
//! Every derivation node names its rule explicitly; `(: F NODE)` overrides
//! the conclusion the node would otherwise infer.

mod parse;
mod print;
mod sexp;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::derivation::{Address, Derivation, Rule, Side};
use crate::formula::{Formula, Pred};
use crate::oracle::AtomicRule;
use crate::registry::RegistryError;
use crate::term::{Name, Term};
use crate::theory::{Theory, TheoryError};

pub use parse::{parse, parse_derivation, parse_formula, parse_term, parse_with};
pub use print::{print_derivation, serialize};
pub use sexp::Span;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unbound name `{name}`")]
    UnboundName { line: usize, col: usize, name: String },
    #[error("{line}:{col}: arity error: {msg}")]
    Arity { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {source}")]
    Definition { line: usize, col: usize, source: DefinitionError },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DefinitionError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("`{0}` is defined twice")]
    DuplicateName(Name),
}

impl ParseError {
    pub(crate) fn syntax(at: Span, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line: at.line, col: at.col, msg: msg.into() }
    }

    pub(crate) fn unbound(at: Span, name: impl Into<String>) -> Self {
        ParseError::UnboundName { line: at.line, col: at.col, name: name.into() }
    }

    pub(crate) fn arity(at: Span, msg: impl Into<String>) -> Self {
        ParseError::Arity { line: at.line, col: at.col, msg: msg.into() }
    }

    pub fn position(&self) -> Span {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::UnboundName { line, col, .. }
            | ParseError::Arity { line, col, .. }
            | ParseError::Definition { line, col, .. } => Span { line: *line, col: *col },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Defrec(Name),
    Defpred(Name),
    Formula(Name),
    Proof(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofEntry {
    pub name: Name,
    pub derivation: Derivation,
    /// Source position of every node.
    pub spans: BTreeMap<Address, Span>,
}

impl ProofEntry {
    /// The position of the node at `addr`, or of its nearest ancestor.
    pub fn span_of(&self, addr: &Address) -> Option<Span> {
        let mut a = addr.clone();
        loop {
            if let Some(s) = self.spans.get(&a) {
                return Some(*s);
            }
            a = a.parent()?;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofFile {
    pub theory: Theory,
    pub formulas: BTreeMap<Name, Formula>,
    pub proofs: Vec<ProofEntry>,
    /// Declaration order, for serialization.
    pub items: Vec<Item>,
}

impl ProofFile {
    pub fn proof(&self, name: &str) -> Option<&ProofEntry> {
        self.proofs.iter().find(|p| p.name == name)
    }
}

/// What a node's explicit formula argument is, read off its conclusion.
/// `None` when the rule has none or the conclusion has the wrong shape.
pub(crate) fn explicit_arg(d: &Derivation) -> Option<Formula> {
    let c = &d.conclusion;
    match &d.rule {
        Rule::Assumption(_) | Rule::ExistsI(_) => Some(c.clone()),
        Rule::Atomic(AtomicRule::AtomI | AtomicRule::EfqAtomic) => Some(c.clone()),
        Rule::Atomic(AtomicRule::EqRefl) => match c {
            Formula::Atom(Pred::Eq, args) => Some(Formula::eq(args[0].clone(), args[0].clone())),
            _ => None,
        },
        Rule::OrI(side) => match c {
            Formula::Or(a, b) => Some(side.pick(b, a).as_ref().clone()),
            _ => None,
        },
        Rule::ImpI(_) => match c {
            Formula::Implies(a, _) => Some(a.as_ref().clone()),
            _ => None,
        },
        Rule::Em1Axiom => match c {
            Formula::Or(a, _) => match a.as_ref() {
                Formula::Forall(..) => Some(a.as_ref().clone()),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn eqn(a: &Formula) -> Option<(&Term, &Term)> {
    match a {
        Formula::Atom(Pred::Eq, args) if args.len() == 2 => Some((&args[0], &args[1])),
        _ => None,
    }
}

/// The conclusion a node denotes when written without annotation. `explicit`
/// is the formula argument of rules that take one (`refl` carries `t = t`,
/// `em1-axiom` carries `∀x A`). Shape errors fall back to `⊥`.
pub(crate) fn infer(rule: &Rule, explicit: Option<&Formula>, premisses: &[&Formula]) -> Formula {
    let bot = Formula::Falsum;
    let p = |i: usize| premisses.get(i).copied();
    let given = || explicit.cloned().unwrap_or(Formula::Falsum);
    match rule {
        Rule::Assumption(_) | Rule::ExistsI(_) => given(),
        Rule::Atomic(r) => match r {
            AtomicRule::AtomI | AtomicRule::EfqAtomic | AtomicRule::EqRefl => given(),
            AtomicRule::AtomE | AtomicRule::SuccNotZero => bot,
            AtomicRule::EqSym => match p(0).and_then(eqn) {
                Some((s, t)) => Formula::eq(t.clone(), s.clone()),
                None => bot,
            },
            AtomicRule::EqTrans => match (p(0).and_then(eqn), p(1).and_then(eqn)) {
                (Some((r, _)), Some((_, t))) => Formula::eq(r.clone(), t.clone()),
                _ => bot,
            },
            AtomicRule::EqCompat(f) => {
                let sides: Option<Vec<(&Term, &Term)>> = premisses.iter().map(|a| eqn(a)).collect();
                match sides {
                    Some(sides) if f == "succ" && sides.len() == 1 => {
                        Formula::eq(Term::succ(sides[0].0.clone()), Term::succ(sides[0].1.clone()))
                    }
                    Some(sides) => Formula::eq(
                        Term::app(f.clone(), sides.iter().map(|s| s.0.clone()).collect()),
                        Term::app(f.clone(), sides.iter().map(|s| s.1.clone()).collect()),
                    ),
                    None => bot,
                }
            }
            AtomicRule::SuccInjective => match p(0).and_then(eqn) {
                Some((Term::Succ(s), Term::Succ(t))) => Formula::eq((**s).clone(), (**t).clone()),
                _ => bot,
            },
        },
        Rule::AndI => match (p(0), p(1)) {
            (Some(a), Some(b)) => Formula::and(a.clone(), b.clone()),
            _ => bot,
        },
        Rule::AndE(side) => match p(0) {
            Some(Formula::And(a, b)) => side.pick(a, b).as_ref().clone(),
            _ => bot,
        },
        Rule::OrI(side) => match p(0) {
            Some(a) => match side {
                Side::First => Formula::or(a.clone(), given()),
                Side::Second => Formula::or(given(), a.clone()),
            },
            None => bot,
        },
        Rule::OrE(_) => p(1).cloned().unwrap_or(bot),
        Rule::Em1 { .. } => p(0).cloned().unwrap_or(bot),
        Rule::ImpI(_) => match p(0) {
            Some(b) => Formula::implies(given(), b.clone()),
            None => bot,
        },
        Rule::ImpE => match p(0) {
            Some(Formula::Implies(_, b)) => b.as_ref().clone(),
            _ => bot,
        },
        Rule::ForallI(y) => match p(0) {
            Some(a) => Formula::forall(y.clone(), a.clone()),
            None => bot,
        },
        Rule::ForallE(t) => match p(0) {
            Some(Formula::Forall(x, a)) => a.subst(x, t),
            _ => bot,
        },
        Rule::ExistsE(..) => p(1).cloned().unwrap_or(bot),
        Rule::Ind { var, motive, main, .. } => motive.subst(var, main),
        Rule::Em1Axiom => match explicit {
            Some(Formula::Forall(x, a)) => Formula::em1_instance(x, a),
            _ => bot,
        },
    }
}
