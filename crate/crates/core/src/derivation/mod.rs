//! Natural-deduction derivations: the tree type, addresses, and builders.

mod check;
mod ops;

use std::fmt;

use crate::formula::Formula;
use crate::oracle::AtomicRule;
use crate::term::{Name, Term};

pub use check::{check, free_term_variables, open_assumptions, CheckError, OpenAssumption};
pub use ops::{
    all_labels, all_vars, fresh_label, freshen_labels, graft, subst_term, uses_label, GraftError,
};

/// A discharge label naming an assumption class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

/// Child indices from the root; printed `/0/1`, with `/` for the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(pub Vec<usize>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn child(&self, i: usize) -> Address {
        let mut v = self.0.clone();
        v.push(i);
        Address(v)
    }

    pub fn parent(&self) -> Option<Address> {
        let mut v = self.0.clone();
        v.pop().map(|_| Address(v))
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self` followed by `rest`.
    pub fn join(&self, rest: &Address) -> Address {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        Address(v)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

/// Which component of a conjunction or disjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }

    pub fn from_index(i: u64) -> Option<Side> {
        match i {
            1 => Some(Side::First),
            2 => Some(Side::Second),
            _ => None,
        }
    }

    pub fn pick<'a, T>(self, first: &'a T, second: &'a T) -> &'a T {
        match self {
            Side::First => first,
            Side::Second => second,
        }
    }
}

/// The rule applied at a node. Premisses are stored major first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Assumption(Label),
    Atomic(AtomicRule),
    AndI,
    AndE(Side),
    OrI(Side),
    /// Premisses: major `A ∨ B`, then `C` from `A`, then `C` from `B`.
    OrE(Label),
    ImpI(Label),
    ImpE,
    /// The premiss concludes `A[x := eigen]` for the conclusion `∀x A`.
    ForallI(Name),
    ForallE(Term),
    ExistsI(Term),
    /// Premisses: major `∃x A`, then `C` from `A[x := eigen]`.
    ExistsE(Label, Name),
    /// Concludes `motive[var := main]`. Premisses: base `motive[var := 0]`,
    /// then step `motive[var := S var]` from the assumption `motive`.
    Ind { label: Label, var: Name, motive: Formula, main: Term },
    /// Premisses: `C` from `∀var body`, then `C` from `¬body[var := eigen]`,
    /// both discharged under `label`. `body` is atomic.
    Em1 { label: Label, eigen: Name, var: Name, body: Formula },
    /// The excluded-middle axiom `(∀x A) ∨ (∃x ¬A)` as a leaf. Only used to
    /// relate the axiom and rule presentations; extraction rejects it.
    Em1Axiom,
}

impl Rule {
    pub fn is_introduction(&self) -> bool {
        matches!(self, Rule::AndI | Rule::OrI(_) | Rule::ImpI(_) | Rule::ForallI(_) | Rule::ExistsI(_))
    }

    pub fn is_elimination(&self) -> bool {
        matches!(
            self,
            Rule::AndE(_) | Rule::OrE(_) | Rule::ImpE | Rule::ForallE(_) | Rule::ExistsE(..)
        )
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Rule::Atomic(_))
    }

    pub fn is_em1(&self) -> bool {
        matches!(self, Rule::Em1 { .. })
    }

    /// Leaves: assumptions and axioms.
    pub fn is_top(&self) -> bool {
        matches!(
            self,
            Rule::Assumption(_)
                | Rule::Em1Axiom
                | Rule::Atomic(AtomicRule::EqRefl | AtomicRule::AtomI)
        )
    }

    /// The label this rule discharges and the premisses it discharges it in.
    pub fn discharge(&self) -> Option<(&Label, &'static [usize])> {
        match self {
            Rule::OrE(l) => Some((l, &[1, 2])),
            Rule::ImpI(l) => Some((l, &[0])),
            Rule::ExistsE(l, _) => Some((l, &[1])),
            Rule::Ind { label, .. } => Some((label, &[1])),
            Rule::Em1 { label, .. } => Some((label, &[0, 1])),
            _ => None,
        }
    }

    /// The eigenvariable this rule binds and the premiss it is bound in.
    pub fn binder(&self) -> Option<(&Name, usize)> {
        match self {
            Rule::ForallI(y) => Some((y, 0)),
            Rule::ExistsE(_, y) => Some((y, 1)),
            Rule::Ind { var, .. } => Some((var, 1)),
            Rule::Em1 { eigen, .. } => Some((eigen, 1)),
            _ => None,
        }
    }

    /// Short rule name as written in proof files.
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Assumption(_) => "assume",
            Rule::Atomic(r) => r.name(),
            Rule::AndI => "and-i",
            Rule::AndE(_) => "and-e",
            Rule::OrI(_) => "or-i",
            Rule::OrE(_) => "or-e",
            Rule::ImpI(_) => "imp-i",
            Rule::ImpE => "imp-e",
            Rule::ForallI(_) => "forall-i",
            Rule::ForallE(_) => "forall-e",
            Rule::ExistsI(_) => "exists-i",
            Rule::ExistsE(..) => "exists-e",
            Rule::Ind { .. } => "ind",
            Rule::Em1 { .. } => "em1",
            Rule::Em1Axiom => "em1-axiom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Formula,
    pub rule: Rule,
    pub premisses: Vec<Derivation>,
}

/// Builders. Those that infer their conclusion fall back to `⊥` when the
/// premiss has the wrong shape; [`check`] then reports the mismatch.
impl Derivation {
    pub fn new(conclusion: Formula, rule: Rule, premisses: Vec<Derivation>) -> Self {
        Derivation { conclusion, rule, premisses }
    }

    pub fn assume(label: impl Into<Label>, a: Formula) -> Self {
        Derivation::new(a, Rule::Assumption(label.into()), vec![])
    }

    pub fn atomic(rule: AtomicRule, conclusion: Formula, premisses: Vec<Derivation>) -> Self {
        Derivation::new(conclusion, Rule::Atomic(rule), premisses)
    }

    pub fn and_i(a: Derivation, b: Derivation) -> Self {
        let c = Formula::and(a.conclusion.clone(), b.conclusion.clone());
        Derivation::new(c, Rule::AndI, vec![a, b])
    }

    pub fn and_e(side: Side, d: Derivation) -> Self {
        let c = match &d.conclusion {
            Formula::And(a, b) => side.pick(a, b).as_ref().clone(),
            _ => Formula::Falsum,
        };
        Derivation::new(c, Rule::AndE(side), vec![d])
    }

    /// `other` is the disjunct not derived by `d`.
    pub fn or_i(side: Side, other: Formula, d: Derivation) -> Self {
        let c = match side {
            Side::First => Formula::or(d.conclusion.clone(), other),
            Side::Second => Formula::or(other, d.conclusion.clone()),
        };
        Derivation::new(c, Rule::OrI(side), vec![d])
    }

    pub fn or_e(label: impl Into<Label>, major: Derivation, left: Derivation, right: Derivation) -> Self {
        let c = left.conclusion.clone();
        Derivation::new(c, Rule::OrE(label.into()), vec![major, left, right])
    }

    pub fn imp_i(label: impl Into<Label>, antecedent: Formula, d: Derivation) -> Self {
        let c = Formula::implies(antecedent, d.conclusion.clone());
        Derivation::new(c, Rule::ImpI(label.into()), vec![d])
    }

    pub fn imp_e(major: Derivation, minor: Derivation) -> Self {
        let c = match &major.conclusion {
            Formula::Implies(_, b) => b.as_ref().clone(),
            _ => Formula::Falsum,
        };
        Derivation::new(c, Rule::ImpE, vec![major, minor])
    }

    /// Generalizes over the eigenvariable itself: concludes `∀y A` from `A`.
    pub fn forall_i(y: impl Into<Name>, d: Derivation) -> Self {
        let y = y.into();
        let c = Formula::forall(y.clone(), d.conclusion.clone());
        Derivation::new(c, Rule::ForallI(y), vec![d])
    }

    pub fn forall_e(t: Term, d: Derivation) -> Self {
        let c = match &d.conclusion {
            Formula::Forall(x, a) => a.subst(x, &t),
            _ => Formula::Falsum,
        };
        Derivation::new(c, Rule::ForallE(t), vec![d])
    }

    pub fn exists_i(t: Term, conclusion: Formula, d: Derivation) -> Self {
        Derivation::new(conclusion, Rule::ExistsI(t), vec![d])
    }

    pub fn exists_e(label: impl Into<Label>, y: impl Into<Name>, major: Derivation, minor: Derivation) -> Self {
        let c = minor.conclusion.clone();
        Derivation::new(c, Rule::ExistsE(label.into(), y.into()), vec![major, minor])
    }

    pub fn ind(
        label: impl Into<Label>,
        var: impl Into<Name>,
        motive: Formula,
        main: Term,
        base: Derivation,
        step: Derivation,
    ) -> Self {
        let var = var.into();
        let c = motive.subst(&var, &main);
        Derivation::new(c, Rule::Ind { label: label.into(), var, motive, main }, vec![base, step])
    }

    pub fn em1(
        label: impl Into<Label>,
        eigen: impl Into<Name>,
        var: impl Into<Name>,
        body: Formula,
        left: Derivation,
        right: Derivation,
    ) -> Self {
        let c = left.conclusion.clone();
        let rule = Rule::Em1 { label: label.into(), eigen: eigen.into(), var: var.into(), body };
        Derivation::new(c, rule, vec![left, right])
    }

    pub fn em1_axiom(var: &str, body: Formula) -> Self {
        Derivation::new(Formula::em1_instance(var, &body), Rule::Em1Axiom, vec![])
    }

    pub fn node_at(&self, addr: &Address) -> Option<&Derivation> {
        let mut cur = self;
        for &i in &addr.0 {
            cur = cur.premisses.get(i)?;
        }
        Some(cur)
    }

    /// A copy with the subtree at `addr` replaced.
    ///
    /// # Panics
    /// If `addr` does not resolve.
    pub fn replace_at(&self, addr: &Address, new: Derivation) -> Derivation {
        fn go(d: &Derivation, path: &[usize], new: Derivation) -> Derivation {
            match path.split_first() {
                None => new,
                Some((&i, rest)) => {
                    let mut out = d.clone();
                    out.premisses[i] = go(&d.premisses[i], rest, new);
                    out
                }
            }
        }
        assert!(self.node_at(addr).is_some(), "address {addr} does not resolve");
        go(self, &addr.0, new)
    }

    /// Every node with its address, in preorder.
    pub fn nodes(&self) -> Vec<(Address, &Derivation)> {
        let mut out = Vec::new();
        let mut stack = vec![(Address::root(), self)];
        while let Some((a, d)) = stack.pop() {
            for (i, p) in d.premisses.iter().enumerate().rev() {
                stack.push((a.child(i), p));
            }
            out.push((a, d));
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premisses.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Terms carried by the rule tag.
    pub fn tag_terms(&self) -> Vec<&Term> {
        match &self.rule {
            Rule::ForallE(t) | Rule::ExistsI(t) => vec![t],
            Rule::Ind { main, .. } => vec![main],
            _ => vec![],
        }
    }

    /// True when every formula occurring in the derivation is atomic.
    pub fn is_atomic_only(&self) -> bool {
        self.conclusion.is_atomic() && self.premisses.iter().all(Derivation::is_atomic_only)
    }

    pub fn count_rules(&self, pred: &impl Fn(&Rule) -> bool) -> usize {
        usize::from(pred(&self.rule))
            + self.premisses.iter().map(|p| p.count_rules(pred)).sum::<usize>()
    }
}
