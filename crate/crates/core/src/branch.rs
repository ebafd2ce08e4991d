//! Principal branches, head-cuts and the open normal form.

use std::fmt;

use crate::derivation::{uses_label, Address, Derivation, Rule};
use crate::theory::Theory;

/// Occurrence addresses from a top occurrence down to the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub occs: Vec<Address>,
}

impl Branch {
    /// Index of the last occurrence, the derivation's conclusion.
    pub fn len(&self) -> usize {
        self.occs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.occs.len() <= 1
    }

    pub fn top(&self) -> &Address {
        &self.occs[0]
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.occs.iter().map(Address::to_string).collect();
        write!(f, "{}", parts.join(" > "))
    }
}

/// Premisses a principal branch may enter through: only the major one for
/// eliminations and EM₁, any for the other rules.
fn principal_premisses(rule: &Rule, n: usize) -> std::ops::Range<usize> {
    if rule.is_elimination() || rule.is_em1() {
        0..n.min(1)
    } else {
        0..n
    }
}

/// All principal branches, leftmost first.
pub fn principal_branches(d: &Derivation) -> Vec<Branch> {
    fn go(d: &Derivation, addr: Address, out: &mut Vec<Vec<Address>>) {
        let range = principal_premisses(&d.rule, d.premisses.len());
        if range.is_empty() {
            out.push(vec![addr]);
            return;
        }
        for i in range {
            let start = out.len();
            go(&d.premisses[i], addr.child(i), out);
            for path in &mut out[start..] {
                path.push(addr.clone());
            }
        }
    }
    let mut out = Vec::new();
    go(d, Address::root(), &mut out);
    out.into_iter().map(|occs| Branch { occs }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Imp,
    Forall,
    Exists,
}

impl Connective {
    /// The connective an elimination rule eliminates.
    pub fn of_elimination(rule: &Rule) -> Option<Connective> {
        Some(match rule {
            Rule::AndE(_) => Connective::And,
            Rule::OrE(_) => Connective::Or,
            Rule::ImpE => Connective::Imp,
            Rule::ForallE(_) => Connective::Forall,
            Rule::ExistsE(..) => Connective::Exists,
            _ => return None,
        })
    }

    /// The connective an introduction rule introduces.
    pub fn of_introduction(rule: &Rule) -> Option<Connective> {
        Some(match rule {
            Rule::AndI => Connective::And,
            Rule::OrI(_) => Connective::Or,
            Rule::ImpI(_) => Connective::Imp,
            Rule::ForallI(_) => Connective::Forall,
            Rule::ExistsI(_) => Connective::Exists,
            _ => return None,
        })
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::And => "And",
            Connective::Or => "Or",
            Connective::Imp => "Imp",
            Connective::Forall => "Forall",
            Connective::Exists => "Exists",
        })
    }
}

/// Which disjunct of the Witness clause matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    /// The left premiss does not use the universal assumption.
    Unused,
    /// The branch starts at the universal assumption and its next
    /// occurrence is a closed atom.
    ClosedInstance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplKind {
    Or,
    Exists,
    Em,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadCutKind {
    Proper(Connective),
    Ind,
    Witness(WitnessCase),
    /// An elimination of the given connective below an EM₁ instance.
    EmPerm(Connective),
    /// Extension: an elimination below `∨E` (`Or`) or `∃E` (`Exists`).
    StdPerm(Connective),
    /// Extension: a case rule whose minor premiss ignores its assumption.
    Simpl(SimplKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadCut {
    pub index: usize,
    pub address: Address,
    pub kind: HeadCutKind,
}

/// The clause matching at position `i` of the branch, core clauses first.
fn cut_at(d: &Derivation, b: &Branch, i: usize, th: &Theory, extensions: bool) -> Option<HeadCutKind> {
    let node = d.node_at(&b.occs[i])?;
    let prev = d.node_at(&b.occs[i - 1])?;
    if let Some(c) = Connective::of_elimination(&node.rule) {
        if Connective::of_introduction(&prev.rule) == Some(c) {
            let proviso = c != Connective::And
                || (i >= 2 && th.formula_eq(&d.node_at(&b.occs[i - 2])?.conclusion, &node.conclusion));
            if proviso {
                return Some(HeadCutKind::Proper(c));
            }
        }
    }
    match &node.rule {
        Rule::Ind { main, .. } if matches!(main, crate::term::Term::Zero | crate::term::Term::Succ(_)) => {
            return Some(HeadCutKind::Ind);
        }
        Rule::Em1 { label, .. } => {
            if !uses_label(prev, label) {
                return Some(HeadCutKind::Witness(WitnessCase::Unused));
            }
            let top = d.node_at(b.top())?;
            let first = d.node_at(&b.occs[1])?;
            let closed_atom = first.conclusion.is_atomic() && first.conclusion.is_closed();
            if matches!(&top.rule, Rule::Assumption(l) if l == label)
                && closed_atom
                && matches!(first.rule, Rule::ForallE(_))
            {
                return Some(HeadCutKind::Witness(WitnessCase::ClosedInstance));
            }
        }
        _ => {}
    }
    if let Some(c) = Connective::of_elimination(&node.rule) {
        if prev.rule.is_em1() {
            return Some(HeadCutKind::EmPerm(c));
        }
    }
    if !extensions {
        return None;
    }
    if Connective::of_elimination(&node.rule).is_some() {
        match prev.rule {
            Rule::OrE(_) => return Some(HeadCutKind::StdPerm(Connective::Or)),
            Rule::ExistsE(..) => return Some(HeadCutKind::StdPerm(Connective::Exists)),
            _ => {}
        }
    }
    match &node.rule {
        Rule::OrE(l) if !uses_label(&node.premisses[1], l) || !uses_label(&node.premisses[2], l) => {
            Some(HeadCutKind::Simpl(SimplKind::Or))
        }
        Rule::ExistsE(l, _) if !uses_label(&node.premisses[1], l) => Some(HeadCutKind::Simpl(SimplKind::Exists)),
        Rule::Em1 { label, .. } if !uses_label(&node.premisses[1], label) => Some(HeadCutKind::Simpl(SimplKind::Em)),
        _ => None,
    }
}

/// The head-cut of a principal branch: the matching position with the
/// greatest index.
pub fn find_head_cut(d: &Derivation, b: &Branch, th: &Theory, extensions: bool) -> Option<HeadCut> {
    (1..b.occs.len()).rev().find_map(|i| {
        cut_at(d, b, i, th, extensions).map(|kind| HeadCut { index: i, address: b.occs[i].clone(), kind })
    })
}

/// Segment lengths of a branch in open normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OnfDecomposition {
    pub n_e: usize,
    pub n_a: usize,
    pub n_i: usize,
}

impl fmt::Display for OnfDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n_E={} n_A={} n_I={}", self.n_e, self.n_a, self.n_i)
    }
}

/// Whether the top of the branch is an assumption left open in `d`.
fn top_is_open(d: &Derivation, b: &Branch) -> bool {
    let Some(Rule::Assumption(l)) = d.node_at(b.top()).map(|n| &n.rule) else {
        return false;
    };
    for k in 1..b.occs.len() {
        let node = d.node_at(&b.occs[k]).expect("branch addresses resolve");
        let via = *b.occs[k - 1].0.last().expect("non-root occurrence");
        if let Some((dl, idx)) = node.rule.discharge() {
            if dl == l && idx.contains(&via) {
                return false;
            }
        }
    }
    true
}

/// Splits a principal branch into eliminations, atomic/EM₁ instances, and
/// introduction/EM₁ instances, starting at an open assumption.
pub fn open_normal_form(d: &Derivation, b: &Branch) -> Option<OnfDecomposition> {
    if !top_is_open(d, b) {
        return None;
    }
    let rules: Vec<&Rule> = b.occs[1..].iter().map(|a| &d.node_at(a).expect("resolves").rule).collect();
    let mut i = 0;
    while i < rules.len() && rules[i].is_elimination() {
        i += 1;
    }
    let n_e = i;
    while i < rules.len() && (rules[i].is_atomic() || rules[i].is_em1()) {
        i += 1;
    }
    let n_a = i - n_e;
    if i < rules.len() && !rules[i].is_introduction() {
        return None;
    }
    if !rules[i..].iter().all(|r| r.is_introduction() || r.is_em1()) {
        return None;
    }
    Some(OnfDecomposition { n_e, n_a, n_i: rules.len() - i })
}
