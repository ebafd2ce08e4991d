//! The Witness reduction on an EM₁ instance.

use std::fmt;

use super::{not_a_redex, Local, ReduceError, ReductionKind};
use crate::derivation::{all_labels, fresh_label, graft, subst_term, uses_label, Derivation, Label, Rule};
use crate::oracle::{atom_intro, decide, refute};
use crate::term::Term;
use crate::theory::Theory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// Every instance was true and the universal assumption is gone: the
    /// left premiss replaces the EM₁ instance.
    Eliminated,
    /// Every instance was true but the universal assumption is still used:
    /// the EM₁ instance stays with its left premiss updated.
    Retained,
    /// `A[x := t]` is false for the given `t`: the right premiss at `t`,
    /// with the negated assumption refuted, replaces the EM₁ instance.
    Counterexample(Term),
}

impl fmt::Display for WitnessOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessOutcome::Eliminated => f.write_str("outcome=a"),
            WitnessOutcome::Retained => f.write_str("outcome=b"),
            WitnessOutcome::Counterexample(t) => write!(f, "outcome=c counterexample={t}"),
        }
    }
}

/// `∀x A` instances in `d`: `∀E` nodes whose premiss is the `label`
/// assumption and whose conclusion is closed, in preorder.
fn instances<'a>(d: &'a Derivation, label: &Label, out: &mut Vec<&'a Derivation>) {
    if let (Rule::ForallE(_), Some(p)) = (&d.rule, d.premisses.first()) {
        if matches!(&p.rule, Rule::Assumption(l) if l == label) && d.conclusion.is_closed() {
            out.push(d);
            return;
        }
    }
    if matches!(d.rule.discharge(), Some((l, _)) if l == label) {
        return;
    }
    for p in &d.premisses {
        instances(p, label, out);
    }
}

/// Replaces each closed instance of the `label` assumption by an axiom.
fn discharge_true_instances(d: &Derivation, label: &Label, th: &Theory) -> Result<Derivation, ReduceError> {
    if let (Rule::ForallE(_), Some(p)) = (&d.rule, d.premisses.first()) {
        if matches!(&p.rule, Rule::Assumption(l) if l == label) && d.conclusion.is_closed() {
            return Ok(atom_intro(&d.conclusion, th)?);
        }
    }
    if matches!(d.rule.discharge(), Some((l, _)) if l == label) {
        return Ok(d.clone());
    }
    let premisses = d
        .premisses
        .iter()
        .map(|p| discharge_true_instances(p, label, th))
        .collect::<Result<_, _>>()?;
    Ok(Derivation::new(d.conclusion.clone(), d.rule.clone(), premisses))
}

pub(super) fn reduce_with_outcome(node: &Derivation, th: &Theory) -> Result<(Derivation, WitnessOutcome), ReduceError> {
    let kind = ReductionKind::Witness;
    let Rule::Em1 { label, eigen, var, body } = &node.rule else {
        return Err(not_a_redex(kind, "not an EM1 instance"));
    };
    let (left, right) = (&node.premisses[0], &node.premisses[1]);
    let mut found = Vec::new();
    instances(left, label, &mut found);
    if found.is_empty() && uses_label(left, label) {
        return Err(not_a_redex(kind, "the universal assumption has no closed instance"));
    }
    for inst in &found {
        let Rule::ForallE(t) = &inst.rule else { unreachable!("instances are forall-e nodes") };
        if !decide(&inst.conclusion, th)? {
            let atom = body.subst(var, t);
            let fresh = fresh_label(label, &all_labels(node));
            let negation = refute(&atom, fresh, th)?;
            let arm = subst_term(right, eigen, t);
            let reduct = graft(&arm, label, &negation, th)?;
            return Ok((reduct, WitnessOutcome::Counterexample(t.clone())));
        }
    }
    let left = discharge_true_instances(left, label, th)?;
    if uses_label(&left, label) {
        let mut kept = node.clone();
        kept.premisses[0] = left;
        Ok((kept, WitnessOutcome::Retained))
    } else {
        Ok((left, WitnessOutcome::Eliminated))
    }
}

pub(super) fn reduce(node: &Derivation, th: &Theory) -> Result<Local, ReduceError> {
    let (d, outcome) = reduce_with_outcome(node, th)?;
    Ok((d, outcome.to_string()))
}
