//! Permuting an elimination above the case rule producing its major
//! premiss.

use std::collections::BTreeSet;

use super::{not_a_redex, Local, ReduceError, ReductionKind};
use crate::derivation::{all_vars, free_term_variables, subst_term, Derivation, Rule};
use crate::term::{fresh_name, Name, Term};

/// Variables the pushed-up elimination brings into a premiss: those of its
/// conclusion, tag terms and minor premisses.
fn elim_vars(elim: &Derivation) -> BTreeSet<Name> {
    let mut out = elim.conclusion.free_vars();
    for t in elim.tag_terms() {
        out.extend(t.free_vars());
    }
    for m in &elim.premisses[1..] {
        out.extend(free_term_variables(m));
    }
    out
}

/// The elimination `elim` with its major premiss replaced by `major`.
fn with_major(elim: &Derivation, major: Derivation) -> Derivation {
    let mut out = elim.clone();
    out.premisses[0] = major;
    out
}

/// Renames the eigenvariable bound over premiss `j` of `case` when it
/// clashes with `avoid`.
fn rename_apart(case: &Derivation, avoid: &BTreeSet<Name>, scope: &BTreeSet<Name>) -> Derivation {
    let Some((y, j)) = case.rule.binder() else {
        return case.clone();
    };
    if !avoid.contains(y) {
        return case.clone();
    }
    let mut taken = scope.clone();
    taken.extend(avoid.iter().cloned());
    let fresh = fresh_name(y, &taken);
    let mut out = case.clone();
    out.premisses[j] = subst_term(&case.premisses[j], y, &Term::Var(fresh.clone()));
    out.rule = match &case.rule {
        Rule::ExistsE(l, _) => Rule::ExistsE(l.clone(), fresh),
        Rule::Em1 { label, var, body, .. } => {
            Rule::Em1 { label: label.clone(), eigen: fresh, var: var.clone(), body: body.clone() }
        }
        other => other.clone(),
    };
    out
}

/// Elimination below EM₁: the elimination, with its minor premisses
/// copied, moves into both EM₁ premisses.
pub(super) fn em_perm(elim: &Derivation, kind: ReductionKind) -> Result<Local, ReduceError> {
    if !elim.rule.is_elimination() {
        return Err(not_a_redex(kind, "not an elimination"));
    }
    let case = &elim.premisses[0];
    if !case.rule.is_em1() {
        return Err(not_a_redex(kind, "the major premiss is not concluded by EM1"));
    }
    let case = rename_apart(case, &elim_vars(elim), &all_vars(elim));
    let left = with_major(elim, case.premisses[0].clone());
    let right = with_major(elim, case.premisses[1].clone());
    Ok((Derivation::new(elim.conclusion.clone(), case.rule.clone(), vec![left, right]), String::new()))
}

/// Elimination below `∨E` or `∃E`: the elimination moves into the minor
/// premisses of the case rule.
pub(super) fn std_perm(elim: &Derivation, kind: ReductionKind) -> Result<Local, ReduceError> {
    if !elim.rule.is_elimination() {
        return Err(not_a_redex(kind, "not an elimination"));
    }
    let case = &elim.premisses[0];
    let case = match (&case.rule, kind) {
        (Rule::OrE(_), ReductionKind::StdPermOr) => case.clone(),
        (Rule::ExistsE(..), ReductionKind::StdPermExists) => rename_apart(case, &elim_vars(elim), &all_vars(elim)),
        _ => return Err(not_a_redex(kind, "the major premiss is not concluded by the matching case rule")),
    };
    let mut premisses = vec![case.premisses[0].clone()];
    premisses.extend(case.premisses[1..].iter().map(|m| with_major(elim, m.clone())));
    Ok((Derivation::new(elim.conclusion.clone(), case.rule.clone(), premisses), String::new()))
}
