//! Unfolding induction at a main term `0` or `S(b)`.

use super::{Local, ReduceError};
use crate::derivation::{graft, subst_term, Derivation, Rule};
use crate::term::Term;
use crate::theory::Theory;

/// At `0` the base derivation; at `S(b)` the step derivation instantiated at
/// `b`, grafted onto induction at `b`. When `b` is `0` the base derivation
/// is grafted directly, so a main term `n ≥ 1` unfolds in exactly `n` steps.
pub(super) fn reduce(node: &Derivation, th: &Theory) -> Result<Local, ReduceError> {
    let Rule::Ind { label, var, motive, main } = &node.rule else {
        return Err(super::not_a_redex(super::ReductionKind::IndRed, "not an induction"));
    };
    let (base, step) = (&node.premisses[0], &node.premisses[1]);
    match main {
        Term::Zero => Ok((base.clone(), "main=0".into())),
        Term::Succ(b) => {
            let inner = if **b == Term::Zero {
                base.clone()
            } else {
                Derivation::ind(label.clone(), var.clone(), motive.clone(), (**b).clone(), base.clone(), step.clone())
            };
            let stepped = subst_term(step, var, b);
            Ok((graft(&stepped, label, &inner, th)?, format!("main={main}")))
        }
        other => Err(ReduceError::MainTermBlocked { address: Default::default(), term: other.clone() }),
    }
}
