//! Immediate simplifications of case rules whose minor premiss ignores the
//! assumption it could use.

use super::{not_a_redex, Local, ReduceError, ReductionKind};
use crate::derivation::{subst_term, uses_label, Derivation, Rule};
use crate::term::Term;

/// The unused premiss replaces the whole instance. Its eigenvariable, now
/// unbound, is instantiated at `0` so no free variable appears.
pub(super) fn simplify(node: &Derivation, kind: ReductionKind) -> Result<Local, ReduceError> {
    let reduct = match (&node.rule, kind) {
        (Rule::OrE(l), ReductionKind::SimplOr) => {
            let (first, second) = (&node.premisses[1], &node.premisses[2]);
            if !uses_label(first, l) {
                first.clone()
            } else if !uses_label(second, l) {
                second.clone()
            } else {
                return Err(not_a_redex(kind, "both arms use their assumption"));
            }
        }
        (Rule::ExistsE(l, y), ReductionKind::SimplExists) if !uses_label(&node.premisses[1], l) => {
            subst_term(&node.premisses[1], y, &Term::Zero)
        }
        (Rule::Em1 { label, eigen, .. }, ReductionKind::SimplEm) if !uses_label(&node.premisses[1], label) => {
            subst_term(&node.premisses[1], eigen, &Term::Zero)
        }
        _ => return Err(not_a_redex(kind, "no premiss ignores its assumption")),
    };
    Ok((reduct, String::new()))
}
