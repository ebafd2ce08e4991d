//! Introduction immediately followed by the matching elimination.

use super::{not_a_redex, Local, ReduceError, ReductionKind};
use crate::derivation::{graft, subst_term, Derivation, Rule};
use crate::theory::Theory;

pub(super) fn reduce(node: &Derivation, kind: ReductionKind, th: &Theory) -> Result<Local, ReduceError> {
    let fail = |why: &str| Err(not_a_redex(kind, why));
    let Some(major) = node.premisses.first() else {
        return fail("no major premiss");
    };
    let reduct = match (kind, &node.rule, &major.rule) {
        (ReductionKind::PropAnd, Rule::AndE(side), Rule::AndI) => {
            side.pick(&major.premisses[0], &major.premisses[1]).clone()
        }
        (ReductionKind::PropOr, Rule::OrE(l), Rule::OrI(side)) => {
            let arm = side.pick(&node.premisses[1], &node.premisses[2]);
            graft(arm, l, &major.premisses[0], th)?
        }
        (ReductionKind::PropImp, Rule::ImpE, Rule::ImpI(l)) => graft(&major.premisses[0], l, &node.premisses[1], th)?,
        (ReductionKind::PropForall, Rule::ForallE(t), Rule::ForallI(y)) => subst_term(&major.premisses[0], y, t),
        (ReductionKind::PropExists, Rule::ExistsE(l, y), Rule::ExistsI(t)) => {
            let minor = subst_term(&node.premisses[1], y, t);
            graft(&minor, l, &major.premisses[0], th)?
        }
        _ => return fail("the major premiss is not the matching introduction"),
    };
    Ok((reduct, String::new()))
}
