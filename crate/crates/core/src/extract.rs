//! Witness extraction from closed derivations of simple formulas, and the
//! translations between the EM₁ axiom and the EM₁ rule.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::derivation::{
    check, free_term_variables, open_assumptions, subst_term, CheckError, Derivation, Label, Rule,
};
use crate::formula::{Formula, SimpleClass};
use crate::oracle::decide;
use crate::reduce::{normalize, Config, ReduceError, Status, TraceStep};
use crate::term::{fresh_name, Name, Term};
use crate::theory::Theory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    OpenAssumptions,
    FreeTermVariables,
    NonSimpleConclusion,
    /// The derivation contains the excluded-middle axiom leaf, which no
    /// reduction removes.
    Em1Axiom,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::OpenAssumptions => "open-assumptions",
            Hypothesis::FreeTermVariables => "free-term-variables",
            Hypothesis::NonSimpleConclusion => "non-simple-conclusion",
            Hypothesis::Em1Axiom => "em1-axiom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockReason {
    FuelExhausted,
    HypothesisViolated(Hypothesis),
}

impl fmt::Display for BlockReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockReason::FuelExhausted => f.write_str("fuel-exhausted"),
            BlockReason::HypothesisViolated(h) => write!(f, "hypothesis-violated {h}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractionResult {
    /// The numeral `value` and the true instance `A[x := value]`.
    Witness { value: u64, instance: Formula },
    /// A normal derivation containing only atomic formulas.
    AtomicProof(Derivation),
    Blocked(BlockReason),
}

impl fmt::Display for ExtractionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractionResult::Witness { value, .. } => write!(f, "witness {value}"),
            ExtractionResult::AtomicProof(_) => f.write_str("atomic"),
            ExtractionResult::Blocked(r) => write!(f, "blocked {r}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub result: ExtractionResult,
    /// The normalized derivation, when normalization ran.
    pub normal_form: Option<Derivation>,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    /// A normal closed derivation of a simple formula of the wrong shape.
    #[error("kernel defect: {0}")]
    KernelDefect(String),
}

/// The first hypothesis of the extraction theorem that `d` violates.
pub fn violated_hypothesis(d: &Derivation) -> Option<Hypothesis> {
    if !open_assumptions(d).is_empty() {
        Some(Hypothesis::OpenAssumptions)
    } else if !free_term_variables(d).is_empty() {
        Some(Hypothesis::FreeTermVariables)
    } else if !d.conclusion.classify().is_simple() {
        Some(Hypothesis::NonSimpleConclusion)
    } else if d.count_rules(&|r| matches!(r, Rule::Em1Axiom)) > 0 {
        Some(Hypothesis::Em1Axiom)
    } else {
        None
    }
}

/// Checks `d`, normalizes it and reads the witness off the final `∃I`.
pub fn extract(d: &Derivation, th: &Theory, cfg: Config) -> Result<Extraction, ExtractError> {
    check(d, th)?;
    if let Some(h) = violated_hypothesis(d) {
        return Ok(Extraction {
            result: ExtractionResult::Blocked(BlockReason::HypothesisViolated(h)),
            normal_form: None,
            trace: vec![],
        });
    }
    let n = normalize(d, th, cfg)?;
    let normal = n.derivation;
    let result = if n.status == Status::FuelExhausted {
        ExtractionResult::Blocked(BlockReason::FuelExhausted)
    } else {
        read_off(&normal, th)?
    };
    Ok(Extraction { result, normal_form: Some(normal), trace: n.trace })
}

fn read_off(normal: &Derivation, th: &Theory) -> Result<ExtractionResult, ExtractError> {
    let defect = |why: String| Err(ExtractError::KernelDefect(why));
    match (&normal.rule, &normal.conclusion) {
        (Rule::ExistsI(t), Formula::Exists(x, body)) => {
            let Some(value) = th.normalize_term(t).numeral_value() else {
                return defect(format!("witness term {t} is not closed"));
            };
            let instance = body.subst(x, &Term::numeral(value));
            match decide(&instance, th) {
                Ok(true) => Ok(ExtractionResult::Witness { value, instance }),
                Ok(false) => defect(format!("extracted instance {instance} is false")),
                Err(e) => defect(e.to_string()),
            }
        }
        _ if normal.conclusion.classify() == SimpleClass::ClosedAtomic && normal.is_atomic_only() => {
            Ok(ExtractionResult::AtomicProof(normal.clone()))
        }
        _ => defect(format!(
            "normal derivation ends with `{}` concluding {}",
            normal.rule.name(),
            normal.conclusion
        )),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BridgeError {
    #[error("premiss concludes {found}, expected {expected}")]
    ConclusionMismatch { expected: Formula, found: Formula },
    #[error("{0} is not atomic")]
    NotAtomic(Formula),
}

fn eigen_for(body: &Formula, x: &str, extra: &BTreeSet<Name>) -> Name {
    let mut avoid = Formula::forall(x, body.clone()).free_vars();
    avoid.insert(x.to_string());
    avoid.extend(extra.iter().cloned());
    if avoid.contains("y") {
        fresh_name("y", &avoid)
    } else {
        "y".to_string()
    }
}

/// The excluded-middle axiom `(∀x A) ∨ (∃x ¬A)` derived with one EM₁
/// instance and disjunction introductions.
pub fn em_axiom_from_rule(body: &Formula, x: &str) -> Result<Derivation, BridgeError> {
    if !body.is_atomic() {
        return Err(BridgeError::NotAtomic(body.clone()));
    }
    let label = Label::new("em");
    let y = eigen_for(body, x, &BTreeSet::new());
    let universal = Formula::forall(x, body.clone());
    let existential = Formula::exists(x, Formula::not(body.clone()));
    let neg_inst = Formula::not(body.subst(x, &Term::Var(y.clone())));
    let left = Derivation::or_i(
        crate::derivation::Side::First,
        existential.clone(),
        Derivation::assume(label.clone(), universal.clone()),
    );
    let witness = Derivation::exists_i(
        Term::Var(y.clone()),
        existential,
        Derivation::assume(label.clone(), neg_inst),
    );
    let right = Derivation::or_i(crate::derivation::Side::Second, universal, witness);
    Ok(Derivation::em1(label, y, x, body.clone(), left, right))
}

/// The EM₁ rule derived from the axiom: a disjunction elimination on the
/// axiom whose second arm opens the existential with `∃E`.
///
/// `left` concludes `target` from the assumption `∀x A` under its label;
/// `right` concludes `target` from `¬A[x := y]` under its label, with `y`
/// its eigenvariable. A `y` that clashes with `target` or `A` is renamed.
pub fn em_rule_from_axiom(
    body: &Formula,
    x: &str,
    target: &Formula,
    left: (Label, Derivation),
    right: (Label, Name, Derivation),
    th: &Theory,
) -> Result<Derivation, BridgeError> {
    if !body.is_atomic() {
        return Err(BridgeError::NotAtomic(body.clone()));
    }
    let (l_label, l_deriv) = left;
    let (mut r_label, mut y, mut r_deriv) = right;
    for d in [&l_deriv, &r_deriv] {
        if !th.formula_eq(&d.conclusion, target) {
            return Err(BridgeError::ConclusionMismatch { expected: target.clone(), found: d.conclusion.clone() });
        }
    }
    let mut clash = target.free_vars();
    clash.extend(Formula::forall(x, body.clone()).free_vars());
    if clash.contains(&y) {
        let mut avoid = clash.clone();
        avoid.extend(crate::derivation::all_vars(&r_deriv));
        let fresh = fresh_name(&y, &avoid);
        r_deriv = subst_term(&r_deriv, &y, &Term::Var(fresh.clone()));
        y = fresh;
    }
    if r_label == l_label {
        let fresh = crate::derivation::fresh_label(&r_label, &crate::derivation::all_labels(&r_deriv));
        r_deriv = rename_open(&r_deriv, &r_label, &fresh);
        r_label = fresh;
    }
    let existential = Formula::exists(x, Formula::not(body.clone()));
    let opened = Derivation::exists_e(r_label, y, Derivation::assume(l_label.clone(), existential), r_deriv);
    Ok(Derivation::or_e(l_label, Derivation::em1_axiom(x, body.clone()), l_deriv, opened))
}

fn rename_open(d: &Derivation, old: &Label, new: &Label) -> Derivation {
    match &d.rule {
        Rule::Assumption(l) if l == old => Derivation::assume(new.clone(), d.conclusion.clone()),
        r if matches!(r.discharge(), Some((l, _)) if l == old) => d.clone(),
        _ => Derivation::new(
            d.conclusion.clone(),
            d.rule.clone(),
            d.premisses.iter().map(|p| rename_open(p, old, new)).collect(),
        ),
    }
}
