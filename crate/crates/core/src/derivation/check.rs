use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Address, Derivation, Label, Rule};
use crate::formula::Formula;
use crate::oracle::check_atomic_instance;
use crate::term::{Name, Term};
use crate::theory::Theory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("shape mismatch at {address}: {reason}")]
    ShapeMismatch { address: Address, reason: String },
    #[error("eigenvariable violation at {address}: {reason}")]
    EigenvariableViolation { address: Address, reason: String },
    #[error("discharge mismatch at {address}: {reason}")]
    DischargeMismatch { address: Address, reason: String },
}

impl CheckError {
    pub fn address(&self) -> &Address {
        match self {
            CheckError::ShapeMismatch { address, .. }
            | CheckError::EigenvariableViolation { address, .. }
            | CheckError::DischargeMismatch { address, .. } => address,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenAssumption {
    pub label: Label,
    pub formula: Formula,
    pub address: Address,
}

/// Assumption occurrences not discharged by an ancestor, in preorder.
pub fn open_assumptions(d: &Derivation) -> Vec<OpenAssumption> {
    fn go(d: &Derivation, addr: Address, closed: &mut Vec<Label>, out: &mut Vec<OpenAssumption>) {
        if let Rule::Assumption(l) = &d.rule {
            if !closed.contains(l) {
                out.push(OpenAssumption { label: l.clone(), formula: d.conclusion.clone(), address: addr });
            }
            return;
        }
        let discharge = d.rule.discharge();
        for (i, p) in d.premisses.iter().enumerate() {
            let binds = matches!(discharge, Some((_, idx)) if idx.contains(&i));
            if binds {
                closed.push(discharge.expect("checked").0.clone());
            }
            go(p, addr.child(i), closed, out);
            if binds {
                closed.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(d, Address::root(), &mut Vec::new(), &mut out);
    out
}

/// Free term variables of a derivation: variables free in some formula
/// occurrence or rule-tag term and not bound by an enclosing `∀I`, `∃E`,
/// `Ind` or EM₁ instance over that premiss.
pub fn free_term_variables(d: &Derivation) -> BTreeSet<Name> {
    let mut out = d.conclusion.free_vars();
    for t in d.tag_terms() {
        out.extend(t.free_vars());
    }
    match &d.rule {
        Rule::Ind { var, motive, .. } => out.extend(Formula::forall(var.clone(), motive.clone()).free_vars()),
        Rule::Em1 { var, body, .. } => out.extend(Formula::forall(var.clone(), body.clone()).free_vars()),
        _ => {}
    }
    let binder = d.rule.binder();
    for (i, p) in d.premisses.iter().enumerate() {
        let mut inner = free_term_variables(p);
        if let Some((y, j)) = binder {
            if i == j {
                inner.remove(y);
            }
        }
        out.extend(inner);
    }
    out
}

/// Checks every rule instance, discharge and eigenvariable condition, and
/// that discharge labels are unique.
pub fn check(d: &Derivation, th: &Theory) -> Result<(), CheckError> {
    let mut dischargers: BTreeMap<Label, Address> = BTreeMap::new();
    for (addr, node) in d.nodes() {
        if let Some((l, _)) = node.rule.discharge() {
            if let Some(prev) = dischargers.insert(l.clone(), addr.clone()) {
                return Err(CheckError::DischargeMismatch {
                    address: addr,
                    reason: format!("label {l} is already discharged at {prev}"),
                });
            }
        }
    }
    let open = Checker { th }.node(d, &Address::root())?;
    let mut classes: BTreeMap<&Label, &Formula> = BTreeMap::new();
    for a in &open {
        if let Some(at) = dischargers.get(&a.label) {
            return Err(CheckError::DischargeMismatch {
                address: a.address.clone(),
                reason: format!("assumption {} is outside the scope of its discharge at {at}", a.label),
            });
        }
        match classes.get(&a.label) {
            Some(f) if !th.formula_eq(f, &a.formula) => {
                return Err(CheckError::DischargeMismatch {
                    address: a.address.clone(),
                    reason: format!("open label {} names both {f} and {}", a.label, a.formula),
                })
            }
            Some(_) => {}
            None => {
                classes.insert(&a.label, &a.formula);
            }
        }
    }
    Ok(())
}

struct Checker<'a> {
    th: &'a Theory,
}

type Open = Vec<OpenAssumption>;

impl Checker<'_> {
    fn node(&self, d: &Derivation, addr: &Address) -> Result<Open, CheckError> {
        let shape = |reason: String| CheckError::ShapeMismatch { address: addr.clone(), reason };
        self.th.check_formula(&d.conclusion).map_err(|e| shape(e.to_string()))?;
        for t in d.tag_terms() {
            self.th.check_term(t).map_err(|e| shape(e.to_string()))?;
        }
        let mut opens: Vec<Open> = Vec::with_capacity(d.premisses.len());
        for (i, p) in d.premisses.iter().enumerate() {
            opens.push(self.node(p, &addr.child(i))?);
        }
        if let Some(expected) = expected_premisses(&d.rule).filter(|&n| n != d.premisses.len()) {
            return Err(shape(format!(
                "`{}` takes {expected} premisses, got {}",
                d.rule.name(),
                d.premisses.len()
            )));
        }
        let eq = |a: &Formula, b: &Formula| self.th.formula_eq(a, b);
        let prem = |i: usize| &d.premisses[i].conclusion;
        let want = |i: usize, f: &Formula| -> Result<(), CheckError> {
            if eq(prem(i), f) {
                Ok(())
            } else {
                Err(shape(format!("premiss {i} should conclude {f}, found {}", prem(i))))
            }
        };
        let concl = &d.conclusion;
        let want_concl = |f: &Formula| -> Result<(), CheckError> {
            if eq(concl, f) {
                Ok(())
            } else {
                Err(shape(format!("conclusion should be {f}, found {concl}")))
            }
        };
        match &d.rule {
            Rule::Assumption(l) => {
                return Ok(vec![OpenAssumption {
                    label: l.clone(),
                    formula: concl.clone(),
                    address: addr.clone(),
                }])
            }
            Rule::Atomic(r) => {
                let ps: Vec<&Formula> = d.premisses.iter().map(|p| &p.conclusion).collect();
                check_atomic_instance(r, &ps, concl, self.th).map_err(shape)?;
            }
            Rule::AndI => match concl {
                Formula::And(a, b) => {
                    want(0, a)?;
                    want(1, b)?;
                }
                _ => return Err(shape(format!("and-i concludes a conjunction, found {concl}"))),
            },
            Rule::AndE(side) => match prem(0) {
                Formula::And(a, b) => want_concl(side.pick(a, b))?,
                f => return Err(shape(format!("and-e needs a conjunction, found {f}"))),
            },
            Rule::OrI(side) => match concl {
                Formula::Or(a, b) => want(0, side.pick(a, b))?,
                _ => return Err(shape(format!("or-i concludes a disjunction, found {concl}"))),
            },
            Rule::OrE(l) => match prem(0).clone() {
                Formula::Or(a, b) => {
                    want(1, concl)?;
                    want(2, concl)?;
                    self.discharge(&mut opens[1], l, &a, addr)?;
                    self.discharge(&mut opens[2], l, &b, addr)?;
                }
                f => return Err(shape(format!("or-e needs a disjunction, found {f}"))),
            },
            Rule::ImpI(l) => match concl {
                Formula::Implies(a, b) => {
                    want(0, b)?;
                    self.discharge(&mut opens[0], l, a, addr)?;
                }
                _ => return Err(shape(format!("imp-i concludes an implication, found {concl}"))),
            },
            Rule::ImpE => match prem(0) {
                Formula::Implies(a, b) => {
                    want(1, a)?;
                    want_concl(b)?;
                }
                f => return Err(shape(format!("imp-e needs an implication, found {f}"))),
            },
            Rule::ForallI(y) => match concl {
                Formula::Forall(x, a) => {
                    want(0, &a.subst(x, &Term::Var(y.clone())))?;
                    if concl.occurs_free(y) {
                        return Err(self.eigen(addr, y, "the conclusion"));
                    }
                    self.avoid_open(&opens[0], y, addr)?;
                }
                _ => return Err(shape(format!("forall-i concludes a universal, found {concl}"))),
            },
            Rule::ForallE(t) => match prem(0) {
                Formula::Forall(x, a) => want_concl(&a.subst(x, t))?,
                f => return Err(shape(format!("forall-e needs a universal, found {f}"))),
            },
            Rule::ExistsI(t) => match concl {
                Formula::Exists(x, a) => want(0, &a.subst(x, t))?,
                _ => return Err(shape(format!("exists-i concludes an existential, found {concl}"))),
            },
            Rule::ExistsE(l, y) => match prem(0).clone() {
                Formula::Exists(x, a) => {
                    want(1, concl)?;
                    let inst = a.subst(&x, &Term::Var(y.clone()));
                    self.discharge(&mut opens[1], l, &inst, addr)?;
                    if concl.occurs_free(y) {
                        return Err(self.eigen(addr, y, "the conclusion"));
                    }
                    if prem(0).occurs_free(y) {
                        return Err(self.eigen(addr, y, "the major premiss"));
                    }
                    self.avoid_open(&opens[1], y, addr)?;
                }
                f => return Err(shape(format!("exists-e needs an existential, found {f}"))),
            },
            Rule::Ind { label, var, motive, main } => {
                self.th.check_formula(motive).map_err(|e| shape(e.to_string()))?;
                want_concl(&motive.subst(var, main))?;
                want(0, &motive.subst(var, &Term::Zero))?;
                want(1, &motive.subst(var, &Term::succ(Term::Var(var.clone()))))?;
                self.discharge(&mut opens[1], label, motive, addr)?;
                self.avoid_open(&opens[1], var, addr)?;
            }
            Rule::Em1 { label, eigen, var, body } => {
                if !body.is_atomic() {
                    return Err(shape(format!("em1 body must be atomic, found {body}")));
                }
                self.th.check_formula(body).map_err(|e| shape(e.to_string()))?;
                want(0, concl)?;
                want(1, concl)?;
                let universal = Formula::forall(var.clone(), body.clone());
                let negated = Formula::not(body.subst(var, &Term::Var(eigen.clone())));
                self.discharge(&mut opens[0], label, &universal, addr)?;
                self.discharge(&mut opens[1], label, &negated, addr)?;
                if concl.occurs_free(eigen) {
                    return Err(self.eigen(addr, eigen, "the conclusion"));
                }
                if universal.occurs_free(eigen) {
                    return Err(self.eigen(addr, eigen, "the universal assumption"));
                }
                self.avoid_open(&opens[1], eigen, addr)?;
            }
            Rule::Em1Axiom => match concl {
                Formula::Or(l, _) => match l.as_ref() {
                    Formula::Forall(x, a) if a.is_atomic() => {
                        want_concl(&Formula::em1_instance(x, a))?;
                    }
                    _ => return Err(shape(format!("{concl} is not an excluded-middle instance"))),
                },
                _ => return Err(shape(format!("{concl} is not an excluded-middle instance"))),
            },
        }
        Ok(opens.into_iter().flatten().collect())
    }

    /// Removes the `label` assumptions from `open`, requiring each to be `f`.
    fn discharge(&self, open: &mut Open, label: &Label, f: &Formula, at: &Address) -> Result<(), CheckError> {
        let mut err = None;
        open.retain(|a| {
            if a.label != *label {
                return true;
            }
            if err.is_none() && !self.th.formula_eq(&a.formula, f) {
                err = Some(CheckError::DischargeMismatch {
                    address: a.address.clone(),
                    reason: format!("{label} is discharged at {at} as {f}, assumed as {}", a.formula),
                });
            }
            false
        });
        err.map_or(Ok(()), Err)
    }

    fn avoid_open(&self, open: &Open, y: &Name, at: &Address) -> Result<(), CheckError> {
        for a in open {
            if a.formula.occurs_free(y) {
                return Err(self.eigen(at, y, &format!("open assumption {} at {}", a.label, a.address)));
            }
        }
        Ok(())
    }

    fn eigen(&self, at: &Address, y: &Name, place: &str) -> CheckError {
        CheckError::EigenvariableViolation {
            address: at.clone(),
            reason: format!("eigenvariable {y} occurs free in {place}"),
        }
    }
}

/// `None` for atomic rules, whose arity the oracle checks.
fn expected_premisses(rule: &Rule) -> Option<usize> {
    Some(match rule {
        Rule::Assumption(_) | Rule::Em1Axiom => 0,
        Rule::Atomic(_) => return None,
        Rule::AndI | Rule::ImpE | Rule::ExistsE(..) | Rule::Ind { .. } | Rule::Em1 { .. } => 2,
        Rule::OrE(_) => 3,
        Rule::AndE(_) | Rule::OrI(_) | Rule::ImpI(_) | Rule::ForallI(_) | Rule::ForallE(_) | Rule::ExistsI(_) => 1,
    })
}
