//! Decision procedure for closed atomic formulas and the fixed set of
//! atomic rules.

use thiserror::Error;

use crate::derivation::{Derivation, Label};
use crate::formula::{Formula, Pred};
use crate::term::{Name, Term};
use crate::theory::{Theory, TheoryError};

/// Rules whose premisses and conclusion are all atomic. None of them
/// discharges an assumption or binds a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomicRule {
    /// `⊢ t = t`
    EqRefl,
    /// `s = t ⊢ t = s`
    EqSym,
    /// `r = s, s = t ⊢ r = t`
    EqTrans,
    /// `s₁ = t₁, …, sₖ = tₖ ⊢ f(s⃗) = f(t⃗)`; `succ` is allowed as `f`.
    EqCompat(Name),
    /// `⊥ ⊢ P` for atomic `P`
    EfqAtomic,
    /// `S(t) = 0 ⊢ ⊥`
    SuccNotZero,
    /// `S(s) = S(t) ⊢ s = t`
    SuccInjective,
    /// `⊢ P` for a closed true atom
    AtomI,
    /// `P ⊢ ⊥` for a closed false atom
    AtomE,
}

impl AtomicRule {
    pub fn name(&self) -> &'static str {
        match self {
            AtomicRule::EqRefl => "refl",
            AtomicRule::EqSym => "sym",
            AtomicRule::EqTrans => "trans",
            AtomicRule::EqCompat(_) => "compat",
            AtomicRule::EfqAtomic => "efq",
            AtomicRule::SuccNotZero => "succ-not-zero",
            AtomicRule::SuccInjective => "succ-inj",
            AtomicRule::AtomI => "atom-i",
            AtomicRule::AtomE => "atom-e",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} is not a closed atomic formula")]
    NotClosedAtomic(Formula),
    #[error("{0} is false")]
    AtomFalse(Formula),
    #[error("{0} is true")]
    AtomTrue(Formula),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Truth of a closed atomic formula: both sides of an equation normalize to
/// the same numeral, a declared predicate's characteristic function
/// normalizes to `0`, and `⊥` is false.
pub fn decide(a: &Formula, th: &Theory) -> Result<bool, OracleError> {
    if !a.is_atomic() || !a.is_closed() {
        return Err(OracleError::NotClosedAtomic(a.clone()));
    }
    th.check_formula(a)?;
    match a {
        Formula::Falsum => Ok(false),
        Formula::Atom(Pred::Eq, args) => {
            Ok(th.normalize_term(&args[0]) == th.normalize_term(&args[1]))
        }
        Formula::Atom(Pred::Named(p), args) => {
            let def = th.predicate(p).ok_or_else(|| TheoryError::UnknownPredicate(p.clone()))?;
            let value = th.normalize_term(&Term::app(def.charfn.clone(), args.clone()));
            Ok(value == Term::Zero)
        }
        _ => unreachable!("atomic formulas are atoms or falsum"),
    }
}

/// One-node derivation of a true closed atom.
pub fn atom_intro(a: &Formula, th: &Theory) -> Result<Derivation, OracleError> {
    if !decide(a, th)? {
        return Err(OracleError::AtomFalse(a.clone()));
    }
    Ok(Derivation::atomic(AtomicRule::AtomI, a.clone(), vec![]))
}

/// Closed derivation of `¬a` for a false closed atom: assume `a` under
/// `label`, derive `⊥` by `AtomE`, discharge.
pub fn refute(a: &Formula, label: Label, th: &Theory) -> Result<Derivation, OracleError> {
    if decide(a, th)? {
        return Err(OracleError::AtomTrue(a.clone()));
    }
    let hyp = Derivation::assume(label.clone(), a.clone());
    let bot = Derivation::atomic(AtomicRule::AtomE, Formula::Falsum, vec![hyp]);
    Ok(Derivation::imp_i(label, a.clone(), bot))
}

fn equation(a: &Formula) -> Option<(&Term, &Term)> {
    match a {
        Formula::Atom(Pred::Eq, args) if args.len() == 2 => Some((&args[0], &args[1])),
        _ => None,
    }
}

/// Does the instance match the rule schema? Terms are compared after
/// normalization. On mismatch the error names what failed.
pub fn check_atomic_instance(
    rule: &AtomicRule,
    premisses: &[&Formula],
    conclusion: &Formula,
    th: &Theory,
) -> Result<(), String> {
    let arity = |n: usize| -> Result<(), String> {
        if premisses.len() == n {
            Ok(())
        } else {
            Err(format!("`{}` takes {n} premisses, got {}", rule.name(), premisses.len()))
        }
    };
    let eqn = |a: &Formula| -> Result<(Term, Term), String> {
        equation(a)
            .map(|(s, t)| (th.normalize_term(s), th.normalize_term(t)))
            .ok_or_else(|| format!("expected an equation, found {a}"))
    };
    let falsum = |a: &Formula| -> Result<(), String> {
        if *a == Formula::Falsum {
            Ok(())
        } else {
            Err(format!("expected bot, found {a}"))
        }
    };
    for p in premisses.iter().chain(std::iter::once(&conclusion)) {
        if !p.is_atomic() {
            return Err(format!("atomic rules take atomic formulas, found {p}"));
        }
    }
    match rule {
        AtomicRule::EqRefl => {
            arity(0)?;
            let (s, t) = eqn(conclusion)?;
            if s == t {
                Ok(())
            } else {
                Err(format!("{conclusion} is not an instance of t = t"))
            }
        }
        AtomicRule::EqSym => {
            arity(1)?;
            let (s, t) = eqn(premisses[0])?;
            let (u, v) = eqn(conclusion)?;
            if s == v && t == u {
                Ok(())
            } else {
                Err(format!("{conclusion} does not swap {}", premisses[0]))
            }
        }
        AtomicRule::EqTrans => {
            arity(2)?;
            let (r, s) = eqn(premisses[0])?;
            let (s2, t) = eqn(premisses[1])?;
            let (u, v) = eqn(conclusion)?;
            if s == s2 && r == u && t == v {
                Ok(())
            } else {
                Err("premisses and conclusion do not chain".into())
            }
        }
        AtomicRule::EqCompat(f) => {
            let k = if f == "succ" {
                1
            } else {
                th.functions.arity(f).ok_or_else(|| format!("unknown function symbol `{f}`"))?
            };
            arity(k)?;
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for p in premisses {
                let (s, t) = equation(p).ok_or_else(|| format!("expected an equation, found {p}"))?;
                lhs.push(s.clone());
                rhs.push(t.clone());
            }
            let build = |args: Vec<Term>| {
                if f == "succ" {
                    Term::succ(args.into_iter().next().expect("one argument"))
                } else {
                    Term::app(f.clone(), args)
                }
            };
            let expected = Formula::eq(build(lhs), build(rhs));
            if th.formula_eq(&expected, conclusion) {
                Ok(())
            } else {
                Err(format!("expected {expected}, found {conclusion}"))
            }
        }
        AtomicRule::EfqAtomic => {
            arity(1)?;
            falsum(premisses[0])
        }
        AtomicRule::SuccNotZero => {
            arity(1)?;
            falsum(conclusion)?;
            match eqn(premisses[0])? {
                (Term::Succ(_), Term::Zero) => Ok(()),
                _ => Err(format!("{} is not of the form S(t) = 0", premisses[0])),
            }
        }
        AtomicRule::SuccInjective => {
            arity(1)?;
            match eqn(premisses[0])? {
                (Term::Succ(s), Term::Succ(t)) => {
                    let (u, v) = eqn(conclusion)?;
                    if *s == u && *t == v {
                        Ok(())
                    } else {
                        Err(format!("expected {s} = {t}, found {conclusion}"))
                    }
                }
                _ => Err(format!("{} is not of the form S(s) = S(t)", premisses[0])),
            }
        }
        AtomicRule::AtomI => {
            arity(0)?;
            match decide(conclusion, th) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("{conclusion} is false")),
                Err(e) => Err(e.to_string()),
            }
        }
        AtomicRule::AtomE => {
            arity(1)?;
            falsum(conclusion)?;
            match decide(premisses[0], th) {
                Ok(false) => Ok(()),
                Ok(true) => Err(format!("{} is true", premisses[0])),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}
