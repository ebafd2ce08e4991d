//! The function registry together with declared predicates: everything
//! needed to compare formulas modulo term normalization.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Formula, Pred};
use crate::registry::{FunctionRegistry, TermError};
use crate::term::{Name, Term};

/// A predicate symbol decided through a characteristic function: `P(t⃗)`
/// holds iff `charfn(t⃗)` normalizes to `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDef {
    pub name: Name,
    pub arity: usize,
    pub charfn: Name,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("predicate `{0}` is already declared")]
    DuplicatePredicate(Name),
    #[error("predicate `{0}` is not declared")]
    UnknownPredicate(Name),
    #[error("predicate `{name}`: characteristic function `{charfn}` {reason}")]
    BadCharacteristic { name: Name, charfn: Name, reason: String },
    #[error("predicate `{symbol}` expects {expected} arguments, got {found}")]
    PredicateArity { symbol: Name, expected: usize, found: usize },
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub functions: FunctionRegistry,
    predicates: BTreeMap<Name, PredicateDef>,
}

impl Theory {
    pub fn new(functions: FunctionRegistry) -> Self {
        Theory { functions, predicates: BTreeMap::new() }
    }

    /// The standard function registry and no extra predicates.
    pub fn standard() -> Self {
        Theory::new(FunctionRegistry::standard())
    }

    pub fn declare_predicate(
        &mut self,
        name: impl Into<Name>,
        arity: usize,
        charfn: impl Into<Name>,
    ) -> Result<(), TheoryError> {
        let name = name.into();
        let charfn = charfn.into();
        if name == "=" || self.predicates.contains_key(&name) {
            return Err(TheoryError::DuplicatePredicate(name));
        }
        match self.functions.arity(&charfn) {
            None => {
                return Err(TheoryError::BadCharacteristic {
                    name,
                    charfn,
                    reason: "is not registered".into(),
                })
            }
            Some(a) if a != arity => {
                return Err(TheoryError::BadCharacteristic {
                    name,
                    charfn,
                    reason: format!("has arity {a}, predicate has arity {arity}"),
                })
            }
            Some(_) => {}
        }
        self.predicates.insert(name.clone(), PredicateDef { name, arity, charfn });
        Ok(())
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDef> {
        self.predicates.get(name)
    }

    pub fn predicates(&self) -> impl Iterator<Item = &PredicateDef> {
        self.predicates.values()
    }

    /// Normal form of `t`; unknown symbols leave the term as written.
    pub fn normalize_term(&self, t: &Term) -> Term {
        self.functions.normalize(t).unwrap_or_else(|_| t.clone())
    }

    pub fn normalize_formula(&self, a: &Formula) -> Formula {
        a.map_terms(&mut |t| self.normalize_term(t))
    }

    /// Formula equality: same normal form up to bound-variable renaming.
    pub fn formula_eq(&self, a: &Formula, b: &Formula) -> bool {
        a.alpha_eq(b) || self.normalize_formula(a).alpha_eq(&self.normalize_formula(b))
    }

    pub fn term_eq(&self, s: &Term, t: &Term) -> bool {
        s == t || self.normalize_term(s) == self.normalize_term(t)
    }

    pub fn is_normal_term(&self, t: &Term) -> bool {
        self.normalize_term(t) == *t
    }

    pub fn is_normal_formula(&self, a: &Formula) -> bool {
        a.terms().into_iter().all(|t| self.is_normal_term(t))
    }

    pub fn check_term(&self, t: &Term) -> Result<(), TheoryError> {
        Ok(self.functions.check_term(t)?)
    }

    /// Every function and predicate symbol is known and used at its arity.
    pub fn check_formula(&self, a: &Formula) -> Result<(), TheoryError> {
        match a {
            Formula::Atom(p, args) => {
                let expected = match p {
                    Pred::Eq => 2,
                    Pred::Named(n) => {
                        self.predicate(n).ok_or_else(|| TheoryError::UnknownPredicate(n.clone()))?.arity
                    }
                };
                if expected != args.len() {
                    return Err(TheoryError::PredicateArity {
                        symbol: p.to_string(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Falsum => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => self.check_formula(a),
        }
    }
}
