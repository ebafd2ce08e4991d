//! Formulas of arithmetic, capture-avoiding substitution and the
//! simple-formula classification.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::term::{fresh_name, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Eq,
    Named(Name),
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Eq => write!(f, "="),
            Pred::Named(p) => write!(f, "{p}"),
        }
    }
}

/// A formula. `¬A` is `Implies(A, Falsum)`; there is no separate negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Pred, Vec<Term>),
    Falsum,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Name, Box<Formula>),
    Exists(Name, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleClass {
    ClosedAtomic,
    SimplyExistential,
    SimplyUniversal,
    NotSimple,
}

impl SimpleClass {
    /// Closed atomic or simply existential.
    pub fn is_simple(self) -> bool {
        matches!(self, SimpleClass::ClosedAtomic | SimpleClass::SimplyExistential)
    }
}

impl Formula {
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Atom(Pred::Eq, vec![s, t])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Falsum)
    }

    pub fn forall(x: impl Into<Name>, a: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(a))
    }

    pub fn exists(x: impl Into<Name>, a: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(a))
    }

    /// Atoms and `⊥`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Falsum)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(_, args) => {
                for a in args {
                    for v in a.free_vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Falsum => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Falsum => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.all_vars(out);
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.occurs(x)),
            Formula::Falsum => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.occurs_free(x) || b.occurs_free(x)
            }
            Formula::Forall(y, a) | Formula::Exists(y, a) => y != x && a.occurs_free(x),
        }
    }

    /// Capture-avoiding `self[x := t]`. A binder that would capture a
    /// variable of `t` is renamed by priming.
    pub fn subst(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.subst(x, t)).collect())
            }
            Formula::Falsum => Formula::Falsum,
            Formula::And(a, b) => Formula::and(a.subst(x, t), b.subst(x, t)),
            Formula::Or(a, b) => Formula::or(a.subst(x, t), b.subst(x, t)),
            Formula::Implies(a, b) => Formula::implies(a.subst(x, t), b.subst(x, t)),
            Formula::Forall(y, a) | Formula::Exists(y, a) => {
                let rebuild = |y: Name, a: Formula| match self {
                    Formula::Forall(..) => Formula::forall(y, a),
                    _ => Formula::exists(y, a),
                };
                if y == x || !a.occurs_free(x) {
                    return self.clone();
                }
                if t.occurs(y) {
                    let mut avoid = t.free_vars();
                    avoid.extend(a.free_vars());
                    avoid.insert(x.to_string());
                    let y2 = fresh_name(y, &avoid);
                    let renamed = a.subst(y, &Term::Var(y2.clone()));
                    rebuild(y2, renamed.subst(x, t))
                } else {
                    rebuild(y.clone(), a.subst(x, t))
                }
            }
        }
    }

    /// Applies `f` to every top-level term argument of every atom.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| f(a)).collect()),
            Formula::Falsum => Formula::Falsum,
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(x, a) => Formula::forall(x.clone(), a.map_terms(f)),
            Formula::Exists(x, a) => Formula::exists(x.clone(), a.map_terms(f)),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.push_terms(&mut out);
        out
    }

    fn push_terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Formula::Atom(_, args) => out.extend(args.iter()),
            Formula::Falsum => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.push_terms(out);
                b.push_terms(out);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.push_terms(out),
        }
    }

    /// Syntactic equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new(), &mut Vec::new())
    }

    pub fn classify(&self) -> SimpleClass {
        match self {
            Formula::Atom(..) | Formula::Falsum if self.is_closed() => SimpleClass::ClosedAtomic,
            Formula::Exists(_, a) if a.is_atomic() => SimpleClass::SimplyExistential,
            Formula::Forall(_, a) if a.is_atomic() => SimpleClass::SimplyUniversal,
            _ => SimpleClass::NotSimple,
        }
    }

    pub fn is_simply_universal(&self) -> bool {
        self.classify() == SimpleClass::SimplyUniversal
    }

    /// Subformula in the sense that admits instances: the subformulas of
    /// `∀x B` and `∃x B` include those of every `B[x := t]`. Matching is
    /// syntactic up to bound-variable renaming; normalize both sides first
    /// when term equality should be modulo rewriting.
    pub fn is_subformula_of(&self, whole: &Formula) -> bool {
        subformula_search(self, whole, &[])
    }

    /// The `(∀x A, ∃x ¬A)` disjunction asserted by the restricted excluded
    /// middle axiom for the atomic body `a`.
    pub fn em1_instance(x: &str, a: &Formula) -> Formula {
        Formula::or(
            Formula::forall(x, a.clone()),
            Formula::exists(x, Formula::not(a.clone())),
        )
    }
}

fn lookup(env: &[Name], x: &str) -> Option<usize> {
    env.iter().rev().position(|y| y == x)
}

fn alpha_term(s: &Term, t: &Term, ls: &[Name], rs: &[Name]) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => match (lookup(ls, x), lookup(rs, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::Zero, Term::Zero) => true,
        (Term::Succ(a), Term::Succ(b)) => alpha_term(a, b, ls, rs),
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| alpha_term(a, b, ls, rs))
        }
        _ => false,
    }
}

fn alpha(a: &Formula, b: &Formula, ls: &mut Vec<Name>, rs: &mut Vec<Name>) -> bool {
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| alpha_term(s, t, ls, rs))
        }
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            alpha(a1, b1, ls, rs) && alpha(a2, b2, ls, rs)
        }
        (Formula::Forall(x, a1), Formula::Forall(y, b1))
        | (Formula::Exists(x, a1), Formula::Exists(y, b1)) => {
            ls.push(x.clone());
            rs.push(y.clone());
            let r = alpha(a1, b1, ls, rs);
            ls.pop();
            rs.pop();
            r
        }
        _ => false,
    }
}

fn subformula_search(part: &Formula, whole: &Formula, metas: &[Name]) -> bool {
    let mut binding = HashMap::new();
    if match_formula(whole, part, metas, &mut binding, &mut Vec::new(), &mut Vec::new()) {
        return true;
    }
    match whole {
        Formula::Atom(..) | Formula::Falsum => false,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            subformula_search(part, a, metas) || subformula_search(part, b, metas)
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let mut metas: Vec<Name> = metas.iter().filter(|m| *m != x).cloned().collect();
            metas.push(x.clone());
            subformula_search(part, a, &metas)
        }
    }
}

/// Is there an assignment to the free `metas` of `pat` making it α-equal to
/// `target`?
fn match_formula(
    pat: &Formula,
    target: &Formula,
    metas: &[Name],
    binding: &mut HashMap<Name, Term>,
    ls: &mut Vec<Name>,
    rs: &mut Vec<Name>,
) -> bool {
    match (pat, target) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(s, t)| match_term(s, t, metas, binding, ls, rs))
        }
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            match_formula(a1, b1, metas, binding, ls, rs) && match_formula(a2, b2, metas, binding, ls, rs)
        }
        (Formula::Forall(x, a1), Formula::Forall(y, b1))
        | (Formula::Exists(x, a1), Formula::Exists(y, b1)) => {
            ls.push(x.clone());
            rs.push(y.clone());
            let r = match_formula(a1, b1, metas, binding, ls, rs);
            ls.pop();
            rs.pop();
            r
        }
        _ => false,
    }
}

fn match_term(
    pat: &Term,
    target: &Term,
    metas: &[Name],
    binding: &mut HashMap<Name, Term>,
    ls: &[Name],
    rs: &[Name],
) -> bool {
    if let Term::Var(m) = pat {
        if lookup(ls, m).is_none() && metas.contains(m) {
            if target.free_vars().iter().any(|v| lookup(rs, v).is_some()) {
                return false;
            }
            return match binding.get(m) {
                Some(prev) => prev == target,
                None => {
                    binding.insert(m.clone(), target.clone());
                    true
                }
            };
        }
    }
    match (pat, target) {
        (Term::Var(_), Term::Var(_)) => alpha_term(pat, target, ls, rs),
        (Term::Zero, Term::Zero) => true,
        (Term::Succ(a), Term::Succ(b)) => match_term(a, b, metas, binding, ls, rs),
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(a, b)| match_term(a, b, metas, binding, ls, rs))
        }
        _ => false,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) => {
                write!(f, "({p}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Formula::Falsum => write!(f, "bot"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) if **b == Formula::Falsum => write!(f, "(not {a})"),
            Formula::Implies(a, b) => write!(f, "(imp {a} {b})"),
            Formula::Forall(x, a) => write!(f, "(forall {x} {a})"),
            Formula::Exists(x, a) => write!(f, "(exists {x} {a})"),
        }
    }
}
