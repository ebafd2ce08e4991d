//! First-order arithmetic terms.

use std::collections::BTreeSet;
use std::fmt;

/// A variable or discharge-free identifier.
pub type Name = String;

/// An arithmetic term: a variable, zero, a successor, or a registered
/// function symbol applied to arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    Zero,
    Succ(Box<Term>),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn app(f: impl Into<Name>, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    /// The numeral `S^n(0)`.
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::succ(t);
        }
        t
    }

    /// `Some(n)` iff the term is literally `S^n(0)`.
    pub fn numeral_value(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    cur = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Zero => true,
            Term::Succ(t) => t.is_closed(),
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Zero => {}
            Term::Succ(t) => t.collect_vars(out),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn occurs(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Zero => false,
            Term::Succ(t) => t.occurs(x),
            Term::App(_, args) => args.iter().any(|a| a.occurs(x)),
        }
    }

    /// `self[x := t]`. Terms have no binders, so this is plain replacement.
    pub fn subst(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => t.clone(),
            Term::Var(_) | Term::Zero => self.clone(),
            Term::Succ(a) => Term::succ(a.subst(x, t)),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst(x, t)).collect()),
        }
    }

    /// Function symbols used anywhere in the term.
    pub fn symbols(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(_) | Term::Zero => {}
            Term::Succ(t) => t.symbols(out),
            Term::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.symbols(out));
            }
        }
    }
}

/// Prints in the proof-file syntax: numerals as decimals, `(succ t)`,
/// `(f a b)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.numeral_value() {
            return write!(f, "{n}");
        }
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Zero => write!(f, "0"),
            Term::Succ(t) => write!(f, "(succ {t})"),
            Term::App(g, args) => {
                write!(f, "({g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Appends primes to `base` until the name avoids every element of `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeral_roundtrip() {
        assert_eq!(Term::Zero.numeral_value(), Some(0));
        assert_eq!(Term::numeral(2), Term::succ(Term::succ(Term::Zero)));
        assert_eq!(Term::numeral(2).numeral_value(), Some(2));
        assert_eq!(Term::var("x").numeral_value(), None);
        assert_eq!(Term::succ(Term::var("x")).numeral_value(), None);
    }

    #[test]
    fn display_uses_decimal_numerals() {
        let t = Term::app("add", vec![Term::numeral(3), Term::succ(Term::var("x"))]);
        assert_eq!(t.to_string(), "(add 3 (succ x))");
    }

    #[test]
    fn fresh_names_prime() {
        let avoid: BTreeSet<Name> = ["y'".to_string()].into_iter().collect();
        assert_eq!(fresh_name("y", &avoid), "y''");
        assert_eq!(fresh_name("z", &avoid), "z'");
    }
}
