//! Primitive-recursive function symbols and rewriting of terms to normal form.
//!
//! Every registered symbol `f` of arity `n + 1` is defined by recursion on its
//! first argument:
//!
//! ```text
//! f(0,    x1..xn) -> base(x1..xn)
//! f(S(v), x1..xn) -> step(v, f(v, x1..xn), x1..xn)
//! ```
//!
//! Bodies may only mention symbols registered earlier, so the rewrite system
//! is a primitive-recursive one and terminates.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{Name, Term};

/// Right-hand side of a defining equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Zero,
    Succ(Box<Body>),
    /// The `i`-th non-recursive parameter, counted from 1.
    Param(usize),
    /// The predecessor `v` in `f(S(v), ..)`. Only legal in the step body.
    RecVar,
    /// The recursive call `f(v, x1..xn)`. Only legal in the step body.
    RecCall,
    App(Name, Vec<Body>),
}

impl Body {
    pub fn succ(b: Body) -> Body {
        Body::Succ(Box::new(b))
    }

    pub fn numeral(n: u64) -> Body {
        (0..n).fold(Body::Zero, |b, _| Body::succ(b))
    }

    fn numeral_value(&self) -> Option<u64> {
        match self {
            Body::Zero => Some(0),
            Body::Succ(b) => b.numeral_value().map(|n| n + 1),
            _ => None,
        }
    }
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.numeral_value() {
            return write!(f, "{n}");
        }
        match self {
            Body::Zero => write!(f, "0"),
            Body::Succ(b) => write!(f, "(succ {b})"),
            Body::Param(i) => write!(f, "(p {i})"),
            Body::RecVar => write!(f, "prev"),
            Body::RecCall => write!(f, "rec"),
            Body::App(g, args) => {
                write!(f, "({g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: Name,
    pub arity: usize,
    pub base: Body,
    pub step: Body,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("function symbol `{0}` is already registered")]
    DuplicateSymbol(Name),
    #[error("ill-scoped body for `{symbol}`: {reason}")]
    IllScopedBody { symbol: Name, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("`{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch { symbol: Name, expected: usize, found: usize },
}

/// Order in which redexes are contracted. Both reach the same normal form;
/// [`Strategy::Outermost`] exists to cross-check [`Strategy::Innermost`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Innermost,
    Outermost,
}

/// Symbols reserved by the term syntax.
pub const RESERVED: &[&str] = &["succ", "p", "prev", "rec", "0"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctionRegistry {
    defs: BTreeMap<Name, FunctionDef>,
    order: Vec<Name>,
}

impl FunctionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `pred`, `add`, `mul`, `monus`, `sub`, `sg` and `eq`.
    ///
    /// `monus(y, x)` is `x ∸ y` (recursion on the subtrahend), `sub(x, y)` is
    /// `x ∸ y`, `sg` maps zero to 0 and everything else to 1, and `eq` is the
    /// characteristic function of equality (0 iff the arguments agree).
    pub fn standard() -> Self {
        use Body::*;
        let p1 = || Param(1);
        let app = |f: &str, args: Vec<Body>| App(f.to_string(), args);
        let mut reg = FunctionRegistry::new();
        let defs = [
            ("pred", 1, Zero, RecVar),
            ("add", 2, p1(), Body::succ(RecCall)),
            ("mul", 2, Zero, app("add", vec![p1(), RecCall])),
            ("monus", 2, p1(), app("pred", vec![RecCall])),
            ("sub", 2, Zero, app("monus", vec![p1(), Body::succ(RecVar)])),
            ("sg", 1, Zero, Body::numeral(1)),
            (
                "eq",
                2,
                app(
                    "sg",
                    vec![app(
                        "add",
                        vec![app("sub", vec![Zero, p1()]), app("sub", vec![p1(), Zero])],
                    )],
                ),
                app(
                    "sg",
                    vec![app(
                        "add",
                        vec![
                            app("sub", vec![Body::succ(RecVar), p1()]),
                            app("sub", vec![p1(), Body::succ(RecVar)]),
                        ],
                    )],
                ),
            ),
        ];
        for (name, arity, base, step) in defs {
            reg.register(name, arity, base, step)
                .expect("standard definitions are well-scoped");
        }
        reg
    }

    pub fn register(
        &mut self,
        name: impl Into<Name>,
        arity: usize,
        base: Body,
        step: Body,
    ) -> Result<(), RegistryError> {
        let name = name.into();
        if self.defs.contains_key(&name) {
            return Err(RegistryError::DuplicateSymbol(name));
        }
        let ill = |reason: String| RegistryError::IllScopedBody { symbol: name.clone(), reason };
        if RESERVED.contains(&name.as_str()) {
            return Err(ill(format!("`{name}` is a reserved word")));
        }
        if arity == 0 {
            return Err(ill("arity must be at least 1 (recursion argument)".into()));
        }
        self.check_body(&base, arity - 1, false).map_err(&ill)?;
        self.check_body(&step, arity - 1, true).map_err(&ill)?;
        self.order.push(name.clone());
        self.defs.insert(name.clone(), FunctionDef { name, arity, base, step });
        Ok(())
    }

    fn check_body(&self, body: &Body, params: usize, in_step: bool) -> Result<(), String> {
        match body {
            Body::Zero => Ok(()),
            Body::Succ(b) => self.check_body(b, params, in_step),
            Body::Param(i) if *i >= 1 && *i <= params => Ok(()),
            Body::Param(i) => Err(format!("parameter {i} out of range 1..={params}")),
            Body::RecVar | Body::RecCall if in_step => Ok(()),
            Body::RecVar => Err("`prev` is only available in the step body".into()),
            Body::RecCall => Err("`rec` is only available in the step body".into()),
            Body::App(g, args) => {
                let def = self.defs.get(g).ok_or_else(|| format!("unregistered symbol `{g}`"))?;
                if def.arity != args.len() {
                    return Err(format!(
                        "`{g}` expects {} arguments, got {}",
                        def.arity,
                        args.len()
                    ));
                }
                args.iter().try_for_each(|a| self.check_body(a, params, in_step))
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&FunctionDef> {
        self.defs.get(name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.defs.get(name).map(|d| d.arity)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    /// Definitions in registration order.
    pub fn definitions(&self) -> impl Iterator<Item = &FunctionDef> {
        self.order.iter().map(|n| &self.defs[n])
    }

    /// Every symbol registered and applied at its declared arity.
    pub fn check_term(&self, t: &Term) -> Result<(), TermError> {
        match t {
            Term::Var(_) | Term::Zero => Ok(()),
            Term::Succ(a) => self.check_term(a),
            Term::App(f, args) => {
                let def = self.defs.get(f).ok_or_else(|| TermError::UnknownSymbol(f.clone()))?;
                if def.arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: f.clone(),
                        expected: def.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// Normal form under the innermost strategy.
    pub fn normalize(&self, t: &Term) -> Result<Term, TermError> {
        self.check_term(t)?;
        Ok(self.eval(t))
    }

    pub fn normalize_with(&self, t: &Term, strategy: Strategy) -> Result<Term, TermError> {
        self.check_term(t)?;
        match strategy {
            Strategy::Innermost => Ok(self.eval(t)),
            Strategy::Outermost => {
                let mut cur = t.clone();
                while let Some(next) = self.outermost_step(&cur) {
                    cur = next;
                }
                Ok(cur)
            }
        }
    }

    pub fn is_normal(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) | Term::Zero => true,
            Term::Succ(a) => self.is_normal(a),
            Term::App(_, args) => {
                args.iter().all(|a| self.is_normal(a))
                    && !matches!(args.first(), Some(Term::Zero | Term::Succ(_)))
            }
        }
    }

    // Callers have validated the term with `check_term`.
    fn eval(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) | Term::Zero => t.clone(),
            Term::Succ(a) => Term::succ(self.eval(a)),
            Term::App(f, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.eval(a)).collect();
                self.apply(f, args)
            }
        }
    }

    /// Applies `f` to arguments already in normal form.
    fn apply(&self, f: &str, args: Vec<Term>) -> Term {
        let def = &self.defs[f];
        match &args[0] {
            Term::Zero => self.eval_body(&def.base, def, &args, None),
            Term::Succ(v) => {
                let v = (**v).clone();
                self.eval_body(&def.step, def, &args, Some(&v))
            }
            _ => Term::App(f.to_string(), args),
        }
    }

    fn eval_body(&self, body: &Body, def: &FunctionDef, args: &[Term], pred: Option<&Term>) -> Term {
        match body {
            Body::Zero => Term::Zero,
            Body::Succ(b) => Term::succ(self.eval_body(b, def, args, pred)),
            Body::Param(i) => args[*i].clone(),
            Body::RecVar => pred.expect("step body").clone(),
            Body::RecCall => {
                let mut call = Vec::with_capacity(args.len());
                call.push(pred.expect("step body").clone());
                call.extend_from_slice(&args[1..]);
                self.apply(&def.name, call)
            }
            Body::App(g, bs) => {
                let vals = bs.iter().map(|b| self.eval_body(b, def, args, pred)).collect();
                self.apply(g, vals)
            }
        }
    }

    /// Contracts the leftmost-outermost redex, if any.
    fn outermost_step(&self, t: &Term) -> Option<Term> {
        match t {
            Term::Var(_) | Term::Zero => None,
            Term::Succ(a) => self.outermost_step(a).map(Term::succ),
            Term::App(f, args) => {
                let def = &self.defs[f];
                match &args[0] {
                    Term::Zero => return Some(instantiate(&def.base, def, args, None)),
                    Term::Succ(v) => return Some(instantiate(&def.step, def, args, Some(v))),
                    _ => {}
                }
                for (i, a) in args.iter().enumerate() {
                    if let Some(a2) = self.outermost_step(a) {
                        let mut new_args = args.clone();
                        new_args[i] = a2;
                        return Some(Term::App(f.clone(), new_args));
                    }
                }
                None
            }
        }
    }
}

/// Plugs unevaluated arguments into a body.
fn instantiate(body: &Body, def: &FunctionDef, args: &[Term], pred: Option<&Term>) -> Term {
    match body {
        Body::Zero => Term::Zero,
        Body::Succ(b) => Term::succ(instantiate(b, def, args, pred)),
        Body::Param(i) => args[*i].clone(),
        Body::RecVar => pred.expect("step body").clone(),
        Body::RecCall => {
            let mut call = vec![pred.expect("step body").clone()];
            call.extend_from_slice(&args[1..]);
            Term::App(def.name.clone(), call)
        }
        Body::App(g, bs) => {
            Term::App(g.clone(), bs.iter().map(|b| instantiate(b, def, args, pred)).collect())
        }
    }
}
