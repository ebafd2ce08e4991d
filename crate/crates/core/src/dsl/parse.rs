use std::collections::BTreeMap;

use super::sexp::{read_all, Sexp, Span};
use super::{infer, DefinitionError, Item, ParseError, ProofEntry, ProofFile};
use crate::derivation::{Address, Derivation, Label, Rule, Side};
use crate::formula::{Formula, Pred};
use crate::oracle::AtomicRule;
use crate::registry::Body;
use crate::term::{Name, Term};
use crate::theory::Theory;

/// Numerals are unary trees; larger literals are rejected.
const MAX_NUMERAL: u64 = 100_000;

/// Parses a file on top of the standard function symbols.
pub fn parse(text: &str) -> Result<ProofFile, ParseError> {
    parse_with(text, Theory::standard())
}

/// Parses a file whose definitions extend `theory`.
pub fn parse_with(text: &str, theory: Theory) -> Result<ProofFile, ParseError> {
    let mut file = ProofFile { theory, ..ProofFile::default() };
    for form in read_all(text)? {
        top_level(&mut file, &form)?;
    }
    Ok(file)
}

fn single(text: &str) -> Result<Sexp, ParseError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(ParseError::syntax(Span { line: 1, col: 1 }, "empty input")),
        _ => Err(ParseError::syntax(all[1].span(), "trailing input")),
    }
}

pub fn parse_term(text: &str, th: &Theory) -> Result<Term, ParseError> {
    Reader::new(th, &BTreeMap::new()).term(&single(text)?)
}

pub fn parse_formula(text: &str, th: &Theory) -> Result<Formula, ParseError> {
    Reader::new(th, &BTreeMap::new()).formula(&single(text)?)
}

pub fn parse_derivation(text: &str, th: &Theory) -> Result<Derivation, ParseError> {
    let mut spans = BTreeMap::new();
    Reader::new(th, &BTreeMap::new()).node(&single(text)?, Address::root(), &mut spans)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || "_'.-".contains(c))
}

fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

fn list<'a>(s: &'a Sexp, what: &str) -> Result<(&'a str, &'a [Sexp], Span), ParseError> {
    match s {
        Sexp::List(items, span) => match items.split_first() {
            Some((Sexp::Atom(head, _), rest)) => Ok((head, rest, *span)),
            _ => Err(ParseError::syntax(*span, format!("expected {what}"))),
        },
        Sexp::Atom(_, span) => Err(ParseError::syntax(*span, format!("expected {what}"))),
    }
}

fn expect_args(head: &str, args: &[Sexp], n: usize, at: Span) -> Result<(), ParseError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(ParseError::arity(at, format!("`{head}` takes {n} arguments, got {}", args.len())))
    }
}

fn ident(s: &Sexp) -> Result<&str, ParseError> {
    match s {
        Sexp::Atom(a, _) if is_ident(a) => Ok(a),
        _ => Err(ParseError::syntax(s.span(), "expected an identifier")),
    }
}

fn number(s: &Sexp) -> Result<u64, ParseError> {
    match s {
        Sexp::Atom(a, span) if is_numeral(a) => match a.parse::<u64>() {
            Ok(n) if n <= MAX_NUMERAL => Ok(n),
            _ => Err(ParseError::syntax(*span, format!("numeral larger than {MAX_NUMERAL}"))),
        },
        _ => Err(ParseError::syntax(s.span(), "expected a number")),
    }
}

fn side(s: &Sexp) -> Result<Side, ParseError> {
    number(s)
        .ok()
        .and_then(Side::from_index)
        .ok_or_else(|| ParseError::syntax(s.span(), "expected side 1 or 2"))
}

fn top_level(file: &mut ProofFile, form: &Sexp) -> Result<(), ParseError> {
    let (head, args, at) = list(form, "a top-level form")?;
    let def_err = |e: DefinitionError| ParseError::Definition { line: at.line, col: at.col, source: e };
    match head {
        "defrec" => {
            expect_args(head, args, 4, at)?;
            let name = ident(&args[0])?.to_string();
            let arity = number(&args[1])? as usize;
            let mut bodies = Vec::new();
            for (s, key) in args[2..].iter().zip(["base", "step"]) {
                let (h, b, bat) = list(s, &format!("({key} BODY)"))?;
                if h != key {
                    return Err(ParseError::syntax(bat, format!("expected ({key} BODY)")));
                }
                expect_args(h, b, 1, bat)?;
                bodies.push(body(&file.theory, &b[0])?);
            }
            let step = bodies.pop().expect("two bodies");
            let base = bodies.pop().expect("two bodies");
            file.theory.functions.register(name.clone(), arity, base, step).map_err(|e| def_err(e.into()))?;
            file.items.push(Item::Defrec(name));
        }
        "defpred" => {
            expect_args(head, args, 3, at)?;
            let name = ident(&args[0])?.to_string();
            let arity = number(&args[1])? as usize;
            let charfn = ident(&args[2])?;
            file.theory.declare_predicate(name.clone(), arity, charfn).map_err(|e| def_err(e.into()))?;
            file.items.push(Item::Defpred(name));
        }
        "formula" => {
            expect_args(head, args, 2, at)?;
            let name = ident(&args[0])?.to_string();
            if file.formulas.contains_key(&name) {
                return Err(def_err(DefinitionError::DuplicateName(name)));
            }
            let f = Reader::new(&file.theory, &file.formulas).formula(&args[1])?;
            file.formulas.insert(name.clone(), f);
            file.items.push(Item::Formula(name));
        }
        "proof" => {
            expect_args(head, args, 2, at)?;
            let name = ident(&args[0])?.to_string();
            if file.proof(&name).is_some() {
                return Err(def_err(DefinitionError::DuplicateName(name)));
            }
            let mut spans = BTreeMap::new();
            let derivation = Reader::new(&file.theory, &file.formulas).node(&args[1], Address::root(), &mut spans)?;
            file.proofs.push(ProofEntry { name: name.clone(), derivation, spans });
            file.items.push(Item::Proof(name));
        }
        other => return Err(ParseError::syntax(at, format!("unknown form `{other}`"))),
    }
    Ok(())
}

fn body(th: &Theory, s: &Sexp) -> Result<Body, ParseError> {
    match s {
        Sexp::Atom(a, _) if is_numeral(a) => Ok(Body::numeral(number(s)?)),
        Sexp::Atom(a, _) if a == "prev" => Ok(Body::RecVar),
        Sexp::Atom(a, _) if a == "rec" => Ok(Body::RecCall),
        Sexp::Atom(a, span) => Err(ParseError::unbound(*span, a.clone())),
        Sexp::List(..) => {
            let (head, args, at) = list(s, "a body")?;
            match head {
                "succ" => {
                    expect_args(head, args, 1, at)?;
                    Ok(Body::succ(body(th, &args[0])?))
                }
                "p" => {
                    expect_args(head, args, 1, at)?;
                    Ok(Body::Param(number(&args[0])? as usize))
                }
                f => {
                    let arity = th.functions.arity(f).ok_or_else(|| ParseError::unbound(at, f))?;
                    expect_args(f, args, arity, at)?;
                    let args = args.iter().map(|a| body(th, a)).collect::<Result<_, _>>()?;
                    Ok(Body::App(f.to_string(), args))
                }
            }
        }
    }
}

struct Reader<'a> {
    th: &'a Theory,
    formulas: &'a BTreeMap<Name, Formula>,
}

impl<'a> Reader<'a> {
    fn new(th: &'a Theory, formulas: &'a BTreeMap<Name, Formula>) -> Self {
        Reader { th, formulas }
    }

    fn term(&self, s: &Sexp) -> Result<Term, ParseError> {
        match s {
            Sexp::Atom(a, _) if is_numeral(a) => Ok(Term::numeral(number(s)?)),
            Sexp::Atom(a, _) if is_ident(a) => Ok(Term::var(a.clone())),
            Sexp::Atom(_, span) => Err(ParseError::syntax(*span, "expected a term")),
            Sexp::List(..) => {
                let (head, args, at) = list(s, "a term")?;
                if head == "succ" {
                    expect_args(head, args, 1, at)?;
                    return Ok(Term::succ(self.term(&args[0])?));
                }
                let arity = self.th.functions.arity(head).ok_or_else(|| ParseError::unbound(at, head))?;
                expect_args(head, args, arity, at)?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?;
                Ok(Term::app(head, args))
            }
        }
    }

    fn formula(&self, s: &Sexp) -> Result<Formula, ParseError> {
        if let Sexp::Atom(a, span) = s {
            if a == "bot" {
                return Ok(Formula::Falsum);
            }
            return self.formulas.get(a.as_str()).cloned().ok_or_else(|| ParseError::unbound(*span, a.clone()));
        }
        let (head, args, at) = list(s, "a formula")?;
        let two = |f: fn(Formula, Formula) -> Formula| -> Result<Formula, ParseError> {
            expect_args(head, args, 2, at)?;
            Ok(f(self.formula(&args[0])?, self.formula(&args[1])?))
        };
        match head {
            "=" => {
                expect_args(head, args, 2, at)?;
                Ok(Formula::eq(self.term(&args[0])?, self.term(&args[1])?))
            }
            "and" => two(Formula::and),
            "or" => two(Formula::or),
            "imp" => two(Formula::implies),
            "not" => {
                expect_args(head, args, 1, at)?;
                Ok(Formula::not(self.formula(&args[0])?))
            }
            "forall" | "exists" => {
                expect_args(head, args, 2, at)?;
                let x = ident(&args[0])?;
                let body = self.formula(&args[1])?;
                Ok(if head == "forall" { Formula::forall(x, body) } else { Formula::exists(x, body) })
            }
            p => {
                let def = self.th.predicate(p).ok_or_else(|| ParseError::unbound(at, p))?;
                expect_args(p, args, def.arity, at)?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?;
                Ok(Formula::Atom(Pred::Named(p.to_string()), args))
            }
        }
    }

    fn node(&self, s: &Sexp, addr: Address, spans: &mut BTreeMap<Address, Span>) -> Result<Derivation, ParseError> {
        let (head, args, at) = list(s, "a derivation node")?;
        if head == ":" {
            expect_args(head, args, 2, at)?;
            let conclusion = self.formula(&args[0])?;
            let mut d = self.node(&args[1], addr, spans)?;
            d.conclusion = conclusion;
            return Ok(d);
        }
        spans.insert(addr.clone(), at);
        let n = |k: usize| expect_args(head, args, k, at);
        let label = |s: &Sexp| ident(s).map(Label::new);
        let mut kids: Vec<&Sexp> = Vec::new();
        let mut explicit = None;
        let rule = match head {
            "assume" => {
                n(2)?;
                explicit = Some(self.formula(&args[1])?);
                Rule::Assumption(label(&args[0])?)
            }
            "atom-i" => {
                n(1)?;
                explicit = Some(self.formula(&args[0])?);
                Rule::Atomic(AtomicRule::AtomI)
            }
            "atom-e" | "sym" | "succ-not-zero" | "succ-inj" => {
                n(1)?;
                kids.push(&args[0]);
                Rule::Atomic(match head {
                    "atom-e" => AtomicRule::AtomE,
                    "sym" => AtomicRule::EqSym,
                    "succ-not-zero" => AtomicRule::SuccNotZero,
                    _ => AtomicRule::SuccInjective,
                })
            }
            "refl" => {
                n(1)?;
                let t = self.term(&args[0])?;
                explicit = Some(Formula::eq(t.clone(), t));
                Rule::Atomic(AtomicRule::EqRefl)
            }
            "trans" => {
                n(2)?;
                kids.extend(&args[..]);
                Rule::Atomic(AtomicRule::EqTrans)
            }
            "compat" => {
                let f = args.first().ok_or_else(|| ParseError::arity(at, "`compat` needs a function symbol"))?;
                let f = ident(f)?;
                let arity = if f == "succ" {
                    1
                } else {
                    self.th.functions.arity(f).ok_or_else(|| ParseError::unbound(args[0].span(), f))?
                };
                n(arity + 1)?;
                kids.extend(&args[1..]);
                Rule::Atomic(AtomicRule::EqCompat(f.to_string()))
            }
            "efq" => {
                n(2)?;
                explicit = Some(self.formula(&args[0])?);
                kids.push(&args[1]);
                Rule::Atomic(AtomicRule::EfqAtomic)
            }
            "and-i" => {
                n(2)?;
                kids.extend(&args[..]);
                Rule::AndI
            }
            "and-e" => {
                n(2)?;
                kids.push(&args[1]);
                Rule::AndE(side(&args[0])?)
            }
            "or-i" => {
                n(3)?;
                explicit = Some(self.formula(&args[1])?);
                kids.push(&args[2]);
                Rule::OrI(side(&args[0])?)
            }
            "or-e" => {
                n(4)?;
                kids.extend(&args[1..]);
                Rule::OrE(label(&args[0])?)
            }
            "imp-i" => {
                n(3)?;
                explicit = Some(self.formula(&args[1])?);
                kids.push(&args[2]);
                Rule::ImpI(label(&args[0])?)
            }
            "imp-e" => {
                n(2)?;
                kids.extend(&args[..]);
                Rule::ImpE
            }
            "forall-i" => {
                n(2)?;
                kids.push(&args[1]);
                Rule::ForallI(ident(&args[0])?.to_string())
            }
            "forall-e" => {
                n(2)?;
                kids.push(&args[1]);
                Rule::ForallE(self.term(&args[0])?)
            }
            "exists-i" => {
                n(3)?;
                explicit = Some(self.formula(&args[1])?);
                kids.push(&args[2]);
                Rule::ExistsI(self.term(&args[0])?)
            }
            "exists-e" => {
                n(4)?;
                kids.extend(&args[2..]);
                Rule::ExistsE(label(&args[0])?, ident(&args[1])?.to_string())
            }
            "ind" => {
                n(6)?;
                kids.extend(&args[4..]);
                Rule::Ind {
                    label: label(&args[0])?,
                    var: ident(&args[1])?.to_string(),
                    motive: self.formula(&args[2])?,
                    main: self.term(&args[3])?,
                }
            }
            "em1" => {
                n(6)?;
                kids.extend(&args[4..]);
                Rule::Em1 {
                    label: label(&args[0])?,
                    eigen: ident(&args[1])?.to_string(),
                    var: ident(&args[2])?.to_string(),
                    body: self.formula(&args[3])?,
                }
            }
            "em1-axiom" => {
                n(2)?;
                let x = ident(&args[0])?;
                explicit = Some(Formula::forall(x, self.formula(&args[1])?));
                Rule::Em1Axiom
            }
            other => return Err(ParseError::syntax(at, format!("unknown rule `{other}`"))),
        };
        let premisses = kids
            .iter()
            .enumerate()
            .map(|(i, k)| self.node(k, addr.child(i), spans))
            .collect::<Result<Vec<_>, _>>()?;
        let concls: Vec<&Formula> = premisses.iter().map(|p| &p.conclusion).collect();
        let conclusion = infer(&rule, explicit.as_ref(), &concls);
        Ok(Derivation::new(conclusion, rule, premisses))
    }
}
