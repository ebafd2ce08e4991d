use std::fmt::Write;

use super::{explicit_arg, infer, Item, ProofFile};
use crate::derivation::{Derivation, Rule};
use crate::formula::{Formula, Pred};
use crate::oracle::AtomicRule;
use crate::term::Term;

/// Renders a whole file in declaration order. Named formulas are expanded
/// at their use sites, so the output re-parses to the same derivations.
pub fn serialize(pf: &ProofFile) -> String {
    let mut out = Vec::new();
    for item in &pf.items {
        match item {
            Item::Defrec(f) => {
                if let Some(def) = pf.theory.functions.get(f) {
                    out.push(format!("(defrec {} {} (base {}) (step {}))", def.name, def.arity, def.base, def.step));
                }
            }
            Item::Defpred(p) => {
                if let Some(def) = pf.theory.predicate(p) {
                    out.push(format!("(defpred {} {} {})", def.name, def.arity, def.charfn));
                }
            }
            Item::Formula(name) => {
                if let Some(f) = pf.formulas.get(name) {
                    out.push(format!("(formula {name} {f})"));
                }
            }
            Item::Proof(name) => {
                if let Some(p) = pf.proof(name) {
                    let mut s = format!("(proof {name}\n  ");
                    write_node(&p.derivation, 2, &mut s);
                    s.push(')');
                    out.push(s);
                }
            }
        }
    }
    if out.is_empty() {
        return String::new();
    }
    let mut text = out.join("\n\n");
    text.push('\n');
    text
}

/// One node per line, premisses indented under their conclusion. A node
/// carries a `(: F ..)` annotation only when its conclusion differs from
/// the one the parser would infer.
pub fn print_derivation(d: &Derivation) -> String {
    let mut s = String::new();
    write_node(d, 0, &mut s);
    s
}

fn write_node(d: &Derivation, indent: usize, out: &mut String) {
    let explicit = explicit_arg(d);
    let shown = explicit.clone().unwrap_or_else(|| placeholder(&d.rule));
    let concls: Vec<&Formula> = d.premisses.iter().map(|p| &p.conclusion).collect();
    let annotate = infer(&d.rule, Some(&shown), &concls) != d.conclusion;
    if annotate {
        let _ = write!(out, "(: {} ", d.conclusion);
    }
    out.push('(');
    out.push_str(&header(&d.rule, &shown));
    for p in &d.premisses {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        write_node(p, indent + 2, out);
    }
    out.push(')');
    if annotate {
        out.push(')');
    }
}

/// A stand-in for the explicit argument when the conclusion has the wrong
/// shape to supply one; the annotation then carries the real conclusion.
fn placeholder(rule: &Rule) -> Formula {
    match rule {
        Rule::Atomic(AtomicRule::EqRefl) => Formula::eq(Term::Zero, Term::Zero),
        Rule::Em1Axiom => Formula::forall("x", Formula::Falsum),
        _ => Formula::Falsum,
    }
}

fn header(rule: &Rule, explicit: &Formula) -> String {
    match rule {
        Rule::Assumption(l) => format!("assume {l} {explicit}"),
        Rule::Atomic(r) => match r {
            AtomicRule::AtomI | AtomicRule::EfqAtomic => format!("{} {explicit}", r.name()),
            AtomicRule::EqRefl => match explicit {
                Formula::Atom(Pred::Eq, args) => format!("refl {}", args[0]),
                _ => "refl 0".into(),
            },
            AtomicRule::EqCompat(f) => format!("compat {f}"),
            _ => r.name().to_string(),
        },
        Rule::AndI => "and-i".into(),
        Rule::AndE(s) => format!("and-e {}", s.index()),
        Rule::OrI(s) => format!("or-i {} {explicit}", s.index()),
        Rule::OrE(l) => format!("or-e {l}"),
        Rule::ImpI(l) => format!("imp-i {l} {explicit}"),
        Rule::ImpE => "imp-e".into(),
        Rule::ForallI(y) => format!("forall-i {y}"),
        Rule::ForallE(t) => format!("forall-e {t}"),
        Rule::ExistsI(t) => format!("exists-i {t} {explicit}"),
        Rule::ExistsE(l, y) => format!("exists-e {l} {y}"),
        Rule::Ind { label, var, motive, main } => format!("ind {label} {var} {motive} {main}"),
        Rule::Em1 { label, eigen, var, body } => format!("em1 {label} {eigen} {var} {body}"),
        Rule::Em1Axiom => match explicit {
            Formula::Forall(x, a) => format!("em1-axiom {x} {a}"),
            _ => "em1-axiom x bot".into(),
        },
    }
}
