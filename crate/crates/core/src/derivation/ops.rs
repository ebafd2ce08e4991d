use std::collections::BTreeSet;

use thiserror::Error;

use super::check::{free_term_variables, open_assumptions};
use super::{Address, Derivation, Label, Rule};
use crate::formula::Formula;
use crate::term::{fresh_name, Name, Term};
use crate::theory::Theory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraftError {
    #[error("assumption {label} at {address} is {assumed}, replacement concludes {provided}")]
    ConclusionMismatch { label: Label, address: Address, assumed: Formula, provided: Formula },
}

/// Every variable name in the derivation: free or bound in formulas, in tag
/// terms, and eigenvariables.
pub fn all_vars(d: &Derivation) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for (_, n) in d.nodes() {
        n.conclusion.all_vars(&mut out);
        for t in n.tag_terms() {
            t.collect_vars(&mut out);
        }
        match &n.rule {
            Rule::ForallI(y) | Rule::ExistsE(_, y) => {
                out.insert(y.clone());
            }
            Rule::Ind { var, motive, .. } => {
                out.insert(var.clone());
                motive.all_vars(&mut out);
            }
            Rule::Em1 { eigen, var, body, .. } => {
                out.insert(eigen.clone());
                out.insert(var.clone());
                body.all_vars(&mut out);
            }
            _ => {}
        }
    }
    out
}

/// Assumption and discharge labels.
pub fn all_labels(d: &Derivation) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    for (_, n) in d.nodes() {
        match &n.rule {
            Rule::Assumption(l) => {
                out.insert(l.clone());
            }
            r => {
                if let Some((l, _)) = r.discharge() {
                    out.insert(l.clone());
                }
            }
        }
    }
    out
}

/// `base.N` for the least `N ≥ 1` not in `avoid`. A numeric suffix already
/// on `base` is replaced rather than extended.
pub fn fresh_label(base: &Label, avoid: &BTreeSet<Label>) -> Label {
    let stem = match base.0.rsplit_once('.') {
        Some((s, n)) if !s.is_empty() && n.chars().all(|c| c.is_ascii_digit()) && !n.is_empty() => s,
        _ => base.0.as_str(),
    };
    (1..)
        .map(|n| Label(format!("{stem}.{n}")))
        .find(|l| !avoid.contains(l))
        .expect("unbounded range")
}

/// Whether `d` has an open occurrence of the assumption `label`.
pub fn uses_label(d: &Derivation, label: &Label) -> bool {
    match &d.rule {
        Rule::Assumption(l) => l == label,
        r => {
            let shadowed: &[usize] = match r.discharge() {
                Some((l, idx)) if l == label => idx,
                _ => &[],
            };
            d.premisses
                .iter()
                .enumerate()
                .any(|(i, p)| !shadowed.contains(&i) && uses_label(p, label))
        }
    }
}

/// Renames the open `old` assumptions of `d` to `new`.
fn rename_label(d: &Derivation, old: &Label, new: &Label) -> Derivation {
    match &d.rule {
        Rule::Assumption(l) if l == old => Derivation::assume(new.clone(), d.conclusion.clone()),
        r => {
            let shadowed: &[usize] = match r.discharge() {
                Some((l, idx)) if l == old => idx,
                _ => &[],
            };
            let premisses = d
                .premisses
                .iter()
                .enumerate()
                .map(|(i, p)| if shadowed.contains(&i) { p.clone() } else { rename_label(p, old, new) })
                .collect();
            Derivation::new(d.conclusion.clone(), d.rule.clone(), premisses)
        }
    }
}

fn relabel_rule(rule: &Rule, new: Label) -> Rule {
    match rule {
        Rule::OrE(_) => Rule::OrE(new),
        Rule::ImpI(_) => Rule::ImpI(new),
        Rule::ExistsE(_, y) => Rule::ExistsE(new, y.clone()),
        Rule::Ind { var, motive, main, .. } => {
            Rule::Ind { label: new, var: var.clone(), motive: motive.clone(), main: main.clone() }
        }
        Rule::Em1 { eigen, var, body, .. } => {
            Rule::Em1 { label: new, eigen: eigen.clone(), var: var.clone(), body: body.clone() }
        }
        other => other.clone(),
    }
}

/// Renames the discharge label of the root node, and its assumptions.
fn rename_discharge(d: &Derivation, new: Label) -> Derivation {
    let Some((old, idx)) = d.rule.discharge() else {
        return d.clone();
    };
    let premisses = d
        .premisses
        .iter()
        .enumerate()
        .map(|(i, p)| if idx.contains(&i) { rename_label(p, old, &new) } else { p.clone() })
        .collect();
    Derivation::new(d.conclusion.clone(), relabel_rule(&d.rule, new), premisses)
}

/// Renames the eigenvariable of the root node to `new` in its scope.
fn rename_binder(d: &Derivation, new: &Name) -> Derivation {
    let Some((y, j)) = d.rule.binder() else {
        return d.clone();
    };
    let y = y.clone();
    let v = Term::Var(new.clone());
    let mut out = d.clone();
    out.premisses[j] = subst_term(&d.premisses[j], &y, &v);
    out.rule = match &d.rule {
        Rule::ForallI(_) => Rule::ForallI(new.clone()),
        Rule::ExistsE(l, _) => Rule::ExistsE(l.clone(), new.clone()),
        Rule::Ind { label, motive, main, .. } => Rule::Ind {
            label: label.clone(),
            var: new.clone(),
            motive: motive.subst(&y, &v),
            main: main.clone(),
        },
        Rule::Em1 { label, var, body, .. } => Rule::Em1 {
            label: label.clone(),
            eigen: new.clone(),
            var: var.clone(),
            body: body.clone(),
        },
        other => other.clone(),
    };
    out
}

/// Does `x` occur free in what the root's binder scopes over?
fn scope_mentions(d: &Derivation, x: &str) -> bool {
    let Some((_, j)) = d.rule.binder() else {
        return false;
    };
    let in_tag = match &d.rule {
        Rule::Ind { motive, .. } => motive.occurs_free(x),
        _ => false,
    };
    in_tag || free_term_variables(&d.premisses[j]).contains(x)
}

/// `d[x := t]` on every formula occurrence and tag. Eigenvariables that
/// would capture a variable of `t` are renamed by priming.
pub fn subst_term(d: &Derivation, x: &str, t: &Term) -> Derivation {
    let fv_t = t.free_vars();
    let mut d = d.clone();
    let mut bound_child = None;
    if let Some((y, j)) = d.rule.binder() {
        if y == x {
            bound_child = Some(j);
        } else if fv_t.contains(y) && scope_mentions(&d, x) {
            let mut avoid = all_vars(&d);
            avoid.extend(fv_t.iter().cloned());
            avoid.insert(x.to_string());
            let fresh = fresh_name(y, &avoid);
            d = rename_binder(&d, &fresh);
        }
    }
    let rule = match &d.rule {
        Rule::ForallE(s) => Rule::ForallE(s.subst(x, t)),
        Rule::ExistsI(s) => Rule::ExistsI(s.subst(x, t)),
        Rule::Ind { label, var, motive, main } => {
            let motive = if var == x { motive.clone() } else { motive.subst(x, t) };
            Rule::Ind { label: label.clone(), var: var.clone(), motive, main: main.subst(x, t) }
        }
        Rule::Em1 { label, eigen, var, body } => {
            let (var, body) = match Formula::forall(var.clone(), body.clone()).subst(x, t) {
                Formula::Forall(v, b) => (v, *b),
                _ => unreachable!("substitution preserves the connective"),
            };
            Rule::Em1 { label: label.clone(), eigen: eigen.clone(), var, body }
        }
        other => other.clone(),
    };
    let premisses = d
        .premisses
        .iter()
        .enumerate()
        .map(|(i, p)| if bound_child == Some(i) { p.clone() } else { subst_term(p, x, t) })
        .collect();
    Derivation::new(d.conclusion.subst(x, t), rule, premisses)
}

/// Replaces every open `label` assumption of `d` by `r`. Binders and
/// discharge labels of `d` that would capture free variables or open
/// assumptions of `r` are renamed first.
pub fn graft(d: &Derivation, label: &Label, r: &Derivation, th: &Theory) -> Result<Derivation, GraftError> {
    struct Ctx<'a> {
        label: &'a Label,
        r: &'a Derivation,
        th: &'a Theory,
        r_vars: BTreeSet<Name>,
        r_labels: BTreeSet<Label>,
        avoid_vars: BTreeSet<Name>,
        avoid_labels: BTreeSet<Label>,
    }
    fn go(d: &Derivation, addr: Address, cx: &mut Ctx<'_>) -> Result<Derivation, GraftError> {
        if let Rule::Assumption(l) = &d.rule {
            if l != cx.label {
                return Ok(d.clone());
            }
            if !cx.th.formula_eq(&d.conclusion, &cx.r.conclusion) {
                return Err(GraftError::ConclusionMismatch {
                    label: l.clone(),
                    address: addr,
                    assumed: d.conclusion.clone(),
                    provided: cx.r.conclusion.clone(),
                });
            }
            return Ok(cx.r.clone());
        }
        if !uses_label(d, cx.label) {
            return Ok(d.clone());
        }
        let mut d = d.clone();
        if let Some((y, j)) = d.rule.binder() {
            if cx.r_vars.contains(y) && uses_label(&d.premisses[j], cx.label) {
                let fresh = fresh_name(y, &cx.avoid_vars);
                cx.avoid_vars.insert(fresh.clone());
                d = rename_binder(&d, &fresh);
            }
        }
        if let Some((l, _)) = d.rule.discharge() {
            if cx.r_labels.contains(l) {
                let fresh = fresh_label(l, &cx.avoid_labels);
                cx.avoid_labels.insert(fresh.clone());
                d = rename_discharge(&d, fresh);
            }
        }
        let shadowed: Vec<usize> = match d.rule.discharge() {
            Some((l, idx)) if l == cx.label => idx.to_vec(),
            _ => vec![],
        };
        let mut premisses = Vec::with_capacity(d.premisses.len());
        for (i, p) in d.premisses.iter().enumerate() {
            premisses.push(if shadowed.contains(&i) { p.clone() } else { go(p, addr.child(i), cx)? });
        }
        Ok(Derivation::new(d.conclusion, d.rule, premisses))
    }
    let mut r_vars = free_term_variables(r);
    let r_open = open_assumptions(r);
    for a in &r_open {
        r_vars.extend(a.formula.free_vars());
    }
    let mut avoid_vars = all_vars(d);
    avoid_vars.extend(all_vars(r));
    let mut avoid_labels = all_labels(d);
    avoid_labels.extend(all_labels(r));
    let mut cx = Ctx {
        label,
        r,
        th,
        r_vars,
        r_labels: r_open.into_iter().map(|a| a.label).collect(),
        avoid_vars,
        avoid_labels,
    };
    go(d, Address::root(), &mut cx)
}

/// Renames discharge labels so each is used by exactly one discharging
/// node and none coincides with an open assumption label. Duplicates get
/// `base.N` names.
pub fn freshen_labels(d: &Derivation) -> Derivation {
    fn go(d: &Derivation, seen: &mut BTreeSet<Label>, avoid: &mut BTreeSet<Label>) -> Derivation {
        let mut d = d.clone();
        if let Some((l, _)) = d.rule.discharge() {
            if seen.contains(l) {
                let fresh = fresh_label(l, avoid);
                avoid.insert(fresh.clone());
                d = rename_discharge(&d, fresh);
            }
            let l = d.rule.discharge().expect("still discharges").0.clone();
            seen.insert(l);
        }
        let premisses = d.premisses.iter().map(|p| go(p, seen, avoid)).collect();
        Derivation::new(d.conclusion, d.rule, premisses)
    }
    let mut seen: BTreeSet<Label> = open_assumptions(d).into_iter().map(|a| a.label).collect();
    let mut avoid = all_labels(d);
    go(d, &mut seen, &mut avoid)
}
