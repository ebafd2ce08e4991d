//! Shared fixtures for the integration and acceptance tests: corpus loading,
//! a random derivation generator, and independent checkers for the
//! structural lemmas.
#![allow(dead_code)]

use std::path::PathBuf;

use haem::branch::{find_head_cut, open_normal_form, principal_branches};
use haem::derivation::{check, free_term_variables, open_assumptions};
use haem::dsl::{parse, ProofFile};
use haem::reduce::{normalize_with, Config, Normalization};
use haem::{Derivation, Formula, Rule, SimpleClass, Theory};

pub mod gen;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every valid corpus file, parsed, in name order.
pub fn corpus_files() -> Vec<(String, ProofFile)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "haem"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable corpus file");
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let pf = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, pf)
        })
        .collect()
}

pub struct Named {
    pub name: String,
    pub derivation: Derivation,
    pub theory: Theory,
}

pub fn corpus_proofs() -> Vec<Named> {
    corpus_files()
        .into_iter()
        .flat_map(|(_, pf)| {
            let th = pf.theory.clone();
            pf.proofs
                .into_iter()
                .map(move |p| Named { name: p.name, derivation: p.derivation, theory: th.clone() })
        })
        .collect()
}

/// True when every open assumption of `next` is, up to normalization and
/// bound-variable renaming, an open assumption of `prev`.
fn open_within(next: &Derivation, prev: &Derivation, th: &Theory) -> bool {
    let before = open_assumptions(prev);
    open_assumptions(next)
        .iter()
        .all(|a| before.iter().any(|b| th.formula_eq(&a.formula, &b.formula)))
}

/// Per-step invariants of a reduction `prev ~> next` from `start`.
#[derive(Debug, Default, Clone, Copy)]
pub struct StepStats {
    pub steps: usize,
    pub subject_failures: usize,
    pub ftv_growth: usize,
    pub open_growth: usize,
}

impl StepStats {
    pub fn clean(&self) -> bool {
        self.subject_failures == 0 && self.ftv_growth == 0 && self.open_growth == 0
    }

    pub fn add(&mut self, o: StepStats) {
        self.steps += o.steps;
        self.subject_failures += o.subject_failures;
        self.ftv_growth += o.ftv_growth;
        self.open_growth += o.open_growth;
    }
}

/// Normalizes `d`, checking subject reduction, free-term-variable
/// non-growth and open-assumption non-growth at every step. Every
/// intermediate derivation is passed to `visit`.
pub fn normalize_checked(
    d: &Derivation,
    th: &Theory,
    cfg: Config,
    failures: &mut Vec<String>,
    mut visit: impl FnMut(&Derivation),
) -> (Normalization, StepStats) {
    let mut stats = StepStats::default();
    let mut prev = d.clone();
    visit(d);
    let n = normalize_with(d, th, cfg, |next, step| {
        stats.steps += 1;
        if let Err(e) = check(next, th) {
            stats.subject_failures += 1;
            failures.push(format!("{step}: check failed: {e}"));
        } else if !th.formula_eq(&next.conclusion, &d.conclusion) {
            stats.subject_failures += 1;
            failures.push(format!("{step}: conclusion changed to {}", next.conclusion));
        }
        if !free_term_variables(next).is_subset(&free_term_variables(&prev)) {
            stats.ftv_growth += 1;
            failures.push(format!("{step}: free term variables grew"));
        }
        if !open_within(next, &prev, th) {
            stats.open_growth += 1;
            failures.push(format!("{step}: open assumptions grew"));
        }
        visit(next);
        prev = next.clone();
    })
    .expect("reduction succeeds on checked input");
    (n, stats)
}

/// Lemma checks on one derivation's principal branches in open normal
/// form. Returns (branches examined, counterexamples).
pub fn lemma1(d: &Derivation, th: &Theory) -> (usize, Vec<String>) {
    let mut seen = 0;
    let mut bad = Vec::new();
    let end = th.normalize_formula(&d.conclusion);
    let concrete = free_term_variables(d).is_empty() && end.classify().is_simple();
    for b in principal_branches(d) {
        let Some(onf) = open_normal_form(d, &b) else { continue };
        seen += 1;
        let formulas: Vec<Formula> =
            b.occs.iter().map(|a| th.normalize_formula(&d.node_at(a).unwrap().conclusion)).collect();
        let n = formulas.len() - 1;
        for (i, f) in formulas.iter().enumerate().skip(onf.n_e + onf.n_a + 1) {
            if f.is_atomic() || !f.is_subformula_of(&end) {
                bad.push(format!("branch {b}: occurrence {i} ({f}) is not a non-atomic subformula of {end}"));
            }
        }
        if concrete {
            for i in 0..n {
                if formulas[i].is_simply_universal() {
                    let next = &formulas[i + 1];
                    if !(next.is_atomic() && next.is_closed()) {
                        bad.push(format!("branch {b}: {} is followed by {next}", formulas[i]));
                    }
                }
            }
        }
    }
    (seen, bad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Residual {
    FreeTermVariable,
    OpenNormalForm,
    EndsWithIntroduction,
    Atomic,
    Em1NonSimple,
}

/// Which cases of the structure lemma a normal derivation satisfies.
/// `Err` when the derivation still has a head-cut or a non-normal term
/// on a principal branch, or satisfies none of the cases.
pub fn residual_cases(d: &Derivation, th: &Theory) -> Result<Vec<Residual>, String> {
    for b in principal_branches(d) {
        if let Some(c) = find_head_cut(d, &b, th, false) {
            return Err(format!("head-cut {:?} at {}", c.kind, c.address));
        }
        for a in &b.occs {
            let node = d.node_at(a).unwrap();
            let terms_normal = node.tag_terms().iter().all(|t| th.is_normal_term(t))
                && th.is_normal_formula(&node.conclusion);
            if !terms_normal {
                return Err(format!("non-normal term at {a}"));
            }
        }
    }
    let mut cases = Vec::new();
    if !free_term_variables(d).is_empty() {
        cases.push(Residual::FreeTermVariable);
    }
    if principal_branches(d).iter().any(|b| open_normal_form(d, b).is_some()) {
        cases.push(Residual::OpenNormalForm);
    }
    if d.rule.is_introduction() {
        cases.push(Residual::EndsWithIntroduction);
    }
    if d.is_atomic_only() {
        cases.push(Residual::Atomic);
    }
    if matches!(d.rule, Rule::Em1 { .. }) && !d.conclusion.classify().is_simple() {
        cases.push(Residual::Em1NonSimple);
    }
    if cases.is_empty() {
        Err("no case of the structure lemma applies".into())
    } else {
        Ok(cases)
    }
}

/// Closed, without free term variables, with a simple conclusion.
pub fn meets_extraction_hypotheses(d: &Derivation) -> bool {
    open_assumptions(d).is_empty()
        && free_term_variables(d).is_empty()
        && d.conclusion.classify() != SimpleClass::NotSimple
}

/// Native evaluation of closed terms over the standard symbols, written
/// independently of the rewriting engine.
pub fn eval(t: &haem::Term) -> Option<u64> {
    use haem::Term;
    Some(match t {
        Term::Zero => 0,
        Term::Succ(s) => eval(s)? + 1,
        Term::Var(_) => return None,
        Term::App(f, args) => {
            let v: Vec<u64> = args.iter().map(eval).collect::<Option<_>>()?;
            match (f.as_str(), v.as_slice()) {
                ("add", [a, b]) => a + b,
                ("mul", [a, b]) => a * b,
                ("pred", [a]) => a.saturating_sub(1),
                ("sub", [a, b]) => a.saturating_sub(*b),
                ("monus", [a, b]) => b.saturating_sub(*a),
                ("sg", [a]) => u64::from(*a != 0),
                ("eq", [a, b]) => u64::from(a != b),
                _ => return None,
            }
        }
    })
}
