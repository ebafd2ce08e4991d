mod common;

use std::collections::BTreeMap;

use common::gen::derivations;
use common::{corpus_proofs, lemma1, meets_extraction_hypotheses, normalize_checked, residual_cases, Residual};
use haem::dsl::print_derivation;
use haem::reduce::{Config, Status};
use haem::{Derivation, Theory};

/// Every subderivation of every derivation along each normalization.
fn all_stages(ds: &[(Derivation, Theory)]) -> Vec<(Derivation, Theory)> {
    let mut out = Vec::new();
    for (d, th) in ds {
        let mut failures = Vec::new();
        normalize_checked(d, th, Config::default(), &mut failures, |stage| {
            for (_, sub) in stage.nodes() {
                out.push((sub.clone(), th.clone()));
            }
        });
        assert!(failures.is_empty(), "{failures:?}");
    }
    out
}

fn sources() -> Vec<(Derivation, Theory)> {
    let mut ds: Vec<(Derivation, Theory)> = corpus_proofs().into_iter().map(|p| (p.derivation, p.theory)).collect();
    let th = Theory::standard();
    ds.extend(derivations(11, 300, 7).into_iter().map(|d| (d, th.clone())));
    ds
}

#[test]
fn open_normal_form_branches_satisfy_the_subformula_lemma() {
    let mut seen = 0;
    let mut concrete = 0;
    for (d, th) in all_stages(&sources()) {
        let (n, bad) = lemma1(&d, &th);
        seen += n;
        if n > 0 && d.conclusion.classify().is_simple() && haem::derivation::free_term_variables(&d).is_empty() {
            concrete += n;
        }
        assert!(bad.is_empty(), "{}\n{}", bad.join("\n"), print_derivation(&d));
    }
    assert!(seen > 100, "only {seen} branches in open normal form");
    assert!(concrete > 10, "only {concrete} branches with a simple end formula and no free term variables");
}

#[test]
fn normal_forms_fall_into_a_residual_case() {
    let mut tally: BTreeMap<Residual, usize> = BTreeMap::new();
    for (d, th) in sources() {
        let mut failures = Vec::new();
        let (n, _) = normalize_checked(&d, &th, Config::default(), &mut failures, |_| {});
        assert_eq!(n.status, Status::Normal);
        let cases = residual_cases(&n.derivation, &th)
            .unwrap_or_else(|e| panic!("{e}\n{}", print_derivation(&n.derivation)));
        if meets_extraction_hypotheses(&n.derivation) {
            assert!(
                cases == [Residual::EndsWithIntroduction] || cases == [Residual::Atomic],
                "{cases:?}\n{}",
                print_derivation(&n.derivation)
            );
        }
        *tally.entry(cases[0]).or_default() += 1;
    }
    for r in [Residual::OpenNormalForm, Residual::EndsWithIntroduction, Residual::Atomic] {
        assert!(tally.contains_key(&r), "{r:?} never observed: {tally:?}");
    }
}

#[test]
fn closed_corpus_normal_forms_end_with_introductions() {
    for p in corpus_proofs() {
        let mut failures = Vec::new();
        let (n, _) = normalize_checked(&p.derivation, &p.theory, Config::default(), &mut failures, |_| {});
        let cases = residual_cases(&n.derivation, &p.theory).unwrap();
        let expected = if p.derivation.conclusion.is_atomic() { Residual::Atomic } else { Residual::EndsWithIntroduction };
        assert_eq!(cases, [expected], "{}", p.name);
    }
}
