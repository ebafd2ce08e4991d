mod common;

use std::collections::BTreeMap;

use common::gen::{derivations, Gen};
use common::{normalize_checked, StepStats};
use haem::derivation::check;
use haem::dsl::{parse_derivation, print_derivation};
use haem::reduce::{normalize, replay, Config, Status};
use haem::registry::Strategy as Order;
use haem::{Term, Theory};
use proptest::prelude::*;

#[test]
fn generated_derivations_check() {
    let th = Theory::standard();
    for (i, d) in derivations(7, 500, 7).iter().enumerate() {
        if let Err(e) = check(d, &th) {
            panic!("derivation {i} fails to check: {e}\n{}", print_derivation(d));
        }
    }
}

fn run(seed: u64, extensions: bool) -> (StepStats, BTreeMap<String, usize>) {
    let th = Theory::standard();
    let cfg = Config { extensions, ..Config::default() };
    let mut total = StepStats::default();
    let mut kinds = BTreeMap::new();
    let mut failures = Vec::new();
    for d in derivations(seed, 1000, 7) {
        check(&d, &th).expect("generator output checks");
        let (n, stats) = normalize_checked(&d, &th, cfg, &mut failures, |_| {});
        assert_eq!(n.status, Status::Normal, "did not normalize:\n{}", print_derivation(&d));
        if !failures.is_empty() {
            panic!("{}\n{}", failures.join("\n"), print_derivation(&d));
        }
        total.add(stats);
        for s in &n.trace {
            let key = match s.note.split_whitespace().next() {
                Some(o) if o.starts_with("outcome=") => format!("{} {o}", s.kind),
                _ => s.kind.to_string(),
            };
            *kinds.entry(key).or_insert(0) += 1;
        }
    }
    (total, kinds)
}

#[test]
fn reductions_preserve_invariants() {
    let (stats, kinds) = run(1, false);
    assert!(stats.clean());
    assert!(stats.steps > 1000, "only {} steps exercised", stats.steps);
    for k in [
        "PropAnd", "PropOr", "PropImp", "PropForall", "PropExists", "IndRed", "Witness outcome=a",
        "Witness outcome=b", "Witness outcome=c", "EmPerm(AndE)", "EmPerm(ForallE)", "EmPerm(ImpE)", "TermNorm",
    ] {
        assert!(kinds.contains_key(k), "{k} never fired: {kinds:?}");
    }
}

#[test]
fn optional_reductions_preserve_invariants() {
    let (stats, kinds) = run(2, true);
    assert!(stats.clean());
    for k in ["StdPermOr", "StdPermExists", "SimplOr", "SimplExists", "SimplEm"] {
        assert!(kinds.contains_key(k), "{k} never fired: {kinds:?}");
    }
}

#[test]
fn replay_reproduces_normal_form() {
    let th = Theory::standard();
    for d in derivations(3, 200, 7) {
        let n = normalize(&d, &th, Config::default()).unwrap();
        assert_eq!(replay(&d, &n.trace, &th, false).unwrap(), n.derivation);
    }
}

#[test]
fn normalization_is_deterministic() {
    let th = Theory::standard();
    for d in derivations(4, 100, 7) {
        let a = normalize(&d, &th, Config::default()).unwrap();
        let b = normalize(&d, &th, Config::default()).unwrap();
        assert_eq!(a.derivation, b.derivation);
        assert_eq!(a.trace, b.trace);
    }
}

fn closed_term() -> impl Strategy<Value = Term> {
    let leaf = (0u64..4).prop_map(Term::numeral);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (prop::sample::select(vec!["add", "mul", "sub", "monus", "eq"]), inner.clone(), inner.clone())
                .prop_map(|(f, a, b)| Term::app(f, vec![a, b])),
            (prop::sample::select(vec!["pred", "sg"]), inner).prop_map(|(f, a)| Term::app(f, vec![a])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strategies_agree_and_match_native(t in closed_term()) {
        let reg = Theory::standard().functions;
        let inner = reg.normalize(&t).unwrap();
        let outer = reg.normalize_with(&t, Order::Outermost).unwrap();
        prop_assert_eq!(&inner, &outer);
        prop_assert_eq!(inner.numeral_value(), common::eval(&t));
        prop_assert!(reg.is_normal(&inner));
    }

    #[test]
    fn printed_derivations_reparse(seed in any::<u64>()) {
        let th = Theory::standard();
        let d = Gen::new(seed).derivation(3);
        let text = print_derivation(&d);
        prop_assert_eq!(parse_derivation(&text, &th).unwrap(), d);
    }

    #[test]
    fn reducts_keep_checking(seed in any::<u64>()) {
        let th = Theory::standard();
        let d = Gen::new(seed).derivation(4);
        let mut failures = Vec::new();
        let (_, stats) = normalize_checked(&d, &th, Config::default(), &mut failures, |_| {});
        prop_assert!(stats.clean(), "{}", failures.join("\n"));
    }
}
