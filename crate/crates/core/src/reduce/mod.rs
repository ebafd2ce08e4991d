//! Reductions, head-cut-directed stepping, and the fuel-bounded normalizer.

mod induction;
mod optional;
mod perm;
mod proper;
mod witness;

use std::fmt;

use thiserror::Error;

use crate::branch::{find_head_cut, principal_branches, Connective, HeadCutKind, SimplKind};
use crate::derivation::{freshen_labels, Address, Derivation, GraftError, Rule};
use crate::oracle::OracleError;
use crate::term::Term;
use crate::theory::Theory;

pub use witness::WitnessOutcome;

pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    PropAnd,
    PropOr,
    PropImp,
    PropForall,
    PropExists,
    IndRed,
    Witness,
    /// The eliminated connective below the EM₁ instance.
    EmPerm(Connective),
    StdPermOr,
    StdPermExists,
    SimplOr,
    SimplExists,
    SimplEm,
    /// Normalization of the terms at one node.
    TermNorm,
}

impl ReductionKind {
    pub fn is_extension(self) -> bool {
        matches!(
            self,
            ReductionKind::StdPermOr
                | ReductionKind::StdPermExists
                | ReductionKind::SimplOr
                | ReductionKind::SimplExists
                | ReductionKind::SimplEm
        )
    }

    fn from_cut(kind: HeadCutKind) -> ReductionKind {
        match kind {
            HeadCutKind::Proper(c) => match c {
                Connective::And => ReductionKind::PropAnd,
                Connective::Or => ReductionKind::PropOr,
                Connective::Imp => ReductionKind::PropImp,
                Connective::Forall => ReductionKind::PropForall,
                Connective::Exists => ReductionKind::PropExists,
            },
            HeadCutKind::Ind => ReductionKind::IndRed,
            HeadCutKind::Witness(_) => ReductionKind::Witness,
            HeadCutKind::EmPerm(c) => ReductionKind::EmPerm(c),
            HeadCutKind::StdPerm(Connective::Exists) => ReductionKind::StdPermExists,
            HeadCutKind::StdPerm(_) => ReductionKind::StdPermOr,
            HeadCutKind::Simpl(SimplKind::Or) => ReductionKind::SimplOr,
            HeadCutKind::Simpl(SimplKind::Exists) => ReductionKind::SimplExists,
            HeadCutKind::Simpl(SimplKind::Em) => ReductionKind::SimplEm,
        }
    }

    /// Inverse of `Display`.
    pub fn parse(s: &str) -> Option<ReductionKind> {
        use ReductionKind::*;
        Some(match s {
            "PropAnd" => PropAnd,
            "PropOr" => PropOr,
            "PropImp" => PropImp,
            "PropForall" => PropForall,
            "PropExists" => PropExists,
            "IndRed" => IndRed,
            "Witness" => Witness,
            "StdPermOr" => StdPermOr,
            "StdPermExists" => StdPermExists,
            "SimplOr" => SimplOr,
            "SimplExists" => SimplExists,
            "SimplEm" => SimplEm,
            "TermNorm" => TermNorm,
            _ => {
                let inner = s.strip_prefix("EmPerm(")?.strip_suffix(')')?;
                EmPerm(match inner {
                    "AndE" => Connective::And,
                    "OrE" => Connective::Or,
                    "ImpE" => Connective::Imp,
                    "ForallE" => Connective::Forall,
                    "ExistsE" => Connective::Exists,
                    _ => return None,
                })
            }
        })
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionKind::EmPerm(c) => write!(f, "EmPerm({c}E)"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: ReductionKind,
    pub address: Address,
    pub note: String,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @{}", self.kind, self.address)?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("no {kind} redex at {address}: {reason}")]
    NotARedex { kind: ReductionKind, address: Address, reason: String },
    #[error("induction at {address} is blocked on main term {term}")]
    MainTermBlocked { address: Address, term: Term },
    #[error("{0} is an extension reduction and extensions are disabled")]
    ExtensionsDisabled(ReductionKind),
    #[error(transparent)]
    Graft(#[from] GraftError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub fuel: u64,
    /// Enables the standard permutative reductions and the immediate
    /// simplifications.
    pub extensions: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { fuel: DEFAULT_FUEL, extensions: false }
    }
}

/// A reduct for the subtree at the redex, with the trace note.
pub(crate) type Local = (Derivation, String);

/// The address is filled in by [`reduce_at`].
pub(crate) fn not_a_redex(kind: ReductionKind, reason: impl Into<String>) -> ReduceError {
    ReduceError::NotARedex { kind, address: Address::root(), reason: reason.into() }
}

fn locate(e: ReduceError, addr: &Address) -> ReduceError {
    match e {
        ReduceError::NotARedex { kind, reason, .. } => ReduceError::NotARedex { kind, address: addr.clone(), reason },
        ReduceError::MainTermBlocked { term, .. } => ReduceError::MainTermBlocked { address: addr.clone(), term },
        other => other,
    }
}

/// Fires `kind` at `addr` and renames discharge labels apart.
pub fn reduce_at(
    d: &Derivation,
    addr: &Address,
    kind: ReductionKind,
    th: &Theory,
    extensions: bool,
) -> Result<(Derivation, String), ReduceError> {
    if kind.is_extension() && !extensions {
        return Err(ReduceError::ExtensionsDisabled(kind));
    }
    let node = d.node_at(addr).ok_or_else(|| ReduceError::NotARedex {
        kind,
        address: addr.clone(),
        reason: "address does not resolve".into(),
    })?;
    let local = match kind {
        ReductionKind::PropAnd
        | ReductionKind::PropOr
        | ReductionKind::PropImp
        | ReductionKind::PropForall
        | ReductionKind::PropExists => proper::reduce(node, kind, th),
        ReductionKind::IndRed => induction::reduce(node, th),
        ReductionKind::Witness => witness::reduce(node, th),
        ReductionKind::EmPerm(_) => perm::em_perm(node, kind),
        ReductionKind::StdPermOr | ReductionKind::StdPermExists => perm::std_perm(node, kind),
        ReductionKind::SimplOr | ReductionKind::SimplExists | ReductionKind::SimplEm => {
            optional::simplify(node, kind)
        }
        ReductionKind::TermNorm => term_norm(node, th),
    };
    let (reduct, note) = local.map_err(|e| locate(e, addr))?;
    Ok((freshen_labels(&d.replace_at(addr, reduct)), note))
}

/// Proper reductions: the node at `addr` is an elimination
/// whose major premiss is the matching introduction.
pub fn reduce_proper(d: &Derivation, addr: &Address, th: &Theory) -> Result<Derivation, ReduceError> {
    let node = d.node_at(addr).ok_or_else(|| ReduceError::NotARedex {
        kind: ReductionKind::PropAnd,
        address: addr.clone(),
        reason: "address does not resolve".into(),
    })?;
    let kind = match Connective::of_elimination(&node.rule) {
        Some(Connective::And) => ReductionKind::PropAnd,
        Some(Connective::Or) => ReductionKind::PropOr,
        Some(Connective::Imp) => ReductionKind::PropImp,
        Some(Connective::Forall) => ReductionKind::PropForall,
        Some(Connective::Exists) => ReductionKind::PropExists,
        None => {
            return Err(ReduceError::NotARedex {
                kind: ReductionKind::PropAnd,
                address: addr.clone(),
                reason: "not an elimination".into(),
            })
        }
    };
    reduce_at(d, addr, kind, th, false).map(|r| r.0)
}

pub fn reduce_induction(d: &Derivation, addr: &Address, th: &Theory) -> Result<Derivation, ReduceError> {
    reduce_at(d, addr, ReductionKind::IndRed, th, false).map(|r| r.0)
}

pub fn reduce_witness(
    d: &Derivation,
    addr: &Address,
    th: &Theory,
) -> Result<(Derivation, WitnessOutcome), ReduceError> {
    let node = d.node_at(addr).ok_or_else(|| ReduceError::NotARedex {
        kind: ReductionKind::Witness,
        address: addr.clone(),
        reason: "address does not resolve".into(),
    })?;
    let (reduct, outcome) = witness::reduce_with_outcome(node, th).map_err(|e| locate(e, addr))?;
    Ok((freshen_labels(&d.replace_at(addr, reduct)), outcome))
}

pub fn reduce_em_perm(d: &Derivation, addr: &Address, th: &Theory) -> Result<Derivation, ReduceError> {
    let c = d
        .node_at(addr)
        .and_then(|n| Connective::of_elimination(&n.rule))
        .unwrap_or(Connective::And);
    reduce_at(d, addr, ReductionKind::EmPerm(c), th, false).map(|r| r.0)
}

/// Standard permutations and immediate simplifications; fails unless
/// `extensions` is set.
pub fn reduce_optional(
    d: &Derivation,
    addr: &Address,
    kind: ReductionKind,
    th: &Theory,
    extensions: bool,
) -> Result<Derivation, ReduceError> {
    if !kind.is_extension() {
        return Err(ReduceError::NotARedex {
            kind,
            address: addr.clone(),
            reason: "not an optional reduction".into(),
        });
    }
    reduce_at(d, addr, kind, th, extensions).map(|r| r.0)
}

fn term_norm(node: &Derivation, th: &Theory) -> Result<Local, ReduceError> {
    let mut first = None;
    let mut norm = |t: &Term| {
        let n = th.normalize_term(t);
        if first.is_none() && n != *t {
            first = Some(format!("{t} => {n}"));
        }
        n
    };
    let conclusion = node.conclusion.map_terms(&mut norm);
    let rule = match &node.rule {
        Rule::ForallE(t) => Rule::ForallE(norm(t)),
        Rule::ExistsI(t) => Rule::ExistsI(norm(t)),
        Rule::Ind { label, var, motive, main } => Rule::Ind {
            label: label.clone(),
            var: var.clone(),
            motive: motive.clone(),
            main: norm(main),
        },
        other => other.clone(),
    };
    let note = first.ok_or_else(|| not_a_redex(ReductionKind::TermNorm, "all terms are normal"))?;
    Ok((Derivation::new(conclusion, rule, node.premisses.clone()), note))
}

fn has_non_normal_term(node: &Derivation, th: &Theory) -> bool {
    !th.is_normal_formula(&node.conclusion) || node.tag_terms().iter().any(|t| !th.is_normal_term(t))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Reduced(Derivation, TraceStep),
    Normal,
}

/// Fires the head-cut of the first principal branch that has one; failing
/// that, normalizes the terms of the first principal-branch node holding a
/// non-normal term.
pub fn step(d: &Derivation, th: &Theory, extensions: bool) -> Result<Step, ReduceError> {
    let branches = principal_branches(d);
    for b in &branches {
        if let Some(cut) = find_head_cut(d, b, th, extensions) {
            let kind = ReductionKind::from_cut(cut.kind);
            let (next, note) = reduce_at(d, &cut.address, kind, th, extensions)?;
            return Ok(Step::Reduced(next, TraceStep { kind, address: cut.address, note }));
        }
    }
    for b in &branches {
        for addr in &b.occs {
            let node = d.node_at(addr).expect("branch addresses resolve");
            if has_non_normal_term(node, th) {
                let kind = ReductionKind::TermNorm;
                let (next, note) = reduce_at(d, addr, kind, th, extensions)?;
                return Ok(Step::Reduced(next, TraceStep { kind, address: addr.clone(), note }));
            }
        }
    }
    Ok(Step::Normal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Normal,
    FuelExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Normal => "normal",
            Status::FuelExhausted => "fuel-exhausted",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Normalization {
    pub derivation: Derivation,
    pub trace: Vec<TraceStep>,
    pub status: Status,
}

impl Normalization {
    pub fn count(&self, kind: ReductionKind) -> usize {
        self.trace.iter().filter(|s| s.kind == kind).count()
    }

    /// Trace lines `<step#> <kind> @<address> <note>`, numbered from 1.
    pub fn trace_lines(&self) -> Vec<String> {
        self.trace.iter().enumerate().map(|(i, s)| format!("{} {s}", i + 1)).collect()
    }
}

/// Steps until normal or until `cfg.fuel` steps (term-steps included) have
/// been taken. The input should pass [`crate::derivation::check`].
pub fn normalize(d: &Derivation, th: &Theory, cfg: Config) -> Result<Normalization, ReduceError> {
    normalize_with(d, th, cfg, |_, _| {})
}

/// As [`normalize`], calling `observe` with every intermediate derivation
/// and the step that produced it.
pub fn normalize_with(
    d: &Derivation,
    th: &Theory,
    cfg: Config,
    mut observe: impl FnMut(&Derivation, &TraceStep),
) -> Result<Normalization, ReduceError> {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    loop {
        if trace.len() as u64 >= cfg.fuel {
            let status = match step(&cur, th, cfg.extensions)? {
                Step::Normal => Status::Normal,
                Step::Reduced(..) => Status::FuelExhausted,
            };
            return Ok(Normalization { derivation: cur, trace, status });
        }
        match step(&cur, th, cfg.extensions)? {
            Step::Normal => return Ok(Normalization { derivation: cur, trace, status: Status::Normal }),
            Step::Reduced(next, s) => {
                observe(&next, &s);
                trace.push(s);
                cur = next;
            }
        }
    }
}

/// Re-applies a trace to its starting derivation.
pub fn replay(d: &Derivation, trace: &[TraceStep], th: &Theory, extensions: bool) -> Result<Derivation, ReduceError> {
    trace
        .iter()
        .try_fold(d.clone(), |cur, s| reduce_at(&cur, &s.address, s.kind, th, extensions).map(|r| r.0))
}
