//! Random small derivations, valid by construction and dense in redexes.
//!
//! Every rule instance is built so that its side conditions hold. Labels
//! and eigenvariables come from a counter, so they never occur in an
//! enclosing assumption; subderivations used twice are relabelled at the end.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use haem::derivation::freshen_labels;
use haem::{AtomicRule, Derivation, Formula, Label, Side, Term};

#[derive(Clone, Default)]
struct Scope {
    vars: Vec<String>,
    hyps: Vec<(Label, Formula)>,
}

impl Scope {
    fn with_var(&self, x: &str) -> Scope {
        let mut s = self.clone();
        s.vars.push(x.to_string());
        s
    }

    fn with_hyp(&self, l: &Label, a: &Formula) -> Scope {
        let mut s = self.clone();
        s.hyps.push((l.clone(), a.clone()));
        s
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    counter: usize,
}

fn n(k: u64) -> Term {
    Term::numeral(k)
}

fn app(f: &str, args: Vec<Term>) -> Term {
    Term::app(f, args)
}

fn atom_i(a: Formula) -> Derivation {
    Derivation::atomic(AtomicRule::AtomI, a, vec![])
}

fn refl(t: Term) -> Derivation {
    Derivation::atomic(AtomicRule::EqRefl, Formula::eq(t.clone(), t), vec![])
}

fn side(first: bool) -> Side {
    if first {
        Side::First
    } else {
        Side::Second
    }
}

/// `C` from `d: C`, also mentioning the assumption `l: a` through a
/// conjunction cut, so the assumption is used.
fn using(d: Derivation, l: &Label, a: &Formula) -> Derivation {
    Derivation::and_e(Side::First, Derivation::and_i(d, Derivation::assume(l.clone(), a.clone())))
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), counter: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    fn label(&mut self) -> Label {
        Label::new(self.fresh("h"))
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn small(&mut self) -> u64 {
        self.rng.gen_range(0..4)
    }

    fn term(&mut self, sc: &Scope, depth: usize) -> Term {
        let roll = self.rng.gen_range(0..if depth == 0 { 2 } else { 5 });
        match roll {
            0 => n(self.small()),
            1 => match sc.vars.choose(&mut self.rng) {
                Some(x) => Term::var(x.clone()),
                None => n(self.small()),
            },
            2 => Term::succ(self.term(sc, depth - 1)),
            3 => {
                let f = *["add", "mul", "sub"].choose(&mut self.rng).unwrap();
                app(f, vec![self.term(sc, depth - 1), self.term(sc, depth - 1)])
            }
            _ => {
                let f = *["pred", "sg"].choose(&mut self.rng).unwrap();
                app(f, vec![self.term(sc, depth - 1)])
            }
        }
    }

    /// A closed equation that holds, possibly with unevaluated terms.
    fn true_equation(&mut self) -> Formula {
        let (a, b) = (self.small(), self.small());
        let (lhs, v) = match self.rng.gen_range(0..4) {
            0 => (app("add", vec![n(a), n(b)]), a + b),
            1 => (app("mul", vec![n(a), n(b)]), a * b),
            2 => (app("sub", vec![n(a), n(b)]), a.saturating_sub(b)),
            _ => (n(a), a),
        };
        if self.chance(0.5) {
            Formula::eq(lhs, n(v))
        } else {
            Formula::eq(n(v), lhs)
        }
    }

    fn atom(&mut self, sc: &Scope) -> Formula {
        if self.chance(0.15) {
            Formula::Falsum
        } else {
            Formula::eq(self.term(sc, 1), self.term(sc, 1))
        }
    }

    fn formula(&mut self, sc: &Scope, depth: usize) -> Formula {
        if depth == 0 || self.chance(0.4) {
            return self.atom(sc);
        }
        match self.rng.gen_range(0..5) {
            0 => Formula::and(self.formula(sc, depth - 1), self.formula(sc, depth - 1)),
            1 => Formula::or(self.formula(sc, depth - 1), self.formula(sc, depth - 1)),
            2 => Formula::implies(self.formula(sc, depth - 1), self.formula(sc, depth - 1)),
            3 => {
                let x = self.fresh("q");
                Formula::forall(x.clone(), self.formula(&sc.with_var(&x), depth - 1))
            }
            _ => {
                let x = self.fresh("q");
                Formula::exists(x.clone(), self.formula(&sc.with_var(&x), depth - 1))
            }
        }
    }

    fn leaf(&mut self, sc: &Scope) -> Derivation {
        match self.rng.gen_range(0..3) {
            0 if !sc.hyps.is_empty() => {
                let (l, a) = sc.hyps.choose(&mut self.rng).unwrap().clone();
                Derivation::assume(l, a)
            }
            1 => refl(self.term(sc, 1)),
            _ => atom_i(self.true_equation()),
        }
    }

    /// A random derivation whose open assumptions come from `sc`.
    fn derive(&mut self, sc: &Scope, budget: usize) -> Derivation {
        if budget == 0 {
            return self.leaf(sc);
        }
        let b = budget - 1;
        match self.rng.gen_range(0..17) {
            0 => self.leaf(sc),
            1 => Derivation::and_i(self.derive(sc, b), self.derive(sc, b)),
            2 => {
                let s = self.chance(0.5);
                Derivation::and_e(side(s), Derivation::and_i(self.derive(sc, b), self.derive(sc, b)))
            }
            3 => {
                let other = self.formula(sc, 1);
                let s = self.chance(0.5);
                Derivation::or_i(side(s), other, self.derive(sc, b))
            }
            4 => self.or_cut(sc, b),
            5 => {
                let l = self.label();
                let a = self.formula(sc, 1);
                let body = self.derive(&sc.with_hyp(&l, &a), b);
                Derivation::imp_i(l, a, body)
            }
            6 => {
                let minor = self.derive(sc, b);
                let a = minor.conclusion.clone();
                let l = self.label();
                let body = self.derive(&sc.with_hyp(&l, &a), b);
                Derivation::imp_e(Derivation::imp_i(l, a, body), minor)
            }
            7 => {
                let x = self.fresh("x");
                Derivation::forall_i(x.clone(), self.derive(&sc.with_var(&x), b))
            }
            8 => {
                let x = self.fresh("x");
                let body = self.derive(&sc.with_var(&x), b);
                let t = self.term(sc, 1);
                Derivation::forall_e(t, Derivation::forall_i(x, body))
            }
            9 => self.exists_i(sc, b),
            10 => self.exists_cut(sc, b),
            11 => self.induction(sc, b),
            12 => {
                let c = self.derive(sc, b);
                self.em1(sc, c)
            }
            13 => self.em_perm(sc, b),
            14 => self.std_perm(sc, b),
            15 => self.use_hyp(sc, b),
            _ => atom_i(self.true_equation()),
        }
    }

    fn or_cut(&mut self, sc: &Scope, b: usize) -> Derivation {
        let s = self.chance(0.5);
        let proved = self.derive(sc, b);
        let other = self.formula(sc, 1);
        let (left, right) = if s {
            (proved.conclusion.clone(), other.clone())
        } else {
            (other.clone(), proved.conclusion.clone())
        };
        let major = Derivation::or_i(side(s), other, proved);
        let l = self.label();
        let c = self.derive(sc, b);
        let arm_l = if self.chance(0.6) { using(c.clone(), &l, &left) } else { c.clone() };
        let arm_r = if self.chance(0.6) { using(c, &l, &right) } else { c };
        Derivation::or_e(l, major, arm_l, arm_r)
    }

    /// `∃z A` from a derivation of an atom, abstracting one of its terms.
    fn exists_i(&mut self, sc: &Scope, b: usize) -> Derivation {
        let d = self.derive(sc, b);
        let z = self.fresh("z");
        match &d.conclusion {
            Formula::Atom(p, args) => {
                let i = self.rng.gen_range(0..args.len());
                let t = args[i].clone();
                let mut abstracted = args.clone();
                abstracted[i] = Term::var(z.clone());
                let body = Formula::Atom(p.clone(), abstracted);
                Derivation::exists_i(t, Formula::exists(z, body), d)
            }
            c => {
                let t = self.term(sc, 1);
                Derivation::exists_i(t, Formula::exists(z, c.clone()), d)
            }
        }
    }

    fn exists_cut(&mut self, sc: &Scope, b: usize) -> Derivation {
        let major = self.exists_i(sc, b);
        let Formula::Exists(z, body) = major.conclusion.clone() else { unreachable!() };
        let y = self.fresh("y");
        let l = self.label();
        let inst = body.subst(&z, &Term::var(y.clone()));
        let c = self.derive(sc, b);
        let minor = if self.chance(0.6) { using(c, &l, &inst) } else { c };
        Derivation::exists_e(l, y, major, minor)
    }

    fn induction(&mut self, sc: &Scope, b: usize) -> Derivation {
        let m = self.fresh("m");
        let k = self.label();
        let mv = Term::var(m.clone());
        let main = if self.chance(0.8) { n(self.small()) } else { self.term(sc, 1) };
        let (motive, base, step) = match self.rng.gen_range(0..3) {
            0 => {
                // add(m, 0) = m
                let motive = Formula::eq(app("add", vec![mv.clone(), n(0)]), mv.clone());
                let base = atom_i(Formula::eq(app("add", vec![n(0), n(0)]), n(0)));
                let step = Derivation::atomic(
                    AtomicRule::EqCompat("succ".into()),
                    Formula::eq(Term::succ(app("add", vec![mv.clone(), n(0)])), Term::succ(mv.clone())),
                    vec![Derivation::assume(k.clone(), motive.clone())],
                );
                (motive, base, step)
            }
            1 => {
                // ∃z (z = m)
                let z = self.fresh("z");
                let w = self.fresh("w");
                let k2 = self.label();
                let reach = |t: Term| Formula::exists(z.clone(), Formula::eq(Term::var(z.clone()), t));
                let motive = reach(mv.clone());
                let base = Derivation::exists_i(n(0), reach(n(0)), refl(n(0)));
                let eq_w = Formula::eq(Term::var(w.clone()), mv.clone());
                let succ_eq = Derivation::atomic(
                    AtomicRule::EqCompat("succ".into()),
                    Formula::eq(Term::succ(Term::var(w.clone())), Term::succ(mv.clone())),
                    vec![Derivation::assume(k2.clone(), eq_w)],
                );
                let step = Derivation::exists_e(
                    k2,
                    w.clone(),
                    Derivation::assume(k.clone(), motive.clone()),
                    Derivation::exists_i(Term::succ(Term::var(w)), reach(Term::succ(mv.clone())), succ_eq),
                );
                (motive, base, step)
            }
            _ => {
                // C ∧ m = m, for a C derived outside
                let c = self.derive(sc, b);
                let motive = Formula::and(c.conclusion.clone(), Formula::eq(mv.clone(), mv.clone()));
                let base = Derivation::and_i(c, refl(n(0)));
                let step = Derivation::and_i(
                    Derivation::and_e(Side::First, Derivation::assume(k.clone(), motive.clone())),
                    refl(Term::succ(mv.clone())),
                );
                (motive, base, step)
            }
        };
        Derivation::ind(k, m, motive, main, base, step)
    }

    /// An EM₁ instance concluding `c.conclusion`.
    fn em1(&mut self, _sc: &Scope, c: Derivation) -> Derivation {
        let x = self.fresh("x");
        let xv = Term::var(x.clone());
        let body = match self.rng.gen_range(0..4) {
            0 => Formula::eq(app("pred", vec![Term::succ(xv.clone())]), xv),
            1 => Formula::eq(app("pred", vec![xv]), n(0)),
            2 => Formula::eq(app("sg", vec![xv]), n(1)),
            _ => Formula::eq(app("sub", vec![xv.clone(), xv]), n(0)),
        };
        let u = self.label();
        let y = self.fresh("y");
        let universal = Formula::forall(x.clone(), body.clone());
        let left = match self.rng.gen_range(0..3) {
            0 => c.clone(),
            1 => {
                let inst = Derivation::forall_e(n(self.small()), Derivation::assume(u.clone(), universal.clone()));
                Derivation::and_e(Side::Second, Derivation::and_i(inst, c.clone()))
            }
            _ => {
                let inst = Derivation::forall_e(n(self.small()), Derivation::assume(u.clone(), universal.clone()));
                let w = self.fresh("w");
                let open = Derivation::forall_i(
                    w.clone(),
                    Derivation::forall_e(Term::var(w), Derivation::assume(u.clone(), universal.clone())),
                );
                Derivation::and_e(
                    Side::Second,
                    Derivation::and_i(open, Derivation::and_e(Side::Second, Derivation::and_i(inst, c.clone()))),
                )
            }
        };
        let negated = Formula::not(body.subst(&x, &Term::var(y.clone())));
        let right = if self.chance(0.6) { using(c, &u, &negated) } else { c };
        Derivation::em1(u, y, x, body, left, right)
    }

    /// An elimination directly below an EM₁ instance.
    fn em_perm(&mut self, sc: &Scope, b: usize) -> Derivation {
        match self.rng.gen_range(0..3) {
            0 => {
                let c = Derivation::and_i(self.derive(sc, b), self.derive(sc, b));
                let s = self.chance(0.5);
                Derivation::and_e(side(s), self.em1(sc, c))
            }
            1 => {
                let x = self.fresh("x");
                let c = Derivation::forall_i(x.clone(), self.derive(&sc.with_var(&x), b));
                let t = n(self.small());
                Derivation::forall_e(t, self.em1(sc, c))
            }
            _ => {
                let minor = self.derive(sc, b);
                let a = minor.conclusion.clone();
                let l = self.label();
                let body = self.derive(&sc.with_hyp(&l, &a), b);
                let c = Derivation::imp_i(l, a, body);
                Derivation::imp_e(self.em1(sc, c), minor)
            }
        }
    }

    /// A conjunction elimination below `∨E` or `∃E`.
    fn std_perm(&mut self, sc: &Scope, b: usize) -> Derivation {
        let s = self.chance(0.5);
        let case = if self.chance(0.5) { self.or_cut(sc, b) } else { self.exists_cut(sc, b) };
        let conj = Derivation::and_i(self.derive(sc, b), self.derive(sc, b));
        // Swap the case rule's minor premisses for the conjunction.
        let mut case = case;
        let k = case.premisses.len();
        for p in &mut case.premisses[1..k] {
            *p = conj.clone();
        }
        case.conclusion = conj.conclusion.clone();
        Derivation::and_e(side(s), case)
    }

    /// An elimination applied to an open assumption.
    fn use_hyp(&mut self, sc: &Scope, b: usize) -> Derivation {
        let Some((l, a)) = sc.hyps.choose(&mut self.rng).cloned() else {
            return self.derive(sc, b);
        };
        let hyp = Derivation::assume(l, a.clone());
        match &a {
            Formula::And(..) => Derivation::and_e(side(self.chance(0.5)), hyp),
            Formula::Forall(..) => {
                let t = self.term(sc, 1);
                Derivation::forall_e(t, hyp)
            }
            Formula::Implies(p, _) if **p == Formula::eq(n(0), n(0)) => Derivation::imp_e(hyp, refl(n(0))),
            Formula::Or(p, q) => {
                let l = self.label();
                let c = self.derive(sc, b);
                let arm_l = if self.chance(0.7) { using(c.clone(), &l, p) } else { c.clone() };
                let arm_r = if self.chance(0.7) { using(c, &l, q) } else { c };
                Derivation::or_e(l, hyp, arm_l, arm_r)
            }
            Formula::Exists(z, body) => {
                let y = self.fresh("y");
                let l = self.label();
                let inst = body.subst(z, &Term::var(y.clone()));
                let c = self.derive(sc, b);
                let minor = if self.chance(0.7) { using(c, &l, &inst) } else { c };
                Derivation::exists_e(l, y, hyp, minor)
            }
            _ => hyp,
        }
    }

    /// Open assumptions a generated derivation may start from.
    fn hypotheses(&mut self) -> Vec<(Label, Formula)> {
        let x = Term::var("x");
        let pool = [
            Formula::forall("x", Formula::eq(app("pred", vec![Term::succ(x.clone())]), x.clone())),
            Formula::forall("x", Formula::eq(app("sg", vec![x.clone()]), n(1))),
            Formula::and(Formula::eq(n(0), n(0)), Formula::eq(n(1), n(1))),
            Formula::implies(Formula::eq(n(0), n(0)), Formula::exists("z", Formula::eq(Term::var("z"), n(1)))),
            Formula::or(Formula::eq(n(0), n(0)), Formula::eq(n(1), n(0))),
            Formula::exists("z", Formula::eq(Term::var("z"), n(2))),
        ];
        let k = self.rng.gen_range(1..3);
        (0..k).map(|_| (self.label(), pool.choose(&mut self.rng).unwrap().clone())).collect()
    }

    /// A derivation: closed most of the time, otherwise with open
    /// assumptions drawn from a fixed pool. Shared subderivations get their
    /// discharge labels renamed apart.
    pub fn derivation(&mut self, budget: usize) -> Derivation {
        let mut sc = Scope::default();
        if self.chance(0.3) {
            sc.hyps = self.hypotheses();
        }
        let d = if !sc.hyps.is_empty() && self.chance(0.5) {
            self.use_hyp(&sc, budget)
        } else {
            self.derive(&sc, budget)
        };
        freshen_labels(&d)
    }
}

/// `count` generated derivations of height at most `max_height`.
pub fn derivations(seed: u64, count: usize, max_height: usize) -> Vec<Derivation> {
    let mut g = Gen::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let budget = g.rng.gen_range(1..5);
        let d = g.derivation(budget);
        if d.height() <= max_height {
            out.push(d);
        }
    }
    out
}
