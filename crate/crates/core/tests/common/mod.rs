//! Independent oracles shared by the integration tests: random formula
//! generators, exhaustive lasso enumeration and a naive evaluator that
//! works on plain integer positions with bounded look-ahead.
#![allow(dead_code)]

use std::collections::HashMap;

use pltl_bmc::cnf::to_cnf;
use pltl_bmc::encoder::{encode, Engine, Problem};
use pltl_bmc::formula::{Atom, Ends, Formula, Incl, MetricOp, RangeOp, Term};
use pltl_bmc::sat::solve_embedded;
use pltl_bmc::trace::{decode, eval_lasso, LassoTrace};
use pltl_bmc::{desugar, Core};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

pub fn atom(rng: &mut StdRng, n_atoms: usize) -> Core {
    Core::atom(ATOMS[rng.gen_range(0..n_atoms)])
}

/// Random core formula of temporal/boolean depth at most `depth`.
pub fn random_core(rng: &mut StdRng, depth: usize, n_atoms: usize) -> Core {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..20) {
            0 => Core::True,
            1 => Core::False,
            _ => atom(rng, n_atoms),
        };
    }
    let sub = |rng: &mut StdRng| random_core(rng, depth - 1, n_atoms);
    match rng.gen_range(0..13) {
        0 => Core::not(sub(rng)),
        1 => Core::And(vec![sub(rng), sub(rng)]),
        2 => Core::Or(vec![sub(rng), sub(rng)]),
        3 => Core::implies(sub(rng), sub(rng)),
        4 => Core::iff(sub(rng), sub(rng)),
        5 => Core::next(sub(rng)),
        6 => Core::yesterday(sub(rng)),
        7 => Core::zeta(sub(rng)),
        8 => Core::until(sub(rng), sub(rng)),
        9 => Core::since(sub(rng), sub(rng)),
        10 => Core::release(sub(rng), sub(rng)),
        11 => Core::trigger(sub(rng), sub(rng)),
        _ => Core::not(sub(rng)),
    }
}

fn ends(rng: &mut StdRng) -> Ends {
    *Ends::ALL.choose(rng).unwrap()
}

/// Random surface formula mixing core operators with every metric family.
/// Metric widths stay small so the expansion remains brute-forceable.
pub fn random_formula(rng: &mut StdRng, depth: usize, n_atoms: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return Formula::atom(ATOMS[rng.gen_range(0..n_atoms)]);
    }
    let sub = |rng: &mut StdRng| Box::new(random_formula(rng, depth - 1, n_atoms));
    match rng.gen_range(0..22) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::And(vec![*sub(rng), *sub(rng)]),
        2 => Formula::Or(vec![*sub(rng), *sub(rng)]),
        3 => Formula::Iff(sub(rng), sub(rng)),
        4 => Formula::Next(sub(rng)),
        5 => Formula::Yesterday(sub(rng)),
        6 => Formula::Zeta(sub(rng)),
        7 => Formula::Until(sub(rng), sub(rng)),
        8 => Formula::Since(sub(rng), sub(rng)),
        9 => Formula::Release(sub(rng), sub(rng)),
        10 => Formula::Trigger(sub(rng), sub(rng)),
        11 => Formula::Futr(sub(rng), Term::Int(rng.gen_range(0..3))),
        12 => Formula::Past(sub(rng), Term::Int(rng.gen_range(0..3))),
        13 => Formula::Dist(sub(rng), Term::Int(rng.gen_range(-2..3))),
        14 | 15 => Formula::Metric {
            op: *MetricOp::ALL.choose(rng).unwrap(),
            ends: if rng.gen_bool(0.3) { None } else { Some(ends(rng)) },
            body: sub(rng),
            t: Term::Int(rng.gen_range(1..4)),
        },
        16 => Formula::Ranged {
            op: *RangeOp::ALL.choose(rng).unwrap(),
            incl: [None, Some(Incl::E), Some(Incl::I)].choose(rng).copied().unwrap(),
            body: sub(rng),
        },
        17 => Formula::Som(sub(rng)),
        18 => Formula::Alw(sub(rng)),
        19 => Formula::TrioUntil {
            past: rng.gen_bool(0.5),
            ends: ends(rng),
            a: sub(rng),
            b: sub(rng),
        },
        _ => {
            let lo = rng.gen_range(0..3);
            Formula::BoundedUntil {
                past: rng.gen_bool(0.5),
                ends: if rng.gen_bool(0.3) { None } else { Some(ends(rng)) },
                lo: Term::Int(lo),
                hi: if rng.gen_bool(0.7) {
                    Some(Term::Int(lo + rng.gen_range(0..3)))
                } else {
                    None
                },
                a: sub(rng),
                b: sub(rng),
            }
        }
    }
}

pub fn formula_atoms(f: &Core) -> Vec<Atom> {
    let mut atoms = Vec::new();
    f.atoms(&mut atoms);
    atoms.sort();
    atoms.dedup();
    atoms
}

/// Every lasso over `atoms` with bound `k`: all valuations, every loop
/// start in `1..=k` and (bi) every past period end in `0..k`.
pub fn for_each_lasso(atoms: &[Atom], k: usize, engine: Engine, mut visit: impl FnMut(&LassoTrace) -> bool) -> bool {
    let bits = atoms.len() * (k + 1);
    assert!(bits <= 24, "{bits} bits is too many to enumerate");
    let pools: Vec<Option<usize>> = match engine {
        Engine::Mono => vec![None],
        Engine::Bi => (0..k).map(Some).collect(),
    };
    for v in 0u64..1 << bits {
        for i in 1..=k {
            for &p in &pools {
                let mut t = LassoTrace::new(k, engine, atoms.to_vec(), Some(i), p);
                for inst in 0..=k {
                    for a in 0..atoms.len() {
                        t.values[inst][a] = v >> (inst * atoms.len() + a) & 1 == 1;
                    }
                }
                if visit(&t) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn root_instant(engine: Engine) -> usize {
    match engine {
        Engine::Mono => 1,
        Engine::Bi => 0,
    }
}

/// Exhaustive search for a lasso satisfying `f` at the root instant.
pub fn brute_force_sat(f: &Core, k: usize, engine: Engine) -> bool {
    let atoms = formula_atoms(f);
    let at = root_instant(engine);
    for_each_lasso(&atoms, k, engine, |t| eval_lasso(t, f, at))
}

/// Encoder plus embedded solver; returns the decoded trace on SAT.
pub fn solve(f: &Core, k: usize, engine: Engine) -> Option<LassoTrace> {
    let e = encode(&Problem::new(f.clone()), k, engine, false).expect("encodes");
    let cnf = to_cnf(&e.circuit, e.varmap.len());
    let r = solve_embedded(&cnf).expect("solves");
    r.is_sat().then(|| decode(&r, &e).expect("decodes"))
}

pub fn desugared(f: &Formula) -> Core {
    desugar(f).expect("generated formulas are well formed")
}

/// Word position to trace instant; `None` before the origin in mono.
fn instant_at(t: &LassoTrace, n: i64) -> Option<usize> {
    let k = t.k as i64;
    if n >= 0 {
        if n <= k {
            return Some(n as usize);
        }
        let i = t.loop_start.expect("lasso") as i64;
        let period = k + 1 - i;
        return Some((i + (n - k - 1) % period) as usize);
    }
    match t.engine {
        Engine::Mono => None,
        Engine::Bi => {
            let q = t.past_loop_end.expect("bi lasso") as i64 + 1;
            Some((q - 1 - ((-n - 1) % q)) as usize)
        }
    }
}

/// Evaluates by definition with every Until/Release/Since/Trigger search
/// cut off `h` positions away.
struct Naive<'a> {
    t: &'a LassoTrace,
    h: i64,
    memo: HashMap<(usize, i64), bool>,
}

impl Naive<'_> {
    fn exists(&self, n: i64) -> bool {
        instant_at(self.t, n).is_some()
    }

    /// Last position searched forward: at least `h` ahead and past instant `k`.
    fn ahead(&self, n: i64) -> i64 {
        n + self.h + (self.t.k as i64 - n).max(0)
    }

    /// Positions `n, n-1, ...` that exist, reaching at least `h` back and
    /// always past the origin so mono history is never cut short.
    fn past_window(&self, n: i64) -> Vec<i64> {
        (n - self.h - n.max(0)..=n).rev().filter(|&j| self.exists(j)).collect()
    }

    fn eval(&mut self, f: &Core, n: i64) -> bool {
        let key = (f as *const Core as usize, n);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match f {
            Core::True => true,
            Core::False => false,
            Core::Atom(a) => self.t.holds(instant_at(self.t, n).expect("position exists"), a),
            Core::Not(a) => !self.eval(a, n),
            Core::And(fs) => fs.iter().all(|g| self.eval(g, n)),
            Core::Or(fs) => fs.iter().any(|g| self.eval(g, n)),
            Core::Implies(a, b) => !self.eval(a, n) || self.eval(b, n),
            Core::Iff(a, b) => self.eval(a, n) == self.eval(b, n),
            Core::Next(a) => self.eval(a, n + 1),
            Core::Yesterday(a) => self.exists(n - 1) && self.eval(a, n - 1),
            Core::Zeta(a) => !self.exists(n - 1) || self.eval(a, n - 1),
            Core::Until(a, b) => (n..=self.ahead(n)).any(|j| self.eval(b, j) && (n..j).all(|m| self.eval(a, m))),
            Core::Release(a, b) => (n..=self.ahead(n)).all(|j| self.eval(b, j) || (n..j).any(|m| self.eval(a, m))),
            Core::Since(a, b) => self
                .past_window(n)
                .into_iter()
                .any(|j| self.eval(b, j) && (j + 1..=n).all(|m| self.eval(a, m))),
            Core::Trigger(a, b) => self
                .past_window(n)
                .into_iter()
                .all(|j| self.eval(b, j) || (j + 1..=n).any(|m| self.eval(a, m))),
        };
        self.memo.insert(key, v);
        v
    }
}

/// Naive evaluation at instant `position`, doubling the look-ahead until
/// two consecutive horizons agree.
pub fn naive_eval(t: &LassoTrace, f: &Core, position: usize) -> bool {
    let mut h = 4 * (t.k as i64 + 1);
    let mut prev = None;
    loop {
        let mut ev = Naive {
            t,
            h,
            memo: HashMap::new(),
        };
        let v = ev.eval(f, position as i64);
        if prev == Some(v) {
            return v;
        }
        prev = Some(v);
        h *= 2;
        assert!(h < 1 << 12, "naive evaluator failed to converge");
    }
}

pub fn random_lasso(rng: &mut StdRng, atoms: &[Atom], k: usize, engine: Engine) -> LassoTrace {
    let i = rng.gen_range(1..=k);
    let p = match engine {
        Engine::Mono => None,
        Engine::Bi => Some(rng.gen_range(0..k)),
    };
    let mut t = LassoTrace::new(k, engine, atoms.to_vec(), Some(i), p);
    for row in t.values.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.gen_bool(0.5);
        }
    }
    t
}

pub fn props(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::prop(n)).collect()
}

/// Reference semantics for the metric sugar, straight from the interval
/// table: a tag `xy` over width `t` covers offsets `[x=i?0:1, y=i?t:t-1]`.
/// Past positions before a mono origin make existential clauses false and
/// universal ones vacuous. Quantifiers and cases are out of scope.
struct Surface<'a> {
    t: &'a LassoTrace,
    h: i64,
    memo: HashMap<(usize, i64), bool>,
}

fn lit(t: &Term) -> i64 {
    match t {
        Term::Int(i) => *i,
        Term::Sym(s) => panic!("symbolic offset {s}"),
    }
}

fn span(ends: Ends, t: i64) -> (i64, i64) {
    (
        if ends.near_included() { 0 } else { 1 },
        if ends.far_included() { t } else { t - 1 },
    )
}

impl Surface<'_> {
    fn exists(&self, n: i64) -> bool {
        instant_at(self.t, n).is_some()
    }

    /// Search width in direction `dir`: looking back always passes the
    /// origin, looking ahead always passes instant `k`.
    fn reach(&self, n: i64, dir: i64) -> i64 {
        if dir < 0 {
            self.h + n.max(0)
        } else {
            self.h + (self.t.k as i64 - n).max(0)
        }
    }

    /// `f` at `n`, with `missing` standing in for positions before the origin.
    fn at(&mut self, f: &Formula, n: i64, missing: bool) -> bool {
        if self.exists(n) {
            self.eval(f, n)
        } else {
            missing
        }
    }

    /// Until-style search: witness `b` at a distance `d >= lo` (and `<= hi`),
    /// `a` at every distance in `[near, d - far_adj]`. `dir` is +1 or -1.
    #[allow(clippy::too_many_arguments)]
    fn search(&mut self, a: &Formula, b: &Formula, n: i64, dir: i64, near: i64, far_adj: i64, lo: i64, hi: Option<i64>) -> bool {
        let hi = hi.unwrap_or(lo.max(near) + self.reach(n, dir));
        (lo.max(near)..=hi).any(|d| {
            self.at(b, n + dir * d, false) && (near..=d - far_adj).all(|e| self.at(a, n + dir * e, true))
        })
    }

    fn eval(&mut self, f: &Formula, n: i64) -> bool {
        let key = (f as *const Formula as usize, n);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        use Formula as F;
        let v = match f {
            F::True => true,
            F::False => false,
            F::Atom(a) => self.t.holds(instant_at(self.t, n).expect("position exists"), a),
            F::Not(a) => !self.eval(a, n),
            F::And(fs) => fs.iter().all(|g| self.eval(g, n)),
            F::Or(fs) => fs.iter().any(|g| self.eval(g, n)),
            F::Implies(a, b) => !self.eval(a, n) || self.eval(b, n),
            F::Iff(a, b) => self.eval(a, n) == self.eval(b, n),
            F::Next(a) => self.eval(a, n + 1),
            F::Yesterday(a) => self.at(a, n - 1, false),
            F::Zeta(a) => self.at(a, n - 1, true),
            F::Until(a, b) => self.search(a, b, n, 1, 0, 1, 0, None),
            F::Since(a, b) => self.search(a, b, n, -1, 0, 1, 0, None),
            F::Release(a, b) => {
                (0..=self.reach(n, 1)).all(|j| self.eval(b, n + j) || (0..j).any(|m| self.eval(a, n + m)))
            }
            F::Trigger(a, b) => (0..=self.reach(n, -1)).all(|j| {
                !self.exists(n - j) || self.eval(b, n - j) || (0..j).any(|m| self.eval(a, n - m))
            }),
            F::Futr(a, t) => self.eval(a, n + lit(t)),
            F::Past(a, t) => self.at(a, n - lit(t), false),
            F::Dist(a, t) => {
                let d = lit(t);
                self.at(a, n + d, false)
            }
            F::Metric { op, ends, body, t } => {
                let t = lit(t);
                let (lo, hi) = span(ends.unwrap_or(Ends::EE), t);
                match op {
                    MetricOp::Lasts => (lo..=hi).all(|d| self.eval(body, n + d)),
                    MetricOp::WithinF => (lo..=hi).any(|d| self.eval(body, n + d)),
                    MetricOp::Lasted => (lo..=hi).all(|d| self.at(body, n - d, true)),
                    MetricOp::WithinP => (lo..=hi).any(|d| self.at(body, n - d, false)),
                    MetricOp::NextTime => {
                        self.eval(body, n + t) && (lo..=hi.min(t - 1)).all(|d| !self.eval(body, n + d))
                    }
                    MetricOp::LastTime => {
                        self.at(body, n - t, false) && (lo..=hi.min(t - 1)).all(|d| !self.at(body, n - d, false))
                    }
                }
            }
            F::Ranged { op, incl, body } => {
                let lo = if *incl == Some(Incl::I) { 0 } else { 1 };
                let (back, ahead) = (self.reach(n, -1), self.reach(n, 1));
                match op {
                    RangeOp::Somf => (lo..=lo + ahead).any(|d| self.eval(body, n + d)),
                    RangeOp::Alwf => (lo..=lo + ahead).all(|d| self.eval(body, n + d)),
                    RangeOp::Somp => (lo..=lo + back).any(|d| self.at(body, n - d, false)),
                    RangeOp::Alwp => (lo..=lo + back).all(|d| self.at(body, n - d, true)),
                }
            }
            F::Som(a) => (-self.reach(n, -1)..=self.reach(n, 1)).any(|d| self.at(a, n + d, false)),
            F::Alw(a) => (-self.reach(n, -1)..=self.reach(n, 1)).all(|d| self.at(a, n + d, true)),
            F::TrioUntil { past, ends, a, b } => {
                let near = if ends.near_included() { 0 } else { 1 };
                let far_adj = if ends.far_included() { 0 } else { 1 };
                self.search(a, b, n, if *past { -1 } else { 1 }, near, far_adj, 0, None)
            }
            F::BoundedUntil { past, ends, lo, hi, a, b } => {
                let ends = ends.unwrap_or(Ends::IE);
                let near = if ends.near_included() { 0 } else { 1 };
                let far_adj = if ends.far_included() { 0 } else { 1 };
                let hi = hi.as_ref().map(lit);
                self.search(a, b, n, if *past { -1 } else { 1 }, near, far_adj, lit(lo), hi)
            }
            F::Quant { .. } | F::Case { .. } | F::Cond(_) => panic!("surface evaluator does not expand {f}"),
        };
        self.memo.insert(key, v);
        v
    }
}

/// Reference value of a surface formula at instant `position`, doubling
/// the horizon until two consecutive values agree.
pub fn surface_eval(t: &LassoTrace, f: &Formula, position: usize) -> bool {
    let mut h = 4 * (t.k as i64 + 1);
    let mut prev = None;
    loop {
        let mut ev = Surface {
            t,
            h,
            memo: HashMap::new(),
        };
        let v = ev.eval(f, position as i64);
        if prev == Some(v) {
            return v;
        }
        prev = Some(v);
        h *= 2;
        assert!(h < 1 << 12, "surface evaluator failed to converge");
    }
}

/// Sorts the operands of every `&&`/`||` so that expansions compare
/// modulo conjunct ordering.
pub fn canon(f: &Formula) -> Formula {
    use Formula as F;
    let sorted = |fs: &[Formula]| {
        let mut v: Vec<Formula> = fs.iter().map(canon).collect();
        v.sort_by_key(|g| g.to_string());
        v
    };
    let b = |g: &Formula| Box::new(canon(g));
    match f {
        F::And(fs) => F::And(sorted(fs)),
        F::Or(fs) => F::Or(sorted(fs)),
        F::Not(a) => F::Not(b(a)),
        F::Implies(x, y) => F::Implies(b(x), b(y)),
        F::Iff(x, y) => F::Iff(b(x), b(y)),
        F::Quant { forall, var, domain, cond, body } => F::Quant {
            forall: *forall,
            var: var.clone(),
            domain: domain.clone(),
            cond: cond.clone(),
            body: b(body),
        },
        other => other.clone(),
    }
}

pub const AND_CASE: &str = "(and-case (x '(1 2) y '(3 4))
           ((-P- P x) (-P- Q x))
           ((-P- R y) (-P- R1 y))
           (else (-P- R2 x)))";

pub const AND_CASE_EXPANDED: &str = "(-A- X '(1 2)
     (-A- Y '(3 4)
      (&& (-> (-P- R Y) (-P- R1 Y)) (-> (-P- P X) (-P- Q X))
       (-> (&& (!! (-P- R Y)) (!! (-P- P X))) (-P- R2 X)))))";

pub const OR_CASE: &str = "(or-case (x '(1 2) y '(3 4))
           ((-P- P x) (-P- Q x))
           ((-P- R y) (-P- R1 y))
           (else (-P- R2 x)))";

pub const OR_CASE_EXPANDED: &str = "(-E- X '(1 2)
     (-E- Y '(3 4)
      (|| (&& (-P- R Y) (-P- R1 Y)) (&& (-P- P X) (-P- Q X))
       (&& (!! (-P- R Y)) (!! (-P- P X)) (-P- R2 X)))))";

/// Expands `case_text` one level and compares it with `expected_text`
/// modulo operand order.
pub fn case_matches(case_text: &str, expected_text: &str) -> Result<(), String> {
    let case = pltl_bmc::parse_formula(case_text).map_err(|e| e.to_string())?;
    let got = pltl_bmc::desugar::Desugarer::new()
        .expand_case(&case)
        .map_err(|e| e.to_string())?;
    let want = pltl_bmc::parse_formula(expected_text).map_err(|e| e.to_string())?;
    if canon(&got) == canon(&want) {
        Ok(())
    } else {
        Err(format!("expanded to {got}\nexpected   {want}"))
    }
}

fn atoms_of(fs: &[&Core]) -> Vec<Atom> {
    let mut atoms: Vec<Atom> = fs.iter().flat_map(|f| formula_atoms(f)).collect();
    atoms.sort();
    atoms.dedup();
    atoms
}

/// Both sides take the same value at every window instant of a random lasso.
pub fn agree_on_random_lasso(rng: &mut StdRng, lhs: &Core, rhs: &Core, engine: Engine) -> Result<(), String> {
    let k = rng.gen_range(2..=5);
    let t = random_lasso(rng, &atoms_of(&[lhs, rhs]), k, engine);
    let (l, r) = (pltl_bmc::trace::eval_window(&t, lhs), pltl_bmc::trace::eval_window(&t, rhs));
    if l == r {
        Ok(())
    } else {
        Err(format!("{lhs}\n  vs {rhs}\n  on {t:?}: {l:?} / {r:?}"))
    }
}

pub fn engine_of(n: usize) -> Engine {
    if n.is_multiple_of(2) {
        Engine::Mono
    } else {
        Engine::Bi
    }
}

fn metric(op: MetricOp, ends: Ends, body: Formula, t: i64) -> Formula {
    Formula::Metric {
        op,
        ends: Some(ends),
        body: Box::new(body),
        t: Term::Int(t),
    }
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

fn ranged(op: RangeOp, a: Formula) -> Formula {
    Formula::Ranged {
        op,
        incl: Some(Incl::E),
        body: Box::new(a),
    }
}

/// Builds both sides of a law from two random operands.
pub type Law = fn(&mut StdRng, Formula, Formula) -> (Formula, Formula);

pub const DUALITIES: [(&str, Law); 6] = [
    ("withinf/lasts", |rng, a, _| {
        let (ends, t) = (Ends::ALL[rng.gen_range(0..4)], rng.gen_range(1..4));
        (metric(MetricOp::WithinF, ends, a.clone(), t), not(metric(MetricOp::Lasts, ends, not(a), t)))
    }),
    ("withinp/lasted", |rng, a, _| {
        let (ends, t) = (Ends::ALL[rng.gen_range(0..4)], rng.gen_range(1..4));
        (metric(MetricOp::WithinP, ends, a.clone(), t), not(metric(MetricOp::Lasted, ends, not(a), t)))
    }),
    ("release/until", |_, a, b| {
        (
            Formula::Release(Box::new(a.clone()), Box::new(b.clone())),
            not(Formula::Until(Box::new(not(a)), Box::new(not(b)))),
        )
    }),
    ("trigger/since", |_, a, b| {
        (
            Formula::Trigger(Box::new(a.clone()), Box::new(b.clone())),
            not(Formula::Since(Box::new(not(a)), Box::new(not(b)))),
        )
    }),
    ("som split", |_, a, _| {
        (
            Formula::Som(Box::new(a.clone())),
            Formula::Or(vec![ranged(RangeOp::Somp, a.clone()), a.clone(), ranged(RangeOp::Somf, a)]),
        )
    }),
    ("alw/som", |_, a, _| (Formula::Alw(Box::new(a.clone())), not(Formula::Som(Box::new(not(a)))))),
];

/// Checks a law `lhs(A) == rhs(A)` on `cases` random instances.
pub fn check_law(seed: u64, cases: usize, make: Law) -> Result<(), String> {
    let mut rng = rand::SeedableRng::seed_from_u64(seed);
    for n in 0..cases {
        let a = random_formula(&mut rng, 2, 2);
        let b = random_formula(&mut rng, 2, 2);
        let (lhs, rhs) = make(&mut rng, a, b);
        agree_on_random_lasso(&mut rng, &desugared(&lhs), &desugared(&rhs), engine_of(n))?;
    }
    Ok(())
}

/// Random case over `(x (1 2))` with guards and bodies drawn from atoms
/// indexed by `x`.
fn random_case(rng: &mut StdRng, conj: bool, negate_bodies: bool) -> Formula {
    let x = Term::sym("X");
    let indexed = |rng: &mut StdRng| {
        let name = ["G", "H", "B"][rng.gen_range(0..3)];
        let f = Formula::Atom(Atom::Prop(name.into(), vec![x.clone()]));
        if rng.gen_bool(0.5) {
            Formula::Next(Box::new(f))
        } else {
            f
        }
    };
    let n = rng.gen_range(0..4);
    let branches: Vec<(Formula, Formula)> = (0..n).map(|_| (indexed(rng), indexed(rng))).collect();
    let otherwise = rng.gen_bool(0.7).then(|| Box::new(indexed(rng)));
    let flip = |f: Formula| if negate_bodies { not(f) } else { f };
    Formula::Case {
        conj,
        bindings: vec![("X".into(), vec![Term::Int(1), Term::Int(2)])],
        branches: branches.into_iter().map(|(g, b)| (g, flip(b))).collect(),
        otherwise: otherwise.map(|e| Box::new(flip(*e))),
    }
}

/// `and-case` with bodies B equals the negation of `or-case` with the same
/// guards and bodies ¬B.
pub fn check_case_duality(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng: StdRng = rand::SeedableRng::seed_from_u64(seed);
    for n in 0..cases {
        let seed: u64 = rng.gen();
        let and = random_case(&mut rand::SeedableRng::seed_from_u64(seed), true, false);
        let or = random_case(&mut rand::SeedableRng::seed_from_u64(seed), false, true);
        agree_on_random_lasso(&mut rng, &desugared(&and), &Core::not(desugared(&or)), engine_of(n))?;
    }
    Ok(())
}
