//! Expansion of quantifiers, `and-case`/`or-case` and the TRIO metric
//! operators into the core PLTL fragment.
//!
//! Metric operators become chains of `next`/`yesterday`/`zeta`. In discrete
//! time an interval with endpoint tag `xy` and width `t` covers the offsets
//! `[x == i ? 0 : 1, y == i ? t : t - 1]`; defaults are `ee` for the bounded
//! family and strict (`_e`) for `somf`/`alwf`/`somp`/`alwp`. Universal past
//! chains use `zeta` and existential ones `yesterday`, so that on a
//! mono-infinite time line the past beyond the origin counts as vacuous.

use crate::error::{Error, Result};
use crate::formula::{Cond, Core, Ends, Formula, Incl, MetricOp, RangeOp, Term};

/// Applies `op` `n` times.
fn chain(f: Core, n: u64, op: fn(Core) -> Core) -> Core {
    (0..n).fold(f, |acc, _| op(acc))
}

pub fn next_n(f: Core, n: u64) -> Core {
    chain(f, n, Core::next)
}

pub fn yesterday_n(f: Core, n: u64) -> Core {
    chain(f, n, Core::yesterday)
}

pub fn zeta_n(f: Core, n: u64) -> Core {
    chain(f, n, Core::zeta)
}

/// Offsets `[lo, hi]` covered by an interval of width `t` with endpoint tags.
pub fn interval(ends: Ends, t: u64) -> (u64, u64) {
    let lo = if ends.near_included() { 0 } else { 1 };
    let hi = if ends.far_included() { t } else { t.wrapping_sub(1) };
    (lo, hi)
}

fn range(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    // an empty range when hi < lo, including the wrapped t - 1 for t = 0
    (lo..=hi).take_while(move |&d| d <= hi && hi != u64::MAX)
}

fn conj(mut fs: Vec<Core>) -> Core {
    match fs.len() {
        0 => Core::True,
        1 => fs.pop().unwrap(),
        _ => Core::And(fs),
    }
}

fn disj(mut fs: Vec<Core>) -> Core {
    match fs.len() {
        0 => Core::False,
        1 => fs.pop().unwrap(),
        _ => Core::Or(fs),
    }
}

fn literal(t: &Term, what: &str) -> Result<i64> {
    match t {
        Term::Int(i) => Ok(*i),
        Term::Sym(s) => Err(Error::Desugar(format!(
            "non-literal offset `{s}` in {what} (unbound quantifier variable?)"
        ))),
    }
}

fn positive(t: &Term, what: &str) -> Result<u64> {
    let v = literal(t, what)?;
    if v <= 0 {
        return Err(Error::Desugar(format!("{what} requires a positive offset, got {v}")));
    }
    Ok(v as u64)
}

fn non_negative(t: &Term, what: &str) -> Result<u64> {
    let v = literal(t, what)?;
    if v < 0 {
        return Err(Error::Desugar(format!("{what} requires a non-negative offset, got {v}")));
    }
    Ok(v as u64)
}

/// Evaluates an expansion-time condition.
pub fn eval_cond(c: &Cond) -> Result<bool> {
    let num = |t: &Term| match t {
        Term::Int(i) => Ok(*i),
        Term::Sym(s) => Err(Error::Desugar(format!(
            "ordering comparison on non-integer `{s}` (unbound quantifier variable?)"
        ))),
    };
    Ok(match c {
        Cond::Eql(a, b) => a == b,
        Cond::Lt(a, b) => num(a)? < num(b)?,
        Cond::Le(a, b) => num(a)? <= num(b)?,
        Cond::Not(c) => !eval_cond(c)?,
        Cond::And(cs) => {
            for c in cs {
                if !eval_cond(c)? {
                    return Ok(false);
                }
            }
            true
        }
        Cond::Or(cs) => {
            for c in cs {
                if eval_cond(c)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Replaces free occurrences of `var` by `value`. Returns true if an inner
/// binder of the same name was found (shadowing).
pub fn subst(f: &Formula, var: &str, value: &Term) -> (Formula, bool) {
    let mut shadowed = false;
    let out = subst_rec(f, var, value, &mut shadowed);
    (out, shadowed)
}

fn subst_rec(f: &Formula, var: &str, value: &Term, shadowed: &mut bool) -> Formula {
    use Formula as F;
    let mut r = |g: &Formula| Box::new(subst_rec(g, var, value, shadowed));
    match f {
        F::True => F::True,
        F::False => F::False,
        F::Atom(a) => F::Atom(a.subst(var, value)),
        F::Not(a) => F::Not(r(a)),
        F::And(fs) => F::And(fs.iter().map(|g| *r(g)).collect()),
        F::Or(fs) => F::Or(fs.iter().map(|g| *r(g)).collect()),
        F::Implies(a, b) => F::Implies(r(a), r(b)),
        F::Iff(a, b) => F::Iff(r(a), r(b)),
        F::Next(a) => F::Next(r(a)),
        F::Yesterday(a) => F::Yesterday(r(a)),
        F::Zeta(a) => F::Zeta(r(a)),
        F::Until(a, b) => F::Until(r(a), r(b)),
        F::Since(a, b) => F::Since(r(a), r(b)),
        F::Release(a, b) => F::Release(r(a), r(b)),
        F::Trigger(a, b) => F::Trigger(r(a), r(b)),
        F::Futr(a, t) => F::Futr(r(a), t.subst(var, value)),
        F::Past(a, t) => F::Past(r(a), t.subst(var, value)),
        F::Dist(a, t) => F::Dist(r(a), t.subst(var, value)),
        F::Metric { op, ends, body, t } => F::Metric {
            op: *op,
            ends: *ends,
            body: r(body),
            t: t.subst(var, value),
        },
        F::Ranged { op, incl, body } => F::Ranged {
            op: *op,
            incl: *incl,
            body: r(body),
        },
        F::Som(a) => F::Som(r(a)),
        F::Alw(a) => F::Alw(r(a)),
        F::TrioUntil { past, ends, a, b } => F::TrioUntil {
            past: *past,
            ends: *ends,
            a: r(a),
            b: r(b),
        },
        F::BoundedUntil {
            past,
            ends,
            lo,
            hi,
            a,
            b,
        } => F::BoundedUntil {
            past: *past,
            ends: *ends,
            lo: lo.subst(var, value),
            hi: hi.as_ref().map(|h| h.subst(var, value)),
            a: r(a),
            b: r(b),
        },
        F::Quant {
            forall,
            var: v,
            domain,
            cond,
            body,
        } => {
            if v == var {
                *shadowed = true;
                return f.clone();
            }
            F::Quant {
                forall: *forall,
                var: v.clone(),
                domain: domain.iter().map(|t| t.subst(var, value)).collect(),
                cond: cond.as_ref().map(|c| c.subst(var, value)),
                body: r(body),
            }
        }
        F::Case {
            conj,
            bindings,
            branches,
            otherwise,
        } => {
            if bindings.iter().any(|(v, _)| v == var) {
                *shadowed = true;
                return f.clone();
            }
            F::Case {
                conj: *conj,
                bindings: bindings.clone(),
                branches: branches
                    .iter()
                    .map(|(g, b)| (*r(g), *r(b)))
                    .collect(),
                otherwise: otherwise.as_ref().map(|e| r(e)),
            }
        }
        F::Cond(c) => F::Cond(c.subst(var, value)),
    }
}

/// Stateful desugarer; collects non-fatal diagnostics.
#[derive(Debug, Default)]
pub struct Desugarer {
    pub warnings: Vec<String>,
}

impl Desugarer {
    pub fn new() -> Self {
        Self::default()
    }

    /// One step of quantifier expansion: the conjunction (`-A-`) or
    /// disjunction (`-E-`) of the body instances whose condition holds.
    pub fn expand_quantifier(&mut self, q: &Formula) -> Result<Formula> {
        let Formula::Quant {
            forall,
            var,
            domain,
            cond,
            body,
        } = q
        else {
            return Err(Error::Desugar(format!("not a quantifier: {q}")));
        };
        if domain.is_empty() {
            return Err(Error::Desugar(format!("empty domain for quantified variable `{var}`")));
        }
        let mut instances = Vec::with_capacity(domain.len());
        for value in domain {
            if let Some(c) = cond {
                if !eval_cond(&c.subst(var, value))? {
                    continue;
                }
            }
            let (inst, shadowed) = subst(body, var, value);
            if shadowed {
                self.warnings
                    .push(format!("quantified variable `{var}` is shadowed by an inner binding"));
            }
            instances.push(inst);
        }
        Ok(if *forall {
            Formula::And(instances)
        } else {
            Formula::Or(instances)
        })
    }

    /// Rewrites `and-case`/`or-case` into nested quantifiers over guarded
    /// branches; the `else` branch fires when no guard holds.
    pub fn expand_case(&mut self, c: &Formula) -> Result<Formula> {
        let Formula::Case {
            conj,
            bindings,
            branches,
            otherwise,
        } = c
        else {
            return Err(Error::Desugar(format!("not a case construct: {c}")));
        };
        let mut parts: Vec<Formula> = branches
            .iter()
            .map(|(g, b)| {
                if *conj {
                    Formula::Implies(Box::new(g.clone()), Box::new(b.clone()))
                } else {
                    Formula::And(vec![g.clone(), b.clone()])
                }
            })
            .collect();
        if let Some(e) = otherwise {
            let negs: Vec<Formula> = branches.iter().map(|(g, _)| Formula::not(g.clone())).collect();
            parts.push(if *conj {
                Formula::Implies(Box::new(Formula::And(negs)), e.clone())
            } else {
                let mut all = negs;
                all.push((**e).clone());
                Formula::And(all)
            });
        }
        let mut body = if *conj {
            Formula::And(parts)
        } else {
            Formula::Or(parts)
        };
        for (var, domain) in bindings.iter().rev() {
            body = Formula::Quant {
                forall: *conj,
                var: var.clone(),
                domain: domain.clone(),
                cond: None,
                body: Box::new(body),
            };
        }
        Ok(body)
    }

    pub fn run(&mut self, f: &Formula) -> Result<Core> {
        use Formula as F;
        let b = |c: Core| Box::new(c);
        Ok(match f {
            F::True => Core::True,
            F::False => Core::False,
            F::Atom(a) => Core::Atom(a.clone()),
            F::Not(a) => Core::Not(b(self.run(a)?)),
            F::And(fs) => Core::And(fs.iter().map(|g| self.run(g)).collect::<Result<_>>()?),
            F::Or(fs) => Core::Or(fs.iter().map(|g| self.run(g)).collect::<Result<_>>()?),
            F::Implies(x, y) => Core::Implies(b(self.run(x)?), b(self.run(y)?)),
            F::Iff(x, y) => Core::Iff(b(self.run(x)?), b(self.run(y)?)),
            F::Next(a) => Core::Next(b(self.run(a)?)),
            F::Yesterday(a) => Core::Yesterday(b(self.run(a)?)),
            F::Zeta(a) => Core::Zeta(b(self.run(a)?)),
            F::Until(x, y) => Core::Until(b(self.run(x)?), b(self.run(y)?)),
            F::Since(x, y) => Core::Since(b(self.run(x)?), b(self.run(y)?)),
            F::Release(x, y) => Core::Release(b(self.run(x)?), b(self.run(y)?)),
            F::Trigger(x, y) => Core::Trigger(b(self.run(x)?), b(self.run(y)?)),

            F::Futr(a, t) => next_n(self.run(a)?, non_negative(t, "futr")?),
            F::Past(a, t) => yesterday_n(self.run(a)?, non_negative(t, "past")?),
            F::Dist(a, t) => {
                let d = literal(t, "dist")?;
                let a = self.run(a)?;
                if d >= 0 {
                    next_n(a, d as u64)
                } else {
                    yesterday_n(a, d.unsigned_abs())
                }
            }
            F::Metric { op, ends, body, t } => {
                let t = positive(t, op.keyword())?;
                let a = self.run(body)?;
                metric(*op, ends.unwrap_or(Ends::EE), a, t)
            }
            F::Ranged { op, incl, body } => ranged(*op, incl.unwrap_or(Incl::E), self.run(body)?),
            F::Som(a) => {
                let a = self.run(a)?;
                Core::Or(vec![
                    ranged(RangeOp::Somp, Incl::E, a.clone()),
                    a.clone(),
                    ranged(RangeOp::Somf, Incl::E, a),
                ])
            }
            F::Alw(a) => {
                let a = self.run(a)?;
                Core::And(vec![
                    ranged(RangeOp::Alwp, Incl::E, a.clone()),
                    a.clone(),
                    ranged(RangeOp::Alwf, Incl::E, a),
                ])
            }
            F::TrioUntil { past, ends, a, b: bb } => {
                trio_until(*past, *ends, self.run(a)?, self.run(bb)?)
            }
            F::BoundedUntil {
                past,
                ends,
                lo,
                hi,
                a,
                b: bb,
            } => {
                let what = if *past { "bounded since" } else { "bounded until" };
                let lo = non_negative(lo, what)?;
                let hi = hi.as_ref().map(|h| non_negative(h, what)).transpose()?;
                if let Some(hi) = hi {
                    if hi < lo {
                        return Err(Error::Desugar(format!("{what}: empty interval [{lo}, {hi}]")));
                    }
                }
                bounded_until(*past, ends.unwrap_or(Ends::IE), lo, hi, self.run(a)?, self.run(bb)?)
            }
            F::Quant { .. } => {
                let e = self.expand_quantifier(f)?;
                self.run(&e)?
            }
            F::Case { .. } => {
                let e = self.expand_case(f)?;
                self.run(&e)?
            }
            F::Cond(c) => {
                if eval_cond(c)? {
                    Core::True
                } else {
                    Core::False
                }
            }
        })
    }
}

/// Desugars `f`, discarding warnings.
pub fn desugar(f: &Formula) -> Result<Core> {
    Desugarer::new().run(f)
}

fn metric(op: MetricOp, ends: Ends, a: Core, t: u64) -> Core {
    let (lo, hi) = interval(ends, t);
    match op {
        MetricOp::Lasts => conj(range(lo, hi).map(|d| next_n(a.clone(), d)).collect()),
        MetricOp::WithinF => disj(range(lo, hi).map(|d| next_n(a.clone(), d)).collect()),
        MetricOp::Lasted => conj(range(lo, hi).map(|d| zeta_n(a.clone(), d)).collect()),
        MetricOp::WithinP => disj(range(lo, hi).map(|d| yesterday_n(a.clone(), d)).collect()),
        MetricOp::NextTime => {
            let mut parts = vec![next_n(a.clone(), t)];
            parts.extend(range(lo, hi.min(t - 1)).map(|d| next_n(Core::not(a.clone()), d)));
            conj(parts)
        }
        MetricOp::LastTime => {
            let mut parts = vec![yesterday_n(a.clone(), t)];
            parts.extend(range(lo, hi.min(t - 1)).map(|d| zeta_n(Core::not(a.clone()), d)));
            conj(parts)
        }
    }
}

fn ranged(op: RangeOp, incl: Incl, a: Core) -> Core {
    let inner = match op {
        RangeOp::Somf => Core::until(Core::True, a),
        RangeOp::Alwf => Core::release(Core::False, a),
        RangeOp::Somp => Core::since(Core::True, a),
        RangeOp::Alwp => Core::trigger(Core::False, a),
    };
    match (incl, op) {
        (Incl::I, _) => inner,
        (Incl::E, RangeOp::Somf | RangeOp::Alwf) => Core::next(inner),
        (Incl::E, RangeOp::Somp) => Core::yesterday(inner),
        (Incl::E, RangeOp::Alwp) => Core::zeta(inner),
    }
}

fn trio_until(past: bool, ends: Ends, a: Core, b: Core) -> Core {
    let target = if ends.far_included() {
        Core::And(vec![a.clone(), b])
    } else {
        b
    };
    if past {
        let s = Core::since(a, target);
        if ends.near_included() {
            s
        } else {
            Core::yesterday(s)
        }
    } else {
        let u = Core::until(a, target);
        if ends.near_included() {
            u
        } else {
            Core::next(u)
        }
    }
}

fn bounded_until(past: bool, ends: Ends, lo: u64, hi: Option<u64>, a: Core, b: Core) -> Core {
    let near = if ends.near_included() { 0 } else { 1 };
    let far_adj = if ends.far_included() { 0 } else { 1 };
    let start = lo.max(near);
    let (shift_any, shift_all): (fn(Core, u64) -> Core, fn(Core, u64) -> Core) = if past {
        (yesterday_n, zeta_n)
    } else {
        (next_n, next_n)
    };
    match hi {
        Some(hi) => disj(
            (start..=hi)
                .map(|d| {
                    let mut parts = vec![shift_any(b.clone(), d)];
                    if d + 1 >= near + far_adj {
                        let last = d + 1 - far_adj;
                        parts.extend((near..last).map(|e| shift_all(a.clone(), e)));
                    }
                    conj(parts)
                })
                .collect(),
        ),
        None => {
            let mut parts: Vec<Core> = (near..start).map(|e| shift_all(a.clone(), e)).collect();
            let rest = trio_until(past, if ends.far_included() { Ends::II } else { Ends::IE }, a, b);
            parts.push(shift_any(rest, start));
            conj(parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn cp(n: &str) -> Core {
        Core::atom(n)
    }

    #[test]
    fn default_until_is_core_until() {
        let f = Formula::until(p("a"), p("b"));
        assert_eq!(desugar(&f).unwrap(), Core::until(cp("A"), cp("B")));
    }

    #[test]
    fn futr_zero_is_identity() {
        let f = Formula::Futr(Box::new(p("a")), Term::Int(0));
        assert_eq!(desugar(&f).unwrap(), cp("A"));
    }

    #[test]
    fn lasts_default_is_open_interval() {
        let f = Formula::Metric {
            op: MetricOp::Lasts,
            ends: None,
            body: Box::new(p("a")),
            t: Term::Int(3),
        };
        assert_eq!(
            desugar(&f).unwrap(),
            Core::And(vec![Core::next(cp("A")), Core::next(Core::next(cp("A")))])
        );
    }

    #[test]
    fn offsets_are_checked() {
        let lasts0 = Formula::Metric {
            op: MetricOp::Lasts,
            ends: None,
            body: Box::new(p("a")),
            t: Term::Int(0),
        };
        assert!(matches!(desugar(&lasts0), Err(Error::Desugar(_))));
        let sym = Formula::Futr(Box::new(p("a")), Term::sym("x"));
        let err = desugar(&sym).unwrap_err().to_string();
        assert!(err.contains("non-literal offset"), "{err}");
        let neg = Formula::Past(Box::new(p("a")), Term::Int(-1));
        assert!(desugar(&neg).is_err());
    }

    #[test]
    fn dist_is_signed() {
        let f = Formula::Dist(Box::new(p("a")), Term::Int(-2));
        assert_eq!(desugar(&f).unwrap(), Core::yesterday(Core::yesterday(cp("A"))));
    }

    #[test]
    fn quantifier_expansion() {
        let q = Formula::Quant {
            forall: true,
            var: "X".into(),
            domain: vec![Term::Int(1), Term::Int(2)],
            cond: None,
            body: Box::new(Formula::Atom(crate::formula::Atom::Prop("P".into(), vec![Term::sym("x")]))),
        };
        let e = Desugarer::new().expand_quantifier(&q).unwrap();
        assert_eq!(e.to_string(), "(&& (-P- P 1) (-P- P 2))");
    }

    #[test]
    fn quantifier_condition_filters() {
        let q = Formula::Quant {
            forall: false,
            var: "X".into(),
            domain: (1..=4).map(Term::Int).collect(),
            cond: Some(Cond::Lt(Term::sym("x"), Term::Int(3))),
            body: Box::new(Formula::Atom(crate::formula::Atom::Prop("P".into(), vec![Term::sym("x")]))),
        };
        let e = Desugarer::new().expand_quantifier(&q).unwrap();
        assert_eq!(e.to_string(), "(|| (-P- P 1) (-P- P 2))");
    }

    #[test]
    fn empty_domain_is_an_error() {
        let q = Formula::Quant {
            forall: true,
            var: "X".into(),
            domain: vec![],
            cond: None,
            body: Box::new(Formula::True),
        };
        assert!(Desugarer::new().expand_quantifier(&q).is_err());
    }

    #[test]
    fn shadowing_warns_and_inner_wins() {
        let inner = Formula::Quant {
            forall: false,
            var: "X".into(),
            domain: vec![Term::Int(5)],
            cond: None,
            body: Box::new(Formula::Atom(crate::formula::Atom::Prop("P".into(), vec![Term::sym("x")]))),
        };
        let outer = Formula::Quant {
            forall: true,
            var: "X".into(),
            domain: vec![Term::Int(1)],
            cond: None,
            body: Box::new(inner),
        };
        let mut d = Desugarer::new();
        let core = d.run(&outer).unwrap();
        assert_eq!(core.to_string(), "(&& (|| (-P- P 5)))");
        assert_eq!(d.warnings.len(), 1);
    }

    #[test]
    fn interval_table() {
        assert_eq!(interval(Ends::EE, 3), (1, 2));
        assert_eq!(interval(Ends::EI, 3), (1, 3));
        assert_eq!(interval(Ends::IE, 3), (0, 2));
        assert_eq!(interval(Ends::II, 3), (0, 3));
        assert_eq!(range(1, 0).count(), 0);
        assert_eq!(range(1, u64::MAX).count(), 0);
    }

    #[test]
    fn bounded_until_matches_table() {
        let f = Formula::BoundedUntil {
            past: false,
            ends: Some(Ends::IE),
            lo: Term::Int(2),
            hi: Some(Term::Int(3)),
            a: Box::new(p("a")),
            b: Box::new(p("b")),
        };
        let a = cp("A");
        let b = cp("B");
        let expected = Core::Or(vec![
            Core::And(vec![next_n(b.clone(), 2), a.clone(), next_n(a.clone(), 1)]),
            Core::And(vec![next_n(b, 3), a.clone(), next_n(a.clone(), 1), next_n(a, 2)]),
        ]);
        assert_eq!(desugar(&f).unwrap(), expected);
    }

    #[test]
    fn cond_in_formula_position() {
        let f = Formula::implies(
            Formula::Cond(Cond::Not(Box::new(Cond::Eql(Term::Int(1), Term::Int(1))))),
            p("a"),
        );
        assert_eq!(desugar(&f).unwrap(), Core::implies(Core::False, cp("A")));
    }
}
