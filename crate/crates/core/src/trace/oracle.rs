//! Exact evaluation of [`Core`] formulas on the infinite word a
//! [`LassoTrace`] denotes.
//!
//! The word is unrolled into a finite linear window: the concrete instants
//! `0..=k`, followed by `M` copies of the future loop and (bi engine)
//! preceded by `M` copies of the past period, with `M = |f| + 2`. Beyond
//! the window every subformula is periodic; those limit values are kept as
//! one cycle per side:
//!
//! * future operators on the right cycle are solved as fixpoints (least for
//!   Until, greatest for Release) and then propagated right-to-left through
//!   the window; their left cycle is the leftmost window copy;
//! * past operators on the left cycle are solved as fixpoints and then
//!   propagated left-to-right; their right cycle is the last window copy.
//!
//! In the mono engine position 0 has no predecessor: Yesterday is false and
//! Zeta true there. Loop-free traces use finite-path semantics: Next and
//! Until are false past instant `k`, Release holds.

use crate::encoder::Engine;
use crate::formula::Core;
use crate::trace::LassoTrace;

struct Frame {
    k: usize,
    /// First loop instant and loop length; length 0 for loop-free paths.
    loop_start: usize,
    period: usize,
    /// Past period length; 0 in the mono engine.
    pool: usize,
    copies: usize,
    /// Window index of instant 0.
    offset: usize,
    len: usize,
}

impl Frame {
    fn new(trace: &LassoTrace, size: usize) -> Frame {
        let copies = size + 2;
        let (loop_start, period) = match trace.loop_start {
            Some(i) => (i, trace.k + 1 - i),
            None => (0, 0),
        };
        let pool = match (trace.engine, trace.past_loop_end) {
            (Engine::Bi, Some(p)) => p + 1,
            (Engine::Bi, None) => panic!("bi-infinite trace without a past period"),
            _ => 0,
        };
        let offset = copies * pool;
        Frame {
            k: trace.k,
            loop_start,
            period,
            pool,
            copies,
            offset,
            len: offset + trace.k + 1 + copies * period,
        }
    }

    /// Trace instant shown at window index `x`.
    fn instant(&self, x: usize) -> usize {
        if x < self.offset {
            return x % self.pool;
        }
        let t = x - self.offset;
        if t <= self.k {
            t
        } else {
            self.loop_start + (t - self.k - 1) % self.period
        }
    }
}

#[derive(Clone)]
struct Vals {
    lin: Vec<bool>,
    /// Right limit cycle, phase 0 = loop start.
    right: Vec<bool>,
    /// Left limit cycle, phase 0 = instant 0.
    left: Vec<bool>,
}

fn pointwise(a: &Vals, b: &Vals, op: impl Fn(bool, bool) -> bool) -> Vals {
    let zip = |x: &[bool], y: &[bool]| x.iter().zip(y).map(|(&p, &q)| op(p, q)).collect();
    Vals {
        lin: zip(&a.lin, &b.lin),
        right: zip(&a.right, &b.right),
        left: zip(&a.left, &b.left),
    }
}

fn map(a: &Vals, op: impl Fn(bool) -> bool) -> Vals {
    let m = |x: &[bool]| x.iter().map(|&p| op(p)).collect();
    Vals {
        lin: m(&a.lin),
        right: m(&a.right),
        left: m(&a.left),
    }
}

fn constant(fr: &Frame, v: bool) -> Vals {
    Vals {
        lin: vec![v; fr.len],
        right: vec![v; fr.period],
        left: vec![v; fr.pool],
    }
}

/// `step(a, b, next)` evaluated backwards over a cycle from `init`.
fn cycle_fix_forward(a: &[bool], b: &[bool], init: bool, step: &dyn Fn(bool, bool, bool) -> bool) -> Vec<bool> {
    let n = a.len();
    let mut v = vec![init; n];
    if n == 0 {
        return v;
    }
    loop {
        let mut changed = false;
        for x in (0..n).rev() {
            let nv = step(a[x], b[x], v[(x + 1) % n]);
            changed |= nv != v[x];
            v[x] = nv;
        }
        if !changed {
            return v;
        }
    }
}

fn cycle_fix_backward(a: &[bool], b: &[bool], init: bool, step: &dyn Fn(bool, bool, bool) -> bool) -> Vec<bool> {
    let n = a.len();
    let mut v = vec![init; n];
    if n == 0 {
        return v;
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            let nv = step(a[x], b[x], v[(x + n - 1) % n]);
            changed |= nv != v[x];
            v[x] = nv;
        }
        if !changed {
            return v;
        }
    }
}

/// Future operator: `step(a, b, value_at_successor)`; `init` is the
/// fixpoint seed and also the value after the end of a loop-free path.
fn future(fr: &Frame, a: &Vals, b: &Vals, init: bool, step: &dyn Fn(bool, bool, bool) -> bool) -> Vals {
    let right = cycle_fix_forward(&a.right, &b.right, init, step);
    let mut lin = vec![false; fr.len];
    let mut succ = if fr.period == 0 { init } else { right[0] };
    for x in (0..fr.len).rev() {
        lin[x] = step(a.lin[x], b.lin[x], succ);
        succ = lin[x];
    }
    let left = lin[..fr.pool].to_vec();
    Vals { lin, right, left }
}

/// Past operator: `step(a, b, value_at_predecessor)`; `origin` is the
/// predecessor value at mono position 0.
fn past(fr: &Frame, a: &Vals, b: &Vals, init: bool, origin: bool, step: &dyn Fn(bool, bool, bool) -> bool) -> Vals {
    let left = cycle_fix_backward(&a.left, &b.left, init, step);
    let mut lin = vec![false; fr.len];
    let mut pred = if fr.pool == 0 { origin } else { left[fr.pool - 1] };
    for x in 0..fr.len {
        lin[x] = step(a.lin[x], b.lin[x], pred);
        pred = lin[x];
    }
    let right = lin[fr.len - fr.period..].to_vec();
    Vals { lin, right, left }
}

fn eval(fr: &Frame, trace: &LassoTrace, f: &Core) -> Vals {
    let t = constant(fr, true);
    match f {
        Core::True => t,
        Core::False => constant(fr, false),
        Core::Atom(atom) => {
            let at = |i: usize| trace.holds(i, atom);
            Vals {
                lin: (0..fr.len).map(|x| at(fr.instant(x))).collect(),
                right: (0..fr.period).map(|p| at(fr.loop_start + p)).collect(),
                left: (0..fr.pool).map(at).collect(),
            }
        }
        Core::Not(a) => map(&eval(fr, trace, a), |p| !p),
        Core::And(fs) => fs
            .iter()
            .fold(t, |acc, g| pointwise(&acc, &eval(fr, trace, g), |p, q| p && q)),
        Core::Or(fs) => fs
            .iter()
            .fold(constant(fr, false), |acc, g| pointwise(&acc, &eval(fr, trace, g), |p, q| p || q)),
        Core::Implies(a, b) => pointwise(&eval(fr, trace, a), &eval(fr, trace, b), |p, q| !p || q),
        Core::Iff(a, b) => pointwise(&eval(fr, trace, a), &eval(fr, trace, b), |p, q| p == q),
        Core::Next(a) => shift_next(fr, &eval(fr, trace, a)),
        Core::Yesterday(a) => shift_prev(fr, &eval(fr, trace, a), false),
        Core::Zeta(a) => shift_prev(fr, &eval(fr, trace, a), true),
        Core::Until(a, b) => future(fr, &eval(fr, trace, a), &eval(fr, trace, b), false, &|a, b, n| b || (a && n)),
        Core::Release(a, b) => future(fr, &eval(fr, trace, a), &eval(fr, trace, b), true, &|a, b, n| b && (a || n)),
        Core::Since(a, b) => past(fr, &eval(fr, trace, a), &eval(fr, trace, b), false, false, &|a, b, p| {
            b || (a && p)
        }),
        Core::Trigger(a, b) => past(fr, &eval(fr, trace, a), &eval(fr, trace, b), true, true, &|a, b, p| {
            b && (a || p)
        }),
    }
}

fn shift_next(fr: &Frame, a: &Vals) -> Vals {
        let n = fr.period;
        let right: Vec<bool> = (0..n).map(|p| a.right[(p + 1) % n]).collect();
        let mut lin = vec![false; fr.len];
        for x in 0..fr.len {
            lin[x] = if x + 1 < fr.len {
                a.lin[x + 1]
            } else if n == 0 {
                false
            } else {
                a.right[0]
            };
        }
        let left = lin[..fr.pool].to_vec();
        Vals { lin, right, left }
}

fn shift_prev(fr: &Frame, a: &Vals, origin: bool) -> Vals {
    let q = fr.pool;
    let left: Vec<bool> = (0..q).map(|p| a.left[(p + q - 1) % q]).collect();
    let mut lin = vec![false; fr.len];
    for x in 0..fr.len {
        lin[x] = if x > 0 {
            a.lin[x - 1]
        } else if q == 0 {
            origin
        } else {
            a.left[q - 1]
        };
    }
    let right = lin[fr.len - fr.period..].to_vec();
    Vals { lin, right, left }
}

/// Truth of `f` at instant `position` (in `0..=k`) of the word `trace`
/// denotes.
pub fn eval_lasso(trace: &LassoTrace, f: &Core, position: usize) -> bool {
    assert!(position <= trace.k, "position {position} outside 0..={}", trace.k);
    eval_window(trace, f)[position]
}

/// Truth of `f` at every instant `0..=k`.
pub fn eval_window(trace: &LassoTrace, f: &Core) -> Vec<bool> {
    let fr = Frame::new(trace, f.size());
    debug_assert!(fr.copies >= 2);
    let v = eval(&fr, trace, f);
    v.lin[fr.offset..=fr.offset + trace.k].to_vec()
}
