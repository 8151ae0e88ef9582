//! Conflict-driven clause learning: two watched literals, first-UIP
//! learning, VSIDS branching with phase saving, Luby restarts and
//! activity-based learnt clause deletion.

use crate::cnf::{CnfInstance, SatResult, Verdict};
use crate::error::{Error, Result};

type Lit = u32;

const NO_REASON: u32 = u32::MAX;

fn lit_of(l: i32) -> Lit {
    (l.unsigned_abs() << 1) | (l < 0) as u32
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
    deleted: bool,
}

/// Max-heap of variables keyed by activity.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n + 1],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v] = Some(i);
        self.up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && act[self.heap[r]] > act[self.heap[l]] { r } else { l };
            if act[self.heap[c]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i]] = Some(i);
            i = c;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

fn luby(mut x: u64) -> u64 {
    // size of the smallest complete subsequence containing x
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    num_learnts: usize,
    pub conflicts: u64,
    pub decisions: u64,
}

impl Solver {
    pub fn new(inst: &CnfInstance) -> Self {
        let n = inst.num_vars as usize;
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::with_capacity(inst.clauses.len()),
            watches: vec![Vec::new(); 2 * n + 2],
            assign: vec![0; n + 1],
            level: vec![0; n + 1],
            reason: vec![NO_REASON; n + 1],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n + 1],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(n),
            phase: vec![false; n + 1],
            seen: vec![false; n + 1],
            ok: true,
            num_learnts: 0,
            conflicts: 0,
            decisions: 0,
        };
        for v in 1..=n {
            s.heap.insert(v, &s.activity);
        }
        for c in &inst.clauses {
            s.add_clause(c);
            if !s.ok {
                break;
            }
        }
        s
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assign[var(l)];
        if l & 1 == 0 {
            a
        } else {
            -a
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = var(l);
        self.assign[v] = if l & 1 == 0 { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn add_clause(&mut self, c: &[i32]) {
        let mut lits: Vec<Lit> = c.iter().map(|&l| lit_of(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) || lits.iter().any(|&l| self.value(l) == 1) {
            return;
        }
        // Earlier units are already propagated, so a watch on a literal that
        // is false at the root would never fire.
        lits.retain(|&l| self.value(l) == 0);
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let ci = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(ci);
        self.watches[lits[1] as usize].push(ci);
        self.clauses.push(Clause {
            lits,
            learnt,
            activity: 0.0,
            deleted: false,
        });
        if learnt {
            self.num_learnts += 1;
        }
        ci
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut kept = Vec::with_capacity(ws.len());
            let mut conflict = None;
            let mut idx = 0;
            while idx < ws.len() {
                let ci = ws[idx];
                idx += 1;
                if self.clauses[ci as usize].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[ci as usize].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[ci as usize].lits[0];
                if self.value(first) == 1 {
                    kept.push(ci);
                    continue;
                }
                let len = self.clauses[ci as usize].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci as usize].lits[k];
                    if self.value(l) != -1 {
                        let lits = &mut self.clauses[ci as usize].lits;
                        lits.swap(1, k);
                        self.watches[lits[1] as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                kept.push(ci);
                if self.value(first) == -1 {
                    conflict = Some(ci);
                    kept.extend_from_slice(&ws[idx..]);
                    break;
                }
                self.enqueue(first, ci);
            }
            self.watches[false_lit as usize] = kept;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, ci: u32) {
        let c = &mut self.clauses[ci as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            self.bump_clause(confl);
            let lits = self.clauses[confl as usize].lits.clone();
            let skip = usize::from(p.is_some());
            for &q in &lits[skip..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[var(lit)];
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.expect("asserting literal") ^ 1;

        // drop literals implied by the rest of the clause
        let mut out = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[var(l)];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..]
                    .iter()
                    .all(|&q| self.seen[var(q)] || self.level[var(q)] == 0);
            if !redundant {
                out.push(l);
            }
        }
        for &l in &learnt {
            self.seen[var(l)] = false;
        }

        let mut bt = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[var(out[i])] > self.level[var(out[max_i])] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bt = self.level[var(out[1])];
        }
        (out, bt)
    }

    fn backtrack(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl as usize];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = 0;
            self.reason[v] = NO_REASON;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = start;
    }

    fn locked(&self, ci: u32) -> bool {
        let l0 = self.clauses[ci as usize].lits[0];
        self.reason[var(l0)] == ci && self.value(l0) == 1
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&ci| {
                let c = &self.clauses[ci as usize];
                c.learnt && !c.deleted && c.lits.len() > 2
            })
            .filter(|&ci| !self.locked(ci))
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .total_cmp(&self.clauses[b as usize].activity)
        });
        for &ci in &cands[..cands.len() / 2] {
            let c = &mut self.clauses[ci as usize];
            c.deleted = true;
            c.lits = Vec::new();
            self.num_learnts -= 1;
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v] == 0 {
                return Some(((v as u32) << 1) | (!self.phase[v]) as u32);
            }
        }
        None
    }

    /// Runs to completion or until `conflict_limit` conflicts.
    pub fn solve(&mut self, conflict_limit: Option<u64>) -> Result<SatResult> {
        if !self.ok {
            return Ok(SatResult::unsat());
        }
        if self.propagate().is_some() {
            return Ok(SatResult::unsat());
        }
        let mut max_learnts = (self.clauses.len() / 3).max(2000) as f64;
        let mut restart = 0u64;
        loop {
            let budget = luby(restart) * 100;
            restart += 1;
            let mut in_round = 0u64;
            loop {
                if let Some(confl) = self.propagate() {
                    self.conflicts += 1;
                    in_round += 1;
                    if self.decision_level() == 0 {
                        return Ok(SatResult::unsat());
                    }
                    let (learnt, bt) = self.analyze(confl);
                    self.backtrack(bt);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let l0 = learnt[0];
                        let ci = self.attach(learnt, true);
                        self.bump_clause(ci);
                        self.enqueue(l0, ci);
                    }
                    self.var_inc /= 0.95;
                    self.cla_inc /= 0.999;
                    if let Some(limit) = conflict_limit {
                        if self.conflicts >= limit {
                            return Err(Error::Timeout(self.conflicts));
                        }
                    }
                } else {
                    if in_round >= budget {
                        self.backtrack(0);
                        break;
                    }
                    if self.num_learnts as f64 - self.trail.len() as f64 >= max_learnts {
                        self.reduce_db();
                        max_learnts *= 1.1;
                    }
                    match self.pick_branch() {
                        None => return Ok(self.model()),
                        Some(l) => {
                            self.decisions += 1;
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(l, NO_REASON);
                        }
                    }
                }
            }
        }
    }

    fn model(&self) -> SatResult {
        let model = (0..=self.num_vars).map(|v| self.assign[v] == 1).collect();
        SatResult {
            verdict: Verdict::Sat,
            model: Some(model),
        }
    }
}
