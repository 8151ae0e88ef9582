//! Bounded lasso encoding of PLTL with past operators.
//!
//! Positions are pairs `(copy, instant)`. Copy 0 is the concrete window
//! `0..=k`. Copies `1, 2, ...` are virtual repetitions of the future loop
//! `[i..k]` and copies `-1, -2, ...` (bi-infinite engine only) virtual
//! repetitions of the past period `[0..p]`. A subformula with past depth `d`
//! takes the same value in every loop copy `>= d`, and one with future depth
//! `d` the same value in every past copy `<= -d`, so each node only gets
//! variables for copies inside `[-future_depth, past_depth]`; references
//! outside that range are clamped onto it.
//!
//! Only instants inside the selected loop exist in copies `> 0` and only
//! instants inside the past period in copies `< 0`. Variables at
//! non-existent positions are defined but never asserted.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Sig};
use crate::closure::{AtomId, Closure, Node, NodeId, Tense};
use crate::cnf::Symbol;
use crate::error::{Error, Result};
use crate::formula::{Atom, Core};
use crate::trace::PartialHistory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Engine {
    /// Time starts at 0; the word is `u[0..i-1] (u[i..k])^ω`.
    #[default]
    Mono,
    /// Time is unbounded in both directions; the word is
    /// `^ω(u[0..p]) u[0..k] (u[i..k])^ω`.
    Bi,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mono" => Ok(Engine::Mono),
            "bi" => Ok(Engine::Bi),
            other => Err(format!("unknown engine `{other}` (expected mono or bi)")),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Mono => "mono",
            Engine::Bi => "bi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKey {
    Atom { atom: AtomId, instant: usize },
    Sub { node: NodeId, copy: i32, instant: usize },
    /// Successor of instant k is instant i.
    Loop(usize),
    /// The past period is `u[0..p]`.
    Pool(usize),
}

/// Bijection between solver variables and what they mean.
#[derive(Debug, Clone)]
pub struct VarMap {
    pub k: usize,
    /// Number of atom variables; they occupy ids `1..=numvar`.
    pub numvar: u32,
    fwd: HashMap<VarKey, u32>,
    back: Vec<VarKey>,
    atom_nodes: HashMap<AtomId, NodeId>,
    pub loop_selectors: Vec<u32>,
    pub pool_selectors: Vec<u32>,
    pub root_var: Option<u32>,
    pub root_instant: usize,
}

impl VarMap {
    fn new(k: usize) -> Self {
        VarMap {
            k,
            numvar: 0,
            fwd: HashMap::new(),
            back: Vec::new(),
            atom_nodes: HashMap::new(),
            loop_selectors: Vec::new(),
            pool_selectors: Vec::new(),
            root_var: None,
            root_instant: 0,
        }
    }

    fn alloc(&mut self, key: VarKey) -> u32 {
        if let Some(&v) = self.fwd.get(&key) {
            return v;
        }
        self.back.push(key);
        let v = self.back.len() as u32;
        self.fwd.insert(key, v);
        v
    }

    /// Total number of allocated variables.
    pub fn len(&self) -> u32 {
        self.back.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.back.is_empty()
    }

    pub fn get(&self, key: &VarKey) -> Option<u32> {
        self.fwd.get(key).copied()
    }

    pub fn key(&self, var: u32) -> Option<&VarKey> {
        var.checked_sub(1).and_then(|i| self.back.get(i as usize))
    }

    /// Variable of subformula `node` at instant `t` of the concrete window.
    pub fn call(&self, closure: &Closure, node: NodeId, t: usize) -> Result<u32> {
        if t > self.k {
            return Err(Error::Encode(format!("instant {t} outside 0..={}", self.k)));
        }
        let key = match closure.node(node) {
            Node::Atom(a) => VarKey::Atom { atom: *a, instant: t },
            _ => VarKey::Sub {
                node,
                copy: 0,
                instant: t,
            },
        };
        self.get(&key)
            .ok_or_else(|| Error::Encode(format!("subformula {} has no variable at {t}", node.0)))
    }

    /// Inverse of [`VarMap::call`].
    pub fn back_call(&self, var: u32) -> Result<(NodeId, usize)> {
        match self.key(var) {
            Some(VarKey::Atom { atom, instant }) => Ok((self.atom_nodes[atom], *instant)),
            Some(VarKey::Sub {
                node,
                copy: 0,
                instant,
            }) => Ok((*node, *instant)),
            Some(other) => Err(Error::Encode(format!("variable {var} is not a window subformula: {other:?}"))),
            None => Err(Error::Encode(format!("unknown variable {var}"))),
        }
    }

    pub fn atom_var(&self, atom: AtomId, instant: usize) -> u32 {
        self.fwd[&VarKey::Atom { atom, instant }]
    }
}

/// What to encode.
#[derive(Debug, Clone)]
pub struct Problem {
    /// Asserted at the engine's root instant.
    pub formula: Core,
    /// Asserted at every position of the word.
    pub transitions: Vec<Core>,
    /// Propositional constraints asserted at every instant.
    pub invariants: Vec<Core>,
    /// Atoms that belong to the state even if no formula mentions them.
    pub state_atoms: Vec<Atom>,
    pub history: PartialHistory,
}

impl Problem {
    pub fn new(formula: Core) -> Self {
        Problem {
            formula,
            transitions: Vec::new(),
            invariants: Vec::new(),
            state_atoms: Vec::new(),
            history: PartialHistory::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EncodedProblem {
    pub varmap: VarMap,
    pub closure: Closure,
    pub circuit: Circuit,
    pub engine: Engine,
    pub loop_free: bool,
    pub k: usize,
    pub root: NodeId,
}

impl EncodedProblem {
    pub fn root_instant(&self) -> usize {
        self.varmap.root_instant
    }

    /// DIMACS comment symbols for atoms and selectors.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for (v, key) in self.varmap.back.iter().enumerate() {
            let var = v as u32 + 1;
            match key {
                VarKey::Atom { atom, instant } => out.push(Symbol {
                    name: self.closure.atom(*atom).to_string(),
                    var,
                    instant: *instant,
                }),
                VarKey::Loop(i) => out.push(Symbol {
                    name: "**LOOP**".into(),
                    var,
                    instant: *i,
                }),
                VarKey::Pool(p) => out.push(Symbol {
                    name: "**POOL**".into(),
                    var,
                    instant: *p,
                }),
                VarKey::Sub { .. } => {}
            }
        }
        out
    }
}

pub fn encode_mono(p: &Problem, k: usize) -> Result<EncodedProblem> {
    encode(p, k, Engine::Mono, false)
}

pub fn encode_bi(p: &Problem, k: usize) -> Result<EncodedProblem> {
    encode(p, k, Engine::Bi, false)
}

/// Mono-engine encoding over loop-free paths: no loop selectors, every
/// pair of instants differs in at least one state atom.
pub fn encode_loop_free(p: &Problem, k: usize) -> Result<EncodedProblem> {
    encode(p, k, Engine::Mono, true)
}

pub fn encode(p: &Problem, k: usize, engine: Engine, loop_free: bool) -> Result<EncodedProblem> {
    if loop_free && engine == Engine::Bi {
        return Err(Error::Encode("loop-free mode requires the mono engine".into()));
    }
    if loop_free && k < 1 {
        return Err(Error::Encode("loop-free mode needs a bound of at least 1".into()));
    }
    if !loop_free && k < 2 {
        return Err(Error::Encode(format!("bound {k} too small: the {engine} engine needs k >= 2")));
    }
    p.history.check_consistent()?;

    let mut closure = Closure::new();
    for a in &p.state_atoms {
        closure.add(&Core::Atom(a.clone()));
    }
    let root = closure.add(&p.formula);
    let transitions: Vec<NodeId> = p.transitions.iter().map(|t| closure.add(t)).collect();
    let invariants: Vec<NodeId> = p.invariants.iter().map(|t| closure.add(t)).collect();

    let mut enc = Encoder::new(closure, k, engine, loop_free);
    enc.allocate_fixed();
    enc.define_all();
    if !loop_free {
        enc.selectors();
        enc.eventualities();
    } else {
        enc.all_different();
    }

    let root_instant = if engine == Engine::Mono { 1 } else { 0 };
    let r = enc.sig(root, 0, root_instant);
    enc.circuit.assert(r);
    for &t in &transitions {
        let last = if loop_free { k - 1 } else { k };
        let (lo, hi) = enc.copy_range(t);
        for c in lo..=hi {
            for j in 0..=last {
                let g = enc.guard(c, j);
                let s = enc.sig(t, c, j);
                let s = enc.circuit.implies(g, s);
                enc.circuit.assert(s);
            }
        }
    }
    for &inv in &invariants {
        for j in 0..=k {
            let s = enc.sig(inv, 0, j);
            enc.circuit.assert(s);
        }
    }
    enc.history(&p.history)?;

    let mut varmap = enc.vm;
    varmap.root_instant = root_instant;
    varmap.root_var = varmap.call(&enc.closure, root, root_instant).ok();
    Ok(EncodedProblem {
        varmap,
        closure: enc.closure,
        circuit: enc.circuit,
        engine,
        loop_free,
        k,
        root,
    })
}

struct Encoder {
    closure: Closure,
    vm: VarMap,
    circuit: Circuit,
    k: usize,
    engine: Engine,
    loop_free: bool,
    /// (future, past) depth per node.
    depth: Vec<(i32, i32)>,
    in_loop: Vec<Sig>,
    in_pool: Vec<Sig>,
}

impl Encoder {
    fn new(closure: Closure, k: usize, engine: Engine, loop_free: bool) -> Self {
        let mut depth: Vec<(i32, i32)> = Vec::with_capacity(closure.len());
        for id in closure.ids() {
            let node = closure.node(id);
            let (mut f, mut p) = (0, 0);
            for c in node.children() {
                f = f.max(depth[c.index()].0);
                p = p.max(depth[c.index()].1);
            }
            depth.push(match node.tense() {
                Tense::Future => (f + 1, p),
                Tense::Past => (f, p + 1),
                _ => (f, p),
            });
        }
        Encoder {
            closure,
            vm: VarMap::new(k),
            circuit: Circuit::new(),
            k,
            engine,
            loop_free,
            depth,
            in_loop: Vec::new(),
            in_pool: Vec::new(),
        }
    }

    /// Copies in which node `n` has its own variables.
    fn copy_range(&self, n: NodeId) -> (i32, i32) {
        if self.loop_free {
            return (0, 0);
        }
        let (f, p) = self.depth[n.index()];
        let lo = if self.engine == Engine::Bi { -f } else { 0 };
        (lo, p)
    }

    fn allocate_fixed(&mut self) {
        let k = self.k;
        let n_atoms = self.closure.atoms().len() as u32;
        for a in 0..n_atoms {
            for t in 0..=k {
                self.vm.alloc(VarKey::Atom {
                    atom: AtomId(a),
                    instant: t,
                });
            }
        }
        self.vm.numvar = self.vm.len();
        for id in self.closure.ids() {
            if let Node::Atom(a) = self.closure.node(id) {
                self.vm.atom_nodes.insert(*a, id);
            }
        }
        if self.loop_free {
            return;
        }
        for i in 1..=k {
            let v = self.vm.alloc(VarKey::Loop(i));
            self.vm.loop_selectors.push(v);
        }
        if self.engine == Engine::Bi {
            for p in 0..k {
                let v = self.vm.alloc(VarKey::Pool(p));
                self.vm.pool_selectors.push(v);
            }
        }
        // in_loop[j]: instant j lies inside the loop [i..k]
        let mut acc = Sig::FALSE;
        self.in_loop.push(acc);
        for i in 1..=k {
            let l = self.loop_sel(i);
            acc = self.circuit.or2(acc, l);
            self.in_loop.push(acc);
        }
        // in_pool[j]: instant j lies inside the past period [0..p]
        self.in_pool = vec![Sig::FALSE; k + 1];
        if self.engine == Engine::Bi {
            let mut acc = Sig::FALSE;
            for p in (0..k).rev() {
                let s = self.pool_sel(p);
                acc = self.circuit.or2(acc, s);
                self.in_pool[p] = acc;
            }
        }
    }

    fn loop_sel(&mut self, i: usize) -> Sig {
        let v = self.vm.loop_selectors[i - 1];
        self.circuit.var(v)
    }

    fn pool_sel(&mut self, p: usize) -> Sig {
        let v = self.vm.pool_selectors[p];
        self.circuit.var(v)
    }

    fn guard(&self, c: i32, j: usize) -> Sig {
        match c {
            0 => Sig::TRUE,
            c if c > 0 => self.in_loop[j],
            _ => self.in_pool[j],
        }
    }

    /// Signal of node `n` at position `(c, j)`, with `c` clamped into the
    /// node's copy range.
    fn sig(&mut self, n: NodeId, c: i32, j: usize) -> Sig {
        let (lo, hi) = self.copy_range(n);
        let c = c.clamp(lo, hi);
        match self.closure.node(n) {
            Node::True => Sig::TRUE,
            Node::False => Sig::FALSE,
            Node::Atom(a) => {
                let v = self.vm.atom_var(*a, j);
                self.circuit.var(v)
            }
            _ => {
                let v = self.vm.alloc(VarKey::Sub {
                    node: n,
                    copy: c,
                    instant: j,
                });
                self.circuit.var(v)
            }
        }
    }

    /// Value of `x` at the successor of `(c, j)`. `weak` decides the value
    /// past the end of a loop-free path.
    fn next(&mut self, x: NodeId, c: i32, j: usize, weak: bool) -> Sig {
        let k = self.k;
        if self.loop_free {
            return if j < k {
                self.sig(x, 0, j + 1)
            } else {
                Circuit::constant(weak)
            };
        }
        if j < k {
            if c < 0 {
                let p = self.pool_sel(j);
                let wrap = self.sig(x, c + 1, 0);
                let stay = self.sig(x, c, j + 1);
                return self.circuit.ite(p, wrap, stay);
            }
            return self.sig(x, c, j + 1);
        }
        let mut alts = Vec::with_capacity(k);
        for i in 1..=k {
            let l = self.loop_sel(i);
            let s = self.sig(x, c + 1, i);
            alts.push(self.circuit.and2(l, s));
        }
        self.circuit.or(alts)
    }

    /// Value of `x` at the predecessor of `(c, j)`; `origin` is used before
    /// instant 0 of the mono-infinite word.
    fn prev(&mut self, x: NodeId, c: i32, j: usize, origin: bool) -> Sig {
        let k = self.k;
        if c > 0 {
            if j == 0 {
                return Circuit::constant(origin);
            }
            let l = self.loop_sel(j);
            let wrap = self.sig(x, c - 1, k);
            let stay = self.sig(x, c, j - 1);
            return self.circuit.ite(l, wrap, stay);
        }
        if j > 0 {
            return self.sig(x, c, j - 1);
        }
        if self.engine == Engine::Mono || self.loop_free {
            return Circuit::constant(origin);
        }
        let mut alts = Vec::with_capacity(k);
        for p in 0..k {
            let s = self.pool_sel(p);
            let v = self.sig(x, c - 1, p);
            alts.push(self.circuit.and2(s, v));
        }
        self.circuit.or(alts)
    }

    fn define_all(&mut self) {
        let ids: Vec<NodeId> = self.closure.ids().collect();
        for n in ids {
            let node = self.closure.node(n).clone();
            if matches!(node, Node::True | Node::False | Node::Atom(_)) {
                continue;
            }
            let (lo, hi) = self.copy_range(n);
            for c in lo..=hi {
                for j in 0..=self.k {
                    let var = self.sig(n, c, j);
                    let def = self.define(n, &node, c, j);
                    let s = self.circuit.iff(var, def);
                    self.circuit.assert(s);
                }
            }
        }
    }

    fn define(&mut self, n: NodeId, node: &Node, c: i32, j: usize) -> Sig {
        match node {
            Node::True | Node::False | Node::Atom(_) => unreachable!("no definition"),
            Node::Not(a) => !self.sig(*a, c, j),
            Node::And(xs) => {
                let v: Vec<Sig> = xs.iter().map(|&x| self.sig(x, c, j)).collect();
                self.circuit.and(v)
            }
            Node::Or(xs) => {
                let v: Vec<Sig> = xs.iter().map(|&x| self.sig(x, c, j)).collect();
                self.circuit.or(v)
            }
            Node::Implies(a, b) => {
                let (a, b) = (self.sig(*a, c, j), self.sig(*b, c, j));
                self.circuit.implies(a, b)
            }
            Node::Iff(a, b) => {
                let (a, b) = (self.sig(*a, c, j), self.sig(*b, c, j));
                self.circuit.iff(a, b)
            }
            Node::Next(a) => self.next(*a, c, j, false),
            Node::Yesterday(a) => self.prev(*a, c, j, false),
            Node::Zeta(a) => self.prev(*a, c, j, true),
            Node::Until(a, b) => {
                let (sa, sb) = (self.sig(*a, c, j), self.sig(*b, c, j));
                let nx = self.next(n, c, j, false);
                let keep = self.circuit.and2(sa, nx);
                self.circuit.or2(sb, keep)
            }
            Node::Release(a, b) => {
                let (sa, sb) = (self.sig(*a, c, j), self.sig(*b, c, j));
                let nx = self.next(n, c, j, true);
                let keep = self.circuit.or2(sa, nx);
                self.circuit.and2(sb, keep)
            }
            Node::Since(a, b) => {
                let (sa, sb) = (self.sig(*a, c, j), self.sig(*b, c, j));
                let pv = self.prev(n, c, j, false);
                let keep = self.circuit.and2(sa, pv);
                self.circuit.or2(sb, keep)
            }
            Node::Trigger(a, b) => {
                let (sa, sb) = (self.sig(*a, c, j), self.sig(*b, c, j));
                let pv = self.prev(n, c, j, true);
                let keep = self.circuit.or2(sa, pv);
                self.circuit.and2(sb, keep)
            }
        }
    }

    fn exactly_one(&mut self, vars: &[u32]) {
        let sigs: Vec<Sig> = vars.iter().map(|&v| self.circuit.var(v)).collect();
        let any = self.circuit.or(sigs.iter().copied());
        self.circuit.assert(any);
        for a in 0..sigs.len() {
            for b in a + 1..sigs.len() {
                let both = self.circuit.and2(sigs[a], sigs[b]);
                self.circuit.assert(!both);
            }
        }
    }

    fn selectors(&mut self) {
        let loops = self.vm.loop_selectors.clone();
        self.exactly_one(&loops);
        if self.engine == Engine::Bi {
            let pools = self.vm.pool_selectors.clone();
            self.exactly_one(&pools);
        }
    }

    /// Loops make the Until/Release recursions circular in their last copy
    /// (and Since/Trigger in their first past copy); these constraints pick
    /// the intended fixpoint. A live Until must meet `b` inside the loop, a
    /// failing Release must miss `b` inside the loop, and symmetrically in
    /// the past period.
    fn eventualities(&mut self) {
        let k = self.k;
        let ids: Vec<NodeId> = self.closure.ids().collect();
        for n in ids {
            let (future, strong, b) = match *self.closure.node(n) {
                Node::Until(_, b) => (true, true, b),
                Node::Release(_, b) => (true, false, b),
                Node::Since(_, b) if self.engine == Engine::Bi => (false, true, b),
                Node::Trigger(_, b) if self.engine == Engine::Bi => (false, false, b),
                _ => continue,
            };
            let (d, instants, at): (i32, Vec<usize>, usize) = if future {
                (self.copy_range(n).1, (1..=k).collect(), k)
            } else {
                (self.copy_range(n).0, (0..k).collect(), 0)
            };
            let mut aux = Sig::FALSE;
            for j in instants {
                let g = if future { self.in_loop[j] } else { self.in_pool[j] };
                let sb = self.sig(b, d, j);
                let sb = if strong { sb } else { !sb };
                let hit = self.circuit.and2(g, sb);
                aux = self.circuit.or2(aux, hit);
            }
            let node = self.sig(n, d, at);
            let alive = if strong { node } else { !node };
            let s = self.circuit.implies(alive, aux);
            self.circuit.assert(s);
        }
    }

    fn all_different(&mut self) {
        let k = self.k;
        let n_atoms = self.closure.atoms().len() as u32;
        for s in 0..=k {
            for t in s + 1..=k {
                let mut diffs = Vec::new();
                for a in 0..n_atoms {
                    let va = self.vm.atom_var(AtomId(a), s);
                    let vb = self.vm.atom_var(AtomId(a), t);
                    let (x, y) = (self.circuit.var(va), self.circuit.var(vb));
                    diffs.push(self.circuit.xor(x, y));
                }
                let d = self.circuit.or(diffs);
                self.circuit.assert(d);
            }
        }
    }

    fn history(&mut self, h: &PartialHistory) -> Result<()> {
        let k = self.k;
        for fact in &h.facts {
            if fact.instant > k {
                return Err(Error::History(format!(
                    "fact about {} at instant {} lies beyond the bound {k}",
                    fact.atom.display_name(),
                    fact.instant
                )));
            }
            let Some(a) = self.closure.find_atom(&fact.atom) else {
                return Err(Error::History(format!(
                    "atom {} does not occur in the specification",
                    fact.atom.display_name()
                )));
            };
            let v = self.vm.atom_var(a, fact.instant);
            let s = self.circuit.var(v);
            self.circuit.assert(if fact.value { s } else { !s });
        }
        if let Some(i) = h.loop_start {
            if self.loop_free || !(1..=k).contains(&i) {
                return Err(Error::History(format!("**LOOP** at {i} is not a valid loop start for bound {k}")));
            }
            let s = self.loop_sel(i);
            self.circuit.assert(s);
        }
        if let Some(p) = h.past_loop_end {
            if self.engine != Engine::Bi || p >= k {
                return Err(Error::History(format!(
                    "**POOL** at {p} needs the bi engine and an instant below {k}"
                )));
            }
            let s = self.pool_sel(p);
            self.circuit.assert(s);
        }
        Ok(())
    }
}
