//! Structurally hashed and/xor/inverter circuits over solver variables.

use std::collections::HashMap;

/// A possibly negated reference to a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sig(u32);

impl Sig {
    pub const TRUE: Sig = Sig(0);
    pub const FALSE: Sig = Sig(1);

    fn new(gate: u32, neg: bool) -> Sig {
        Sig(gate << 1 | neg as u32)
    }

    pub fn gate(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.gate() == 0
    }

    fn positive(self) -> Sig {
        Sig(self.0 & !1)
    }
}

impl std::ops::Not for Sig {
    type Output = Sig;
    fn not(self) -> Sig {
        Sig(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    True,
    Var(u32),
    And(Vec<Sig>),
    Xor(Sig, Sig),
}

#[derive(Debug, Clone)]
pub struct Circuit {
    gates: Vec<Gate>,
    index: HashMap<Gate, u32>,
    assertions: Vec<Sig>,
    max_var: u32,
}

impl Default for Circuit {
    fn default() -> Self {
        Self::new()
    }
}

impl Circuit {
    pub fn new() -> Self {
        let mut index = HashMap::new();
        index.insert(Gate::True, 0);
        Circuit {
            gates: vec![Gate::True],
            index,
            assertions: Vec::new(),
            max_var: 0,
        }
    }

    fn intern(&mut self, g: Gate) -> Sig {
        if let Some(&i) = self.index.get(&g) {
            return Sig::new(i, false);
        }
        let i = self.gates.len() as u32;
        self.gates.push(g.clone());
        self.index.insert(g, i);
        Sig::new(i, false)
    }

    pub fn gate(&self, s: Sig) -> &Gate {
        &self.gates[s.gate() as usize]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// Largest variable referenced so far.
    pub fn max_var(&self) -> u32 {
        self.max_var
    }

    pub fn var(&mut self, v: u32) -> Sig {
        assert!(v > 0, "solver variables are 1-based");
        self.max_var = self.max_var.max(v);
        self.intern(Gate::Var(v))
    }

    pub fn constant(b: bool) -> Sig {
        if b {
            Sig::TRUE
        } else {
            Sig::FALSE
        }
    }

    pub fn and(&mut self, xs: impl IntoIterator<Item = Sig>) -> Sig {
        let mut v: Vec<Sig> = Vec::new();
        for x in xs {
            if x == Sig::FALSE {
                return Sig::FALSE;
            }
            if x == Sig::TRUE {
                continue;
            }
            // flatten positive and-gates
            if !x.is_neg() {
                if let Gate::And(children) = self.gate(x) {
                    v.extend(children.iter().copied());
                    continue;
                }
            }
            v.push(x);
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|w| w[0] == !w[1]) {
            return Sig::FALSE;
        }
        match v.len() {
            0 => Sig::TRUE,
            1 => v[0],
            _ => self.intern(Gate::And(v)),
        }
    }

    pub fn or(&mut self, xs: impl IntoIterator<Item = Sig>) -> Sig {
        let negs: Vec<Sig> = xs.into_iter().map(|x| !x).collect();
        !self.and(negs)
    }

    pub fn and2(&mut self, a: Sig, b: Sig) -> Sig {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: Sig, b: Sig) -> Sig {
        self.or([a, b])
    }

    pub fn implies(&mut self, a: Sig, b: Sig) -> Sig {
        self.or([!a, b])
    }

    pub fn xor(&mut self, a: Sig, b: Sig) -> Sig {
        if a.is_const() {
            return if a == Sig::FALSE { b } else { !b };
        }
        if b.is_const() {
            return if b == Sig::FALSE { a } else { !a };
        }
        if a == b {
            return Sig::FALSE;
        }
        if a == !b {
            return Sig::TRUE;
        }
        let neg = a.is_neg() ^ b.is_neg();
        let (mut x, mut y) = (a.positive(), b.positive());
        if y < x {
            std::mem::swap(&mut x, &mut y);
        }
        let g = self.intern(Gate::Xor(x, y));
        if neg {
            !g
        } else {
            g
        }
    }

    pub fn iff(&mut self, a: Sig, b: Sig) -> Sig {
        !self.xor(a, b)
    }

    pub fn ite(&mut self, c: Sig, t: Sig, e: Sig) -> Sig {
        let a = self.and2(c, t);
        let b = self.and2(!c, e);
        self.or2(a, b)
    }

    /// Adds a top-level constraint.
    pub fn assert(&mut self, s: Sig) {
        self.assertions.push(s);
    }

    pub fn assertions(&self) -> &[Sig] {
        &self.assertions
    }

    /// Evaluates `s` under an assignment of the variables.
    pub fn eval(&self, s: Sig, value: &dyn Fn(u32) -> bool) -> bool {
        let mut memo: HashMap<u32, bool> = HashMap::new();
        self.eval_memo(s, value, &mut memo)
    }

    fn eval_memo(&self, s: Sig, value: &dyn Fn(u32) -> bool, memo: &mut HashMap<u32, bool>) -> bool {
        let g = s.gate();
        let v = if let Some(&v) = memo.get(&g) {
            v
        } else {
            let v = match &self.gates[g as usize] {
                Gate::True => true,
                Gate::Var(x) => value(*x),
                Gate::And(xs) => xs.iter().all(|&x| self.eval_memo(x, value, memo)),
                Gate::Xor(a, b) => self.eval_memo(*a, value, memo) ^ self.eval_memo(*b, value, memo),
            };
            memo.insert(g, v);
            v
        };
        v ^ s.is_neg()
    }

    /// True if every assertion holds under `value`.
    pub fn satisfied_by(&self, value: &dyn Fn(u32) -> bool) -> bool {
        let mut memo = HashMap::new();
        self.assertions.iter().all(|&a| self.eval_memo(a, value, &mut memo))
    }
}
