//! Tseitin conversion of circuits to CNF, and DIMACS I/O.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::circuit::{Circuit, Gate, Sig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfInstance {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

/// Outcome of a solver run. `model[v]` is the value of variable `v`;
/// index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub verdict: Verdict,
    pub model: Option<Vec<bool>>,
}

impl SatResult {
    pub fn unsat() -> Self {
        SatResult {
            verdict: Verdict::Unsat,
            model: None,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Sat
    }

    pub fn value(&self, var: u32) -> Option<bool> {
        self.model.as_ref().and_then(|m| m.get(var as usize).copied())
    }
}

/// Comment line `c <name> <var-id> <instant>` for external decoders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub var: u32,
    pub instant: usize,
}

impl CnfInstance {
    /// Checks a total assignment against every clause.
    pub fn check_model(&self, model: &[bool]) -> Result<()> {
        for (n, clause) in self.clauses.iter().enumerate() {
            let sat = clause.iter().any(|&l| {
                let v = l.unsigned_abs() as usize;
                model.get(v).copied().unwrap_or(false) == (l > 0)
            });
            if !sat {
                return Err(Error::BadModel { clause: n });
            }
        }
        Ok(())
    }

    /// Adds `clause` sorted by variable, deduplicated; tautologies are dropped.
    pub fn push(&mut self, mut clause: Vec<i32>) {
        clause.sort_unstable_by_key(|l| (l.abs(), *l));
        clause.dedup();
        if clause.windows(2).any(|w| w[0] == -w[1]) {
            return;
        }
        self.clauses.push(clause);
    }
}

/// Structural CNF conversion. Circuit variables keep their ids; each
/// internal gate that needs a name gets a fresh variable above
/// `max(num_vars, circuit.max_var())`.
pub fn to_cnf(circuit: &Circuit, num_vars: u32) -> CnfInstance {
    let mut conv = Converter {
        circuit,
        lits: HashMap::new(),
        next_var: num_vars.max(circuit.max_var()) + 1,
        out: CnfInstance::default(),
    };
    let mut top: Vec<TopLevel> = Vec::new();
    let mut stack: Vec<Sig> = circuit.assertions().to_vec();
    while let Some(s) = stack.pop() {
        if s == Sig::TRUE {
            continue;
        }
        if s == Sig::FALSE {
            top.push(TopLevel::Empty);
            continue;
        }
        match (circuit.gate(s), s.is_neg()) {
            (Gate::And(xs), false) => stack.extend(xs.iter().copied()),
            (Gate::And(xs), true) => top.push(TopLevel::Clause(xs.iter().map(|&x| !x).collect())),
            (Gate::Xor(a, b), neg) => {
                let (a, b) = (*a, *b);
                if neg {
                    // a <-> b: alias a defined gate onto a variable when possible
                    if conv.try_alias(a, b) || conv.try_alias(b, a) {
                        continue;
                    }
                    top.push(TopLevel::Clause(vec![!a, b]));
                    top.push(TopLevel::Clause(vec![a, !b]));
                } else {
                    top.push(TopLevel::Clause(vec![a, b]));
                    top.push(TopLevel::Clause(vec![!a, !b]));
                }
            }
            _ => top.push(TopLevel::Clause(vec![s])),
        }
    }
    let mut needed: Vec<u32> = Vec::new();
    for t in &top {
        if let TopLevel::Clause(c) = t {
            needed.extend(c.iter().map(|s| s.gate()));
        }
    }
    needed.extend(conv.lits.keys().copied().collect::<Vec<_>>());
    conv.define_all(needed);
    for t in top {
        match t {
            TopLevel::Empty => conv.out.clauses.push(Vec::new()),
            TopLevel::Clause(c) => {
                let lits = c.iter().map(|&s| conv.lit(s)).collect::<Option<Vec<i32>>>();
                match lits {
                    Some(l) => conv.out.push(l),
                    None => {
                        // some literal is constant: keep the clause unless satisfied
                        let mut clause = Vec::new();
                        let mut satisfied = false;
                        for &s in &c {
                            if s == Sig::TRUE {
                                satisfied = true;
                            } else if s != Sig::FALSE {
                                clause.push(conv.lit(s).expect("non-constant"));
                            }
                        }
                        if !satisfied {
                            if clause.is_empty() {
                                conv.out.clauses.push(Vec::new());
                            } else {
                                conv.out.push(clause);
                            }
                        }
                    }
                }
            }
        }
    }
    conv.out.num_vars = conv.next_var - 1;
    conv.out
}

enum TopLevel {
    Empty,
    Clause(Vec<Sig>),
}

struct Converter<'a> {
    circuit: &'a Circuit,
    lits: HashMap<u32, i32>,
    next_var: u32,
    out: CnfInstance,
}

impl Converter<'_> {
    fn try_alias(&mut self, var_side: Sig, gate_side: Sig) -> bool {
        let Gate::Var(v) = self.circuit.gate(var_side) else {
            return false;
        };
        if matches!(self.circuit.gate(gate_side), Gate::Var(_) | Gate::True) {
            return false;
        }
        let g = gate_side.gate();
        if self.lits.contains_key(&g) {
            return false;
        }
        let lv = if var_side.is_neg() { -(*v as i32) } else { *v as i32 };
        self.lits.insert(g, if gate_side.is_neg() { -lv } else { lv });
        true
    }

    /// Literal of a non-constant signal; gate must already be defined.
    fn lit(&self, s: Sig) -> Option<i32> {
        if s.is_const() {
            return None;
        }
        let g = s.gate();
        let l = match self.circuit.gates()[g as usize] {
            Gate::Var(v) => v as i32,
            _ => self.lits[&g],
        };
        Some(if s.is_neg() { -l } else { l })
    }

    /// Emits definitions for every gate reachable from `roots`, children
    /// first (gate ids are topologically ordered).
    fn define_all(&mut self, roots: Vec<u32>) {
        let gates = self.circuit.gates();
        let mut reach = vec![false; gates.len()];
        let mut stack = roots;
        while let Some(g) = stack.pop() {
            if reach[g as usize] {
                continue;
            }
            reach[g as usize] = true;
            match &gates[g as usize] {
                Gate::And(xs) => stack.extend(xs.iter().map(|s| s.gate())),
                Gate::Xor(a, b) => stack.extend([a.gate(), b.gate()]),
                _ => {}
            }
        }
        for g in 0..gates.len() {
            if !reach[g] {
                continue;
            }
            let g32 = g as u32;
            match &gates[g] {
                Gate::True | Gate::Var(_) => {}
                Gate::And(xs) => {
                    let out = self.fresh(g32);
                    let mut big = vec![out];
                    let mut const_false = false;
                    for &x in xs {
                        match self.lit(x) {
                            Some(l) => {
                                self.out.push(vec![-out, l]);
                                big.push(-l);
                            }
                            None => const_false |= x == Sig::FALSE,
                        }
                    }
                    if const_false {
                        self.out.push(vec![-out]);
                    } else {
                        self.out.push(big);
                    }
                }
                Gate::Xor(a, b) => {
                    let out = self.fresh(g32);
                    let (la, lb) = (self.lit(*a).expect("xor child"), self.lit(*b).expect("xor child"));
                    self.out.push(vec![-out, la, lb]);
                    self.out.push(vec![-out, -la, -lb]);
                    self.out.push(vec![out, -la, lb]);
                    self.out.push(vec![out, la, -lb]);
                }
            }
        }
    }

    fn fresh(&mut self, g: u32) -> i32 {
        if let Some(&l) = self.lits.get(&g) {
            return l;
        }
        let v = self.next_var as i32;
        self.next_var += 1;
        self.lits.insert(g, v);
        v
    }
}

/// Writes DIMACS CNF. Symbol comments, if any, precede the header.
pub fn emit_dimacs(inst: &CnfInstance, symbols: &[Symbol], sink: &mut dyn Write) -> std::io::Result<()> {
    let mut buf = String::new();
    for s in symbols {
        let _ = writeln!(buf, "c {} {} {}", s.name.replace(' ', ""), s.var, s.instant);
    }
    let _ = writeln!(buf, "p cnf {} {}", inst.num_vars, inst.clauses.len());
    for clause in &inst.clauses {
        for l in clause {
            let _ = write!(buf, "{l} ");
        }
        buf.push_str("0\n");
    }
    sink.write_all(buf.as_bytes())
}

pub fn dimacs_string(inst: &CnfInstance, symbols: &[Symbol]) -> String {
    let mut out = Vec::new();
    emit_dimacs(inst, symbols, &mut out).expect("writing to memory");
    String::from_utf8(out).expect("ascii")
}

/// Parses DIMACS CNF; comment lines are skipped.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| Error::Dimacs {
                        line: line_no,
                        msg: format!("bad variable count `{v}`"),
                    })?;
                    let c = c.parse().map_err(|_| Error::Dimacs {
                        line: line_no,
                        msg: format!("bad clause count `{c}`"),
                    })?;
                    header = Some((v, c));
                }
                _ => {
                    return Err(Error::Dimacs {
                        line: line_no,
                        msg: "malformed header".into(),
                    })
                }
            }
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(Error::Dimacs {
                line: line_no,
                msg: "clause before `p cnf` header".into(),
            });
        };
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| Error::Dimacs {
                line: line_no,
                msg: format!("bad literal `{tok}`"),
            })?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if l.unsigned_abs() > num_vars {
                    return Err(Error::Dimacs {
                        line: line_no,
                        msg: format!("literal {l} exceeds declared {num_vars} variables"),
                    });
                }
                current.push(l);
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(Error::Dimacs {
            line: 0,
            msg: "missing `p cnf` header".into(),
        });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(Error::Dimacs {
            line: 0,
            msg: format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfInstance { num_vars, clauses })
}
