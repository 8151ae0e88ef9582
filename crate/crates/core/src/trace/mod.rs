//! Lasso traces: decoding from solver models, history files, and the
//! semantic oracle in [`oracle`].

pub mod oracle;

use std::fmt::Write as _;

pub use oracle::{eval_lasso, eval_window};

use crate::cnf::SatResult;
use crate::encoder::{EncodedProblem, Engine};
use crate::error::{Error, Result};
use crate::formula::{Atom, Term};

/// A bounded ultimately periodic behaviour over instants `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoTrace {
    pub k: usize,
    pub engine: Engine,
    pub atoms: Vec<Atom>,
    /// `values[t][a]` is the value of `atoms[a]` at instant `t`.
    pub values: Vec<Vec<bool>>,
    /// The successor of instant `k` is `loop_start`. `None` only for
    /// loop-free paths.
    pub loop_start: Option<usize>,
    /// Bi engine: the instant before 0 is `past_loop_end`.
    pub past_loop_end: Option<usize>,
}

impl LassoTrace {
    /// All-false trace over `atoms`.
    pub fn new(k: usize, engine: Engine, atoms: Vec<Atom>, loop_start: Option<usize>, past_loop_end: Option<usize>) -> Self {
        let values = vec![vec![false; atoms.len()]; k + 1];
        LassoTrace {
            k,
            engine,
            atoms,
            values,
            loop_start,
            past_loop_end,
        }
    }

    pub fn atom_index(&self, atom: &Atom) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// Value at instant `t`; atoms the trace does not know are false.
    pub fn holds(&self, t: usize, atom: &Atom) -> bool {
        self.atom_index(atom).is_some_and(|a| self.values[t][a])
    }

    pub fn set(&mut self, t: usize, atom: &Atom, value: bool) {
        let a = match self.atom_index(atom) {
            Some(a) => a,
            None => {
                self.atoms.push(atom.clone());
                for row in &mut self.values {
                    row.push(false);
                }
                self.atoms.len() - 1
            }
        };
        self.values[t][a] = value;
    }

    /// Every atom value, selector included, as history facts.
    pub fn to_history(&self) -> PartialHistory {
        let mut facts = Vec::new();
        for t in 0..=self.k {
            for (a, atom) in self.atoms.iter().enumerate() {
                facts.push(Fact {
                    instant: t,
                    atom: atom.clone(),
                    value: self.values[t][a],
                });
            }
        }
        PartialHistory {
            facts,
            loop_start: self.loop_start,
            past_loop_end: self.past_loop_end,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fact {
    pub instant: usize,
    pub atom: Atom,
    pub value: bool,
}

/// Constraints for history checking and completion. Atoms without a fact
/// are unconstrained.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialHistory {
    pub facts: Vec<Fact>,
    pub loop_start: Option<usize>,
    pub past_loop_end: Option<usize>,
}

impl PartialHistory {
    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.loop_start.is_none() && self.past_loop_end.is_none()
    }

    pub fn check_consistent(&self) -> Result<()> {
        for (n, f) in self.facts.iter().enumerate() {
            if let Some(g) = self.facts[..n]
                .iter()
                .find(|g| g.instant == f.instant && g.atom == f.atom && g.value != f.value)
            {
                return Err(Error::History(format!(
                    "{} is both true and false at instant {}",
                    g.atom.display_name(),
                    f.instant
                )));
            }
        }
        Ok(())
    }

    /// Adds a false fact for every `(instant, atom)` in `0..=k × atoms`
    /// that has no fact yet.
    pub fn close_world(&mut self, atoms: &[Atom], k: usize) {
        for t in 0..=k {
            for a in atoms {
                if !self.facts.iter().any(|f| f.instant == t && &f.atom == a) {
                    self.facts.push(Fact {
                        instant: t,
                        atom: a.clone(),
                        value: false,
                    });
                }
            }
        }
    }
}

/// Reads atom values and loop selectors off a model.
pub fn decode(result: &SatResult, problem: &EncodedProblem) -> Result<LassoTrace> {
    let model = result
        .model
        .as_ref()
        .ok_or_else(|| Error::Encode("cannot decode an UNSAT result".into()))?;
    let vm = &problem.varmap;
    let value = |v: u32| -> Result<bool> {
        model
            .get(v as usize)
            .copied()
            .ok_or_else(|| Error::Encode(format!("model lacks variable {v}")))
    };
    let atoms = problem.closure.atoms().to_vec();
    let mut values = vec![vec![false; atoms.len()]; problem.k + 1];
    for var in 1..=vm.numvar {
        let (node, t) = vm.back_call(var)?;
        let crate::closure::Node::Atom(a) = problem.closure.node(node) else {
            return Err(Error::Encode(format!("variable {var} is not an atom")));
        };
        values[t][a.0 as usize] = value(var)?;
    }
    let pick = |sels: &[u32], offset: usize, what: &str| -> Result<usize> {
        let mut on = Vec::new();
        for (n, &v) in sels.iter().enumerate() {
            if value(v)? {
                on.push(n + offset);
            }
        }
        match on.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::Encode(format!("model sets {} {what} selectors", on.len()))),
        }
    };
    let loop_start = if problem.loop_free {
        None
    } else {
        Some(pick(&vm.loop_selectors, 1, "loop")?)
    };
    let past_loop_end = if problem.engine == Engine::Bi && !problem.loop_free {
        Some(pick(&vm.pool_selectors, 0, "pool")?)
    } else {
        None
    };
    Ok(LassoTrace {
        k: problem.k,
        engine: problem.engine,
        atoms,
        values,
        loop_start,
        past_loop_end,
    })
}

/// The history listing: one block per instant with loop markers and true
/// atoms, then an end line.
pub fn render_history(trace: &LassoTrace) -> String {
    let mut out = String::new();
    for t in 0..=trace.k {
        let _ = writeln!(out, "------ time {t} ------");
        if trace.loop_start == Some(t) {
            out.push_str("  **LOOP**\n");
        }
        if trace.past_loop_end == Some(t) {
            out.push_str("  **POOL**\n");
        }
        for (a, atom) in trace.atoms.iter().enumerate() {
            if trace.values[t][a] {
                let _ = writeln!(out, "  {}", atom.display_name());
            }
        }
        out.push('\n');
    }
    out.push_str("------ end ------\n");
    out
}

pub fn write_history(trace: &LassoTrace, sink: &mut dyn std::io::Write) -> std::io::Result<()> {
    sink.write_all(render_history(trace).as_bytes())
}

fn parse_term(s: &str) -> Result<Term> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::History("empty value".into()));
    }
    Ok(s.parse::<i64>().map(Term::Int).unwrap_or_else(|_| Term::sym(s)))
}

/// Parses an atom in its history form: `NAME`, `NAME(A,B)`, `NAME = V`,
/// `NAME[I] = V`.
pub fn parse_atom(s: &str) -> Result<Atom> {
    let s = s.trim();
    let bad = || Error::History(format!("cannot read atom `{s}`"));
    if let Some((lhs, rhs)) = s.split_once('=') {
        let value = parse_term(rhs)?;
        let lhs = lhs.trim();
        if let Some((name, rest)) = lhs.split_once('[') {
            let idx = rest.strip_suffix(']').ok_or_else(bad)?;
            return Ok(Atom::Array(name.trim().to_ascii_uppercase(), parse_term(idx)?, value));
        }
        if lhs.is_empty() || lhs.contains(char::is_whitespace) {
            return Err(bad());
        }
        return Ok(Atom::Item(lhs.to_ascii_uppercase(), value));
    }
    if let Some((name, rest)) = s.split_once('(') {
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let args = args.split(',').map(parse_term).collect::<Result<Vec<_>>>()?;
        return Ok(Atom::Prop(name.trim().to_ascii_uppercase(), args));
    }
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    Ok(Atom::prop(s))
}

/// Reads a history listing. Listed atoms become true facts, `!ATOM` lines
/// false facts; `**LOOP**` and `**POOL**` pin the selectors. Instants may be
/// omitted and the end line is optional.
pub fn parse_history(text: &str) -> Result<PartialHistory> {
    let mut h = PartialHistory::default();
    let mut current: Option<usize> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let at = |msg: String| Error::History(format!("line {}: {msg}", n + 1));
        if line.is_empty() {
            continue;
        }
        if line.starts_with("------") {
            let inner = line.trim_matches('-').trim();
            if inner == "end" {
                current = None;
                continue;
            }
            let t = inner
                .strip_prefix("time")
                .and_then(|r| r.trim().parse::<usize>().ok())
                .ok_or_else(|| at(format!("malformed header `{line}`")))?;
            current = Some(t);
            continue;
        }
        let t = current.ok_or_else(|| at(format!("`{line}` outside a time block")))?;
        match line {
            "**LOOP**" => h.loop_start = Some(t),
            "**POOL**" => h.past_loop_end = Some(t),
            _ => {
                let (value, body) = match line.strip_prefix('!') {
                    Some(rest) => (false, rest),
                    None => (true, line),
                };
                let atom = parse_atom(body).map_err(|e| at(e.to_string()))?;
                h.facts.push(Fact { instant: t, atom, value });
            }
        }
    }
    h.check_consistent()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lamp_trace() -> LassoTrace {
        let atoms = vec![Atom::prop("on"), Atom::prop("off"), Atom::prop("l")];
        let mut t = LassoTrace::new(10, Engine::Bi, atoms, Some(1), Some(9));
        for i in 1..=3 {
            t.set(i, &Atom::prop("on"), true);
        }
        for i in 2..=4 {
            t.set(i, &Atom::prop("l"), true);
        }
        for i in 4..=9 {
            t.set(i, &Atom::prop("off"), true);
        }
        t
    }

    #[test]
    fn render_matches_listing_format() {
        let text = render_history(&lamp_trace());
        let expected_head = "------ time 0 ------\n\n------ time 1 ------\n  **LOOP**\n  ON\n\n------ time 2 ------\n  ON\n  L\n\n";
        assert!(text.starts_with(expected_head), "{text}");
        assert!(text.contains("------ time 9 ------\n  **POOL**\n  OFF\n\n------ time 10 ------\n\n------ end ------\n"));
    }

    #[test]
    fn render_parse_roundtrip() {
        let t = lamp_trace();
        let h = parse_history(&render_history(&t)).unwrap();
        assert_eq!(h.loop_start, Some(1));
        assert_eq!(h.past_loop_end, Some(9));
        assert_eq!(h.facts.len(), 3 + 3 + 6);
        assert!(h.facts.iter().all(|f| f.value && t.holds(f.instant, &f.atom)));
    }

    #[test]
    fn item_and_array_lines() {
        let mut t = LassoTrace::new(2, Engine::Mono, vec![], Some(1), None);
        t.set(2, &Atom::Item("CONT".into(), Term::Int(6)), true);
        t.set(1, &Atom::Array("ARR".into(), Term::Int(6), Term::sym("off")), true);
        t.set(0, &Atom::Prop("PRED".into(), vec![Term::Int(1), Term::Int(2)]), true);
        let text = render_history(&t);
        assert!(text.contains("------ time 2 ------\n  CONT = 6\n"));
        assert!(text.contains("  ARR[6] = OFF\n"));
        assert!(text.contains("  PRED(1,2)\n"));
        let h = parse_history(&text).unwrap();
        assert_eq!(h.facts.len(), 3);
        for f in &h.facts {
            assert!(t.holds(f.instant, &f.atom), "{f:?}");
        }
    }

    #[test]
    fn parse_partial_and_negative() {
        assert!(parse_history("").unwrap().is_empty());
        let h = parse_history("------ time 1 ------\n  ON\n  !OFF\n").unwrap();
        assert_eq!(
            h.facts,
            vec![
                Fact {
                    instant: 1,
                    atom: Atom::prop("on"),
                    value: true
                },
                Fact {
                    instant: 1,
                    atom: Atom::prop("off"),
                    value: false
                }
            ]
        );
        assert!(parse_history("ON\n").is_err());
        assert!(parse_history("------ tim 1 ------\n").is_err());
        assert!(parse_history("------ time 1 ------\nON\n!ON\n").is_err());
    }

    #[test]
    fn close_world_fills_gaps() {
        let mut h = parse_history("------ time 0 ------\n  P\n").unwrap();
        h.close_world(&[Atom::prop("p"), Atom::prop("q")], 1);
        assert_eq!(h.facts.len(), 4);
        assert_eq!(h.facts.iter().filter(|f| f.value).count(), 1);
    }
}
