//! Declarative spec files.
//!
//! A spec is a sequence of top-level sections:
//!
//! ```text
//! (define-domain turn-d (1 2 3))
//! (define-item  turn turn-d)
//! (define-array state turn-d (N T C))
//! (declare (-P- on) (turn= 1))
//! (init     F)
//! (trans    F ...)            ; repeatable, asserted at every instant
//! (property F)
//! (history  (time 1 (-P- on) (!! (-P- off))) (loop 1))
//! (options  :bound 30 :engine mono :loop-free nil :solver minisat)
//! ```
//!
//! Integer ranges are written `(range lo hi)`; a domain can also be a literal
//! list or the name of a `define-domain`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::desugar::Desugarer;
use crate::encoder::Engine;
use crate::error::{Error, Result};
use crate::formula::{Atom, Cond, Core, Ends, Formula, Incl, MetricOp, RangeOp, Term};
use crate::operational::{ArrayDecl, Declarations, ItemDecl};
use crate::sat::SolverId;
use crate::sexpr::{read_sexprs, Pos, SExpr};
use crate::trace::{Fact, PartialHistory};

/// Options a spec may carry; command-line flags take precedence.
#[derive(Debug, Clone, PartialEq, Eq)]
#[derive(Default)]
pub struct Options {
    pub bound: Option<usize>,
    pub engine: Option<Engine>,
    pub loop_free: bool,
    pub solver: Option<SolverId>,
}


#[derive(Debug, Clone, Default)]
pub struct SpecDocument {
    pub decls: Declarations,
    pub domains: BTreeMap<String, Vec<Term>>,
    pub init: Option<Formula>,
    pub transitions: Vec<Formula>,
    pub property: Option<Formula>,
    pub history: Option<PartialHistory>,
    pub options: Options,
}

/// The document's formulas after desugaring and domain validation.
#[derive(Debug, Clone)]
pub struct LoweredSpec {
    pub init: Option<Core>,
    pub transitions: Vec<Core>,
    pub property: Option<Core>,
    pub invariants: Vec<Core>,
    pub declared_atoms: Vec<Atom>,
    pub warnings: Vec<String>,
}

impl SpecDocument {
    pub fn from_str(text: &str) -> Result<SpecDocument> {
        parse_spec(&read_sexprs(text)?)
    }

    pub fn from_file(path: &Path) -> Result<SpecDocument> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_str(&text).map_err(|e| Error::InFile {
            path: path.to_path_buf(),
            source: Box::new(e),
        })
    }

    pub fn lower(&self) -> Result<LoweredSpec> {
        let mut d = Desugarer::new();
        let mut lower = |f: &Formula| -> Result<Core> {
            let c = d.run(f)?;
            self.decls.validate(&c)?;
            Ok(c)
        };
        let init = self.init.as_ref().map(&mut lower).transpose()?;
        let transitions = self.transitions.iter().map(&mut lower).collect::<Result<Vec<_>>>()?;
        let property = self.property.as_ref().map(&mut lower).transpose()?;
        Ok(LoweredSpec {
            init,
            transitions,
            property,
            invariants: self.decls.domain_constraints(),
            declared_atoms: self.decls.declared_atoms(),
            warnings: d.warnings,
        })
    }
}

fn err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Spec { pos, msg: msg.into() }
}

fn located(pos: Pos, what: &str, e: Error) -> Error {
    match e {
        e @ (Error::Spec { .. } | Error::Syntax { .. }) => e,
        other => err(pos, format!("in {what}: {other}")),
    }
}

/// Parses top-level forms into a validated document.
pub fn parse_spec(forms: &[SExpr]) -> Result<SpecDocument> {
    let mut doc = SpecDocument::default();
    let mut init_pos = None;
    let mut property_pos = None;
    let mut history_pos = None;
    let mut sections: Vec<(Pos, &'static str)> = Vec::new();

    for form in forms {
        let pos = form.pos();
        let items = form
            .as_list()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| err(pos, format!("expected a section, found `{form}`")))?;
        let head = items[0]
            .as_sym()
            .ok_or_else(|| err(pos, "section keyword must be a symbol"))?;
        let args = &items[1..];
        match head {
            "DEFINE-DOMAIN" => {
                let [name, dom] = args else {
                    return Err(err(pos, "usage: (define-domain name domain)"));
                };
                let name = symbol(name)?;
                let dom = parse_domain(dom, &doc.domains)?;
                doc.domains.insert(name.to_string(), dom);
            }
            "DEFINE-ITEM" => {
                let [name, dom] = args else {
                    return Err(err(pos, "usage: (define-item name domain)"));
                };
                let name = symbol(name)?;
                check_fresh(&doc.decls, name, pos)?;
                let dom = parse_domain(dom, &doc.domains)?;
                let decl = ItemDecl::new(name, dom).map_err(|e| located(pos, "define-item", e))?;
                doc.decls.items.push(decl);
            }
            "DEFINE-ARRAY" => {
                let [name, idx, val] = args else {
                    return Err(err(pos, "usage: (define-array name index-domain value-domain)"));
                };
                let name = symbol(name)?;
                check_fresh(&doc.decls, name, pos)?;
                let idx = parse_domain(idx, &doc.domains)?;
                let val = parse_domain(val, &doc.domains)?;
                let decl = ArrayDecl::new(name, idx, val).map_err(|e| located(pos, "define-array", e))?;
                doc.decls.arrays.push(decl);
            }
            "DECLARE" => {
                for a in args {
                    // bare names are shorthand for (-P- name)
                    let f = match a.as_sym() {
                        Some(name) => Formula::Atom(Atom::prop(name)),
                        None => FormulaParser::new(&doc).parse(a)?,
                    };
                    let c = Desugarer::new().run(&f).map_err(|e| located(a.pos(), "declare", e))?;
                    doc.decls.validate(&c).map_err(|e| located(a.pos(), "declare", e))?;
                    let mut atoms = Vec::new();
                    c.atoms(&mut atoms);
                    for atom in atoms {
                        if !doc.decls.atoms.contains(&atom) {
                            doc.decls.atoms.push(atom);
                        }
                    }
                }
            }
            "INIT" => {
                if let Some(prev) = init_pos {
                    return Err(err(pos, format!("duplicate init section (first at {prev})")));
                }
                let [f] = args else {
                    return Err(err(pos, "usage: (init formula)"));
                };
                init_pos = Some(pos);
                doc.init = Some(FormulaParser::new(&doc).parse(f)?);
                sections.push((pos, "init"));
            }
            "TRANS" => {
                for f in args {
                    let parsed = FormulaParser::new(&doc).parse(f)?;
                    doc.transitions.push(parsed);
                }
                sections.push((pos, "trans"));
            }
            "PROPERTY" => {
                if let Some(prev) = property_pos {
                    return Err(err(pos, format!("duplicate property section (first at {prev})")));
                }
                let [f] = args else {
                    return Err(err(pos, "usage: (property formula)"));
                };
                property_pos = Some(pos);
                doc.property = Some(FormulaParser::new(&doc).parse(f)?);
                sections.push((pos, "property"));
            }
            "HISTORY" => {
                if let Some(prev) = history_pos {
                    return Err(err(pos, format!("duplicate history section (first at {prev})")));
                }
                history_pos = Some(pos);
                doc.history = Some(parse_history_section(&doc, args)?);
            }
            "OPTIONS" => parse_options(&mut doc.options, args, pos)?,
            other => return Err(err(pos, format!("unknown section keyword `{other}`"))),
        }
    }

    // Desugar once up front so that bad offsets or domains are reported
    // against the section they came from.
    let mut d = Desugarer::new();
    let mut check = |f: &Formula, pos: Pos, what: &str| -> Result<()> {
        let c = d.run(f).map_err(|e| located(pos, what, e))?;
        doc.decls.validate(&c).map_err(|e| located(pos, what, e))
    };
    if let (Some(f), Some(pos)) = (&doc.init, init_pos) {
        check(f, pos, "init")?;
    }
    if let (Some(f), Some(pos)) = (&doc.property, property_pos) {
        check(f, pos, "property")?;
    }
    let trans_pos = sections.iter().find(|(_, w)| *w == "trans").map(|(p, _)| *p);
    for f in &doc.transitions {
        check(f, trans_pos.unwrap_or_default(), "trans")?;
    }
    Ok(doc)
}

fn check_fresh(decls: &Declarations, name: &str, pos: Pos) -> Result<()> {
    if decls.item(name).is_some() || decls.array(name).is_some() {
        return Err(err(pos, format!("`{name}` is already declared")));
    }
    Ok(())
}

fn symbol(e: &SExpr) -> Result<&str> {
    e.as_sym().ok_or_else(|| err(e.pos(), format!("expected a symbol, found `{e}`")))
}

fn int(e: &SExpr) -> Result<i64> {
    match e {
        SExpr::Int(i, _) => Ok(*i),
        _ => Err(err(e.pos(), format!("expected an integer, found `{e}`"))),
    }
}

fn term(e: &SExpr) -> Result<Term> {
    match e {
        SExpr::Int(i, _) => Ok(Term::Int(*i)),
        SExpr::Sym(s, _) => Ok(Term::Sym(s.clone())),
        SExpr::List(..) => Err(err(e.pos(), format!("expected a constant or variable, found `{e}`"))),
    }
}

/// `(range lo hi)`, a literal list, or a `define-domain` name.
pub fn parse_domain(e: &SExpr, domains: &BTreeMap<String, Vec<Term>>) -> Result<Vec<Term>> {
    match e {
        SExpr::Sym(name, pos) => domains
            .get(name)
            .cloned()
            .ok_or_else(|| err(*pos, format!("unknown domain `{name}`"))),
        SExpr::List(items, _) => {
            if let [SExpr::Sym(h, _), lo @ SExpr::Int(..), hi @ SExpr::Int(..)] = items.as_slice() {
                if h == "RANGE" {
                    let (lo, hi) = (int(lo)?, int(hi)?);
                    return Ok((lo..=hi).map(Term::Int).collect());
                }
            }
            items.iter().map(term).collect()
        }
        SExpr::Int(..) => Err(err(e.pos(), format!("expected a domain, found `{e}`"))),
    }
}

fn parse_options(opts: &mut Options, args: &[SExpr], pos: Pos) -> Result<()> {
    if !args.len().is_multiple_of(2) {
        return Err(err(pos, "options must be :key value pairs"));
    }
    for pair in args.chunks(2) {
        let key = symbol(&pair[0])?;
        let value = &pair[1];
        match key {
            ":BOUND" => {
                let k = int(value)?;
                if k < 1 {
                    return Err(err(value.pos(), "bound must be positive"));
                }
                opts.bound = Some(k as usize);
            }
            ":ENGINE" => {
                opts.engine = Some(
                    symbol(value)?
                        .parse()
                        .map_err(|e: String| err(value.pos(), e))?,
                )
            }
            ":LOOP-FREE" => {
                opts.loop_free = !matches!(symbol(value)?, "NIL" | "FALSE");
            }
            ":SOLVER" => {
                opts.solver = Some(
                    symbol(value)?
                        .to_ascii_lowercase()
                        .parse()
                        .map_err(|e: String| err(value.pos(), e))?,
                )
            }
            other => return Err(err(pair[0].pos(), format!("unknown option `{other}`"))),
        }
    }
    Ok(())
}

fn parse_history_section(doc: &SpecDocument, args: &[SExpr]) -> Result<PartialHistory> {
    let mut h = PartialHistory::default();
    for entry in args {
        let items = entry
            .as_list()
            .ok_or_else(|| err(entry.pos(), "history entries are (time n facts...), (loop n) or (pool n)"))?;
        match entry.head() {
            Some("TIME") if items.len() >= 2 => {
                let t = int(&items[1])?;
                if t < 0 {
                    return Err(err(items[1].pos(), "negative instant"));
                }
                for fact in &items[2..] {
                    let f = FormulaParser::new(doc).parse(fact)?;
                    let (atom, value) = match f {
                        Formula::Atom(a) => (a, true),
                        Formula::Not(inner) => match *inner {
                            Formula::Atom(a) => (a, false),
                            _ => return Err(err(fact.pos(), "history facts are atoms or negated atoms")),
                        },
                        _ => return Err(err(fact.pos(), "history facts are atoms or negated atoms")),
                    };
                    h.facts.push(Fact {
                        instant: t as usize,
                        atom,
                        value,
                    });
                }
            }
            Some("LOOP") if items.len() == 2 => h.loop_start = Some(int(&items[1])? as usize),
            Some("POOL") if items.len() == 2 => h.past_loop_end = Some(int(&items[1])? as usize),
            _ => return Err(err(entry.pos(), format!("malformed history entry `{entry}`"))),
        }
    }
    h.check_consistent().map_err(|e| located(args.first().map(SExpr::pos).unwrap_or_default(), "history", e))?;
    Ok(h)
}

/// Parses formulas against a document's declarations.
pub struct FormulaParser<'a> {
    decls: &'a Declarations,
    domains: &'a BTreeMap<String, Vec<Term>>,
}

impl<'a> FormulaParser<'a> {
    pub fn new(doc: &'a SpecDocument) -> Self {
        FormulaParser {
            decls: &doc.decls,
            domains: &doc.domains,
        }
    }

    pub fn with(decls: &'a Declarations, domains: &'a BTreeMap<String, Vec<Term>>) -> Self {
        FormulaParser { decls, domains }
    }

    pub fn parse(&self, e: &SExpr) -> Result<Formula> {
        let pos = e.pos();
        let items = match e {
            SExpr::Sym(s, _) => {
                return match s.as_str() {
                    "TRUE" | "T" => Ok(Formula::True),
                    "FALSE" | "NIL" => Ok(Formula::False),
                    _ => Err(err(pos, format!("bare symbol `{s}` is not a formula; write (-P- {s})"))),
                }
            }
            SExpr::Int(i, _) => return Err(err(pos, format!("integer `{i}` is not a formula"))),
            SExpr::List(items, _) => items,
        };
        let head = items
            .first()
            .and_then(SExpr::as_sym)
            .ok_or_else(|| err(pos, format!("expected an operator, found `{e}`")))?;
        let args = &items[1..];
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                Err(err(pos, format!("`{head}` takes {n} argument(s), got {}", args.len())))
            } else {
                Ok(())
            }
        };
        let sub = |i: usize| -> Result<Box<Formula>> { Ok(Box::new(self.parse(&args[i])?)) };

        let f = match head {
            "-P-" => {
                if args.is_empty() {
                    return Err(err(pos, "(-P- name args...) needs a name"));
                }
                let name = symbol(&args[0])?;
                let terms = args[1..].iter().map(term).collect::<Result<_>>()?;
                Formula::Atom(Atom::Prop(name.to_string(), terms))
            }
            "&&" => Formula::And(args.iter().map(|a| self.parse(a)).collect::<Result<_>>()?),
            "||" => Formula::Or(args.iter().map(|a| self.parse(a)).collect::<Result<_>>()?),
            "!!" => {
                arity(1)?;
                Formula::Not(sub(0)?)
            }
            "->" => {
                arity(2)?;
                Formula::Implies(sub(0)?, sub(1)?)
            }
            "<->" => {
                arity(2)?;
                Formula::Iff(sub(0)?, sub(1)?)
            }
            "NEXT" => {
                arity(1)?;
                Formula::Next(sub(0)?)
            }
            "YESTERDAY" => {
                arity(1)?;
                Formula::Yesterday(sub(0)?)
            }
            "ZETA" => {
                arity(1)?;
                Formula::Zeta(sub(0)?)
            }
            "UNTIL" | "SINCE" | "RELEASE" | "TRIGGER" => {
                arity(2)?;
                let (a, b) = (sub(0)?, sub(1)?);
                match head {
                    "UNTIL" => Formula::Until(a, b),
                    "SINCE" => Formula::Since(a, b),
                    "RELEASE" => Formula::Release(a, b),
                    _ => Formula::Trigger(a, b),
                }
            }
            "FUTR" | "PAST" | "DIST" => {
                arity(2)?;
                let (a, t) = (sub(0)?, term(&args[1])?);
                match head {
                    "FUTR" => Formula::Futr(a, t),
                    "PAST" => Formula::Past(a, t),
                    _ => Formula::Dist(a, t),
                }
            }
            "SOM" => {
                arity(1)?;
                Formula::Som(sub(0)?)
            }
            "ALW" => {
                arity(1)?;
                Formula::Alw(sub(0)?)
            }
            "-A-" | "-E-" => self.parse_quant(head == "-A-", args, pos)?,
            "AND-CASE" | "OR-CASE" => self.parse_case(head == "AND-CASE", args, pos)?,
            "EQL" | "EQUAL" | "<" | "<=" | "NOT" | "AND" | "OR" => Formula::Cond(self.parse_cond(e)?),
            _ => {
                if let Some(f) = self.parse_trio(head, args, pos)? {
                    f
                } else if let Some(name) = head.strip_suffix('=') {
                    self.parse_item_ref(name, args, pos)?
                } else {
                    return Err(err(pos, format!("unknown operator `{head}`")));
                }
            }
        };
        Ok(f)
    }

    fn parse_trio(&self, head: &str, args: &[SExpr], pos: Pos) -> Result<Option<Formula>> {
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                Err(err(pos, format!("`{head}` takes {n} argument(s), got {}", args.len())))
            } else {
                Ok(())
            }
        };
        let (base, suffix) = match head.split_once('_') {
            Some((b, s)) => (b, Some(s)),
            None => (head, None),
        };
        for op in MetricOp::ALL {
            if base == op.keyword() {
                let ends = match suffix {
                    None => None,
                    Some(s) => Some(
                        Ends::from_suffix(s)
                            .ok_or_else(|| err(pos, format!("unknown endpoint variant `{head}`")))?,
                    ),
                };
                arity(2)?;
                return Ok(Some(Formula::Metric {
                    op,
                    ends,
                    body: Box::new(self.parse(&args[0])?),
                    t: term(&args[1])?,
                }));
            }
        }
        for op in RangeOp::ALL {
            if base == op.keyword() {
                let incl = match suffix {
                    None => None,
                    Some("E") => Some(Incl::E),
                    Some("I") => Some(Incl::I),
                    Some(_) => return Err(err(pos, format!("unknown variant `{head}`"))),
                };
                arity(1)?;
                return Ok(Some(Formula::Ranged {
                    op,
                    incl,
                    body: Box::new(self.parse(&args[0])?),
                }));
            }
        }
        if (base == "UNTIL" || base == "SINCE") && suffix.is_some() {
            let past = base == "SINCE";
            let rest = suffix.unwrap_or_default();
            let (ends, bound) = match rest.split_once('_') {
                Some((e, b)) if Ends::from_suffix(e).is_some() => (Ends::from_suffix(e), Some(b)),
                _ => match Ends::from_suffix(rest) {
                    Some(e) => (Some(e), None),
                    None => (None, Some(rest)),
                },
            };
            let f = match bound {
                None => {
                    arity(2)?;
                    Formula::TrioUntil {
                        past,
                        ends: ends.unwrap_or(Ends::IE),
                        a: Box::new(self.parse(&args[0])?),
                        b: Box::new(self.parse(&args[1])?),
                    }
                }
                Some("<=_<=") => {
                    arity(4)?;
                    Formula::BoundedUntil {
                        past,
                        ends,
                        lo: term(&args[0])?,
                        hi: Some(term(&args[1])?),
                        a: Box::new(self.parse(&args[2])?),
                        b: Box::new(self.parse(&args[3])?),
                    }
                }
                Some(">=") => {
                    arity(3)?;
                    Formula::BoundedUntil {
                        past,
                        ends,
                        lo: term(&args[0])?,
                        hi: None,
                        a: Box::new(self.parse(&args[1])?),
                        b: Box::new(self.parse(&args[2])?),
                    }
                }
                Some(_) => return Err(err(pos, format!("unknown operator `{head}`"))),
            };
            return Ok(Some(f));
        }
        Ok(None)
    }

    fn parse_item_ref(&self, name: &str, args: &[SExpr], pos: Pos) -> Result<Formula> {
        if self.decls.item(name).is_some() {
            let [v] = args else {
                return Err(err(pos, format!("({name}= value) takes one argument")));
            };
            Ok(Formula::Atom(Atom::Item(name.to_string(), term(v)?)))
        } else if self.decls.array(name).is_some() {
            let [i, v] = args else {
                return Err(err(pos, format!("({name}= index value) takes two arguments")));
            };
            Ok(Formula::Atom(Atom::Array(name.to_string(), term(i)?, term(v)?)))
        } else {
            Err(err(pos, format!("reference to undeclared item or array `{name}`")))
        }
    }

    fn parse_quant(&self, forall: bool, args: &[SExpr], pos: Pos) -> Result<Formula> {
        let (var, dom, cond, body) = match args {
            [v, d, b] => (v, d, None, b),
            [v, d, c, b] => (v, d, Some(c), b),
            _ => return Err(err(pos, "usage: (-A- var domain [condition] formula)")),
        };
        let domain = parse_domain(dom, self.domains)?;
        if domain.is_empty() {
            return Err(err(dom.pos(), "empty quantifier domain"));
        }
        Ok(Formula::Quant {
            forall,
            var: symbol(var)?.to_string(),
            domain,
            cond: cond.map(|c| self.parse_cond(c)).transpose()?,
            body: Box::new(self.parse(body)?),
        })
    }

    fn parse_case(&self, conj: bool, args: &[SExpr], pos: Pos) -> Result<Formula> {
        let Some((binds, rest)) = args.split_first() else {
            return Err(err(pos, "usage: (and-case (var domain ...) (guard body)... (else body))"));
        };
        let binds = binds
            .as_list()
            .ok_or_else(|| err(binds.pos(), "case bindings must be a list (var domain ...)"))?;
        if binds.len() % 2 != 0 {
            return Err(err(pos, "case bindings must come in (var domain) pairs"));
        }
        let mut bindings = Vec::new();
        for pair in binds.chunks(2) {
            let dom = parse_domain(&pair[1], self.domains)?;
            if dom.is_empty() {
                return Err(err(pair[1].pos(), "empty case-binding domain"));
            }
            bindings.push((symbol(&pair[0])?.to_string(), dom));
        }
        let mut branches = Vec::new();
        let mut otherwise = None;
        for (n, br) in rest.iter().enumerate() {
            let parts = br
                .as_list()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| err(br.pos(), "case branches are (guard body) pairs"))?;
            if parts[0].as_sym() == Some("ELSE") {
                if otherwise.is_some() {
                    return Err(err(br.pos(), "multiple else branches"));
                }
                if n + 1 != rest.len() {
                    let again = rest[n + 1..]
                        .iter()
                        .any(|b| b.as_list().and_then(|p| p.first()).and_then(SExpr::as_sym) == Some("ELSE"));
                    if again {
                        return Err(err(br.pos(), "multiple else branches"));
                    }
                    return Err(err(br.pos(), "else must be the last branch"));
                }
                otherwise = Some(Box::new(self.parse(&parts[1])?));
            } else {
                branches.push((self.parse(&parts[0])?, self.parse(&parts[1])?));
            }
        }
        Ok(Formula::Case {
            conj,
            bindings,
            branches,
            otherwise,
        })
    }

    fn parse_cond(&self, e: &SExpr) -> Result<Cond> {
        let pos = e.pos();
        let items = e
            .as_list()
            .ok_or_else(|| err(pos, format!("expected a condition, found `{e}`")))?;
        let head = e.head().unwrap_or_default();
        let args = &items[1..];
        let two = || -> Result<(Term, Term)> {
            match args {
                [a, b] => Ok((term(a)?, term(b)?)),
                _ => Err(err(pos, format!("`{head}` takes two arguments"))),
            }
        };
        Ok(match head {
            "EQL" | "EQUAL" => {
                let (a, b) = two()?;
                Cond::Eql(a, b)
            }
            "<" => {
                let (a, b) = two()?;
                Cond::Lt(a, b)
            }
            "<=" => {
                let (a, b) = two()?;
                Cond::Le(a, b)
            }
            "NOT" => match args {
                [c] => Cond::Not(Box::new(self.parse_cond(c)?)),
                _ => return Err(err(pos, "`not` takes one argument")),
            },
            "AND" => Cond::And(args.iter().map(|c| self.parse_cond(c)).collect::<Result<_>>()?),
            "OR" => Cond::Or(args.iter().map(|c| self.parse_cond(c)).collect::<Result<_>>()?),
            _ => return Err(err(pos, format!("unknown condition `{e}`"))),
        })
    }
}

/// Parses a single formula with no declarations in scope.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let forms = read_sexprs(text)?;
    let [f] = forms.as_slice() else {
        return Err(err(Pos::default(), "expected exactly one formula"));
    };
    let decls = Declarations::default();
    let domains = BTreeMap::new();
    FormulaParser::with(&decls, &domains).parse(f)
}
