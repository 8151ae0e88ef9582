//! Formula syntax trees: the full surface language ([`Formula`]) and the
//! PLTL fragment accepted by the encoder ([`Core`]).

use std::fmt;

use crate::sexpr::SExpr;

/// A constant or (before quantifier expansion) a bound variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(i64),
    Sym(String),
}

impl Term {
    pub fn sym(s: &str) -> Term {
        Term::Sym(s.to_ascii_uppercase())
    }

    fn to_sexpr(&self) -> SExpr {
        match self {
            Term::Int(i) => SExpr::int(*i),
            Term::Sym(s) => SExpr::sym(s),
        }
    }

    pub(crate) fn subst(&self, var: &str, value: &Term) -> Term {
        match self {
            Term::Sym(s) if s == var => value.clone(),
            t => t.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for Term {
    fn from(i: i64) -> Self {
        Term::Int(i)
    }
}

/// A propositional letter. Items and arrays are one-hot lowered to their own
/// atoms, one per value (and per index cell).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Prop(String, Vec<Term>),
    Item(String, Term),
    Array(String, Term, Term),
}

impl Atom {
    pub fn prop(name: &str) -> Atom {
        Atom::Prop(name.to_ascii_uppercase(), Vec::new())
    }

    /// Human-readable form used in history files.
    pub fn display_name(&self) -> String {
        match self {
            Atom::Prop(n, args) if args.is_empty() => n.clone(),
            Atom::Prop(n, args) => {
                let args: Vec<String> = args.iter().map(Term::to_string).collect();
                format!("{n}({})", args.join(","))
            }
            Atom::Item(n, v) => format!("{n} = {v}"),
            Atom::Array(n, i, v) => format!("{n}[{i}] = {v}"),
        }
    }

    pub(crate) fn subst(&self, var: &str, value: &Term) -> Atom {
        match self {
            Atom::Prop(n, args) => {
                Atom::Prop(n.clone(), args.iter().map(|a| a.subst(var, value)).collect())
            }
            Atom::Item(n, v) => Atom::Item(n.clone(), v.subst(var, value)),
            Atom::Array(n, i, v) => Atom::Array(n.clone(), i.subst(var, value), v.subst(var, value)),
        }
    }

    fn to_sexpr(&self) -> SExpr {
        match self {
            Atom::Prop(n, args) => {
                let mut items = vec![SExpr::sym("-P-"), SExpr::sym(n)];
                items.extend(args.iter().map(Term::to_sexpr));
                SExpr::list(items)
            }
            Atom::Item(n, v) => SExpr::list(vec![SExpr::sym(&format!("{n}=")), v.to_sexpr()]),
            Atom::Array(n, i, v) => {
                SExpr::list(vec![SExpr::sym(&format!("{n}=")), i.to_sexpr(), v.to_sexpr()])
            }
        }
    }
}

/// Identifier form: `P`, `item:CONT=6`, `array:ARR[6]=OFF`.
impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Prop(..) => write!(f, "{}", self.display_name()),
            Atom::Item(n, v) => write!(f, "item:{n}={v}"),
            Atom::Array(n, i, v) => write!(f, "array:{n}[{i}]={v}"),
        }
    }
}

/// Expansion-time condition over bound variables and constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cond {
    Eql(Term, Term),
    Lt(Term, Term),
    Le(Term, Term),
    Not(Box<Cond>),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

impl Cond {
    pub(crate) fn subst(&self, var: &str, value: &Term) -> Cond {
        match self {
            Cond::Eql(a, b) => Cond::Eql(a.subst(var, value), b.subst(var, value)),
            Cond::Lt(a, b) => Cond::Lt(a.subst(var, value), b.subst(var, value)),
            Cond::Le(a, b) => Cond::Le(a.subst(var, value), b.subst(var, value)),
            Cond::Not(c) => Cond::Not(Box::new(c.subst(var, value))),
            Cond::And(cs) => Cond::And(cs.iter().map(|c| c.subst(var, value)).collect()),
            Cond::Or(cs) => Cond::Or(cs.iter().map(|c| c.subst(var, value)).collect()),
        }
    }

    pub fn to_sexpr(&self) -> SExpr {
        let bin = |op: &str, a: &Term, b: &Term| SExpr::list(vec![SExpr::sym(op), a.to_sexpr(), b.to_sexpr()]);
        let nary = |op: &str, cs: &[Cond]| {
            let mut items = vec![SExpr::sym(op)];
            items.extend(cs.iter().map(Cond::to_sexpr));
            SExpr::list(items)
        };
        match self {
            Cond::Eql(a, b) => bin("EQL", a, b),
            Cond::Lt(a, b) => bin("<", a, b),
            Cond::Le(a, b) => bin("<=", a, b),
            Cond::Not(c) => SExpr::list(vec![SExpr::sym("NOT"), c.to_sexpr()]),
            Cond::And(cs) => nary("AND", cs),
            Cond::Or(cs) => nary("OR", cs),
        }
    }
}

/// Endpoint inclusion of a metric interval: the first letter governs the
/// near endpoint (now), the second the far one (now ± t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ends {
    EE,
    EI,
    IE,
    II,
}

impl Ends {
    pub const ALL: [Ends; 4] = [Ends::EE, Ends::EI, Ends::IE, Ends::II];

    pub fn near_included(self) -> bool {
        matches!(self, Ends::IE | Ends::II)
    }

    pub fn far_included(self) -> bool {
        matches!(self, Ends::EI | Ends::II)
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Ends::EE => "EE",
            Ends::EI => "EI",
            Ends::IE => "IE",
            Ends::II => "II",
        }
    }

    pub fn from_suffix(s: &str) -> Option<Ends> {
        Some(match s {
            "EE" => Ends::EE,
            "EI" => Ends::EI,
            "IE" => Ends::IE,
            "II" => Ends::II,
            _ => return None,
        })
    }
}

/// Inclusion of the present instant for the unbounded `somf`/`alwf` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Incl {
    E,
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricOp {
    Lasts,
    Lasted,
    WithinF,
    WithinP,
    NextTime,
    LastTime,
}

impl MetricOp {
    pub const ALL: [MetricOp; 6] = [
        MetricOp::Lasts,
        MetricOp::Lasted,
        MetricOp::WithinF,
        MetricOp::WithinP,
        MetricOp::NextTime,
        MetricOp::LastTime,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            MetricOp::Lasts => "LASTS",
            MetricOp::Lasted => "LASTED",
            MetricOp::WithinF => "WITHINF",
            MetricOp::WithinP => "WITHINP",
            MetricOp::NextTime => "NEXTTIME",
            MetricOp::LastTime => "LASTTIME",
        }
    }

    pub fn is_past(self) -> bool {
        matches!(self, MetricOp::Lasted | MetricOp::WithinP | MetricOp::LastTime)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeOp {
    Somf,
    Somp,
    Alwf,
    Alwp,
}

impl RangeOp {
    pub const ALL: [RangeOp; 4] = [RangeOp::Somf, RangeOp::Somp, RangeOp::Alwf, RangeOp::Alwp];

    pub fn keyword(self) -> &'static str {
        match self {
            RangeOp::Somf => "SOMF",
            RangeOp::Somp => "SOMP",
            RangeOp::Alwf => "ALWF",
            RangeOp::Alwp => "ALWP",
        }
    }
}

/// Surface formula, including metric, quantifier and case sugar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Yesterday(Box<Formula>),
    Zeta(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Trigger(Box<Formula>, Box<Formula>),

    Futr(Box<Formula>, Term),
    Past(Box<Formula>, Term),
    Dist(Box<Formula>, Term),
    Metric {
        op: MetricOp,
        ends: Option<Ends>,
        body: Box<Formula>,
        t: Term,
    },
    Ranged {
        op: RangeOp,
        incl: Option<Incl>,
        body: Box<Formula>,
    },
    Som(Box<Formula>),
    Alw(Box<Formula>),
    /// `until_xy` / `since_xy`.
    TrioUntil {
        past: bool,
        ends: Ends,
        a: Box<Formula>,
        b: Box<Formula>,
    },
    /// `until[_xy]_<=_<= lo hi a b` and `until[_xy]_>= lo a b`, plus the
    /// `since` mirrors.
    BoundedUntil {
        past: bool,
        ends: Option<Ends>,
        lo: Term,
        hi: Option<Term>,
        a: Box<Formula>,
        b: Box<Formula>,
    },
    Quant {
        forall: bool,
        var: String,
        domain: Vec<Term>,
        cond: Option<Cond>,
        body: Box<Formula>,
    },
    Case {
        conj: bool,
        bindings: Vec<(String, Vec<Term>)>,
        branches: Vec<(Formula, Formula)>,
        otherwise: Option<Box<Formula>>,
    },
    /// Lisp-level condition used in formula position, e.g. `(not (equal p p1))`.
    Cond(Cond),
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::prop(name))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(bx(f))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(bx(f))
    }

    pub fn yesterday(f: Formula) -> Formula {
        Formula::Yesterday(bx(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(bx(a), bx(b))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(bx(a), bx(b))
    }

    /// Prints the formula in the concrete syntax accepted by the spec reader.
    pub fn to_sexpr(&self) -> SExpr {
        use Formula as F;
        let l = SExpr::list;
        let s = SExpr::sym;
        let un = |op: &str, a: &Formula| l(vec![s(op), a.to_sexpr()]);
        let bin = |op: &str, a: &Formula, b: &Formula| l(vec![s(op), a.to_sexpr(), b.to_sexpr()]);
        let nary = |op: &str, fs: &[Formula]| {
            let mut items = vec![s(op)];
            items.extend(fs.iter().map(Formula::to_sexpr));
            l(items)
        };
        let dom = |d: &[Term]| l(d.iter().map(Term::to_sexpr).collect());
        match self {
            F::True => s("TRUE"),
            F::False => s("FALSE"),
            F::Atom(a) => a.to_sexpr(),
            F::Not(a) => un("!!", a),
            F::And(fs) => nary("&&", fs),
            F::Or(fs) => nary("||", fs),
            F::Implies(a, b) => bin("->", a, b),
            F::Iff(a, b) => bin("<->", a, b),
            F::Next(a) => un("NEXT", a),
            F::Yesterday(a) => un("YESTERDAY", a),
            F::Zeta(a) => un("ZETA", a),
            F::Until(a, b) => bin("UNTIL", a, b),
            F::Since(a, b) => bin("SINCE", a, b),
            F::Release(a, b) => bin("RELEASE", a, b),
            F::Trigger(a, b) => bin("TRIGGER", a, b),
            F::Futr(a, t) => l(vec![s("FUTR"), a.to_sexpr(), t.to_sexpr()]),
            F::Past(a, t) => l(vec![s("PAST"), a.to_sexpr(), t.to_sexpr()]),
            F::Dist(a, t) => l(vec![s("DIST"), a.to_sexpr(), t.to_sexpr()]),
            F::Metric { op, ends, body, t } => {
                let name = match ends {
                    None => op.keyword().to_string(),
                    Some(e) => format!("{}_{}", op.keyword(), e.suffix()),
                };
                l(vec![s(&name), body.to_sexpr(), t.to_sexpr()])
            }
            F::Ranged { op, incl, body } => {
                let name = match incl {
                    None => op.keyword().to_string(),
                    Some(Incl::E) => format!("{}_E", op.keyword()),
                    Some(Incl::I) => format!("{}_I", op.keyword()),
                };
                un(&name, body)
            }
            F::Som(a) => un("SOM", a),
            F::Alw(a) => un("ALW", a),
            F::TrioUntil { past, ends, a, b } => {
                let op = if *past { "SINCE" } else { "UNTIL" };
                bin(&format!("{op}_{}", ends.suffix()), a, b)
            }
            F::BoundedUntil {
                past,
                ends,
                lo,
                hi,
                a,
                b,
            } => {
                let mut name = String::from(if *past { "SINCE" } else { "UNTIL" });
                if let Some(e) = ends {
                    name.push('_');
                    name.push_str(e.suffix());
                }
                let mut items = vec![];
                match hi {
                    Some(hi) => {
                        name.push_str("_<=_<=");
                        items.push(s(&name));
                        items.push(lo.to_sexpr());
                        items.push(hi.to_sexpr());
                    }
                    None => {
                        name.push_str("_>=");
                        items.push(s(&name));
                        items.push(lo.to_sexpr());
                    }
                }
                items.push(a.to_sexpr());
                items.push(b.to_sexpr());
                l(items)
            }
            F::Quant {
                forall,
                var,
                domain,
                cond,
                body,
            } => {
                let mut items = vec![s(if *forall { "-A-" } else { "-E-" }), s(var), dom(domain)];
                if let Some(c) = cond {
                    items.push(c.to_sexpr());
                }
                items.push(body.to_sexpr());
                l(items)
            }
            F::Case {
                conj,
                bindings,
                branches,
                otherwise,
            } => {
                let mut items = vec![s(if *conj { "AND-CASE" } else { "OR-CASE" })];
                let mut binds = Vec::new();
                for (v, d) in bindings {
                    binds.push(s(v));
                    binds.push(dom(d));
                }
                items.push(l(binds));
                for (g, b) in branches {
                    items.push(l(vec![g.to_sexpr(), b.to_sexpr()]));
                }
                if let Some(e) = otherwise {
                    items.push(l(vec![s("ELSE"), e.to_sexpr()]));
                }
                l(items)
            }
            F::Cond(c) => c.to_sexpr(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

/// The PLTL fragment consumed by the encoder and the trace oracle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Core {
    True,
    False,
    Atom(Atom),
    Not(Box<Core>),
    And(Vec<Core>),
    Or(Vec<Core>),
    Implies(Box<Core>, Box<Core>),
    Iff(Box<Core>, Box<Core>),
    Next(Box<Core>),
    Yesterday(Box<Core>),
    Zeta(Box<Core>),
    Until(Box<Core>, Box<Core>),
    Since(Box<Core>, Box<Core>),
    Release(Box<Core>, Box<Core>),
    Trigger(Box<Core>, Box<Core>),
}

impl Core {
    pub fn atom(name: &str) -> Core {
        Core::Atom(Atom::prop(name))
    }

    pub fn not(a: Core) -> Core {
        Core::Not(Box::new(a))
    }

    pub fn next(a: Core) -> Core {
        Core::Next(Box::new(a))
    }

    pub fn yesterday(a: Core) -> Core {
        Core::Yesterday(Box::new(a))
    }

    pub fn zeta(a: Core) -> Core {
        Core::Zeta(Box::new(a))
    }

    pub fn until(a: Core, b: Core) -> Core {
        Core::Until(Box::new(a), Box::new(b))
    }

    pub fn since(a: Core, b: Core) -> Core {
        Core::Since(Box::new(a), Box::new(b))
    }

    pub fn release(a: Core, b: Core) -> Core {
        Core::Release(Box::new(a), Box::new(b))
    }

    pub fn trigger(a: Core, b: Core) -> Core {
        Core::Trigger(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Core, b: Core) -> Core {
        Core::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Core, b: Core) -> Core {
        Core::Iff(Box::new(a), Box::new(b))
    }

    pub fn children(&self) -> Vec<&Core> {
        match self {
            Core::True | Core::False | Core::Atom(_) => vec![],
            Core::Not(a) | Core::Next(a) | Core::Yesterday(a) | Core::Zeta(a) => vec![a],
            Core::And(fs) | Core::Or(fs) => fs.iter().collect(),
            Core::Implies(a, b)
            | Core::Iff(a, b)
            | Core::Until(a, b)
            | Core::Since(a, b)
            | Core::Release(a, b)
            | Core::Trigger(a, b) => vec![a, b],
        }
    }

    /// Collects atoms in order of first occurrence.
    pub fn atoms(&self, out: &mut Vec<Atom>) {
        if let Core::Atom(a) = self {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        for c in self.children() {
            c.atoms(out);
        }
    }

    /// Nesting depth of future-tense and past-tense operators.
    pub fn temporal_depth(&self) -> (usize, usize) {
        let (mut fut, mut past) = (0, 0);
        for c in self.children() {
            let (f, p) = c.temporal_depth();
            fut = fut.max(f);
            past = past.max(p);
        }
        match self {
            Core::Next(_) | Core::Until(..) | Core::Release(..) => (fut + 1, past),
            Core::Yesterday(_) | Core::Zeta(_) | Core::Since(..) | Core::Trigger(..) => {
                (fut, past + 1)
            }
            _ => (fut, past),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Core::size).sum::<usize>()
    }
}

impl From<&Core> for Formula {
    fn from(c: &Core) -> Formula {
        let b = |c: &Core| Box::new(Formula::from(c));
        match c {
            Core::True => Formula::True,
            Core::False => Formula::False,
            Core::Atom(a) => Formula::Atom(a.clone()),
            Core::Not(a) => Formula::Not(b(a)),
            Core::And(fs) => Formula::And(fs.iter().map(Formula::from).collect()),
            Core::Or(fs) => Formula::Or(fs.iter().map(Formula::from).collect()),
            Core::Implies(x, y) => Formula::Implies(b(x), b(y)),
            Core::Iff(x, y) => Formula::Iff(b(x), b(y)),
            Core::Next(a) => Formula::Next(b(a)),
            Core::Yesterday(a) => Formula::Yesterday(b(a)),
            Core::Zeta(a) => Formula::Zeta(b(a)),
            Core::Until(x, y) => Formula::Until(b(x), b(y)),
            Core::Since(x, y) => Formula::Since(b(x), b(y)),
            Core::Release(x, y) => Formula::Release(b(x), b(y)),
            Core::Trigger(x, y) => Formula::Trigger(b(x), b(y)),
        }
    }
}

impl fmt::Display for Core {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Formula::from(self))
    }
}
