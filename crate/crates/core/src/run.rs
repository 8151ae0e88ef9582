//! Verification jobs: bounded satisfiability (BSC), bounded model checking
//! (BMC), history checking and completion (HCC), loop-free completeness
//! checks and the completeness-bound search.
//!
//! Every solving run writes three artifacts into the output directory:
//! `output.cnf.txt` (DIMACS), `output.sat.txt` (raw solver output) and
//! `output.hist.txt` (the history, empty on UNSAT).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cnf::{dimacs_string, to_cnf, CnfInstance, SatResult, Verdict};
use crate::encoder::{encode, EncodedProblem, Engine, Problem};
use crate::error::{Error, Result};
use crate::formula::Core;
use crate::sat::{solve_embedded_limited, ExternalSolver, SolverId};
use crate::spec::{LoweredSpec, SpecDocument};
use crate::trace::{decode, eval_lasso, parse_history, render_history, LassoTrace, PartialHistory};

pub const CNF_FILE: &str = "output.cnf.txt";
pub const SAT_FILE: &str = "output.sat.txt";
pub const HIST_FILE: &str = "output.hist.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Bsc,
    Bmc,
    Hcc,
    LoopFree,
    FindBound,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "bsc" => Ok(Mode::Bsc),
            "bmc" => Ok(Mode::Bmc),
            "hcc" => Ok(Mode::Hcc),
            "loop-free" => Ok(Mode::LoopFree),
            "find-bound" => Ok(Mode::FindBound),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Bsc => "bsc",
            Mode::Bmc => "bmc",
            Mode::Hcc => "hcc",
            Mode::LoopFree => "loop-free",
            Mode::FindBound => "find-bound",
        })
    }
}

/// One verification job on an already parsed document.
#[derive(Debug, Clone, Default)]
pub struct Job {
    pub mode: Mode,
    /// Falls back to the document's `:bound` option.
    pub bound: Option<usize>,
    /// Falls back to the document's `:engine` option, then mono.
    pub engine: Option<Engine>,
    /// Encode over loop-free paths (mono only).
    pub loop_free: bool,
    /// `None` means the default solver, falling back to the embedded one
    /// when its executable is missing. An explicit choice never falls back.
    pub solver: Option<SolverId>,
    /// Overrides the document's history section.
    pub history: Option<PartialHistory>,
    /// Upper bound for [`Mode::FindBound`].
    pub max_bound: Option<usize>,
    pub conflict_limit: Option<u64>,
}

/// Everything needed to run from the command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: PathBuf,
    pub history: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub job: Job,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub mode: Mode,
    pub engine: Engine,
    pub k: usize,
    pub verdict: Verdict,
    pub trace: Option<LassoTrace>,
    pub solver: SolverId,
    pub num_vars: u32,
    pub num_clauses: usize,
    /// Smallest bound at which no loop-free path exists (find-bound).
    pub bound: Option<usize>,
    pub warnings: Vec<String>,
}

impl Report {
    /// 0 for SAT or a found bound, 1 for UNSAT.
    pub fn exit_code(&self) -> i32 {
        if self.mode == Mode::FindBound {
            return 0;
        }
        match self.verdict {
            Verdict::Sat => 0,
            Verdict::Unsat => 1,
        }
    }

    pub fn history(&self) -> String {
        self.trace.as_ref().map(render_history).unwrap_or_default()
    }

    /// One-line verdict with its reading in the job's mode.
    pub fn summary(&self) -> String {
        let sat = self.verdict == Verdict::Sat;
        let reading = match (self.mode, sat) {
            (Mode::FindBound, _) => {
                return format!("completeness bound: {}", self.bound.unwrap_or_default());
            }
            (Mode::Bsc, true) => "specification satisfiable",
            (Mode::Bsc, false) => "no model within the bound",
            (Mode::Bmc, true) => "counterexample found",
            (Mode::Bmc, false) => "property holds within the bound",
            (Mode::Hcc, true) => "history completed",
            (Mode::Hcc, false) => "history inconsistent with the specification",
            (Mode::LoopFree, true) => "completeness bound not reached",
            (Mode::LoopFree, false) => "completeness bound reached",
        };
        format!("{} ({reading}; k = {}, {} engine)", if sat { "SAT" } else { "UNSAT" }, self.k, self.engine)
    }
}

/// The encoder input for `mode`: root formula, transitions, invariants and
/// history constraints.
pub fn build_problem(
    lowered: &LoweredSpec,
    mode: Mode,
    engine: Engine,
    history: Option<&PartialHistory>,
) -> Result<Problem> {
    let init = lowered.init.clone().map(|i| match engine {
        Engine::Mono => Core::yesterday(i),
        Engine::Bi => i,
    });
    let mut parts: Vec<Core> = init.into_iter().collect();
    match mode {
        Mode::Bmc => {
            if lowered.transitions.is_empty() {
                return Err(Error::Encode("bmc needs a transition system (trans section)".into()));
            }
            let p = lowered
                .property
                .clone()
                .ok_or_else(|| Error::Encode("bmc needs a property".into()))?;
            parts.push(Core::not(p));
        }
        Mode::Bsc | Mode::Hcc => parts.extend(lowered.property.clone()),
        Mode::LoopFree | Mode::FindBound => {}
    }
    let formula = match parts.len() {
        0 => Core::True,
        1 => parts.pop().expect("one part"),
        _ => Core::And(parts),
    };
    let mut p = Problem::new(formula);
    p.transitions = lowered.transitions.clone();
    p.invariants = lowered.invariants.clone();
    p.state_atoms = lowered.declared_atoms.clone();
    if let Some(h) = history {
        p.history = h.clone();
    } else if mode == Mode::Hcc {
        return Err(Error::History("hcc mode needs a history".into()));
    }
    Ok(p)
}

/// Encoded problem plus its CNF.
pub struct Compiled {
    pub encoded: EncodedProblem,
    pub cnf: CnfInstance,
}

pub fn compile(p: &Problem, k: usize, engine: Engine, loop_free: bool) -> Result<Compiled> {
    let encoded = encode(p, k, engine, loop_free)?;
    let cnf = to_cnf(&encoded.circuit, encoded.varmap.len());
    log::info!(
        "k = {k}: {} closure nodes, {} variables, {} clauses",
        encoded.closure.len(),
        cnf.num_vars,
        cnf.clauses.len()
    );
    Ok(Compiled { encoded, cnf })
}

fn embedded_output(r: &SatResult) -> String {
    match &r.model {
        None => "UNSAT\n".into(),
        Some(m) => {
            let mut s = String::from("SAT\n");
            for (v, &b) in m.iter().enumerate().skip(1) {
                s.push_str(&format!("{}{v} ", if b { "" } else { "-" }));
            }
            s.push_str("0\n");
            s
        }
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Solves `compiled`, writing the CNF and solver artifacts into `out_dir`
/// when given. Returns the result and the solver actually used.
pub fn solve(
    compiled: &Compiled,
    solver: Option<SolverId>,
    conflict_limit: Option<u64>,
    out_dir: Option<&Path>,
    warnings: &mut Vec<String>,
) -> Result<(SatResult, SolverId)> {
    let chosen = solver.unwrap_or_default();
    let external = match chosen {
        SolverId::Embedded => None,
        id => match ExternalSolver::locate(id) {
            Ok(s) => Some(s),
            Err(e) if solver.is_none() => {
                let w = format!("{e}; using the embedded solver");
                log::warn!("{w}");
                warnings.push(w);
                None
            }
            Err(e) => return Err(e),
        },
    };
    let symbols = compiled.encoded.symbols();
    match (external, out_dir) {
        (Some(ext), dir) => {
            let tmp;
            let dir = match dir {
                Some(d) => d,
                None => {
                    tmp = std::env::temp_dir().join(format!("pltl-bmc-{}", std::process::id()));
                    std::fs::create_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
                    &tmp
                }
            };
            let cnf_path = dir.join(CNF_FILE);
            write(&cnf_path, &dimacs_string(&compiled.cnf, &symbols))?;
            let result = ext.solve(&cnf_path, &dir.join(SAT_FILE), compiled.cnf.num_vars)?;
            if let Some(m) = &result.model {
                compiled.cnf.check_model(m)?;
            }
            Ok((result, ext.id))
        }
        (None, dir) => {
            if let Some(d) = dir {
                write(&d.join(CNF_FILE), &dimacs_string(&compiled.cnf, &symbols))?;
            }
            let result = solve_embedded_limited(&compiled.cnf, conflict_limit)?;
            if let Some(d) = dir {
                write(&d.join(SAT_FILE), &embedded_output(&result))?;
            }
            Ok((result, SolverId::Embedded))
        }
    }
}

fn resolve_bound(job: &Job, doc: &SpecDocument) -> Result<usize> {
    job.bound
        .or(doc.options.bound)
        .ok_or_else(|| Error::Encode("no bound given (use --bound or the :bound option)".into()))
}

/// Runs `job` on `doc`. Artifacts go to `out_dir` when given.
pub fn check(doc: &SpecDocument, job: &Job, out_dir: Option<&Path>) -> Result<Report> {
    let engine = job.engine.or(doc.options.engine).unwrap_or_default();
    let solver = job.solver.or(doc.options.solver);
    let lowered = doc.lower()?;
    let mut warnings = lowered.warnings.clone();
    for w in &warnings {
        log::warn!("{w}");
    }
    if job.mode == Mode::FindBound {
        return find_bound_lowered(&lowered, job, solver, out_dir, warnings);
    }
    let k = resolve_bound(job, doc)?;
    let loop_free = job.loop_free || doc.options.loop_free || job.mode == Mode::LoopFree;
    let history = job.history.as_ref().or(doc.history.as_ref());
    let problem = build_problem(&lowered, job.mode, engine, history)?;
    let compiled = compile(&problem, k, engine, loop_free)?;
    let (result, used) = solve(&compiled, solver, job.conflict_limit, out_dir, &mut warnings)?;
    let trace = if result.is_sat() {
        let trace = decode(&result, &compiled.encoded)?;
        if !eval_lasso(&trace, &problem.formula, compiled.encoded.root_instant()) {
            return Err(Error::Encode("decoded trace violates the encoded formula".into()));
        }
        Some(trace)
    } else {
        None
    };
    let report = Report {
        mode: job.mode,
        engine,
        k,
        verdict: result.verdict,
        trace,
        solver: used,
        num_vars: compiled.cnf.num_vars,
        num_clauses: compiled.cnf.clauses.len(),
        bound: None,
        warnings,
    };
    if let Some(d) = out_dir {
        write(&d.join(HIST_FILE), &report.history())?;
    }
    Ok(report)
}

/// Smallest `k >= 1` at which the transition system has no loop-free path
/// of `k + 1` states, searching up to the job's `max_bound`.
pub fn find_bound(doc: &SpecDocument, job: &Job, out_dir: Option<&Path>) -> Result<usize> {
    let job = Job {
        mode: Mode::FindBound,
        ..job.clone()
    };
    let report = check(doc, &job, out_dir)?;
    Ok(report.bound.expect("find-bound reports a bound"))
}

fn find_bound_lowered(
    lowered: &LoweredSpec,
    job: &Job,
    solver: Option<SolverId>,
    out_dir: Option<&Path>,
    mut warnings: Vec<String>,
) -> Result<Report> {
    let max = job.max_bound.unwrap_or(64);
    let problem = build_problem(lowered, Mode::FindBound, Engine::Mono, None)?;
    let mut k = 1;
    loop {
        if k > max {
            if let Some(d) = out_dir {
                write(&d.join(HIST_FILE), "")?;
            }
            return Err(Error::BoundExhausted(max));
        }
        let compiled = compile(&problem, k, Engine::Mono, true)?;
        let (result, used) = solve(&compiled, solver, job.conflict_limit, out_dir, &mut warnings)?;
        log::info!("loop-free k = {k}: {:?}", result.verdict);
        if !result.is_sat() {
            if let Some(d) = out_dir {
                write(&d.join(HIST_FILE), "")?;
            }
            return Ok(Report {
                mode: Mode::FindBound,
                engine: Engine::Mono,
                k,
                verdict: Verdict::Unsat,
                trace: None,
                solver: used,
                num_vars: compiled.cnf.num_vars,
                num_clauses: compiled.cnf.clauses.len(),
                bound: Some(k),
                warnings,
            });
        }
        k += 1;
    }
}

/// Reads the spec (and history), runs the job, writes the artifacts.
pub fn run(config: &RunConfig) -> Result<Report> {
    let doc = SpecDocument::from_file(&config.spec)?;
    let mut job = config.job.clone();
    if let Some(h) = &config.history {
        let text = std::fs::read_to_string(h).map_err(|e| Error::io(h, e))?;
        job.history = Some(parse_history(&text).map_err(|e| Error::InFile {
            path: h.clone(),
            source: Box::new(e),
        })?);
    }
    std::fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))?;
    check(&doc, &job, Some(&config.out_dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names() {
        for m in [Mode::Bsc, Mode::Bmc, Mode::Hcc, Mode::LoopFree, Mode::FindBound] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("ltl".parse::<Mode>().is_err());
    }

    #[test]
    fn embedded_output_dialect() {
        let r = SatResult {
            verdict: Verdict::Sat,
            model: Some(vec![false, true, false]),
        };
        assert_eq!(embedded_output(&r), "SAT\n1 -2 0\n");
        let parsed = crate::sat::parse_minisat_output(&embedded_output(&r), 2).unwrap().unwrap();
        assert_eq!(parsed, r);
        assert_eq!(embedded_output(&SatResult::unsat()), "UNSAT\n");
    }

    #[test]
    fn bsc_on_inline_spec() {
        let doc = SpecDocument::from_str("(declare p) (property (&& (-P- p) (next (!! (-P- p)))))").unwrap();
        let job = Job {
            bound: Some(3),
            solver: Some(SolverId::Embedded),
            ..Job::default()
        };
        let r = check(&doc, &job, None).unwrap();
        assert_eq!(r.verdict, Verdict::Sat);
        let t = r.trace.unwrap();
        assert!(t.holds(1, &crate::formula::Atom::prop("p")));
        assert!(!t.holds(2, &crate::formula::Atom::prop("p")));
    }

    #[test]
    fn bmc_requires_transitions() {
        let doc = SpecDocument::from_str("(property (-P- p))").unwrap();
        let job = Job {
            mode: Mode::Bmc,
            bound: Some(3),
            solver: Some(SolverId::Embedded),
            ..Job::default()
        };
        assert!(check(&doc, &job, None).is_err());
    }
}
