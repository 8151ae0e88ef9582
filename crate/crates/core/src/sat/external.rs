//! External solver subprocesses.
//!
//! Two output dialects are understood:
//! * minisat: `exe input.cnf result` writes `SAT`/`UNSAT` on the first line
//!   of the result file, then the model literals terminated by `0`;
//! * picosat: `exe input.cnf` prints `s SATISFIABLE` / `s UNSATISFIABLE`
//!   and `v ...` literal lines on stdout, which are saved to the result
//!   path.
//!
//! Exit statuses 10 and 20 are the usual SAT/UNSAT codes; any other status
//! without a readable verdict is an error, never UNSAT.

use std::path::{Path, PathBuf};
use std::process::Command;

use super::SolverId;
use crate::cnf::{SatResult, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub id: SolverId,
    pub program: PathBuf,
}

fn is_executable(p: &Path) -> bool {
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        p.metadata().map(|m| m.is_file() && m.permissions().mode() & 0o111 != 0).unwrap_or(false)
    }
    #[cfg(not(unix))]
    {
        p.is_file()
    }
}

impl ExternalSolver {
    /// Finds the solver's executable on `PATH`.
    pub fn locate(id: SolverId) -> Result<Self> {
        if id == SolverId::Embedded {
            return Err(Error::SolverMissing("embedded solver has no executable".into()));
        }
        let name = id.name();
        let path = std::env::var_os("PATH").unwrap_or_default();
        std::env::split_paths(&path)
            .map(|dir| dir.join(name))
            .find(|p| is_executable(p))
            .map(|program| ExternalSolver { id, program })
            .ok_or_else(|| Error::SolverMissing(name.to_string()))
    }

    pub fn with_program(id: SolverId, program: impl Into<PathBuf>) -> Self {
        ExternalSolver {
            id,
            program: program.into(),
        }
    }

    /// Solves the DIMACS file at `cnf`, leaving the raw solver output at
    /// `result`. The model is not checked here.
    pub fn solve(&self, cnf: &Path, result: &Path, num_vars: u32) -> Result<SatResult> {
        let solver = self.id.name().to_string();
        if !is_executable(&self.program) {
            return Err(Error::SolverMissing(self.program.display().to_string()));
        }
        // a stale result from an earlier run must not be mistaken for this one's
        match std::fs::remove_file(result) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => return Err(Error::io(result, e)),
            _ => {}
        }
        let mut cmd = Command::new(&self.program);
        cmd.arg(cnf);
        if self.id == SolverId::Minisat {
            cmd.arg(result);
        }
        log::info!("running {:?}", cmd);
        let out = cmd.output().map_err(|e| Error::io(&self.program, e))?;
        let status = out.status.code();
        let text = match self.id {
            SolverId::Picosat => {
                std::fs::write(result, &out.stdout).map_err(|e| Error::io(result, e))?;
                String::from_utf8_lossy(&out.stdout).into_owned()
            }
            _ => match std::fs::read_to_string(result) {
                Ok(t) => t,
                Err(_) => {
                    // keep the artifact present even when the solver wrote nothing
                    let _ = std::fs::write(result, "");
                    String::new()
                }
            },
        };
        let parsed = match self.id {
            SolverId::Picosat => parse_picosat_output(&text, num_vars),
            _ => parse_minisat_output(&text, num_vars),
        };
        match parsed {
            Ok(Some(r)) => Ok(r),
            Ok(None) if !matches!(status, Some(10) | Some(20)) => Err(Error::SolverFailed {
                solver,
                status: status.map_or_else(|| "killed by signal".to_string(), |c| c.to_string()),
            }),
            Ok(None) => Err(Error::SolverOutput {
                solver,
                msg: format!("exit status {} but no verdict in output", status.unwrap_or_default()),
            }),
            Err(msg) => Err(Error::SolverOutput { solver, msg }),
        }
    }
}

fn read_model<'a>(tokens: impl Iterator<Item = &'a str>, num_vars: u32) -> std::result::Result<Vec<bool>, String> {
    let mut model = vec![false; num_vars as usize + 1];
    for tok in tokens {
        let l: i64 = tok.parse().map_err(|_| format!("bad literal `{tok}`"))?;
        if l == 0 {
            break;
        }
        let v = l.unsigned_abs() as usize;
        if v > num_vars as usize {
            return Err(format!("literal {l} exceeds {num_vars} variables"));
        }
        model[v] = l > 0;
    }
    Ok(model)
}

/// `Ok(None)` when the text carries no verdict at all.
pub fn parse_minisat_output(text: &str, num_vars: u32) -> std::result::Result<Option<SatResult>, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        None => Ok(None),
        Some("UNSAT") => Ok(Some(SatResult::unsat())),
        Some("SAT") => {
            let model = read_model(lines.flat_map(str::split_whitespace), num_vars)?;
            Ok(Some(SatResult {
                verdict: Verdict::Sat,
                model: Some(model),
            }))
        }
        Some("INDET") => Err("solver could not decide the instance".into()),
        Some(other) => Err(format!("unexpected first line `{other}`")),
    }
}

/// `Ok(None)` when the text carries no `s` line.
pub fn parse_picosat_output(text: &str, num_vars: u32) -> std::result::Result<Option<SatResult>, String> {
    let mut verdict = None;
    let mut values = Vec::new();
    for line in text.lines().map(str::trim) {
        if let Some(rest) = line.strip_prefix("s ") {
            verdict = Some(match rest.trim() {
                "SATISFIABLE" => Verdict::Sat,
                "UNSATISFIABLE" => Verdict::Unsat,
                other => return Err(format!("unknown status `{other}`")),
            });
        } else if let Some(rest) = line.strip_prefix('v') {
            values.extend(rest.split_whitespace().map(str::to_string));
        }
    }
    match verdict {
        None => Ok(None),
        Some(Verdict::Unsat) => Ok(Some(SatResult::unsat())),
        Some(Verdict::Sat) => {
            let model = read_model(values.iter().map(String::as_str), num_vars)?;
            Ok(Some(SatResult {
                verdict: Verdict::Sat,
                model: Some(model),
            }))
        }
    }
}
