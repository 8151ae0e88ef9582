//! Solving CNF instances with the embedded CDCL solver or an external
//! executable.

mod cdcl;
mod external;

use std::fmt;
use std::str::FromStr;

pub use cdcl::Solver;
pub use external::{parse_minisat_output, parse_picosat_output, ExternalSolver};

use crate::cnf::{CnfInstance, SatResult};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolverId {
    Embedded,
    #[default]
    Minisat,
    Picosat,
}

impl SolverId {
    pub const ALL: [SolverId; 3] = [SolverId::Embedded, SolverId::Minisat, SolverId::Picosat];

    pub fn name(self) -> &'static str {
        match self {
            SolverId::Embedded => "embedded",
            SolverId::Minisat => "minisat",
            SolverId::Picosat => "picosat",
        }
    }
}

impl FromStr for SolverId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        SolverId::ALL
            .into_iter()
            .find(|id| id.name() == lower)
            .ok_or_else(|| format!("unknown solver `{s}` (expected embedded, minisat or picosat)"))
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complete decision procedure; SAT models are checked against every
/// clause before returning.
pub fn solve_embedded(inst: &CnfInstance) -> Result<SatResult> {
    solve_embedded_limited(inst, None)
}

/// As [`solve_embedded`], failing with [`crate::Error::Timeout`] after
/// `conflict_limit` conflicts.
pub fn solve_embedded_limited(inst: &CnfInstance, conflict_limit: Option<u64>) -> Result<SatResult> {
    let mut solver = Solver::new(inst);
    let result = solver.solve(conflict_limit)?;
    if let Some(model) = &result.model {
        inst.check_model(model)?;
    }
    log::debug!(
        "embedded solver: {} vars, {} clauses, {} conflicts, {} decisions",
        inst.num_vars,
        inst.clauses.len(),
        solver.conflicts,
        solver.decisions
    );
    Ok(result)
}
