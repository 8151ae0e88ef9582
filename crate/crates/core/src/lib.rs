//! Bounded satisfiability checking and bounded model checking for
//! propositional linear temporal logic with past operators, extended with
//! a metric (TRIO-style) layer.
//!
//! Pipeline: s-expression spec ([`spec`]) → desugared [`formula::Core`]
//! ([`desugar`]) → lasso encoding ([`encoder`]) → CNF ([`cnf`]) → SAT
//! ([`sat`]) → decoded [`trace::LassoTrace`] and history listing.
//! [`run`] ties the stages together for each checking mode.

pub mod circuit;
pub mod closure;
pub mod cnf;
pub mod desugar;
pub mod encoder;
pub mod error;
pub mod formula;
pub mod operational;
pub mod run;
pub mod sat;
pub mod sexpr;
pub mod spec;
pub mod trace;

pub use cnf::{CnfInstance, SatResult, Verdict};
pub use desugar::desugar;
pub use encoder::{encode, EncodedProblem, Engine, Problem};
pub use error::{Error, Result};
pub use formula::{Atom, Core, Formula, Term};
pub use run::{check, find_bound, Job, Mode, Report, RunConfig};
pub use sat::SolverId;
pub use spec::{parse_formula, SpecDocument};
pub use trace::{eval_lasso, parse_history, render_history, LassoTrace, PartialHistory};
