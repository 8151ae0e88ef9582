//! Bounded model checking of a three-process mutual exclusion protocol.
//!
//!     cargo run --release --example mutex_bmc
//!
//! The turn-based protocol satisfies its liveness property up to k = 30
//! (UNSAT). Dropping the turn check from the T -> C guard breaks mutual
//! exclusion, and the counterexample shows two processes in C.

use std::path::Path;

use pltl_bmc::trace::eval_lasso;
use pltl_bmc::{check, Atom, Job, Mode, SolverId, SpecDocument, Term};

fn run(file: &str, bound: Option<usize>) -> Result<(), Box<dyn std::error::Error>> {
    let doc = SpecDocument::from_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(file))?;
    let job = Job {
        mode: Mode::Bmc,
        bound,
        solver: Some(SolverId::Embedded),
        ..Job::default()
    };
    let report = check(&doc, &job, None)?;
    println!("{file}: {}", report.summary());
    if let Some(t) = &report.trace {
        // the counterexample really violates the property
        let property = doc.lower()?.property.expect("bmc spec has a property");
        assert!(!eval_lasso(t, &property, 1));
        for i in 0..=t.k {
            let in_c: Vec<i64> = (1..=3)
                .filter(|&p| t.holds(i, &Atom::Array("STATE".into(), Term::Int(p), Term::sym("C"))))
                .collect();
            if in_c.len() > 1 {
                println!("  time {i}: processes {in_c:?} are all in C");
            }
        }
        print!("{}", report.history());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run("mutex3.zot", None)?;
    run("mutex3_noturn.zot", Some(4))
}
