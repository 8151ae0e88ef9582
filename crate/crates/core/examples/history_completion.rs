//! History checking and completion (HCC).
//!
//!     cargo run --example history_completion
//!
//! A partial history fixes some atoms at some instants; the solver fills in
//! the rest or proves that no completion exists.

use std::path::Path;

use pltl_bmc::trace::parse_history;
use pltl_bmc::{check, Job, Mode, SolverId, SpecDocument};

fn complete(doc: &SpecDocument, text: &str) -> Result<(), Box<dyn std::error::Error>> {
    let job = Job {
        mode: Mode::Hcc,
        solver: Some(SolverId::Embedded),
        history: Some(parse_history(text)?),
        ..Job::default()
    };
    let report = check(doc, &job, None)?;
    println!("{}", report.summary());
    print!("{}", report.history());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs");
    let doc = SpecDocument::from_file(&specs.join("lamp.zot"))?;

    // on pressed at 1 and 6, off explicitly not pressed at 2
    complete(&doc, "------ time 1 ------\n  ON\n------ time 2 ------\n  !OFF\n------ time 6 ------\n  ON\n")?;

    // the light on at 0 with nothing pressed before: impossible
    complete(&doc, "------ time 0 ------\n  L\n  !ON\n------ time 1 ------\n  !ON\n")?;

    // a recorded total history, loop and pool markers included
    let mut h = parse_history(&std::fs::read_to_string(specs.join("lamp_reference.hist"))?)?;
    h.close_world(&doc.lower()?.declared_atoms, 10);
    let job = Job {
        mode: Mode::Hcc,
        solver: Some(SolverId::Embedded),
        history: Some(h),
        ..Job::default()
    };
    println!("reference history: {}", check(&doc, &job, None)?.summary());
    Ok(())
}
