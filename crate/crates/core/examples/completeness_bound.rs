//! Completeness-bound search: the smallest k with no loop-free path of
//! k + 1 states. Beyond it, a BMC verdict of UNSAT is a proof.
//!
//!     cargo run --example completeness_bound

use std::path::Path;

use pltl_bmc::{check, find_bound, Job, Mode, SolverId, SpecDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs");
    let job = Job {
        mode: Mode::FindBound,
        solver: Some(SolverId::Embedded),
        ..Job::default()
    };
    for file in ["cycle3.zot", "stutter.zot", "free_atom.zot"] {
        let doc = SpecDocument::from_file(&specs.join(file))?;
        let bound = find_bound(&doc, &job, None)?;
        println!("{file}: completeness bound {bound}");

        // one step short of the bound a loop-free path still exists
        if bound > 1 {
            let short = Job {
                mode: Mode::LoopFree,
                bound: Some(bound - 1),
                ..job.clone()
            };
            println!("  at k = {}: {}", bound - 1, check(&doc, &short, None)?.summary());
        }
    }

    // the search gives up at max_bound instead of running forever
    let doc = SpecDocument::from_file(&specs.join("free_atom.zot"))?;
    let capped = Job {
        max_bound: Some(1),
        ..job
    };
    match find_bound(&doc, &capped, None) {
        Ok(b) => println!("unexpected bound {b}"),
        Err(e) => println!("capped search: {e}"),
    }
    Ok(())
}
