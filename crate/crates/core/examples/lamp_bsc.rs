//! Bounded satisfiability of the timed lamp with the bi-infinite engine.
//!
//!     cargo run --example lamp_bsc [-- <out-dir>]
//!
//! Writes output.cnf.txt, output.sat.txt and output.hist.txt to the output
//! directory (a temporary one by default) and prints the history.

use std::path::{Path, PathBuf};

use pltl_bmc::{check, Job, Mode, SolverId, SpecDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/lamp.zot");
    let doc = SpecDocument::from_file(&spec)?;

    let out: PathBuf = match std::env::args().nth(1) {
        Some(d) => d.into(),
        None => std::env::temp_dir().join("pltl-bmc-lamp"),
    };
    std::fs::create_dir_all(&out)?;

    // :engine bi and :bound 10 come from the options section
    let job = Job {
        mode: Mode::Bsc,
        solver: Some(SolverId::Embedded),
        ..Job::default()
    };
    let report = check(&doc, &job, Some(&out))?;
    println!("{}", report.summary());
    print!("{}", report.history());
    println!("artifacts in {}", out.display());
    Ok(())
}
