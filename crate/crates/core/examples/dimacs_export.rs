//! Encodes a formula, writes it as DIMACS and solves the file again.
//!
//!     cargo run --example dimacs_export [-- <file.cnf>]
//!
//! Comment lines map variables back to atoms and instants, so the CNF can
//! be handed to any DIMACS solver.

use pltl_bmc::cnf::{dimacs_string, parse_dimacs};
use pltl_bmc::run::compile;
use pltl_bmc::sat::solve_embedded;
use pltl_bmc::trace::{decode, render_history};
use pltl_bmc::{desugar, parse_formula, Engine, Problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // p keeps recurring, and every p is followed by q within two steps
    let f = desugar(&parse_formula(
        "(&& (alwf (somf (-P- p))) (alwf (-> (-P- p) (withinf_ie (-P- q) 2))))",
    )?)?;
    let compiled = compile(&Problem::new(f), 6, Engine::Mono, false)?;
    let text = dimacs_string(&compiled.cnf, &compiled.encoded.symbols());

    let path = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("pltl-bmc-example.cnf"));
    std::fs::write(&path, &text)?;
    println!(
        "wrote {} ({} variables, {} clauses)",
        path.display(),
        compiled.cnf.num_vars,
        compiled.cnf.clauses.len()
    );

    let back = parse_dimacs(&std::fs::read_to_string(&path)?)?;
    assert_eq!(back, compiled.cnf);
    let result = solve_embedded(&back)?;
    if let Some(m) = &result.model {
        back.check_model(m)?;
    }
    print!("{}", render_history(&decode(&result, &compiled.encoded)?));
    Ok(())
}
