//! Metric (TRIO) operators and case expressions, expanded into the
//! propositional core.
//!
//!     cargo run --example trio_desugar

use pltl_bmc::desugar::Desugarer;
use pltl_bmc::{desugar, parse_formula};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in [
        "(lasts (-P- a) 2)",
        "(withinP_ee (-P- off) 3)",
        "(past (-P- on) 2)",
        "(dist (-P- a) -1)",
        "(somf_i (-P- a))",
        "(alw (-> (-P- req) (withinf_ii (-P- ack) 2)))",
        "(until_ie (-P- a) (-P- b))",
        "(-E- x '(1 2) (-P- p x))",
    ] {
        let f = parse_formula(text)?;
        println!("{f}\n  => {}\n", desugar(&f)?);
    }

    // one level of case expansion, before the quantifiers are unrolled
    let case = parse_formula(
        "(and-case (x '(1 2))
           ((-P- g x) (-P- a x))
           (else (-P- b x)))",
    )?;
    println!("{case}\n  => {}", Desugarer::new().expand_case(&case)?);
    Ok(())
}
