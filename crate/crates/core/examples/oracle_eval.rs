//! Evaluating formulas directly on a lasso trace, without any SAT solving.
//!
//!     cargo run --example oracle_eval

use pltl_bmc::trace::{eval_lasso, eval_window, render_history, LassoTrace};
use pltl_bmc::{desugar, parse_formula, Atom, Engine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, q) = (Atom::prop("p"), Atom::prop("q"));
    // instants 0..=5, the suffix 2..=5 repeats forever
    let mut t = LassoTrace::new(5, Engine::Mono, vec![p.clone(), q.clone()], Some(2), None);
    for i in [1, 3, 5] {
        t.set(i, &p, true);
    }
    t.set(4, &q, true);
    print!("{}", render_history(&t));

    for text in [
        "(alwf (somf (-P- p)))",
        "(until (!! (-P- q)) (-P- p))",
        "(since (-P- p) (-P- q))",
        "(lasted (!! (-P- q)) 3)",
        "(withinf_ee (-P- q) 3)",
    ] {
        let f = desugar(&parse_formula(text)?)?;
        let window: String = eval_window(&t, &f)
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        println!("{text:<32} at 1: {:<5} instants 0..=5: {window}", eval_lasso(&t, &f, 1));
    }
    Ok(())
}
