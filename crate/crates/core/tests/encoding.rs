mod common;

use common::*;
use pltl_bmc::cnf::to_cnf;
use pltl_bmc::encoder::{encode, Engine, Problem};
use pltl_bmc::sat::solve_embedded;
use pltl_bmc::trace::{decode, Fact, LassoTrace, PartialHistory};
use pltl_bmc::{eval_lasso, Atom, Core, Error};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn solve_problem(p: &Problem, k: usize, engine: Engine, loop_free: bool) -> Option<LassoTrace> {
    let e = encode(p, k, engine, loop_free).expect("encodes");
    let cnf = to_cnf(&e.circuit, e.varmap.len());
    let r = solve_embedded(&cnf).expect("solves");
    r.is_sat().then(|| decode(&r, &e).expect("decodes"))
}

/// Encoder verdict equals exhaustive enumeration; SAT traces re-satisfy
/// the formula.
fn exactness(seed: u64, cases: usize, k: usize, n_atoms: usize, trio: bool) {
    let mut rng = StdRng::seed_from_u64(seed);
    for n in 0..cases {
        let engine = if n % 2 == 0 { Engine::Mono } else { Engine::Bi };
        let f = if trio {
            desugared(&random_formula(&mut rng, 4, n_atoms))
        } else {
            random_core(&mut rng, 4, n_atoms)
        };
        let got = solve(&f, k, engine);
        if let Some(t) = &got {
            assert!(eval_lasso(t, &f, root_instant(engine)), "unsound {engine} k={k}: {f}");
        } else {
            assert!(!brute_force_sat(&f, k, engine), "incomplete {engine} k={k}: {f}");
        }
    }
}

#[test]
fn core_formulas_k2() {
    exactness(101, 200, 2, 3, false);
}

#[test]
fn core_formulas_k3() {
    exactness(102, 150, 3, 3, false);
}

#[test]
fn metric_formulas_k3() {
    exactness(103, 150, 3, 2, true);
}

#[test]
fn small_bound_edge_cases() {
    // k = 1 is rejected by the lasso engines, k = 2 has one loop choice per side
    assert!(matches!(
        encode(&Problem::new(Core::atom("p")), 1, Engine::Mono, false),
        Err(Error::Encode(_))
    ));
    exactness(104, 100, 2, 2, true);
}

#[test]
fn origin_behaviour() {
    // zeta holds at the mono origin, yesterday does not
    let t = solve(&Core::yesterday(Core::zeta(Core::False)), 3, Engine::Mono).expect("sat");
    assert!(eval_lasso(&t, &Core::zeta(Core::False), 0));
    assert!(solve(&Core::yesterday(Core::yesterday(Core::True)), 3, Engine::Mono).is_none());
    // the bi time line has no origin
    assert!(solve(&Core::yesterday(Core::yesterday(Core::True)), 3, Engine::Bi).is_some());
    assert!(solve(&Core::zeta(Core::False), 3, Engine::Bi).is_none());
}

/// A bi-infinite `g` everywhere: release towards the future, trigger
/// towards the past.
fn everywhere(g: &Core, engine: Engine) -> Core {
    let future = Core::release(Core::False, g.clone());
    match engine {
        Engine::Mono => future,
        Engine::Bi => Core::And(vec![future, Core::trigger(Core::False, g.clone())]),
    }
}

fn random_prop(rng: &mut StdRng, depth: usize, n_atoms: usize) -> Core {
    if depth == 0 || rng.gen_bool(0.3) {
        return atom(rng, n_atoms);
    }
    let sub = |rng: &mut StdRng| random_prop(rng, depth - 1, n_atoms);
    match rng.gen_range(0..3) {
        0 => Core::not(sub(rng)),
        1 => Core::Or(vec![sub(rng), sub(rng)]),
        _ => Core::And(vec![sub(rng), sub(rng)]),
    }
}

#[test]
fn transitions_and_invariants_hold_everywhere() {
    let mut rng = StdRng::seed_from_u64(105);
    for n in 0..150 {
        let engine = if n % 2 == 0 { Engine::Mono } else { Engine::Bi };
        let k = 3;
        let f = random_core(&mut rng, 3, 2);
        let tr = random_core(&mut rng, 2, 2);
        let inv = random_prop(&mut rng, 2, 2);
        let mut p = Problem::new(f.clone());
        p.transitions.push(tr.clone());
        p.invariants.push(inv.clone());
        let whole = Core::And(vec![
            f.clone(),
            everywhere(&tr, engine),
            everywhere(&inv, engine),
        ]);
        // the transition is checked from the origin, not from the root instant
        let holds = |t: &LassoTrace| {
            eval_lasso(t, &f, root_instant(engine))
                && eval_lasso(t, &everywhere(&tr, engine), 0)
                && eval_lasso(t, &everywhere(&inv, engine), 0)
        };
        let atoms = formula_atoms(&whole);
        let expected = for_each_lasso(&atoms, k, engine, holds);
        match solve_problem(&p, k, engine, false) {
            Some(t) => assert!(holds(&t), "unsound {engine}: {f} / {tr} / {inv}"),
            None => assert!(!expected, "incomplete {engine}: {f} / {tr} / {inv}"),
        }
    }
}

/// Any brute-force model, handed back as a total history, is found again.
#[test]
fn total_history_of_a_model_is_completed() {
    let mut rng = StdRng::seed_from_u64(106);
    let mut checked = 0;
    while checked < 100 {
        let engine = if checked % 2 == 0 { Engine::Mono } else { Engine::Bi };
        let k = 3;
        let f = random_core(&mut rng, 3, 2);
        let atoms = formula_atoms(&f);
        let mut model = None;
        for_each_lasso(&atoms, k, engine, |t| {
            let ok = eval_lasso(t, &f, root_instant(engine));
            if ok {
                model = Some(t.clone());
            }
            ok
        });
        let Some(model) = model else { continue };
        checked += 1;
        let mut p = Problem::new(f.clone());
        p.history = model.to_history();
        let t = solve_problem(&p, k, engine, false).unwrap_or_else(|| panic!("lost model of {f}"));
        assert_eq!(t.loop_start, model.loop_start);
        assert_eq!(t.past_loop_end, model.past_loop_end);
        for a in &atoms {
            for i in 0..=k {
                assert_eq!(t.holds(i, a), model.holds(i, a));
            }
        }
    }
}

#[test]
fn contradictory_history_is_unsat() {
    let mut p = Problem::new(Core::release(Core::False, Core::atom("p")));
    p.history.facts.push(Fact {
        instant: 2,
        atom: Atom::prop("p"),
        value: false,
    });
    assert!(solve_problem(&p, 3, Engine::Mono, false).is_none());
    assert!(solve_problem(&p, 3, Engine::Bi, false).is_none());
}

#[test]
fn history_markers_pin_selectors() {
    let p = Problem {
        history: PartialHistory {
            loop_start: Some(2),
            past_loop_end: Some(1),
            ..PartialHistory::default()
        },
        ..Problem::new(Core::atom("p"))
    };
    let t = solve_problem(&p, 4, Engine::Bi, false).expect("sat");
    assert_eq!((t.loop_start, t.past_loop_end), (Some(2), Some(1)));
    let bad = Problem {
        history: PartialHistory {
            loop_start: Some(9),
            ..PartialHistory::default()
        },
        ..Problem::new(Core::atom("p"))
    };
    assert!(encode(&bad, 4, Engine::Mono, false).is_err());
}

#[test]
fn history_over_unknown_atom_is_rejected() {
    let mut p = Problem::new(Core::atom("p"));
    p.history.facts.push(Fact {
        instant: 0,
        atom: Atom::prop("nowhere"),
        value: true,
    });
    assert!(encode(&p, 3, Engine::Mono, false).is_err());
}

/// Propositional/next-only evaluation on a finite path.
fn finite(path: &[Vec<bool>], atoms: &[Atom], f: &Core, j: usize) -> bool {
    match f {
        Core::True => true,
        Core::False => false,
        Core::Atom(a) => path[j][atoms.iter().position(|b| b == a).unwrap()],
        Core::Not(a) => !finite(path, atoms, a, j),
        Core::And(fs) => fs.iter().all(|g| finite(path, atoms, g, j)),
        Core::Or(fs) => fs.iter().any(|g| finite(path, atoms, g, j)),
        Core::Next(a) => j + 1 < path.len() && finite(path, atoms, a, j + 1),
        other => panic!("not a next-only formula: {other}"),
    }
}

/// Whether a path of `k + 1` pairwise distinct states exists in which
/// `init` holds at 0 and `tr` at each of `0..k`.
fn loop_free_path_exists(atoms: &[Atom], k: usize, init: &Core, tr: &Core) -> bool {
    let w = atoms.len();
    let states = 1u32 << w;
    if k + 1 > states as usize {
        return false;
    }
    fn extend(path: &mut Vec<u32>, k: usize, states: u32, ok: &dyn Fn(&[u32]) -> bool) -> bool {
        if path.len() == k + 1 {
            return ok(path);
        }
        for s in 0..states {
            if !path.contains(&s) {
                path.push(s);
                if extend(path, k, states, ok) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let ok = |p: &[u32]| {
        let path: Vec<Vec<bool>> = p.iter().map(|s| (0..w).map(|a| s >> a & 1 == 1).collect()).collect();
        finite(&path, atoms, init, 0) && (0..k).all(|j| finite(&path, atoms, tr, j))
    };
    extend(&mut Vec::new(), k, states, &ok)
}

#[test]
fn loop_free_paths() {
    let mut rng = StdRng::seed_from_u64(107);
    for _ in 0..120 {
        let k = rng.gen_range(1..=4);
        let init = random_prop(&mut rng, 2, 2);
        let now = random_prop(&mut rng, 2, 2);
        let then = random_prop(&mut rng, 2, 2);
        let tr = Core::Or(vec![Core::not(now), Core::next(then)]);
        let mut p = Problem::new(Core::yesterday(init.clone()));
        p.transitions.push(tr.clone());
        p.state_atoms = props(&ATOMS[..2]);
        let atoms = props(&ATOMS[..2]);
        let got = solve_problem(&p, k, Engine::Mono, true);
        let want = loop_free_path_exists(&atoms, k, &init, &tr);
        assert_eq!(got.is_some(), want, "k={k} init={init} tr={tr}");
        if let Some(t) = got {
            for i in 0..=k {
                for j in 0..i {
                    assert_ne!(t.values[i], t.values[j], "states {j} and {i} repeat");
                }
            }
        }
    }
}

#[test]
fn free_atoms_bound_loop_free_length() {
    for w in 1..=3 {
        for k in 1..=8 {
            let mut p = Problem::new(Core::True);
            p.state_atoms = props(&ATOMS[..w]);
            let sat = solve_problem(&p, k, Engine::Mono, true).is_some();
            assert_eq!(sat, k < 1 << w, "w={w} k={k}");
        }
    }
}
