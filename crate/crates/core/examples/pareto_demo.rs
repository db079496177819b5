//! Small end-to-end demo: generate a bi-criteria instance, compute an
//! approximate Pareto curve of tours, and compare it with the exact one.

use pareto_tsp::gen::random_instance;
use pareto_tsp::graph::Orientation;
use pareto_tsp::maxtsp::{max_atsp, Budgets};
use pareto_tsp::oracle::exact_tour_pareto;
use pareto_tsp::pareto::{verify_approx_pareto, Sense};
use pareto_tsp::rat::{format_rat, rat};

fn main() {
    let inst = random_instance(Orientation::Directed, 7, 2, 7, 100).unwrap();
    let eps = rat(3, 10);
    let out = max_atsp(&inst, &eps, &rat(1, 2), &Budgets::default(), 1).unwrap();
    println!("approximate Pareto curve ({} tours):", out.set.len());
    for (_, w) in &out.set.items {
        println!("  {:?}", w.0);
    }
    let exact = exact_tour_pareto(&inst, Sense::Max).unwrap();
    println!("exact Pareto curve has {} weight classes", exact.len());
    let alpha = rat(1, 2) - &eps;
    let ok = verify_approx_pareto(&out.set, &exact, &alpha, Sense::Max)
        .unwrap()
        .is_ok();
    println!(
        "covers the exact curve at alpha = {}: {} (formal budgets clipped: {})",
        format_rat(&alpha),
        ok,
        !out.truncation.formal_guarantee()
    );
}
