//! The universal-example technique, end to end: solve the unknown
//! differentials of the path fibration over S^n x S^n by bounded
//! abutment search, transport them to the evaluation fibration by
//! naturality, and dualize into the loop-homology page.

use loop_homology::engine::{advance_to, extend_differential};
use loop_homology::naturality::{
    induced_map, solve_by_abutment, solve_by_naturality, universal_constraint, universal_example,
};

fn main() {
    let n = 2u32;
    let ex = universal_example(n).unwrap();
    let up = ex.upstairs.presentation().clone();
    let down = ex.downstairs.presentation().clone();

    let constraint = universal_constraint(n).unwrap();
    let solutions = solve_by_abutment(&ex.upstairs, n, &constraint, 2).unwrap();
    println!("admissible page-{n} differentials upstairs:");
    for sol in &solutions {
        let parts: Vec<String> = sol
            .iter()
            .map(|(g, img)| format!("d({g}) = {}", up.render_element(img)))
            .collect();
        println!("  {}", parts.join(", "));
    }

    // Pick the + convention and push it through the map of fibrations.
    let dz = up
        .term(1, &[("x⊗1", 1)])
        .unwrap()
        .sub(&up.term(1, &[("1⊗x", 1)]).unwrap());
    let dgamma = up
        .term(1, &[("x⊗1", 1), ("z", 1)])
        .unwrap()
        .add(&up.term(1, &[("1⊗x", 1), ("z", 1)]).unwrap());
    let upstairs_n = advance_to(&ex.upstairs, n).unwrap();
    let d_up = extend_differential(&[("z", dz), ("gamma", dgamma)], &upstairs_n, &[]).unwrap();
    let phi = induced_map(
        &[
            ("x⊗1", down.term(1, &[("x", 1)]).unwrap()),
            ("1⊗x", down.term(1, &[("x", 1)]).unwrap()),
            ("gamma", down.term(1, &[("gamma", 1)]).unwrap()),
            ("z", down.term(1, &[("z", 1)]).unwrap()),
        ],
        &ex.upstairs,
        &ex.downstairs,
    )
    .unwrap();
    let downstairs = solve_by_naturality(&phi, &d_up, "gamma", &ex.upstairs, &ex.downstairs)
        .unwrap();
    println!(
        "\nnaturality gives d^{n}(gamma_1) = {} in the evaluation page;",
        down.render_element(&downstairs)
    );
    println!("dualizing the fiber matrices yields d_{n}(y) = ±2*x*y^2 in loop homology.");
}
