//! Loop homology of even spheres: collapse is impossible because the
//! abutment is graded commutative while y has odd degree and y^2 != 0;
//! the single differential d_n(y) = ±2 x y^2 produces the 2-torsion
//! column and the answer E(z) (x) Z[x,y] / (x^2, x*z, 2*x*y).

use loop_homology::algebra::CoefficientMode;
use loop_homology::bidegree::Window;
use loop_homology::engine::{page_graded_commutative, run, Schedule};
use loop_homology::models::{
    closed_form_presentation, compute_loop_homology, loop_homology_e2, standard_window,
    verify_closed_form_presentation, SignChoice, SpaceTag,
};

fn main() {
    let n = 4u32;
    let space = SpaceTag::EvenSphere(n);

    // Running with no differentials at all leaves a stable page that is
    // not graded commutative: the obstruction that forces d_n != 0.
    let page2 = loop_homology_e2(space, standard_window(space, 16)).unwrap();
    let (collapsed, _) = run(&page2, &Schedule::new()).unwrap();
    let window = Window::new(-(n as i64), 0, 0, 16);
    let (commutes, witness) = page_graded_commutative(&collapsed, window).unwrap();
    println!(
        "all-zero schedule: graded commutative = {commutes}, witness = {:?}",
        witness
    );

    // The installed schedule repairs it and matches the closed form.
    let comp =
        compute_loop_homology(space, 20, SignChoice::Plus, CoefficientMode::Integral).unwrap();
    println!("\n== {space} with d_{n}(y) = 2*x*y^2 ==");
    for (degree, group) in &comp.groups {
        if !group.is_trivial() {
            println!("  H_{degree} = {group}");
        }
    }
    let verified = verify_closed_form_presentation(&comp).unwrap();
    println!(
        "stable algebra: {}   [{}]",
        closed_form_presentation(space).unwrap().render_ring(),
        if verified.ok { "verified" } else { "MISMATCH" }
    );
}
