//! Rational coefficients kill the torsion: ranks come out of the
//! fraction-free elimination path and equal the integral free ranks.
//! Over Q the even-sphere differential is determined by graded
//! commutativity alone: d_n(y^{2k}) = 0 and d_n(y^{2k+1}) = 2 x y^{2k+2}.

use loop_homology::algebra::CoefficientMode;
use loop_homology::models::{compute_loop_homology, SignChoice, SpaceTag};

fn main() {
    let space = SpaceTag::EvenSphere(2);
    let integral =
        compute_loop_homology(space, 10, SignChoice::Plus, CoefficientMode::Integral).unwrap();
    let rational =
        compute_loop_homology(space, 10, SignChoice::Plus, CoefficientMode::Rational).unwrap();

    println!("degree  over Z      over Q");
    for (degree, zg) in &integral.groups {
        let qg = &rational.groups[degree];
        println!("{degree:<7} {:<11} {}", zg.to_string(), qg);
    }
}
