//! Loop homology of complex projective spaces: the page-2n differential
//! d(z) = (n+1) x^n y leaves Z + Z/(n+1) in every degree 2nm and plain Z
//! elsewhere down to -2n; CP^1 reproduces the 2-sphere.

use loop_homology::algebra::CoefficientMode;
use loop_homology::models::{
    closed_form_presentation, compute_loop_homology, verify_closed_form_presentation, SignChoice,
    SpaceTag,
};

fn main() {
    for n in [1u32, 2, 3] {
        let space = SpaceTag::ComplexProjective(n);
        let comp = compute_loop_homology(space, 16, SignChoice::Plus, CoefficientMode::Integral)
            .expect("preset pipeline");
        println!("== {space} ==");
        println!("nonzero differential on page {:?}", comp.report.active_pages);
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
        println!();
    }

    // CP^1 and S^2 agree degree by degree.
    let cp1 = compute_loop_homology(
        SpaceTag::ComplexProjective(1),
        16,
        SignChoice::Plus,
        CoefficientMode::Integral,
    )
    .unwrap();
    let s2 = compute_loop_homology(
        SpaceTag::EvenSphere(2),
        16,
        SignChoice::Plus,
        CoefficientMode::Integral,
    )
    .unwrap();
    println!("CP^1 groups equal S^2 groups: {}", cp1.groups == s2.groups);
}
