//! Loop homology of odd spheres: the sequence collapses at page 2 and the
//! answer is the free algebra Z[y] (x) E(x) with |x| = -n, |y| = n - 1.

use loop_homology::algebra::CoefficientMode;
use loop_homology::models::{
    closed_form_presentation, compute_loop_homology, verify_closed_form_presentation, SignChoice,
    SpaceTag,
};

fn main() {
    for n in [3u32, 5] {
        let space = SpaceTag::OddSphere(n);
        let comp = compute_loop_homology(space, 20, SignChoice::Plus, CoefficientMode::Integral)
            .expect("preset pipeline");

        println!("== {space} ==");
        println!(
            "active pages: {:?} (empty means the sequence collapsed)",
            comp.report.active_pages
        );
        for (degree, group) in &comp.groups {
            if !group.is_trivial() {
                println!("  H_{degree} = {group}");
            }
        }
        let pres = closed_form_presentation(space).unwrap();
        let verified = verify_closed_form_presentation(&comp).unwrap();
        println!(
            "stable algebra: {}   [{}]",
            pres.render_ring(),
            if verified.ok { "verified" } else { "MISMATCH" }
        );
        println!();
    }
}
