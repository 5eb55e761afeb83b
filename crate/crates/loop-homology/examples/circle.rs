//! The circle is answered in closed form: the free loop space splits as
//! Z x S^1, so loop homology is the Laurent group algebra tensored with
//! an exterior class, Z[t, t^-1] (x) E(x), |t| = 0, |x| = -1. The groups
//! are infinitely generated per degree and carry a group-algebra rank
//! instead of an abelian-group comparison.

use loop_homology::models::{closed_form_groups, closed_form_presentation, SpaceTag};

fn main() {
    let pres = closed_form_presentation(SpaceTag::Circle).unwrap();
    println!("loop homology algebra of the circle: {}", pres.render_ring());
    println!();
    for degree in -2..=2 {
        let value = closed_form_groups(SpaceTag::Circle, degree).unwrap();
        println!("  H_{degree} = {value}");
    }
}
