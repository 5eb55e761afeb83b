//! Text rendering of pages: the second-quadrant lattice with q upward and
//! p rightward, arrows listed beneath with their integer labels. The
//! even-sphere page at its critical index shows the 2/0 alternation.

use loop_homology::bidegree::Window;
use loop_homology::engine::{extend_differential, render_diagram};
use loop_homology::models::{loop_homology_e2, SpaceTag};

fn main() {
    let space = SpaceTag::EvenSphere(2);
    let page = loop_homology_e2(space, Window::new(-2, 0, 0, 6)).unwrap();
    let pres = page.presentation().clone();
    let img = pres.term(2, &[("x", 1), ("y", 2)]).unwrap();
    let d = extend_differential(&[("y", img)], &page, &[]).unwrap();
    print!("{}", render_diagram(&page, Some(&d)).unwrap());
}
