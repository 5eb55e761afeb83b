//! Parse a presentation from its text format and enumerate monomial
//! bases, normal forms, and cell groups over a window.

use loop_homology::algebra::{parse_element, parse_presentation};
use loop_homology::bidegree::Window;

const SOURCE: &str = "\
# a truncated ring with a torsion relation
x (-2,0) polynomial
y (0,4) polynomial
w (-2,1) exterior
relations:
x^3
3*x^2*y
w*x^2
";

fn main() {
    let pres = parse_presentation(SOURCE).unwrap();
    println!("ring: {}", pres.render_ring());

    let product = pres.multiply(
        &parse_element(&pres, "x + w").unwrap(),
        &parse_element(&pres, "x^2*y").unwrap(),
    );
    println!("(x + w) * x^2*y = {}", pres.render_element(&product));

    println!("\ncell groups over p in [-6, 0], q in [0, 5]:");
    let cells = pres.cell_data(Window::new(-6, 0, 0, 5)).unwrap();
    for (bd, cell) in &cells {
        let labels: Vec<String> = cell
            .monomials
            .iter()
            .map(|m| pres.render_monomial(m))
            .collect();
        println!("  {bd}: {} spanned by {{{}}}", cell.group, labels.join(", "));
    }
}
