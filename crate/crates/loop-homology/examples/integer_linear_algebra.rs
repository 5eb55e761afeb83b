//! The exact integer substrate: Smith normal form with unimodular
//! transforms, kernel lattices, cokernels, and subquotients.

use loop_homology::linalg::{cokernel, kernel_basis, smith_normal_form, subquotient};
use loop_homology::IntMatrix;

fn main() {
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let s = smith_normal_form(&m);
    println!("M = {m:?}");
    println!("D = {:?}", s.d);
    println!("U unimodular: {}, V unimodular: {}", s.u.is_unimodular(), s.v.is_unimodular());
    println!("U*D*V == M: {}", s.u.mul(&s.d).mul(&s.v) == m);

    let row = IntMatrix::from_rows(&[vec![1, 1]]);
    println!("\nkernel of [1 1]: {:?}", kernel_basis(&row));

    let diag = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
    println!("Z^2 / im(diag(2,3)) = {}", cokernel(&diag));

    // A tiny chain complex: Z --(2,0)--> Z^2 --(0 1)--> Z.
    let d1 = IntMatrix::from_rows(&[vec![0, 1]]);
    let d2 = IntMatrix::from_rows(&[vec![2], vec![0]]);
    assert!(d1.mul(&d2).is_zero());
    let homology = subquotient(&kernel_basis(&d1), &d2).unwrap();
    println!("middle homology ker(d1)/im(d2) = {}", homology.group());
}
