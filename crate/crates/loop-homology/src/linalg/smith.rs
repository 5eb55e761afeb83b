//! Smith normal form with full transform tracking.

use super::IntMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Decomposition `M = U * D * V` with `U`, `V` unimodular and `D` diagonal,
/// nonnegative, satisfying the divisibility chain `d_i | d_{i+1}`.
///
/// The inverses of the transforms are tracked alongside, so kernels and
/// coordinate solves come for free.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `D`, including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let min = self.d.rows().min(self.d.cols());
        (0..min).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Quotient rounded to nearest, so `|a - q*b| <= |b| / 2`.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    let b_abs = b.abs();
    let (mut q, r) = a.div_mod_floor(&b_abs);
    if &r * 2 > b_abs {
        q += 1;
    }
    if b.is_negative() {
        -q
    } else {
        q
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    // Row operations act on `a` from the left; `u` absorbs the inverse on
    // its columns so that u * a * v stays equal to the input.
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap_rows(i, k);
        self.u.swap_cols(i, k);
        self.u_inv.swap_rows(i, k);
    }

    fn row_axpy(&mut self, i: usize, k: usize, c: &BigInt) {
        self.a.row_axpy(i, k, c);
        let neg = -c.clone();
        self.u.col_axpy(k, i, &neg);
        self.u_inv.row_axpy(i, k, c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_col(i);
        self.u_inv.negate_row(i);
    }

    fn swap_cols(&mut self, j: usize, l: usize) {
        self.a.swap_cols(j, l);
        self.v.swap_rows(j, l);
        self.v_inv.swap_cols(j, l);
    }

    fn col_axpy(&mut self, j: usize, l: usize, c: &BigInt) {
        self.a.col_axpy(j, l, c);
        let neg = -c.clone();
        self.v.row_axpy(l, j, &neg);
        self.v_inv.col_axpy(j, l, c);
    }

    /// Minimal-absolute-value nonzero pivot in the trailing submatrix.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.a.rows() {
            for j in k..self.a.cols() {
                if self.a[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.a[(i, j)].abs() < self.a[(bi, bj)].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Smith normal form `M = U * D * V`.
///
/// Total on all integer matrices, including empty ones. Pivots are chosen
/// with minimal absolute value to bound entry growth.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };

    let min = rows.min(cols);
    for k in 0..min {
        loop {
            let Some((pi, pj)) = r.find_pivot(k) else {
                // Trailing submatrix is zero; done.
                return finish(r, min);
            };
            r.swap_rows(k, pi);
            r.swap_cols(k, pj);

            let mut dirty = false;
            for i in k + 1..rows {
                if r.a[(i, k)].is_zero() {
                    continue;
                }
                let q = div_nearest(&r.a[(i, k)], &r.a[(k, k)]);
                let neg = -q;
                r.row_axpy(i, k, &neg);
                if !r.a[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if r.a[(k, j)].is_zero() {
                    continue;
                }
                let q = div_nearest(&r.a[(k, j)], &r.a[(k, k)]);
                let neg = -q;
                r.col_axpy(j, k, &neg);
                if !r.a[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Remainders left behind strictly shrink the next pivot.
                continue;
            }

            // Row and column are clear; force the pivot to divide the rest
            // of the submatrix so the divisibility chain holds.
            let mut merged = false;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&r.a[(i, j)] % &r.a[(k, k)]).is_zero() {
                        let one = BigInt::from(1);
                        r.row_axpy(k, i, &one);
                        merged = true;
                        break 'scan;
                    }
                }
            }
            if !merged {
                break;
            }
        }
    }
    finish(r, min)
}

fn finish(mut r: Reducer, min: usize) -> SmithDecomposition {
    for k in 0..min {
        if r.a[(k, k)].is_negative() {
            r.negate_row(k);
        }
    }
    debug_assert!(r.a.is_diagonal());
    SmithDecomposition {
        u: r.u,
        d: r.a,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
    }
}
