//! Subquotients `span(K) / span(I)` of an ambient integer lattice, with
//! canonical generators, representative lifts, and coordinate solves.

use super::smith::{smith_normal_form, SmithDecomposition};
use super::{AbelianGroup, IntMatrix, LinalgError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// The canonical structure of `span(K) / span(I)` inside `Z^n`.
///
/// Canonical generators are ordered free part first, then torsion in chain
/// order. Each generator carries a lift to the ambient lattice, and
/// arbitrary ambient vectors of `span(K)` can be resolved into generator
/// coordinates; that is how elements of a later page are expressed in
/// terms of the page they came from.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient_dim: usize,
    k: IntMatrix,
    k_snf: SmithDecomposition,
    comb_snf: SmithDecomposition,
    /// Positions in the internal coordinate lattice: free generators, then
    /// torsion generators with their orders.
    free_positions: Vec<usize>,
    torsion_positions: Vec<(usize, BigInt)>,
    group: AbelianGroup,
}

impl Subquotient {
    /// Compute `span(K) / span(I)`.
    ///
    /// Errors with [`LinalgError::ImageNotContained`] when `span(I)` does
    /// not lie inside `span(K)`.
    pub fn new(k: &IntMatrix, i: &IntMatrix) -> Result<Self, LinalgError> {
        if k.rows() != i.rows() {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient dimensions differ: {} vs {}",
                k.rows(),
                i.rows()
            )));
        }
        let k_snf = smith_normal_form(k);
        // Express the image columns in K-coordinates.
        let mut x_cols = Vec::with_capacity(i.cols());
        for j in 0..i.cols() {
            let col = i.column(j);
            let x = solve_in_lattice(&k_snf, k.cols(), &col)
                .map_err(|_| LinalgError::ImageNotContained)?;
            x_cols.push(x);
        }
        let x = IntMatrix::from_columns(k.cols(), &x_cols);
        // Relations of the quotient: the image plus the kernel of K itself
        // (dependent columns of K present no new classes).
        let n_kernel = kernel_from_snf(&k_snf, k.cols());
        let comb = x.hstack(&n_kernel);
        let comb_snf = smith_normal_form(&comb);

        let min = comb.rows().min(comb.cols());
        let mut free_positions = Vec::new();
        let mut torsion_positions = Vec::new();
        for idx in 0..k.cols() {
            let d = if idx < min {
                comb_snf.d[(idx, idx)].clone()
            } else {
                BigInt::zero()
            };
            if d.is_zero() {
                free_positions.push(idx);
            } else if !d.is_one() {
                torsion_positions.push((idx, d));
            }
        }
        let group = AbelianGroup::new(
            free_positions.len(),
            torsion_positions.iter().map(|(_, d)| d.clone()).collect(),
        );
        Ok(Subquotient {
            ambient_dim: k.rows(),
            k: k.clone(),
            k_snf,
            comb_snf,
            free_positions,
            torsion_positions,
            group,
        })
    }

    /// The full lattice `Z^n` modulo nothing; cheap path for fresh pages.
    pub fn full(n: usize) -> Self {
        Subquotient::new(&IntMatrix::identity(n), &IntMatrix::zeros(n, 0))
            .expect("full lattice subquotient is total")
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Ambient representative of the `idx`-th canonical generator
    /// (free generators first, then torsion).
    pub fn lift(&self, idx: usize) -> Vec<BigInt> {
        let pos = if idx < self.free_positions.len() {
            self.free_positions[idx]
        } else {
            self.torsion_positions[idx - self.free_positions.len()].0
        };
        self.k.mul_vec(&self.comb_snf.u.column(pos))
    }

    /// All generator lifts, as columns.
    pub fn lifts(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.group.num_generators())
            .map(|i| self.lift(i))
            .collect();
        IntMatrix::from_columns(self.ambient_dim, &cols)
    }

    /// Coordinates of an ambient vector in the canonical generators.
    ///
    /// Free coordinates are exact integers; torsion coordinates are reduced
    /// to the least nonnegative residue. Errors when `w` is not in
    /// `span(K)`.
    pub fn coords_of(&self, w: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if w.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector length {} vs ambient {}",
                w.len(),
                self.ambient_dim
            )));
        }
        let x = solve_in_lattice(&self.k_snf, self.k.cols(), w)?;
        let c = self.comb_snf.u_inv.mul_vec(&x);
        let mut coords = Vec::with_capacity(self.group.num_generators());
        for &pos in &self.free_positions {
            coords.push(c[pos].clone());
        }
        for (pos, d) in &self.torsion_positions {
            coords.push(c[*pos].mod_floor(d));
        }
        Ok(coords)
    }

    /// Does the ambient vector represent zero in the quotient?
    pub fn is_zero_class(&self, w: &[BigInt]) -> Result<bool, LinalgError> {
        Ok(self.coords_of(w)?.iter().all(Zero::is_zero))
    }
}

/// Solve `K x = w` over the integers using a precomputed decomposition of
/// `K`; the free coordinates of the solution are set to zero.
fn solve_in_lattice(
    snf: &SmithDecomposition,
    k_cols: usize,
    w: &[BigInt],
) -> Result<Vec<BigInt>, LinalgError> {
    let t = snf.u_inv.mul_vec(w);
    let min = snf.d.rows().min(snf.d.cols());
    let mut y = vec![BigInt::zero(); k_cols];
    for (idx, t_val) in t.iter().enumerate() {
        let d = if idx < min {
            snf.d[(idx, idx)].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !t_val.is_zero() {
                return Err(LinalgError::NotInSpan);
            }
        } else {
            let (q, r) = t_val.div_rem(&d);
            if !r.is_zero() {
                return Err(LinalgError::NotInSpan);
            }
            y[idx] = q;
        }
    }
    Ok(snf.v_inv.mul_vec(&y))
}

fn kernel_from_snf(snf: &SmithDecomposition, cols: usize) -> IntMatrix {
    let min = snf.d.rows().min(cols);
    let mut basis = Vec::new();
    for j in 0..cols {
        let zero = j >= min || snf.d[(j, j)].is_zero();
        if zero {
            basis.push(snf.v_inv.column(j));
        }
    }
    IntMatrix::from_columns(cols, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn full_lattice_mod_nothing() {
        let s = Subquotient::full(3);
        assert_eq!(s.group(), &AbelianGroup::free(3));
        let c = s.coords_of(&vec_bi(&[1, -2, 5])).unwrap();
        // Coordinates recover the vector through the lifts.
        let lifted: Vec<BigInt> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|g| &s.lift(g)[i] * &c[g])
                    .fold(BigInt::zero(), |a, b| a + b)
            })
            .collect();
        assert_eq!(lifted, vec_bi(&[1, -2, 5]));
    }

    #[test]
    fn middle_of_exact_pair_is_trivial() {
        // Z --0--> Z --*2--> Z: middle homology ker(*2)/im(0) = 0/0,
        // right cokernel Z/2.
        let d1 = IntMatrix::from_rows(&[vec![2]]);
        let kernel = super::super::kernel_basis(&d1);
        assert_eq!(kernel.cols(), 0);
        let d2 = IntMatrix::zeros(1, 1);
        let s = Subquotient::new(&kernel, &IntMatrix::zeros(1, 0)).unwrap();
        assert!(s.group().is_trivial());
        let coker = super::super::cokernel(&d1);
        assert_eq!(coker, AbelianGroup::cyclic(2));
        let _ = d2;
    }

    #[test]
    fn detects_image_outside_kernel() {
        // K spans 2Z x Z; the vector (1, 0) is not in it.
        let k = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let i = IntMatrix::from_rows(&[vec![1], vec![0]]);
        assert!(matches!(
            Subquotient::new(&k, &i),
            Err(LinalgError::ImageNotContained)
        ));
    }

    #[test]
    fn torsion_quotient_with_lifts() {
        // Z^2 / span((2, 0)) = Z + Z/2... with K the full lattice.
        let k = IntMatrix::identity(2);
        let i = IntMatrix::from_rows(&[vec![2], vec![0]]);
        let s = Subquotient::new(&k, &i).unwrap();
        assert_eq!(
            s.group(),
            &AbelianGroup::free(1).direct_sum(&AbelianGroup::cyclic(2))
        );
        // The torsion generator doubled must be a zero class.
        let t = s.lift(1);
        let doubled: Vec<BigInt> = t.iter().map(|x| x * 2).collect();
        assert!(s.is_zero_class(&doubled).unwrap());
        assert!(!s.is_zero_class(&t).unwrap());
        // The free generator is not torsion.
        let f = s.lift(0);
        let doubled_f: Vec<BigInt> = f.iter().map(|x| x * 2).collect();
        assert!(!s.is_zero_class(&doubled_f).unwrap());
    }

    #[test]
    fn dependent_generating_set_for_k() {
        // K's columns span Z but with a redundant column.
        let k = IntMatrix::from_rows(&[vec![2, 3]]);
        let i = IntMatrix::from_rows(&[vec![5]]);
        let s = Subquotient::new(&k, &i).unwrap();
        assert_eq!(s.group(), &AbelianGroup::cyclic(5));
    }
}
