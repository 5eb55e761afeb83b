//! Monomial-basis enumeration over a finite bidegree window.

use super::element::Monomial;
use super::presentation::{CellAlgebra, Presentation};
use super::{AlgebraError, GeneratorKind};
use crate::bidegree::{Bidegree, Window};
use crate::linalg::AbelianGroup;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

impl Presentation {
    /// Canonical ordered monomial bases for every bidegree of the window.
    ///
    /// Monomials killed by a unit relation are excluded; torsion monomials
    /// remain (they span cyclic summands, see [`Presentation::cell_data`]).
    /// Errors when a bidegree-(0,0) generator other than an exterior one
    /// makes a component infinite.
    pub fn monomial_basis(
        &self,
        window: Window,
    ) -> Result<BTreeMap<Bidegree, Vec<Monomial>>, AlgebraError> {
        let mut out: BTreeMap<Bidegree, Vec<Monomial>> = BTreeMap::new();
        if window.is_empty() {
            return Ok(out);
        }
        let caps = self.exponent_caps(window.p_extent(), window.q_extent())?;
        let mut stack: Vec<(usize, i64)> = Vec::new();
        self.enumerate(0, Bidegree::ZERO, &caps, &mut stack, &mut |m, bd| {
            if window.contains(bd) {
                out.entry(bd).or_default().push(m);
            }
        });
        for monos in out.values_mut() {
            monos.sort();
        }
        Ok(out)
    }

    /// Basis at a single bidegree.
    pub fn basis_at(&self, bd: Bidegree) -> Result<Vec<Monomial>, AlgebraError> {
        let window = Window::new(bd.p, bd.p, bd.q, bd.q);
        Ok(self
            .monomial_basis(window)?
            .remove(&bd)
            .unwrap_or_default())
    }

    /// Bases plus torsion annihilators and canonical groups per bidegree.
    pub fn cell_data(&self, window: Window) -> Result<BTreeMap<Bidegree, CellAlgebra>, AlgebraError> {
        let basis = self.monomial_basis(window)?;
        let mut out = BTreeMap::new();
        for (bd, monomials) in basis {
            let annihilators: Vec<Option<BigInt>> = monomials
                .iter()
                .map(|m| self.annihilator_of(m))
                .collect();
            let free = annihilators.iter().filter(|a| a.is_none()).count();
            let torsion: Vec<BigInt> = annihilators.iter().flatten().cloned().collect();
            let group = AbelianGroup::new(free, torsion);
            out.insert(
                bd,
                CellAlgebra {
                    monomials,
                    annihilators,
                    group,
                },
            );
        }
        Ok(out)
    }

    /// The torsion coefficient annihilating a basis monomial, if any.
    pub fn annihilator_of(&self, m: &Monomial) -> Option<BigInt> {
        use num_integer::Integer;
        let mut modulus: Option<BigInt> = None;
        for rel in self.relations() {
            if m.divisible_by(&rel.monomial) && !rel.coeff.is_one() {
                modulus = Some(match modulus {
                    None => rel.coeff.clone(),
                    Some(g) => g.gcd(&rel.coeff),
                });
            }
        }
        modulus
    }

    /// Per-generator exponent bound derived from the window extents.
    /// `None` in a slot means the generator cannot appear at all.
    fn exponent_caps(&self, p_extent: i64, q_extent: i64) -> Result<Vec<(i64, bool)>, AlgebraError> {
        // Enumeration is only sound when generator degrees do not mix
        // strict signs in a coordinate (partial sums would cancel and the
        // caps below would be wrong).
        let mut p_sign = 0i64;
        let mut q_sign = 0i64;
        for g in self.generators() {
            let sp = g.bidegree.p.signum();
            let sq = g.bidegree.q.signum();
            if sp != 0 {
                if p_sign != 0 && sp != p_sign {
                    return Err(AlgebraError::EnumerationUnbounded);
                }
                p_sign = sp;
            }
            if sq != 0 {
                if q_sign != 0 && sq != q_sign {
                    return Err(AlgebraError::EnumerationUnbounded);
                }
                q_sign = sq;
            }
        }
        let mut caps = Vec::with_capacity(self.generators().len());
        for g in self.generators() {
            let from_p = if g.bidegree.p != 0 {
                Some(p_extent / g.bidegree.p.abs())
            } else {
                None
            };
            let from_q = if g.bidegree.q != 0 {
                Some(q_extent / g.bidegree.q.abs())
            } else {
                None
            };
            let cap = match (from_p, from_q) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(b),
                (None, None) => None,
            };
            let cap = match (cap, g.kind) {
                (Some(c), GeneratorKind::Exterior) => (c.min(1), false),
                (Some(c), GeneratorKind::Laurent) => (c, true),
                (Some(c), _) => (c, false),
                (None, GeneratorKind::Exterior) => (1, false),
                (None, _) => return Err(AlgebraError::InfiniteBasis(g.bidegree)),
            };
            caps.push(cap);
        }
        Ok(caps)
    }

    fn enumerate(
        &self,
        idx: usize,
        bd: Bidegree,
        caps: &[(i64, bool)],
        stack: &mut Vec<(usize, i64)>,
        sink: &mut impl FnMut(Monomial, Bidegree),
    ) {
        if idx == self.generators().len() {
            let m = Monomial::from_pairs(stack.iter().copied());
            if !self.killed_by_unit_relation(&m) {
                sink(m, bd);
            }
            return;
        }
        let (cap, signed) = caps[idx];
        let lo = if signed { -cap } else { 0 };
        let g_bd = self.generators()[idx].bidegree;
        for e in lo..=cap {
            if e != 0 {
                stack.push((idx, e));
            }
            self.enumerate(idx + 1, bd + g_bd * e, caps, stack, sink);
            if e != 0 {
                stack.pop();
            }
        }
    }

    fn killed_by_unit_relation(&self, m: &Monomial) -> bool {
        self.relations()
            .iter()
            .any(|rel| rel.coeff.is_one() && m.divisible_by(&rel.monomial))
    }

    /// Column support bounds: the smallest and largest `p` any nonzero
    /// monomial of the presentation can have. `None` means unbounded on
    /// that side.
    pub fn p_support(&self) -> (Option<i64>, Option<i64>) {
        let mut min_p = Some(0i64);
        let mut max_p = Some(0i64);
        for (idx, g) in self.generators().iter().enumerate() {
            let p = g.bidegree.p;
            if p == 0 {
                continue;
            }
            if matches!(g.kind, GeneratorKind::Laurent) {
                // Negative exponents move p both ways.
                return (None, None);
            }
            let cap = self.kind_exponent_bound(idx);
            // A generator with p < 0 drags min_p down by cap * |p|;
            // with p > 0 it pushes max_p up.
            if p < 0 {
                min_p = match (min_p, cap) {
                    (Some(m), Some(c)) => Some(m + p * c),
                    _ => None,
                };
            } else {
                max_p = match (max_p, cap) {
                    (Some(m), Some(c)) => Some(m + p * c),
                    _ => None,
                };
            }
        }
        (min_p, max_p)
    }

    /// Largest exponent a generator can carry before its powers vanish:
    /// 1 for exterior generators, `k - 1` when a unit relation `g^k`
    /// truncates it, unbounded otherwise.
    fn kind_exponent_bound(&self, idx: usize) -> Option<i64> {
        match self.generators()[idx].kind {
            GeneratorKind::Exterior => Some(1),
            GeneratorKind::Laurent => None,
            GeneratorKind::Polynomial | GeneratorKind::DividedPower => {
                let mut bound: Option<i64> = None;
                for rel in self.relations() {
                    if !rel.coeff.is_one() {
                        continue;
                    }
                    let exps = rel.monomial.exponents();
                    if exps.len() == 1 && exps[0].0 == idx {
                        let k = exps[0].1 - 1;
                        bound = Some(bound.map_or(k, |b: i64| b.min(k)));
                    }
                }
                bound
            }
        }
    }
}
