//! Monomials and integer combinations of monomials.

use crate::bidegree::Bidegree;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A normal-ordered monomial: exponents indexed by generator, sorted by the
/// global generator order (declaration order in the presentation).
///
/// Exponents are nonnegative except for Laurent generators, 0/1 for
/// exterior generators, and divided-power families store the family index
/// as the exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    exps: Vec<(usize, i64)>,
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// Build from (generator index, exponent) pairs; sorts, merges
    /// duplicates additively, and drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut map: BTreeMap<usize, i64> = BTreeMap::new();
        for (g, e) in pairs {
            *map.entry(g).or_insert(0) += e;
        }
        Monomial {
            exps: map.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(usize, i64)] {
        &self.exps
    }

    pub fn exponent_of(&self, gen: usize) -> i64 {
        self.exps
            .iter()
            .find(|&&(g, _)| g == gen)
            .map_or(0, |&(_, e)| e)
    }

    /// Componentwise divisibility: every exponent of `other` is covered.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.exps.iter().all(|&(g, e)| self.exponent_of(g) >= e)
    }

    /// Bidegree as the exponent-weighted sum of generator bidegrees.
    pub fn bidegree(&self, degrees: &[Bidegree]) -> Bidegree {
        self.exps
            .iter()
            .fold(Bidegree::ZERO, |acc, &(g, e)| acc + degrees[g] * e)
    }
}

/// A finite integer combination of monomials; the zero element is the
/// empty map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Element {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(m: Monomial, coeff: BigInt) -> Self {
        let mut e = Element::zero();
        e.add_term(m, coeff);
        e
    }

    pub fn one() -> Self {
        Element::from_monomial(Monomial::one(), BigInt::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// Bidegree when homogeneous, `None` for zero or mixed elements.
    pub fn bidegree(&self, degrees: &[Bidegree]) -> Option<Bidegree> {
        let mut it = self.terms.keys();
        let first = it.next()?.bidegree(degrees);
        for m in it {
            if m.bidegree(degrees) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Split into homogeneous components keyed by bidegree.
    pub fn components(&self, degrees: &[Bidegree]) -> BTreeMap<Bidegree, Element> {
        let mut out: BTreeMap<Bidegree, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree(degrees))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }
}
