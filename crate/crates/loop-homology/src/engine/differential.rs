//! Differentials given on generators and extended to all monomials by the
//! Leibniz rule (with the divided-power law `d(g_i) = d(g_1) * g_{i-1}`).

use super::{EngineError, Page};
use crate::algebra::{Element, GeneratorKind, Monomial, Presentation};
use crate::linalg::IntMatrix;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};

/// A page differential: page index plus generator images; all monomial
/// images follow by the Leibniz rule with the presentation's signs.
#[derive(Clone, Debug)]
pub struct Differential {
    r: u32,
    /// Nonzero generator images only.
    images: BTreeMap<usize, Element>,
    permanent_cycles: BTreeSet<usize>,
}

impl Differential {
    pub fn zero(r: u32) -> Self {
        Differential {
            r,
            images: BTreeMap::new(),
            permanent_cycles: BTreeSet::new(),
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.images.iter().map(|(&g, e)| (g, e))
    }

    pub fn image_of(&self, gen: usize) -> Option<&Element> {
        self.images.get(&gen)
    }

    /// Generators constrained to image zero on every page.
    pub fn permanent_cycles(&self) -> &BTreeSet<usize> {
        &self.permanent_cycles
    }

    /// Leibniz extension to an arbitrary element.
    pub fn apply(&self, pres: &Presentation, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            out = out.add(&self.apply_monomial(pres, m).scale(c));
        }
        pres.normal_form(&out)
    }

    /// Derivation on one monomial: one summand per factor occurrence, with
    /// the Koszul sign of everything to the factor's left.
    fn apply_monomial(&self, pres: &Presentation, m: &Monomial) -> Element {
        let mut out = Element::zero();
        let factors = m.exponents();
        for (i, &(g, e)) in factors.iter().enumerate() {
            let Some(image) = self.images.get(&g) else {
                continue;
            };
            let prefix = Monomial::from_pairs(factors[..i].iter().copied());
            let suffix = Monomial::from_pairs(factors[i + 1..].iter().copied());
            let prefix_deg = prefix.bidegree(pres.degrees()).total();
            let g_deg = pres.generator(g).total_degree();
            match pres.generator(g).kind {
                GeneratorKind::DividedPower => {
                    // d(g_e) = d(g_1) * g_{e-1}
                    let sign = koszul_sign(prefix_deg);
                    let mut term = mul_monomial_elem(pres, &prefix, image);
                    term = pres.multiply(&term, &one_term(Monomial::from_pairs([(g, e - 1)])));
                    term = pres.multiply(&term, &one_term(suffix.clone()));
                    out = out.add(&term.scale(&sign));
                }
                GeneratorKind::Exterior | GeneratorKind::Polynomial => {
                    // Sum over the e copies of g; strictly commutative odd
                    // generators get their cancellations from these signs.
                    for k in 1..=e {
                        let sign = koszul_sign(prefix_deg + (k - 1) * g_deg);
                        let left = Monomial::from_pairs(
                            factors[..i].iter().copied().chain([(g, k - 1)]),
                        );
                        let right = Monomial::from_pairs(
                            [(g, e - k)].into_iter().chain(factors[i + 1..].iter().copied()),
                        );
                        let mut term = mul_monomial_elem(pres, &left, image);
                        term = pres.multiply(&term, &one_term(right));
                        out = out.add(&term.scale(&sign));
                    }
                }
                GeneratorKind::Laurent => {
                    // Power rule e * g^{e-1} d(g); Laurent generators here
                    // have even total degree, so no sign alternation.
                    debug_assert!(g_deg % 2 == 0, "odd Laurent generators unsupported");
                    let sign = koszul_sign(prefix_deg);
                    let left = Monomial::from_pairs(
                        factors[..i].iter().copied().chain([(g, e - 1)]),
                    );
                    let mut term = mul_monomial_elem(pres, &left, image);
                    term = pres.multiply(&term, &one_term(suffix.clone()));
                    out = out.add(&term.scale(&(sign * BigInt::from(e))));
                }
            }
        }
        pres.normal_form(&out)
    }

    /// Matrix of the differential from the monomial basis at `bd` to the
    /// monomial basis at the target bidegree.
    pub fn matrix_between(
        &self,
        pres: &Presentation,
        source_basis: &[Monomial],
        target_basis: &[Monomial],
    ) -> Result<IntMatrix, EngineError> {
        let mut m = IntMatrix::zeros(target_basis.len(), source_basis.len());
        for (j, mono) in source_basis.iter().enumerate() {
            let img = self.apply_monomial(pres, mono);
            for (term, coeff) in img.terms() {
                match target_basis.iter().position(|b| b == term) {
                    Some(i) => m[(i, j)] = coeff.clone(),
                    None => {
                        return Err(EngineError::Unsupported(format!(
                            "image term {} missing from the target basis",
                            pres.render_monomial(term)
                        )))
                    }
                }
            }
        }
        Ok(m)
    }
}

fn koszul_sign(total_degree: i64) -> BigInt {
    if total_degree.rem_euclid(2) == 1 {
        BigInt::from(-1)
    } else {
        BigInt::from(1)
    }
}

fn one_term(m: Monomial) -> Element {
    Element::from_monomial(m, BigInt::from(1))
}

fn mul_monomial_elem(pres: &Presentation, m: &Monomial, e: &Element) -> Element {
    pres.multiply(&one_term(m.clone()), e)
}

/// Validate generator images against a page and extend them to a
/// differential: bidegree targets must match the page index, permanent
/// cycles must map to zero, and `d o d` must vanish on every generator.
pub fn extend_differential(
    images: &[(&str, Element)],
    page: &Page,
    permanent_cycles: &[&str],
) -> Result<Differential, EngineError> {
    let pres = page.presentation();
    let r = page.r();
    let mut permanent: BTreeSet<usize> = page.permanent_cycles().clone();
    for name in permanent_cycles {
        permanent.insert(pres.gen_index(name)?);
    }
    let mut map = BTreeMap::new();
    for (name, image) in images {
        let g = pres.gen_index(name)?;
        let image = pres.normal_form(image);
        if image.is_zero() {
            continue;
        }
        if permanent.contains(&g) {
            return Err(EngineError::PermanentCycleViolated {
                gen: (*name).to_string(),
            });
        }
        let expected = page.variance().shift(pres.generator(g).bidegree, r);
        let got = image
            .bidegree(pres.degrees())
            .ok_or_else(|| EngineError::InhomogeneousImage {
                gen: (*name).to_string(),
            })?;
        if got != expected {
            return Err(EngineError::WrongTargetBidegree {
                r,
                gen: (*name).to_string(),
                expected,
                got,
            });
        }
        map.insert(g, image);
    }
    let d = Differential {
        r,
        images: map,
        permanent_cycles: permanent,
    };
    // d o d = 0 on generators forces it on all monomials, d being an odd
    // derivation. Divided-power families need the whole tower checked up
    // to the window, not just g_1.
    for (g, image) in &d.images {
        let dd = d.apply(pres, image);
        if !dd.is_zero() {
            return Err(EngineError::DSquaredNonzero {
                witness: pres.generator(*g).name.clone(),
            });
        }
        if pres.generator(*g).kind == GeneratorKind::DividedPower {
            let cap = (page.window().q_extent() / pres.generator(*g).bidegree.q.max(1)).max(1);
            for idx in 2..=cap {
                let gi = one_term(Monomial::from_pairs([(*g, idx)]));
                let dd = d.apply(pres, &d.apply(pres, &gi));
                if !dd.is_zero() {
                    return Err(EngineError::DSquaredNonzero {
                        witness: format!("{}^{}", pres.generator(*g).name, idx),
                    });
                }
            }
        }
    }
    Ok(d)
}
