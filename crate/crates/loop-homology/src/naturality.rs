//! Universal-example machinery: morphisms of pages induced by maps of
//! fibrations, solving unknown differentials by naturality and by
//! abutment constraints, the transgression/antipode closed form for even
//! spheres, and dualization between homology and cohomology differentials.

use crate::algebra::{Element, GeneratorKind, Monomial, Presentation};
use crate::bidegree::{Bidegree, Window};
use crate::engine::{
    extend_differential, turn_page, total_degree_group, Differential, EngineError, Page,
};
use crate::linalg::{AbelianGroup, IntMatrix};
use crate::models::{
    serre_e2, FibrationKind, FibrationTag, ModelError, SpaceTag,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NaturalityError {
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("no admissible assignment")]
    NoAdmissibleAssignment,
    #[error("morphism does not respect the algebra structure: {0}")]
    NotMultiplicative(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<crate::algebra::AlgebraError> for NaturalityError {
    fn from(e: crate::algebra::AlgebraError) -> Self {
        NaturalityError::Engine(EngineError::Algebra(e))
    }
}

/// A generator-level algebra map between two pages (induced by a map of
/// fibrations), realized as integer matrices per bidegree.
#[derive(Clone, Debug)]
pub struct PageMorphism {
    gen_images: BTreeMap<usize, Element>,
    matrices: BTreeMap<Bidegree, IntMatrix>,
}

impl PageMorphism {
    pub fn matrix_at(&self, bd: Bidegree) -> Option<&IntMatrix> {
        self.matrices.get(&bd)
    }

    /// Image of a source monomial: product of generator images in the
    /// target algebra, with divided-power families mapped index-wise.
    pub fn apply_monomial(
        &self,
        source: &Presentation,
        target: &Presentation,
        m: &Monomial,
    ) -> Element {
        let mut out = Element::one();
        for &(g, e) in m.exponents() {
            match source.generator(g).kind {
                GeneratorKind::DividedPower => {
                    let img = self.gen_images.get(&g).cloned().unwrap_or_default();
                    out = target.multiply(&out, &divided_power_image(target, &img, e));
                }
                _ => {
                    let img = self.gen_images.get(&g).cloned().unwrap_or_default();
                    debug_assert!(e >= 0, "negative exponents unsupported in morphisms");
                    for _ in 0..e {
                        out = target.multiply(&out, &img);
                    }
                }
            }
            if out.is_zero() {
                return out;
            }
        }
        out
    }

    pub fn apply(&self, source: &Presentation, target: &Presentation, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            out = out.add(&self.apply_monomial(source, target, m).scale(c));
        }
        target.normal_form(&out)
    }
}

/// `phi(g_e)` for a divided-power family whose `g_1` maps to `c * h_1`:
/// the family maps index-wise, `g_e -> c^e h_e`.
fn divided_power_image(target: &Presentation, img: &Element, e: i64) -> Element {
    if e == 0 {
        return Element::one();
    }
    if img.is_zero() {
        return Element::zero();
    }
    let (m, c) = img.terms().next().expect("nonzero");
    debug_assert_eq!(img.num_terms(), 1, "validated at construction");
    let exps = m.exponents();
    debug_assert_eq!(exps.len(), 1);
    let (h, he) = exps[0];
    debug_assert_eq!(he, 1);
    let scaled = Element::from_monomial(Monomial::from_pairs([(h, e)]), c.pow(e as u32));
    target.normal_form(&scaled)
}

/// Build the morphism induced by generator images: bidegree-preserving,
/// relations respected, multiplicative on all window monomials (checked).
pub fn induced_map(
    gen_images: &[(&str, Element)],
    source: &Page,
    target: &Page,
) -> Result<PageMorphism, NaturalityError> {
    let src = source.presentation().clone();
    let tgt = target.presentation().clone();
    let mut images = BTreeMap::new();
    for (name, img) in gen_images {
        let g = src.gen_index(name)?;
        let img = tgt.normal_form(img);
        if !img.is_zero() {
            let bd = img.bidegree(tgt.degrees()).ok_or_else(|| {
                NaturalityError::Invalid(format!("image of `{name}` is not homogeneous"))
            })?;
            if bd != src.generator(g).bidegree {
                return Err(NaturalityError::Invalid(format!(
                    "image of `{name}` sits at {bd}, generator at {}",
                    src.generator(g).bidegree
                )));
            }
            if src.generator(g).kind == GeneratorKind::DividedPower {
                let ok = img.num_terms() == 1
                    && img.terms().next().is_some_and(|(m, _)| {
                        m.exponents().len() == 1
                            && m.exponents()[0].1 == 1
                            && tgt.generator(m.exponents()[0].0).kind
                                == GeneratorKind::DividedPower
                    });
                if !ok {
                    return Err(NaturalityError::Invalid(format!(
                        "divided-power family `{name}` must map to a multiple of a \
                         divided-power generator"
                    )));
                }
            }
        }
        images.insert(g, img);
    }
    for (idx, g) in src.generators().iter().enumerate() {
        if !images.contains_key(&idx) {
            return Err(NaturalityError::Invalid(format!(
                "no image given for generator `{}`",
                g.name
            )));
        }
    }
    let morphism = PageMorphism {
        gen_images: images,
        matrices: BTreeMap::new(),
    };

    // Relations must map to zero.
    for rel in src.relations() {
        let img = morphism
            .apply_monomial(&src, &tgt, &rel.monomial)
            .scale(&rel.coeff);
        if !tgt.normal_form(&img).is_zero() {
            return Err(NaturalityError::NotMultiplicative(format!(
                "relation {} maps to a nonzero element",
                src.render_monomial(&rel.monomial)
            )));
        }
    }

    // Multiplicativity on window monomials.
    let basis = src.monomial_basis(source.window())?;
    let monomials: Vec<&Monomial> = basis.values().flatten().collect();
    for &a in &monomials {
        for &b in &monomials {
            let ea = Element::from_monomial(a.clone(), BigInt::from(1));
            let eb = Element::from_monomial(b.clone(), BigInt::from(1));
            let lhs = morphism.apply(&src, &tgt, &src.multiply(&ea, &eb));
            let rhs = tgt.multiply(
                &morphism.apply(&src, &tgt, &ea),
                &morphism.apply(&src, &tgt, &eb),
            );
            if lhs != rhs {
                return Err(NaturalityError::NotMultiplicative(format!(
                    "phi({} * {}) != phi({}) * phi({})",
                    src.render_monomial(a),
                    src.render_monomial(b),
                    src.render_monomial(a),
                    src.render_monomial(b),
                )));
            }
        }
    }

    // Per-bidegree matrices over the shared window cells.
    let mut matrices = BTreeMap::new();
    for (bd, source_monomials) in &basis {
        let target_basis = tgt.basis_at(*bd)?;
        let mut m = IntMatrix::zeros(target_basis.len(), source_monomials.len());
        for (j, mono) in source_monomials.iter().enumerate() {
            let img = morphism.apply_monomial(&src, &tgt, mono);
            for (term, coeff) in img.terms() {
                let i = target_basis
                    .iter()
                    .position(|t| t == term)
                    .ok_or_else(|| {
                        NaturalityError::Invalid("image term outside target basis".into())
                    })?;
                m[(i, j)] = coeff.clone();
            }
        }
        matrices.insert(*bd, m);
    }
    Ok(PageMorphism {
        matrices,
        ..morphism
    })
}

/// Violations of `d_tgt o phi = phi o d_src` per window cell.
#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub violations: Vec<(Bidegree, String)>,
}

impl NaturalityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check naturality of a morphism against differentials on both sides,
/// comparing in the page-2 algebras on every window monomial.
pub fn check_naturality(
    morphism: &PageMorphism,
    d_src: &Differential,
    d_tgt: &Differential,
    source: &Page,
    target: &Page,
) -> Result<NaturalityReport, NaturalityError> {
    if d_src.r() != d_tgt.r() {
        return Err(NaturalityError::Invalid(format!(
            "page indices differ: {} vs {}",
            d_src.r(),
            d_tgt.r()
        )));
    }
    let src = source.presentation().clone();
    let tgt = target.presentation().clone();
    let mut violations = Vec::new();
    for (bd, monomials) in src.monomial_basis(source.window())? {
        for mono in monomials {
            let e = Element::from_monomial(mono.clone(), BigInt::from(1));
            let lhs = morphism.apply(&src, &tgt, &d_src.apply(&src, &e));
            let rhs = d_tgt.apply(&tgt, &morphism.apply(&src, &tgt, &e));
            if lhs != rhs {
                violations.push((
                    bd,
                    format!(
                        "{}: phi(d({0})) = {} but d(phi({0})) = {}",
                        src.render_monomial(&mono),
                        tgt.render_element(&lhs),
                        tgt.render_element(&rhs)
                    ),
                ));
            }
        }
    }
    Ok(NaturalityReport { violations })
}

/// Solve for the unknown image of `phi(g)` from a known `d_src(g)`:
/// naturality gives `d_tgt(phi(g)) = phi(d_src(g))`, which determines the
/// differential on the target generator when `phi(g)` is a unit multiple
/// of a single generator (up to exact division by the coefficient).
pub fn solve_by_naturality(
    morphism: &PageMorphism,
    d_src: &Differential,
    gen: &str,
    source: &Page,
    target: &Page,
) -> Result<Element, NaturalityError> {
    let src = source.presentation().clone();
    let tgt = target.presentation().clone();
    let g = src.gen_index(gen)?;
    let image = morphism.gen_images.get(&g).cloned().unwrap_or_default();
    if image.is_zero() {
        return Err(NaturalityError::Underdetermined(format!(
            "phi({gen}) = 0: the image differential is unconstrained on that cell"
        )));
    }
    let d_g = d_src
        .image_of(g)
        .cloned()
        .unwrap_or_else(Element::zero);
    let rhs = morphism.apply(&src, &tgt, &d_g);
    if image.num_terms() != 1 {
        return Err(NaturalityError::Underdetermined(format!(
            "phi({gen}) is not a single monomial; the solution is only a coset"
        )));
    }
    let (_, c) = image.terms().next().expect("nonzero");
    // d_tgt(h) = rhs / c, exact division required.
    let mut out = Element::zero();
    for (m, k) in rhs.terms() {
        let (q, r) = k.div_rem(c);
        if !r.is_zero() {
            return Err(NaturalityError::Underdetermined(format!(
                "phi(d({gen})) is not divisible by the coefficient of phi({gen})"
            )));
        }
        out.add_term(m.clone(), q);
    }
    Ok(tgt.normal_form(&out))
}

/// Convergence data constraining a bounded differential search: the known
/// total-degree groups of the abutment, plus the edge behavior coming
/// from cross-sections and deformation retracts — classes that must
/// survive with infinite order and classes that must die.
#[derive(Clone, Debug, Default)]
pub struct AbutmentConstraint {
    pub total_groups: Option<AbutmentGroups>,
    pub surviving_classes: Vec<Element>,
    pub vanishing_classes: Vec<Element>,
}

#[derive(Clone, Debug)]
pub struct AbutmentGroups {
    pub range: RangeInclusive<i64>,
    /// Degrees absent from the map are trivial.
    pub groups: BTreeMap<i64, AbelianGroup>,
}

/// One admissible assignment of generator images at the solved page.
pub type Assignment = BTreeMap<String, Element>;

/// Bounded exhaustive solve: enumerate integer images with coefficients
/// in `[-bound, bound]` for every non-permanent generator whose target
/// cell is nonzero, and keep the assignments whose stable page matches
/// the constraint.
///
/// Only the solved page may carry a nonzero differential; candidates for
/// which another page could act on the constrained degrees are rejected.
pub fn solve_by_abutment(
    page2: &Page,
    r: u32,
    constraint: &AbutmentConstraint,
    bound: i64,
) -> Result<Vec<Assignment>, NaturalityError> {
    let pres = page2.presentation().clone();
    let mut unknowns: Vec<(usize, Vec<Monomial>)> = Vec::new();
    for (idx, g) in pres.generators().iter().enumerate() {
        if page2.permanent_cycles().contains(&idx) {
            continue;
        }
        let tgt = page2.variance().shift(g.bidegree, r);
        if page2.supports_zero(tgt) {
            continue;
        }
        if !page2.window().contains(tgt) {
            return Err(NaturalityError::Invalid(format!(
                "target cell {tgt} of `{}` is outside the window",
                g.name
            )));
        }
        let basis = pres.basis_at(tgt)?;
        if !basis.is_empty() {
            unknowns.push((idx, basis));
        }
    }
    let dims: Vec<usize> = unknowns.iter().map(|(_, b)| b.len()).collect();
    let total: usize = dims.iter().sum();
    let width = (2 * bound + 1) as usize;
    let candidates = width.pow(total as u32);

    let cert_max = constraint_degree_max(constraint, &pres);

    // Advance to the solved page; the earlier pages must be forced zero
    // by placement (the single-nonzero-page pattern of this solver).
    let mut base = page2.clone();
    while base.r() < r {
        let rr = base.r();
        if !zero_page_forced(&base, rr, cert_max) {
            return Err(NaturalityError::Invalid(format!(
                "page {rr} below the solved page is not forced zero by placement"
            )));
        }
        base = turn_page(&base, &Differential::zero(rr))?;
    }

    let mut admissible = Vec::new();
    for counter in 0..candidates {
        let coeffs = decode_coeffs(counter, total, bound, width);
        let mut images: Vec<(&str, Element)> = Vec::new();
        let mut offset = 0;
        for ((idx, basis), len) in unknowns.iter().zip(&dims) {
            let mut e = Element::zero();
            for (k, m) in basis.iter().enumerate() {
                e.add_term(m.clone(), BigInt::from(coeffs[offset + k]));
            }
            offset += len;
            images.push((pres.generator(*idx).name.as_str(), e));
        }
        let Ok(diff) = extend_differential(&images, &base, &[]) else {
            continue;
        };
        let Some(einf) = run_single_page(&base, &diff, cert_max)? else {
            continue;
        };
        if !constraint_satisfied(&einf, constraint)? {
            continue;
        }
        let mut assignment = Assignment::new();
        for (idx, _) in &unknowns {
            let name = pres.generator(*idx).name.clone();
            let img = diff.image_of(*idx).cloned().unwrap_or_else(Element::zero);
            assignment.insert(name, img);
        }
        admissible.push(assignment);
    }
    if admissible.is_empty() {
        return Err(NaturalityError::NoAdmissibleAssignment);
    }
    // Canonical order, independent of the enumeration strategy.
    admissible.sort();
    Ok(admissible)
}

fn decode_coeffs(mut counter: usize, total: usize, bound: i64, width: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        out.push((counter % width) as i64 - bound);
        counter /= width;
    }
    out
}

fn constraint_degree_max(constraint: &AbutmentConstraint, pres: &Presentation) -> i64 {
    let mut m = constraint
        .total_groups
        .as_ref()
        .map_or(i64::MIN, |g| *g.range.end());
    for e in constraint
        .surviving_classes
        .iter()
        .chain(&constraint.vanishing_classes)
    {
        if let Some(bd) = e.bidegree(pres.degrees()) {
            m = m.max(bd.total());
        }
    }
    m
}

/// Turn the solved page with the candidate differential, then keep
/// turning with zero differentials, verifying each is forced by placement
/// on every cell whose total degree the constraint can see. Returns
/// `None` when the single-page pattern is violated.
fn run_single_page(
    base: &Page,
    diff: &Differential,
    cert_max: i64,
) -> Result<Option<Page>, NaturalityError> {
    let r_cap = base.placement_bound()?;
    let mut page = turn_page(base, diff)?;
    while page.r() <= r_cap {
        let rr = page.r();
        if !zero_page_forced(&page, rr, cert_max) {
            return Ok(None);
        }
        page = turn_page(&page, &Differential::zero(rr))?;
    }
    Ok(Some(page))
}

/// Placement check bounded to the degrees a constraint inspects.
fn zero_page_forced(page: &Page, r: u32, cert_max: i64) -> bool {
    for (&bd, cell) in page.cells() {
        if cell.group().is_trivial() || bd.total() > cert_max + 1 {
            continue;
        }
        let tgt = page.variance().shift(bd, r);
        let nontrivial_target = if page.window().contains(tgt) {
            page.cell(tgt).is_some_and(|c| !c.group().is_trivial())
        } else {
            !page.supports_zero(tgt)
        };
        if nontrivial_target {
            return false;
        }
        let src = page.variance().unshift(bd, r);
        if !page.window().contains(src) && !page.supports_zero(src) {
            return false;
        }
    }
    true
}

fn constraint_satisfied(
    einf: &Page,
    constraint: &AbutmentConstraint,
) -> Result<bool, NaturalityError> {
    if let Some(groups) = &constraint.total_groups {
        for i in groups.range.clone() {
            let expected = groups
                .groups
                .get(&i)
                .cloned()
                .unwrap_or_else(AbelianGroup::trivial);
            let got = total_degree_group(einf, i)?;
            if got != expected {
                return Ok(false);
            }
        }
    }
    let pres = einf.presentation().clone();
    for class in &constraint.surviving_classes {
        let Some(bd) = class.bidegree(pres.degrees()) else {
            return Err(NaturalityError::Invalid(
                "surviving class must be homogeneous".into(),
            ));
        };
        let Some(cell) = einf.cell(bd) else {
            return Ok(false);
        };
        match cell.coords_of_element(class) {
            Ok(coords) => {
                let free = cell.group().free_rank();
                // Infinite order: a nonzero free coordinate.
                if coords.iter().take(free).all(Zero::is_zero) {
                    return Ok(false);
                }
            }
            Err(_) => return Ok(false),
        }
    }
    for class in &constraint.vanishing_classes {
        let Some(bd) = class.bidegree(pres.degrees()) else {
            return Err(NaturalityError::Invalid(
                "vanishing class must be homogeneous".into(),
            ));
        };
        match einf.cell(bd) {
            None => continue,
            Some(cell) => match cell.coords_of_element(class) {
                Ok(coords) => {
                    if coords.iter().any(|c| !c.is_zero()) {
                        return Ok(false);
                    }
                }
                Err(_) => return Ok(false),
            },
        }
    }
    Ok(true)
}

/// Coefficient of `b^{j+1}` in the transgression formula on
/// `H_*(Omega S^{2k}) = Z[b]`, `|b| = 2k-1`, with the antipode acting by
/// `-1` on the primitive: `(-1)^{j|b|} b^j * b - b * b^j`, which is `-2`
/// for odd `j` and `0` for even `j`.
pub fn brown_shih_coefficient(k: u32, j: u32) -> Result<i64, NaturalityError> {
    assert!(k >= 1);
    let deg = 2 * k as i64 - 1;
    let mut pres = Presentation::new(
        vec![crate::algebra::Generator::polynomial("b", 0, deg)],
        crate::algebra::CoefficientMode::Integral,
    )?;
    // The Pontryagin ring is strictly commutative.
    pres.set_commutation_sign("b", "b", 1)?;
    let b = pres.term(1, &[("b", 1)])?;
    let b_j = pres.term(1, &[("b", j as i64)])?;
    let sign = if (j as i64 * deg).rem_euclid(2) == 1 {
        -1
    } else {
        1
    };
    let lhs = pres.multiply(&b_j, &b).scale(&BigInt::from(sign));
    let antipode_term = pres.multiply(&b, &b_j).scale(&BigInt::from(-1));
    let total = lhs.add(&antipode_term);
    let target = pres.monomial(&[("b", j as i64 + 1)])?;
    let coeff = total.coefficient_of(&target);
    i64::try_from(&coeff).map_err(|_| NaturalityError::Invalid("coefficient overflow".into()))
}

/// Transpose a differential matrix between free cells with fixed bases,
/// converting a cohomology-page differential into the homology-page
/// differential between the dual cells.
pub fn dualize_differential(m: &IntMatrix) -> IntMatrix {
    m.transpose()
}

/// The two pages of the universal example for an even sphere: the
/// path fibration over the product of two n-spheres upstairs, the
/// evaluation fibration downstairs.
pub struct UniversalExample {
    pub n: u32,
    pub upstairs: Page,
    pub downstairs: Page,
}

pub fn universal_example(n: u32) -> Result<UniversalExample, NaturalityError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(NaturalityError::Invalid(format!(
            "the universal example runs for even n >= 2, got {n}"
        )));
    }
    let q_max = 4 * n as i64;
    let upstairs = serre_e2(
        FibrationTag::new(FibrationKind::PathOverDiagonal, SpaceTag::SphereProduct(n)),
        Window::new(0, 2 * n as i64, 0, q_max),
    )?;
    let downstairs = serre_e2(
        FibrationTag::new(FibrationKind::Evaluation, SpaceTag::EvenSphere(n)),
        Window::new(0, n as i64, 0, q_max),
    )?;
    Ok(UniversalExample {
        n,
        upstairs,
        downstairs,
    })
}

/// The abutment data of the path fibration: the total space deformation
/// retracts to the sphere, so the stable page matches `H^*(S^n)`, the
/// two endpoint evaluations agree up to homotopy (`x(x)1 - 1(x)x` dies),
/// and the base class `x(x)1` survives with infinite order.
pub fn universal_constraint(n: u32) -> Result<AbutmentConstraint, NaturalityError> {
    let ex = universal_example(n)?;
    let pres = ex.upstairs.presentation().clone();
    let x1 = pres.term(1, &[("x⊗1", 1)])?;
    let x2 = pres.term(1, &[("1⊗x", 1)])?;
    let mut groups = BTreeMap::new();
    groups.insert(0, AbelianGroup::free(1));
    groups.insert(n as i64, AbelianGroup::free(1));
    Ok(AbutmentConstraint {
        total_groups: Some(AbutmentGroups {
            range: 0..=(3 * n as i64),
            groups,
        }),
        surviving_classes: vec![x1.clone()],
        vanishing_classes: vec![x1.sub(&x2)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CoefficientMode;
    use crate::models::{loop_homology_presentation, SpaceTag};

    #[test]
    fn brown_shih_alternation() {
        for k in 1..=3 {
            for j in 0..=8 {
                let c = brown_shih_coefficient(k, j).unwrap();
                let expected = if j % 2 == 1 { -2 } else { 0 };
                assert_eq!(c, expected, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn dualize_is_transpose_and_involution() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let d = dualize_differential(&m);
        assert_eq!(d.rows(), 3);
        assert_eq!(d[(1, 0)], BigInt::from(2));
        assert_eq!(dualize_differential(&d), m);
        let z = IntMatrix::zeros(2, 2);
        assert!(dualize_differential(&z).is_zero());
        let id = IntMatrix::identity(2);
        assert_eq!(dualize_differential(&id), id);
    }

    #[test]
    fn diagonal_restriction_map_is_multiplicative() {
        // x(x)1 and 1(x)x both map to x; the product x(x)x maps to x^2 = 0.
        let ex = universal_example(2).unwrap();
        let down_pres = ex.downstairs.presentation().clone();
        let phi = induced_map(
            &[
                ("x⊗1", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("1⊗x", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("gamma", down_pres.term(1, &[("gamma", 1)]).unwrap()),
                ("z", down_pres.term(1, &[("z", 1)]).unwrap()),
            ],
            &ex.upstairs,
            &ex.downstairs,
        )
        .unwrap();
        let up_pres = ex.upstairs.presentation().clone();
        let cross = up_pres
            .term(1, &[("x⊗1", 1), ("1⊗x", 1)])
            .unwrap();
        assert!(phi.apply(&up_pres, &down_pres, &cross).is_zero());
        // Identity-style matrices on the fiber column.
        let m = phi.matrix_at(Bidegree::new(0, 1)).unwrap();
        assert_eq!(m[(0, 0)], BigInt::from(1));
    }

    #[test]
    fn abutment_solver_pins_the_sign_pair() {
        let ex = universal_example(2).unwrap();
        let constraint = universal_constraint(2).unwrap();
        let solutions = solve_by_abutment(&ex.upstairs, 2, &constraint, 2).unwrap();
        assert_eq!(solutions.len(), 4, "{solutions:?}");
        let pres = ex.upstairs.presentation().clone();
        let diag_minus = pres.term(1, &[("x⊗1", 1)]).unwrap().sub(
            &pres.term(1, &[("1⊗x", 1)]).unwrap(),
        );
        let diag_plus_z = pres
            .term(1, &[("x⊗1", 1), ("z", 1)])
            .unwrap()
            .add(&pres.term(1, &[("1⊗x", 1), ("z", 1)]).unwrap());
        for sol in &solutions {
            let z_img = &sol["z"];
            assert!(
                *z_img == diag_minus || *z_img == diag_minus.neg(),
                "unexpected d(z) = {}",
                pres.render_element(z_img)
            );
            let g_img = &sol["gamma"];
            assert!(
                *g_img == diag_plus_z || *g_img == diag_plus_z.neg(),
                "unexpected d(gamma) = {}",
                pres.render_element(g_img)
            );
        }
    }

    #[test]
    fn abutment_solutions_closed_under_sign_flip_at_larger_bound() {
        // Nothing new enters the admissible set at bound 3, and the set is
        // closed under the global sign flip.
        let ex = universal_example(2).unwrap();
        let constraint = universal_constraint(2).unwrap();
        let solutions = solve_by_abutment(&ex.upstairs, 2, &constraint, 3).unwrap();
        assert_eq!(solutions.len(), 4);
        for sol in &solutions {
            let flipped: Assignment = sol
                .iter()
                .map(|(g, img)| (g.clone(), img.neg()))
                .collect();
            assert!(
                solutions.contains(&flipped),
                "global sign flip left the admissible set"
            );
        }
        let at_two = solve_by_abutment(&ex.upstairs, 2, &constraint, 2).unwrap();
        let as_set = |v: &Vec<Assignment>| -> std::collections::BTreeSet<Assignment> {
            v.iter().cloned().collect()
        };
        assert_eq!(
            as_set(&solutions),
            as_set(&at_two),
            "bound 3 admits nothing beyond bound 2"
        );
    }

    #[test]
    fn odd_sphere_cross_section_forces_collapse() {
        // Evaluation fibration over S^3: the only unknown is gamma_1 with
        // target the base class x; the surviving-class constraint keeps x
        // alive, so only the zero assignment is admissible.
        let page = serre_e2(
            FibrationTag::new(FibrationKind::Evaluation, SpaceTag::OddSphere(3)),
            Window::new(0, 3, 0, 10),
        )
        .unwrap();
        let pres = page.presentation().clone();
        let constraint = AbutmentConstraint {
            total_groups: None,
            surviving_classes: vec![pres.term(1, &[("x", 1)]).unwrap()],
            vanishing_classes: vec![],
        };
        let solutions = solve_by_abutment(&page, 3, &constraint, 2).unwrap();
        assert_eq!(solutions.len(), 1);
        assert!(solutions[0]["gamma"].is_zero());
    }

    #[test]
    fn trivial_constraint_admits_zero() {
        let page = serre_e2(
            FibrationTag::new(FibrationKind::Evaluation, SpaceTag::OddSphere(3)),
            Window::new(0, 3, 0, 10),
        )
        .unwrap();
        let constraint = AbutmentConstraint::default();
        let solutions = solve_by_abutment(&page, 3, &constraint, 1).unwrap();
        // The zero assignment is among the admissible set.
        assert!(solutions.iter().any(|s| s.values().all(Element::is_zero)));
    }

    #[test]
    fn naturality_solve_transports_the_differential() {
        let ex = universal_example(2).unwrap();
        let n = 2u32;
        let up_pres = ex.upstairs.presentation().clone();
        let down_pres = ex.downstairs.presentation().clone();
        let dz = up_pres.term(1, &[("x⊗1", 1)]).unwrap().sub(
            &up_pres.term(1, &[("1⊗x", 1)]).unwrap(),
        );
        let dgamma = up_pres
            .term(1, &[("x⊗1", 1), ("z", 1)])
            .unwrap()
            .add(&up_pres.term(1, &[("1⊗x", 1), ("z", 1)]).unwrap());
        let up_page = crate::engine::advance_to(&ex.upstairs, 2).unwrap();
        let d_up = extend_differential(&[("z", dz), ("gamma", dgamma)], &up_page, &[]).unwrap();
        let phi = induced_map(
            &[
                ("x⊗1", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("1⊗x", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("gamma", down_pres.term(1, &[("gamma", 1)]).unwrap()),
                ("z", down_pres.term(1, &[("z", 1)]).unwrap()),
            ],
            &ex.upstairs,
            &ex.downstairs,
        )
        .unwrap();
        // d(z) downstairs: phi(x(x)1 - 1(x)x) = 0.
        let dz_down =
            solve_by_naturality(&phi, &d_up, "z", &ex.upstairs, &ex.downstairs).unwrap();
        assert!(dz_down.is_zero());
        // d(gamma_1) downstairs: 2 x z.
        let dg_down =
            solve_by_naturality(&phi, &d_up, "gamma", &ex.upstairs, &ex.downstairs).unwrap();
        assert_eq!(
            dg_down,
            down_pres.term(2, &[("x", 1), ("z", 1)]).unwrap()
        );
        // The naturality square closes with these differentials.
        let down_page = crate::engine::advance_to(&ex.downstairs, 2).unwrap();
        let d_down = extend_differential(&[("gamma", dg_down)], &down_page, &[]).unwrap();
        let report =
            check_naturality(&phi, &d_up, &d_down, &ex.upstairs, &ex.downstairs).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        let _ = n;
    }

    #[test]
    fn perturbed_differential_violates_naturality() {
        let ex = universal_example(2).unwrap();
        let up_pres = ex.upstairs.presentation().clone();
        let down_pres = ex.downstairs.presentation().clone();
        let dz = up_pres
            .term(1, &[("x⊗1", 1)])
            .unwrap()
            .sub(&up_pres.term(1, &[("1⊗x", 1)]).unwrap());
        let up_page = crate::engine::advance_to(&ex.upstairs, 2).unwrap();
        let d_up = extend_differential(&[("z", dz)], &up_page, &[]).unwrap();
        let phi = induced_map(
            &[
                ("x⊗1", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("1⊗x", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("gamma", down_pres.term(1, &[("gamma", 1)]).unwrap()),
                ("z", down_pres.term(1, &[("z", 1)]).unwrap()),
            ],
            &ex.upstairs,
            &ex.downstairs,
        )
        .unwrap();
        // Downstairs d(z) should be 0; install d(z) = x instead.
        let down_page = crate::engine::advance_to(&ex.downstairs, 2).unwrap();
        let bad = extend_differential(
            &[("z", down_pres.term(1, &[("x", 1)]).unwrap())],
            &down_page,
            &[],
        )
        .unwrap();
        let report =
            check_naturality(&phi, &d_up, &bad, &ex.upstairs, &ex.downstairs).unwrap();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|(bd, _)| *bd == Bidegree::new(0, 1)));
    }

    #[test]
    fn zero_morphism_leaves_the_solve_underdetermined() {
        let ex = universal_example(2).unwrap();
        let up_pres = ex.upstairs.presentation().clone();
        let down_pres = ex.downstairs.presentation().clone();
        // Project fiber generators to zero, keep the base surjection.
        let phi = induced_map(
            &[
                ("x⊗1", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("1⊗x", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("gamma", Element::zero()),
                ("z", Element::zero()),
            ],
            &ex.upstairs,
            &ex.downstairs,
        )
        .unwrap();
        // Base row maps by identity-like matrices, fiber rows by zero:
        // the projection to the bottom row.
        let m = phi.matrix_at(Bidegree::new(2, 0)).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m.cols(), 2);
        assert_eq!(m[(0, 0)], BigInt::from(1));
        assert_eq!(m[(0, 1)], BigInt::from(1));
        let fiber = phi.matrix_at(Bidegree::new(0, 1)).unwrap();
        assert!(fiber.is_zero());
        let dz = up_pres
            .term(1, &[("x⊗1", 1)])
            .unwrap()
            .sub(&up_pres.term(1, &[("1⊗x", 1)]).unwrap());
        let up_page = crate::engine::advance_to(&ex.upstairs, 2).unwrap();
        let d_up = extend_differential(&[("z", dz)], &up_page, &[]).unwrap();
        let err = solve_by_naturality(&phi, &d_up, "z", &ex.upstairs, &ex.downstairs)
            .unwrap_err();
        assert!(matches!(err, NaturalityError::Underdetermined(_)));
    }

    #[test]
    fn naturality_square_closes_on_a_tall_window() {
        // The solved differentials commute with the fibration morphism on
        // every cell up to total degree 30.
        let n = 2u32;
        let q_max = 30i64;
        let upstairs = serre_e2(
            FibrationTag::new(FibrationKind::PathOverDiagonal, SpaceTag::SphereProduct(n)),
            Window::new(0, 2 * n as i64, 0, q_max),
        )
        .unwrap();
        let downstairs = serre_e2(
            FibrationTag::new(FibrationKind::Evaluation, SpaceTag::EvenSphere(n)),
            Window::new(0, n as i64, 0, q_max),
        )
        .unwrap();
        let up_pres = upstairs.presentation().clone();
        let down_pres = downstairs.presentation().clone();
        let dz = up_pres
            .term(1, &[("x⊗1", 1)])
            .unwrap()
            .sub(&up_pres.term(1, &[("1⊗x", 1)]).unwrap());
        let dgamma = up_pres
            .term(1, &[("x⊗1", 1), ("z", 1)])
            .unwrap()
            .add(&up_pres.term(1, &[("1⊗x", 1), ("z", 1)]).unwrap());
        let up_n = crate::engine::advance_to(&upstairs, n).unwrap();
        let d_up = extend_differential(&[("z", dz), ("gamma", dgamma)], &up_n, &[]).unwrap();
        let down_n = crate::engine::advance_to(&downstairs, n).unwrap();
        let d_down = extend_differential(
            &[("gamma", down_pres.term(2, &[("x", 1), ("z", 1)]).unwrap())],
            &down_n,
            &[],
        )
        .unwrap();
        let phi = induced_map(
            &[
                ("x⊗1", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("1⊗x", down_pres.term(1, &[("x", 1)]).unwrap()),
                ("gamma", down_pres.term(1, &[("gamma", 1)]).unwrap()),
                ("z", down_pres.term(1, &[("z", 1)]).unwrap()),
            ],
            &upstairs,
            &downstairs,
        )
        .unwrap();
        let report = check_naturality(&phi, &d_up, &d_down, &upstairs, &downstairs).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
    }

    #[test]
    fn dualization_matches_installed_loop_schedule() {
        // Downstairs Serre differential d^n(gamma_1) = 2 x z, extended by
        // the divided-power tower, fiber-transposes to the loop-homology
        // d_n(y^j) alternation.
        let n = 2u32;
        let ex = universal_example(n).unwrap();
        let down_pres = ex.downstairs.presentation().clone();
        let d_serre = extend_differential(
            &[(
                "gamma",
                down_pres.term(2, &[("x", 1), ("z", 1)]).unwrap(),
            )],
            &ex.downstairs,
            &[],
        )
        .unwrap();
        let (loop_pres, _) =
            loop_homology_presentation(SpaceTag::EvenSphere(n), CoefficientMode::Integral)
                .unwrap();
        let d_loop_img = loop_pres.term(2, &[("x", 1), ("y", 2)]).unwrap();
        let loop_page = crate::engine::build_page(
            loop_pres.clone(),
            Window::new(-(n as i64), 0, 0, 4 * n as i64),
            crate::bidegree::Variance::Homological,
            &["x"],
        )
        .unwrap();
        let d_loop = extend_differential(&[("y", d_loop_img)], &loop_page, &[]).unwrap();
        let nn = n as i64;
        for j in 1..=5i64 {
            let q = j * (nn - 1);
            // Loop side: (0, q) -> (-n, q + n - 1).
            let src = loop_pres.basis_at(Bidegree::new(0, q)).unwrap();
            let tgt = loop_pres
                .basis_at(Bidegree::new(-nn, q + nn - 1))
                .unwrap();
            let loop_matrix = d_loop.matrix_between(&loop_pres, &src, &tgt).unwrap();
            // Serre side: (0, q + n - 1) -> (n, q).
            let s_src = down_pres
                .basis_at(Bidegree::new(0, q + nn - 1))
                .unwrap();
            let s_tgt = down_pres.basis_at(Bidegree::new(nn, q)).unwrap();
            let serre_matrix = d_serre
                .matrix_between(&down_pres, &s_src, &s_tgt)
                .unwrap();
            assert_eq!(
                loop_matrix,
                dualize_differential(&serre_matrix),
                "fiber duality mismatch at j = {j}"
            );
        }
    }
}
