//! Page turning, schedules, stabilization reports, and total-degree
//! assembly.

use super::differential::{extend_differential, Differential};
use super::{EngineError, Page, PageCell};
use crate::algebra::{CoefficientMode, Element};
use crate::bidegree::{Bidegree, Variance};
use crate::linalg::{kernel_basis, AbelianGroup, IntMatrix, LinalgError, Subquotient};
use std::collections::BTreeMap;

/// Differential schedule: generator images per page index. Pages without
/// an entry carry the zero differential; that is a claim about the
/// sequence, recorded in the run report when placement alone does not
/// force it.
#[derive(Clone, Debug, Default)]
pub struct Schedule {
    entries: BTreeMap<u32, Vec<(String, Element)>>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    pub fn insert(&mut self, r: u32, images: Vec<(String, Element)>) {
        self.entries.insert(r, images);
    }

    pub fn entry(&self, r: u32) -> Option<&[(String, Element)]> {
        self.entries.get(&r).map(Vec::as_slice)
    }

    pub fn max_page(&self) -> Option<u32> {
        self.entries.keys().max().copied()
    }

    pub fn pages(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }
}

/// Where a page turn found its endpoints.
enum Endpoint {
    InWindow(Bidegree),
    Zero,
    Unknown,
}

fn classify(page: &Page, bd: Bidegree) -> Endpoint {
    if page.window().contains(bd) {
        Endpoint::InWindow(bd)
    } else if page.supports_zero(bd) {
        Endpoint::Zero
    } else {
        Endpoint::Unknown
    }
}

/// One page turn: kernel modulo image at every cell, computed by exact
/// subquotients in the page-2 coordinates.
pub fn turn_page(page: &Page, diff: &Differential) -> Result<Page, EngineError> {
    let mut next = page.clone();
    next.r = page.r + 1;
    if diff.is_zero() {
        return Ok(next);
    }
    let pres = page.presentation().clone();
    let r = page.r;

    // Differential matrices between in-window monomial bases, built once.
    let mut matrices: BTreeMap<Bidegree, IntMatrix> = BTreeMap::new();
    for (&bd, cell) in page.cells.iter() {
        if let Endpoint::InWindow(tgt) = classify(page, page.variance().shift(bd, r)) {
            let target_basis: Vec<_> = page
                .cell(tgt)
                .map(|c| c.basis().to_vec())
                .unwrap_or_default();
            let m = diff.matrix_between(&pres, cell.basis(), &target_basis)?;
            matrices.insert(bd, m);
        }
    }

    let mut new_cells: BTreeMap<Bidegree, PageCell> = BTreeMap::new();
    for (&bd, cell) in page.cells.iter() {
        let mut certified = cell.certified;

        // Cycles: restrict to classes whose image dies in the target.
        let mut cycles = cell.cycles.clone();
        match classify(page, page.variance().shift(bd, r)) {
            Endpoint::InWindow(tgt) => {
                let dmat = &matrices[&bd];
                if !dmat.is_zero() {
                    let img = dmat.mul(&cycles);
                    let target_boundaries = page
                        .cell(tgt)
                        .map(|c| c.boundaries.clone())
                        .unwrap_or_else(|| IntMatrix::zeros(0, 0));
                    cycles = cycles_killing_image(&cycles, &img, &target_boundaries);
                }
            }
            Endpoint::Zero => {}
            Endpoint::Unknown => {
                certified = false;
            }
        }

        // Boundaries: add the image of the in-window source cell.
        let mut boundaries = cell.boundaries.clone();
        let src = page.variance().unshift(bd, r);
        match classify(page, src) {
            Endpoint::InWindow(s) => {
                if let (Some(src_cell), Some(dmat)) = (page.cell(s), matrices.get(&s)) {
                    if !dmat.is_zero() {
                        let img = dmat.mul(&src_cell.cycles);
                        boundaries = boundaries.hstack(&img);
                    }
                }
            }
            Endpoint::Zero => {}
            Endpoint::Unknown => {
                certified = false;
            }
        }

        let sub = Subquotient::new(&cycles, &boundaries).map_err(|e| match e {
            LinalgError::ImageNotContained | LinalgError::NotInSpan => {
                EngineError::ImageNotContained { bd }
            }
            other => EngineError::Linalg(other),
        })?;
        let group = match pres.mode() {
            CoefficientMode::Integral => sub.group().clone(),
            CoefficientMode::Rational => {
                // Rank through the fraction-free path, independent of the
                // Smith normal form route.
                let rank = cycles.rational_rank() - boundaries.rational_rank();
                AbelianGroup::free(rank)
            }
        };
        new_cells.insert(
            bd,
            PageCell {
                basis: cell.basis.clone(),
                cycles,
                boundaries,
                sub,
                group,
                certified,
            },
        );
    }
    next.cells = new_cells;
    Ok(next)
}

/// Lattice of cycle classes `v` in `span(cycles)` with `D v` inside
/// `span(target_boundaries)`.
fn cycles_killing_image(
    cycles: &IntMatrix,
    image_of_cycles: &IntMatrix,
    target_boundaries: &IntMatrix,
) -> IntMatrix {
    let z = cycles.cols();
    let stacked = if target_boundaries.rows() == image_of_cycles.rows() {
        image_of_cycles.hstack(target_boundaries)
    } else {
        image_of_cycles.clone()
    };
    let ker = kernel_basis(&stacked);
    // Keep the coefficients that refer to the cycle columns.
    let a_part = IntMatrix::from_fn(z, ker.cols(), |i, j| ker[(i, j)].clone());
    cycles.mul(&a_part)
}

/// Outcome of running a schedule to its stable page.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub final_r: u32,
    /// Pages where an installed nonzero differential acted.
    pub active_pages: Vec<u32>,
    /// Pages turned with the zero differential even though placement on
    /// the current cells would have allowed a nonzero one; these rely on
    /// the schedule's claim.
    pub declared_zero_pages: Vec<u32>,
    /// Window cells whose in/out arrows left the window at some page.
    pub uncertified: Vec<Bidegree>,
}

impl RunReport {
    pub fn all_certified(&self) -> bool {
        self.uncertified.is_empty()
    }
}

/// Run the schedule from a page-2 term until every later differential
/// vanishes by placement, producing the stable page and a report.
pub fn run(page2: &Page, schedule: &Schedule) -> Result<(Page, RunReport), EngineError> {
    let placement = page2.placement_bound()?;
    let r_cap = placement.max(schedule.max_page().map_or(2, |m| m + 1));
    let mut page = page2.clone();
    let mut active = Vec::new();
    let mut declared = Vec::new();
    while page.r() <= r_cap {
        let r = page.r();
        let diff = match schedule.entry(r) {
            Some(images) => {
                let images: Vec<(&str, Element)> = images
                    .iter()
                    .map(|(n, e)| (n.as_str(), e.clone()))
                    .collect();
                extend_differential(&images, &page, &[])?
            }
            None => Differential::zero(r),
        };
        if diff.is_zero() {
            if !placement_forces_zero(&page, r) {
                declared.push(r);
            }
        } else {
            active.push(r);
        }
        page = turn_page(&page, &diff)?;
    }
    let uncertified: Vec<Bidegree> = page
        .cells()
        .filter(|(_, c)| !c.is_certified())
        .map(|(bd, _)| *bd)
        .collect();
    let report = RunReport {
        final_r: page.r(),
        active_pages: active,
        declared_zero_pages: declared,
        uncertified,
    };
    Ok((page, report))
}

/// Advance a page by turning with zero differentials until it reaches
/// index `r`; the caller asserts the skipped pages carry no differential.
pub fn advance_to(page: &Page, r: u32) -> Result<Page, EngineError> {
    let mut page = page.clone();
    while page.r() < r {
        let rr = page.r();
        page = turn_page(&page, &Differential::zero(rr))?;
    }
    Ok(page)
}

/// Does every page-`r` arrow touching the window have a trivial endpoint
/// on the current page?
pub fn placement_forces_zero(page: &Page, r: u32) -> bool {
    for (&bd, cell) in page.cells.iter() {
        if cell.group().is_trivial() {
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
        // An arrow from outside the window could still land here.
        let src = page.variance().unshift(bd, r);
        if !page.window().contains(src) && !page.supports_zero(src) {
            return false;
        }
    }
    true
}

/// Direct sums along the anti-diagonals `p + q = i`.
///
/// Every cell on a requested anti-diagonal must be certified (or provably
/// zero by support); otherwise the offending cell is reported.
pub fn total_degree_groups(
    page: &Page,
    degrees: impl IntoIterator<Item = i64>,
) -> Result<BTreeMap<i64, AbelianGroup>, EngineError> {
    let mut out = BTreeMap::new();
    for i in degrees {
        out.insert(i, total_degree_group(page, i)?);
    }
    Ok(out)
}

pub fn total_degree_group(page: &Page, i: i64) -> Result<AbelianGroup, EngineError> {
    let mut sum = AbelianGroup::trivial();
    for bd in anti_diagonal_cells(page, i)? {
        match page.cell(bd) {
            Some(cell) => {
                if !cell.is_certified() {
                    return Err(EngineError::UncertifiedCell { degree: i, bd });
                }
                sum = sum.direct_sum(cell.group());
            }
            None => {
                if page.window().contains(bd) || page.supports_zero(bd) {
                    continue;
                }
                return Err(EngineError::UncertifiedCell { degree: i, bd });
            }
        }
    }
    Ok(sum)
}

/// The finitely many possibly-nonzero bidegrees with `p + q = i`.
fn anti_diagonal_cells(page: &Page, i: i64) -> Result<Vec<Bidegree>, EngineError> {
    let (min_p, max_p) = page.p_support;
    let (lo, hi) = match page.variance() {
        Variance::Homological => {
            let lo = min_p.ok_or_else(|| {
                EngineError::WindowTooSmall("column support unbounded below".into())
            })?;
            (lo, 0.min(i))
        }
        Variance::Cohomological => {
            let hi = max_p.ok_or_else(|| {
                EngineError::WindowTooSmall("column support unbounded above".into())
            })?;
            (0, hi.min(i))
        }
    };
    Ok((lo..=hi).map(|p| Bidegree::new(p, i - p)).collect())
}

/// Report of the additive splitting check along one anti-diagonal.
#[derive(Clone, Debug)]
pub struct SplitReport {
    pub degree: i64,
    /// Nonzero cells ordered by increasing filtration (increasing `p`).
    pub cells: Vec<(Bidegree, AbelianGroup)>,
    pub ok: bool,
}

/// Does the filtration along `p + q = i` assemble to the direct sum?
///
/// Iterating from the lowest filtration index, every successive quotient
/// except possibly the lowest must be free.
pub fn extension_split_check(page: &Page, i: i64) -> Result<SplitReport, EngineError> {
    let mut cells = Vec::new();
    for bd in anti_diagonal_cells(page, i)? {
        if let Some(cell) = page.cell(bd) {
            if !cell.is_certified() {
                return Err(EngineError::UncertifiedCell { degree: i, bd });
            }
            if !cell.group().is_trivial() {
                cells.push((bd, cell.group().clone()));
            }
        } else if !page.window().contains(bd) && !page.supports_zero(bd) {
            return Err(EngineError::UncertifiedCell { degree: i, bd });
        }
    }
    cells.sort_by_key(|(bd, _)| bd.p);
    let ok = cells.iter().skip(1).all(|(_, g)| g.is_free());
    Ok(SplitReport {
        degree: i,
        cells,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CoefficientMode, Generator, Presentation};
    use crate::bidegree::Window;
    use crate::engine::build_page;

    fn even_sphere_run(n: i64, sign: i64) -> (Page, RunReport) {
        let pres = Presentation::new(
            vec![
                Generator::exterior("x", -n, 0),
                Generator::polynomial("y", 0, n - 1),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        let img = pres.term(2 * sign, &[("x", 1), ("y", 2)]).unwrap();
        let page = build_page(
            pres,
            Window::new(-n, 0, 0, 12 * (n - 1)),
            Variance::Homological,
            &["x"],
        )
        .unwrap();
        let mut schedule = Schedule::new();
        schedule.insert(n as u32, vec![("y".to_string(), img)]);
        run(&page, &schedule).unwrap()
    }

    #[test]
    fn zero_differential_turn_is_identity_on_groups() {
        let pres = Presentation::new(
            vec![
                Generator::exterior("x", -3, 0),
                Generator::polynomial("y", 0, 2),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        let page = build_page(pres, Window::new(-3, 0, 0, 8), Variance::Homological, &[]).unwrap();
        let next = turn_page(&page, &Differential::zero(2)).unwrap();
        assert_eq!(next.r(), 3);
        for (bd, cell) in page.cells() {
            assert_eq!(next.group_at(*bd), cell.group().clone());
        }
    }

    #[test]
    fn even_sphere_turn_produces_z2_column() {
        let (einf, report) = even_sphere_run(2, 1);
        assert_eq!(report.active_pages, vec![2]);
        // Z/2 at (-n, 2m(n-1)) for m >= 1.
        assert_eq!(einf.group_at(Bidegree::new(-2, 2)), AbelianGroup::cyclic(2));
        assert_eq!(einf.group_at(Bidegree::new(-2, 4)), AbelianGroup::cyclic(2));
        // Odd fiber rows died in column 0.
        assert!(einf.group_at(Bidegree::new(0, 1)).is_trivial());
        assert_eq!(einf.group_at(Bidegree::new(0, 2)), AbelianGroup::free(1));
        // Sign-independence of the stable page.
        let (einf_minus, _) = even_sphere_run(2, -1);
        for (bd, cell) in einf.cells() {
            assert_eq!(einf_minus.group_at(*bd), cell.group().clone());
        }
    }

    #[test]
    fn euler_sum_is_preserved_by_turns() {
        let (page2, einf) = {
            let pres = Presentation::new(
                vec![
                    Generator::exterior("x", -4, 0),
                    Generator::polynomial("y", 0, 3),
                ],
                CoefficientMode::Integral,
            )
            .unwrap();
            let img = pres.term(2, &[("x", 1), ("y", 2)]).unwrap();
            let page = build_page(
                pres,
                Window::new(-4, 0, 0, 24),
                Variance::Homological,
                &["x"],
            )
            .unwrap();
            let mut schedule = Schedule::new();
            schedule.insert(4, vec![("y".to_string(), img)]);
            let (einf, _) = run(&page, &schedule).unwrap();
            (page, einf)
        };
        assert_eq!(page2.alternating_rank_sum(), einf.alternating_rank_sum());
    }

    #[test]
    fn total_degree_assembly_and_split() {
        let (einf, _) = even_sphere_run(2, 1);
        let groups = total_degree_groups(&einf, -2..=8).unwrap();
        assert_eq!(groups[&-2], AbelianGroup::free(1));
        assert_eq!(groups[&-1], AbelianGroup::free(1));
        assert_eq!(
            groups[&0],
            AbelianGroup::free(1).direct_sum(&AbelianGroup::cyclic(2))
        );
        let split = extension_split_check(&einf, 0).unwrap();
        assert!(split.ok);
        // Beyond the certified range the assembly refuses.
        assert!(matches!(
            total_degree_group(&einf, 40),
            Err(EngineError::UncertifiedCell { .. })
        ));
    }

    #[test]
    fn synthetic_torsion_above_torsion_fails_split() {
        // Build a fake stable page by quotienting twice: two torsion cells
        // on one diagonal with the higher-filtration one non-free.
        let mut pres = Presentation::new(
            vec![
                Generator::polynomial("a", -1, 2),
                Generator::polynomial("b", -2, 3),
                Generator::polynomial("c", -3, 3),
                Generator::polynomial("e", -4, 4),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        for name in ["a", "b", "c", "e"] {
            let sq = pres.term(1, &[(name, 2)]).unwrap();
            pres.add_relation(sq).unwrap();
        }
        // Install d_2(a) = 2 c (bidegree (-1,2) -> (-3,3)) and
        // d_2(b) = 2 e ((-2,3) -> (-4,4)); both targets share total 0.
        let img_a = pres.term(2, &[("c", 1)]).unwrap();
        let img_b = pres.term(2, &[("e", 1)]).unwrap();
        let page = build_page(
            pres,
            Window::new(-12, 0, 0, 12),
            Variance::Homological,
            &[],
        )
        .unwrap();
        let mut schedule = Schedule::new();
        schedule.insert(
            2,
            vec![("a".to_string(), img_a), ("b".to_string(), img_b)],
        );
        let (einf, _) = run(&page, &schedule).unwrap();
        // c and e become Z/2 at (-3, 3) and (-4, 4), sharing the
        // anti-diagonal i = 0 with torsion above the lowest filtration.
        let split = extension_split_check(&einf, 0).unwrap();
        assert!(!split.ok, "torsion above the lowest filtration must fail");
        assert!(split.cells.len() >= 2);
        assert!(split.cells.iter().any(|(bd, g)| *bd == Bidegree::new(-3, 3)
            && *g == AbelianGroup::cyclic(2)));
    }

    #[test]
    fn torsion_relations_cannot_build_a_page() {
        let mut pres = Presentation::new(
            vec![
                Generator::polynomial("x", -2, 0),
                Generator::polynomial("y", 0, 2),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        let rel = pres.term(2, &[("x", 1), ("y", 1)]).unwrap();
        pres.add_relation(rel).unwrap();
        let err = build_page(pres, Window::new(-4, 0, 0, 4), Variance::Homological, &[])
            .unwrap_err();
        assert!(matches!(
            err,
            crate::engine::EngineError::TorsionRelationOnPage(_)
        ));
    }

    #[test]
    fn trivial_presentation_is_a_single_cell() {
        let pres = Presentation::trivial(CoefficientMode::Integral);
        let page = build_page(pres, Window::new(-2, 2, 0, 4), Variance::Homological, &[]).unwrap();
        assert_eq!(page.cells().count(), 1);
        assert_eq!(
            page.group_at(crate::bidegree::Bidegree::ZERO),
            AbelianGroup::free(1)
        );
    }

    #[test]
    fn empty_window_page_is_total() {
        let pres = Presentation::new(
            vec![
                Generator::exterior("x", -3, 0),
                Generator::polynomial("y", 0, 2),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        let page = build_page(pres, Window::empty(), Variance::Homological, &[]).unwrap();
        assert_eq!(page.cells().count(), 0);
        let next = turn_page(&page, &Differential::zero(2)).unwrap();
        assert_eq!(next.r(), 3);
        let (einf, report) = run(&page, &Schedule::new()).unwrap();
        assert_eq!(einf.cells().count(), 0);
        assert!(report.all_certified());
    }

    #[test]
    fn rational_mode_strips_torsion() {
        let pres = Presentation::new(
            vec![
                Generator::exterior("x", -2, 0),
                Generator::polynomial("y", 0, 1),
            ],
            CoefficientMode::Rational,
        )
        .unwrap();
        let img = pres.term(2, &[("x", 1), ("y", 2)]).unwrap();
        let page = build_page(
            pres,
            Window::new(-2, 0, 0, 12),
            Variance::Homological,
            &["x"],
        )
        .unwrap();
        let mut schedule = Schedule::new();
        schedule.insert(2, vec![("y".to_string(), img)]);
        let (einf, _) = run(&page, &schedule).unwrap();
        for (_, cell) in einf.cells() {
            assert!(cell.group().is_free(), "rational mode must be torsion-free");
        }
        // Where the integral answer is Z/2 the rational rank is zero.
        assert!(einf.group_at(Bidegree::new(-2, 2)).is_trivial());
    }
}
