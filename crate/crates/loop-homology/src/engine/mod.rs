//! Spectral-sequence mechanics: pages, Leibniz differentials, page turns,
//! stabilization, total-degree assembly, and presentation verification.
//!
//! Pages and differentials are immutable once produced and freely shared
//! (`Send + Sync`); a page turn is independent per bidegree cell, so cells
//! of one page may be evaluated concurrently, with the pages themselves
//! produced sequentially in `r`.

mod differential;
mod dump;
mod run;
mod verify;

pub use differential::{extend_differential, Differential};
pub use dump::{render_diagram, CellDump, DifferentialDump, PageDump, WindowDump};
pub use run::{
    advance_to, extension_split_check, placement_forces_zero, run, total_degree_group,
    total_degree_groups, turn_page, RunReport, Schedule, SplitReport,
};
pub use verify::{
    multiplicative_extension_report, page_graded_commutative, verify_presentation,
    ExtensionAnalysis, Mismatch, VerifyReport,
};

use crate::algebra::{AlgebraError, Element, Monomial, Presentation};
use crate::bidegree::{Bidegree, Variance, Window};
use crate::linalg::{AbelianGroup, IntMatrix, LinalgError, Subquotient};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("image not contained in kernel at {bd}: d o d = 0 fails on the page")]
    ImageNotContained { bd: Bidegree },
    #[error("wrong target bidegree for d_{r}({gen}): expected {expected}, got {got}")]
    WrongTargetBidegree {
        r: u32,
        gen: String,
        expected: Bidegree,
        got: Bidegree,
    },
    #[error("d-squared nonzero: witness {witness}")]
    DSquaredNonzero { witness: String },
    #[error("permanent cycle `{gen}` was assigned a nonzero image")]
    PermanentCycleViolated { gen: String },
    #[error("image of `{gen}` is not homogeneous")]
    InhomogeneousImage { gen: String },
    #[error("uncertified cell {bd} in total degree {degree}")]
    UncertifiedCell { degree: i64, bd: Bidegree },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("page construction needs a free basis; relation `{0}` introduces torsion")]
    TorsionRelationOnPage(String),
    #[error("assigned representative for `{name}` is not a cycle: {detail}")]
    AssignmentNotCycle { name: String, detail: String },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One bigraded cell of a page.
///
/// The cell is stored as a subquotient of the page-2 lattice at its
/// bidegree: `cycles` and `boundaries` are column spans in the coordinates
/// of the fixed monomial basis, so every representative lift composes all
/// the way down to a page-2 element for free.
#[derive(Clone)]
pub struct PageCell {
    basis: Arc<Vec<Monomial>>,
    cycles: IntMatrix,
    boundaries: IntMatrix,
    sub: Subquotient,
    group: AbelianGroup,
    certified: bool,
}

impl PageCell {
    fn fresh(basis: Arc<Vec<Monomial>>) -> Self {
        let n = basis.len();
        let sub = Subquotient::full(n);
        let group = sub.group().clone();
        PageCell {
            basis,
            cycles: IntMatrix::identity(n),
            boundaries: IntMatrix::zeros(n, 0),
            sub,
            group,
            certified: true,
        }
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn cycles(&self) -> &IntMatrix {
        &self.cycles
    }

    pub fn boundaries(&self) -> &IntMatrix {
        &self.boundaries
    }

    /// Lift of the `idx`-th canonical generator as a page-2 element.
    pub fn generator_lift(&self, idx: usize) -> Element {
        let v = self.sub.lift(idx);
        self.vector_to_element(&v)
    }

    pub fn vector_to_element(&self, v: &[BigInt]) -> Element {
        let mut e = Element::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.add_term(self.basis[i].clone(), c.clone());
            }
        }
        e
    }

    /// Coordinate vector of a homogeneous element in this cell's canonical
    /// generators; errors when the element is not a cycle of this page.
    pub fn coords_of_element(&self, e: &Element) -> Result<Vec<BigInt>, EngineError> {
        let v = self.element_to_vector(e)?;
        Ok(self.sub.coords_of(&v)?)
    }

    pub fn element_to_vector(&self, e: &Element) -> Result<Vec<BigInt>, EngineError> {
        let mut v = vec![BigInt::zero(); self.basis.len()];
        for (m, c) in e.terms() {
            match self.basis.iter().position(|b| b == m) {
                Some(i) => v[i] = c.clone(),
                None => {
                    return Err(EngineError::Unsupported(
                        "monomial outside the cell basis".to_string(),
                    ))
                }
            }
        }
        Ok(v)
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.sub
    }
}

impl std::fmt::Debug for PageCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PageCell({} of rank {})", self.group, self.basis.len())
    }
}

/// A page of the spectral sequence over a finite window.
#[derive(Clone)]
pub struct Page {
    r: u32,
    variance: Variance,
    window: Window,
    presentation: Arc<Presentation>,
    cells: BTreeMap<Bidegree, PageCell>,
    permanent_cycles: BTreeSet<usize>,
    p_support: (Option<i64>, Option<i64>),
}

impl std::fmt::Debug for Page {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Page(r = {}, {}, {} cells, {})",
            self.r,
            self.variance,
            self.cells.len(),
            self.window
        )
    }
}

impl Page {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Bidegree, &PageCell)> {
        self.cells.iter()
    }

    pub fn cell(&self, bd: Bidegree) -> Option<&PageCell> {
        self.cells.get(&bd)
    }

    /// Group at a bidegree; trivial off the stored cells.
    pub fn group_at(&self, bd: Bidegree) -> AbelianGroup {
        self.cells
            .get(&bd)
            .map_or_else(AbelianGroup::trivial, |c| c.group.clone())
    }

    pub fn permanent_cycles(&self) -> &BTreeSet<usize> {
        &self.permanent_cycles
    }

    /// Is the cell at `bd` provably zero without looking at the window?
    /// True outside the quadrant, beyond the column support of the
    /// presentation, or where the monomial basis is empty.
    pub fn supports_zero(&self, bd: Bidegree) -> bool {
        if self.variance.outside_quadrant(bd) {
            return true;
        }
        let (min_p, max_p) = self.p_support;
        if let Some(m) = min_p {
            if bd.p < m {
                return true;
            }
        }
        if let Some(m) = max_p {
            if bd.p > m {
                return true;
            }
        }
        match self.presentation.basis_at(bd) {
            Ok(b) => b.is_empty(),
            Err(_) => false,
        }
    }

    /// Bound beyond which every differential leaves the support, so all
    /// later pages are forced to collapse by placement.
    pub fn placement_bound(&self) -> Result<u32, EngineError> {
        let (min_p, max_p) = self.p_support;
        let bound = match self.variance {
            Variance::Homological => {
                let support_min =
                    min_p.ok_or_else(|| EngineError::WindowTooSmall(
                        "column support unbounded below; stabilization cannot be certified".into(),
                    ))?;
                // Out-arrows leave columns below support; in-arrows leave the quadrant.
                (self.window.p_max - support_min).max(-self.window.p_min)
            }
            Variance::Cohomological => {
                let support_max =
                    max_p.ok_or_else(|| EngineError::WindowTooSmall(
                        "column support unbounded above; stabilization cannot be certified".into(),
                    ))?;
                (support_max - self.window.p_min).max(self.window.p_max)
            }
        };
        Ok(bound.max(2) as u32 + 1)
    }

    /// Is the element zero in this page, homogeneous component by
    /// component?
    pub fn element_is_zero(&self, e: &Element) -> Result<bool, EngineError> {
        if e.is_zero() {
            return Ok(true);
        }
        for (bd, component) in e.components(self.presentation.degrees()) {
            match self.cells.get(&bd) {
                Some(cell) => {
                    let coords = cell.coords_of_element(&component)?;
                    if coords.iter().any(|c| !c.is_zero()) {
                        return Ok(false);
                    }
                }
                None => {
                    // No cell means the page-2 basis there is empty, which a
                    // nonzero normal-form component contradicts.
                    return Err(EngineError::Unsupported(
                        "element component outside the window".into(),
                    ));
                }
            }
        }
        Ok(true)
    }

    /// Free ranks summed with alternating signs of the total degree; page
    /// turns preserve this window invariant.
    pub fn alternating_rank_sum(&self) -> i64 {
        self.cells
            .iter()
            .map(|(bd, c)| {
                let sign = if bd.total().rem_euclid(2) == 0 { 1 } else { -1 };
                sign * c.group.free_rank() as i64
            })
            .sum()
    }
}

/// Build the page-2 term of a presentation over a window.
///
/// Cells are the free groups on the enumerated monomial bases; the
/// presentation must be free as a module (unit relations prune monomials,
/// torsion relations are rejected).
pub fn build_page(
    presentation: Presentation,
    window: Window,
    variance: Variance,
    permanent_cycles: &[&str],
) -> Result<Page, EngineError> {
    build_page_arc(Arc::new(presentation), window, variance, permanent_cycles)
}

pub(crate) fn build_page_arc(
    presentation: Arc<Presentation>,
    window: Window,
    variance: Variance,
    permanent_cycles: &[&str],
) -> Result<Page, EngineError> {
    use num_traits::One;
    for rel in presentation.relations() {
        if !rel.coeff.is_one() {
            return Err(EngineError::TorsionRelationOnPage(
                presentation.render_monomial(&rel.monomial),
            ));
        }
    }
    let mut permanent = BTreeSet::new();
    for name in permanent_cycles {
        permanent.insert(presentation.gen_index(name)?);
    }
    let basis = presentation.monomial_basis(window)?;
    let mut cells = BTreeMap::new();
    for (bd, monomials) in basis {
        if monomials.is_empty() {
            continue;
        }
        cells.insert(bd, PageCell::fresh(Arc::new(monomials)));
    }
    let p_support = presentation.p_support();
    Ok(Page {
        r: 2,
        variance,
        window,
        presentation,
        cells,
        permanent_cycles: permanent,
        p_support,
    })
}

