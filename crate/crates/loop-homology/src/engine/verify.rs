//! Verification of candidate presentations against a stable page, the
//! page-level graded-commutativity check, and the multiplicative
//! extension analysis.

use super::{EngineError, Page};
use crate::algebra::{Element, GeneratorKind, Monomial, Presentation};
use crate::bidegree::{Bidegree, Variance, Window};
use crate::linalg::{cokernel, AbelianGroup, IntMatrix};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug)]
pub enum Mismatch {
    RankMismatch {
        bd: Bidegree,
        candidate: AbelianGroup,
        page: AbelianGroup,
    },
    RelationFails {
        relation: String,
        bd: Bidegree,
        detail: String,
    },
    NotGenerated {
        bd: Bidegree,
    },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::RankMismatch {
                bd,
                candidate,
                page,
            } => write!(
                f,
                "rank mismatch at {bd}: candidate {candidate}, page {page}"
            ),
            Mismatch::RelationFails {
                relation,
                bd,
                detail,
            } => write!(f, "relation fails at {bd}: {relation} ({detail})"),
            Mismatch::NotGenerated { bd } => write!(f, "not generated at {bd}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub mismatches: Vec<Mismatch>,
}

/// Check a candidate presentation against a stable page over a window.
///
/// True when the groups agree in every window bidegree, every candidate
/// relation evaluates to zero on the assigned representatives under the
/// page multiplication (multiply the page-2 lifts, project through the
/// recorded subquotients), and the assigned generators generate every
/// window cell.
pub fn verify_presentation(
    page: &Page,
    candidate: &Presentation,
    assignment: &BTreeMap<String, Element>,
    window: Window,
) -> Result<VerifyReport, EngineError> {
    let pres = page.presentation().clone();
    let mut mismatches = Vec::new();

    for g in candidate.generators() {
        if matches!(g.kind, GeneratorKind::DividedPower | GeneratorKind::Laurent) {
            return Err(EngineError::Unsupported(format!(
                "candidate generator `{}` has kind {}, only exterior/polynomial \
                 candidates can be verified against a page",
                g.name, g.kind
            )));
        }
        let assigned = assignment.get(&g.name).ok_or_else(|| {
            EngineError::Unsupported(format!("no representative assigned to `{}`", g.name))
        })?;
        let bd = assigned
            .bidegree(pres.degrees())
            .ok_or_else(|| EngineError::AssignmentNotCycle {
                name: g.name.clone(),
                detail: "representative is not homogeneous".into(),
            })?;
        if bd != g.bidegree {
            return Err(EngineError::AssignmentNotCycle {
                name: g.name.clone(),
                detail: format!("representative sits at {bd}, generator at {}", g.bidegree),
            });
        }
        let cell = page.cell(bd).ok_or_else(|| EngineError::AssignmentNotCycle {
            name: g.name.clone(),
            detail: format!("page has no cell at {bd}"),
        })?;
        cell.coords_of_element(assigned)
            .map_err(|e| EngineError::AssignmentNotCycle {
                name: g.name.clone(),
                detail: e.to_string(),
            })?;
    }

    // Group equality per bidegree.
    let candidate_cells = candidate.cell_data(window)?;
    for bd in window.iter() {
        let cand = candidate_cells
            .get(&bd)
            .map_or_else(AbelianGroup::trivial, |c| c.group.clone());
        let here = page.group_at(bd);
        if cand != here {
            mismatches.push(Mismatch::RankMismatch {
                bd,
                candidate: cand,
                page: here,
            });
        }
    }

    // Relations evaluate to zero on representatives. An image that is
    // already zero in the page-2 algebra needs no cell to project into.
    for rel in candidate.relations() {
        let bd = rel.monomial.bidegree(candidate.degrees());
        let image = evaluate_monomial(&pres, candidate, assignment, &rel.monomial)?
            .scale(&rel.coeff);
        let rendered = format!(
            "{}*{}",
            rel.coeff,
            candidate.render_monomial(&rel.monomial)
        );
        if image.is_zero() {
            continue;
        }
        match page.element_is_zero(&image) {
            Ok(true) => {}
            Ok(false) => mismatches.push(Mismatch::RelationFails {
                relation: rendered,
                bd,
                detail: "nonzero on representatives".into(),
            }),
            Err(e) => mismatches.push(Mismatch::RelationFails {
                relation: rendered,
                bd,
                detail: e.to_string(),
            }),
        }
    }

    // Generation: candidate monomial images span every window cell.
    for (&bd, cell) in page.cells.iter() {
        if !window.contains(bd) || cell.group().is_trivial() {
            continue;
        }
        let monomials = candidate_cells
            .get(&bd)
            .map(|c| c.monomials.clone())
            .unwrap_or_default();
        let mut coord_cols = Vec::new();
        let mut failed = false;
        for m in &monomials {
            let image = evaluate_monomial(&pres, candidate, assignment, m)?;
            match cell.coords_of_element(&image) {
                Ok(c) => coord_cols.push(c),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed || !spans_group(cell.group(), &coord_cols) {
            mismatches.push(Mismatch::NotGenerated { bd });
        }
    }

    Ok(VerifyReport {
        ok: mismatches.is_empty(),
        mismatches,
    })
}

/// Map a candidate monomial through the generator assignment and multiply
/// in the page-2 algebra.
fn evaluate_monomial(
    pres: &Presentation,
    candidate: &Presentation,
    assignment: &BTreeMap<String, Element>,
    m: &Monomial,
) -> Result<Element, EngineError> {
    let mut out = Element::one();
    for &(g, e) in m.exponents() {
        let name = &candidate.generator(g).name;
        let rep = assignment
            .get(name)
            .ok_or_else(|| EngineError::Unsupported(format!("unassigned generator `{name}`")))?;
        debug_assert!(e >= 0);
        for _ in 0..e {
            out = pres.multiply(&out, rep);
        }
    }
    Ok(out)
}

/// Do the coordinate vectors generate the whole canonical group?
fn spans_group(group: &AbelianGroup, coords: &[Vec<BigInt>]) -> bool {
    let k = group.num_generators();
    if k == 0 {
        return true;
    }
    // Presentation of the group as Z^k / R with R the torsion diagonal,
    // free generators first.
    let f = group.free_rank();
    let t = group.torsion().len();
    let mut r = IntMatrix::zeros(k, t);
    for (j, d) in group.torsion().iter().enumerate() {
        r[(f + j, j)] = d.clone();
    }
    let c = IntMatrix::from_fn(k, coords.len(), |i, j| coords[j][i].clone());
    cokernel(&c.hstack(&r)).is_trivial()
}

/// Graded-commutativity of the stable page's own multiplication:
/// representatives are multiplied in the page-2 algebra and projected
/// back through the subquotients.
pub fn page_graded_commutative(
    page: &Page,
    window: Window,
) -> Result<(bool, Option<(String, String)>), EngineError> {
    let pres = page.presentation().clone();
    let cells: Vec<(Bidegree, usize)> = page
        .cells
        .iter()
        .filter(|(bd, c)| window.contains(**bd) && !c.group().is_trivial())
        .flat_map(|(bd, c)| (0..c.group().num_generators()).map(move |i| (*bd, i)))
        .collect();
    // Squares first: an odd-degree class with nonvanishing square is the
    // canonical obstruction and makes the cleaner witness.
    let mut pairs: Vec<((Bidegree, usize), (Bidegree, usize))> =
        cells.iter().map(|&c| (c, c)).collect();
    for &c1 in &cells {
        for &c2 in &cells {
            if c1 != c2 {
                pairs.push((c1, c2));
            }
        }
    }
    for ((bd1, i1), (bd2, i2)) in pairs {
        let tgt = bd1 + bd2;
        if !window.contains(tgt) {
            continue;
        }
        let a = page.cell(bd1).unwrap().generator_lift(i1);
        let b = page.cell(bd2).unwrap().generator_lift(i2);
        let sign = if (bd1.total() as i128 * bd2.total() as i128).rem_euclid(2) == 1 {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        };
        let diff = pres
            .multiply(&a, &b)
            .sub(&pres.multiply(&b, &a).scale(&sign));
        let zero = match page.cell(tgt) {
            Some(_) => page.element_is_zero(&diff)?,
            None => diff.is_zero(),
        };
        if !zero {
            return Ok((
                false,
                Some((pres.render_element(&a), pres.render_element(&b))),
            ));
        }
    }
    Ok((true, None))
}

/// How the multiplicative structure transfers from the stable page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionAnalysis {
    /// Every window cell is free: no additive or multiplicative ambiguity.
    Free,
    /// Torsion exists, but no assigned generator admits a lower-filtration
    /// correction in its total degree, so lifts are unique.
    UnambiguousLifts,
    /// These generators admit lower-filtration corrections; a choice
    /// argument is needed (or the result stays unverified).
    AmbiguousLifts(Vec<(String, Vec<Bidegree>)>),
}

/// Classify the extension problem for a verified candidate presentation.
pub fn multiplicative_extension_report(
    page: &Page,
    candidate: &Presentation,
    window: Window,
) -> Result<ExtensionAnalysis, EngineError> {
    let all_free = page
        .cells
        .iter()
        .filter(|(bd, _)| window.contains(**bd))
        .all(|(_, c)| c.group().is_free());
    if all_free {
        return Ok(ExtensionAnalysis::Free);
    }
    let mut ambiguous = Vec::new();
    for g in candidate.generators() {
        let bd = g.bidegree;
        let mut correction_cells = Vec::new();
        for (&cell_bd, cell) in page.cells.iter() {
            if cell.group().is_trivial() || cell_bd == bd {
                continue;
            }
            if cell_bd.total() != bd.total() {
                continue;
            }
            let lower = match page.variance() {
                Variance::Homological => cell_bd.p < bd.p,
                Variance::Cohomological => cell_bd.p > bd.p,
            };
            if lower {
                correction_cells.push(cell_bd);
            }
        }
        if !correction_cells.is_empty() {
            ambiguous.push((g.name.clone(), correction_cells));
        }
    }
    if ambiguous.is_empty() {
        Ok(ExtensionAnalysis::UnambiguousLifts)
    } else {
        Ok(ExtensionAnalysis::AmbiguousLifts(ambiguous))
    }
}
