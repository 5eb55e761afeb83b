//! Machine-readable page dumps and deterministic text diagrams.

use super::{Differential, EngineError, Page};
use crate::bidegree::Bidegree;
use serde::{Deserialize, Serialize};

/// Stable-field-order dump of a page; integers are rendered as strings so
/// arbitrary-precision entries survive JSON.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PageDump {
    pub page_index: u32,
    pub variance: String,
    pub window: WindowDump,
    pub cells: Vec<CellDump>,
    pub differentials: Vec<DifferentialDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WindowDump {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellDump {
    pub p: i64,
    pub q: i64,
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DifferentialDump {
    pub source: (i64, i64),
    pub entries: Vec<Vec<String>>,
}

impl Page {
    /// Dump the page, with the differential matrices of `diff` when given.
    pub fn dump(&self, diff: Option<&Differential>) -> Result<PageDump, EngineError> {
        let pres = self.presentation().clone();
        let mut cells = Vec::new();
        for (bd, cell) in self.cells() {
            if cell.group().is_trivial() {
                continue;
            }
            let basis: Vec<String> = (0..cell.group().num_generators())
                .map(|i| pres.render_element(&cell.generator_lift(i)))
                .collect();
            cells.push(CellDump {
                p: bd.p,
                q: bd.q,
                free_rank: cell.group().free_rank(),
                torsion: cell.group().torsion().iter().map(|t| t.to_string()).collect(),
                basis,
            });
        }
        let mut differentials = Vec::new();
        if let Some(d) = diff {
            for (bd, m) in page_matrices(self, d)? {
                if m.rows() == 0 || m.cols() == 0 {
                    continue;
                }
                let entries: Vec<Vec<String>> = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
                    .collect();
                differentials.push(DifferentialDump {
                    source: (bd.p, bd.q),
                    entries,
                });
            }
        }
        Ok(PageDump {
            page_index: self.r(),
            variance: self.variance().to_string(),
            window: WindowDump {
                p_min: self.window().p_min,
                p_max: self.window().p_max,
                q_min: self.window().q_min,
                q_max: self.window().q_max,
            },
            cells,
            differentials,
        })
    }
}

/// Differential matrices between the canonical generators of the current
/// page's cells (page-2 cells give the plain monomial-basis matrices).
pub fn page_matrices(
    page: &Page,
    diff: &Differential,
) -> Result<Vec<(Bidegree, crate::linalg::IntMatrix)>, EngineError> {
    use num_traits::Zero;
    let pres = page.presentation().clone();
    let mut out = Vec::new();
    if diff.is_zero() {
        return Ok(out);
    }
    for (&bd, cell) in page.cells.iter() {
        if cell.group().is_trivial() {
            continue;
        }
        let tgt = page.variance().shift(bd, diff.r());
        let Some(target_cell) = page.cell(tgt) else {
            continue;
        };
        if target_cell.group().is_trivial() {
            continue;
        }
        let rows = target_cell.group().num_generators();
        let cols = cell.group().num_generators();
        let mut m = crate::linalg::IntMatrix::zeros(rows, cols);
        for j in 0..cols {
            let image = diff.apply(&pres, &cell.generator_lift(j));
            if image.is_zero() {
                continue;
            }
            let coords = target_cell.coords_of_element(&image)?;
            for (i, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    m[(i, j)] = c.clone();
                }
            }
        }
        out.push((bd, m));
    }
    Ok(out)
}

/// Deterministic text diagram: q increases upward, p rightward, cell
/// labels are the basis monomials; arrows are listed beneath the grid as
/// annotated source/target coordinate pairs.
pub fn render_diagram(page: &Page, diff: Option<&Differential>) -> Result<String, EngineError> {
    let pres = page.presentation().clone();
    let w = page.window();
    let label = |bd: Bidegree| -> String {
        match page.cell(bd) {
            None => String::new(),
            Some(cell) if cell.group().is_trivial() => String::new(),
            Some(cell) => {
                let mut parts = Vec::new();
                let free = cell.group().free_rank();
                for i in 0..cell.group().num_generators() {
                    let lift = pres.render_element(&cell.generator_lift(i));
                    if i < free {
                        parts.push(lift);
                    } else {
                        let t = &cell.group().torsion()[i - free];
                        parts.push(format!("{lift}(Z/{t})"));
                    }
                }
                parts.join(", ")
            }
        }
    };

    let mut width = 1;
    for bd in w.iter() {
        width = width.max(label(bd).len());
    }
    let q_label_width = w
        .iter()
        .map(|bd| bd.q.to_string().len())
        .max()
        .unwrap_or(1);

    let mut out = String::new();
    out.push_str(&format!(
        "page r = {} ({}), window {}\n\n",
        page.r(),
        page.variance(),
        w
    ));
    for q in (w.q_min..=w.q_max).rev() {
        let mut row = format!("q={:<width$} |", q, width = q_label_width);
        for p in w.p_min..=w.p_max {
            let l = label(Bidegree::new(p, q));
            row.push_str(&format!(" {l:<width$}"));
        }
        out.push_str(row.trim_end());
        out.push('\n');
    }
    let dash_len = (width + 1) * (w.p_max - w.p_min + 1) as usize;
    out.push_str(&format!(
        "{}-+{}\n",
        " ".repeat(q_label_width + 1),
        "-".repeat(dash_len)
    ));
    let mut footer = format!("{} |", " ".repeat(q_label_width + 1));
    for p in w.p_min..=w.p_max {
        footer.push_str(&format!(" {:<width$}", format!("p={p}")));
    }
    out.push_str(footer.trim_end());
    out.push('\n');

    if let Some(d) = diff {
        out.push('\n');
        out.push_str(&format!("differentials d_{}:\n", d.r()));
        let mats = page_matrices(page, d)?;
        if mats.is_empty() {
            out.push_str("  (none)\n");
        }
        for (bd, m) in mats {
            let tgt = page.variance().shift(bd, d.r());
            let rows: Vec<String> = (0..m.rows())
                .map(|i| {
                    let cols: Vec<String> =
                        (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
                    format!("[{}]", cols.join(", "))
                })
                .collect();
            out.push_str(&format!(
                "  ({}, {}) -> ({}, {})  [{}]\n",
                bd.p,
                bd.q,
                tgt.p,
                tgt.q,
                rows.join(", ")
            ));
        }
    }
    Ok(out)
}
