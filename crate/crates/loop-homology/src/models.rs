//! Standard (co)homology models of circles, spheres, complex projective
//! spaces, and sphere products, plus the preset pipelines that run their
//! loop-homology spectral sequences and the closed-form answer oracles.

use crate::algebra::{CoefficientMode, Element, Generator, Presentation};
use crate::bidegree::{Variance, Window};
use crate::engine::{
    build_page, run, total_degree_groups, EngineError, Page, RunReport, Schedule, VerifyReport,
};
use crate::linalg::AbelianGroup;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid space tag `{0}` (expected s1, s^n:odd:<n>, s^n:even:<n>, cp^n:<n>)")]
    InvalidSpace(String),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("the circle is answered in closed form, not by the page engine")]
    CircleHasNoPage,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<crate::algebra::AlgebraError> for ModelError {
    fn from(e: crate::algebra::AlgebraError) -> Self {
        ModelError::Engine(EngineError::Algebra(e))
    }
}

/// A space the presets know how to handle.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SpaceTag {
    Circle,
    OddSphere(u32),
    EvenSphere(u32),
    ComplexProjective(u32),
    /// The product of two n-spheres, the universal-example base.
    SphereProduct(u32),
}

impl SpaceTag {
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            SpaceTag::Circle => Ok(()),
            SpaceTag::OddSphere(n) if n > 1 && n % 2 == 1 => Ok(()),
            SpaceTag::OddSphere(n) => Err(ModelError::InvalidParameter(format!(
                "odd sphere needs odd n > 1, got {n}"
            ))),
            SpaceTag::EvenSphere(n) if n >= 2 && n % 2 == 0 => Ok(()),
            SpaceTag::EvenSphere(n) => Err(ModelError::InvalidParameter(format!(
                "even sphere needs even n >= 2, got {n}"
            ))),
            SpaceTag::ComplexProjective(n) if n >= 1 => Ok(()),
            SpaceTag::ComplexProjective(n) => Err(ModelError::InvalidParameter(format!(
                "complex projective space needs n >= 1, got {n}"
            ))),
            SpaceTag::SphereProduct(n) if n >= 2 => Ok(()),
            SpaceTag::SphereProduct(n) => Err(ModelError::InvalidParameter(format!(
                "sphere product needs n >= 2, got {n}"
            ))),
        }
    }

    /// CLI text syntax: `s1`, `s^n:odd:<n>`, `s^n:even:<n>`, `cp^n:<n>`.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let bad = || ModelError::InvalidSpace(text.to_string());
        let tag = if text == "s1" {
            SpaceTag::Circle
        } else if let Some(rest) = text.strip_prefix("s^n:odd:") {
            SpaceTag::OddSphere(rest.parse().map_err(|_| bad())?)
        } else if let Some(rest) = text.strip_prefix("s^n:even:") {
            SpaceTag::EvenSphere(rest.parse().map_err(|_| bad())?)
        } else if let Some(rest) = text.strip_prefix("cp^n:") {
            SpaceTag::ComplexProjective(rest.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        tag.validate()?;
        Ok(tag)
    }

    pub fn dimension(&self) -> i64 {
        match *self {
            SpaceTag::Circle => 1,
            SpaceTag::OddSphere(n) | SpaceTag::EvenSphere(n) => n as i64,
            SpaceTag::ComplexProjective(n) => 2 * n as i64,
            SpaceTag::SphereProduct(n) => 2 * n as i64,
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceTag::Circle => write!(f, "s1"),
            SpaceTag::OddSphere(n) => write!(f, "s^n:odd:{n}"),
            SpaceTag::EvenSphere(n) => write!(f, "s^n:even:{n}"),
            SpaceTag::ComplexProjective(n) => write!(f, "cp^n:{n}"),
            SpaceTag::SphereProduct(n) => write!(f, "s^{n}xs^{n}"),
        }
    }
}

/// The fibrations whose pages the presets build.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FibrationKind {
    /// Free loops evaluated at the basepoint; has the constant-loop section.
    Evaluation,
    /// Paths evaluated at both endpoints, over the product base; no section.
    PathOverDiagonal,
    /// The second-quadrant loop-homology sequence; constant loops again.
    LoopHomology,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FibrationTag {
    pub kind: FibrationKind,
    pub base: SpaceTag,
    pub has_cross_section: bool,
}

impl FibrationTag {
    pub fn new(kind: FibrationKind, base: SpaceTag) -> Self {
        let has_cross_section = !matches!(kind, FibrationKind::PathOverDiagonal);
        FibrationTag {
            kind,
            base,
            has_cross_section,
        }
    }
}

/// Sign convention for the differentials the sources leave undetermined.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SignChoice {
    Plus,
    Minus,
}

impl SignChoice {
    pub fn factor(&self) -> i64 {
        match self {
            SignChoice::Plus => 1,
            SignChoice::Minus => -1,
        }
    }
}

impl fmt::Display for SignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignChoice::Plus => write!(f, "+"),
            SignChoice::Minus => write!(f, "-"),
        }
    }
}

/// Integral cohomology ring, cohomological bidegrees `(m, 0)`.
pub fn cohomology_model(s: SpaceTag) -> Result<Presentation, ModelError> {
    s.validate()?;
    let n = s.dimension();
    let pres = match s {
        SpaceTag::Circle | SpaceTag::OddSphere(_) | SpaceTag::EvenSphere(_) => Presentation::new(
            vec![Generator::exterior("x", n, 0)],
            CoefficientMode::Integral,
        )?,
        SpaceTag::ComplexProjective(k) => {
            let mut p = Presentation::new(
                vec![Generator::polynomial("x", 2, 0)],
                CoefficientMode::Integral,
            )?;
            let trunc = p.term(1, &[("x", k as i64 + 1)])?;
            p.add_relation(trunc)?;
            p
        }
        SpaceTag::SphereProduct(k) => Presentation::new(
            vec![
                Generator::exterior("x⊗1", k as i64, 0),
                Generator::exterior("1⊗x", k as i64, 0),
            ],
            CoefficientMode::Integral,
        )?,
    };
    Ok(pres)
}

/// Pontryagin ring and cohomology ring of the based loop space.
pub fn loop_space_model(s: SpaceTag) -> Result<(Presentation, Presentation), ModelError> {
    s.validate()?;
    let pair = match s {
        SpaceTag::Circle => {
            let h = Presentation::new(
                vec![Generator::laurent("t", 0, 0)],
                CoefficientMode::Integral,
            )?;
            (h.clone(), h)
        }
        SpaceTag::OddSphere(n) => {
            let n = n as i64;
            // |y| = n - 1 is even, so Z[y] is honestly graded commutative.
            let h = Presentation::new(
                vec![Generator::polynomial("y", 0, n - 1)],
                CoefficientMode::Integral,
            )?;
            let c = Presentation::new(
                vec![Generator::divided_power("gamma", 0, n - 1)],
                CoefficientMode::Integral,
            )?;
            (h, c)
        }
        SpaceTag::EvenSphere(n) => {
            let n = n as i64;
            // |y| = n - 1 is odd; the Pontryagin ring is the strictly
            // commutative Z[y], recorded via the override table. y^2 is
            // NOT zero, which is exactly what the obstruction argument
            // needs.
            let mut h = Presentation::new(
                vec![Generator::polynomial("y", 0, n - 1)],
                CoefficientMode::Integral,
            )?;
            h.set_commutation_sign("y", "y", 1)?;
            let c = Presentation::new(
                vec![
                    Generator::divided_power("gamma", 0, 2 * n - 2),
                    Generator::exterior("z", 0, n - 1),
                ],
                CoefficientMode::Integral,
            )?;
            (h, c)
        }
        SpaceTag::ComplexProjective(n) => {
            let n = n as i64;
            let h = Presentation::new(
                vec![
                    Generator::exterior("z", 0, 1),
                    Generator::polynomial("y", 0, 2 * n),
                ],
                CoefficientMode::Integral,
            )?;
            let c = Presentation::new(
                vec![
                    Generator::exterior("z", 0, 1),
                    Generator::divided_power("y", 0, 2 * n),
                ],
                CoefficientMode::Integral,
            )?;
            (h, c)
        }
        SpaceTag::SphereProduct(_) => {
            return Err(ModelError::InvalidParameter(
                "loop model of the product is not a preset".into(),
            ))
        }
    };
    Ok(pair)
}

/// Presentation of the second-quadrant loop-homology page-2 term: base
/// cohomology in columns `p <= 0` tensored with the fiber Pontryagin ring.
pub fn loop_homology_presentation(
    s: SpaceTag,
    mode: CoefficientMode,
) -> Result<(Presentation, Vec<&'static str>), ModelError> {
    s.validate()?;
    let pres = match s {
        SpaceTag::Circle => return Err(ModelError::CircleHasNoPage),
        SpaceTag::OddSphere(n) | SpaceTag::EvenSphere(n) => {
            let n = n as i64;
            let mut p = Presentation::new(
                vec![
                    Generator::exterior("x", -n, 0),
                    Generator::polynomial("y", 0, n - 1),
                ],
                mode,
            )?;
            if n % 2 == 0 {
                p.set_commutation_sign("y", "y", 1)?;
            }
            p
        }
        SpaceTag::ComplexProjective(k) => {
            let k = k as i64;
            let mut p = Presentation::new(
                vec![
                    Generator::polynomial("x", -2, 0),
                    Generator::exterior("z", 0, 1),
                    Generator::polynomial("y", 0, 2 * k),
                ],
                mode,
            )?;
            let trunc = p.term(1, &[("x", k + 1)])?;
            p.add_relation(trunc)?;
            p
        }
        SpaceTag::SphereProduct(_) => {
            return Err(ModelError::InvalidParameter(
                "loop homology of the product is not a preset".into(),
            ))
        }
    };
    Ok((pres, vec!["x"]))
}

/// The loop-homology page-2 term over a window, with the constant-loop
/// cross-section recorded as permanent cycles on the base classes.
pub fn loop_homology_e2(s: SpaceTag, window: Window) -> Result<Page, ModelError> {
    loop_homology_e2_mode(s, window, CoefficientMode::Integral)
}

pub fn loop_homology_e2_mode(
    s: SpaceTag,
    window: Window,
    mode: CoefficientMode,
) -> Result<Page, ModelError> {
    let (pres, permanent) = loop_homology_presentation(s, mode)?;
    Ok(build_page(pres, window, Variance::Homological, &permanent)?)
}

/// Cohomology Serre page-2 term of a fibration preset.
pub fn serre_e2(f: FibrationTag, window: Window) -> Result<Page, ModelError> {
    f.base.validate()?;
    if matches!(f.base, SpaceTag::Circle) {
        return Err(ModelError::InvalidParameter(
            "circle base is excluded (not simply connected)".into(),
        ));
    }
    let (pres, permanent): (Presentation, Vec<&str>) = match (f.kind, f.base) {
        (FibrationKind::Evaluation, SpaceTag::OddSphere(n)) => {
            let n = n as i64;
            (
                Presentation::new(
                    vec![
                        Generator::exterior("x", n, 0),
                        Generator::divided_power("gamma", 0, n - 1),
                    ],
                    CoefficientMode::Integral,
                )?,
                vec!["x"],
            )
        }
        (FibrationKind::Evaluation, SpaceTag::EvenSphere(n)) => {
            let n = n as i64;
            (
                Presentation::new(
                    vec![
                        Generator::exterior("x", n, 0),
                        Generator::divided_power("gamma", 0, 2 * n - 2),
                        Generator::exterior("z", 0, n - 1),
                    ],
                    CoefficientMode::Integral,
                )?,
                vec!["x"],
            )
        }
        (FibrationKind::Evaluation, SpaceTag::ComplexProjective(k)) => {
            let k = k as i64;
            let mut p = Presentation::new(
                vec![
                    Generator::polynomial("x", 2, 0),
                    Generator::exterior("z", 0, 1),
                    Generator::divided_power("y", 0, 2 * k),
                ],
                CoefficientMode::Integral,
            )?;
            let trunc = p.term(1, &[("x", k + 1)])?;
            p.add_relation(trunc)?;
            (p, vec!["x"])
        }
        (FibrationKind::PathOverDiagonal, SpaceTag::SphereProduct(n)) => {
            let n = n as i64;
            (
                Presentation::new(
                    vec![
                        Generator::exterior("x⊗1", n, 0),
                        Generator::exterior("1⊗x", n, 0),
                        Generator::divided_power("gamma", 0, 2 * n - 2),
                        Generator::exterior("z", 0, n - 1),
                    ],
                    CoefficientMode::Integral,
                )?,
                Vec::new(),
            )
        }
        (kind, base) => {
            return Err(ModelError::InvalidParameter(format!(
                "no Serre preset for {kind:?} over {base}"
            )))
        }
    };
    Ok(build_page(pres, window, Variance::Cohomological, &permanent)?)
}

/// The known differential schedule of the loop-homology sequence: odd
/// spheres collapse, complex projective spaces carry
/// `d_{2n}(z) = (n+1) x^n y`, even spheres carry `d_n(y) = 2 x y^2`
/// (sign per the chosen convention).
pub fn install_known_differentials(
    s: SpaceTag,
    sign: SignChoice,
) -> Result<Schedule, ModelError> {
    s.validate()?;
    let mut schedule = Schedule::new();
    match s {
        SpaceTag::Circle | SpaceTag::OddSphere(_) => {}
        SpaceTag::EvenSphere(n) => {
            let (pres, _) = loop_homology_presentation(s, CoefficientMode::Integral)?;
            let img = pres.term(2 * sign.factor(), &[("x", 1), ("y", 2)])?;
            schedule.insert(n, vec![("y".to_string(), img)]);
        }
        SpaceTag::ComplexProjective(k) => {
            let (pres, _) = loop_homology_presentation(s, CoefficientMode::Integral)?;
            let img = pres.term(
                (k as i64 + 1) * sign.factor(),
                &[("x", k as i64), ("y", 1)],
            )?;
            schedule.insert(2 * k, vec![("z".to_string(), img)]);
        }
        SpaceTag::SphereProduct(_) => {
            return Err(ModelError::InvalidParameter(
                "no loop schedule for the product preset".into(),
            ))
        }
    }
    Ok(schedule)
}

/// Cohomology Serre schedule for the evaluation fibration of complex
/// projective space: `d^{2n}(y) = (n+1) x^n z`, the side the homology
/// differential dualizes from.
pub fn cp_serre_schedule(n: u32, sign: SignChoice) -> Result<Schedule, ModelError> {
    let f = FibrationTag::new(FibrationKind::Evaluation, SpaceTag::ComplexProjective(n));
    let page = serre_e2(f, Window::new(0, 2 * n as i64, 0, 2))?;
    let pres = page.presentation();
    let img = pres.term(
        (n as i64 + 1) * sign.factor(),
        &[("x", n as i64), ("z", 1)],
    )?;
    let mut schedule = Schedule::new();
    schedule.insert(2 * n, vec![("y".to_string(), img)]);
    Ok(schedule)
}

/// The window the presets use to certify everything up to a total degree.
pub fn standard_window(s: SpaceTag, max_total: i64) -> Window {
    let dim = s.dimension();
    Window::new(-dim, 0, 0, (max_total + 2 * dim).max(dim))
}

/// Closed-form value of a loop homology group, independent of the engine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClosedFormGroup {
    Group(AbelianGroup),
    /// Infinitely generated per degree: rank over the Laurent group
    /// algebra `Z[t, t^-1]`; plain abelian-group comparison does not
    /// apply (the circle case).
    LaurentModule { rank: usize },
}

impl fmt::Display for ClosedFormGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedFormGroup::Group(g) => write!(f, "{g}"),
            ClosedFormGroup::LaurentModule { rank } => match rank {
                1 => write!(f, "Z[t,t^-1]"),
                r => write!(f, "Z[t,t^-1]^{r}"),
            },
        }
    }
}

/// The closed-form group in shifted degree `i`, the answer oracle the
/// engine pipeline is checked against.
pub fn closed_form_groups(s: SpaceTag, i: i64) -> Result<ClosedFormGroup, ModelError> {
    s.validate()?;
    let group = match s {
        SpaceTag::Circle => {
            // Z[t, t^-1] (x) E(x): rank one over the group algebra in
            // degrees 0 and -1.
            if i == 0 || i == -1 {
                return Ok(ClosedFormGroup::LaurentModule { rank: 1 });
            }
            AbelianGroup::trivial()
        }
        SpaceTag::OddSphere(n) => {
            // Z[y] (x) E(x): one Z per monomial y^j (degree j(n-1)) and
            // x y^j (degree -n + j(n-1)).
            let n = i64::from(n);
            let mut rank = 0;
            rank += usize::from(multiple_of(i, n - 1));
            rank += usize::from(multiple_of(i + n, n - 1));
            AbelianGroup::free(rank)
        }
        SpaceTag::EvenSphere(n) => {
            let n = i64::from(n);
            let step = 2 * (n - 1);
            let mut rank = 0;
            if i == -n {
                rank += 1;
            }
            rank += usize::from(multiple_of(i, step));
            rank += usize::from(multiple_of(i + 1, step));
            let mut torsion = Vec::new();
            // Z/2 at i = -n + 2m(n-1), m >= 1.
            if i + n > 0 && multiple_of(i + n, step) {
                torsion.push(BigInt::from(2));
            }
            AbelianGroup::new(rank, torsion)
        }
        SpaceTag::ComplexProjective(k) => {
            let k = i64::from(k);
            if i < -2 * k {
                AbelianGroup::trivial()
            } else if i >= 0 && i % (2 * k) == 0 {
                AbelianGroup::new(1, vec![BigInt::from(k + 1)])
            } else {
                AbelianGroup::free(1)
            }
        }
        SpaceTag::SphereProduct(_) => {
            return Err(ModelError::InvalidParameter(
                "no closed form recorded for the product".into(),
            ))
        }
    };
    Ok(ClosedFormGroup::Group(group))
}

/// Is `i = m * step` for some `m >= 0`?
fn multiple_of(i: i64, step: i64) -> bool {
    debug_assert!(step > 0);
    i >= 0 && i % step == 0
}

/// The closed-form presentations with their stable-page bidegrees.
pub fn closed_form_presentation(s: SpaceTag) -> Result<Presentation, ModelError> {
    s.validate()?;
    let pres = match s {
        SpaceTag::Circle => Presentation::new(
            vec![
                Generator::laurent("t", 0, 0),
                Generator::exterior("x", -1, 0),
            ],
            CoefficientMode::Integral,
        )?,
        SpaceTag::OddSphere(n) => {
            let n = n as i64;
            Presentation::new(
                vec![
                    Generator::exterior("x", -n, 0),
                    Generator::polynomial("y", 0, n - 1),
                ],
                CoefficientMode::Integral,
            )?
        }
        SpaceTag::EvenSphere(n) => {
            let n = n as i64;
            let mut p = Presentation::new(
                vec![
                    Generator::polynomial("x", -n, 0),
                    Generator::polynomial("y", 0, 2 * n - 2),
                    Generator::exterior("z", -n, n - 1),
                ],
                CoefficientMode::Integral,
            )?;
            for rel in [
                p.term(1, &[("x", 2)])?,
                p.term(1, &[("x", 1), ("z", 1)])?,
                p.term(2, &[("x", 1), ("y", 1)])?,
            ] {
                p.add_relation(rel)?;
            }
            p
        }
        SpaceTag::ComplexProjective(k) => {
            let k = k as i64;
            let mut p = Presentation::new(
                vec![
                    Generator::polynomial("x", -2, 0),
                    Generator::polynomial("y", 0, 2 * k),
                    Generator::exterior("w", -2, 1),
                ],
                CoefficientMode::Integral,
            )?;
            for rel in [
                p.term(1, &[("x", k + 1)])?,
                p.term(k + 1, &[("x", k), ("y", 1)])?,
                p.term(1, &[("w", 1), ("x", k)])?,
            ] {
                p.add_relation(rel)?;
            }
            p
        }
        SpaceTag::SphereProduct(_) => {
            return Err(ModelError::InvalidParameter(
                "no closed form recorded for the product".into(),
            ))
        }
    };
    Ok(pres)
}

/// Representative assignment of the closed-form generators on the stable page,
/// as page-2 elements of the loop presentation.
pub fn closed_form_assignment(
    s: SpaceTag,
    loop_pres: &Presentation,
) -> Result<BTreeMap<String, Element>, ModelError> {
    let mut out = BTreeMap::new();
    match s {
        SpaceTag::OddSphere(_) => {
            out.insert("x".into(), loop_pres.term(1, &[("x", 1)])?);
            out.insert("y".into(), loop_pres.term(1, &[("y", 1)])?);
        }
        SpaceTag::EvenSphere(_) => {
            out.insert("x".into(), loop_pres.term(1, &[("x", 1)])?);
            out.insert("y".into(), loop_pres.term(1, &[("y", 2)])?);
            out.insert("z".into(), loop_pres.term(1, &[("x", 1), ("y", 1)])?);
        }
        SpaceTag::ComplexProjective(_) => {
            out.insert("x".into(), loop_pres.term(1, &[("x", 1)])?);
            out.insert("y".into(), loop_pres.term(1, &[("y", 1)])?);
            out.insert("w".into(), loop_pres.term(1, &[("x", 1), ("z", 1)])?);
        }
        _ => {
            return Err(ModelError::InvalidParameter(
                "no closed-form assignment for this space".into(),
            ))
        }
    }
    Ok(out)
}

/// A full preset run: page 2, stable page, report, and assembled groups.
pub struct LoopComputation {
    pub space: SpaceTag,
    pub max_total: i64,
    pub sign: SignChoice,
    pub mode: CoefficientMode,
    pub page2: Page,
    pub einf: Page,
    pub report: RunReport,
    pub groups: BTreeMap<i64, AbelianGroup>,
}

/// Run the loop-homology sequence of a preset space to its stable page
/// and assemble the groups on `[-dim, max_total]`.
pub fn compute_loop_homology(
    s: SpaceTag,
    max_total: i64,
    sign: SignChoice,
    mode: CoefficientMode,
) -> Result<LoopComputation, ModelError> {
    s.validate()?;
    if matches!(s, SpaceTag::Circle) {
        return Err(ModelError::CircleHasNoPage);
    }
    let window = standard_window(s, max_total);
    let page2 = loop_homology_e2_mode(s, window, mode)?;
    let schedule = install_known_differentials(s, sign)?;
    let (einf, report) = run(&page2, &schedule)?;
    let dim = s.dimension();
    let groups = total_degree_groups(&einf, -dim..=max_total)?;
    Ok(LoopComputation {
        space: s,
        max_total,
        sign,
        mode,
        page2,
        einf,
        report,
        groups,
    })
}

/// Window on which stable cells are certified and the closed-form
/// presentation is compared.
pub fn verification_window(s: SpaceTag, max_total: i64) -> Window {
    let dim = s.dimension();
    Window::new(-dim, 0, 0, max_total + dim)
}

/// Verify the closed-form presentation against a computed stable page.
pub fn verify_closed_form_presentation(comp: &LoopComputation) -> Result<VerifyReport, ModelError> {
    let candidate = closed_form_presentation(comp.space)?;
    let assignment = closed_form_assignment(comp.space, comp.einf.presentation())?;
    let window = verification_window(comp.space, comp.max_total);
    Ok(crate::engine::verify_presentation(
        &comp.einf,
        &candidate,
        &assignment,
        window,
    )?)
}

/// Outcome of the even-sphere n = 2 lift-choice computation.
#[derive(Clone, Debug)]
pub struct N2Report {
    /// Per lift offset `c`: does every closed-form relation evaluate to zero
    /// on the representatives with `y` lifted to `y^2 + c * x y^2`?
    pub cases: Vec<(i64, bool)>,
    pub ok: bool,
}

/// For the 2-sphere the lift of `y` is ambiguous by the torsion class at
/// `(-2, 4)`. Every choice `y^2 + c * x y^2` satisfies the closed-form
/// relations (in particular `2 x * v_c = 0` because `x * (x y^2) = 0`),
/// so all choices generate the same algebra.
pub fn n2_extension_check(range: std::ops::RangeInclusive<i64>) -> Result<N2Report, ModelError> {
    let comp = compute_loop_homology(
        SpaceTag::EvenSphere(2),
        12,
        SignChoice::Plus,
        CoefficientMode::Integral,
    )?;
    let einf = &comp.einf;
    let pres = einf.presentation().clone();
    let x = pres.term(1, &[("x", 1)])?;
    let z = pres.term(1, &[("x", 1), ("y", 1)])?;
    let mut cases = Vec::new();
    for c in range {
        let lift = pres
            .term(1, &[("y", 2)])?
            .add(&pres.term(c, &[("x", 1), ("y", 2)])?);
        // Closed-form relations with y -> lift: x^2, x*z, 2*x*y.
        let x_sq = pres.multiply(&x, &x);
        let xz = pres.multiply(&x, &z);
        let two_x_lift = pres.multiply(&x, &lift).scale(&BigInt::from(2));
        let mut holds = x_sq.is_zero() || einf.element_is_zero(&x_sq)?;
        holds &= xz.is_zero() || einf.element_is_zero(&xz)?;
        holds &= two_x_lift.is_zero() || einf.element_is_zero(&two_x_lift)?;
        cases.push((c, holds));
    }
    let ok = cases.iter().all(|&(_, h)| h);
    Ok(N2Report { cases, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidegree::Bidegree;
    use crate::engine::extension_split_check;

    #[test]
    fn space_tag_syntax_round_trip() {
        for text in ["s1", "s^n:odd:3", "s^n:even:4", "cp^n:2"] {
            let tag = SpaceTag::parse(text).unwrap();
            assert_eq!(tag.to_string(), text);
        }
        assert!(SpaceTag::parse("s^n:odd:4").is_err());
        assert!(SpaceTag::parse("s^n:even:3").is_err());
        assert!(SpaceTag::parse("cp^n:0").is_err());
        assert!(SpaceTag::parse("t^2").is_err());
    }

    #[test]
    fn fibration_sections() {
        let eval = FibrationTag::new(FibrationKind::Evaluation, SpaceTag::EvenSphere(2));
        assert!(eval.has_cross_section);
        let path = FibrationTag::new(FibrationKind::PathOverDiagonal, SpaceTag::SphereProduct(2));
        assert!(!path.has_cross_section);
    }

    #[test]
    fn cohomology_models_match_known_ranks() {
        let s2 = cohomology_model(SpaceTag::EvenSphere(2)).unwrap();
        let basis = s2.monomial_basis(Window::new(0, 4, 0, 0)).unwrap();
        assert_eq!(basis.len(), 2, "1 and x only");
        let cp2 = cohomology_model(SpaceTag::ComplexProjective(2)).unwrap();
        let basis = cp2.monomial_basis(Window::new(0, 8, 0, 0)).unwrap();
        assert_eq!(basis.len(), 3, "1, x, x^2 with x^3 = 0");
        let prod = cohomology_model(SpaceTag::SphereProduct(2)).unwrap();
        let basis = prod.monomial_basis(Window::new(0, 4, 0, 0)).unwrap();
        assert_eq!(basis[&Bidegree::new(2, 0)].len(), 2);
        assert_eq!(basis[&Bidegree::new(4, 0)].len(), 1);
    }

    #[test]
    fn odd_sphere_collapses_to_tensor_lattice() {
        let comp = compute_loop_homology(
            SpaceTag::OddSphere(3),
            12,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        assert!(comp.report.active_pages.is_empty());
        assert_eq!(
            comp.einf.group_at(Bidegree::new(0, 4)),
            AbelianGroup::free(1)
        );
        assert_eq!(
            comp.einf.group_at(Bidegree::new(-3, 4)),
            AbelianGroup::free(1)
        );
        for (i, g) in &comp.groups {
            match closed_form_groups(SpaceTag::OddSphere(3), *i).unwrap() {
                ClosedFormGroup::Group(expected) => assert_eq!(&expected, g, "degree {i}"),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn even_sphere_matches_closed_form_and_presentation() {
        for n in [2u32, 4] {
            let comp = compute_loop_homology(
                SpaceTag::EvenSphere(n),
                20,
                SignChoice::Plus,
                CoefficientMode::Integral,
            )
            .unwrap();
            for (i, g) in &comp.groups {
                match closed_form_groups(SpaceTag::EvenSphere(n), *i).unwrap() {
                    ClosedFormGroup::Group(expected) => {
                        assert_eq!(&expected, g, "S^{n} degree {i}")
                    }
                    _ => unreachable!(),
                }
            }
            let report = verify_closed_form_presentation(&comp).unwrap();
            assert!(report.ok, "S^{n}: {:?}", report.mismatches);
        }
    }

    #[test]
    fn cp_matches_closed_form_and_presentation() {
        for n in [1u32, 2, 3] {
            let comp = compute_loop_homology(
                SpaceTag::ComplexProjective(n),
                16,
                SignChoice::Plus,
                CoefficientMode::Integral,
            )
            .unwrap();
            for (i, g) in &comp.groups {
                match closed_form_groups(SpaceTag::ComplexProjective(n), *i).unwrap() {
                    ClosedFormGroup::Group(expected) => {
                        assert_eq!(&expected, g, "CP^{n} degree {i}")
                    }
                    _ => unreachable!(),
                }
            }
            let report = verify_closed_form_presentation(&comp).unwrap();
            assert!(report.ok, "CP^{n}: {:?}", report.mismatches);
        }
    }

    #[test]
    fn cp1_equals_s2() {
        let cp1 = compute_loop_homology(
            SpaceTag::ComplexProjective(1),
            14,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        let s2 = compute_loop_homology(
            SpaceTag::EvenSphere(2),
            14,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        assert_eq!(cp1.groups, s2.groups);
    }

    #[test]
    fn circle_closed_form() {
        assert_eq!(
            closed_form_groups(SpaceTag::Circle, 0).unwrap(),
            ClosedFormGroup::LaurentModule { rank: 1 }
        );
        assert_eq!(
            closed_form_groups(SpaceTag::Circle, -1).unwrap(),
            ClosedFormGroup::LaurentModule { rank: 1 }
        );
        assert_eq!(
            closed_form_groups(SpaceTag::Circle, 3).unwrap(),
            ClosedFormGroup::Group(AbelianGroup::trivial())
        );
        assert!(matches!(
            compute_loop_homology(
                SpaceTag::Circle,
                10,
                SignChoice::Plus,
                CoefficientMode::Integral
            ),
            Err(ModelError::CircleHasNoPage)
        ));
    }

    #[test]
    fn splits_hold_on_a_torsion_preset() {
        let comp = compute_loop_homology(
            SpaceTag::ComplexProjective(2),
            16,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        for i in -4..=16 {
            let split = extension_split_check(&comp.einf, i).unwrap();
            assert!(split.ok, "CP^2 diagonal {i}");
        }
    }

    #[test]
    fn n2_choice_is_free() {
        let report = n2_extension_check(-2..=2).unwrap();
        assert!(report.ok, "{:?}", report.cases);
        assert_eq!(report.cases.len(), 5);
    }

    #[test]
    fn sign_choice_does_not_change_groups() {
        let plus = compute_loop_homology(
            SpaceTag::EvenSphere(2),
            12,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        let minus = compute_loop_homology(
            SpaceTag::EvenSphere(2),
            12,
            SignChoice::Minus,
            CoefficientMode::Integral,
        )
        .unwrap();
        assert_eq!(plus.groups, minus.groups);
    }

    #[test]
    fn loop_space_models_have_the_stated_degrees() {
        use crate::algebra::GeneratorKind;
        // Odd sphere: (Z[y], Gamma[gamma]), |y| = |gamma_1| = n - 1.
        let (h, c) = loop_space_model(SpaceTag::OddSphere(5)).unwrap();
        assert_eq!(h.generators()[0].bidegree, Bidegree::new(0, 4));
        assert_eq!(h.generators()[0].kind, GeneratorKind::Polynomial);
        assert_eq!(c.generators()[0].kind, GeneratorKind::DividedPower);
        // Even sphere: (strict Z[y], Gamma[gamma] (x) E(z)).
        let (h, c) = loop_space_model(SpaceTag::EvenSphere(4)).unwrap();
        assert_eq!(h.generators()[0].bidegree, Bidegree::new(0, 3));
        assert_eq!(c.generators()[0].bidegree, Bidegree::new(0, 6));
        assert_eq!(c.generators()[1].bidegree, Bidegree::new(0, 3));
        assert_eq!(c.generators()[1].kind, GeneratorKind::Exterior);
        // Complex projective: (E(z) (x) Z[y], dual), |z| = 1, |y| = 2n.
        let (h, c) = loop_space_model(SpaceTag::ComplexProjective(3)).unwrap();
        assert_eq!(h.generators()[0].bidegree, Bidegree::new(0, 1));
        assert_eq!(h.generators()[1].bidegree, Bidegree::new(0, 6));
        assert_eq!(c.generators()[1].kind, GeneratorKind::DividedPower);
        // Circle: the Laurent group algebra on both sides.
        let (h, _) = loop_space_model(SpaceTag::Circle).unwrap();
        assert_eq!(h.generators()[0].kind, GeneratorKind::Laurent);
    }

    #[test]
    fn tensor_reproduces_the_cp_lattice() {
        use crate::algebra::{Generator, Presentation};
        // Base columns (truncated polynomial at (-2, 0)) tensored with the
        // fiber Pontryagin ring gives the same lattice as the preset.
        let k = 2i64;
        let mut base = Presentation::new(
            vec![Generator::polynomial("x", -2, 0)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let trunc = base.term(1, &[("x", k + 1)]).unwrap();
        base.add_relation(trunc).unwrap();
        let fiber = Presentation::new(
            vec![
                Generator::exterior("z", 0, 1),
                Generator::polynomial("y", 0, 2 * k),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        let tensored = base.tensor(&fiber).unwrap();
        let (direct, _) =
            loop_homology_presentation(SpaceTag::ComplexProjective(2), CoefficientMode::Integral)
                .unwrap();
        let window = Window::new(-4, 0, 0, 9);
        let a = tensored.monomial_basis(window).unwrap();
        let b = direct.monomial_basis(window).unwrap();
        let ranks_a: Vec<(Bidegree, usize)> = a.iter().map(|(bd, m)| (*bd, m.len())).collect();
        let ranks_b: Vec<(Bidegree, usize)> = b.iter().map(|(bd, m)| (*bd, m.len())).collect();
        assert_eq!(ranks_a, ranks_b);
    }

    #[test]
    fn cp_serre_side_dualizes_to_the_installed_schedule() {
        use crate::engine::{advance_to, extend_differential};
        use crate::naturality::dualize_differential;
        // The evaluation-fibration cohomology differential
        // d^{2n}(y_1) = (n+1) x^n z, extended along the divided-power
        // tower, is the fiber transpose of the installed loop schedule
        // d_{2n}(z) = (n+1) x^n y.
        let n = 2u32;
        let nn = n as i64;
        let serre_page = serre_e2(
            FibrationTag::new(FibrationKind::Evaluation, SpaceTag::ComplexProjective(n)),
            Window::new(0, 2 * nn, 0, 4 * nn + 2),
        )
        .unwrap();
        let serre_pres = serre_page.presentation().clone();
        let serre_schedule = cp_serre_schedule(n, SignChoice::Plus).unwrap();
        let serre_page_r = advance_to(&serre_page, 2 * n).unwrap();
        let images: Vec<(&str, crate::algebra::Element)> = serre_schedule
            .entry(2 * n)
            .unwrap()
            .iter()
            .map(|(g, e)| (g.as_str(), e.clone()))
            .collect();
        let d_serre = extend_differential(&images, &serre_page_r, &[]).unwrap();

        let (loop_pres, _) =
            loop_homology_presentation(SpaceTag::ComplexProjective(n), CoefficientMode::Integral)
                .unwrap();
        let loop_page = crate::engine::build_page(
            loop_pres.clone(),
            Window::new(-2 * nn, 0, 0, 4 * nn + 2),
            Variance::Homological,
            &["x"],
        )
        .unwrap();
        let loop_schedule =
            install_known_differentials(SpaceTag::ComplexProjective(n), SignChoice::Plus).unwrap();
        let loop_page_r = advance_to(&loop_page, 2 * n).unwrap();
        let images: Vec<(&str, crate::algebra::Element)> = loop_schedule
            .entry(2 * n)
            .unwrap()
            .iter()
            .map(|(g, e)| (g.as_str(), e.clone()))
            .collect();
        let d_loop = extend_differential(&images, &loop_page_r, &[]).unwrap();

        // Loop: (0, 2nm+1){z y^m} -> (-2n, 2n(m+1)){x^n y^{m+1}} pairs
        // with Serre: (0, 2n(m+1)){y_{m+1}} -> (2n, 2nm+1){x^n z y_m}.
        for m in 0..=1i64 {
            let q_src = 2 * nn * m + 1;
            let q_tgt = 2 * nn * (m + 1);
            let loop_m = d_loop
                .matrix_between(
                    &loop_pres,
                    &loop_pres.basis_at(Bidegree::new(0, q_src)).unwrap(),
                    &loop_pres.basis_at(Bidegree::new(-2 * nn, q_tgt)).unwrap(),
                )
                .unwrap();
            let serre_m = d_serre
                .matrix_between(
                    &serre_pres,
                    &serre_pres.basis_at(Bidegree::new(0, q_tgt)).unwrap(),
                    &serre_pres.basis_at(Bidegree::new(2 * nn, q_src)).unwrap(),
                )
                .unwrap();
            assert_eq!(loop_m, dualize_differential(&serre_m), "m = {m}");
            assert_eq!(
                loop_m[(0, 0)],
                num_bigint::BigInt::from(nn + 1),
                "coefficient is n + 1"
            );
        }
    }

    #[test]
    fn circle_base_is_excluded_from_serre_pages() {
        let err = serre_e2(
            FibrationTag::new(FibrationKind::Evaluation, SpaceTag::Circle),
            Window::new(0, 1, 0, 1),
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::InvalidParameter(_)));
    }

    #[test]
    fn run_report_records_declared_zero_pages() {
        // Odd spheres: nothing forces d_n = 0 by placement; the schedule
        // declares it (that is the cross-section argument).
        let comp = compute_loop_homology(
            SpaceTag::OddSphere(3),
            10,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        assert!(comp.report.declared_zero_pages.contains(&3));
        assert!(comp.report.active_pages.is_empty());
        // Complex projective: the below-critical even pages are likewise
        // declared, matching the quoted collapse of the companion Serre
        // sequence.
        let comp = compute_loop_homology(
            SpaceTag::ComplexProjective(2),
            10,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        assert!(comp.report.declared_zero_pages.contains(&2));
        assert_eq!(comp.report.active_pages, vec![4]);
        // Even spheres: every skipped page is empty by placement.
        let comp = compute_loop_homology(
            SpaceTag::EvenSphere(4),
            10,
            SignChoice::Plus,
            CoefficientMode::Integral,
        )
        .unwrap();
        assert!(comp.report.declared_zero_pages.is_empty());
        assert_eq!(comp.report.active_pages, vec![4]);
    }

    #[test]
    fn rational_even_sphere_leibniz_alternation() {
        use crate::engine::{advance_to, extend_differential};
        let n = 2i64;
        let (pres, _) =
            loop_homology_presentation(SpaceTag::EvenSphere(2), CoefficientMode::Rational)
                .unwrap();
        let page = crate::engine::build_page(
            pres.clone(),
            Window::new(-n, 0, 0, 12),
            Variance::Homological,
            &["x"],
        )
        .unwrap();
        let page_n = advance_to(&page, n as u32).unwrap();
        let img = pres.term(2, &[("x", 1), ("y", 2)]).unwrap();
        let d = extend_differential(&[("y", img)], &page_n, &[]).unwrap();
        for kk in 0..=3i64 {
            let even = pres.term(1, &[("y", 2 * kk)]).unwrap();
            assert!(d.apply(&pres, &even).is_zero(), "d(y^{{2k}}) = 0");
            let odd = pres.term(1, &[("y", 2 * kk + 1)]).unwrap();
            let expected = pres.term(2, &[("x", 1), ("y", 2 * kk + 2)]).unwrap();
            assert_eq!(d.apply(&pres, &odd), expected, "d(y^{{2k+1}}) = 2 x y^{{2k+2}}");
        }
    }

    #[test]
    fn rational_mode_ranks_equal_integral_free_ranks() {
        for s in [SpaceTag::EvenSphere(2), SpaceTag::ComplexProjective(2)] {
            let z =
                compute_loop_homology(s, 12, SignChoice::Plus, CoefficientMode::Integral).unwrap();
            let q =
                compute_loop_homology(s, 12, SignChoice::Plus, CoefficientMode::Rational).unwrap();
            for (i, zg) in &z.groups {
                let qg = &q.groups[i];
                assert!(qg.is_free());
                assert_eq!(qg.free_rank(), zg.free_rank(), "{s} degree {i}");
            }
        }
    }
}
