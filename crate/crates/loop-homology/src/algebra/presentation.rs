//! Algebra presentations: generators, commutation signs, relations, and
//! normal-form multiplication.

use super::element::{Element, Monomial};
use super::{AlgebraError, CoefficientMode, Generator, GeneratorKind};
use crate::bidegree::Bidegree;
use crate::linalg::AbelianGroup;
use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// A quotient relation `coeff * monomial = 0` with `coeff >= 1`.
///
/// These are the only relation shapes the standard models and the stable
/// presentations need: monomial truncations (`coeff = 1`) and torsion
/// relations like `2*x*y` or `(n+1)*x^n*y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub coeff: BigInt,
    pub monomial: Monomial,
}

/// The per-bidegree content of a presentation: monomials with their
/// annihilating torsion coefficients and the canonical group.
#[derive(Clone, Debug)]
pub struct CellAlgebra {
    pub monomials: Vec<Monomial>,
    /// `None` for free monomials, `Some(c)` when `c * m = 0`.
    pub annihilators: Vec<Option<BigInt>>,
    pub group: AbelianGroup,
}

/// A bigraded algebra presentation.
#[derive(Clone, Debug)]
pub struct Presentation {
    gens: Vec<Generator>,
    degrees: Vec<Bidegree>,
    /// Commutation overrides keyed by `(min, max)` generator index; the
    /// value is the sign `s` in `a * b = s * b * a`. Default is the Koszul
    /// sign on total degrees.
    overrides: BTreeMap<(usize, usize), i8>,
    relations: Vec<Relation>,
    mode: CoefficientMode,
}

impl Presentation {
    pub fn new(gens: Vec<Generator>, mode: CoefficientMode) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
            if g.name.is_empty() || g.name.chars().any(|c| "()^*+-#,".contains(c) || c.is_whitespace()) {
                return Err(AlgebraError::Parse(format!(
                    "generator name `{}` contains reserved characters",
                    g.name
                )));
            }
        }
        let degrees = gens.iter().map(|g| g.bidegree).collect();
        Ok(Presentation {
            gens,
            degrees,
            overrides: BTreeMap::new(),
            relations: Vec::new(),
            mode,
        })
    }

    /// The trivial presentation: just the ground ring.
    pub fn trivial(mode: CoefficientMode) -> Self {
        Presentation::new(Vec::new(), mode).expect("no names to clash")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.gens[idx]
    }

    pub fn degrees(&self) -> &[Bidegree] {
        &self.degrees
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn gen_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    /// Override the commutation sign of a generator pair.
    pub fn set_commutation_sign(
        &mut self,
        a: &str,
        b: &str,
        sign: i8,
    ) -> Result<(), AlgebraError> {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        let i = self.gen_index(a)?;
        let j = self.gen_index(b)?;
        let key = (i.min(j), i.max(j));
        self.overrides.insert(key, sign);
        Ok(())
    }

    /// Add a quotient relation. Only integer multiples of a single
    /// monomial over exterior/polynomial generators are supported; that
    /// covers every relation shape in the standard models.
    pub fn add_relation(&mut self, rel: Element) -> Result<(), AlgebraError> {
        if rel.is_zero() {
            return Ok(());
        }
        if rel.num_terms() != 1 {
            return Err(AlgebraError::UnsupportedRelation(
                "relations must be integer multiples of a single monomial".into(),
            ));
        }
        let (m, c) = rel.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        for &(g, e) in m.exponents() {
            match self.gens[g].kind {
                GeneratorKind::Exterior | GeneratorKind::Polynomial => {
                    if e < 0 {
                        return Err(AlgebraError::BadExponent {
                            name: self.gens[g].name.clone(),
                            exp: e,
                        });
                    }
                }
                GeneratorKind::DividedPower | GeneratorKind::Laurent => {
                    return Err(AlgebraError::UnsupportedRelation(format!(
                        "relation monomial uses `{}` which is {}",
                        self.gens[g].name, self.gens[g].kind
                    )));
                }
            }
        }
        self.relations.push(Relation {
            coeff: c.abs(),
            monomial: m,
        });
        Ok(())
    }

    /// Build a monomial from `(name, exponent)` pairs, validating exponent
    /// ranges per generator kind.
    pub fn monomial(&self, pairs: &[(&str, i64)]) -> Result<Monomial, AlgebraError> {
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for &(name, e) in pairs {
            idx_pairs.push((self.gen_index(name)?, e));
        }
        let m = Monomial::from_pairs(idx_pairs);
        self.validate_monomial(&m)?;
        Ok(m)
    }

    /// Convenience: `coeff * monomial` as an element.
    pub fn term(&self, coeff: i64, pairs: &[(&str, i64)]) -> Result<Element, AlgebraError> {
        Ok(Element::from_monomial(
            self.monomial(pairs)?,
            BigInt::from(coeff),
        ))
    }

    pub fn validate_monomial(&self, m: &Monomial) -> Result<(), AlgebraError> {
        for &(g, e) in m.exponents() {
            if g >= self.gens.len() {
                return Err(AlgebraError::UnknownGenerator(format!("#{g}")));
            }
            let ok = match self.gens[g].kind {
                GeneratorKind::Exterior => (0..=1).contains(&e),
                GeneratorKind::Polynomial | GeneratorKind::DividedPower => e >= 0,
                GeneratorKind::Laurent => true,
            };
            if !ok {
                return Err(AlgebraError::BadExponent {
                    name: self.gens[g].name.clone(),
                    exp: e,
                });
            }
        }
        Ok(())
    }

    /// The sign `s` with `a * b = s * b * a` for distinct generators.
    pub fn pair_sign(&self, i: usize, j: usize) -> i8 {
        let key = (i.min(j), i.max(j));
        if let Some(&s) = self.overrides.get(&key) {
            return s;
        }
        let prod = (self.gens[i].total_degree() as i128) * (self.gens[j].total_degree() as i128);
        if prod.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// Product of two normal-ordered monomials: Koszul reordering sign,
    /// kind laws (exterior squares, divided-power binomials, Laurent
    /// cancellation). Returns `None` when the product is zero.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(BigInt, Monomial)> {
        // Reordering sign: each generator block of `b` moves left past the
        // blocks of `a` with strictly larger index.
        let mut parity: i128 = 0;
        for &(gb, eb) in b.exponents() {
            for &(ga, ea) in a.exponents() {
                if ga > gb && self.pair_sign(ga, gb) == -1 {
                    parity += (ea as i128) * (eb as i128);
                }
            }
        }
        let mut coeff = if parity.rem_euclid(2) == 1 {
            -BigInt::one()
        } else {
            BigInt::one()
        };

        let mut exps: BTreeMap<usize, i64> = a.exponents().iter().copied().collect();
        for &(g, eb) in b.exponents() {
            let ea = exps.get(&g).copied().unwrap_or(0);
            let e = ea + eb;
            match self.gens[g].kind {
                GeneratorKind::Exterior => {
                    if e > 1 {
                        return None;
                    }
                }
                GeneratorKind::DividedPower => {
                    if ea > 0 && eb > 0 {
                        coeff *= binomial(BigInt::from(e), BigInt::from(ea));
                    }
                }
                GeneratorKind::Polynomial | GeneratorKind::Laurent => {}
            }
            if e == 0 {
                exps.remove(&g);
            } else {
                exps.insert(g, e);
            }
        }
        Some((coeff, Monomial::from_pairs(exps)))
    }

    /// Reduce one term modulo the relations. `None` when the term dies.
    fn reduce_term(&self, m: &Monomial, c: &BigInt) -> Option<(Monomial, BigInt)> {
        let mut modulus: Option<BigInt> = None;
        for rel in &self.relations {
            if m.divisible_by(&rel.monomial) {
                if rel.coeff.is_one() {
                    return None;
                }
                modulus = Some(match modulus {
                    None => rel.coeff.clone(),
                    Some(g) => g.gcd(&rel.coeff),
                });
            }
        }
        let c = match modulus {
            Some(g) => c.mod_floor(&g),
            None => c.clone(),
        };
        if c.is_zero() {
            None
        } else {
            Some((m.clone(), c))
        }
    }

    /// Normal form: relation reduction and canonical coefficients.
    pub fn normal_form(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            if let Some((m2, c2)) = self.reduce_term(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Normal-form product of two elements.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((k, m)) = self.mul_monomials(ma, mb) {
                    out.add_term(m, ca * cb * k);
                }
            }
        }
        self.normal_form(&out)
    }

    /// `e^n` for `n >= 0`.
    pub fn power(&self, e: &Element, n: u32) -> Element {
        let mut out = Element::one();
        for _ in 0..n {
            out = self.multiply(&out, e);
        }
        out
    }

    /// Tensor product of presentations; Koszul signs across the factors,
    /// second-factor names renamed with a prime on collision.
    pub fn tensor(&self, other: &Presentation) -> Result<Presentation, AlgebraError> {
        if self.mode != other.mode {
            return Err(AlgebraError::ModeMismatch);
        }
        let mut gens = self.gens.clone();
        let taken: std::collections::BTreeSet<String> =
            gens.iter().map(|g| g.name.clone()).collect();
        let offset = gens.len();
        for g in &other.gens {
            let mut name = g.name.clone();
            while taken.contains(&name) || gens[offset..].iter().any(|h| h.name == name) {
                name.push('\'');
            }
            gens.push(Generator::new(name, g.bidegree, g.kind));
        }
        let mut out = Presentation::new(gens, self.mode)?;
        out.overrides = self.overrides.clone();
        for (&(i, j), &s) in &other.overrides {
            out.overrides.insert((i + offset, j + offset), s);
        }
        out.relations = self.relations.clone();
        for rel in &other.relations {
            let shifted = Monomial::from_pairs(
                rel.monomial
                    .exponents()
                    .iter()
                    .map(|&(g, e)| (g + offset, e)),
            );
            out.relations.push(Relation {
                coeff: rel.coeff.clone(),
                monomial: shifted,
            });
        }
        Ok(out)
    }

    /// Graded-commutativity check over all basis monomials of a window:
    /// `a * b = (-1)^{|a||b|} b * a`. On failure the witness pair comes
    /// back with the verdict.
    pub fn check_graded_commutative(
        &self,
        window: crate::bidegree::Window,
    ) -> Result<(bool, Option<(Monomial, Monomial)>), AlgebraError> {
        let basis = self.monomial_basis(window)?;
        let all: Vec<&Monomial> = basis.values().flatten().collect();
        // Squares first, so a failing odd square is the witness reported.
        let mut pairs: Vec<(&Monomial, &Monomial)> = all.iter().map(|&m| (m, m)).collect();
        for &a in &all {
            for &b in &all {
                if a != b {
                    pairs.push((a, b));
                }
            }
        }
        for (a, b) in pairs {
            let da = a.bidegree(&self.degrees).total() as i128;
            let db = b.bidegree(&self.degrees).total() as i128;
            let sign = if (da * db).rem_euclid(2) == 1 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
            let ea = Element::from_monomial(a.clone(), BigInt::one());
            let eb = Element::from_monomial(b.clone(), BigInt::one());
            let lhs = self.multiply(&ea, &eb);
            let rhs = self.multiply(&eb, &ea).scale(&sign);
            if lhs != rhs {
                return Ok((false, Some((a.clone(), b.clone()))));
            }
        }
        Ok((true, None))
    }

    /// Render a monomial like `x^2*y` using generator names.
    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .map(|&(g, e)| {
                let name = &self.gens[g].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }

    /// Render an element like `2*x^2*y - 3*z`.
    pub fn render_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in e.terms().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&self.render_monomial(m));
            } else {
                out.push_str(&format!("{}*{}", mag, self.render_monomial(m)));
            }
        }
        out
    }

    /// Render the ring shape, e.g. `E(z) (x) Z[x, y] / (x^2, x*z, 2*x*y)`.
    pub fn render_ring(&self) -> String {
        let ground = match self.mode {
            CoefficientMode::Integral => "Z",
            CoefficientMode::Rational => "Q",
        };
        let mut factors = Vec::new();
        let ext: Vec<&str> = self
            .gens
            .iter()
            .filter(|g| g.kind == GeneratorKind::Exterior)
            .map(|g| g.name.as_str())
            .collect();
        if !ext.is_empty() {
            factors.push(format!("E({})", ext.join(", ")));
        }
        let poly: Vec<&str> = self
            .gens
            .iter()
            .filter(|g| g.kind == GeneratorKind::Polynomial)
            .map(|g| g.name.as_str())
            .collect();
        if !poly.is_empty() {
            factors.push(format!("{ground}[{}]", poly.join(", ")));
        }
        let div: Vec<&str> = self
            .gens
            .iter()
            .filter(|g| g.kind == GeneratorKind::DividedPower)
            .map(|g| g.name.as_str())
            .collect();
        if !div.is_empty() {
            factors.push(format!("Gamma[{}]", div.join(", ")));
        }
        let laurent: Vec<String> = self
            .gens
            .iter()
            .filter(|g| g.kind == GeneratorKind::Laurent)
            .map(|g| format!("{ground}[{0}, {0}^-1]", g.name))
            .collect();
        factors.extend(laurent);
        if factors.is_empty() {
            factors.push(ground.to_string());
        }
        let mut out = factors.join(" (x) ");
        if !self.relations.is_empty() {
            let rels: Vec<String> = self
                .relations
                .iter()
                .map(|r| {
                    if r.coeff.is_one() {
                        self.render_monomial(&r.monomial)
                    } else {
                        format!("{}*{}", r.coeff, self.render_monomial(&r.monomial))
                    }
                })
                .collect();
            out.push_str(&format!(" / ({})", rels.join(", ")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidegree::Window;

    fn exterior_times_poly() -> Presentation {
        // E(x) (x) Z[y], x at (-3, 0), y at (0, 2)
        let mut p = Presentation::new(
            vec![Generator::exterior("x", -3, 0), Generator::polynomial("y", 0, 2)],
            CoefficientMode::Integral,
        )
        .unwrap();
        p.add_relation(Element::zero()).unwrap();
        p
    }

    #[test]
    fn exterior_square_vanishes() {
        let p = exterior_times_poly();
        let x = p.term(1, &[("x", 1)]).unwrap();
        assert!(p.multiply(&x, &x).is_zero());
    }

    #[test]
    fn koszul_sign_on_odd_pair() {
        // Two odd-degree exterior generators anticommute.
        let p = Presentation::new(
            vec![Generator::exterior("a", -1, 0), Generator::exterior("b", 0, 3)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let a = p.term(1, &[("a", 1)]).unwrap();
        let b = p.term(1, &[("b", 1)]).unwrap();
        let ab = p.multiply(&a, &b);
        let ba = p.multiply(&b, &a);
        assert_eq!(ab, ba.neg());
        // And against an even generator the sign is +.
        let p2 = exterior_times_poly();
        let x = p2.term(1, &[("x", 1)]).unwrap();
        let y = p2.term(1, &[("y", 1)]).unwrap();
        assert_eq!(p2.multiply(&x, &y), p2.multiply(&y, &x));
    }

    #[test]
    fn divided_power_law() {
        let p = Presentation::new(
            vec![Generator::divided_power("g", 0, 2)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let g1 = p.term(1, &[("g", 1)]).unwrap();
        let sq = p.multiply(&g1, &g1);
        // g_1 * g_1 = C(2,1) g_2 = 2 g_2
        assert_eq!(sq, p.term(2, &[("g", 2)]).unwrap());
        // Associativity reproduces the multinomial C(i+j+k; i, j, k).
        let g2 = p.term(1, &[("g", 2)]).unwrap();
        let left = p.multiply(&sq, &g2);
        let right = p.multiply(&g1, &p.multiply(&g1, &g2));
        assert_eq!(left, right);
        assert_eq!(left, p.term(12, &[("g", 4)]).unwrap());
    }

    #[test]
    fn laurent_units_cancel() {
        let p = Presentation::new(
            vec![Generator::laurent("t", 0, 0)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let t = p.term(1, &[("t", 1)]).unwrap();
        let t_inv = p.term(1, &[("t", -1)]).unwrap();
        assert_eq!(p.multiply(&t, &t_inv), Element::one());
    }

    #[test]
    fn truncation_and_torsion_relations() {
        let mut p = Presentation::new(
            vec![Generator::polynomial("x", -2, 0), Generator::polynomial("y", 0, 4)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let x3 = p.term(1, &[("x", 3)]).unwrap();
        p.add_relation(x3).unwrap();
        let rel = p.term(3, &[("x", 2), ("y", 1)]).unwrap();
        p.add_relation(rel).unwrap();
        // x^2 * x = 0 by truncation
        let x = p.term(1, &[("x", 1)]).unwrap();
        let x2 = p.term(1, &[("x", 2)]).unwrap();
        assert!(p.multiply(&x2, &x).is_zero());
        // 5 * x^2 y reduces mod 3 to 2 * x^2 y
        let e = p.term(5, &[("x", 2), ("y", 1)]).unwrap();
        assert_eq!(p.normal_form(&e), p.term(2, &[("x", 2), ("y", 1)]).unwrap());
        // -x^2 y is canonically 2 * x^2 y
        let e = p.term(-1, &[("x", 2), ("y", 1)]).unwrap();
        assert_eq!(p.normal_form(&e), p.term(2, &[("x", 2), ("y", 1)]).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent() {
        let mut p = exterior_times_poly();
        let rel = p.term(2, &[("x", 1), ("y", 2)]).unwrap();
        p.add_relation(rel).unwrap();
        let e = p.term(7, &[("x", 1), ("y", 2)]).unwrap();
        let once = p.normal_form(&e);
        assert_eq!(p.normal_form(&once), once);
    }

    #[test]
    fn strictly_commutative_polynomial_fails_graded_check() {
        // Z[y] with |y| odd: y*y = y^2 but graded commutativity wants
        // y^2 = -y^2.
        let p = Presentation::new(
            vec![Generator::polynomial("y", 0, 1)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let (ok, witness) = p
            .check_graded_commutative(Window::new(0, 0, 0, 3))
            .unwrap();
        assert!(!ok);
        let (a, b) = witness.unwrap();
        assert_eq!(p.render_monomial(&a), "y");
        assert_eq!(p.render_monomial(&b), "y");
        // With |y| even it passes.
        let p = Presentation::new(
            vec![Generator::polynomial("y", 0, 2)],
            CoefficientMode::Integral,
        )
        .unwrap();
        assert!(p.check_graded_commutative(Window::new(0, 0, 0, 6)).unwrap().0);
        // A lone exterior generator passes.
        let p = Presentation::new(
            vec![Generator::exterior("x", -3, 0)],
            CoefficientMode::Integral,
        )
        .unwrap();
        assert!(p.check_graded_commutative(Window::new(-3, 0, 0, 0)).unwrap().0);
    }

    #[test]
    fn tensor_renames_and_keeps_relations() {
        let mut a = Presentation::new(
            vec![Generator::polynomial("x", -2, 0)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let x2 = a.term(1, &[("x", 2)]).unwrap();
        a.add_relation(x2).unwrap();
        let b = Presentation::new(
            vec![Generator::polynomial("x", 0, 2)],
            CoefficientMode::Integral,
        )
        .unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.generators()[0].name, "x");
        assert_eq!(t.generators()[1].name, "x'");
        // Truncation survived on the first factor.
        let xx = t.term(1, &[("x", 2)]).unwrap();
        assert!(t.normal_form(&xx).is_zero());
        // Tensor with the trivial presentation is an isomorphic copy.
        let trivial = Presentation::trivial(CoefficientMode::Integral);
        let t2 = a.tensor(&trivial).unwrap();
        assert_eq!(t2.generators().len(), 1);
        assert_eq!(t2.relations().len(), 1);
    }

    #[test]
    fn associative_and_unital_on_samples() {
        let mut p = Presentation::new(
            vec![
                Generator::exterior("x", -3, 0),
                Generator::polynomial("y", 0, 2),
                Generator::divided_power("g", 0, 4),
            ],
            CoefficientMode::Integral,
        )
        .unwrap();
        let rel = p.term(2, &[("x", 1), ("y", 1)]).unwrap();
        p.add_relation(rel).unwrap();
        let samples = vec![
            p.term(1, &[("x", 1)]).unwrap(),
            p.term(3, &[("y", 2)]).unwrap(),
            p.term(1, &[("g", 1)]).unwrap(),
            p.term(-2, &[("x", 1), ("g", 2)]).unwrap(),
            p.term(1, &[("y", 1), ("g", 1)]).unwrap(),
        ];
        let one = Element::one();
        for a in &samples {
            assert_eq!(&p.multiply(a, &one), &p.normal_form(a));
            assert_eq!(&p.multiply(&one, a), &p.normal_form(a));
            for b in &samples {
                for c in &samples {
                    let left = p.multiply(&p.multiply(a, b), c);
                    let right = p.multiply(a, &p.multiply(b, c));
                    assert_eq!(left, right, "associativity failed");
                }
            }
        }
    }

    #[test]
    fn bidegree_additivity() {
        let p = exterior_times_poly();
        let a = p.term(1, &[("x", 1), ("y", 1)]).unwrap();
        let b = p.term(1, &[("y", 3)]).unwrap();
        let prod = p.multiply(&a, &b);
        let da = a.bidegree(p.degrees()).unwrap();
        let db = b.bidegree(p.degrees()).unwrap();
        assert_eq!(prod.bidegree(p.degrees()).unwrap(), da + db);
    }
}
