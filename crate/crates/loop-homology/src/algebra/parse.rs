//! Text format for presentations.
//!
//! One generator per line `name (p,q) kind`, then an optional `relations:`
//! section with one integer combination of monomials per line in
//! `x^a*y^b` syntax:
//!
//! ```text
//! # loop homology candidate
//! x (-2,0) polynomial
//! y (0,4) polynomial
//! w (-2,1) exterior
//! relations:
//! x^3
//! 3*x^2*y
//! w*x^2
//! ```

use super::element::{Element, Monomial};
use super::presentation::Presentation;
use super::{AlgebraError, CoefficientMode, Generator, GeneratorKind};
use crate::bidegree::Bidegree;
use num_bigint::BigInt;
use num_traits::One;

/// Parse the presentation literal format.
pub fn parse_presentation(text: &str) -> Result<Presentation, AlgebraError> {
    let mut gens = Vec::new();
    let mut relation_lines = Vec::new();
    let mut in_relations = false;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.eq_ignore_ascii_case("relations:") {
            in_relations = true;
            continue;
        }
        if in_relations {
            relation_lines.push(line.to_string());
        } else {
            gens.push(parse_generator_line(line)?);
        }
    }
    let mut pres = Presentation::new(gens, CoefficientMode::Integral)?;
    for line in relation_lines {
        let rel = parse_element(&pres, &line)?;
        pres.add_relation(rel)?;
    }
    Ok(pres)
}

fn parse_generator_line(line: &str) -> Result<Generator, AlgebraError> {
    let err = |msg: &str| AlgebraError::Parse(format!("{msg}: `{line}`"));
    let open = line.find('(').ok_or_else(|| err("expected `name (p,q) kind`"))?;
    let close = line.find(')').ok_or_else(|| err("missing `)`"))?;
    if close < open {
        return Err(err("malformed bidegree"));
    }
    let name = line[..open].trim().to_string();
    if name.is_empty() {
        return Err(err("missing generator name"));
    }
    let inner = &line[open + 1..close];
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(err("bidegree must be `(p,q)`"));
    }
    let p: i64 = parts[0].parse().map_err(|_| err("bad p"))?;
    let q: i64 = parts[1].parse().map_err(|_| err("bad q"))?;
    let kind = match line[close + 1..].trim() {
        "exterior" => GeneratorKind::Exterior,
        "polynomial" => GeneratorKind::Polynomial,
        "divided-power" => GeneratorKind::DividedPower,
        "laurent" => GeneratorKind::Laurent,
        other => {
            return Err(err(&format!(
                "unknown kind `{other}` (expected exterior|polynomial|divided-power|laurent)"
            )))
        }
    };
    Ok(Generator::new(name, Bidegree::new(p, q), kind))
}

/// Parse an integer combination of monomials, e.g. `2*x^2*y - y^3 + 4`.
pub fn parse_element(pres: &Presentation, text: &str) -> Result<Element, AlgebraError> {
    let tokens = tokenize(text)?;
    let mut out = Element::zero();
    let mut pos = 0;
    let mut sign = BigInt::one();
    let mut first = true;
    while pos < tokens.len() {
        if !first {
            match &tokens[pos] {
                Token::Plus => {
                    sign = BigInt::one();
                    pos += 1;
                }
                Token::Minus => {
                    sign = -BigInt::one();
                    pos += 1;
                }
                _ => {
                    return Err(AlgebraError::Parse(format!(
                        "expected `+` or `-` between terms in `{text}`"
                    )))
                }
            }
        } else if matches!(tokens[pos], Token::Minus) {
            sign = -BigInt::one();
            pos += 1;
        } else if matches!(tokens[pos], Token::Plus) {
            pos += 1;
        }
        first = false;
        let (coeff, mono, next) = parse_term(pres, &tokens, pos, text)?;
        out.add_term(mono, coeff * &sign);
        sign = BigInt::one();
        pos = next;
    }
    Ok(out)
}

fn parse_term(
    pres: &Presentation,
    tokens: &[Token],
    mut pos: usize,
    text: &str,
) -> Result<(BigInt, Monomial, usize), AlgebraError> {
    let err = |msg: &str| AlgebraError::Parse(format!("{msg} in `{text}`"));
    let mut coeff = BigInt::one();
    let mut pairs: Vec<(usize, i64)> = Vec::new();
    loop {
        match tokens.get(pos) {
            Some(Token::Int(n)) => {
                coeff *= n;
                pos += 1;
            }
            Some(Token::Ident(name)) => {
                let g = pres.gen_index(name)?;
                let mut exp = 1i64;
                if let Some(Token::Caret) = tokens.get(pos + 1) {
                    match tokens.get(pos + 2) {
                        Some(Token::Int(n)) => {
                            exp = i64::try_from(n).map_err(|_| err("exponent too large"))?;
                            pos += 3;
                        }
                        Some(Token::Minus) => match tokens.get(pos + 3) {
                            Some(Token::Int(n)) => {
                                exp = -i64::try_from(n).map_err(|_| err("exponent too large"))?;
                                pos += 4;
                            }
                            _ => return Err(err("expected integer exponent")),
                        },
                        _ => return Err(err("expected integer exponent")),
                    }
                } else {
                    pos += 1;
                }
                pairs.push((g, exp));
            }
            _ => return Err(err("expected a term")),
        }
        if let Some(Token::Star) = tokens.get(pos) {
            pos += 1;
            continue;
        }
        break;
    }
    let m = Monomial::from_pairs(pairs);
    pres.validate_monomial(&m)?;
    Ok((coeff, m, pos))
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Star,
    Caret,
    Plus,
    Minus,
}

fn tokenize(text: &str) -> Result<Vec<Token>, AlgebraError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(s.parse().expect("digits parse")));
            }
            _ => {
                if c.is_whitespace() {
                    chars.next();
                    continue;
                }
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || "*^+-()".contains(d) {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                if s.is_empty() {
                    return Err(AlgebraError::Parse(format!(
                        "unexpected character `{c}` in `{text}`"
                    )));
                }
                out.push(Token::Ident(s));
            }
        }
    }
    Ok(out)
}
