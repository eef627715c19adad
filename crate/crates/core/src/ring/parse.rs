//! Expression grammar for group-ring elements and matrices.
//!
//! ```text
//! matrix   := '[' row (',' row)* ']'
//! row      := '[' expr (',' expr)* ']'
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := coef ['*'] monomial | coef | monomial
//! coef     := number | '(' signed-number ',' signed-number ')'
//! monomial := factor (['*'] factor)*
//! factor   := generator ['^' signed-integer]
//! ```
//!
//! Generators are `g` (single-generator abelian groups, `t` is accepted as an
//! alias), `g1 .. gN` (abelian, free generators first) and `a`, `b`, `c`
//! (Heisenberg). Whitespace is insignificant.

use std::fmt;

use num_complex::Complex64;

use super::{GroupRingElement, GroupRingMatrix};
use crate::group::{AbelianElement, GroupElement, GroupSpec, HeisenbergElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: expected {}, found {}",
            self.position,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

pub fn parse_element(text: &str, group: &GroupSpec) -> Result<GroupRingElement, ParseError> {
    let mut p = Parser::new(text, group);
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

pub fn parse_matrix(text: &str, group: &GroupSpec) -> Result<GroupRingMatrix, ParseError> {
    let mut p = Parser::new(text, group);
    let start = p.pos;
    p.expect('[')?;
    let mut rows: Vec<Vec<GroupRingElement>> = Vec::new();
    loop {
        p.expect('[')?;
        let mut row = vec![p.expr()?];
        while p.eat(',') {
            row.push(p.expr()?);
        }
        p.expect(']')?;
        rows.push(row);
        if !p.eat(',') {
            break;
        }
    }
    p.expect(']')?;
    p.end()?;
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(ParseError {
            position: start,
            expected: vec![format!("{n} entries per row")],
            found: format!("a row with {} entries", bad.len()),
        });
    }
    let entries = rows.into_iter().flatten().collect();
    Ok(GroupRingMatrix::new(group.clone(), n, entries).expect("entries parsed over one group"))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    group: &'a GroupSpec,
}

impl<'a> Parser<'a> {
    fn new(text: &str, group: &'a GroupSpec) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            group,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        let found = self.found();
        ParseError {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_none() {
            Ok(())
        } else {
            Err(self.error(&["end of input", "'+'", "'-'"]))
        }
    }

    fn generator_names(&self) -> &'static [&'static str] {
        match self.group {
            GroupSpec::Abelian(s) if s.num_generators() == 1 => &["g", "t", "g1"],
            GroupSpec::Abelian(_) => &["g1..gN"],
            GroupSpec::Heisenberg(_) => &["a", "b", "c"],
        }
    }

    fn expected_term(&self) -> Vec<&'static str> {
        let mut v = vec!["number", "'('"];
        v.extend_from_slice(self.generator_names());
        v
    }

    fn expr(&mut self) -> Result<GroupRingElement, ParseError> {
        let mut acc = GroupRingElement::zero(self.group.clone());
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (coef, g) = self.term()?;
            let term = GroupRingElement::monomial(self.group.clone(), g, coef * sign)
                .expect("parsed monomial belongs to the group");
            acc = acc.add(&term).expect("same group");
            sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                break;
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<(Complex64, GroupElement), ParseError> {
        let coef = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => Some(Complex64::new(self.number()?, 0.0)),
            Some('(') => Some(self.complex()?),
            _ => None,
        };
        let has_star = coef.is_some() && self.eat('*');
        let starts_generator = self.peek().is_some_and(|c| c.is_ascii_alphabetic());
        let mono = if starts_generator {
            self.monomial()?
        } else if coef.is_none() || has_star {
            let expected = if has_star {
                self.generator_names().to_vec()
            } else {
                self.expected_term()
            };
            return Err(self.error(&expected));
        } else {
            self.group.identity()
        };
        Ok((coef.unwrap_or(Complex64::new(1.0, 0.0)), mono))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos > s
        };
        let mut any = digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            any |= digits(self);
        }
        if !any {
            self.pos = start;
            return Err(self.error(&["number"]));
        }
        if matches!(self.chars.get(self.pos), Some('e') | Some('E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+') | Some('-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map_err(|_| ParseError {
            position: start,
            expected: vec!["number".into()],
            found: format!("'{text}'"),
        })
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        if self.eat('-') {
            Ok(-self.number()?)
        } else {
            self.eat('+');
            self.number()
        }
    }

    fn complex(&mut self) -> Result<Complex64, ParseError> {
        self.expect('(')?;
        let re = self.signed_number()?;
        self.expect(',')?;
        let im = self.signed_number()?;
        self.expect(')')?;
        Ok(Complex64::new(re, im))
    }

    fn signed_integer(&mut self) -> Result<i64, ParseError> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(&["integer exponent"]));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let v: i64 = text.parse().map_err(|_| ParseError {
            position: start,
            expected: vec!["integer exponent".into()],
            found: format!("'{text}'"),
        })?;
        Ok(if negative { -v } else { v })
    }

    fn monomial(&mut self) -> Result<GroupElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let star = self.eat('*');
            if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                let f = self.factor()?;
                acc = acc.multiply(&f).expect("same group");
            } else if star {
                return Err(self.error(self.generator_names()));
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GroupElement, ParseError> {
        self.skip_ws();
        let generator = self.generator()?;
        let exponent = if self.eat('^') {
            self.signed_integer()?
        } else {
            1
        };
        Ok(match (self.group, generator) {
            (GroupSpec::Abelian(spec), j) => {
                let mut exps = vec![0i64; spec.num_generators()];
                exps[j] = exponent;
                let (free, torsion) = exps.split_at(spec.rank());
                GroupElement::Abelian(
                    AbelianElement::new(spec.clone(), free.to_vec(), torsion.to_vec())
                        .expect("sizes match spec"),
                )
            }
            (GroupSpec::Heisenberg(m), j) => {
                let base = match j {
                    0 => HeisenbergElement::a(*m),
                    1 => HeisenbergElement::b(*m),
                    _ => HeisenbergElement::c(*m),
                };
                GroupElement::Heisenberg(base.pow(exponent))
            }
        })
    }

    /// Returns the generator index.
    fn generator(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let c = self.chars.get(self.pos).copied();
        match (self.group, c) {
            (GroupSpec::Heisenberg(_), Some(ch @ ('a' | 'b' | 'c'))) => {
                self.pos += 1;
                Ok((ch as u8 - b'a') as usize)
            }
            (GroupSpec::Abelian(spec), Some(ch @ ('g' | 't'))) => {
                self.pos += 1;
                let dstart = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n = spec.num_generators();
                if self.pos == dstart {
                    if n == 1 {
                        return Ok(0);
                    }
                } else if ch == 'g' {
                    let text: String = self.chars[dstart..self.pos].iter().collect();
                    if let Ok(j) = text.parse::<usize>() {
                        if (1..=n).contains(&j) {
                            return Ok(j - 1);
                        }
                    }
                }
                self.pos = start;
                let found = self.chars[start..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric())
                    .collect::<String>();
                Err(ParseError {
                    position: start,
                    expected: self.generator_names().iter().map(|s| s.to_string()).collect(),
                    found: format!("'{found}'"),
                })
            }
            _ => Err(self.error(self.generator_names())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbelianGroupSpec;

    #[test]
    fn intro_entry() {
        let z = GroupSpec::integers();
        let u = parse_element("g^2 + 3*g", &z).unwrap();
        assert_eq!(u.support_len(), 2);
        assert_eq!(parse_element("g^2+3g", &z).unwrap(), u);
        assert_eq!(parse_element("  g ^ 2 +   3 * g ", &z).unwrap(), u);
    }

    #[test]
    fn heisenberg_a_minus_b() {
        let h = GroupSpec::heisenberg();
        let u = parse_element("a - b", &h).unwrap();
        let coefs: Vec<f64> = u.terms().map(|(_, c)| c.re).collect();
        assert_eq!(u.support_len(), 2);
        assert!(coefs.contains(&1.0) && coefs.contains(&-1.0));
    }

    #[test]
    fn intro_matrix() {
        let z = GroupSpec::integers();
        let m = parse_matrix("[[g^2+3*g, 4],[g^3, -g^4+g]]", &z).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.get(0, 1), &parse_element("4", &z).unwrap());
        assert_eq!(m.get(1, 1), &parse_element("g - g^4", &z).unwrap());
    }

    #[test]
    fn complex_and_float_literals() {
        let h = GroupSpec::heisenberg();
        let u = parse_element("(2,-1.5)*a*b^-2 + 0.25 + 1e-3c", &h).unwrap();
        assert_eq!(u.support_len(), 3);
        assert_eq!(u.trace(), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn multi_generator_abelian() {
        let spec = AbelianGroupSpec::new(2, vec![3]).unwrap();
        let g = GroupSpec::abelian(spec);
        let u = parse_element("g1*g2^-1 + 2*g3^4", &g).unwrap();
        assert_eq!(u.support_len(), 2);
        let err = parse_element("g4", &g).unwrap_err();
        assert_eq!(err.position, 0);
        assert!(parse_element("g", &g).is_err());
    }

    #[test]
    fn error_positions() {
        let z = GroupSpec::integers();
        let err = parse_element("g + * 2", &z).unwrap_err();
        assert_eq!(err.position, 4);
        assert!(err.expected.contains(&"number".to_string()));

        let err = parse_element("g^", &z).unwrap_err();
        assert_eq!(err.position, 2);
        assert_eq!(err.found, "end of input");

        let err = parse_element("a", &z).unwrap_err();
        assert_eq!(err.position, 0);

        let err = parse_matrix("[[1, 2],[3]]", &z).unwrap_err();
        assert!(err.found.contains("1 entries"));

        let err = parse_element("3*", &z).unwrap_err();
        assert_eq!(err.position, 2);
    }
}
