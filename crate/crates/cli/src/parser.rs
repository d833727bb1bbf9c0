//! Recursive descent parser for the function expression language.
//!
//! ```text
//! spec   := sum ("@[" rational "," rational "]")?
//! sum    := term ("+" term)*
//! term   := rational "*" term | atom
//! atom   := "dirichlet" | "thomae"
//!         | "poly(" rational ("," rational)* ")"
//!         | "step(" [break ("," break)*] ":" rational ("," rational)* ")"
//!         | "indicator(" rational "," rational ")"
//!         | "abs(" sum ")" | "(" sum ")"
//! break  := "<"? rational
//! ```
//!
//! A `<` before a step breakpoint assigns the value there to the piece on
//! its left. Whitespace between tokens is ignored.

use std::fmt;

use darboux_core::{Domain, FuncSpec, Kind, Owner, Polynomial, PrimitiveSpec, Rational, StepFn};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}", self.offset)?;
        if let Some(m) = &self.message {
            write!(f, ": {m}")?;
        }
        if !self.expected.is_empty() {
            let list: Vec<String> = self.expected.iter().map(|e| format!("{e:?}")).collect();
            write!(f, " (expected {})", list.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

const KEYWORDS: [&str; 7] = [
    "dirichlet",
    "thomae",
    "poly(",
    "step(",
    "indicator(",
    "abs(",
    "(",
];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&mut self) -> &'a str {
        self.skip_ws();
        &self.src[self.pos..]
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: None,
        })
    }

    fn invalid<T>(&self, at: usize, message: String) -> Result<T, ParseError> {
        Err(ParseError {
            offset: at,
            expected: vec![],
            message: Some(message),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.fail(&[token])
        }
    }

    fn at_rational(&mut self) -> bool {
        self.rest()
            .starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '.')
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '-' | '.' | '/')))
            .unwrap_or(rest.len());
        let text = &rest[..len];
        match text.parse::<Rational>() {
            Ok(r) if len > 0 => {
                self.pos += len;
                Ok(r)
            }
            _ => self.fail(&["rational"]),
        }
    }

    /// `rational ("," rational)*` up to, not including, `close`.
    fn rational_list(&mut self, close: &str) -> Result<Vec<Rational>, ParseError> {
        let mut out = vec![self.rational()?];
        loop {
            if self.eat(",") {
                out.push(self.rational()?);
            } else if self.rest().starts_with(close) {
                return Ok(out);
            } else {
                return self.fail(&[close, ","]);
            }
        }
    }

    fn sum(&mut self) -> Result<Kind, ParseError> {
        let mut acc = self.term()?;
        while self.eat("+") {
            let rhs = self.term()?;
            acc = Kind::Sum(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Kind, ParseError> {
        if self.at_rational() {
            let c = self.rational()?;
            self.expect("*")?;
            return Ok(Kind::Scale(c, Box::new(self.term()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Kind, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("dirichlet") {
            Ok(Kind::Dirichlet)
        } else if self.eat("thomae") {
            Ok(Kind::Thomae)
        } else if self.eat("poly(") {
            let coeffs = self.rational_list(")")?;
            self.expect(")")?;
            Ok(Kind::Polynomial(Polynomial::new(coeffs)))
        } else if self.eat("step(") {
            self.step(start)
        } else if self.eat("indicator(") {
            let lo = self.rational()?;
            self.expect(",")?;
            let hi = self.rational()?;
            self.expect(")")?;
            if lo > hi {
                return self.invalid(start, format!("indicator of empty set [{lo}, {hi}]"));
            }
            Ok(Kind::Indicator { lo, hi })
        } else if self.eat("abs(") {
            let k = self.sum()?;
            self.expect(")")?;
            Ok(Kind::Abs(Box::new(k)))
        } else if self.eat("(") {
            let k = self.sum()?;
            self.expect(")")?;
            Ok(k)
        } else {
            let mut expected = KEYWORDS.to_vec();
            expected.push("rational");
            self.fail(&expected)
        }
    }

    fn step(&mut self, start: usize) -> Result<Kind, ParseError> {
        let mut breaks = Vec::new();
        let mut owners = Vec::new();
        if !self.eat(":") {
            loop {
                let owner = if self.eat("<") {
                    Owner::Left
                } else {
                    Owner::Right
                };
                breaks.push(self.rational()?);
                owners.push(owner);
                if self.eat(",") {
                    continue;
                }
                if self.eat(":") {
                    break;
                }
                return self.fail(&[":", ","]);
            }
        }
        let values = self.rational_list(")")?;
        self.expect(")")?;
        match StepFn::with_owners(breaks, values, owners) {
            Ok(s) => Ok(Kind::Step(s)),
            Err(e) => self.invalid(start, e.to_string()),
        }
    }

    fn domain(&mut self) -> Result<Domain, ParseError> {
        if !self.eat("@[") {
            return Ok(Domain::unit());
        }
        let start = self.pos;
        let lo = self.rational()?;
        self.expect(",")?;
        let hi = self.rational()?;
        self.expect("]")?;
        Domain::new(lo, hi).or_else(|e| self.invalid(start, e.to_string()))
    }

    fn finish(&mut self, expected: &[&str]) -> Result<(), ParseError> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            self.fail(expected)
        }
    }
}

/// Parses a function expression such as `"poly(0,2)@[0,1]"`.
pub fn parse_funcspec(text: &str) -> Result<FuncSpec, ParseError> {
    let mut p = Parser::new(text);
    if p.rest().is_empty() {
        return p.fail(&KEYWORDS);
    }
    let kind = p.sum()?;
    let domain = p.domain()?;
    p.finish(&["+", "@[", "end of input"])?;
    Ok(FuncSpec::new(kind, domain))
}

/// Parses a primitive: `linear:λ`, `lower`, `upper` (the indefinite lower or
/// upper integral of `f`), or a closed-form function expression.
pub fn parse_primitive(text: &str, f: &FuncSpec) -> Result<PrimitiveSpec, ParseError> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    if t.starts_with("linear:") {
        let mut p = Parser::new(text);
        p.pos = lead + "linear:".len();
        let l = p.rational()?;
        p.finish(&["end of input"])?;
        return Ok(PrimitiveSpec::Linear(l));
    }
    match t {
        "lower" => Ok(PrimitiveSpec::lower_of(f)),
        "upper" => Ok(PrimitiveSpec::upper_of(f)),
        _ => parse_funcspec(text).map(PrimitiveSpec::ClosedForm),
    }
}
