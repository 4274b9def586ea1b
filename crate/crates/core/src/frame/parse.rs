//! Recursive-descent parser for the coefficient expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' INT)?
//! base   := NUMBER | 'x'|'y'|'z' | ('sin'|'cos'|'exp') '(' expr ')'
//!         | '(' expr ')' | '-' base
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier \"{name}\" at column {column}")]
    UnknownIdentifier { column: usize, name: String },
}

/// Chart coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Expression tree over the chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Const(f64),
    Var(Axis),
    Neg(Box<ScalarField>),
    Add(Box<ScalarField>, Box<ScalarField>),
    Sub(Box<ScalarField>, Box<ScalarField>),
    Mul(Box<ScalarField>, Box<ScalarField>),
    Div(Box<ScalarField>, Box<ScalarField>),
    Pow(Box<ScalarField>, u32),
    Sin(Box<ScalarField>),
    Cos(Box<ScalarField>),
    Exp(Box<ScalarField>),
}

pub fn parse_field(text: &str) -> Result<ScalarField, FieldParseError> {
    let mut p = Parser {
        chars: text.char_indices().peekable(),
        text,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.peek() {
        return Err(FieldParseError::Syntax {
            column: i + 1,
            message: format!("unexpected character '{}'", c),
        });
    }
    Ok(e)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(&(_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn column(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i + 1).unwrap_or(self.text.len() + 1)
    }

    fn eat(&mut self, expected: char) -> Result<(), FieldParseError> {
        self.skip_ws();
        match self.chars.peek() {
            Some(&(_, c)) if c == expected => {
                self.chars.next();
                Ok(())
            }
            _ => Err(FieldParseError::Syntax {
                column: self.column(),
                message: format!("expected '{}'", expected),
            }),
        }
    }

    fn expr(&mut self) -> Result<ScalarField, FieldParseError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some(&(_, '+')) => {
                    self.chars.next();
                    let rhs = self.term()?;
                    lhs = ScalarField::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(&(_, '-')) => {
                    self.chars.next();
                    let rhs = self.term()?;
                    lhs = ScalarField::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarField, FieldParseError> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some(&(_, '*')) => {
                    self.chars.next();
                    let rhs = self.factor()?;
                    lhs = ScalarField::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(&(_, '/')) => {
                    self.chars.next();
                    let rhs = self.factor()?;
                    lhs = ScalarField::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarField, FieldParseError> {
        let base = self.base()?;
        self.skip_ws();
        if matches!(self.chars.peek(), Some(&(_, '^'))) {
            self.chars.next();
            self.skip_ws();
            let col = self.column();
            let mut digits = String::new();
            while matches!(self.chars.peek(), Some(&(_, c)) if c.is_ascii_digit()) {
                digits.push(self.chars.next().unwrap().1);
            }
            if digits.is_empty() {
                return Err(FieldParseError::Syntax {
                    column: col,
                    message: "expected integer exponent".into(),
                });
            }
            let exp: u32 = digits.parse().map_err(|_| FieldParseError::Syntax {
                column: col,
                message: "exponent out of range".into(),
            })?;
            return Ok(ScalarField::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<ScalarField, FieldParseError> {
        self.skip_ws();
        let col = self.column();
        match self.chars.peek() {
            Some(&(_, '-')) => {
                self.chars.next();
                Ok(ScalarField::Neg(Box::new(self.base()?)))
            }
            Some(&(_, '(')) => {
                self.chars.next();
                let e = self.expr()?;
                self.eat(')')?;
                Ok(e)
            }
            Some(&(_, c)) if c.is_ascii_digit() || c == '.' => self.number(col),
            Some(&(_, c)) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while matches!(self.chars.peek(), Some(&(_, c)) if c.is_ascii_alphabetic()) {
                    name.push(self.chars.next().unwrap().1);
                }
                match name.as_str() {
                    "x" => Ok(ScalarField::Var(Axis::X)),
                    "y" => Ok(ScalarField::Var(Axis::Y)),
                    "z" => Ok(ScalarField::Var(Axis::Z)),
                    "sin" | "cos" | "exp" => {
                        self.eat('(')?;
                        let e = Box::new(self.expr()?);
                        self.eat(')')?;
                        Ok(match name.as_str() {
                            "sin" => ScalarField::Sin(e),
                            "cos" => ScalarField::Cos(e),
                            _ => ScalarField::Exp(e),
                        })
                    }
                    _ => Err(FieldParseError::UnknownIdentifier { column: col, name }),
                }
            }
            Some(&(_, c)) => Err(FieldParseError::Syntax {
                column: col,
                message: format!("unexpected character '{}'", c),
            }),
            None => Err(FieldParseError::Syntax {
                column: col,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn number(&mut self, col: usize) -> Result<ScalarField, FieldParseError> {
        let mut s = String::new();
        let mut seen_exp = false;
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() || c == '.' {
                s.push(c);
                self.chars.next();
            } else if (c == 'e' || c == 'E') && !seen_exp {
                // lookahead: only an exponent if followed by digit or sign
                let mut clone = self.chars.clone();
                clone.next();
                match clone.peek() {
                    Some(&(_, n)) if n.is_ascii_digit() || n == '+' || n == '-' => {
                        seen_exp = true;
                        s.push(c);
                        self.chars.next();
                        if let Some(&(_, n)) = self.chars.peek() {
                            if n == '+' || n == '-' {
                                s.push(n);
                                self.chars.next();
                            }
                        }
                    }
                    _ => break,
                }
            } else {
                break;
            }
        }
        let v: f64 = s.parse().map_err(|_| FieldParseError::Syntax {
            column: col,
            message: format!("invalid number \"{}\"", s),
        })?;
        Ok(ScalarField::Const(v))
    }
}

// Precedence levels for serialization: parenthesize a child whenever its
// level is below the context's.
fn level(e: &ScalarField) -> u8 {
    match e {
        ScalarField::Add(..) | ScalarField::Sub(..) => 1,
        ScalarField::Mul(..) | ScalarField::Div(..) => 2,
        ScalarField::Neg(..) => 3,
        ScalarField::Pow(..) => 4,
        _ => 5,
    }
}

fn fmt_child(e: &ScalarField, min_level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min_level {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Const(v) => write!(f, "{}", v),
            ScalarField::Var(Axis::X) => write!(f, "x"),
            ScalarField::Var(Axis::Y) => write!(f, "y"),
            ScalarField::Var(Axis::Z) => write!(f, "z"),
            ScalarField::Neg(e) => {
                write!(f, "-")?;
                fmt_child(e, 5, f)
            }
            ScalarField::Add(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " + ")?;
                fmt_child(b, 2, f)
            }
            ScalarField::Sub(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " - ")?;
                fmt_child(b, 2, f)
            }
            ScalarField::Mul(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, " * ")?;
                fmt_child(b, 3, f)
            }
            ScalarField::Div(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, " / ")?;
                fmt_child(b, 3, f)
            }
            ScalarField::Pow(a, n) => {
                fmt_child(a, 5, f)?;
                write!(f, "^{}", n)
            }
            ScalarField::Sin(e) => write!(f, "sin({})", e),
            ScalarField::Cos(e) => write!(f, "cos({})", e),
            ScalarField::Exp(e) => write!(f, "exp({})", e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_constant() {
        assert_eq!(parse_field("2").unwrap(), ScalarField::Const(2.0));
    }

    #[test]
    fn parses_mixed_expression() {
        let e = parse_field("sin(x)*z + 3").unwrap();
        // Evaluates to sin(1) * 0 + 3 = 3 at (1, 0, 0).
        let v: f64 = crate::frame::eval(&e, [1.0, 0.0, 0.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-15);
    }

    #[test]
    fn reports_syntax_error_position() {
        match parse_field("x +* y") {
            Err(FieldParseError::Syntax { column, .. }) => assert_eq!(column, 4),
            other => panic!("expected syntax error, got {:?}", other),
        }
    }

    #[test]
    fn reports_unknown_identifier() {
        assert!(matches!(
            parse_field("tan(x)"),
            Err(FieldParseError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn precedence_and_power() {
        let e = parse_field("2 + 3 * x^2").unwrap();
        let v: f64 = crate::frame::eval(&e, [2.0, 0.0, 0.0]).unwrap();
        assert!((v - 14.0).abs() < 1e-15);
    }

    #[test]
    fn roundtrip_is_structural_identity() {
        for text in [
            "2",
            "sin(x)*z + 3",
            "-(x + y) * cos(z^2)",
            "x / (y + 2) - exp(-z)",
            "1.5e-3 * x^4 + y*z",
            "-x^2",
            "x - (y - z)",
            "x - y - z",
        ] {
            let e = parse_field(text).unwrap();
            let reparsed = parse_field(&e.to_string()).unwrap();
            assert_eq!(e, reparsed, "text: {} serialized: {}", text, e);
        }
    }
}
