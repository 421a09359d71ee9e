//! Expression syntax shared by every command.
//!
//! ```text
//! tensor  := sum ('|' sum)*
//! sum     := ['-'] term (('+' | '-') term)*
//! term    := power (('*' | '/') power)*
//! power   := primary ['^' exponent]
//! exponent:= ['-'] nat | '(' ['-'] nat ['/' nat] ')'
//! primary := nat | 'q' | 'E' nat | 'F' nat | 'K[' int (',' int)* ']'
//!          | 'u' nat '_' nat | '(' tensor ')'
//! ```
//!
//! `⊗` is accepted for `|`, and `u<d><d>` (two single digits) for `u<d>_<d>`.
//! Parentheses are kept in the tree, so printing adds them back exactly where
//! a child would otherwise regroup.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigUint),
    Q,
    /// Chevalley generators, 1-based as written.
    E(usize),
    F(usize),
    /// K_λ with λ in fundamental-weight coordinates.
    K(Vec<i64>),
    /// Matrix coefficient u^i_j, 1-based.
    U(usize, usize),
    /// Signed terms; a single term is always negated.
    Sum(Vec<(bool, Expr)>),
    /// Factors with a division flag; at least two, the first never divided.
    Product(Vec<(bool, Expr)>),
    Pow(Box<Expr>, Ratio<i64>),
    /// At least two legs.
    Tensor(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.tensor()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> ParseError {
        ParseError { column: self.pos + 1, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    /// Next non-space character, without consuming it.
    fn look(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.look() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.found(&format!("'{}'", c)))
        }
    }

    fn found(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(c) => self.error(&format!("expected {}, found '{}'", what, c)),
            None => self.error(&format!("expected {}, found end of input", what)),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn nat(&mut self, what: &str) -> Result<u64, ParseError> {
        let at = self.pos;
        let d = self.digits().ok_or_else(|| self.found(what))?;
        d.parse().map_err(|_| ParseError { column: at + 1, message: format!("{} is too large", what) })
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        Ok(self.nat("generator index")? as usize)
    }

    fn signed(&mut self, what: &str) -> Result<i64, ParseError> {
        self.skip_ws();
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = self.nat(what)? as i64;
        Ok(if neg { -n } else { n })
    }

    fn tensor(&mut self) -> Result<Expr, ParseError> {
        let first = self.sum()?;
        let mut legs = vec![first];
        while matches!(self.look(), Some('|') | Some('⊗')) {
            self.pos += 1;
            legs.push(self.sum()?);
        }
        Ok(if legs.len() == 1 { legs.pop().unwrap() } else { Expr::Tensor(legs) })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let lead = self.look() == Some('-');
        if lead {
            self.pos += 1;
        }
        terms.push((lead, self.term()?));
        loop {
            match self.look() {
                Some('+') => {
                    self.pos += 1;
                    terms.push((false, self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![(false, self.power()?)];
        loop {
            match self.look() {
                Some('*') => {
                    self.pos += 1;
                    factors.push((false, self.power()?));
                }
                Some('/') => {
                    self.pos += 1;
                    factors.push((true, self.power()?));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap().1 } else { Expr::Product(factors) })
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.look() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = if self.look() == Some('(') {
            self.pos += 1;
            let num = self.signed("exponent")?;
            let den = if self.look() == Some('/') {
                self.pos += 1;
                self.skip_ws();
                let at = self.pos;
                let d = self.nat("denominator")? as i64;
                if d == 0 {
                    return Err(ParseError { column: at + 1, message: "zero denominator in exponent".into() });
                }
                d
            } else {
                1
            };
            self.expect(')')?;
            Ratio::new(num, den)
        } else {
            Ratio::from_integer(self.signed("exponent")?)
        };
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(c) = self.look() else { return Err(self.found("an operand")) };
        match c {
            '0'..='9' => {
                let d = self.digits().unwrap();
                Ok(Expr::Num(d.parse().unwrap()))
            }
            'q' => {
                self.pos += 1;
                Ok(Expr::Q)
            }
            'E' | 'F' => {
                self.pos += 1;
                let i = self.index()?;
                Ok(if c == 'E' { Expr::E(i) } else { Expr::F(i) })
            }
            'K' => {
                self.pos += 1;
                if self.peek() != Some('[') {
                    return Err(self.found("'[' after K"));
                }
                self.pos += 1;
                let mut w = vec![self.signed("weight coordinate")?];
                while self.look() == Some(',') {
                    self.pos += 1;
                    w.push(self.signed("weight coordinate")?);
                }
                self.expect(']')?;
                Ok(Expr::K(w))
            }
            'u' => {
                self.pos += 1;
                let at = self.pos;
                let d = self.digits().ok_or_else(|| self.found("row index"))?;
                if self.peek() == Some('_') {
                    self.pos += 1;
                    let j = self.nat("column index")? as usize;
                    let i = d.parse().map_err(|_| ParseError { column: at + 1, message: "row index too large".into() })?;
                    Ok(Expr::U(i, j))
                } else if d.len() == 2 {
                    let b = d.as_bytes();
                    Ok(Expr::U((b[0] - b'0') as usize, (b[1] - b'0') as usize))
                } else {
                    Err(self.found("'_' between the indices"))
                }
            }
            '(' => {
                self.pos += 1;
                let e = self.tensor()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.found("an operand")),
        }
    }
}

fn is_atom(e: &Expr) -> bool {
    matches!(e, Expr::Num(_) | Expr::Q | Expr::E(_) | Expr::F(_) | Expr::K(_) | Expr::U(..))
}

fn paren(e: &Expr, need: bool) -> String {
    if need {
        format!("({})", e)
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{}", n),
            Expr::Q => f.write_str("q"),
            Expr::E(i) => write!(f, "E{}", i),
            Expr::F(i) => write!(f, "F{}", i),
            Expr::K(w) => {
                let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "K[{}]", parts.join(","))
            }
            Expr::U(i, j) => write!(f, "u{}_{}", i, j),
            Expr::Sum(terms) => {
                for (k, (neg, t)) in terms.iter().enumerate() {
                    let s = paren(t, matches!(t, Expr::Sum(_) | Expr::Tensor(_)));
                    match (k, neg) {
                        (0, false) => f.write_str(&s)?,
                        (0, true) => write!(f, "-{}", s)?,
                        (_, false) => write!(f, " + {}", s)?,
                        (_, true) => write!(f, " - {}", s)?,
                    }
                }
                Ok(())
            }
            Expr::Product(factors) => {
                for (k, (div, x)) in factors.iter().enumerate() {
                    if k > 0 {
                        f.write_str(if *div { "/" } else { "*" })?;
                    }
                    f.write_str(&paren(x, matches!(x, Expr::Sum(_) | Expr::Product(_) | Expr::Tensor(_))))?;
                }
                Ok(())
            }
            Expr::Pow(b, e) => {
                f.write_str(&paren(b, !is_atom(b)))?;
                if e.is_integer() {
                    write!(f, "^{}", e.to_integer())
                } else {
                    write!(f, "^({}/{})", e.numer(), e.denom())
                }
            }
            Expr::Tensor(legs) => {
                let parts: Vec<String> = legs.iter().map(|l| paren(l, matches!(l, Expr::Tensor(_)))).collect();
                f.write_str(&parts.join(" | "))
            }
        }
    }
}

impl Expr {
    /// Integer literal, for building trees in code.
    pub fn int(n: u64) -> Expr {
        Expr::Num(BigUint::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_round_trips() {
        for s in ["E1*F1", "K[1,0]^2", "q^-2*E1 - (q - q^-1)*F2*E1", "E1 | F1 + K[-1]", "u1_2*u2_1", "q^(1/3)", "(E1 | F1)*(F1 | K[1])"] {
            let e = parse(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn parenthesized_products_survive() {
        let e = parse("(E1*E2)*F1").unwrap();
        assert_eq!(e.to_string(), "(E1*E2)*F1");
        assert_ne!(e, parse("E1*E2*F1").unwrap());
    }

    #[test]
    fn error_columns() {
        let err = parse("E*").unwrap_err();
        assert_eq!(err.column, 2);
        assert_eq!(parse("E1 +").unwrap_err().column, 5);
        assert_eq!(parse("K[1,]").unwrap_err().column, 5);
        assert_eq!(parse("(E1").unwrap_err().column, 4);
        assert_eq!(parse("E1 F1").unwrap_err().column, 4);
        assert_eq!(parse("").unwrap_err().column, 1);
    }

    #[test]
    fn aliases() {
        assert_eq!(parse("u12").unwrap(), Expr::U(1, 2));
        assert_eq!(parse("E1 ⊗ F1").unwrap(), parse("E1 | F1").unwrap());
        assert!(parse("u123").is_err());
    }
}
