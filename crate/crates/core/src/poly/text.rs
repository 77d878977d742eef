//! Text form: `3*x1^105 - 2*x1^102*x2 + 7`.
//!
//! Terms are separated by `+` or `-` (ASCII or U+2212). A term is an optional
//! integer coefficient, an optional `*`, then zero or more variable factors
//! `x<k>` or `x<k>^<e>` joined by optional `*`. `x`, `y`, `z` abbreviate
//! `x1`, `x2`, `x3`. Whitespace is insignificant.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Exponent, SparsePoly};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("variable x{index} at byte {offset} out of range for {num_vars} variables")]
    VarOutOfRange { offset: usize, index: usize, num_vars: usize },
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        self.pos += len;
        (len > 0).then(|| &self.src[start..start + len])
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.into() }
    }
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

impl SparsePoly {
    /// Parses the text form over `num_vars` variables.
    pub fn parse(text: &str, num_vars: usize) -> Result<SparsePoly, ParseError> {
        let mut lx = Lexer { src: text, pos: 0 };
        let mut terms: Vec<(Exponent, BigInt)> = Vec::new();
        let mut negative = match lx.peek() {
            Some(c) if is_minus(c) => {
                lx.bump();
                true
            }
            Some('+') => {
                lx.bump();
                false
            }
            Some(_) => false,
            None => return Err(lx.syntax("empty polynomial")),
        };
        loop {
            let (exp, mut coeff) = parse_term(&mut lx, num_vars)?;
            if negative {
                coeff = -coeff;
            }
            terms.push((exp, coeff));
            match lx.peek() {
                None => break,
                Some('+') => negative = false,
                Some(c) if is_minus(c) => negative = true,
                Some(c) => return Err(lx.syntax(format!("unexpected character {c:?}"))),
            }
            lx.bump();
        }
        Ok(SparsePoly::from_terms(num_vars, terms))
    }

    /// Maximal variable index used in `text`, for inferring `num_vars`.
    pub fn max_var_index(text: &str) -> usize {
        let bytes = text.as_bytes();
        let mut best = 0;
        for (i, &b) in bytes.iter().enumerate() {
            let k = match b {
                b'x' => {
                    let digits: String =
                        text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                    digits.parse().unwrap_or(1)
                }
                b'y' => 2,
                b'z' => 3,
                _ => continue,
            };
            best = best.max(k);
        }
        best
    }
}

fn parse_term(lx: &mut Lexer<'_>, num_vars: usize) -> Result<(Exponent, BigInt), ParseError> {
    let mut exp = vec![BigUint::zero(); num_vars];
    let mut coeff = BigInt::one();
    let mut seen_anything = false;

    if let Some(d) = lx.digits() {
        coeff = d.parse().expect("digit run parses");
        seen_anything = true;
        if lx.peek() == Some('*') {
            lx.bump();
        }
    }
    loop {
        lx.skip_ws();
        let start = lx.pos;
        let index = match lx.peek() {
            Some('x') => {
                lx.bump();
                // `x` directly followed by digits names the variable index
                let save = lx.pos;
                let explicit = lx.src[save..].bytes().next().is_some_and(|b| b.is_ascii_digit());
                if explicit {
                    let d = lx.digits().expect("checked digit");
                    d.parse::<usize>().map_err(|_| ParseError::Syntax {
                        offset: save,
                        message: "variable index too large".into(),
                    })?
                } else {
                    1
                }
            }
            Some('y') => {
                lx.bump();
                2
            }
            Some('z') => {
                lx.bump();
                3
            }
            _ => break,
        };
        lx.skip_ws();
        if index == 0 || index > num_vars {
            return Err(ParseError::VarOutOfRange { offset: start, index, num_vars });
        }
        let mut power = BigUint::one();
        if lx.peek() == Some('^') {
            lx.bump();
            let at = lx.pos;
            match lx.peek() {
                Some(c) if is_minus(c) => {
                    return Err(ParseError::NegativeExponent { offset: at });
                }
                Some('(') => return Err(lx.syntax("parenthesized exponents are not supported")),
                _ => {}
            }
            power = lx
                .digits()
                .ok_or_else(|| lx.syntax("expected exponent"))?
                .parse()
                .expect("digit run parses");
        }
        exp[index - 1] += power;
        seen_anything = true;
        if lx.peek() == Some('*') {
            lx.bump();
        }
    }
    if !seen_anything {
        return Err(lx.syntax("expected a term"));
    }
    Ok((exp, coeff))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, exp: &[BigUint]) -> fmt::Result {
    let mut first = true;
    for (i, e) in exp.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if !e.is_one() {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for SparsePoly {
    /// Graded-lexicographic order, highest term first; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (exp, c)) in self.sorted_terms().into_iter().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.magnitude();
            let constant = exp.iter().all(Zero::is_zero);
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Exponent {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn grammar_examples() {
        let p = SparsePoly::parse("1 + x1 + x2", 2).unwrap();
        assert_eq!(p.term_count(), 3);
        assert_eq!(p.coeff(&e(&[0, 0])), BigInt::one());
        assert_eq!(p.coeff(&e(&[1, 0])), BigInt::one());
        assert_eq!(p.coeff(&e(&[0, 1])), BigInt::one());

        let q = SparsePoly::parse("3*x1^105 - 2*x1^102", 1).unwrap();
        assert_eq!(q.term_count(), 2);
        assert_eq!(q.coeff(&e(&[105])), BigInt::from(3));
        assert_eq!(q.coeff(&e(&[102])), BigInt::from(-2));

        assert!(SparsePoly::parse("x1 - x1", 1).unwrap().is_zero());
    }

    #[test]
    fn accepts_variants() {
        let a = SparsePoly::parse("−25 y^3879876 + x1 x2 + 2x1^2*x2", 2).unwrap();
        let b = SparsePoly::parse("-25*x2^3879876+x1*x2+2*x1^2*x2", 2).unwrap();
        assert_eq!(a, b);
        let c = SparsePoly::parse("x1*x1^2", 1).unwrap();
        assert_eq!(c, SparsePoly::parse("x1^3", 1).unwrap());
        let big = SparsePoly::parse("x1^123456789012345678901234567890", 1).unwrap();
        assert_eq!(big.degree_in(0).unwrap().to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(
            SparsePoly::parse("x1 + x3", 2),
            Err(ParseError::VarOutOfRange { offset: 5, index: 3, num_vars: 2 })
        ));
        assert!(matches!(
            SparsePoly::parse("x1^-2", 1),
            Err(ParseError::NegativeExponent { offset: 3 })
        ));
        assert!(matches!(SparsePoly::parse("x1 + + 2", 1), Err(ParseError::Syntax { .. })));
        assert!(matches!(SparsePoly::parse("", 1), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(matches!(SparsePoly::parse("3 & x1", 1), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(SparsePoly::parse("x0", 1), Err(ParseError::VarOutOfRange { .. })));
    }

    #[test]
    fn render_and_reparse() {
        let src = "x1^2*x2 - 3*x2^5 + 7 - x1";
        let p = SparsePoly::parse(src, 2).unwrap();
        assert_eq!(p.to_string(), "-3*x2^5 + x1^2*x2 - x1 + 7");
        assert_eq!(SparsePoly::parse(&p.to_string(), 2).unwrap(), p);
        assert_eq!(SparsePoly::zero(3).to_string(), "0");
        assert_eq!(SparsePoly::parse("-1", 1).unwrap().to_string(), "-1");
    }

    #[test]
    fn var_index_inference() {
        assert_eq!(SparsePoly::max_var_index("x1 + x12^3"), 12);
        assert_eq!(SparsePoly::max_var_index("1 + x + y"), 2);
        assert_eq!(SparsePoly::max_var_index("7"), 0);
    }
}
