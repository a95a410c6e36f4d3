//! Pratt parser for the expression grammar
//!
//! ```text
//! expr    := expr ('+' | '-' | '*' | '/') expr | '-' expr | '+' expr | atom ('^' power)?
//! power   := INT ('^' power)?
//! atom    := INT | VAR | 'y'k | '(' expr ')'
//! ```
//!
//! with the usual precedence (`^` binds tightest and associates to the right,
//! unary signs bind tighter than `*` and `/`). Expressions are evaluated while
//! parsing into fractions of polynomials in `y1..yn` over `Q(x)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactcore::RatFunc;
use crate::vfields::MvPoly;

/// Largest accepted value of a literal exponent.
pub const MAX_EXPONENT: u32 = 256;
/// Largest accepted combined degree (in `x` and `y`) of a power.
pub const MAX_POWER_DEGREE: u64 = 1024;
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((Tok::Int(v), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(syntax(start, "unexpected character"));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

/// `num / den` with both parts polynomial in `y`. The denominator is kept equal
/// to one whenever it does not involve `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction {
    pub num: MvPoly,
    pub den: MvPoly,
}

impl Fraction {
    fn poly(num: MvPoly) -> Self {
        let n = num.nvars();
        Fraction {
            num,
            den: MvPoly::one(n),
        }
    }

    fn has_trivial_den(&self) -> bool {
        self.den == MvPoly::one(self.den.nvars())
    }

    fn normalize(mut self) -> Self {
        if self.den.is_y_free() {
            let c = self.den.constant_term();
            if !c.is_one() {
                let inv = c.recip().expect("nonzero denominator");
                self.num = self.num.scale(&inv);
                self.den = MvPoly::one(self.den.nvars());
            }
        }
        self
    }

    fn add(&self, rhs: &Fraction, negate: bool) -> Fraction {
        let rnum = if negate { rhs.num.neg() } else { rhs.num.clone() };
        if self.den == rhs.den {
            return Fraction {
                num: self.num.add(&rnum),
                den: self.den.clone(),
            };
        }
        Fraction {
            num: self.num.mul(&rhs.den).add(&rnum.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
    }

    fn mul(&self, rhs: &Fraction) -> Fraction {
        Fraction {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        }
        .normalize()
    }

    /// Combined degree used to bound powers.
    fn size(&self) -> u64 {
        [&self.num, &self.den]
            .iter()
            .flat_map(|p| p.terms())
            .map(|(e, c)| {
                let y: u64 = e.iter().map(|&a| a as u64).sum();
                y + c.num().deg().max(c.den().deg()) as u64
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct Grammar<'a> {
    pub var: &'a str,
    /// Number of fiber variables `y1..yn` accepted; zero for plain rational functions.
    pub nvars: usize,
    /// Accept denominators depending on `y` (needed for Maclaurin expansion).
    pub allow_fiber_denominator: bool,
}

struct Parser<'g> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    grammar: &'g Grammar<'g>,
    depth: usize,
}

pub fn parse_fraction(text: &str, grammar: &Grammar<'_>) -> Result<Fraction> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        grammar,
        depth: 0,
    };
    let v = p.expr(0)?;
    let (tok, at) = p.peek();
    if *tok != Tok::End {
        return Err(syntax(at, "unexpected token after expression"));
    }
    Ok(v)
}

/// Parse a rational function of `var` alone.
pub fn parse_ratfunc_in(text: &str, var: &str) -> Result<RatFunc> {
    let g = Grammar {
        var,
        nvars: 0,
        allow_fiber_denominator: false,
    };
    Ok(parse_fraction(text, &g)?.num.constant_term())
}

/// Parse a polynomial in `y1..yn` with coefficients in `Q(var)`.
pub fn parse_mvpoly(text: &str, var: &str, nvars: usize) -> Result<MvPoly> {
    let g = Grammar {
        var,
        nvars,
        allow_fiber_denominator: false,
    };
    Ok(parse_fraction(text, &g)?.num)
}

impl Parser<'_> {
    fn peek(&self) -> (&Tok, usize) {
        let (t, at) = &self.toks[self.pos];
        (t, *at)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn nvars(&self) -> usize {
        self.grammar.nvars
    }

    fn expr(&mut self, min_bp: u8) -> Result<Fraction> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let (_, at) = self.peek();
            return Err(syntax(at, "expression nested too deeply"));
        }
        let mut lhs = self.prefix()?;
        loop {
            let (tok, at) = self.peek();
            let (l_bp, r_bp) = match tok {
                Tok::Plus | Tok::Minus => (10, 11),
                Tok::Star | Tok::Slash => (20, 21),
                Tok::Caret => (40, 0),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            let (op, _) = self.bump();
            if op == Tok::Caret {
                let e = self.power()?;
                lhs = self.raise(lhs, e, at)?;
                continue;
            }
            let rhs_at = self.peek().1;
            let rhs = self.expr(r_bp)?;
            lhs = match op {
                Tok::Plus => lhs.add(&rhs, false),
                Tok::Minus => lhs.add(&rhs, true),
                Tok::Star => lhs.mul(&rhs),
                Tok::Slash => self.divide(lhs, rhs, rhs_at)?,
                _ => unreachable!(),
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Fraction> {
        let (tok, at) = self.bump();
        let n = self.nvars();
        match tok {
            Tok::Int(v) => Ok(Fraction::poly(MvPoly::constant(
                n,
                RatFunc::constant(BigRational::from_integer(v)),
            ))),
            Tok::Ident(name) => self.ident(&name, at),
            Tok::Minus | Tok::Plus => {
                // unary sign: binds tighter than '*' but looser than '^'
                let v = self.expr(30)?;
                Ok(if tok == Tok::Minus {
                    Fraction {
                        num: v.num.neg(),
                        den: v.den,
                    }
                } else {
                    v
                })
            }
            Tok::LParen => {
                let v = self.expr(0)?;
                let (close, at) = self.bump();
                if close != Tok::RParen {
                    return Err(syntax(at, "expected ')'"));
                }
                Ok(v)
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            _ => Err(syntax(at, "expected a number, variable or '('")),
        }
    }

    fn ident(&self, name: &str, at: usize) -> Result<Fraction> {
        let n = self.nvars();
        if name == self.grammar.var {
            return Ok(Fraction::poly(MvPoly::constant(n, RatFunc::x())));
        }
        if let Some(k) = name.strip_prefix('y').and_then(|d| d.parse::<usize>().ok()) {
            if (1..=n).contains(&k) && name[1..].chars().next() != Some('0') {
                return Ok(Fraction::poly(MvPoly::var(n, k - 1)));
            }
        }
        Err(syntax(at, format!("unknown symbol '{name}'")))
    }

    /// Literal exponent, right-associative: `2^3^2 = 2^9`.
    fn power(&mut self) -> Result<u32> {
        let (tok, at) = self.bump();
        let base = match tok {
            Tok::Int(v) => v,
            _ => return Err(syntax(at, "exponent must be a nonnegative integer literal")),
        };
        let value = if self.peek().0 == &Tok::Caret {
            self.bump();
            let e = self.power()?;
            checked_int_pow(&base, e)
        } else {
            Some(base)
        };
        value
            .and_then(|v| v.to_u32())
            .filter(|&v| v <= MAX_EXPONENT)
            .ok_or_else(|| syntax(at, format!("exponent exceeds {MAX_EXPONENT}")))
    }

    fn raise(&self, base: Fraction, e: u32, at: usize) -> Result<Fraction> {
        if base.size().saturating_mul(e as u64) > MAX_POWER_DEGREE {
            return Err(syntax(at, "power too large"));
        }
        let num = base.num.pow(e);
        let den = if base.has_trivial_den() {
            base.den
        } else {
            base.den.pow(e)
        };
        Ok(Fraction { num, den })
    }

    fn divide(&self, lhs: Fraction, rhs: Fraction, rhs_at: usize) -> Result<Fraction> {
        if rhs.num.is_zero() {
            return Err(Error::ZeroDenominator { offset: rhs_at });
        }
        if !rhs.num.is_y_free() && !self.grammar.allow_fiber_denominator {
            return Err(Error::UnsupportedDenominator);
        }
        Ok(lhs.mul(&Fraction {
            num: rhs.den,
            den: rhs.num,
        }))
    }
}

fn checked_int_pow(base: &BigInt, e: u32) -> Option<BigInt> {
    if base.is_zero() || *base == BigInt::from(1) {
        return Some(if e == 0 { BigInt::from(1) } else { base.clone() });
    }
    if base.bits() as u64 * e as u64 > 64 {
        return None;
    }
    Some(num_traits::pow(base.clone(), e as usize))
}
