use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::{Basis, Terms};
use super::scalar::CRational;
use crate::{Error, Result};

/// Canonical round-trip text: a `basis:` header line followed by terms
/// `(A/D + B/D i) eps^r p^a q^b` joined by ` + `.
pub fn to_canonical(basis: Basis, terms: &Terms) -> String {
    let mut parts = Vec::new();
    for ((a, b), poly) in terms.iter() {
        for (r, c) in poly.iter() {
            let den = c.re.denom().lcm(c.im.denom());
            let re = c.re.numer() * (&den / c.re.denom());
            let im = c.im.numer() * (&den / c.im.denom());
            parts.push(format!("({re}/{den} + {im}/{den} i) eps^{r} p^{a} q^{b}"));
        }
    }
    let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    format!("basis: {}\n{}", basis.tag(), body)
}

fn rational_magnitude(q: &BigRational) -> String {
    let q = q.abs();
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

/// Human-readable form, e.g. `p q + (1/2) i eps`.
pub fn pretty(terms: &Terms) -> String {
    let mut entries: Vec<(u32, u32, u32, CRational)> = terms
        .iter()
        .flat_map(|((a, b), poly)| {
            poly.iter()
                .map(move |(r, c)| (a, b, r, c.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    if entries.is_empty() {
        return "0".into();
    }
    entries.sort_by(|x, y| {
        (y.0 + y.1, y.0, x.2).cmp(&(x.0 + x.1, x.0, y.2))
    });

    let mut out = String::new();
    for (idx, (a, b, r, c)) in entries.into_iter().enumerate() {
        let mut factors = Vec::new();
        for (name, pow) in [("eps", r), ("p", a), ("q", b)] {
            match pow {
                0 => {}
                1 => factors.push(name.to_string()),
                k => factors.push(format!("{name}^{k}")),
            }
        }
        let (negative, coeff) = if c.im.is_zero() {
            let mag = if c.re.abs().is_one() && !factors.is_empty() {
                None
            } else {
                Some(rational_magnitude(&c.re))
            };
            (c.re.is_negative(), mag)
        } else if c.re.is_zero() {
            let mag = if c.im.abs().is_one() {
                "i".to_string()
            } else {
                format!("{} i", rational_magnitude(&c.im))
            };
            (c.im.is_negative(), Some(mag))
        } else {
            (false, Some(c.to_string()))
        };
        let mut body: Vec<String> = coeff.into_iter().collect();
        body.extend(factors);
        let body = body.join(" ");
        match (idx, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&ch) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
        } else if ch.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
            }
            out.push(Tok::Num(digits.parse().map_err(|_| Error::Parse(digits.clone()))?));
        } else if ch.is_alphabetic() {
            let mut word = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '°' || **d == '_') {
                word.push(d);
                chars.next();
            }
            out.push(Tok::Ident(word.trim_end_matches('°').to_string()));
        } else {
            chars.next();
            out.push(match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' | '·' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => return Ok(acc),
            };
            self.next();
            let t = self.term()?;
            let t = if negate { t.scaled(0, &CRational::from_int(-1)) } else { t };
            acc.add_all(&t);
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut negate = false;
        while let Some(tok @ (Tok::Minus | Tok::Plus)) = self.peek() {
            negate ^= *tok == Tok::Minus;
            self.next();
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {}
                _ => break,
            }
            let f = self.factor()?;
            acc = acc.commutative_mul(&f);
        }
        Ok(if negate { acc.scaled(0, &CRational::from_int(-1)) } else { acc })
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.next();
        match self.next() {
            Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into())),
            other => Err(Error::Parse(format!("expected exponent, found {other:?}"))),
        }
    }

    fn factor(&mut self) -> Result<Terms> {
        let mut t = Terms::new();
        match self.next() {
            Some(Tok::Num(n)) => {
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    match self.next() {
                        Some(Tok::Num(d)) if !d.is_zero() => q /= BigRational::from_integer(d),
                        other => return Err(Error::Parse(format!("bad denominator {other:?}"))),
                    }
                }
                t.add_term(0, 0, 0, &CRational::real(q));
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                return Ok(inner);
            }
            Some(Tok::Ident(name)) => {
                let k = self.exponent()?;
                match name.as_str() {
                    "i" => t.add_term(0, 0, 0, &CRational::i_pow(k)),
                    "eps" | "ε" | "epsilon" => t.add_term(0, 0, k, &CRational::one()),
                    "p" => t.add_term(k, 0, 0, &CRational::one()),
                    "q" => t.add_term(0, k, 0, &CRational::one()),
                    other => return Err(Error::Parse(format!("unknown symbol '{other}'"))),
                }
            }
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
        Ok(t)
    }
}

/// Parses either the canonical or the pretty form. Returns the basis named
/// in a `basis:` header, if one is present.
pub fn parse(text: &str) -> Result<(Option<Basis>, Terms)> {
    let mut basis = None;
    let mut body = String::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if let Some(tag) = trimmed.strip_prefix("basis:") {
            if basis.is_some() {
                return Err(Error::Parse("duplicate basis header".into()));
            }
            basis = Some(match tag.trim() {
                "normal" => Basis::Normal,
                "wick" => Basis::Wick,
                "commutative" => Basis::Commutative,
                other => return Err(Error::Parse(format!("unknown basis '{other}'"))),
            });
        } else {
            body.push_str(trimmed);
            body.push(' ');
        }
    }
    let toks = tokenize(&body)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut parser = Parser { toks, pos: 0 };
    let terms = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", parser.pos)));
    }
    Ok((basis, terms))
}
