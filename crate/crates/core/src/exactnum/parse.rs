//! Text forms for rationals, quadratic irrationals, polynomials and field elements.
//!
//! Accepted element syntax:
//! * `p/q` or an integer;
//! * arithmetic over rationals and `sqrt(d)` such as `(-1+sqrt(5))/2` or `(a+b*sqrt(d))/c`;
//! * `coords:[c0,c1,...]@<poly>[@[lo,hi]]` for an arbitrary field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{squarefree_decompose, FieldElement, FieldOptions, NumberField};
use super::poly::{isolate_largest_root, Poly};
use super::FieldError;

fn perr(msg: impl Into<String>) -> FieldError {
    FieldError::Parse(msg.into())
}

pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let t = s.trim();
    t.parse::<BigRational>().map_err(|_| perr(format!("not a rational: {:?}", s)))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, FieldError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().unwrap()));
            }
            _ if s[i..].starts_with("sqrt") => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            _ => return Err(perr(format!("unexpected character {:?} in {:?}", c, s))),
        }
    }
    Ok(out)
}

/// Recursive-descent evaluator producing elements of a fixed field.
struct ExprParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    field: NumberField,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), FieldError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            other => Err(perr(format!("expected {:?}, found {:?}", t, other))),
        }
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.unary()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Star => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = &acc * &d.inv()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement, FieldError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<FieldElement, FieldError> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(FieldElement::from_int(&self.field, n)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen)?;
                let n = match self.next() {
                    Some(Tok::Num(n)) => n,
                    other => return Err(perr(format!("sqrt expects an integer, found {:?}", other))),
                };
                self.expect(Tok::RParen)?;
                let (core, square) = squarefree_decompose(&n);
                let s = FieldElement::from_int(&self.field, square);
                if core.is_one() || n.is_zero() {
                    if n.is_zero() {
                        return Ok(FieldElement::zero(&self.field));
                    }
                    return Ok(s);
                }
                Ok(&s * &FieldElement::theta(&self.field))
            }
            other => Err(perr(format!("unexpected token {:?}", other))),
        }
    }
}

/// Parse a rational or quadratic expression; the result lives in `Q` or the canonical `Q(sqrt(D))`.
pub fn parse_quadratic(s: &str) -> Result<FieldElement, FieldError> {
    let toks = tokenize(s)?;
    let mut core: Option<BigInt> = None;
    for w in toks.windows(3) {
        if let [Tok::Sqrt, Tok::LParen, Tok::Num(n)] = w {
            if n.is_zero() {
                continue;
            }
            let (c, _) = squarefree_decompose(n);
            if c.is_one() {
                continue;
            }
            match &core {
                None => core = Some(c),
                Some(prev) if *prev == c => {}
                Some(_) => return Err(perr("square roots of different radicands are not supported")),
            }
        }
    }
    let field = match core {
        None => NumberField::rational(),
        Some(c) => NumberField::quadratic(&c)?,
    };
    let mut p = ExprParser { toks: &toks, pos: 0, field };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(perr(format!("trailing input in {:?}", s)));
    }
    Ok(e)
}

/// Parse a polynomial in `x`, either as text (`x^2-3*x+1`) or as an ascending integer list (`[1,-3,1]`).
pub fn parse_poly(s: &str) -> Result<Vec<BigInt>, FieldError> {
    let t = s.trim();
    if t.starts_with('[') {
        return parse_int_list(t);
    }
    let cleaned: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(perr("empty polynomial"));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, c) in cleaned.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    terms.push(cur);
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, term.trim_start_matches('+').to_string()),
        };
        let (coef, power) = if let Some(idx) = body.find('x') {
            let c = body[..idx].trim_end_matches('*');
            let c = if c.is_empty() {
                BigInt::one()
            } else {
                c.parse().map_err(|_| perr(format!("bad coefficient {:?}", c)))?
            };
            let rest = &body[idx + 1..];
            let p = if rest.is_empty() {
                1usize
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(|| perr(format!("bad exponent in {:?}", body)))?
            };
            (c, p)
        } else {
            (body.parse().map_err(|_| perr(format!("bad term {:?}", body)))?, 0)
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += if neg { -coef } else { coef };
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn split_list(s: &str) -> Result<Vec<String>, FieldError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected a bracketed list: {:?}", s)))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|x| x.trim().to_string()).collect())
}

fn parse_int_list(s: &str) -> Result<Vec<BigInt>, FieldError> {
    split_list(s)?.iter().map(|x| x.parse::<BigInt>().map_err(|_| perr(format!("bad integer {:?}", x)))).collect()
}

/// Parse a field description `<poly>[@[lo,hi]]`. Without an interval the largest real root is used;
/// `x^2 - D` with `D > 0` yields the canonical `Q(sqrt(D))`.
pub fn parse_field(s: &str) -> Result<NumberField, FieldError> {
    let (poly_part, interval) = match s.find("@[") {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let minpoly = parse_poly(poly_part)?;
    field_from_parts(&minpoly, interval)
}

fn field_from_parts(minpoly: &[BigInt], interval: Option<&str>) -> Result<NumberField, FieldError> {
    let interval = match interval {
        Some(iv) => {
            let parts = split_list(iv)?;
            if parts.len() != 2 {
                return Err(perr("root interval needs two endpoints"));
            }
            (parse_rational(&parts[0])?, parse_rational(&parts[1])?)
        }
        None => {
            if minpoly.len() == 3 && minpoly[1].is_zero() && minpoly[2].is_one() && minpoly[0].is_negative() {
                let d = -minpoly[0].clone();
                let f = NumberField::quadratic(&d)?;
                if f.degree() == 2 && f.minpoly() == minpoly {
                    return Ok(f);
                }
                return Err(FieldError::Reducible);
            }
            if minpoly.len() == 2 && minpoly[1].is_one() {
                return Ok(NumberField::rational());
            }
            let p = Poly::from_ints(minpoly);
            isolate_largest_root(&p.squarefree_part()).ok_or(FieldError::NoSignChange)?
        }
    };
    NumberField::create(minpoly, interval, FieldOptions::default())
}

/// Parse any supported element syntax.
pub fn parse_element(s: &str) -> Result<FieldElement, FieldError> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("coords:") {
        let close = rest.find(']').ok_or_else(|| perr("missing ']' in coords"))?;
        let mut coords =
            split_list(&rest[..=close])?.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
        let field_part =
            rest[close + 1..].strip_prefix('@').ok_or_else(|| perr("coords must be followed by @<poly>"))?;
        let field = parse_field(field_part)?;
        // omitted trailing coordinates are zero
        if coords.len() < field.degree() {
            coords.resize(field.degree(), BigRational::zero());
        }
        return FieldElement::new(&field, coords);
    }
    parse_quadratic(t)
}

/// Parse `s` and express it inside `field` when possible.
pub fn parse_element_in(s: &str, field: &NumberField) -> Result<FieldElement, FieldError> {
    let e = parse_element(s)?;
    e.coerce(field).ok_or(FieldError::FieldMismatch)
}
