//! Text inputs: rational points and linear constraint chains on `V[n]`.
//!
//! Variables name coordinates of the marked points. With `d <= 26` the letter
//! selects the coordinate (`a` first, `b` second, ...) and the number the
//! point, so `b2` is the second coordinate of point 2. The general form is
//! `p2.1` (point 2, coordinate 1, zero-based). Point 0 is fixed at the origin.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::linalg::{Int, Rat};

const MAX_COORDS: usize = 4096;

fn parse_rat(tok: &str, loc: &str) -> Result<Rat> {
    let bad = || Error::parse(loc, format!("{tok:?} is not a rational number"));
    let digits = |s: &str| {
        let b = s.strip_prefix('-').unwrap_or(s);
        !b.is_empty() && b.len() <= 4096 && b.bytes().all(|c| c.is_ascii_digit())
    };
    let (num, den) = match tok.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (tok, "1"),
    };
    if !digits(num) || !digits(den) || den.starts_with('-') {
        return Err(bad());
    }
    let n: Int = num.parse().map_err(|_| bad())?;
    let d: Int = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(loc, "zero denominator"));
    }
    Ok(Rat::from(n) / Rat::from(d))
}

/// Comma- or whitespace-separated rationals such as `"1, -1/2, 3"`.
pub fn parse_point(s: &str) -> Result<Vec<Rat>> {
    let toks: Vec<&str> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if toks.is_empty() {
        return Err(Error::parse("coordinate 1", "empty point"));
    }
    if toks.len() > MAX_COORDS {
        return Err(Error::parse("point", format!("more than {MAX_COORDS} coordinates")));
    }
    toks.iter()
        .enumerate()
        .map(|(i, t)| parse_rat(t, &format!("coordinate {}", i + 1)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Int),
    Var(usize, usize),
    Plus,
    Minus,
    Star,
    Le,
    Ge,
    Eq,
    Sep,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Rel {
    Le,
    Ge,
    Eq,
}

fn lex(s: &str, n: usize, d: usize) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let loc = |i: usize| format!("column {}", i + 1);
    let number = |i: &mut usize| -> String {
        let st = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        s[st..*i].to_string()
    };
    while i < b.len() {
        let c = b[i];
        let at = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((at, Tok::Plus)),
            b'-' => out.push((at, Tok::Minus)),
            b'*' => out.push((at, Tok::Star)),
            b',' | b';' => out.push((at, Tok::Sep)),
            b'=' => {
                if b.get(i + 1) == Some(&b'=') {
                    i += 1;
                }
                out.push((at, Tok::Eq))
            }
            b'<' | b'>' => {
                if b.get(i + 1) != Some(&b'=') {
                    return Err(Error::parse(
                        loc(at),
                        "strict inequalities are not allowed; use <= or >=",
                    ));
                }
                i += 1;
                out.push((at, if c == b'<' { Tok::Le } else { Tok::Ge }));
            }
            b'0'..=b'9' => {
                let t = number(&mut i);
                if t.len() > 1000 {
                    return Err(Error::parse(loc(at), "number too long"));
                }
                out.push((at, Tok::Num(t.parse().expect("digits"))));
                continue;
            }
            b'a'..=b'z' => {
                i += 1;
                let digits_end = i + b[i..].iter().take_while(|x| x.is_ascii_digit()).count();
                let (point, coord) = if c == b'p' && b.get(digits_end) == Some(&b'.') {
                    let pt = number(&mut i);
                    i += 1;
                    let co = number(&mut i);
                    (pt, co.parse::<usize>().ok())
                } else {
                    let pt = number(&mut i);
                    (pt, Some((c - b'a') as usize))
                };
                let pt: usize = point
                    .parse()
                    .map_err(|_| Error::parse(loc(at), "variable needs a point number"))?;
                let coord = coord.ok_or_else(|| Error::parse(loc(at), "bad coordinate index"))?;
                if pt > n {
                    return Err(Error::parse(loc(at), format!("point {pt} out of range 0..={n}")));
                }
                if coord >= d {
                    return Err(Error::parse(
                        loc(at),
                        format!("coordinate {coord} out of range for d = {d}"),
                    ));
                }
                out.push((at, Tok::Var(pt, coord)));
                continue;
            }
            _ => return Err(Error::parse(loc(at), format!("unexpected character {:?}", c as char))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    len: usize,
    n: usize,
    d: usize,
}

impl Parser<'_> {
    fn loc(&self) -> String {
        match self.toks.get(self.pos) {
            Some((c, _)) => format!("column {}", c + 1),
            None => format!("column {}", self.len + 1),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    /// A linear form on `V[n]`; point 0 contributes nothing.
    fn expr(&mut self) -> Result<Vec<Int>> {
        let mut form = vec![Int::ZERO; self.n * self.d];
        let mut first = true;
        loop {
            let mut sign = Int::ONE;
            match self.peek() {
                Some(Tok::Plus) => self.pos += 1,
                Some(Tok::Minus) => {
                    sign = -Int::ONE;
                    self.pos += 1;
                }
                _ if first => {}
                _ => break,
            }
            first = false;
            let mut coef = sign;
            let mut had_num = false;
            if let Some(Tok::Num(k)) = self.peek() {
                coef *= k;
                had_num = true;
                self.pos += 1;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                }
            }
            match self.peek() {
                Some(Tok::Var(p, k)) => {
                    let (p, k) = (*p, *k);
                    self.pos += 1;
                    if p > 0 {
                        form[(p - 1) * self.d + k] += coef;
                    }
                }
                _ if had_num => {
                    if !coef.is_zero() {
                        return Err(Error::parse(
                            self.loc(),
                            "constraints must be homogeneous (constant terms must be 0)",
                        ));
                    }
                }
                _ => return Err(Error::parse(self.loc(), "expected a variable or number")),
            }
        }
        Ok(form)
    }

    fn rel(&mut self) -> Option<Rel> {
        let r = match self.peek()? {
            Tok::Le => Rel::Le,
            Tok::Ge => Rel::Ge,
            Tok::Eq => Rel::Eq,
            _ => return None,
        };
        self.pos += 1;
        Some(r)
    }
}

/// The cone cut out by chains such as `"a0<=a1=a2<=a3"` or `"a0+b0=a1+b2, b1>=b2"`.
pub fn parse_constraints(s: &str, n: usize, d: usize) -> Result<Cone> {
    if d == 0 || n * d > MAX_COORDS {
        return Err(Error::Precondition("unsupported n or d".into()));
    }
    let toks = lex(s, n, d)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        len: s.len(),
        n,
        d,
    };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    loop {
        let mut lhs = p.expr()?;
        let mut links = 0;
        while let Some(r) = p.rel() {
            let rhs = p.expr()?;
            let diff: Vec<Int> = rhs.iter().zip(&lhs).map(|(a, b)| a - b).collect();
            match r {
                Rel::Le => ineqs.push(diff),
                Rel::Ge => ineqs.push(diff.into_iter().map(|x| -x).collect()),
                Rel::Eq => eqs.push(diff),
            }
            lhs = rhs;
            links += 1;
        }
        if links == 0 {
            return Err(Error::parse(p.loc(), "expected <=, >= or ="));
        }
        match p.peek() {
            None => break,
            Some(Tok::Sep) => {
                p.pos += 1;
                if p.peek().is_none() {
                    break;
                }
            }
            Some(_) => return Err(Error::parse(p.loc(), "expected a relation or separator")),
        }
    }
    Ok(Cone::from_inequalities(n * d, &ineqs, &eqs))
}
