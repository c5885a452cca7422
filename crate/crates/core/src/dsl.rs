//! Text formats: presentations, polynomials, finite abelian groups and
//! shift/twist algebra specifications.
//!
//! ```text
//! algebra weyl;            # optional name
//! gens x:0, d:1;           # generator:weight
//! rel d*x - x*d - 1;       # any number of relations
//! bound 3;                 # degree bound
//! ```
//!
//! Polynomials use `+ - *`, rational constants `3/2`, powers `x^2`,
//! parentheses and commutators `[a, b]`. Comments run from `#` to the end
//! of the line.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fmkernel::FiniteAbGroup;
use crate::ncalg::{Generator, NcPoly, Presentation};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(c);
                chars.next();
                col += 1;
            }
            let n: BigInt = s.parse().expect("digits parse");
            out.push(Token { tok: Tok::Int(n), line: l0, col: c0 });
        } else if "+-*/^()[],;:=".contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
        } else {
            return Err(err(l0, c0, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(err(t.line, t.col, msg))
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.at_sym(c) {
            self.next();
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn expect_int(&mut self) -> Result<BigInt> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn expect_usize(&mut self) -> Result<usize> {
        let t = self.peek().clone();
        let n = self.expect_int()?;
        usize::try_from(n).map_err(|_| err(t.line, t.col, "integer out of range"))
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail("expected a name"),
        }
    }

    /// poly := [+|-] term ((+|-) term)*
    fn poly(&mut self) -> Result<NcPoly> {
        let mut acc = NcPoly::zero();
        let mut sign = Q::one();
        if (self.at_sym('-') || self.at_sym('+'))
            && self.next().tok == Tok::Sym('-') {
                sign = -sign;
            }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            if self.at_sym('+') {
                self.next();
                sign = Q::one();
            } else if self.at_sym('-') {
                self.next();
                sign = -Q::one();
            } else {
                return Ok(acc);
            }
        }
    }

    /// term := factor (* factor)*
    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        while self.at_sym('*') {
            self.next();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    /// factor := atom [^ int]
    fn factor(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        if self.at_sym('^') {
            self.next();
            let k = self.expect_usize()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    /// atom := int [/ int] | name | ( poly ) | [ poly , poly ]
    fn atom(&mut self) -> Result<NcPoly> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.next();
                let mut q = Q::from_integer(n);
                if self.at_sym('/') {
                    self.next();
                    let dt = self.peek().clone();
                    let d = self.expect_int()?;
                    if d.is_zero() {
                        return Err(err(dt.line, dt.col, "zero denominator"));
                    }
                    q /= Q::from_integer(d);
                }
                Ok(NcPoly::constant(q))
            }
            Tok::Ident(name) => {
                self.next();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(NcPoly::gen(i)),
                    None => Err(Error::UnknownGenerator(name)),
                }
            }
            Tok::Sym('(') => {
                self.next();
                let p = self.poly()?;
                self.expect_sym(')')?;
                Ok(p)
            }
            Tok::Sym('[') => {
                self.next();
                let a = self.poly()?;
                self.expect_sym(',')?;
                let b = self.poly()?;
                self.expect_sym(']')?;
                Ok(a.commutator(&b))
            }
            Tok::Eof => self.fail("unexpected end of input"),
            _ => self.fail("expected a term"),
        }
    }
}

/// Parses a polynomial in the named generators.
pub fn parse_poly(text: &str, names: &[String]) -> Result<NcPoly> {
    let mut p = Parser { toks: lex(text)?, pos: 0, names };
    let poly = p.poly()?;
    if p.peek().tok != Tok::Eof {
        return p.fail("trailing input after polynomial");
    }
    Ok(poly)
}

/// Parses the presentation format described in the module docs.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let toks = lex(text)?;
    let mut name = None;
    let mut generators: Option<Vec<Generator>> = None;
    let mut relations = Vec::new();
    let mut bound = None;
    let no_names: Vec<String> = Vec::new();
    let mut p = Parser { toks, pos: 0, names: &no_names };
    while p.peek().tok != Tok::Eof {
        let kw_tok = p.peek().clone();
        let kw = p.expect_ident()?;
        match kw.as_str() {
            "algebra" => name = Some(p.expect_ident()?),
            "gens" => {
                if generators.is_some() {
                    return Err(err(kw_tok.line, kw_tok.col, "generators declared twice"));
                }
                let mut gens = Vec::new();
                while !p.at_sym(';') {
                    let gt = p.peek().clone();
                    let g = p.expect_ident()?;
                    if gens.iter().any(|x: &Generator| x.name == g) {
                        return Err(err(gt.line, gt.col, format!("generator `{g}` declared twice")));
                    }
                    let weight = if p.at_sym(':') {
                        p.next();
                        let wt = p.peek().clone();
                        let w = p.expect_int()?;
                        u32::try_from(w).map_err(|_| err(wt.line, wt.col, "weight out of range"))?
                    } else {
                        0
                    };
                    gens.push(Generator { name: g, weight });
                    if !p.at_sym(',') {
                        break;
                    }
                    p.next();
                    if p.at_sym(';') {
                        return p.fail("expected a name");
                    }
                }
                generators = Some(gens);
            }
            "rel" => {
                let Some(gens) = &generators else {
                    return Err(err(kw_tok.line, kw_tok.col, "relation before `gens`"));
                };
                let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
                let mut sub = Parser { toks: std::mem::take(&mut p.toks), pos: p.pos, names: &names };
                let r = sub.poly();
                p.toks = sub.toks;
                p.pos = sub.pos;
                relations.push(r?);
            }
            "bound" => {
                let bt = p.peek().clone();
                let b = p.expect_usize()?;
                if b == 0 {
                    return Err(err(bt.line, bt.col, "bound must be positive"));
                }
                bound = Some(b);
            }
            other => return Err(err(kw_tok.line, kw_tok.col, format!("unknown statement `{other}`"))),
        }
        p.expect_sym(';')?;
    }
    let generators = generators.ok_or_else(|| err(1, 1, "missing `gens` statement"))?;
    let max_deg = relations.iter().filter_map(NcPoly::degree).max().unwrap_or(0);
    let bound = bound.unwrap_or(max_deg.max(1));
    let pres = Presentation { name, generators, relations, bound };
    pres.validate()?;
    Ok(pres)
}

/// Canonical text of a presentation; `parse_presentation` inverts it.
pub fn print_presentation(p: &Presentation) -> String {
    p.to_dsl()
}

/// Parses `Z<n>(xZ<n>)*`, e.g. `Z4xZ2`.
pub fn parse_group(text: &str) -> Result<FiniteAbGroup> {
    let mut moduli = Vec::new();
    let trimmed = text.trim();
    let mut col = 1 + text.len() - text.trim_start().len();
    for (i, part) in trimmed.split('x').enumerate() {
        let lead = part.len() - part.trim_start().len();
        let p = part.trim();
        let at = col + lead;
        let digits = p.strip_prefix('Z').ok_or_else(|| err(1, at, "expected `Z<n>`"))?;
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err(1, at + 1, "expected a modulus after `Z`"));
        }
        let n: u64 = digits.parse().map_err(|_| err(1, at + 1, "modulus out of range"))?;
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        moduli.push(n);
        col += part.len() + 1;
        let _ = i;
    }
    FiniteAbGroup::new(moduli)
}

/// Canonical text of a group, e.g. `Z4xZ2`.
pub fn print_group(g: &FiniteAbGroup) -> String {
    g.to_string()
}

/// Parses generators of a shift/twist algebra:
/// `shift=(1,0);twist=(0,1)` gives two generators, `shift=(1,0),twist=(0,1)`
/// one. A missing part is zero. Returns `(shift index, twist index)` pairs.
pub fn parse_algebra_spec(text: &str, group: &FiniteAbGroup) -> Result<Vec<(usize, usize)>> {
    let toks = lex(text)?;
    let no_names: Vec<String> = Vec::new();
    let mut p = Parser { toks, pos: 0, names: &no_names };
    let k = group.moduli().len();
    let mut gens = Vec::new();
    while p.peek().tok != Tok::Eof {
        let mut shift = vec![0u64; k];
        let mut twist = vec![0u64; k];
        loop {
            let kt = p.peek().clone();
            let key = p.expect_ident()?;
            p.expect_sym('=')?;
            p.expect_sym('(')?;
            let mut coords = Vec::new();
            loop {
                let neg = p.at_sym('-');
                if neg {
                    p.next();
                }
                let ct = p.peek().clone();
                let v = p.expect_int()?;
                let v = if neg { -v } else { v };
                let j = coords.len();
                if j >= k {
                    return Err(err(ct.line, ct.col, format!("group has only {k} factors")));
                }
                let n = BigInt::from(group.moduli()[j]);
                let r = ((v % &n) + &n) % &n;
                coords.push(u64::try_from(r).expect("reduced coordinate fits"));
                if !p.at_sym(',') {
                    break;
                }
                p.next();
            }
            p.expect_sym(')')?;
            if coords.len() != k {
                return Err(err(kt.line, kt.col, format!("expected {k} coordinates")));
            }
            match key.as_str() {
                "shift" => shift = coords,
                "twist" => twist = coords,
                other => return Err(err(kt.line, kt.col, format!("unknown key `{other}`"))),
            }
            if !p.at_sym(',') {
                break;
            }
            p.next();
        }
        gens.push((group.index(&shift), group.index(&twist)));
        if p.at_sym(';') {
            p.next();
        } else if p.peek().tok != Tok::Eof {
            return p.fail("expected `;`");
        }
    }
    Ok(gens)
}
