//! The `.wd` input language: stanzas of circles per point of ℙ¹.
//!
//! ```text
//! at inf { circle mult=1 q="z"; circle mult=1 q="2*z"; }
//! at 0   { circle mult=1 q="3*z^(-1)"; circle mult=1 mon="{1:[1]}"; }
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use wildiag_core::{
    circle_of, modify, BigRat, Circle, CycNum, ExpFactor, FormalData, JordanClass, LocalEntry,
    ModifiedFormalData, PointP1,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}: {}",
            self.span.start.line, self.span.start.col, sev, self.message
        )
    }
}

type PResult<T> = Result<T, Diagnostic>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

fn describe_tok(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{}`", s),
        Tok::Int(n) => format!("`{}`", n),
        Tok::Str(_) => "a string".into(),
        Tok::Sym(c) => format!("`{}`", c),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(src: &str, origin: Pos) -> PResult<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (origin.line, origin.col);
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let start = Pos { line, col };
        let single = Span { start, end: start };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            let n: BigInt = s.parse().expect("digits");
            out.push(Token {
                tok: Tok::Int(n),
                span: Span {
                    start,
                    end: Pos { line, col: col - 1 },
                },
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                span: Span {
                    start,
                    end: Pos { line, col: col - 1 },
                },
            });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(Diagnostic::error(single, "unterminated string"));
                    }
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                span: Span {
                    start,
                    end: Pos { line, col: col - 1 },
                },
            });
            continue;
        }
        let sym = match c {
            '\u{2212}' => '-',
            '{' | '}' | '(' | ')' | '[' | ']' | ';' | '=' | ':' | ',' | '+' | '-' | '*' | '/'
            | '^' => c,
            _ => {
                return Err(Diagnostic::error(
                    single,
                    format!("unexpected character `{}`", c),
                ))
            }
        };
        out.push(Token {
            tok: Tok::Sym(sym),
            span: single,
        });
        i += 1;
        col += 1;
    }
    let end = Pos { line, col };
    out.push(Token {
        tok: Tok::Eof,
        span: Span { start: end, end },
    });
    Ok(out)
}

/// Finite Puiseux polynomial in z: exponent ↦ coefficient, zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Poly(BTreeMap<BigRat, CycNum>);

impl Poly {
    fn constant(c: CycNum) -> Poly {
        Poly::monomial(BigRat::zero(), c)
    }

    fn monomial(e: BigRat, c: CycNum) -> Poly {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Poly(m)
    }

    fn as_constant(&self) -> Option<CycNum> {
        match self.0.len() {
            0 => Some(CycNum::zero()),
            1 => self.0.get(&BigRat::zero()).cloned(),
            _ => None,
        }
    }

    fn as_monomial(&self) -> Option<(BigRat, CycNum)> {
        match self.0.len() {
            0 => Some((BigRat::zero(), CycNum::zero())),
            1 => self.0.iter().next().map(|(e, c)| (e.clone(), c.clone())),
            _ => None,
        }
    }

    fn add(&self, o: &Poly, sign: i64) -> Result<Poly, String> {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            let c = if sign < 0 { -c } else { c.clone() };
            let v = match m.get(e) {
                Some(x) => x.checked_add(&c).map_err(|e| e.to_string())?,
                None => c,
            };
            if v.is_zero() {
                m.remove(e);
            } else {
                m.insert(e.clone(), v);
            }
        }
        Ok(Poly(m))
    }

    fn mul(&self, o: &Poly) -> Result<Poly, String> {
        let mut acc = Poly::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let c = c1.checked_mul(c2).map_err(|e| e.to_string())?;
                acc = acc.add(&Poly::monomial(e1 + e2, c), 1)?;
            }
        }
        Ok(acc)
    }

    fn div(&self, o: &Poly) -> Result<Poly, String> {
        let (e, c) = o
            .as_monomial()
            .ok_or_else(|| "can only divide by a single term".to_string())?;
        if c.is_zero() {
            return Err("division by zero".into());
        }
        let inv = c.inverse().map_err(|e| e.to_string())?;
        self.mul(&Poly::monomial(-e, inv))
    }

    fn pow(&self, p: &BigRat) -> Result<Poly, String> {
        if p.is_integer() {
            let k = p
                .to_integer()
                .to_i64()
                .filter(|k| k.abs() <= 64)
                .ok_or_else(|| "exponent too large".to_string())?;
            if let Some((e, c)) = self.as_monomial() {
                if c.is_zero() {
                    if k <= 0 {
                        return Err("division by zero".into());
                    }
                    return Ok(Poly::default());
                }
                let c = c.pow(k).map_err(|e| e.to_string())?;
                return Ok(Poly::monomial(e * BigRat::from_integer(k.into()), c));
            }
            if k < 0 {
                return Err("negative powers need a single term".into());
            }
            let mut acc = Poly::constant(CycNum::one());
            for _ in 0..k {
                acc = acc.mul(self)?;
            }
            return Ok(acc);
        }
        let (e, c) = self
            .as_monomial()
            .ok_or_else(|| "fractional powers need a single term".to_string())?;
        if c.is_zero() {
            return Ok(Poly::default());
        }
        let q = p
            .denom()
            .to_u32()
            .ok_or_else(|| "exponent denominator too large".to_string())?;
        let num = p.numer().to_i64().ok_or_else(|| "exponent too large".to_string())?;
        let root = c
            .try_root(q)
            .ok_or_else(|| format!("{} has no exact root of order {}", c, q))?;
        let c = root.pow(num).map_err(|e| e.to_string())?;
        Ok(Poly::monomial(e * p, c))
    }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, i: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn at_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(
            t.span,
            format!("expected {}, found {}", wanted, describe_tok(&t.tok)),
        )
    }

    fn expect_sym(&mut self, c: char) -> PResult<Span> {
        if self.at_sym(c) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", c)))
        }
    }

    fn expect_ident(&mut self, s: &str) -> PResult<Span> {
        if self.at_ident(s) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", s)))
        }
    }

    fn expect_int(&mut self) -> PResult<(BigInt, Span)> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                Ok((n, self.bump().span))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn expect_u32(&mut self) -> PResult<(u32, Span)> {
        let (n, sp) = self.expect_int()?;
        let v = n
            .to_u32()
            .ok_or_else(|| Diagnostic::error(sp, "integer out of range"))?;
        Ok((v, sp))
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// Summands of a sum with their signs and spans.
    fn terms(&mut self) -> PResult<Vec<(Poly, Span)>> {
        let mut out = vec![self.term()?];
        loop {
            let sign = if self.at_sym('+') {
                1
            } else if self.at_sym('-') {
                -1
            } else {
                break;
            };
            self.bump();
            let (p, sp) = self.term()?;
            let p = if sign < 0 {
                Poly::default().add(&p, -1).map_err(|m| Diagnostic::error(sp, m))?
            } else {
                p
            };
            out.push((p, sp));
        }
        Ok(out)
    }

    fn expr(&mut self) -> PResult<(Poly, Span)> {
        let terms = self.terms()?;
        let span = terms[0].1.to(terms[terms.len() - 1].1);
        let mut acc = Poly::default();
        for (p, sp) in &terms {
            acc = acc.add(p, 1).map_err(|m| Diagnostic::error(*sp, m))?;
        }
        Ok((acc, span))
    }

    fn term(&mut self) -> PResult<(Poly, Span)> {
        let (mut acc, mut span) = self.unary()?;
        loop {
            let op = if self.at_sym('*') {
                '*'
            } else if self.at_sym('/') {
                '/'
            } else {
                break;
            };
            self.bump();
            let (rhs, sp) = self.unary()?;
            let r = if op == '*' { acc.mul(&rhs) } else { acc.div(&rhs) };
            acc = r.map_err(|m| Diagnostic::error(sp, m))?;
            span = span.to(sp);
        }
        Ok((acc, span))
    }

    fn unary(&mut self) -> PResult<(Poly, Span)> {
        if self.at_sym('-') || self.at_sym('+') {
            let t = self.bump();
            let (p, sp) = self.unary()?;
            let span = t.span.to(sp);
            if t.tok == Tok::Sym('-') {
                let n = Poly::default().add(&p, -1).map_err(|m| Diagnostic::error(sp, m))?;
                return Ok((n, span));
            }
            return Ok((p, span));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<(Poly, Span)> {
        let (base, span) = self.atom()?;
        if !self.at_sym('^') {
            return Ok((base, span));
        }
        self.bump();
        let (e, esp) = self.unary()?;
        let p = e
            .as_constant()
            .and_then(|c| c.as_rational())
            .ok_or_else(|| Diagnostic::error(esp, "exponent must be a rational number"))?;
        let v = base.pow(&p).map_err(|m| Diagnostic::error(esp, m))?;
        Ok((v, span.to(esp)))
    }

    fn atom(&mut self) -> PResult<(Poly, Span)> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok((
                    Poly::constant(CycNum::from_rat(BigRat::from_integer(n.clone()))),
                    t.span,
                ))
            }
            Tok::Sym('(') => {
                self.bump();
                let (p, _) = self.expr()?;
                let close = self.expect_sym(')').map_err(|mut d| {
                    d.message = format!("{} (unclosed parenthesis at {}:{})", d.message, t.span.start.line, t.span.start.col);
                    d.span = t.span;
                    d
                })?;
                Ok((p, t.span.to(close)))
            }
            Tok::Ident(s) if s == "z" => {
                self.bump();
                Ok((Poly::monomial(BigRat::one(), CycNum::one()), t.span))
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok((Poly::constant(CycNum::root_of_unity(4, 1)), t.span))
            }
            Tok::Ident(s) if s == "zeta" => {
                self.bump();
                self.expect_sym('(')?;
                let (n, sp) = self.expect_int()?;
                let close = self.expect_sym(')')?;
                let n = n
                    .to_u32()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Diagnostic::error(sp, "root order out of range"))?;
                let c = CycNum::try_root_of_unity(n, 1)
                    .map_err(|e| Diagnostic::error(sp, e.to_string()))?;
                Ok((Poly::constant(c), t.span.to(close)))
            }
            _ => Err(self.unexpected("a number, `z`, `i`, `zeta(N)` or `(`")),
        }
    }

    /// A scalar: an expression without `z`.
    fn scalar(&mut self) -> PResult<(CycNum, Span)> {
        let (p, sp) = self.expr()?;
        let c = p
            .as_constant()
            .ok_or_else(|| Diagnostic::error(sp, "expected a constant, found an expression in z"))?;
        Ok((c, sp))
    }

    fn jordan(&mut self) -> PResult<(Vec<(CycNum, Vec<u32>)>, Span)> {
        let open = self.expect_sym('{')?;
        let mut pairs = Vec::new();
        if !self.at_sym('}') {
            loop {
                let (ev, _) = self.scalar()?;
                self.expect_sym(':')?;
                self.expect_sym('[')?;
                let mut blocks = vec![self.expect_u32()?.0];
                while self.at_sym(',') {
                    self.bump();
                    blocks.push(self.expect_u32()?.0);
                }
                self.expect_sym(']')?;
                pairs.push((ev, blocks));
                if !self.at_sym(',') {
                    break;
                }
                self.bump();
            }
        }
        let close = self.expect_sym('}')?;
        Ok((pairs, open.to(close)))
    }
}

/// One `circle` line after validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryDecl {
    pub mult: u32,
    pub q: ExpFactor,
    pub class: JordanClass,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stanza {
    pub point: PointP1,
    pub span: Span,
    pub entries: Vec<EntryDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DslDocument {
    pub stanzas: Vec<Stanza>,
}

/// A value given either quoted or inline.
enum Field {
    Quoted(String, Span),
    Inline,
}

fn sub_parser(text: &str, span: Span) -> PResult<Parser> {
    let origin = Pos {
        line: span.start.line,
        col: span.start.col + 1,
    };
    Ok(Parser::new(lex(text, origin)?))
}

/// Reads a q value as a factor at `point`.
fn q_value(p: &mut Parser, point: &PointP1, diags: &mut Vec<Diagnostic>) -> PResult<ExpFactor> {
    let terms = p.terms()?;
    let span = terms[0].1.to(terms[terms.len() - 1].1);
    let lone_zero = terms.len() == 1 && terms[0].0 .0.is_empty();
    let mut acc = Poly::default();
    for (t, sp) in &terms {
        if t.0.is_empty() && !lone_zero {
            diags.push(Diagnostic::error(*sp, "term with zero coefficient"));
        }
        acc = acc.add(t, 1).map_err(|m| Diagnostic::error(*sp, m))?;
    }
    let finite = !point.is_infinity();
    let mut out = Vec::new();
    for (e, c) in acc.0 {
        if e.is_zero() {
            diags.push(Diagnostic::error(span, "constant term in q"));
            continue;
        }
        if finite && e.is_positive() {
            diags.push(Diagnostic::error(
                span,
                format!("exponent {} at a finite point must be negative", e),
            ));
            continue;
        }
        if !finite && e.is_negative() {
            diags.push(Diagnostic::error(
                span,
                format!("exponent {} at inf must be positive", e),
            ));
            continue;
        }
        out.push((e.abs(), c));
    }
    ExpFactor::from_terms(point.clone(), out).map_err(|e| Diagnostic::error(span, e.to_string()))
}

fn parse_loc(p: &mut Parser) -> PResult<(PointP1, Span)> {
    if p.at_ident("inf") {
        let sp = p.bump().span;
        return Ok((PointP1::Infinity, sp));
    }
    let (c, sp) = p.scalar()?;
    Ok((PointP1::Finite(c), sp))
}

fn field_value(p: &mut Parser) -> Field {
    if let Tok::Str(s) = &p.peek().tok {
        let s = s.clone();
        let sp = p.bump().span;
        Field::Quoted(s, sp)
    } else {
        Field::Inline
    }
}

fn parse_entry(p: &mut Parser, point: &PointP1, diags: &mut Vec<Diagnostic>) -> PResult<EntryDecl> {
    let start = p.expect_ident("circle")?;
    let mut mult: Option<(u32, Span)> = None;
    let mut q: Option<ExpFactor> = None;
    let mut mon: Option<(Vec<(CycNum, Vec<u32>)>, Span)> = None;
    while !p.at_sym(';') {
        let key = p.peek().clone();
        let name = match &key.tok {
            Tok::Ident(s) if s == "mult" || s == "q" || s == "mon" => s.clone(),
            _ => return Err(p.unexpected("`mult`, `q`, `mon` or `;`")),
        };
        p.bump();
        p.expect_sym('=')?;
        let seen = match name.as_str() {
            "mult" => mult.is_some(),
            "q" => q.is_some(),
            _ => mon.is_some(),
        };
        if seen {
            diags.push(Diagnostic::error(key.span, format!("`{}` given twice", name)));
        }
        match name.as_str() {
            "mult" => mult = Some(p.expect_u32()?),
            "q" => {
                let v = match field_value(p) {
                    Field::Quoted(s, sp) => {
                        let mut sub = sub_parser(&s, sp)?;
                        let v = q_value(&mut sub, point, diags)?;
                        sub.expect_eof()?;
                        v
                    }
                    Field::Inline => q_value(p, point, diags)?,
                };
                q = Some(v);
            }
            _ => {
                let v = match field_value(p) {
                    Field::Quoted(s, sp) => {
                        let mut sub = sub_parser(&s, sp)?;
                        let v = sub.jordan()?;
                        sub.expect_eof()?;
                        (v.0, sp)
                    }
                    Field::Inline => p.jordan()?,
                };
                mon = Some(v);
            }
        }
    }
    let end = p.expect_sym(';')?;
    let span = start.to(end);
    let (mult, _) = mult.ok_or_else(|| Diagnostic::error(start, "missing `mult`"))?;
    let q = q.unwrap_or_else(|| ExpFactor::tame(point.clone()));
    let class = match mon {
        None => JordanClass::identity(mult),
        Some((pairs, sp)) => match JordanClass::new(pairs) {
            Ok(c) => {
                if c.size() != mult {
                    diags.push(Diagnostic::error(
                        sp,
                        format!("class has size {} but mult is {}", c.size(), mult),
                    ));
                }
                c
            }
            Err(e) => {
                diags.push(Diagnostic::error(sp, e.to_string()));
                JordanClass::identity(mult)
            }
        },
    };
    Ok(EntryDecl {
        mult,
        q,
        class,
        span,
    })
}

fn parse_stanza(p: &mut Parser, diags: &mut Vec<Diagnostic>) -> PResult<Stanza> {
    let start = p.expect_ident("at")?;
    let (point, _) = parse_loc(p)?;
    p.expect_sym('{')?;
    let mut entries: Vec<EntryDecl> = Vec::new();
    while !p.at_sym('}') {
        let e = parse_entry(p, &point, diags)?;
        let c = circle_of(&e.q);
        if entries.iter().any(|f| circle_of(&f.q) == c) {
            diags.push(Diagnostic::error(e.span, format!("circle {} repeated", c)));
        } else if c.is_tame() && entries.iter().any(|f| f.q.is_tame()) {
            diags.push(Diagnostic::error(e.span, "second tame circle at this point"));
        }
        entries.push(e);
    }
    let end = p.expect_sym('}')?;
    Ok(Stanza {
        point,
        span: start.to(end),
        entries,
    })
}

/// Parses a document; all diagnostics are returned on failure.
pub fn parse(src: &str) -> Result<DslDocument, Vec<Diagnostic>> {
    let toks = lex(src, Pos { line: 1, col: 1 }).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    let mut diags = Vec::new();
    let mut doc = DslDocument::default();
    while p.peek().tok != Tok::Eof {
        let st = match parse_stanza(&mut p, &mut diags) {
            Ok(s) => s,
            Err(d) => {
                diags.push(d);
                return Err(diags);
            }
        };
        if doc.stanzas.iter().any(|s| s.point == st.point) {
            diags.push(Diagnostic::error(
                st.span,
                format!("point {} already has a stanza", st.point),
            ));
        }
        doc.stanzas.push(st);
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(diags);
    }
    Ok(doc)
}

pub fn to_formal(doc: &DslDocument) -> Result<FormalData, Vec<Diagnostic>> {
    let mut points = Vec::new();
    for st in &doc.stanzas {
        let mut entries = Vec::new();
        for e in &st.entries {
            let le = LocalEntry::new(circle_of(&e.q), e.mult, e.class.clone())
                .map_err(|err| vec![Diagnostic::error(e.span, err.to_string())])?;
            entries.push(le);
        }
        points.push((st.point.clone(), entries));
    }
    let span = doc.stanzas.first().map_or(
        Span {
            start: Pos { line: 1, col: 1 },
            end: Pos { line: 1, col: 1 },
        },
        |s| s.span,
    );
    FormalData::new(points).map_err(|e| vec![Diagnostic::error(span, e.to_string())])
}

pub fn parse_formal(src: &str) -> Result<FormalData, Vec<Diagnostic>> {
    to_formal(&parse(src)?)
}

/// Parses and applies the modification at finite tame entries.
pub fn parse_modified(src: &str) -> Result<ModifiedFormalData, Vec<Diagnostic>> {
    Ok(modify(&parse_formal(src)?))
}

/// Parses a lone scalar such as `1/2 + zeta(12)^5`.
pub fn parse_scalar(src: &str) -> Result<CycNum, Diagnostic> {
    let mut p = Parser::new(lex(src, Pos { line: 1, col: 1 })?);
    let (c, _) = p.scalar()?;
    p.expect_eof()?;
    Ok(c)
}

pub fn parse_point(src: &str) -> Result<PointP1, Diagnostic> {
    if src.trim() == "inf" {
        return Ok(PointP1::Infinity);
    }
    parse_scalar(src).map(PointP1::Finite)
}

/// Parses a q-string at the given point.
pub fn parse_q(src: &str, point: &PointP1) -> Result<ExpFactor, Vec<Diagnostic>> {
    let mut p = Parser::new(lex(src, Pos { line: 1, col: 1 }).map_err(|d| vec![d])?);
    let mut diags = Vec::new();
    let q = q_value(&mut p, point, &mut diags).map_err(|d| vec![d])?;
    p.expect_eof().map_err(|d| vec![d])?;
    if diags.is_empty() {
        Ok(q)
    } else {
        Err(diags)
    }
}

/// Parses the `Display` form `<q>_point` of a circle.
pub fn parse_circle(src: &str) -> Option<Circle> {
    let body = src.strip_prefix('<')?;
    let k = body.rfind(">_")?;
    let point = parse_point(&body[k + 2..]).ok()?;
    let q = parse_q(&body[..k], &point).ok()?;
    Some(circle_of(&q))
}

/// Canonical text of formal data; `parse_formal` reads it back unchanged.
pub fn print_formal(fd: &FormalData) -> String {
    let mut out = String::new();
    for (p, entries) in &fd.0.points {
        out.push_str(&format!("at {} {{\n", p));
        for e in entries {
            out.push_str(&format!("  circle mult={}", e.mult));
            if !e.circle.is_tame() {
                out.push_str(&format!(" q=\"{}\"", e.circle.rep().to_q_string()));
            }
            if e.class != JordanClass::identity(e.mult) {
                out.push_str(&format!(" mon=\"{}\"", e.class));
            }
            out.push_str(";\n");
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use wildiag_core::rat;

    #[test]
    fn type_three_at_infinity() {
        let fd = parse_formal("at inf { circle mult=1 q=\"2*z^(5/2)\"; }").unwrap();
        let e = fd.0.entries().next().unwrap();
        assert_eq!(e.circle.ram(), 2);
        assert_eq!(e.circle.irregularity(), 5);
    }

    #[test]
    fn pole_with_class() {
        let fd = parse_formal("at 0 { circle mult=1 q=\"z^(-1)\" mon=\"{2:[1]}\"; }").unwrap();
        let e = fd.0.entries().next().unwrap();
        assert_eq!(e.circle.slope(), rat(1, 1));
        assert_eq!(e.class.entries()[0].0, CycNum::from_int(2));
    }

    #[test]
    fn unclosed_parenthesis() {
        let src = "at inf { circle mult=1 q=\"z^(5/2\" ; }";
        let d = parse(src).unwrap_err();
        assert_eq!(d[0].span.start, Pos { line: 1, col: 29 });
        assert!(d[0].message.contains("unclosed"));
    }

    #[test]
    fn bare_values_and_unicode_minus() {
        let a = parse_formal("at inf { circle mult=1 q=\u{2212}z^3 mon={1:[1]}; }").unwrap();
        let b = parse_formal("at inf { circle mult=1 q=\"-z^3\"; }").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn semantic_errors() {
        let cases = [
            "at 0 { circle mult=1; } at 0 { circle mult=1; }",
            "at inf { circle mult=2 mon=\"{1:[1]}\"; }",
            "at inf { circle mult=1 q=\"z + 0*z^2\"; }",
            "at inf { circle mult=1 q=\"z + 1\"; }",
            "at 0 { circle mult=1 q=\"z\"; }",
            "at inf { circle mult=1 q=\"z^(-1)\"; }",
            "at inf { circle mult=1 q=\"z\"; circle mult=1 q=\"z\"; }",
        ];
        for src in cases {
            assert!(parse(src).is_err(), "{}", src);
        }
    }

    #[test]
    fn non_reduced_input_is_normalized() {
        let a = parse_formal("at inf { circle mult=1 q=\"z^(4/2) + z - z/2 + z/2\"; }").unwrap();
        let b = parse_formal("at inf { circle mult=1 q=\"z^2 + z\"; }").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn print_round_trip() {
        let src = "at inf {\n  circle mult=2 q=\"(1 + i)*z^(3/2) - 1/2*zeta(12)*z\" mon=\"{-1:[2]}\";\n}\nat 1 + zeta(3) {\n  circle mult=1 q=\"z^(-1)\";\n  circle mult=2 mon=\"{1:[1], 2:[1]}\";\n}\n";
        let fd = parse_formal(src).unwrap();
        let printed = print_formal(&fd);
        assert_eq!(parse_formal(&printed).unwrap(), fd);
        assert_eq!(print_formal(&parse_formal(&printed).unwrap()), printed);
    }

    #[test]
    fn circle_text_round_trip() {
        let q = parse_q("3*z^(-1/2)", &PointP1::Finite(CycNum::from_int(2))).unwrap();
        let c = circle_of(&q);
        assert_eq!(parse_circle(&c.to_string()).unwrap(), c);
    }
}
