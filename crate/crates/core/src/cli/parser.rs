use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::ast::{Command, Entry, ModuleExpr, Operand, Pos, Ring, Session, Statement};
use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Prefix of every diagnostic for input outside the monomial scope.
pub const NON_MONOMIAL: &str = "unsupported: non-monomial input";

const QUOTIENT_NOTE: &str =
    "binomial relations such as x*y - z^2 (as in the quotient ring Q[x,y,z]/(x*y - z^2)) are out of scope";

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    /// A run of superscript digits, read as an exponent.
    Sup(u32),
    Str(String),
    Sym(char),
    Other(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
    offset: usize,
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴'..='⁹' => Some(c as u32 - '⁴' as u32 + 4),
        _ => None,
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i].1 == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let (offset, c) = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1).map(|x| x.1) == Some('/')) {
            while i < chars.len() && chars[i].1 != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Int(s.parse().expect("ascii digits"))
        } else if superscript_digit(c).is_some() {
            let mut e: u32 = 0;
            while let Some(d) = chars.get(i).and_then(|x| superscript_digit(x.1)) {
                e = e
                    .checked_mul(10)
                    .and_then(|e| e.checked_add(d))
                    .ok_or_else(|| parse_error(pos, "exponent too large"))?;
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Sup(e)
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            while i < chars.len() && chars[i].1 != '"' && chars[i].1 != '\n' {
                s.push(chars[i].1);
                advance(&mut i, &mut line, &mut col);
            }
            if chars.get(i).map(|x| x.1) != Some('"') {
                return Err(parse_error(pos, "unterminated string"));
            }
            advance(&mut i, &mut line, &mut col);
            Tok::Str(s)
        } else {
            advance(&mut i, &mut line, &mut col);
            match c {
                'ℤ' => Tok::Ident("Z".into()),
                ';' | ',' | '=' | '[' | ']' | '(' | ')' | '^' | '*' | '/' | '-' | '+' | '<'
                | '>' | '⊂' | '⊊' | '⊕' | '·' => Tok::Sym(c),
                _ => Tok::Other(c),
            }
        };
        out.push(Token { tok, pos, offset });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
        offset: text.len(),
    });
    Ok(out)
}

fn parse_error(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Ideal,
    Module { rank: usize },
    Sub,
}

const KEYWORDS: &[&str] = &[
    "ring",
    "ideal",
    "module",
    "sub",
    "of",
    "factor",
    "filtration",
    "ass",
    "colon",
    "intersect",
    "ann",
    "compare",
    "verify",
    "R",
    "Z",
];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    i: usize,
    ring: Option<Ring>,
    names: HashMap<String, Kind>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        Ok(Parser {
            text,
            toks: lex(text)?,
            i: 0,
            ring: None,
            names: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(parse_error(self.pos(), message))
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sup(e) => format!("superscript {e}"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(c) | Tok::Other(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!(
                "expected `{c}`, found {}",
                Self::describe(self.peek())
            ))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(format!(
                "expected `{kw}`, found {}",
                Self::describe(self.peek())
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected {what}, found {}", Self::describe(&other))),
        }
    }

    fn usize_literal(&mut self, what: &str) -> Result<usize> {
        match self.peek().clone() {
            Tok::Int(n) => match n.to_usize() {
                Some(v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.err(format!("{what} too large")),
            },
            other => self.err(format!("expected {what}, found {}", Self::describe(&other))),
        }
    }

    fn signed_integer(&mut self) -> Result<BigInt> {
        let negative = self.eat_sym('-');
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if negative { -n } else { n })
            }
            other => self.err(format!(
                "expected an integer, found {}",
                Self::describe(&other)
            )),
        }
    }

    fn ring(&self) -> Result<&Ring> {
        match &self.ring {
            Some(r) => Ok(r),
            None => {
                self.err("no ring declared; start the session with `ring Q[x,y];` or `ring Z;`")
            }
        }
    }

    fn fresh_name(&mut self, kind: Kind) -> Result<String> {
        let pos = self.pos();
        let name = self.ident("a name")?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(parse_error(pos, format!("`{name}` is reserved")));
        }
        if self.ring.as_ref().is_some_and(|r| r.vars().contains(&name)) {
            return Err(parse_error(pos, format!("`{name}` is a ring variable")));
        }
        if self.names.contains_key(&name) {
            return Err(parse_error(pos, format!("`{name}` is already defined")));
        }
        self.names.insert(name.clone(), kind);
        Ok(name)
    }

    /// Source text from token `start` up to the next `,`, `;` or `)` at depth 0.
    fn snippet_from(&self, start: usize) -> String {
        let mut depth = 0i32;
        let mut end = self.toks.len() - 1;
        for (k, t) in self.toks.iter().enumerate().skip(start) {
            match t.tok {
                Tok::Sym('(') | Tok::Sym('[') => depth += 1,
                Tok::Sym(')') | Tok::Sym(']') if depth == 0 => {
                    end = k;
                    break;
                }
                Tok::Sym(')') | Tok::Sym(']') => depth -= 1,
                Tok::Sym(',') | Tok::Sym(';') | Tok::Eof if depth == 0 => {
                    end = k;
                    break;
                }
                _ => {}
            }
        }
        self.text[self.toks[start].offset..self.toks[end].offset]
            .trim()
            .to_string()
    }

    fn non_monomial<T>(&self, start: usize) -> Result<T> {
        Err(parse_error(
            self.toks[start].pos,
            format!(
                "{NON_MONOMIAL}: `{}` is not a monomial; {QUOTIENT_NOTE}",
                self.snippet_from(start)
            ),
        ))
    }

    fn statement(&mut self) -> Result<Statement> {
        let Tok::Ident(head) = self.peek().clone() else {
            return self.err(format!(
                "expected a declaration or command, found {}",
                Self::describe(self.peek())
            ));
        };
        let stmt = match head.as_str() {
            "ring" => self.ring_decl()?,
            "ideal" => {
                self.bump();
                self.ring()?;
                let name = self.fresh_name(Kind::Ideal)?;
                self.expect_sym('=')?;
                let gens = self.entry_list()?;
                Statement::Ideal { name, gens }
            }
            "module" => self.module_decl()?,
            "sub" => self.sub_decl()?,
            _ => Statement::Command(self.command()?),
        };
        self.expect_sym(';')?;
        Ok(stmt)
    }

    fn ring_decl(&mut self) -> Result<Statement> {
        let start = self.pos();
        self.bump();
        if self.ring.is_some() {
            return Err(parse_error(start, "ring already declared"));
        }
        let field = self.ident("a ring such as Q[x,y] or Z")?;
        let ring = if field == "Z" && !self.is_sym('[') {
            Ring::Integers
        } else {
            self.expect_sym('[')?;
            let mut vars = Vec::new();
            loop {
                let pos = self.pos();
                let v = self.ident("a variable name")?;
                if KEYWORDS.contains(&v.as_str()) {
                    return Err(parse_error(pos, format!("`{v}` is reserved")));
                }
                if vars.contains(&v) {
                    return Err(parse_error(pos, format!("duplicate variable `{v}`")));
                }
                vars.push(v);
                if !self.eat_sym(',') {
                    break;
                }
            }
            self.expect_sym(']')?;
            if self.is_sym('/') {
                let pos = self.pos();
                return Err(parse_error(
                    pos,
                    format!("{NON_MONOMIAL}: quotient rings are not supported; {QUOTIENT_NOTE}"),
                ));
            }
            Ring::Polynomial { field, vars }
        };
        self.ring = Some(ring.clone());
        Ok(Statement::Ring(ring))
    }

    fn module_decl(&mut self) -> Result<Statement> {
        self.bump();
        let ring = self.ring()?.clone();
        let name = self.fresh_name(Kind::Module { rank: 0 })?;
        self.expect_sym('=')?;
        let sym_pos = self.pos();
        let base = self.ident("`R` or `Z`")?;
        if base != ring.symbol() {
            return Err(parse_error(
                sym_pos,
                format!("expected `{}` for this ring", ring.symbol()),
            ));
        }
        let rank = if self.eat_sym('^') {
            self.usize_literal("a rank")?
        } else if let Tok::Sup(e) = *self.peek() {
            self.bump();
            e as usize
        } else {
            1
        };
        if rank == 0 {
            return Err(parse_error(sym_pos, "rank must be positive"));
        }
        let mut relations = Vec::new();
        if self.is_sym('/') {
            if ring != Ring::Integers {
                return self.err(format!(
                    "{NON_MONOMIAL}: quotient modules are only supported over Z"
                ));
            }
            self.bump();
            self.expect_sym('[')?;
            loop {
                let pos = self.pos();
                self.expect_sym('[')?;
                let mut row = vec![self.signed_integer()?];
                while self.eat_sym(',') {
                    row.push(self.signed_integer()?);
                }
                self.expect_sym(']')?;
                if row.len() != rank {
                    return Err(parse_error(
                        pos,
                        format!("relation has {} entries, expected {rank}", row.len()),
                    ));
                }
                relations.push(row);
                if !self.eat_sym(',') {
                    break;
                }
            }
            self.expect_sym(']')?;
        }
        self.names.insert(name.clone(), Kind::Module { rank });
        Ok(Statement::Module {
            name,
            module: ModuleExpr { rank, relations },
        })
    }

    fn sub_decl(&mut self) -> Result<Statement> {
        self.bump();
        let ring = self.ring()?.clone();
        let name = self.fresh_name(Kind::Sub)?;
        self.expect_keyword("of")?;
        let of_pos = self.pos();
        let of = self.ident("a module name")?;
        let rank = match self.names.get(&of) {
            Some(Kind::Module { rank }) => *rank,
            Some(_) => return Err(parse_error(of_pos, format!("`{of}` is not a module"))),
            None => return Err(parse_error(of_pos, format!("unknown module `{of}`"))),
        };
        self.expect_sym('=')?;
        let mut vectors = Vec::new();
        loop {
            let start = self.i;
            let pos = self.pos();
            self.expect_sym('[')?;
            let v = self.entry_list()?;
            self.expect_sym(']')?;
            if v.len() != rank {
                return Err(parse_error(
                    pos,
                    format!("vector has {} entries, expected {rank}", v.len()),
                ));
            }
            if ring != Ring::Integers && v.iter().filter(|e| !e.is_zero()).count() > 1 {
                return Err(parse_error(
                    pos,
                    format!(
                        "{NON_MONOMIAL}: `{}` has more than one nonzero entry; submodules must be generated by vectors with a single monomial entry",
                        self.text[self.toks[start].offset..self.toks[self.i].offset].trim()
                    ),
                ));
            }
            vectors.push(v);
            if !self.eat_sym(',') {
                break;
            }
        }
        Ok(Statement::Sub { name, of, vectors })
    }

    fn command(&mut self) -> Result<Command> {
        let pos = self.pos();
        let mut kw = self.ident("a command")?;
        if kw == "compare" && self.is_sym('-') {
            self.bump();
            kw.push('-');
            kw.push_str(&self.ident("`ann` or `intersection`")?);
        }
        let cmd = match kw.as_str() {
            "factor" => Command::Factor(self.operand()?),
            "filtration" => Command::Filtration(self.operand()?),
            "ass" => Command::Ass(self.operand()?),
            "colon" => {
                let a = self.operand()?;
                Command::Colon(a, self.operand()?)
            }
            "intersect" => {
                let a = self.operand()?;
                Command::Intersect(a, self.operand()?)
            }
            "ann" => Command::Ann(self.operand()?),
            "compare-ann" => Command::CompareAnn(self.operand()?),
            "compare-intersection" => {
                let a = self.operand()?;
                Command::CompareIntersection(a, self.operand()?)
            }
            "verify" => Command::Verify(self.path()?),
            _ => return Err(parse_error(pos, format!("unknown command `{kw}`"))),
        };
        Ok(cmd)
    }

    fn path(&mut self) -> Result<String> {
        if let Tok::Str(s) = self.peek().clone() {
            self.bump();
            return Ok(s);
        }
        let start = self.toks[self.i].offset;
        let first = self.i;
        while !matches!(self.peek(), Tok::Sym(';') | Tok::Eof) {
            self.bump();
        }
        let path = self.text[start..self.toks[self.i].offset].trim();
        if path.is_empty() || path.contains('"') || path.contains('\n') {
            return Err(parse_error(self.toks[first].pos, "expected a file path"));
        }
        Ok(path.to_string())
    }

    fn operand(&mut self) -> Result<Operand> {
        self.ring()?;
        if self.eat_sym('(') {
            let gens = self.entry_list()?;
            self.expect_sym(')')?;
            return Ok(Operand::Ideal(gens));
        }
        let pos = self.pos();
        let name = self.ident("a name or an inline ideal like (x^2,y)")?;
        match self.names.get(&name) {
            Some(Kind::Ideal | Kind::Sub) => Ok(Operand::Name(name)),
            Some(Kind::Module { .. }) => Err(parse_error(
                pos,
                format!("`{name}` is a module; expected an ideal or submodule"),
            )),
            None => Err(parse_error(pos, format!("unknown name `{name}`"))),
        }
    }

    fn entry_list(&mut self) -> Result<Vec<Entry>> {
        let mut out = vec![self.entry()?];
        while self.eat_sym(',') {
            out.push(self.entry()?);
        }
        Ok(out)
    }

    fn entry(&mut self) -> Result<Entry> {
        let start = self.i;
        let ring = self.ring()?.clone();
        let negative = self.eat_sym('-');
        let entry = match &ring {
            Ring::Integers => {
                let mut value = BigInt::one();
                loop {
                    match self.peek().clone() {
                        Tok::Int(n) => {
                            self.bump();
                            value *= n;
                        }
                        Tok::Ident(v) => {
                            return self.err(format!("ring Z has no variables, found `{v}`"))
                        }
                        other => {
                            return self.err(format!(
                                "expected an integer, found {}",
                                Self::describe(&other)
                            ))
                        }
                    }
                    if !self.eat_sym('*') {
                        break;
                    }
                }
                if negative {
                    value = -value;
                }
                if value.is_zero() {
                    Entry::Zero
                } else {
                    Entry::Integer(value)
                }
            }
            Ring::Polynomial { vars, .. } => {
                let mut exps = vec![0u32; vars.len()];
                let mut zero = false;
                loop {
                    match self.peek().clone() {
                        Tok::Int(n) => {
                            self.bump();
                            zero |= n.is_zero();
                        }
                        Tok::Ident(name) => {
                            let pos = self.pos();
                            self.bump();
                            let idx = resolve_variables(&name, vars).ok_or_else(|| {
                                parse_error(pos, format!("unknown variable `{name}`"))
                            })?;
                            let e = self.exponent()?;
                            // juxtaposed single-letter variables: the exponent binds to the last one
                            let (last, init) = idx.split_last().expect("nonempty");
                            for &v in init {
                                exps[v] += 1;
                            }
                            exps[*last] = exps[*last]
                                .checked_add(e)
                                .ok_or_else(|| parse_error(pos, "exponent too large"))?;
                        }
                        Tok::Sym('(') => return self.non_monomial(start),
                        other => {
                            return self.err(format!(
                                "expected a variable or integer, found {}",
                                Self::describe(&other)
                            ))
                        }
                    }
                    if !self.eat_sym('*') && !self.eat_sym('·') {
                        break;
                    }
                }
                if zero {
                    Entry::Zero
                } else {
                    Entry::Monomial(Monomial::new(exps))
                }
            }
        };
        if self.is_sym('+') || self.is_sym('-') {
            return match ring {
                Ring::Integers => {
                    self.err("expected `,`; write sums of integers as a single value")
                }
                Ring::Polynomial { .. } => self.non_monomial(start),
            };
        }
        Ok(entry)
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat_sym('^') {
            match self.peek().clone() {
                Tok::Int(n) => {
                    self.bump();
                    n.to_u32()
                        .map_or_else(|| self.err("exponent too large"), Ok)
                }
                other => self.err(format!(
                    "expected an exponent, found {}",
                    Self::describe(&other)
                )),
            }
        } else if let Tok::Sup(e) = *self.peek() {
            self.bump();
            Ok(e)
        } else {
            Ok(1)
        }
    }
}

/// Indices for an identifier: a declared variable, or a run of juxtaposed
/// single-letter variables such as `xy`.
fn resolve_variables(name: &str, vars: &[String]) -> Option<Vec<usize>> {
    if let Some(i) = vars.iter().position(|v| v == name) {
        return Some(vec![i]);
    }
    name.chars()
        .map(|c| {
            vars.iter()
                .position(|v| v.len() == c.len_utf8() && v.starts_with(c))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Session> {
    let mut p = Parser::new(text)?;
    let mut session = Session::default();
    while *p.peek() != Tok::Eof {
        let pos = p.pos();
        if let Tok::Other(c) = p.peek() {
            return p.err(format!("unexpected character `{c}`"));
        }
        let stmt = p.statement()?;
        session.statements.push(stmt);
        session.positions.push(pos);
    }
    Ok(session)
}

/// One element of a chain in a verify file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainElem {
    /// `R`, `R^k`, `Z`, `Z^k` or the ambient's name.
    Whole(Option<usize>),
    Zero,
    Name(String),
    Ideal(Vec<Entry>),
    /// `[(x^2,y), R]`: one ideal per component of a free module.
    Components(Vec<ChainElem>),
    /// `<(2,0),(0,1)>`: integer span.
    Span(Vec<Vec<BigInt>>),
    /// `2Z ⊕ 0 ⊕ Z`: the diagonal submodule `d_1 Z ⊕ … ⊕ d_k Z`.
    DirectSum(Vec<BigInt>),
}

/// A claimed filtration `N ⊂[p_1] M_1 ⊂ … ⊂ M`, primes optional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    /// Ambient module name from a `module M;` header; the ring otherwise.
    pub module: Option<String>,
    pub elements: Vec<ChainElem>,
    pub primes: Vec<Option<Vec<Entry>>>,
}

/// Parses a verify file against the declarations of `session`.
pub fn parse_chain(text: &str, session: &Session) -> Result<Chain> {
    let mut p = Parser::new(text)?;
    p.ring = Some(
        session
            .ring()
            .cloned()
            .ok_or_else(|| parse_error(Pos { line: 1, col: 1 }, "session declares no ring"))?,
    );
    for s in &session.statements {
        match s {
            Statement::Ideal { name, .. } => {
                p.names.insert(name.clone(), Kind::Ideal);
            }
            Statement::Module { name, module } => {
                p.names
                    .insert(name.clone(), Kind::Module { rank: module.rank });
            }
            Statement::Sub { name, .. } => {
                p.names.insert(name.clone(), Kind::Sub);
            }
            _ => {}
        }
    }
    let mut module = None;
    if p.is_keyword("module")
        && matches!(p.peek_at(1), Tok::Ident(_))
        && *p.peek_at(2) == Tok::Sym(';')
    {
        p.bump();
        let pos = p.pos();
        let name = p.ident("a module name")?;
        if !matches!(p.names.get(&name), Some(Kind::Module { .. })) {
            return Err(parse_error(
                pos,
                format!("`{name}` is not a declared module"),
            ));
        }
        p.expect_sym(';')?;
        module = Some(name);
    }
    let mut elements = vec![p.chain_elem(module.as_deref())?];
    let mut primes = Vec::new();
    while p.eat_sym('⊂') || p.eat_sym('⊊') {
        if p.eat_sym('[') {
            p.expect_sym('(')?;
            let gens = p.entry_list()?;
            p.expect_sym(')')?;
            p.expect_sym(']')?;
            primes.push(Some(gens));
        } else {
            primes.push(None);
        }
        elements.push(p.chain_elem(module.as_deref())?);
    }
    p.eat_sym(';');
    if *p.peek() != Tok::Eof {
        return p.err(format!(
            "expected `⊂`, found {}",
            Parser::describe(p.peek())
        ));
    }
    if elements.len() < 2 && !matches!(elements[0], ChainElem::Whole(_)) {
        return Err(parse_error(
            Pos { line: 1, col: 1 },
            "a chain needs at least two modules",
        ));
    }
    Ok(Chain {
        module,
        elements,
        primes,
    })
}

impl Parser<'_> {
    fn chain_elem(&mut self, module: Option<&str>) -> Result<ChainElem> {
        let ring = self.ring()?.clone();
        match self.peek().clone() {
            Tok::Sym('(') => {
                self.bump();
                let gens = self.entry_list()?;
                self.expect_sym(')')?;
                Ok(ChainElem::Ideal(gens))
            }
            Tok::Sym('[') => {
                self.bump();
                let mut parts = vec![self.chain_elem(module)?];
                while self.eat_sym(',') {
                    parts.push(self.chain_elem(module)?);
                }
                self.expect_sym(']')?;
                Ok(ChainElem::Components(parts))
            }
            Tok::Sym('<') => {
                self.bump();
                let mut vectors = Vec::new();
                loop {
                    self.expect_sym('(')?;
                    let mut v = vec![self.signed_integer()?];
                    while self.eat_sym(',') {
                        v.push(self.signed_integer()?);
                    }
                    self.expect_sym(')')?;
                    vectors.push(v);
                    if !self.eat_sym(',') {
                        break;
                    }
                }
                self.expect_sym('>')?;
                Ok(ChainElem::Span(vectors))
            }
            Tok::Int(_) | Tok::Ident(_) if ring == Ring::Integers && self.is_summand_start() => {
                let mut parts = vec![self.summand()?];
                while self.eat_sym('⊕') {
                    parts.push(self.summand()?);
                }
                if parts.len() == 1 && parts[0].is_zero() {
                    return Ok(ChainElem::Zero);
                }
                Ok(ChainElem::DirectSum(parts))
            }
            Tok::Int(n) if n.is_zero() => {
                self.bump();
                Ok(ChainElem::Zero)
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                if name == ring.symbol() {
                    return Ok(ChainElem::Whole(self.whole_rank()?));
                }
                if Some(name.as_str()) == module {
                    return Ok(ChainElem::Whole(None));
                }
                match self.names.get(&name) {
                    Some(Kind::Ideal | Kind::Sub) => Ok(ChainElem::Name(name)),
                    _ => Err(parse_error(pos, format!("unknown name `{name}`"))),
                }
            }
            other => self.err(format!(
                "expected a submodule, found {}",
                Self::describe(&other)
            )),
        }
    }

    fn whole_rank(&mut self) -> Result<Option<usize>> {
        if self.eat_sym('^') {
            Ok(Some(self.usize_literal("a rank")?))
        } else if let Tok::Sup(e) = *self.peek() {
            self.bump();
            Ok(Some(e as usize))
        } else {
            Ok(None)
        }
    }

    fn is_summand_start(&self) -> bool {
        match self.peek() {
            Tok::Int(_) => {
                matches!(self.peek_at(1), Tok::Ident(s) if s == "Z")
                    || *self.peek_at(1) == Tok::Sym('⊕')
            }
            Tok::Ident(s) => s == "Z" && *self.peek_at(1) == Tok::Sym('⊕'),
            _ => false,
        }
    }

    /// `0`, `Z` or `dZ`, as the generator `d` of `dZ`.
    fn summand(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if matches!(self.peek(), Tok::Ident(s) if s == "Z") {
                    self.bump();
                } else if !n.is_zero() {
                    return self.err("expected `Z` after the coefficient");
                }
                Ok(n)
            }
            Tok::Ident(s) if s == "Z" => {
                self.bump();
                Ok(BigInt::one())
            }
            other => self.err(format!(
                "expected `0`, `Z` or `dZ`, found {}",
                Self::describe(&other)
            )),
        }
    }
}
