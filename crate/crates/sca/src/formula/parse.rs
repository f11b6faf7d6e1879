use super::{Formula, Term};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Zero,
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Lt,
    Plus,
    Star,
    Tilde,
    And,
    Or,
    Arrow,
    Iff,
}

const RESERVED: &[&str] = &["E", "A", "S", "bot", "pair", "p0", "p1"];

pub(crate) fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = src.get(i..i + 2).unwrap_or("");
        let three = src.get(i..i + 3).unwrap_or("");
        let tok = if three == "<->" {
            i += 3;
            Tok::Iff
        } else if two == "->" {
            i += 2;
            Tok::Arrow
        } else if two == "/\\" {
            i += 2;
            Tok::And
        } else if two == "\\/" {
            i += 2;
            Tok::Or
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if &src[start..i] != "0" {
                return Err(ParseError {
                    pos: start,
                    message: format!(
                        "numeral `{}` is not a term; write S(...) over 0",
                        &src[start..i]
                    ),
                });
            }
            Tok::Zero
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '=' => Tok::Eq,
                '<' => Tok::Lt,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '~' => Tok::Tilde,
                _ => {
                    return Err(ParseError {
                        pos: start,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    pub(crate) fn error(&self, message: String) -> ParseError {
        ParseError {
            pos: self.offset(),
            message,
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }
}

pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let mut c = Cursor::new(src)?;
    let f = formula(&mut c)?;
    if !c.at_end() {
        return Err(c.error("unexpected trailing input".into()));
    }
    Ok(f)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut c = Cursor::new(src)?;
    let t = term(&mut c)?;
    if !c.at_end() {
        return Err(c.error("unexpected trailing input".into()));
    }
    Ok(t)
}

fn formula(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut lhs = implication(c)?;
    while c.eat(&Tok::Iff) {
        let rhs = implication(c)?;
        lhs = Formula::iff(lhs, rhs);
    }
    Ok(lhs)
}

fn implication(c: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = disjunction(c)?;
    if c.eat(&Tok::Arrow) {
        let rhs = implication(c)?;
        return Ok(Formula::imp(lhs, rhs));
    }
    Ok(lhs)
}

fn disjunction(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut lhs = conjunction(c)?;
    while c.eat(&Tok::Or) {
        let rhs = conjunction(c)?;
        lhs = Formula::or(lhs, rhs);
    }
    Ok(lhs)
}

fn conjunction(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut lhs = unary(c)?;
    while c.eat(&Tok::And) {
        let rhs = unary(c)?;
        lhs = Formula::and(lhs, rhs);
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<Formula, ParseError> {
    if c.eat(&Tok::Tilde) {
        return Ok(Formula::not(unary(c)?));
    }
    let quant = match c.peek_ident() {
        Some("E") => Some(true),
        Some("A") => Some(false),
        _ => None,
    };
    if let Some(is_exists) = quant {
        c.bump();
        let var = match c.bump() {
            Some(Tok::Ident(v)) if !is_reserved(&v) => v,
            _ => return Err(c.error("expected a variable after quantifier".into())),
        };
        let bound = if c.eat(&Tok::Lt) {
            Some(term(c)?)
        } else {
            None
        };
        c.expect(&Tok::Dot, "`.` after quantified variable")?;
        let body = formula(c)?;
        return Ok(match (is_exists, bound) {
            (true, None) => Formula::exists(&var, body),
            (false, None) => Formula::forall(&var, body),
            (true, Some(t)) => Formula::exists_below(&var, t, body),
            (false, Some(t)) => Formula::forall_below(&var, t, body),
        });
    }
    primary(c)
}

fn primary(c: &mut Cursor) -> Result<Formula, ParseError> {
    if c.peek_ident() == Some("bot") {
        c.bump();
        return Ok(Formula::Bot);
    }
    if c.peek() == Some(&Tok::LParen) {
        let save = c.pos;
        if let Ok(a) = atom(c) {
            return Ok(a);
        }
        c.pos = save;
        c.bump();
        let f = formula(c)?;
        c.expect(&Tok::RParen, "`)`")?;
        return Ok(f);
    }
    atom(c)
}

fn atom(c: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = term(c)?;
    if c.eat(&Tok::Eq) {
        Ok(Formula::Eq(lhs, term(c)?))
    } else if c.eat(&Tok::Lt) {
        Ok(Formula::Lt(lhs, term(c)?))
    } else {
        Err(c.error("expected `=` or `<` after term".into()))
    }
}

fn term(c: &mut Cursor) -> Result<Term, ParseError> {
    let mut lhs = product(c)?;
    while c.eat(&Tok::Plus) {
        lhs = Term::add(lhs, product(c)?);
    }
    Ok(lhs)
}

fn product(c: &mut Cursor) -> Result<Term, ParseError> {
    let mut lhs = term_atom(c)?;
    while c.eat(&Tok::Star) {
        lhs = Term::mul(lhs, term_atom(c)?);
    }
    Ok(lhs)
}

fn term_atom(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek().cloned() {
        Some(Tok::Zero) => {
            c.bump();
            Ok(Term::Zero)
        }
        Some(Tok::LParen) => {
            c.bump();
            let t = term(c)?;
            c.expect(&Tok::RParen, "`)`")?;
            Ok(t)
        }
        Some(Tok::Ident(name)) => {
            let call = c.peek_at(1) == Some(&Tok::LParen);
            match name.as_str() {
                "S" | "p0" | "p1" if call => {
                    c.bump();
                    c.bump();
                    let t = term(c)?;
                    c.expect(&Tok::RParen, "`)`")?;
                    Ok(match name.as_str() {
                        "S" => Term::succ(t),
                        "p0" => Term::proj0(t),
                        _ => Term::proj1(t),
                    })
                }
                "pair" if call => {
                    c.bump();
                    c.bump();
                    let a = term(c)?;
                    c.expect(&Tok::Comma, "`,` in pair")?;
                    let b = term(c)?;
                    c.expect(&Tok::RParen, "`)`")?;
                    Ok(Term::pair(a, b))
                }
                n if is_reserved(n) => Err(c.error(format!("`{n}` cannot be used as a variable"))),
                _ => {
                    c.bump();
                    Ok(Term::Var(name))
                }
            }
        }
        _ => Err(c.error("expected a term".into())),
    }
}
