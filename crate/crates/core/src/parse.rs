//! Recursive-descent parser for objects and structural terms.
//!
//! ```text
//! obj     := oatom ("*" oatom)*          left-associative
//! oatom   := ident | "I" | "(" obj ")"
//! term    := tensor ("." term)?          right-associative
//! tensor  := tatom ("*" tatom)*          left-associative
//! tatom   := prim "(" obj ("," obj)* ")" | "(" term ")"
//! ```

use thiserror::Error;

use crate::syntax::{Letter, MorTerm, Obj};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Star,
    Dot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Star => "`*`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'*' => Tok::Star,
            b'.' => Tok::Dot,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

/// Token cursor shared by the structural and standard-language parsers.
pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected trailing {}", t.describe())),
        }
    }

    pub(crate) fn obj(&mut self) -> Result<Obj, ParseError> {
        let mut acc = self.obj_atom()?;
        while self.eat(&Tok::Star) {
            acc = Obj::prod(acc, self.obj_atom()?);
        }
        Ok(acc)
    }

    fn obj_atom(&mut self) -> Result<Obj, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.obj()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) if name == "I" => {
                self.pos += 1;
                Ok(Obj::Unit)
            }
            Some(Tok::Ident(name)) => match Letter::new(&name) {
                Ok(l) => {
                    self.pos += 1;
                    Ok(Obj::Atom(l))
                }
                Err(e) => self.error(e.to_string()),
            },
            _ => self.unexpected("an object"),
        }
    }

    /// Parses `"(" obj ("," obj)* ")"` with exactly `arity` arguments.
    pub(crate) fn obj_args(&mut self, name: &str, arity: usize) -> Result<Vec<Obj>, ParseError> {
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let mut args = vec![self.obj()?];
        while self.eat(&Tok::Comma) {
            args.push(self.obj()?);
        }
        if args.len() != arity {
            return self.error(format!(
                "`{name}` takes {arity} object argument(s), got {}",
                args.len()
            ));
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    /// Generic `term := tensor ("." term)?` driver; `atom` parses the
    /// innermost level and `tensor` combines two operands.
    pub(crate) fn composite<T>(
        &mut self,
        atom: &mut dyn FnMut(&mut Parser) -> Result<T, ParseError>,
        tensor: Option<&dyn Fn(T, T) -> T>,
        comp: &dyn Fn(T, T) -> T,
    ) -> Result<T, ParseError> {
        let mut factors = vec![self.tensor_level(atom, tensor)?];
        while self.eat(&Tok::Dot) {
            factors.push(self.tensor_level(atom, tensor)?);
        }
        let mut acc = factors.pop().expect("nonempty");
        while let Some(f) = factors.pop() {
            acc = comp(f, acc);
        }
        Ok(acc)
    }

    fn tensor_level<T>(
        &mut self,
        atom: &mut dyn FnMut(&mut Parser) -> Result<T, ParseError>,
        tensor: Option<&dyn Fn(T, T) -> T>,
    ) -> Result<T, ParseError> {
        let mut acc = atom(self)?;
        if let Some(tensor) = tensor {
            while self.eat(&Tok::Star) {
                acc = tensor(acc, atom(self)?);
            }
        }
        Ok(acc)
    }

    /// Consumes a parenthesized group if one starts here, parsing its body
    /// with `inner`.
    pub(crate) fn paren_group<T>(
        &mut self,
        inner: &mut dyn FnMut(&mut Parser) -> Result<T, ParseError>,
    ) -> Option<Result<T, ParseError>> {
        if !self.eat(&Tok::LParen) {
            return None;
        }
        Some(inner(self).and_then(|t| self.expect(Tok::RParen, "`)`").map(|_| t)))
    }

    /// Consumes an identifier, returning it with its byte offset.
    pub(crate) fn ident(&mut self, wanted: &str) -> Result<(usize, String), ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((at, Tok::Ident(name))) => {
                self.pos += 1;
                Ok((at, name))
            }
            _ => self.unexpected(wanted),
        }
    }

    pub(crate) fn comma(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Comma, "`,`")
    }

    pub(crate) fn lparen(&mut self, after: &str) -> Result<(), ParseError> {
        self.expect(Tok::LParen, &format!("`(` after `{after}`"))
    }

    pub(crate) fn rparen(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::RParen, "`)`")
    }
}

pub fn parse_obj(text: &str) -> Result<Obj, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.obj()?;
    p.finish()?;
    Ok(a)
}

pub fn print_obj(a: &Obj) -> String {
    a.to_string()
}

pub fn parse_term(text: &str) -> Result<MorTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = term(&mut p)?;
    p.finish()?;
    Ok(t)
}

pub fn print_term(t: &MorTerm) -> String {
    t.to_string()
}

fn term(p: &mut Parser) -> Result<MorTerm, ParseError> {
    p.composite(&mut term_atom, Some(&MorTerm::tensor), &MorTerm::comp)
}

fn term_atom(p: &mut Parser) -> Result<MorTerm, ParseError> {
    if let Some(group) = p.paren_group(&mut term) {
        return group;
    }
    let (at, name) = p.ident("a primitive or `(`")?;
    if name == "c_m" {
        let a = p.obj_args(&name, 4)?;
        return Ok(MorTerm::c_m(&a[0], &a[1], &a[2], &a[3]));
    }
    let Some(arity) = primitive_arity(&name) else {
        return Err(ParseError {
            position: at,
            message: format!("unknown primitive `{name}`"),
        });
    };
    let args = p.obj_args(&name, arity)?;
    Ok(primitive(&name, args).expect("arity checked"))
}

/// Number of object parameters of a primitive name.
pub(crate) fn primitive_arity(name: &str) -> Option<usize> {
    match name {
        "id" | "sigma" | "sigma_i" | "delta" | "delta_i" | "w" | "k" => Some(1),
        "c" => Some(2),
        "b" | "b_i" => Some(3),
        _ => None,
    }
}

/// Builds a primitive from its name and parameters.
pub(crate) fn primitive(name: &str, args: Vec<Obj>) -> Option<MorTerm> {
    if primitive_arity(name) != Some(args.len()) {
        return None;
    }
    let mut a = args.into_iter();
    let mut next = || a.next().expect("arity checked");
    Some(match name {
        "id" => MorTerm::Id(next()),
        "sigma" => MorTerm::Sigma(next()),
        "sigma_i" => MorTerm::SigmaInv(next()),
        "delta" => MorTerm::Delta(next()),
        "delta_i" => MorTerm::DeltaInv(next()),
        "w" => MorTerm::W(next()),
        "k" => MorTerm::K(next()),
        "c" => MorTerm::C(next(), next()),
        "b" => MorTerm::BAssoc(next(), next(), next()),
        "b_i" => MorTerm::BAssocInv(next(), next(), next()),
        _ => return None,
    })
}
