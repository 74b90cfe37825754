//! Recursive-descent parser for the program grammar.

use super::ast::{Action, Effect, Objects, Predicate, Program, ValueSet};
use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(f64),
    Color(String),
    AndAnd,
    OrOr,
    Punct(char),
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, at: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: at,
            message: msg.into(),
        })
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn signed_number(&self) -> bool {
        self.src[self.pos + 1..]
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_digit() || c == '.')
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        loop {
            self.take_while(char::is_whitespace);
            let at = self.pos;
            let Some(c) = self.peek_char() else {
                out.push((at, Tok::Eof));
                return Ok(out);
            };
            let tok = match c {
                c if c.is_ascii_alphabetic() || c == '_' => {
                    Tok::Ident(self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string())
                }
                c if c.is_ascii_digit() || ((c == '-' || c == '+') && self.signed_number()) => {
                    self.pos += c.len_utf8();
                    self.take_while(|c| c.is_ascii_digit() || c == '.');
                    let mut text = &self.src[at..self.pos];
                    if matches!(self.peek_char(), Some('e' | 'E')) {
                        self.pos += 1;
                        if matches!(self.peek_char(), Some('-' | '+')) {
                            self.pos += 1;
                        }
                        self.take_while(|c| c.is_ascii_digit());
                        text = &self.src[at..self.pos];
                    }
                    match text.parse::<f64>() {
                        Ok(v) if v.is_finite() => Tok::Num(v),
                        _ => return self.err(at, format!("invalid number `{text}`")),
                    }
                }
                '"' => {
                    self.pos += 1;
                    let mut s = String::new();
                    loop {
                        match self.peek_char() {
                            None => return self.err(at, "unterminated string"),
                            Some('"') => {
                                self.pos += 1;
                                break;
                            }
                            Some('\\') => {
                                self.pos += 1;
                                match self.peek_char() {
                                    Some('n') => s.push('\n'),
                                    Some(c @ ('"' | '\\')) => s.push(c),
                                    _ => return self.err(self.pos, "invalid escape"),
                                }
                                self.pos += 1;
                            }
                            Some(c) => {
                                s.push(c);
                                self.pos += c.len_utf8();
                            }
                        }
                    }
                    Tok::Str(s)
                }
                '#' => {
                    self.pos += 1;
                    let hex = self.take_while(|c| c.is_ascii_alphanumeric());
                    Tok::Color(format!("#{hex}"))
                }
                '&' | '|' => {
                    self.pos += 1;
                    if self.peek_char() == Some(c) {
                        self.pos += 1;
                        if c == '&' {
                            Tok::AndAnd
                        } else {
                            Tok::OrOr
                        }
                    } else if c == '|' {
                        Tok::Punct('|')
                    } else {
                        return self.err(at, "expected `&&`");
                    }
                }
                '(' | ')' | '{' | '}' | '[' | ']' | ',' | '.' | '!' => {
                    self.pos += 1;
                    Tok::Punct(c)
                }
                c => return self.err(at, format!("unexpected character `{c}`")),
            };
            out.push((at, tok));
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Str(s) => format!("string {s:?}"),
        Tok::Num(v) => format!("number {v}"),
        Tok::Color(c) => format!("color {c}"),
        Tok::AndAnd => "`&&`".into(),
        Tok::OrOr => "`||`".into(),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: Lexer { src, pos: 0 }.tokens()?,
            i: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos(),
            message: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn punct(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        if matches!(self.peek(), Tok::Ident(s) if s == word) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{word}`"))
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn end(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("a name"),
        }
    }

    fn number(&mut self) -> Result<f64> {
        match self.peek() {
            Tok::Num(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => self.fail("a number"),
        }
    }

    fn program(&mut self) -> Result<Program> {
        self.keyword("Apply")?;
        self.punct('(')?;
        let action = self.action()?;
        self.punct(',')?;
        let objects = self.objects()?;
        self.punct(')')?;
        Ok(Program { action, objects })
    }

    fn action(&mut self) -> Result<Action> {
        let at = self.pos();
        let Tok::Ident(head) = self.peek().clone() else {
            return self.fail("an action");
        };
        let action = match head.as_str() {
            "Remove" => {
                self.bump();
                Action::Remove
            }
            "Cover" => {
                self.bump();
                self.punct('(')?;
                let name = self.name()?;
                let Some(effect) = Effect::ALL.into_iter().find(|e| e.name() == name) else {
                    return Err(Error::Syntax {
                        position: at,
                        message: format!("unknown effect `{name}`"),
                    });
                };
                self.punct(')')?;
                Action::Cover { effect }
            }
            "Recolor" => {
                self.bump();
                self.punct('(')?;
                let Tok::Color(color) = self.peek().clone() else {
                    return self.fail("a #RRGGBB color");
                };
                self.bump();
                self.punct(')')?;
                Action::Recolor { color }
            }
            "Inpaint" => {
                self.bump();
                self.punct('(')?;
                let Tok::Str(prompt) = self.peek().clone() else {
                    return self.fail("a quoted prompt");
                };
                self.bump();
                self.punct(')')?;
                Action::Inpaint { prompt }
            }
            _ => return self.fail("an action"),
        };
        action.validate().map_err(|e| Error::Syntax {
            position: at,
            message: e.to_string(),
        })?;
        Ok(action)
    }

    fn objects(&mut self) -> Result<Objects> {
        if self.is_keyword("All") {
            self.bump();
            return Ok(Objects::All);
        }
        if self.is_keyword("Filter") {
            self.bump();
            self.punct('(')?;
            let p = self.pred()?;
            self.punct(',')?;
            let inner = self.objects()?;
            self.punct(')')?;
            return Ok(Objects::Filter(Box::new(p), Box::new(inner)));
        }
        self.fail("`All` or `Filter`")
    }

    fn pred(&mut self) -> Result<Predicate> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            left = Predicate::or(left, self.conj()?);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Predicate> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            left = Predicate::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Predicate> {
        if *self.peek() == Tok::Punct('!') {
            self.bump();
            return Ok(Predicate::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Predicate> {
        match self.peek().clone() {
            Tok::Punct('(') => {
                self.bump();
                let p = self.pred()?;
                self.punct(')')?;
                Ok(p)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Predicate::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Predicate::False)
            }
            Tok::Ident(s) if s == "class" => {
                self.bump();
                self.punct('(')?;
                let c = self.name()?;
                self.punct(')')?;
                Ok(Predicate::ClassIs(c))
            }
            Tok::Ident(s) if s == "x" => {
                self.bump();
                self.punct('.')?;
                let attribute = self.name()?;
                let negated = if self.is_keyword("in") {
                    false
                } else if self.is_keyword("notin") {
                    true
                } else {
                    return self.fail("`in` or `notin`");
                };
                self.bump();
                let values = self.value_set()?;
                Ok(Predicate::member(&attribute, negated, values))
            }
            _ => self.fail("a predicate"),
        }
    }

    fn value_set(&mut self) -> Result<ValueSet> {
        if *self.peek() == Tok::Punct('{') {
            self.bump();
            let mut items = Vec::new();
            if *self.peek() != Tok::Punct('}') {
                items.push(self.name()?);
                while *self.peek() == Tok::Punct(',') {
                    self.bump();
                    items.push(self.name()?);
                }
            }
            self.punct('}')?;
            return Ok(ValueSet::Symbols(items));
        }
        let mut items = vec![self.interval()?];
        while *self.peek() == Tok::Punct('|') {
            self.bump();
            items.push(self.interval()?);
        }
        Ok(ValueSet::Intervals(items))
    }

    fn interval(&mut self) -> Result<Interval> {
        let lo_closed = match self.peek() {
            Tok::Punct('[') => true,
            Tok::Punct('(') => false,
            _ => return self.fail("`{`, `[` or `(`"),
        };
        self.bump();
        let lo = self.number()?;
        self.punct(',')?;
        let hi = self.number()?;
        let hi_closed = match self.peek() {
            Tok::Punct(']') => true,
            Tok::Punct(')') => false,
            _ => return self.fail("`]` or `)`"),
        };
        self.bump();
        Ok(Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        })
    }
}

pub fn parse_program(text: &str) -> Result<Program> {
    let mut p = Parser::new(text)?;
    let program = p.program()?;
    p.end()?;
    Ok(program)
}

pub fn parse_predicate(text: &str) -> Result<Predicate> {
    let mut p = Parser::new(text)?;
    let pred = p.pred()?;
    p.end()?;
    Ok(pred)
}

pub fn parse_action(text: &str) -> Result<Action> {
    let mut p = Parser::new(text)?;
    let action = p.action()?;
    p.end()?;
    Ok(action)
}
