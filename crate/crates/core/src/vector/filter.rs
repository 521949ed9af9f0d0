//! Attribute filter expressions.
//!
//! Grammar (keywords are case-insensitive):
//!
//! ```text
//! expr    := and ( ("or" | "||") and )*
//! and     := unary ( ("and" | "&&") unary )*
//! unary   := ("not" | "!") unary | "(" expr ")" | "true" | clause
//! clause  := key op literal | key "in" "[" literal ("," literal)* "]"
//! op      := = | == | != | ≠ | < | <= | ≤ | > | >= | ≥
//! literal := "string" | number | true | false | null
//! ```
//!
//! A clause whose key is absent from a feature is false.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::AttrValue;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    True,
    Cmp { key: String, op: CmpOp, value: AttrValue },
    In { key: String, values: Vec<AttrValue> },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

/// A parsed attribute predicate. Keeps its source text for reporting.
#[derive(Clone, Debug, PartialEq)]
pub struct AttributeFilter {
    source: String,
    expr: Expr,
}

impl AttributeFilter {
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let expr = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(Error::MalformedExpression(format!("unexpected {} in `{text}`", p.tokens[p.pos])));
        }
        Ok(AttributeFilter { source: text.to_string(), expr })
    }

    /// Filter that accepts every feature.
    pub fn tautology() -> Self {
        AttributeFilter { source: "true".into(), expr: Expr::True }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn matches(&self, attrs: &BTreeMap<String, AttrValue>) -> bool {
        eval(&self.expr, attrs)
    }
}

impl FromStr for AttributeFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AttributeFilter::parse(s)
    }
}

impl fmt::Display for AttributeFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn eval(e: &Expr, attrs: &BTreeMap<String, AttrValue>) -> bool {
    match e {
        Expr::True => true,
        Expr::Not(inner) => !eval(inner, attrs),
        Expr::And(a, b) => eval(a, attrs) && eval(b, attrs),
        Expr::Or(a, b) => eval(a, attrs) || eval(b, attrs),
        Expr::Cmp { key, op, value } => attrs.get(key).is_some_and(|v| compare(v, *op, value)),
        Expr::In { key, values } => attrs.get(key).is_some_and(|v| values.iter().any(|lit| compare(v, CmpOp::Eq, lit))),
    }
}

fn as_number(v: &AttrValue) -> Option<f64> {
    match v {
        AttrValue::Num(n) => Some(*n),
        AttrValue::Str(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn compare(attr: &AttrValue, op: CmpOp, lit: &AttrValue) -> bool {
    let ord = match (attr, lit) {
        (AttrValue::Str(a), AttrValue::Str(b)) => Some(a.as_str().cmp(b.as_str())),
        (AttrValue::Bool(a), AttrValue::Bool(b)) => Some(a.cmp(b)),
        (AttrValue::Null, AttrValue::Null) => Some(Ordering::Equal),
        (_, AttrValue::Num(_)) | (AttrValue::Num(_), _) => match (as_number(attr), as_number(lit)) {
            (Some(a), Some(b)) => a.partial_cmp(&b),
            _ => None,
        },
        _ => None,
    };
    match (op, ord) {
        (CmpOp::Ne, None) => true,
        (_, None) => false,
        (CmpOp::Eq, Some(o)) => o == Ordering::Equal,
        (CmpOp::Ne, Some(o)) => o != Ordering::Equal,
        (CmpOp::Lt, Some(o)) => o == Ordering::Less,
        (CmpOp::Le, Some(o)) => o != Ordering::Greater,
        (CmpOp::Gt, Some(o)) => o == Ordering::Greater,
        (CmpOp::Ge, Some(o)) => o != Ordering::Less,
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Str(String),
    Num(f64),
    Op(CmpOp),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    And,
    Or,
    Not,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Str(s) => write!(f, "\"{s}\""),
            Token::Num(n) => write!(f, "{n}"),
            Token::Op(op) => write!(f, "operator {op:?}"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBracket => f.write_str("`[`"),
            Token::RBracket => f.write_str("`]`"),
            Token::Comma => f.write_str("`,`"),
            Token::And => f.write_str("`and`"),
            Token::Or => f.write_str("`or`"),
            Token::Not => f.write_str("`not`"),
        }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedExpression(msg.into())
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match c {
            _ if c.is_whitespace() => i += 1,
            '(' => (out.push(Token::LParen), i += 1).1,
            ')' => (out.push(Token::RParen), i += 1).1,
            '[' => (out.push(Token::LBracket), i += 1).1,
            ']' => (out.push(Token::RBracket), i += 1).1,
            ',' => (out.push(Token::Comma), i += 1).1,
            '≠' => (out.push(Token::Op(CmpOp::Ne)), i += 1).1,
            '≤' => (out.push(Token::Op(CmpOp::Le)), i += 1).1,
            '≥' => (out.push(Token::Op(CmpOp::Ge)), i += 1).1,
            '=' => {
                out.push(Token::Op(CmpOp::Eq));
                i += if next == Some('=') { 2 } else { 1 };
            }
            '!' if next == Some('=') => (out.push(Token::Op(CmpOp::Ne)), i += 2).1,
            '!' => (out.push(Token::Not), i += 1).1,
            '<' if next == Some('=') => (out.push(Token::Op(CmpOp::Le)), i += 2).1,
            '<' => (out.push(Token::Op(CmpOp::Lt)), i += 1).1,
            '>' if next == Some('=') => (out.push(Token::Op(CmpOp::Ge)), i += 2).1,
            '>' => (out.push(Token::Op(CmpOp::Gt)), i += 1).1,
            '&' if next == Some('&') => (out.push(Token::And), i += 2).1,
            '|' if next == Some('|') => (out.push(Token::Or), i += 2).1,
            '"' | '\'' => {
                let quote = c;
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(malformed(format!("unterminated string in `{text}`"))),
                        Some('\\') => {
                            let esc = chars.get(i + 1).ok_or_else(|| malformed("dangling escape"))?;
                            s.push(*esc);
                            i += 2;
                        }
                        Some(&ch) if ch == quote => {
                            i += 1;
                            break;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Token::Str(s));
            }
            _ if c.is_ascii_digit()
                || ((c == '-' || c == '+' || c == '.') && next.is_some_and(|n| n.is_ascii_digit() || n == '.')) =>
            {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric()
                        || chars[i] == '.'
                        || ((chars[i] == '-' || chars[i] == '+') && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let n = lit.parse().map_err(|_| malformed(format!("bad number `{lit}`")))?;
                out.push(Token::Num(n));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | ':' | '.' | '-')) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(match word.to_ascii_lowercase().as_str() {
                    "and" => Token::And,
                    "or" => Token::Or,
                    "not" => Token::Not,
                    _ => Token::Ident(word),
                });
            }
            _ => return Err(malformed(format!("unexpected character `{c}` in `{text}`"))),
        }
    }
    if out.is_empty() {
        return Err(malformed("empty expression"));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| malformed("unexpected end of expression"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        let got = self.next()?;
        if got == t {
            Ok(())
        } else {
            Err(malformed(format!("expected {t}, found {got}")))
        }
    }

    fn or(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = Expr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = Expr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.next()? {
            Token::Not => Ok(Expr::Not(Box::new(self.unary()?))),
            Token::LParen => {
                let e = self.or()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            Token::Ident(w) if w.eq_ignore_ascii_case("true") && !self.next_is_operator() => Ok(Expr::True),
            Token::Ident(w) if w.eq_ignore_ascii_case("false") && !self.next_is_operator() => {
                Ok(Expr::Not(Box::new(Expr::True)))
            }
            Token::Ident(key) | Token::Str(key) => self.clause(key),
            t => Err(malformed(format!("unexpected {t}"))),
        }
    }

    fn next_is_operator(&self) -> bool {
        matches!(self.peek(), Some(Token::Op(_)))
            || matches!(self.peek(), Some(Token::Ident(w)) if w.eq_ignore_ascii_case("in"))
    }

    fn clause(&mut self, key: String) -> Result<Expr> {
        match self.next()? {
            Token::Op(op) => Ok(Expr::Cmp { key, op, value: self.literal()? }),
            Token::Ident(w) if w.eq_ignore_ascii_case("in") => {
                self.expect(Token::LBracket)?;
                let mut values = vec![self.literal()?];
                loop {
                    match self.next()? {
                        Token::Comma => values.push(self.literal()?),
                        Token::RBracket => break,
                        t => return Err(malformed(format!("expected `,` or `]`, found {t}"))),
                    }
                }
                Ok(Expr::In { key, values })
            }
            t => Err(malformed(format!("expected an operator after `{key}`, found {t}"))),
        }
    }

    fn literal(&mut self) -> Result<AttrValue> {
        match self.next()? {
            Token::Str(s) => Ok(AttrValue::Str(s)),
            Token::Num(n) => Ok(AttrValue::Num(n)),
            Token::Ident(w) => match w.to_ascii_lowercase().as_str() {
                "true" => Ok(AttrValue::Bool(true)),
                "false" => Ok(AttrValue::Bool(false)),
                "null" => Ok(AttrValue::Null),
                _ => Err(malformed(format!("expected a literal, found `{w}` (quote strings)"))),
            },
            t => Err(malformed(format!("expected a literal, found {t}"))),
        }
    }
}
