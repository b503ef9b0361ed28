//! Minimal expression language for analytic curve components.
//!
//! Grammar: numbers, the parameter (`s` or `t`), constants `pi` and `e`,
//! binary `+ - * / ^`, unary minus, parentheses and the functions `sin`,
//! `cos`, `sinh`, `cosh`, `exp`. Unknown identifiers are errors.
//!
//! Expressions can be differentiated symbolically, which is how analytic
//! curve documents obtain exact jets.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Exp => x.exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// Parsed expression in one real variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expr(format!(
                "unexpected {:?} in `{src}`",
                p.tokens[p.pos]
            )));
        }
        Ok(Self {
            root,
            source: src.trim().to_string(),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval(&self.root, x)
    }

    pub fn is_constant(&self) -> bool {
        !has_var(&self.root)
    }

    /// Symbolic derivative with respect to the parameter.
    pub fn derivative(&self) -> Result<Expr> {
        let root = simplify(diff(&self.root)?);
        let source = render(&root);
        Ok(Expr { root, source })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Expr(format!("bad number `{text}`")))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c == '(' {
            out.push(Token::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Token::RParen);
            i += 1;
        } else {
            return Err(Error::Expr(format!("unexpected character `{c}`")));
        }
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

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Node::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Node::Num(v)),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    other => Err(Error::Expr(format!("expected `)`, found {other:?}"))),
                }
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "s" | "t" => Ok(Node::Var),
                "pi" => Ok(Node::Num(std::f64::consts::PI)),
                "e" => Ok(Node::Num(std::f64::consts::E)),
                _ => {
                    let func = Func::from_name(&name)
                        .ok_or_else(|| Error::Expr(format!("unknown identifier `{name}`")))?;
                    match self.next() {
                        Some(Token::LParen) => {}
                        other => {
                            return Err(Error::Expr(format!(
                                "expected `(` after `{name}`, found {other:?}"
                            )))
                        }
                    }
                    let arg = self.expr()?;
                    match self.next() {
                        Some(Token::RParen) => Ok(Node::Call(func, Box::new(arg))),
                        other => Err(Error::Expr(format!("expected `)`, found {other:?}"))),
                    }
                }
            },
            other => Err(Error::Expr(format!("unexpected {other:?}"))),
        }
    }
}

fn eval(n: &Node, x: f64) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Var => x,
        Node::Neg(a) => -eval(a, x),
        Node::Add(a, b) => eval(a, x) + eval(b, x),
        Node::Sub(a, b) => eval(a, x) - eval(b, x),
        Node::Mul(a, b) => eval(a, x) * eval(b, x),
        Node::Div(a, b) => eval(a, x) / eval(b, x),
        Node::Pow(a, b) => {
            let (base, exp) = (eval(a, x), eval(b, x));
            if exp.fract() == 0.0 && exp.abs() <= i32::MAX as f64 {
                base.powi(exp as i32)
            } else {
                base.powf(exp)
            }
        }
        Node::Call(f, a) => f.apply(eval(a, x)),
    }
}

fn has_var(n: &Node) -> bool {
    match n {
        Node::Num(_) => false,
        Node::Var => true,
        Node::Neg(a) | Node::Call(_, a) => has_var(a),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
            has_var(a) || has_var(b)
        }
    }
}

fn num(v: f64) -> Node {
    Node::Num(v)
}

fn bx(n: Node) -> Box<Node> {
    Box::new(n)
}

fn diff(n: &Node) -> Result<Node> {
    Ok(match n {
        Node::Num(_) => num(0.0),
        Node::Var => num(1.0),
        Node::Neg(a) => Node::Neg(bx(diff(a)?)),
        Node::Add(a, b) => Node::Add(bx(diff(a)?), bx(diff(b)?)),
        Node::Sub(a, b) => Node::Sub(bx(diff(a)?), bx(diff(b)?)),
        Node::Mul(a, b) => Node::Add(
            bx(Node::Mul(bx(diff(a)?), b.clone())),
            bx(Node::Mul(a.clone(), bx(diff(b)?))),
        ),
        Node::Div(a, b) => Node::Div(
            bx(Node::Sub(
                bx(Node::Mul(bx(diff(a)?), b.clone())),
                bx(Node::Mul(a.clone(), bx(diff(b)?))),
            )),
            bx(Node::Pow(b.clone(), bx(num(2.0)))),
        ),
        Node::Pow(a, b) => {
            if !has_var(b) {
                // d(u^c) = c·u^(c−1)·u′
                Node::Mul(
                    bx(Node::Mul(
                        b.clone(),
                        bx(Node::Pow(a.clone(), bx(Node::Sub(b.clone(), bx(num(1.0)))))),
                    )),
                    bx(diff(a)?),
                )
            } else if !has_var(a) {
                // d(c^v) = c^v·ln(c)·v′
                let c = eval(a, 0.0);
                if !(c > 0.0) {
                    return Err(Error::Expr(format!(
                        "cannot differentiate power with non-positive base {c}"
                    )));
                }
                Node::Mul(bx(Node::Mul(bx(n.clone()), bx(num(c.ln())))), bx(diff(b)?))
            } else {
                return Err(Error::Expr(
                    "cannot differentiate a power whose base and exponent both vary".into(),
                ));
            }
        }
        Node::Call(f, a) => {
            let outer = match f {
                Func::Sin => Node::Call(Func::Cos, a.clone()),
                Func::Cos => Node::Neg(bx(Node::Call(Func::Sin, a.clone()))),
                Func::Sinh => Node::Call(Func::Cosh, a.clone()),
                Func::Cosh => Node::Call(Func::Sinh, a.clone()),
                Func::Exp => Node::Call(Func::Exp, a.clone()),
            };
            Node::Mul(bx(outer), bx(diff(a)?))
        }
    })
}

fn simplify(n: Node) -> Node {
    use Node::*;
    match n {
        Neg(a) => match simplify(*a) {
            Num(v) => Num(-v),
            Neg(inner) => *inner,
            a => Neg(bx(a)),
        },
        Add(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x + y),
            (Num(z), e) | (e, Num(z)) if z == 0.0 => e,
            (a, b) => Add(bx(a), bx(b)),
        },
        Sub(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x - y),
            (e, Num(z)) if z == 0.0 => e,
            (Num(z), e) if z == 0.0 => Neg(bx(e)),
            (a, b) => Sub(bx(a), bx(b)),
        },
        Mul(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(x), Num(y)) => Num(x * y),
            (Num(z), _) | (_, Num(z)) if z == 0.0 => Num(0.0),
            (Num(o), e) | (e, Num(o)) if o == 1.0 => e,
            (a, b) => Mul(bx(a), bx(b)),
        },
        Div(a, b) => match (simplify(*a), simplify(*b)) {
            (Num(z), _) if z == 0.0 => Num(0.0),
            (e, Num(o)) if o == 1.0 => e,
            (a, b) => Div(bx(a), bx(b)),
        },
        Pow(a, b) => match (simplify(*a), simplify(*b)) {
            (_, Num(z)) if z == 0.0 => Num(1.0),
            (e, Num(o)) if o == 1.0 => e,
            (a, b) => Pow(bx(a), bx(b)),
        },
        Call(f, a) => Call(f, bx(simplify(*a))),
        other => other,
    }
}

fn render(n: &Node) -> String {
    match n {
        Node::Num(v) => {
            if *v < 0.0 {
                format!("({v:?})")
            } else {
                format!("{v:?}")
            }
        }
        Node::Var => "s".into(),
        Node::Neg(a) => format!("(-{})", render(a)),
        Node::Add(a, b) => format!("({} + {})", render(a), render(b)),
        Node::Sub(a, b) => format!("({} - {})", render(a), render(b)),
        Node::Mul(a, b) => format!("({} * {})", render(a), render(b)),
        Node::Div(a, b) => format!("({} / {})", render(a), render(b)),
        Node::Pow(a, b) => format!("({} ^ {})", render(a), render(b)),
        Node::Call(f, a) => format!("{}({})", f.name(), render(a)),
    }
}
