//! Text grammar for ring and algebra elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | 'th' | 't' | 'x' | 'pK' | '(' expr ')'
//! ```
//!
//! `th` generates `T` over its prime ring, `t` is the equal-characteristic
//! uniformizer, `x` is `π_D` and `pK` is `π_K`.

use std::sync::Arc;

use crate::division_algebra::{AlgebraCtx, DElem};
use crate::error::{Error, Result};
use crate::local_ring::{LocalRingCtx, Mode, RingElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Theta,
    T,
    X,
    PiK,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i128),
    Sym(Symbol, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Ident(String),
    Op(char),
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let v = text.parse().map_err(|_| Error::Parse { pos, msg: "integer literal too large".into() })?;
            out.push((Tok::Int(v), pos));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect()), pos));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character '{c}'") });
        }
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek().0 == Tok::Op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.peek().1;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        match self.bump() {
            (Tok::Int(e), p) => {
                let e = i64::try_from(e).map_err(|_| Error::Parse { pos: p, msg: "exponent too large".into() })?;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, pos))
            }
            (_, p) => Err(Error::Parse { pos: p, msg: "expected an integer exponent".into() }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            (Tok::Int(v), _) => Ok(Expr::Int(v)),
            (Tok::Ident(name), pos) => {
                let s = match name.as_str() {
                    "th" => Symbol::Theta,
                    "t" => Symbol::T,
                    "x" => Symbol::X,
                    "pK" => Symbol::PiK,
                    _ => return Err(Error::Parse { pos, msg: format!("unknown symbol '{name}'") }),
                };
                Ok(Expr::Sym(s, pos))
            }
            (Tok::Op('('), _) => {
                let e = self.expr()?;
                let pos = self.peek().1;
                if !self.eat(')') {
                    return Err(Error::Parse { pos, msg: "expected ')'".into() });
                }
                Ok(e)
            }
            (Tok::End, pos) => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
            (tok, pos) => Err(Error::Parse { pos, msg: format!("unexpected token {tok:?}") }),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(s)?, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        (Tok::End, _) => Ok(e),
        (_, pos) => Err(Error::Parse { pos: *pos, msg: "trailing input".into() }),
    }
}

fn ring_symbol(ctx: &Arc<LocalRingCtx>, s: Symbol, pos: usize) -> Result<RingElem> {
    match s {
        Symbol::Theta => Ok(ctx.theta()),
        Symbol::PiK => Ok(ctx.uniformizer()),
        Symbol::T if ctx.mode() == Mode::Equal => Ok(ctx.uniformizer()),
        Symbol::T => Err(Error::Parse { pos, msg: "'t' is only defined in equal characteristic".into() }),
        Symbol::X => Err(Error::Parse { pos, msg: "'x' needs a division algebra".into() }),
    }
}

impl Expr {
    pub fn eval_ring(&self, ctx: &Arc<LocalRingCtx>) -> Result<RingElem> {
        Ok(match self {
            Expr::Int(v) => ctx.from_int(*v),
            Expr::Sym(s, pos) => ring_symbol(ctx, *s, *pos)?,
            Expr::Neg(a) => a.eval_ring(ctx)?.neg(),
            Expr::Add(a, b) => a.eval_ring(ctx)?.try_add(&b.eval_ring(ctx)?)?,
            Expr::Sub(a, b) => a.eval_ring(ctx)?.try_sub(&b.eval_ring(ctx)?)?,
            Expr::Mul(a, b) => a.eval_ring(ctx)?.try_mul(&b.eval_ring(ctx)?)?,
            Expr::Pow(a, e, _) => {
                let base = a.eval_ring(ctx)?;
                if *e >= 0 {
                    base.pow(*e as u64)
                } else {
                    base.inv()?.pow(e.unsigned_abs())
                }
            }
        })
    }

    pub fn eval_algebra(&self, ctx: &Arc<AlgebraCtx>) -> Result<DElem> {
        Ok(match self {
            Expr::Int(v) => DElem::from_t(ctx, &ctx.t().from_int(*v)),
            Expr::Sym(Symbol::X, _) => DElem::pi_d(ctx),
            Expr::Sym(Symbol::PiK, _) => DElem::pi_k(ctx),
            Expr::Sym(s, pos) => DElem::from_t(ctx, &ring_symbol(ctx.t(), *s, *pos)?),
            Expr::Neg(a) => a.eval_algebra(ctx)?.neg(),
            Expr::Add(a, b) => a.eval_algebra(ctx)?.try_add(&b.eval_algebra(ctx)?)?,
            Expr::Sub(a, b) => a.eval_algebra(ctx)?.try_sub(&b.eval_algebra(ctx)?)?,
            Expr::Mul(a, b) => a.eval_algebra(ctx)?.try_mul(&b.eval_algebra(ctx)?)?,
            Expr::Pow(a, e, _) => a.eval_algebra(ctx)?.pow(*e)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Arc<AlgebraCtx> {
        let s = LocalRingCtx::base(3, 1, 4, Mode::Mixed).unwrap();
        AlgebraCtx::new(&LocalRingCtx::unramified(&s, 2).unwrap(), 1).unwrap()
    }

    #[test]
    fn parses_and_evaluates() {
        let a = alg();
        let t = a.t().clone();
        let e = parse("2 + 3*th^2").unwrap().eval_ring(&t).unwrap();
        assert_eq!(e, &t.from_int(2) + &(&t.from_int(3) * &t.theta().pow(2)));
        let six = parse("(3+x)*(3-x)").unwrap().eval_algebra(&a).unwrap();
        assert!(six.agrees_with(&DElem::from_t(&a, &t.from_int(6))));
        let x = parse("x").unwrap().eval_algebra(&a).unwrap();
        let m = x.embed(None).1;
        assert_eq!((m.get(0, 0).clone(), m.get(0, 1).clone()), (t.zero(), t.from_int(3)));
        assert_eq!((m.get(1, 0).clone(), m.get(1, 1).clone()), (t.one(), t.zero()));
        let inv = parse("x^-1 * x").unwrap().eval_algebra(&a).unwrap();
        assert!(inv.agrees_with(&DElem::one(&a)));
        assert_eq!(parse("--1").unwrap(), Expr::Neg(Box::new(Expr::Neg(Box::new(Expr::Int(1))))));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("1 + $"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("(1 + th"), Err(Error::Parse { pos: 7, .. })));
        assert!(matches!(parse("2 ^ th"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("foo"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse("1 2"), Err(Error::Parse { pos: 2, .. })));
        let t = alg().t().clone();
        assert!(matches!(parse("1 + t").unwrap().eval_ring(&t), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("x").unwrap().eval_ring(&t), Err(Error::Parse { pos: 0, .. })));
    }
}
