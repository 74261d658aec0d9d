//! Small expression language for entering function-algebra elements on
//! the command line: complex literals, the variable `t`, arithmetic,
//! powers, `exp`/`sin`/`cos`/`abs`, the imaginary unit `i`, and
//! `indicator(a,b)` for characteristic functions of open intervals.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::error::{CoreError, Result};

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq)]
enum Ast {
    Const(C64),
    Var,
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Call(Func, Vec<Ast>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
    Indicator,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> CoreError {
        CoreError::ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", byte as char)))
        }
    }

    fn parse_expr(&mut self) -> Result<Ast> {
        let mut node = self.parse_term()?;
        loop {
            if self.eat(b'+') {
                node = Ast::Add(Box::new(node), Box::new(self.parse_term()?));
            } else if self.eat(b'-') {
                node = Ast::Sub(Box::new(node), Box::new(self.parse_term()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Ast> {
        let mut node = self.parse_unary()?;
        loop {
            if self.eat(b'*') {
                node = Ast::Mul(Box::new(node), Box::new(self.parse_unary()?));
            } else if self.eat(b'/') {
                node = Ast::Div(Box::new(node), Box::new(self.parse_unary()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Ast> {
        if self.eat(b'-') {
            return Ok(Ast::Neg(Box::new(self.parse_unary()?)));
        }
        if self.eat(b'+') {
            return self.parse_unary();
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Ast> {
        let base = self.parse_atom()?;
        if self.eat(b'^') {
            // right-associative
            let exp = self.parse_unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.parse_number(),
            Some(c) if c.is_ascii_alphabetic() => self.parse_ident(),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn parse_number(&mut self) -> Result<Ast> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent suffix like 1e-3
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("invalid number '{text}'")))?;
        Ok(Ast::Const(C64::new(value, 0.0)))
    }

    fn parse_ident(&mut self) -> Result<Ast> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match name {
            "t" => Ok(Ast::Var),
            "i" => Ok(Ast::Const(C64::new(0.0, 1.0))),
            "pi" => Ok(Ast::Const(C64::new(std::f64::consts::PI, 0.0))),
            "exp" | "sin" | "cos" | "abs" | "indicator" => {
                let func = match name {
                    "exp" => Func::Exp,
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "abs" => Func::Abs,
                    _ => Func::Indicator,
                };
                self.expect(b'(')?;
                let mut args = vec![self.parse_expr()?];
                while self.eat(b',') {
                    args.push(self.parse_expr()?);
                }
                self.expect(b')')?;
                let arity = if func == Func::Indicator { 2 } else { 1 };
                if args.len() != arity {
                    return Err(self.error(format!("{name} takes {arity} argument(s)")));
                }
                Ok(Ast::Call(func, args))
            }
            _ => {
                self.pos = start;
                Err(self.error(format!("unknown identifier '{name}'")))
            }
        }
    }
}

fn eval(ast: &Ast, t: f64) -> C64 {
    match ast {
        Ast::Const(c) => *c,
        Ast::Var => C64::new(t, 0.0),
        Ast::Add(a, b) => eval(a, t) + eval(b, t),
        Ast::Sub(a, b) => eval(a, t) - eval(b, t),
        Ast::Mul(a, b) => eval(a, t) * eval(b, t),
        Ast::Div(a, b) => eval(a, t) / eval(b, t),
        Ast::Pow(a, b) => {
            let base = eval(a, t);
            let exp = eval(b, t);
            if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= i32::MAX as f64 {
                base.powi(exp.re as i32)
            } else {
                base.powc(exp)
            }
        }
        Ast::Neg(a) => -eval(a, t),
        Ast::Call(func, args) => match func {
            Func::Exp => eval(&args[0], t).exp(),
            Func::Sin => eval(&args[0], t).sin(),
            Func::Cos => eval(&args[0], t).cos(),
            Func::Abs => C64::new(eval(&args[0], t).norm(), 0.0),
            Func::Indicator => {
                let a = eval(&args[0], t).re;
                let b = eval(&args[1], t).re;
                if t > a && t < b {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        },
    }
}

/// Parse `text` and sample it on the grid of `kind`.
pub fn parse_expression(text: &str, kind: AlgebraKind) -> Result<AlgebraElement> {
    if !kind.is_function() {
        return Err(CoreError::KindUnsupported(
            "expressions evaluate over function algebras".into(),
        ));
    }
    let mut parser = Parser::new(text);
    let ast = parser.parse_expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("trailing input"));
    }
    let mut values = Vec::with_capacity(kind.fiber_count());
    for idx in 0..kind.fiber_count() {
        let t = kind.fiber_position(idx);
        let v = eval(&ast, t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(CoreError::EvalError {
                message: format!("non-finite value at t = {t}"),
            });
        }
        values.push(v);
    }
    AlgebraElement::from_grid_values(kind, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_linear_function() {
        let kind = AlgebraKind::continuous(256).unwrap();
        let alpha = parse_expression("t + 0.5", kind).unwrap();
        assert!((alpha.norm() - 1.5).abs() <= 1e-12);
        assert!((alpha.inf_abs() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn indicator_and_constants() {
        let kind = AlgebraKind::step(256).unwrap();
        let chi = parse_expression("indicator(0, 0.5)", kind).unwrap();
        let direct = AlgebraElement::indicator(kind, 0.0, 0.5).unwrap();
        assert!(chi.distance_to(&direct).unwrap() <= 1e-15);

        let two_i = parse_expression("2*i", kind).unwrap();
        assert!((two_i.norm() - 2.0).abs() <= 1e-12);
        assert_eq!(two_i.grid_values().unwrap()[0], C64::new(0.0, 2.0));
    }

    #[test]
    fn reports_position_on_malformed_input() {
        let kind = AlgebraKind::continuous(16).unwrap();
        match parse_expression("t +", kind) {
            Err(CoreError::ParseError { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero_is_an_eval_error() {
        let kind = AlgebraKind::continuous(16).unwrap();
        assert!(matches!(
            parse_expression("1/t", kind),
            Err(CoreError::EvalError { .. })
        ));
    }

    #[test]
    fn powers_and_functions() {
        let kind = AlgebraKind::continuous(64).unwrap();
        let a = parse_expression("exp(i*t)^2", kind).unwrap();
        let b = parse_expression("exp(2*i*t)", kind).unwrap();
        assert!(a.distance_to(&b).unwrap() <= 1e-12);
        let c = parse_expression("abs(-3*t)", kind).unwrap();
        assert!((c.norm() - 3.0).abs() <= 1e-12);
    }
}
