use super::{BinaryOp, Expr, ExprError, UnaryOp};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the token and the byte offset where it starts.
    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => return self.number(start),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii")
                    .to_string();
                return Ok((Tok::Ident(name), start));
            }
            _ => {
                return Err(ExprError::Syntax {
                    position: start,
                    expected: expected(&["number", "t", "function", "(", "-"]),
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ExprError> {
        let s = self.src;
        let mut p = self.pos;
        let digits = |p: &mut usize| {
            let b = *p;
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > b
        };
        let int = digits(&mut p);
        let mut frac = false;
        if p < s.len() && s[p] == b'.' {
            p += 1;
            frac = digits(&mut p);
        }
        if !int && !frac {
            return Err(ExprError::Syntax {
                position: start,
                expected: expected(&["digit"]),
            });
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            } else {
                return Err(ExprError::Syntax {
                    position: q,
                    expected: expected(&["exponent digits"]),
                });
            }
        }
        let text = std::str::from_utf8(&s[start..p]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| ExprError::Syntax {
            position: start,
            expected: expected(&["number"]),
        })?;
        self.pos = p;
        Ok((Tok::Num(v), start))
    }
}

fn expected(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_pos: usize,
    peeked: Option<(Tok, usize)>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ExprError> {
        let mut lexer = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let (tok, tok_pos) = lexer.next()?;
        Ok(Self {
            lexer,
            tok,
            tok_pos,
            peeked: None,
        })
    }

    fn bump(&mut self) -> Result<(), ExprError> {
        let (tok, pos) = match self.peeked.take() {
            Some(p) => p,
            None => self.lexer.next()?,
        };
        self.tok = tok;
        self.tok_pos = pos;
        Ok(())
    }

    fn peek(&mut self) -> Result<&Tok, ExprError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(&self.peeked.as_ref().expect("just filled").0)
    }

    fn err(&self, exp: &[&str]) -> ExprError {
        ExprError::Syntax {
            position: self.tok_pos,
            expected: expected(exp),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            // A minus sign directly in front of a bare literal folds into the
            // literal, unless the literal is the base of a power.
            if let Tok::Num(v) = self.tok {
                if self.peek()? != &Tok::Caret {
                    self.bump()?;
                    return Ok(Expr::Const(-v));
                }
            }
            let child = self.unary()?;
            return Ok(Expr::unary(UnaryOp::Neg, child));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let mut base = self.primary()?;
        while self.tok == Tok::Caret {
            self.bump()?;
            let e = self.exponent()?;
            base = Expr::pow(base, e);
        }
        Ok(base)
    }

    fn signed_literal(&mut self) -> Result<Option<f64>, ExprError> {
        let sign = match self.tok {
            Tok::Minus => {
                self.bump()?;
                -1.0
            }
            Tok::Plus => {
                self.bump()?;
                1.0
            }
            _ => 1.0,
        };
        match self.tok {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Some(sign * v))
            }
            _ => Ok(None),
        }
    }

    fn exponent(&mut self) -> Result<f64, ExprError> {
        let start = self.tok_pos;
        if self.tok == Tok::LParen {
            self.bump()?;
            let v = self
                .signed_literal()?
                .ok_or(ExprError::NonConstantExponent { position: start })?;
            if self.tok != Tok::RParen {
                return Err(ExprError::NonConstantExponent { position: start });
            }
            self.bump()?;
            return Ok(v);
        }
        self.signed_literal()?
            .ok_or(ExprError::NonConstantExponent { position: start })
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return Err(self.err(&[")", "+", "-", "*", "/", "^"]));
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let start = self.tok_pos;
                self.bump()?;
                if self.tok == Tok::LParen {
                    let op = UnaryOp::from_function_name(&name)
                        .ok_or_else(|| ExprError::UnknownFunction(name.clone()))?;
                    self.bump()?;
                    let arg = self.expr()?;
                    if self.tok != Tok::RParen {
                        return Err(self.err(&[")"]));
                    }
                    self.bump()?;
                    return Ok(Expr::unary(op, arg));
                }
                match name.as_str() {
                    "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    _ => Err(ExprError::Syntax {
                        position: start,
                        expected: expected(&["t", "pi", "function call"]),
                    }),
                }
            }
            _ => Err(self.err(&["number", "t", "function", "("])),
        }
    }
}

/// Parses infix text in the variable `t`.
///
/// Precedence from tightest: `^` (literal exponent only), unary `-`, `* /`,
/// `+ -`. Functions: `sin cos tan exp log sqrt asin acos atan`.
pub fn parse_expression(text: &str) -> Result<Expr, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Syntax {
            position: 0,
            expected: expected(&["expression"]),
        });
    }
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.err(&["end of input", "+", "-", "*", "/"]));
    }
    Ok(e)
}
