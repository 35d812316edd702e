//! Recursive-descent parser.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | name '(' sum ')' | letter | '(' sum ')'
//! ```

use num_complex::Complex64;
use num_rational::Rational64;

use super::{Constant, Expr, Func};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(Constant),
    Ident(String),
    Op(char),
    Open,
    Close,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Token, usize)>> {
        let mut lexer = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let tok = lexer.next_token()?;
            let done = tok.0 == Token::End;
            out.push(tok);
            if done {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<(Token, usize)> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((Token::End, start));
        };
        let tok = match c {
            '0'..='9' | '.' => Token::Number(self.number()?),
            c if c.is_ascii_alphabetic() => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                Token::Ident(self.src[start..self.pos].to_string())
            }
            '+' | '-' | '*' | '/' | '^' => {
                self.pos += 1;
                Token::Op(c)
            }
            '(' => {
                self.pos += 1;
                Token::Open
            }
            ')' => {
                self.pos += 1;
                Token::Close
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        Ok((tok, start))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Constant> {
        let start = self.pos;
        let int_part = self.digits();
        let mut frac_part = "";
        if self.peek() == Some('.') {
            self.pos += 1;
            frac_part = self.digits();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Syntax {
                pos: start,
                message: "malformed number".into(),
            });
        }
        let mut exponent: i64 = 0;
        let rest = &self.src[self.pos..];
        let mut chars = rest.chars();
        if matches!(chars.next(), Some('e' | 'E')) {
            let after = chars.as_str();
            let signed = after.strip_prefix(['+', '-']).unwrap_or(after);
            if signed.starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1 + (after.len() - signed.len());
                let digits = self.digits();
                let magnitude: i64 = digits.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    message: "exponent out of range".into(),
                })?;
                exponent = if after.starts_with('-') {
                    -magnitude
                } else {
                    magnitude
                };
            }
        }
        let text = &self.src[start..self.pos];
        Ok(
            exact_decimal(int_part, frac_part, exponent).unwrap_or_else(|| {
                Constant::float(Complex64::new(text.parse::<f64>().unwrap_or(f64::NAN), 0.0))
            }),
        )
    }
}

/// `int.frac * 10^exponent` as an exact rational, if it fits in i64.
fn exact_decimal(int_part: &str, frac_part: &str, exponent: i64) -> Option<Constant> {
    let digits = format!("{int_part}{frac_part}");
    let mantissa: i64 = digits
        .trim_start_matches('0')
        .parse()
        .or_else(|_| {
            if digits.chars().all(|c| c == '0') {
                Ok(0)
            } else {
                Err(())
            }
        })
        .ok()?;
    let scale = exponent - frac_part.len() as i64;
    let pow10 = 10i64.checked_pow(u32::try_from(scale.unsigned_abs()).ok()?)?;
    let value = if scale >= 0 {
        Rational64::from_integer(mantissa.checked_mul(pow10)?)
    } else {
        Rational64::new(mantissa, pow10)
    };
    Some(Constant::Rational(value))
}

struct Parser<'p> {
    tokens: Vec<(Token, usize)>,
    at: usize,
    params: &'p [(&'p str, &'p str)],
    variable: Option<char>,
}

/// Parses an expression in the input grammar.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with_params(text, &[])
}

/// Parses `text`, replacing each identifier named in `params` with the
/// parenthesized expression text it maps to (e.g. `("a", "2")`).
pub fn parse_with_params(text: &str, params: &[(&str, &str)]) -> Result<Expr> {
    let mut parser = Parser {
        tokens: Lexer::tokens(text)?,
        at: 0,
        params,
        variable: None,
    };
    let expr = parser.sum()?;
    match parser.peek() {
        Token::End => Ok(expr),
        Token::Close => Err(parser.error("unbalanced `)`")),
        _ => Err(parser.error("unexpected trailing input")),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].0.clone();
        if tok != Token::End {
            self.at += 1;
        }
        tok
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            message: message.to_string(),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut terms = vec![self.product()?];
        while let Token::Op(op @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.product()?;
            terms.push(if op == '-' { -rhs } else { rhs });
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Add(terms)
        })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Token::Op(op @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            lhs = if op == '*' {
                match lhs {
                    Expr::Mul(mut xs) => {
                        xs.push(rhs);
                        Expr::Mul(xs)
                    }
                    other => Expr::Mul(vec![other, rhs]),
                }
            } else {
                lhs / rhs
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Token::Op('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Token::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() == Token::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Token::Number(c) => Ok(Expr::Const(c)),
            Token::Open => {
                let inner = self.sum()?;
                if self.bump() != Token::Close {
                    return Err(Error::Syntax {
                        pos: self.tokens[self.at.saturating_sub(1)].1,
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Token::Ident(name) => self.identifier(name, pos),
            Token::End => Err(Error::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
            tok => Err(Error::Syntax {
                pos,
                message: format!("unexpected {}", describe(&tok)),
            }),
        }
    }

    fn identifier(&mut self, name: String, pos: usize) -> Result<Expr> {
        if *self.peek() == Token::Open {
            let func = Func::from_name(&name).ok_or(Error::UnknownFunction {
                name: name.clone(),
                pos,
            })?;
            self.bump();
            let arg = self.sum()?;
            if self.bump() != Token::Close {
                return Err(Error::Syntax {
                    pos,
                    message: format!("expected `)` to close `{name}(`"),
                });
            }
            return Ok(Expr::apply(func, arg));
        }
        if let Some(&(_, value)) = self.params.iter().find(|(p, _)| *p == name) {
            return parse(value).map_err(|e| match e {
                Error::Syntax { message, .. } => Error::Syntax {
                    pos,
                    message: format!("in value of parameter `{name}`: {message}"),
                },
                other => other,
            });
        }
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(letter), None) => {
                match self.variable {
                    Some(v) if v != letter => {
                        return Err(Error::MultipleVariables {
                            first: v,
                            second: letter,
                        })
                    }
                    _ => self.variable = Some(letter),
                }
                Ok(Expr::Var(letter))
            }
            _ if Func::from_name(&name).is_some() => Err(Error::Syntax {
                pos,
                message: format!("function `{name}` needs an argument in parentheses"),
            }),
            _ => Err(Error::Syntax {
                pos,
                message: format!("unknown identifier `{name}`"),
            }),
        }
    }
}

fn describe(tok: &Token) -> String {
    match tok {
        Token::Number(_) => "number".into(),
        Token::Ident(n) => format!("`{n}`"),
        Token::Op(c) => format!("`{c}`"),
        Token::Open => "`(`".into(),
        Token::Close => "`)`".into(),
        Token::End => "end of input".into(),
    }
}
