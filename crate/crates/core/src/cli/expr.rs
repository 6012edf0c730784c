//! Operator expressions for `parabose apply`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*'? factor)*           product; the rightmost factor acts first
//! factor := number | 'i' | 'sqrt2' | atom
//!         | '(' expr ')' | '[' expr ',' expr ']' | '{' expr ',' expr '}'
//! atom   := b(α) | bd(α) | E | Q | id | C | G(a,b) | I(a) | e(a)
//!         | Groot(pp|pm|mp|mm, k, l) | Groot(sp|sm, k)
//!         | even(cc|ca|aa, α, β)
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::generators::{EvenKind, EvenOpLabel, GaugeRootLabel, Operator};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() {
            let start = i;
            let digits = |i: &mut usize| {
                let s = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
                chars[s..*i].iter().collect::<String>().parse::<BigInt>().expect("digits")
            };
            let num = digits(&mut i);
            let den = if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                digits(&mut i)
            } else {
                BigInt::from(1)
            };
            if den == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator at column {}", start + 1)));
            }
            out.push((start, Tok::Num(Rational::new(num, den))));
        } else if "()[]{},+-*".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} at column {}", i + 1)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| c + 1).unwrap_or(self.len + 1)
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at column {}", self.column()))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Operator> {
        let mut terms = Vec::new();
        let mut negate = self.eat('-');
        loop {
            let t = self.term()?;
            terms.push(if negate { Operator::scaled(Scalar::from_int(-1), t) } else { t });
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Operator::Sum(terms) })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Num(_) | Tok::Sym('(' | '[' | '{')))
    }

    fn term(&mut self) -> Result<Operator> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat('*') || self.starts_factor() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Operator::Product(factors) })
    }

    fn factor(&mut self) -> Result<Operator> {
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(self.error("expected an operator"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(r) => Ok(Operator::scaled(Scalar::from_rational(r), Operator::Identity)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(open @ ('[' | '{')) => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                if open == '[' {
                    self.expect(']')?;
                    Ok(Operator::commutator(a, b))
                } else {
                    self.expect('}')?;
                    Ok(Operator::anticommutator(a, b))
                }
            }
            Tok::Ident(name) => self.atom(&name),
            Tok::Sym(c) => {
                self.pos -= 1;
                Err(self.error(&format!("unexpected '{c}'")))
            }
        }
    }

    fn args(&mut self) -> Result<Vec<String>> {
        self.expect('(')?;
        let mut out = Vec::new();
        loop {
            match self.toks.get(self.pos).cloned() {
                Some((_, Tok::Ident(s))) => out.push(s),
                Some((_, Tok::Num(r))) if r.is_integer() => out.push(r.to_integer().to_string()),
                _ => return Err(self.error("expected an argument")),
            }
            self.pos += 1;
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        Ok(out)
    }

    fn index(&self, s: &str) -> Result<usize> {
        s.parse::<usize>().map_err(|_| Error::Parse(format!("expected a positive index, got {s:?}")))
    }

    fn atom(&mut self, name: &str) -> Result<Operator> {
        let arity = |args: &[String], k: usize, name: &str| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!("{name} takes {k} arguments, got {}", args.len())))
            }
        };
        Ok(match name {
            "i" => Operator::scaled(Scalar::i(), Operator::Identity),
            "sqrt2" => Operator::scaled(Scalar::sqrt2(), Operator::Identity),
            "id" => Operator::Identity,
            "E" => Operator::Energy,
            "Q" => Operator::Q,
            "C" => Operator::Casimir,
            "b" | "bd" | "I" | "e" => {
                let args = self.args()?;
                arity(&args, 1, name)?;
                let x = self.index(&args[0])?;
                match name {
                    "b" => Operator::Annihilator(x),
                    "bd" => Operator::Creator(x),
                    "I" => Operator::Inversion(x),
                    _ => Operator::Clifford(x),
                }
            }
            "G" => {
                let args = self.args()?;
                arity(&args, 2, name)?;
                Operator::Gauge(self.index(&args[0])?, self.index(&args[1])?)
            }
            "Groot" => {
                let args = self.args()?;
                let kind = args.first().map(String::as_str).unwrap_or("");
                let label = match kind {
                    "sp" | "sm" => {
                        arity(&args, 2, "Groot(sp|sm, k)")?;
                        let k = self.index(&args[1])?;
                        if kind == "sp" {
                            GaugeRootLabel::ShortPlus(k)
                        } else {
                            GaugeRootLabel::ShortMinus(k)
                        }
                    }
                    "pp" | "pm" | "mp" | "mm" => {
                        arity(&args, 3, "Groot(pp|pm|mp|mm, k, l)")?;
                        let (k, l) = (self.index(&args[1])?, self.index(&args[2])?);
                        match kind {
                            "pp" => GaugeRootLabel::PlusPlus(k, l),
                            "pm" => GaugeRootLabel::PlusMinus(k, l),
                            "mp" => GaugeRootLabel::MinusPlus(k, l),
                            _ => GaugeRootLabel::MinusMinus(k, l),
                        }
                    }
                    other => return Err(Error::Parse(format!("unknown root kind {other:?}"))),
                };
                Operator::GaugeRoot(label)
            }
            "even" => {
                let args = self.args()?;
                arity(&args, 3, name)?;
                let kind = match args[0].as_str() {
                    "cc" => EvenKind::CreateCreate,
                    "ca" => EvenKind::CreateAnnih,
                    "aa" => EvenKind::AnnihAnnih,
                    other => return Err(Error::Parse(format!("unknown even kind {other:?}"))),
                };
                Operator::Even(EvenOpLabel::new(kind, self.index(&args[1])?, self.index(&args[2])?))
            }
            other => {
                self.pos -= 1;
                return Err(self.error(&format!("unknown operator {other:?}")));
            }
        })
    }
}

/// Parse an operator expression.
pub fn parse(src: &str) -> Result<Operator> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, len: src.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModelParams, SpinState, State};

    fn vac() -> State {
        State::vacuum(ModelParams::new(2, 3).unwrap(), SpinState::all_up(1))
    }

    fn eval(src: &str, v: &State) -> State {
        parse(src).unwrap().apply(v).unwrap()
    }

    #[test]
    fn products_act_right_to_left() {
        let v = vac();
        let direct = Operator::Annihilator(1).apply(&Operator::Creator(1).apply(&v).unwrap()).unwrap();
        assert_eq!(eval("b(1) bd(1)", &v), direct);
        assert_eq!(eval("b(1)*bd(1)", &v), direct);
        assert!(eval("bd(1) b(1)", &v).is_zero());
    }

    #[test]
    fn sums_brackets_and_scalars() {
        let v = vac();
        assert!(eval("G(1,2) bd(1) - bd(1) G(1,2)", &v).is_zero());
        assert!(eval("[G(1,3), bd(2)]", &v).is_zero());
        assert_eq!(eval("{b(1), bd(1)}", &v), eval("b(1) bd(1) + bd(1) b(1)", &v));
        assert_eq!(eval("2 E", &v), v.scaled(&Scalar::from_int(6)));
        assert_eq!(eval("-1/2 id + 1/2", &v), State::zero(*v.params()));
        assert_eq!(eval("i sqrt2 id", &v), v.scaled(&(Scalar::i() * Scalar::sqrt2())));
        assert_eq!(eval("Q", &v), eval("E", &v));
        assert_eq!(eval("(E - Q) bd(2)", &v), eval("(bd(1) b(1) + bd(2) b(2)) bd(2)", &v));
    }

    #[test]
    fn atoms_parse() {
        for src in ["Groot(pp,1,2)", "Groot(sm,1)", "even(aa,1,2)", "I(2)", "e(3)", "C"] {
            assert!(parse(src).is_ok(), "{src}");
        }
    }

    #[test]
    fn parse_errors_name_a_column() {
        for src in [
            "",
            "b(",
            "b(1",
            "bd(x)",
            "G(1)",
            "foo",
            "b(1) )",
            "Groot(zz,1)",
            "even(xx,1,1)",
            "1/0",
            "[b(1) bd(1)]",
            "#",
        ] {
            match parse(src) {
                Err(Error::Parse(_)) => {}
                other => panic!("{src:?} gave {other:?}"),
            }
        }
    }
}
