//! Parser for formulas, bunches and sequents.
//!
//! Grammar (loosest to tightest): `;` < `,` < `->` < `-*` < `\/` < `/\`
//! < `*` < `box`. Formula binaries are right-associative, bunch
//! connectives are parsed left-nested. A parenthesized group is parsed at
//! bunch level; a bare formula is a one-leaf bunch, so both readings
//! coexist and formula operators simply demand leaf operands.

use super::{Atom, Bunch, Formula, Sequent};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Emp,
    EmpM,
    EmpA,
    BoxKw,
    Star,
    AndOp,
    OrOp,
    WandOp,
    ImplOp,
    Comma,
    Semi,
    LParen,
    RParen,
    Turnstile,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Emp => "`emp`".into(),
            Tok::EmpM => "`empm`".into(),
            Tok::EmpA => "`empa`".into(),
            Tok::BoxKw => "`box`".into(),
            Tok::Star => "`*`".into(),
            Tok::AndOp => "`/\\`".into(),
            Tok::OrOp => "`\\/`".into(),
            Tok::WandOp => "`-*`".into(),
            Tok::ImplOp => "`->`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |chars: &mut std::iter::Peekable<std::str::Chars>,
                    line: &mut usize,
                    col: &mut usize| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        if ch.is_whitespace() {
            bump(&mut chars, &mut line, &mut col);
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "top" => Tok::Top,
                "bot" => Tok::Bot,
                "emp" => Tok::Emp,
                "empm" => Tok::EmpM,
                "empa" => Tok::EmpA,
                "box" => Tok::BoxKw,
                _ => Tok::Ident(word),
            };
            out.push(Spanned {
                tok,
                line: tline,
                col: tcol,
            });
            continue;
        }
        let tok = match ch {
            '*' => {
                bump(&mut chars, &mut line, &mut col);
                Tok::Star
            }
            ',' => {
                bump(&mut chars, &mut line, &mut col);
                Tok::Comma
            }
            ';' => {
                bump(&mut chars, &mut line, &mut col);
                Tok::Semi
            }
            '(' => {
                bump(&mut chars, &mut line, &mut col);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars, &mut line, &mut col);
                Tok::RParen
            }
            '/' => {
                bump(&mut chars, &mut line, &mut col);
                if chars.peek() == Some(&'\\') {
                    bump(&mut chars, &mut line, &mut col);
                    Tok::AndOp
                } else {
                    return Err(unexpected_char(tline, tcol, "/", &["`/\\`"]));
                }
            }
            '\\' => {
                bump(&mut chars, &mut line, &mut col);
                if chars.peek() == Some(&'/') {
                    bump(&mut chars, &mut line, &mut col);
                    Tok::OrOp
                } else {
                    return Err(unexpected_char(tline, tcol, "\\", &["`\\/`"]));
                }
            }
            '-' => {
                bump(&mut chars, &mut line, &mut col);
                match chars.peek() {
                    Some('*') => {
                        bump(&mut chars, &mut line, &mut col);
                        Tok::WandOp
                    }
                    Some('>') => {
                        bump(&mut chars, &mut line, &mut col);
                        Tok::ImplOp
                    }
                    _ => return Err(unexpected_char(tline, tcol, "-", &["`-*`", "`->`"])),
                }
            }
            '|' => {
                bump(&mut chars, &mut line, &mut col);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars, &mut line, &mut col);
                    Tok::Turnstile
                } else {
                    return Err(unexpected_char(tline, tcol, "|", &["`|-`"]));
                }
            }
            other => {
                return Err(unexpected_char(
                    tline,
                    tcol,
                    &other.to_string(),
                    &["a token"],
                ))
            }
        };
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

fn unexpected_char(line: usize, col: usize, found: &str, expected: &[&'static str]) -> ParseError {
    ParseError {
        line,
        col,
        expected: expected.to_vec(),
        found: format!("{found:?}"),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            expected: expected.to_vec(),
            found: t.tok.describe(),
        }
    }

    fn eat(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(&[expected]))
        }
    }

    // `;` level, left-nested
    fn semi(&mut self) -> Result<Bunch, ParseError> {
        let mut acc = self.comma()?;
        while self.peek().tok == Tok::Semi {
            self.next();
            let rhs = self.comma()?;
            acc = Bunch::semi(acc, rhs);
        }
        Ok(acc)
    }

    // `,` level, left-nested
    fn comma(&mut self) -> Result<Bunch, ParseError> {
        let mut acc = self.impl_level()?;
        while self.peek().tok == Tok::Comma {
            self.next();
            let rhs = self.impl_level()?;
            acc = Bunch::comma(acc, rhs);
        }
        Ok(acc)
    }

    fn binary(
        &mut self,
        op: Tok,
        opname: &'static str,
        sub: fn(&mut Parser) -> Result<Bunch, ParseError>,
        same: fn(&mut Parser) -> Result<Bunch, ParseError>,
        build: fn(Formula, Formula) -> Formula,
    ) -> Result<Bunch, ParseError> {
        let lhs = sub(self)?;
        if self.peek().tok == op {
            let at = self.next();
            let l = self.demand_formula(lhs, opname, (at.line, at.col))?;
            let rhs = same(self)?;
            let r = self.demand_formula(rhs, opname, (at.line, at.col))?;
            Ok(Bunch::Leaf(build(l, r)))
        } else {
            Ok(lhs)
        }
    }

    fn impl_level(&mut self) -> Result<Bunch, ParseError> {
        self.binary(
            Tok::ImplOp,
            "`->`",
            Parser::wand_level,
            Parser::impl_level,
            Formula::impl_,
        )
    }

    fn wand_level(&mut self) -> Result<Bunch, ParseError> {
        self.binary(
            Tok::WandOp,
            "`-*`",
            Parser::or_level,
            Parser::wand_level,
            Formula::wand,
        )
    }

    fn or_level(&mut self) -> Result<Bunch, ParseError> {
        self.binary(
            Tok::OrOp,
            "`\\/`",
            Parser::and_level,
            Parser::or_level,
            Formula::or,
        )
    }

    fn and_level(&mut self) -> Result<Bunch, ParseError> {
        self.binary(
            Tok::AndOp,
            "`/\\`",
            Parser::sep_level,
            Parser::and_level,
            Formula::and,
        )
    }

    fn sep_level(&mut self) -> Result<Bunch, ParseError> {
        self.binary(
            Tok::Star,
            "`*`",
            Parser::unary,
            Parser::sep_level,
            Formula::sep,
        )
    }

    fn unary(&mut self) -> Result<Bunch, ParseError> {
        if self.peek().tok == Tok::BoxKw {
            let at = self.next();
            let operand = self.unary()?;
            let f = self.demand_formula(operand, "`box`", (at.line, at.col))?;
            Ok(Bunch::Leaf(Formula::boxed(f)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Bunch, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                self.next();
                Ok(Bunch::Leaf(Formula::Atom(
                    Atom::new(name).expect("lexer produces valid atom names"),
                )))
            }
            Tok::Top => {
                self.next();
                Ok(Bunch::Leaf(Formula::True))
            }
            Tok::Bot => {
                self.next();
                Ok(Bunch::Leaf(Formula::False))
            }
            Tok::Emp => {
                self.next();
                Ok(Bunch::Leaf(Formula::Emp))
            }
            Tok::EmpM => {
                self.next();
                Ok(Bunch::EmpM)
            }
            Tok::EmpA => {
                self.next();
                Ok(Bunch::EmpA)
            }
            Tok::LParen => {
                self.next();
                let inner = self.semi()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error(&[
                "an atom", "`top`", "`bot`", "`emp`", "`empm`", "`empa`", "`box`", "`(`",
            ])),
        }
    }

    fn demand_formula(
        &self,
        b: Bunch,
        opname: &'static str,
        at: (usize, usize),
    ) -> Result<Formula, ParseError> {
        match b {
            Bunch::Leaf(f) => Ok(f),
            other => Err(ParseError {
                line: at.0,
                col: at.1,
                expected: vec!["a formula operand"],
                found: format!("{opname} applied to the bunch `{other}`"),
            }),
        }
    }
}

fn parser(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
    })
}

pub fn parse_bunch(text: &str) -> Result<Bunch, ParseError> {
    let mut p = parser(text)?;
    let b = p.semi()?;
    p.eat(Tok::Eof, "end of input")?;
    Ok(b)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser(text)?;
    let b = p.semi()?;
    p.eat(Tok::Eof, "end of input")?;
    match b {
        Bunch::Leaf(f) => Ok(f),
        other => Err(ParseError {
            line: 1,
            col: 1,
            expected: vec!["a formula"],
            found: format!("the bunch `{other}`"),
        }),
    }
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = parser(text)?;
    let lhs = p.semi()?;
    p.eat(Tok::Turnstile, "`|-`")?;
    let rhs_bunch = p.semi()?;
    p.eat(Tok::Eof, "end of input")?;
    let rhs = match rhs_bunch {
        Bunch::Leaf(f) => f,
        other => {
            return Err(ParseError {
                line: 1,
                col: 1,
                expected: vec!["a formula on the right of `|-`"],
                found: format!("the bunch `{other}`"),
            })
        }
    };
    Ok(Sequent::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequent_with_formula_lhs() {
        let s = parse_sequent("a * b |- b * a").unwrap();
        assert_eq!(
            s.lhs,
            Bunch::Leaf(Formula::sep(Formula::atom("a"), Formula::atom("b")))
        );
        assert_eq!(s.rhs, Formula::sep(Formula::atom("b"), Formula::atom("a")));
    }

    #[test]
    fn comma_binds_looser_than_formula_ops() {
        let s = parse_sequent("p , (p /\\ q) |- p * q").unwrap();
        assert_eq!(
            s.lhs,
            Bunch::comma(
                Bunch::atom("p"),
                Bunch::Leaf(Formula::and(Formula::atom("p"), Formula::atom("q")))
            )
        );
    }

    #[test]
    fn units_parse() {
        let s = parse_sequent("empm |- emp").unwrap();
        assert_eq!(s.lhs, Bunch::EmpM);
        assert_eq!(s.rhs, Formula::Emp);
    }

    #[test]
    fn precedence_and_associativity() {
        // box tightest, then * < /\ < \/ < -* < ->, all right-associative
        assert_eq!(
            parse_formula("box a * b").unwrap(),
            Formula::sep(Formula::boxed(Formula::atom("a")), Formula::atom("b"))
        );
        assert_eq!(
            parse_formula("a -* b -> c").unwrap(),
            Formula::impl_(
                Formula::wand(Formula::atom("a"), Formula::atom("b")),
                Formula::atom("c")
            )
        );
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            Formula::impl_(
                Formula::atom("a"),
                Formula::impl_(Formula::atom("b"), Formula::atom("c"))
            )
        );
        assert_eq!(
            parse_formula("a * b /\\ c").unwrap(),
            Formula::and(
                Formula::sep(Formula::atom("a"), Formula::atom("b")),
                Formula::atom("c")
            )
        );
    }

    #[test]
    fn bunches_parse_left_nested() {
        assert_eq!(
            parse_bunch("a , b , c").unwrap(),
            Bunch::comma(
                Bunch::comma(Bunch::atom("a"), Bunch::atom("b")),
                Bunch::atom("c")
            )
        );
        // `,` binds tighter than `;`
        assert_eq!(
            parse_bunch("a , b ; c").unwrap(),
            Bunch::semi(
                Bunch::comma(Bunch::atom("a"), Bunch::atom("b")),
                Bunch::atom("c")
            )
        );
        // parenthesized formulas stay formulas
        assert_eq!(
            parse_bunch("(a -> b) * c").unwrap(),
            Bunch::Leaf(Formula::sep(
                Formula::impl_(Formula::atom("a"), Formula::atom("b")),
                Formula::atom("c")
            ))
        );
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let err = parse_sequent("a |- ").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 6);
        assert!(err.expected.contains(&"an atom"));

        let err = parse_formula("a ,\nb").unwrap_err();
        assert_eq!(err.line, 1);

        let err = parse_bunch("(a , b) * c").unwrap_err();
        assert!(err.found.contains("applied to the bunch"));

        assert!(parse_formula("box").is_err());
        assert!(parse_bunch("a ,, b").is_err());
    }
}
