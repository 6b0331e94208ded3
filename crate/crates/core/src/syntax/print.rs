//! Printers. `print ∘ parse` is the identity on canonical text and
//! `parse ∘ print` is the identity on values.

use super::{Bunch, Formula, Sequent};
use std::fmt;

// Formula precedence, loosest first. Binaries are right-associative, so a
// left child at the same level needs parentheses and a right child does not.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Impl(..) => 1,
        Formula::Wand(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Sep(..) => 5,
        Formula::Box(..) => 6,
        Formula::Atom(_) | Formula::True | Formula::False | Formula::Emp => 7,
    }
}

fn fmt_formula(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(f);
    let parens = p < min;
    if parens {
        write!(out, "(")?;
    }
    match f {
        Formula::Atom(a) => write!(out, "{}", a.name())?,
        Formula::True => write!(out, "top")?,
        Formula::False => write!(out, "bot")?,
        Formula::Emp => write!(out, "emp")?,
        Formula::Box(g) => {
            write!(out, "box ")?;
            fmt_formula(g, p, out)?;
        }
        Formula::And(l, r) => {
            fmt_formula(l, p + 1, out)?;
            write!(out, " /\\ ")?;
            fmt_formula(r, p, out)?;
        }
        Formula::Or(l, r) => {
            fmt_formula(l, p + 1, out)?;
            write!(out, " \\/ ")?;
            fmt_formula(r, p, out)?;
        }
        Formula::Impl(l, r) => {
            fmt_formula(l, p + 1, out)?;
            write!(out, " -> ")?;
            fmt_formula(r, p, out)?;
        }
        Formula::Sep(l, r) => {
            fmt_formula(l, p + 1, out)?;
            write!(out, " * ")?;
            fmt_formula(r, p, out)?;
        }
        Formula::Wand(l, r) => {
            fmt_formula(l, p + 1, out)?;
            write!(out, " -* ")?;
            fmt_formula(r, p, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, out)
    }
}

// Bunch connectives parse left-nested, so a right child at the same level
// needs parentheses and a left child does not. Compound formula leaves are
// parenthesized inside bunch nodes for readability, e.g. `p , (p /\ q)`.
fn bunch_prec(b: &Bunch) -> u8 {
    match b {
        Bunch::Semi(..) => 1,
        Bunch::Comma(..) => 2,
        Bunch::Leaf(_) | Bunch::EmpM | Bunch::EmpA => 3,
    }
}

fn fmt_bunch(b: &Bunch, min: u8, wrap_leaf: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = bunch_prec(b);
    let parens = p < min || matches!(b, Bunch::Leaf(f) if wrap_leaf && prec(f) <= 5);
    if parens {
        write!(out, "(")?;
    }
    match b {
        Bunch::Leaf(f) => write!(out, "{f}")?,
        Bunch::EmpM => write!(out, "empm")?,
        Bunch::EmpA => write!(out, "empa")?,
        Bunch::Comma(l, r) => {
            fmt_bunch(l, p, true, out)?;
            write!(out, " , ")?;
            fmt_bunch(r, p + 1, true, out)?;
        }
        Bunch::Semi(l, r) => {
            fmt_bunch(l, p, true, out)?;
            write!(out, " ; ")?;
            fmt_bunch(r, p + 1, true, out)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Bunch {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_bunch(self, 0, false, out)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} |- {}", self.lhs, self.rhs)
    }
}
