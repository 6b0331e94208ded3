//! Formulas, bunches, and the structural equivalence of bunches.
//!
//! Bunches are trees whose leaves are formulas or one of the two empty
//! bunches, and whose internal nodes are the multiplicative `,` or the
//! additive `;`. Equivalence is the congruence generated by the
//! commutative-monoid laws of `(,, empm)` and `(;, empa)`; it is decided
//! by comparing canonical forms (see [`normalize`]).

mod context;
mod parse;
mod print;

pub use context::{
    ctx_at_path, decompositions, format_path, leaf_positions, locate_in_filled, parse_path,
    subtree_at, transport_leaf_ctx, unbox_decompose, BunchCtx, Decomposition, Dir, Frame, Located,
    Side, TwoHoleCtx,
};
pub use parse::{parse_bunch, parse_formula, parse_sequent, ParseError};

use thiserror::Error;

/// Words of the term grammar that can never be atoms.
pub const RESERVED_WORDS: &[&str] = &["top", "bot", "emp", "empm", "empa", "box"];

#[derive(Debug, Error)]
pub enum SyntaxError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("bunch is not the image of box_bunch")]
    NotBoxImage,
    #[error("context path does not match bunch shape at frame {at}")]
    PathMismatch { at: usize },
}

/// An atomic proposition. Equality is name equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    /// Creates an atom, rejecting names that are not identifiers or that
    /// collide with a reserved word of the grammar.
    pub fn new(name: impl Into<String>) -> Result<Atom, SyntaxError> {
        let name = name.into();
        let mut chars = name.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !head_ok || !tail_ok {
            return Err(SyntaxError::Malformed(format!(
                "invalid atom name {name:?}"
            )));
        }
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(SyntaxError::Malformed(format!(
                "{name:?} is a reserved word, not an atom"
            )));
        }
        Ok(Atom(name))
    }

    /// Internal-only atoms that cannot clash with parsed input.
    pub(crate) fn internal(tag: &str) -> Atom {
        Atom(format!("\u{0}{tag}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    True,
    False,
    Emp,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Sep(Box<Formula>, Box<Formula>),
    Wand(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("valid atom name"))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn impl_(l: Formula, r: Formula) -> Formula {
        Formula::Impl(Box::new(l), Box::new(r))
    }

    pub fn sep(l: Formula, r: Formula) -> Formula {
        Formula::Sep(Box::new(l), Box::new(r))
    }

    pub fn wand(l: Formula, r: Formula) -> Formula {
        Formula::Wand(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False | Formula::Emp => 1,
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Impl(l, r)
            | Formula::Sep(l, r)
            | Formula::Wand(l, r) => 1 + l.size() + r.size(),
            Formula::Box(f) => 1 + f.size(),
        }
    }

    /// All atoms occurring in the formula, deduplicated.
    pub fn atoms(&self) -> Vec<Atom> {
        fn walk(f: &Formula, out: &mut Vec<Atom>) {
            match f {
                Formula::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                Formula::True | Formula::False | Formula::Emp => {}
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Impl(l, r)
                | Formula::Sep(l, r)
                | Formula::Wand(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Formula::Box(g) => walk(g, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn contains_box(&self) -> bool {
        match self {
            Formula::Box(_) => true,
            Formula::Atom(_) | Formula::True | Formula::False | Formula::Emp => false,
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Impl(l, r)
            | Formula::Sep(l, r)
            | Formula::Wand(l, r) => l.contains_box() || r.contains_box(),
        }
    }
}

/// The connective of an internal bunch node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Conn {
    Comma,
    Semi,
}

impl Conn {
    pub fn unit(self) -> Bunch {
        match self {
            Conn::Comma => Bunch::EmpM,
            Conn::Semi => Bunch::EmpA,
        }
    }

    pub fn join(self, l: Bunch, r: Bunch) -> Bunch {
        match self {
            Conn::Comma => Bunch::comma(l, r),
            Conn::Semi => Bunch::semi(l, r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bunch {
    Leaf(Formula),
    /// The multiplicative empty bunch, unit of `,`.
    EmpM,
    /// The additive empty bunch, unit of `;`.
    EmpA,
    Comma(Box<Bunch>, Box<Bunch>),
    Semi(Box<Bunch>, Box<Bunch>),
}

impl Bunch {
    pub fn leaf(f: Formula) -> Bunch {
        Bunch::Leaf(f)
    }

    pub fn atom(name: &str) -> Bunch {
        Bunch::Leaf(Formula::atom(name))
    }

    pub fn comma(l: Bunch, r: Bunch) -> Bunch {
        Bunch::Comma(Box::new(l), Box::new(r))
    }

    pub fn semi(l: Bunch, r: Bunch) -> Bunch {
        Bunch::Semi(Box::new(l), Box::new(r))
    }

    pub fn node(&self) -> Option<(Conn, &Bunch, &Bunch)> {
        match self {
            Bunch::Comma(l, r) => Some((Conn::Comma, l, r)),
            Bunch::Semi(l, r) => Some((Conn::Semi, l, r)),
            _ => None,
        }
    }

    /// Number of nodes in the bunch tree (formula leaves count as one).
    pub fn size(&self) -> usize {
        match self {
            Bunch::Leaf(_) | Bunch::EmpM | Bunch::EmpA => 1,
            Bunch::Comma(l, r) | Bunch::Semi(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each_leaf(&mut |f| {
            for a in f.atoms() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        });
        out
    }

    fn for_each_leaf(&self, f: &mut impl FnMut(&Formula)) {
        match self {
            Bunch::Leaf(frml) => f(frml),
            Bunch::EmpM | Bunch::EmpA => {}
            Bunch::Comma(l, r) | Bunch::Semi(l, r) => {
                l.for_each_leaf(f);
                r.for_each_leaf(f);
            }
        }
    }

    /// True when every leaf formula is of the form `box _`, i.e. the bunch
    /// lies in the image of [`box_bunch`].
    pub fn is_box_image(&self) -> bool {
        match self {
            Bunch::Leaf(Formula::Box(_)) => true,
            Bunch::Leaf(_) => false,
            Bunch::EmpM | Bunch::EmpA => true,
            Bunch::Comma(l, r) | Bunch::Semi(l, r) => l.is_box_image() && r.is_box_image(),
        }
    }
}

/// A sequent `Δ ⊢ φ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: Bunch,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(lhs: Bunch, rhs: Formula) -> Sequent {
        Sequent { lhs, rhs }
    }
}

/// Canonical representative of the equivalence class of `b`: every maximal
/// same-connective region is flattened to a sorted list with units dropped
/// (an empty region collapses to the unit), rebuilt right-nested.
pub fn normalize(b: &Bunch) -> Bunch {
    match b {
        Bunch::Leaf(_) | Bunch::EmpM | Bunch::EmpA => b.clone(),
        Bunch::Comma(l, r) => rebuild_region(Conn::Comma, normalize(l), normalize(r)),
        Bunch::Semi(l, r) => rebuild_region(Conn::Semi, normalize(l), normalize(r)),
    }
}

fn rebuild_region(conn: Conn, l: Bunch, r: Bunch) -> Bunch {
    let mut parts = Vec::new();
    collect_region(conn, l, &mut parts);
    collect_region(conn, r, &mut parts);
    parts.sort();
    let mut iter = parts.into_iter().rev();
    match iter.next() {
        None => conn.unit(),
        Some(last) => iter.fold(last, |acc, p| conn.join(p, acc)),
    }
}

fn collect_region(conn: Conn, b: Bunch, parts: &mut Vec<Bunch>) {
    match (conn, b) {
        (Conn::Comma, Bunch::EmpM) | (Conn::Semi, Bunch::EmpA) => {}
        (Conn::Comma, Bunch::Comma(l, r)) => {
            collect_region(conn, *l, parts);
            collect_region(conn, *r, parts);
        }
        (Conn::Semi, Bunch::Semi(l, r)) => {
            collect_region(conn, *l, parts);
            collect_region(conn, *r, parts);
        }
        (_, other) => parts.push(other),
    }
}

/// Decides the structural congruence `≡` of Fig-style bunch equivalence.
pub fn bunch_equiv(b1: &Bunch, b2: &Bunch) -> bool {
    normalize(b1) == normalize(b2)
}

/// The collapse `⌊Δ⌋` of a bunch into a single formula.
pub fn bunch_to_formula(b: &Bunch) -> Formula {
    match b {
        Bunch::Leaf(f) => f.clone(),
        Bunch::EmpM => Formula::Emp,
        Bunch::EmpA => Formula::True,
        Bunch::Comma(l, r) => Formula::sep(bunch_to_formula(l), bunch_to_formula(r)),
        Bunch::Semi(l, r) => Formula::and(bunch_to_formula(l), bunch_to_formula(r)),
    }
}

/// `□Δ`: puts a box in front of every leaf formula; units and the tree
/// shape are unchanged.
pub fn box_bunch(b: &Bunch) -> Bunch {
    match b {
        Bunch::Leaf(f) => Bunch::Leaf(Formula::boxed(f.clone())),
        Bunch::EmpM => Bunch::EmpM,
        Bunch::EmpA => Bunch::EmpA,
        Bunch::Comma(l, r) => Bunch::comma(box_bunch(l), box_bunch(r)),
        Bunch::Semi(l, r) => Bunch::semi(box_bunch(l), box_bunch(r)),
    }
}

/// Inverse of [`box_bunch`]; `None` if some leaf is not boxed.
pub fn unbox_bunch(b: &Bunch) -> Option<Bunch> {
    match b {
        Bunch::Leaf(Formula::Box(f)) => Some(Bunch::Leaf((**f).clone())),
        Bunch::Leaf(_) => None,
        Bunch::EmpM => Some(Bunch::EmpM),
        Bunch::EmpA => Some(Bunch::EmpA),
        Bunch::Comma(l, r) => Some(Bunch::comma(unbox_bunch(l)?, unbox_bunch(r)?)),
        Bunch::Semi(l, r) => Some(Bunch::semi(unbox_bunch(l)?, unbox_bunch(r)?)),
    }
}
