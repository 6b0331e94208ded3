//! Moore closures on finite powerset algebras and the BI algebra of
//! closed sets.
//!
//! The closure operator is generated from a basis: `cl(X)` is the
//! intersection of the basis sets containing `X` (the empty intersection
//! is the full carrier). Defining `cl` from the basis rather than from
//! the closed sets keeps the definition non-circular; the closed sets are
//! then exactly the fixpoints. When the closure is strong the closed sets
//! carry a BI algebra with `∗` and `−∗` lifted through `cl`; the
//! construction checks its own preconditions and refuses with a witness
//! instead of producing an unlawful algebra.

use crate::algebra::{BiAlgebra, Mask, PowersetAlgebra};
use thiserror::Error;

/// A basis of generating sets over a PCM powerset. No laws are assumed;
/// every property of interest is checked downstream.
#[derive(Clone, Debug)]
pub struct Basis {
    alg: PowersetAlgebra,
    sets: Vec<Mask>,
}

impl Basis {
    pub fn new(alg: PowersetAlgebra, mut sets: Vec<Mask>) -> Basis {
        sets.sort_unstable();
        sets.dedup();
        Basis { alg, sets }
    }

    /// Parses a basis file: one subset per line, names separated by
    /// commas or spaces, optionally wrapped in braces; `{}` is the empty
    /// set. Blank lines and `#` comments are skipped.
    pub fn parse(alg: PowersetAlgebra, text: &str) -> Result<Basis, String> {
        let mut sets = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let inner = line
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .unwrap_or(line);
            sets.push(alg.parse_subset(inner)?);
        }
        Ok(Basis::new(alg, sets))
    }

    pub fn algebra(&self) -> &PowersetAlgebra {
        &self.alg
    }

    pub fn sets(&self) -> &[Mask] {
        &self.sets
    }
}

/// The closure operator of a basis, with its family of closed sets.
#[derive(Clone, Debug)]
pub struct MooreClosure {
    basis: Basis,
    closed: Vec<Mask>,
}

impl MooreClosure {
    pub fn new(basis: Basis) -> MooreClosure {
        let full = basis.alg.full();
        let closed = (0..=full).filter(|x| cl_of(&basis, *x) == *x).collect();
        MooreClosure { basis, closed }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn algebra(&self) -> &PowersetAlgebra {
        &self.basis.alg
    }

    /// `cl(X) = ⋂ { B ∈ basis | X ⊆ B }`; the empty family gives the
    /// full carrier.
    pub fn cl(&self, x: Mask) -> Mask {
        cl_of(&self.basis, x)
    }

    pub fn is_closed(&self, x: Mask) -> bool {
        self.cl(x) == x
    }

    /// All fixpoints of `cl`, ascending.
    pub fn closed_sets(&self) -> &[Mask] {
        &self.closed
    }

    /// `int(X)`: the join of all closed subsets of `X`. It is the largest
    /// closed subset of `X` exactly when it stays inside `X`.
    pub fn interior(&self, x: Mask) -> Mask {
        let mut union = 0;
        for c in &self.closed {
            if c & !x == 0 {
                union |= c;
            }
        }
        self.cl(union)
    }

    /// Strength: `cl(X) • Y ⊆ cl(X • Y)` for all subsets, returning the
    /// first counterexample pair otherwise.
    pub fn strength_counterexample(&self) -> Option<(Mask, Mask)> {
        let alg = &self.basis.alg;
        for x in 0..=alg.full() {
            let clx = self.cl(x);
            for y in 0..=alg.full() {
                let lhs = alg.bullet(clx, y);
                let rhs = self.cl(alg.bullet(x, y));
                if lhs & !rhs != 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_strong(&self) -> bool {
        self.strength_counterexample().is_none()
    }

    /// Whether `X −• Y` is closed for every subset `X` and closed `Y`;
    /// equivalent to strength.
    pub fn exponential_ideal(&self) -> bool {
        let alg = &self.basis.alg;
        for x in 0..=alg.full() {
            for y in &self.closed {
                if !self.is_closed(alg.wand_bullet(x, *y)) {
                    return false;
                }
            }
        }
        true
    }
}

fn cl_of(basis: &Basis, x: Mask) -> Mask {
    let mut out = basis.alg.full();
    for b in &basis.sets {
        if x & !b == 0 {
            out &= b;
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum BuildRefusal {
    #[error("closure is not strong: cl({x}) • {y} ⊈ cl({x} • {y})")]
    NotStrong { x: String, y: String },
    #[error("closed sets lack a Heyting implication: int({x} ⊃ {y}) escapes the implication")]
    ImplEscapes { x: String, y: String },
    #[error("closed-set lattice is not distributive at ({a}, {b}, {c})")]
    NotDistributive { a: String, b: String, c: String },
}

/// The closed sets as a BI algebra: meet is intersection, join, `∗` and
/// `−∗` are the closures of their powerset counterparts, implication is
/// the interior of the powerset implication.
#[derive(Clone, Debug)]
pub struct ClosedSetAlgebra {
    mc: MooreClosure,
}

impl ClosedSetAlgebra {
    pub fn closure(&self) -> &MooreClosure {
        &self.mc
    }
}

/// Builds the closed-set algebra, refusing (with a witness) when the
/// closure is not strong, when some Heyting implication fails to exist,
/// or when the closed-set lattice is not distributive.
pub fn build_closed_algebra(mc: MooreClosure) -> Result<ClosedSetAlgebra, BuildRefusal> {
    let alg = mc.algebra().clone();
    let show = |m: Mask| alg.describe(m);
    if let Some((x, y)) = mc.strength_counterexample() {
        return Err(BuildRefusal::NotStrong {
            x: show(x),
            y: show(y),
        });
    }
    let closed = mc.closed_sets().to_vec();
    for &x in &closed {
        for &y in &closed {
            let sup = alg.heyting(&x, &y);
            let int = mc.interior(sup);
            if int & !sup != 0 {
                return Err(BuildRefusal::ImplEscapes {
                    x: show(x),
                    y: show(y),
                });
            }
        }
    }
    let candidate = ClosedSetAlgebra { mc };
    for &a in &closed {
        for &b in &closed {
            for &c in &closed {
                let join_bc = candidate.join(&b, &c);
                let lhs = a & join_bc;
                let rhs = candidate.join(&(a & b), &(a & c));
                if lhs != rhs {
                    return Err(BuildRefusal::NotDistributive {
                        a: show(a),
                        b: show(b),
                        c: show(c),
                    });
                }
            }
        }
    }
    Ok(candidate)
}

impl BiAlgebra for ClosedSetAlgebra {
    type Elem = Mask;

    fn elements(&self) -> Vec<Mask> {
        self.mc.closed_sets().to_vec()
    }

    fn leq(&self, a: &Mask, b: &Mask) -> bool {
        a & !b == 0
    }

    fn bot(&self) -> Mask {
        self.mc.cl(0)
    }

    fn top(&self) -> Mask {
        self.mc.algebra().full()
    }

    fn meet(&self, a: &Mask, b: &Mask) -> Mask {
        a & b
    }

    fn join(&self, a: &Mask, b: &Mask) -> Mask {
        self.mc.cl(a | b)
    }

    fn heyting(&self, a: &Mask, b: &Mask) -> Mask {
        self.mc.interior(self.mc.algebra().heyting(a, b))
    }

    fn emp(&self) -> Mask {
        self.mc.cl(self.mc.algebra().zero())
    }

    fn sep(&self, a: &Mask, b: &Mask) -> Mask {
        self.mc.cl(self.mc.algebra().bullet(*a, *b))
    }

    fn wand(&self, a: &Mask, b: &Mask) -> Mask {
        self.mc.cl(self.mc.algebra().wand_bullet(*a, *b))
    }

    fn name(&self, a: &Mask) -> String {
        self.mc.algebra().describe(*a)
    }
}
