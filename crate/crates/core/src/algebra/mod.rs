//! BI and BIS4 algebras, formula interpretation, and exhaustive axiom
//! checking on finite carriers.

mod pcm;
mod powerset;

pub use pcm::{FinitePcm, PcmError};
pub use powerset::{Mask, PowersetAlgebra};

use crate::calculus::{check_derivation, CalculusConfig, Derivation};
use crate::syntax::{bunch_to_formula, Atom, Formula, Sequent};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("valuation does not cover atom {0:?}")]
    MissingAtom(String),
    #[error("the algebra has no box operation")]
    BoxUnsupported,
}

/// A BI algebra: a bounded Heyting algebra carrying a residuated
/// commutative monoid `(emp, ∗, −∗)`, with an optional interior-like box.
///
/// Concrete instances in this crate are finite and enumerable; the
/// exhaustive law checkers below rely on that.
pub trait BiAlgebra {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn elements(&self) -> Vec<Self::Elem>;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn bot(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn heyting(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn emp(&self) -> Self::Elem;
    fn sep(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn wand(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// The box operation, when the algebra has one.
    fn box_op(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn name(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

/// An interpretation of atoms.
pub type Valuation<E> = BTreeMap<Atom, E>;

/// A finite BI(+box) algebra given by explicit tables. Fields are public
/// so tests can corrupt individual entries as negative controls.
#[derive(Clone, Debug)]
pub struct FiniteBiAlgebra {
    pub names: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub heyting: Vec<Vec<usize>>,
    pub sep: Vec<Vec<usize>>,
    pub wand: Vec<Vec<usize>>,
    pub bot: usize,
    pub top: usize,
    pub emp: usize,
    pub box_op: Option<Vec<usize>>,
}

impl FiniteBiAlgebra {
    /// Tabulates any finite algebra into explicit tables.
    pub fn tabulate<A: BiAlgebra>(alg: &A) -> FiniteBiAlgebra {
        let elems = alg.elements();
        let idx = |e: &A::Elem| elems.iter().position(|x| x == e).expect("closed ops");
        let n = elems.len();
        type BinOp<'x, E> = &'x dyn Fn(&E, &E) -> E;
        let table = |f: BinOp<A::Elem>| -> Vec<Vec<usize>> {
            (0..n)
                .map(|i| (0..n).map(|j| idx(&f(&elems[i], &elems[j]))).collect())
                .collect()
        };
        FiniteBiAlgebra {
            names: elems.iter().map(|e| alg.name(e)).collect(),
            leq: (0..n)
                .map(|i| (0..n).map(|j| alg.leq(&elems[i], &elems[j])).collect())
                .collect(),
            meet: table(&|a, b| alg.meet(a, b)),
            join: table(&|a, b| alg.join(a, b)),
            heyting: table(&|a, b| alg.heyting(a, b)),
            sep: table(&|a, b| alg.sep(a, b)),
            wand: table(&|a, b| alg.wand(a, b)),
            bot: idx(&alg.bot()),
            top: idx(&alg.top()),
            emp: idx(&alg.emp()),
            box_op: {
                let boxes: Option<Vec<usize>> = elems
                    .iter()
                    .map(|e| alg.box_op(e).map(|b| idx(&b)))
                    .collect();
                boxes
            },
        }
    }

    /// Installs a box table (indices into the carrier).
    pub fn with_box(mut self, table: Vec<usize>) -> FiniteBiAlgebra {
        assert_eq!(table.len(), self.names.len());
        self.box_op = Some(table);
        self
    }

    /// Installs the identity box, which satisfies all interior laws.
    pub fn with_identity_box(self) -> FiniteBiAlgebra {
        let n = self.names.len();
        self.with_box((0..n).collect())
    }
}

impl BiAlgebra for FiniteBiAlgebra {
    type Elem = usize;

    fn elements(&self) -> Vec<usize> {
        (0..self.names.len()).collect()
    }
    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.leq[*a][*b]
    }
    fn bot(&self) -> usize {
        self.bot
    }
    fn top(&self) -> usize {
        self.top
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.meet[*a][*b]
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        self.join[*a][*b]
    }
    fn heyting(&self, a: &usize, b: &usize) -> usize {
        self.heyting[*a][*b]
    }
    fn emp(&self) -> usize {
        self.emp
    }
    fn sep(&self, a: &usize, b: &usize) -> usize {
        self.sep[*a][*b]
    }
    fn wand(&self, a: &usize, b: &usize) -> usize {
        self.wand[*a][*b]
    }
    fn box_op(&self, a: &usize) -> Option<usize> {
        self.box_op.as_ref().map(|t| t[*a])
    }
    fn name(&self, a: &usize) -> String {
        self.names[*a].clone()
    }
}

/// Interprets a formula in an algebra under a valuation of its atoms.
pub fn interp_formula<A: BiAlgebra>(
    f: &Formula,
    alg: &A,
    val: &Valuation<A::Elem>,
) -> Result<A::Elem, AlgebraError> {
    match f {
        Formula::Atom(a) => val
            .get(a)
            .cloned()
            .ok_or_else(|| AlgebraError::MissingAtom(a.name().to_string())),
        Formula::True => Ok(alg.top()),
        Formula::False => Ok(alg.bot()),
        Formula::Emp => Ok(alg.emp()),
        Formula::And(l, r) => {
            Ok(alg.meet(&interp_formula(l, alg, val)?, &interp_formula(r, alg, val)?))
        }
        Formula::Or(l, r) => {
            Ok(alg.join(&interp_formula(l, alg, val)?, &interp_formula(r, alg, val)?))
        }
        Formula::Impl(l, r) => {
            Ok(alg.heyting(&interp_formula(l, alg, val)?, &interp_formula(r, alg, val)?))
        }
        Formula::Sep(l, r) => {
            Ok(alg.sep(&interp_formula(l, alg, val)?, &interp_formula(r, alg, val)?))
        }
        Formula::Wand(l, r) => {
            Ok(alg.wand(&interp_formula(l, alg, val)?, &interp_formula(r, alg, val)?))
        }
        Formula::Box(g) => {
            let inner = interp_formula(g, alg, val)?;
            alg.box_op(&inner).ok_or(AlgebraError::BoxUnsupported)
        }
    }
}

/// `⟦⌊Δ⌋⟧ ≤ ⟦φ⟧`: whether the sequent holds in the algebra.
pub fn interp_sequent<A: BiAlgebra>(
    s: &Sequent,
    alg: &A,
    val: &Valuation<A::Elem>,
) -> Result<bool, AlgebraError> {
    let lhs = interp_formula(&bunch_to_formula(&s.lhs), alg, val)?;
    let rhs = interp_formula(&s.rhs, alg, val)?;
    Ok(alg.leq(&lhs, &rhs))
}

#[derive(Clone, Debug)]
pub struct AxiomFailure {
    pub law: &'static str,
    pub witness: String,
}

/// Outcome of an exhaustive law check; at most one witness per law.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, law: &'static str, witness: String) {
        if !self.failures.iter().any(|f| f.law == law) {
            self.failures.push(AxiomFailure { law, witness });
        }
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            write!(out, "all laws hold")
        } else {
            for f in &self.failures {
                writeln!(out, "FAIL {}: {}", f.law, f.witness)?;
            }
            Ok(())
        }
    }
}

/// Exhaustively verifies the BI algebra laws: partial order, bounded
/// lattice with distributivity, Heyting residuation, the commutative
/// monoid `(sep, emp)` with monotonicity, and wand residuation.
pub fn check_bi_axioms<A: BiAlgebra>(alg: &A) -> AxiomReport {
    let mut report = AxiomReport::default();
    let elems = alg.elements();
    let show = |xs: &[&A::Elem]| -> String {
        xs.iter()
            .map(|e| alg.name(e))
            .collect::<Vec<_>>()
            .join(", ")
    };

    for a in &elems {
        if !alg.leq(a, a) {
            report.fail("leq reflexive", show(&[a]));
        }
        if !alg.leq(&alg.bot(), a) {
            report.fail("bot least", show(&[a]));
        }
        if !alg.leq(a, &alg.top()) {
            report.fail("top greatest", show(&[a]));
        }
        if alg.sep(a, &alg.emp()) != *a || alg.sep(&alg.emp(), a) != *a {
            report.fail("emp unit for sep", show(&[a]));
        }
    }
    for a in &elems {
        for b in &elems {
            if alg.leq(a, b) && alg.leq(b, a) && a != b {
                report.fail("leq antisymmetric", show(&[a, b]));
            }
            let m = alg.meet(a, b);
            if !alg.leq(&m, a) || !alg.leq(&m, b) {
                report.fail("meet lower bound", show(&[a, b]));
            }
            let j = alg.join(a, b);
            if !alg.leq(a, &j) || !alg.leq(b, &j) {
                report.fail("join upper bound", show(&[a, b]));
            }
            if alg.sep(a, b) != alg.sep(b, a) {
                report.fail("sep commutative", show(&[a, b]));
            }
        }
    }
    for a in &elems {
        for b in &elems {
            for c in &elems {
                if alg.leq(a, b) && alg.leq(b, c) && !alg.leq(a, c) {
                    report.fail("leq transitive", show(&[a, b, c]));
                }
                if alg.leq(c, a) && alg.leq(c, b) && !alg.leq(c, &alg.meet(a, b)) {
                    report.fail("meet greatest lower bound", show(&[a, b, c]));
                }
                if alg.leq(a, c) && alg.leq(b, c) && !alg.leq(&alg.join(a, b), c) {
                    report.fail("join least upper bound", show(&[a, b, c]));
                }
                if alg.meet(a, &alg.join(b, c)) != alg.join(&alg.meet(a, b), &alg.meet(a, c)) {
                    report.fail("distributivity", show(&[a, b, c]));
                }
                let heyting_fwd = alg.leq(&alg.meet(a, b), c);
                let heyting_bwd = alg.leq(a, &alg.heyting(b, c));
                if heyting_fwd != heyting_bwd {
                    report.fail("heyting residuation", show(&[a, b, c]));
                }
                if alg.sep(&alg.sep(a, b), c) != alg.sep(a, &alg.sep(b, c)) {
                    report.fail("sep associative", show(&[a, b, c]));
                }
                let wand_fwd = alg.leq(&alg.sep(a, b), c);
                let wand_bwd = alg.leq(a, &alg.wand(b, c));
                if wand_fwd != wand_bwd {
                    report.fail("wand residuation", show(&[a, b, c]));
                }
                if alg.leq(a, b) && !alg.leq(&alg.sep(a, c), &alg.sep(b, c)) {
                    report.fail("sep monotone", show(&[a, b, c]));
                }
            }
        }
    }
    report
}

/// Exhaustively verifies the BIS4 box laws: monotonicity, deflation,
/// idempotence, preservation of top and emp, and lax monoidality for
/// meet and sep.
pub fn check_bis4_axioms<A: BiAlgebra>(alg: &A) -> AxiomReport {
    let mut report = AxiomReport::default();
    let elems = alg.elements();
    let Some(boxes): Option<Vec<A::Elem>> = elems.iter().map(|e| alg.box_op(e)).collect() else {
        report.fail("box total", "box operation is missing".into());
        return report;
    };
    let boxed = |e: &A::Elem| -> A::Elem {
        let i = elems.iter().position(|x| x == e).expect("closed ops");
        boxes[i].clone()
    };
    let show = |xs: &[&A::Elem]| -> String {
        xs.iter()
            .map(|e| alg.name(e))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if boxed(&alg.top()) != alg.top() {
        report.fail("box preserves top", alg.name(&alg.top()));
    }
    if boxed(&alg.emp()) != alg.emp() {
        report.fail("box preserves emp", alg.name(&alg.emp()));
    }
    for a in &elems {
        let ba = boxed(a);
        if !alg.leq(&ba, a) {
            report.fail("box deflationary", show(&[a]));
        }
        if !alg.leq(&ba, &boxed(&ba)) {
            report.fail("box idempotent", show(&[a]));
        }
        for b in &elems {
            let bb = boxed(b);
            if alg.leq(a, b) && !alg.leq(&ba, &bb) {
                report.fail("box monotone", show(&[a, b]));
            }
            if !alg.leq(&alg.meet(&ba, &bb), &boxed(&alg.meet(a, b))) {
                report.fail("box lax over meet", show(&[a, b]));
            }
            if !alg.leq(&alg.sep(&ba, &bb), &boxed(&alg.sep(a, b))) {
                report.fail("box lax over sep", show(&[a, b]));
            }
        }
    }
    report
}

#[derive(Debug, Error)]
pub enum SoundnessError {
    #[error("derivation fails the kernel: {0}")]
    BadDerivation(String),
    #[error("algebra does not validate structural rule {index}: {rule}")]
    RuleNotValidated { index: usize, rule: String },
    #[error("S4 derivation but the algebra has no box: {0}")]
    Algebra(#[from] AlgebraError),
}

/// Soundness harness: re-checks the derivation, verifies that the algebra
/// validates every installed structural rule, then evaluates the
/// conclusion. For a lawful algebra and valuation the result is expected
/// to be `true` on every kernel-accepted derivation.
pub fn soundness_check<A: BiAlgebra>(
    d: &Derivation,
    cfg: &CalculusConfig,
    alg: &A,
    val: &Valuation<A::Elem>,
) -> Result<bool, SoundnessError> {
    check_derivation(d, cfg).map_err(|e| SoundnessError::BadDerivation(e.to_string()))?;
    for (index, rule) in cfg.struct_rules.rules.iter().enumerate() {
        if !crate::bterm::validates_rule(alg, rule) {
            return Err(SoundnessError::RuleNotValidated {
                index,
                rule: rule.to_string(),
            });
        }
    }
    Ok(interp_sequent(&d.conclusion, alg, val)?)
}
