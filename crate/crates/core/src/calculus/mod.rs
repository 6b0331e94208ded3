//! Derivation trees and the checking kernel for the BI sequent calculus,
//! its extension with simple structural rules, and the S4 box rules.
//!
//! A derivation node carries the rule it claims to instantiate, its
//! conclusion, and explicit parameters (the context the rule acts at and,
//! for structural-rule extensions, the variable instantiation). Checking
//! a node is therefore a deterministic shape comparison, not a search.
//! Sequent equality is syntactic everywhere except in [`RuleName::Equiv`],
//! which is the one place bunch equivalence enters.

pub mod doc;

pub use doc::{derivation_from_json, derivation_to_json, DerivationDoc, DocError};

use crate::bterm::{subst, RuleSet};
use crate::syntax::{
    bunch_equiv, ctx_at_path, subtree_at, Atom, Bunch, BunchCtx, Formula, Sequent,
};
use std::collections::BTreeMap;
use thiserror::Error;

/// Which calculus a derivation is checked against.
#[derive(Clone, Debug, Default)]
pub struct CalculusConfig {
    pub struct_rules: RuleSet,
    pub s4_enabled: bool,
    pub cut_allowed: bool,
}

impl CalculusConfig {
    /// Plain BI, cut-free.
    pub fn bi() -> CalculusConfig {
        CalculusConfig::default()
    }

    /// BIS4, cut-free.
    pub fn bis4() -> CalculusConfig {
        CalculusConfig {
            s4_enabled: true,
            ..CalculusConfig::default()
        }
    }

    pub fn with_rules(mut self, rules: RuleSet) -> CalculusConfig {
        self.struct_rules = rules;
        self
    }

    pub fn with_cut(mut self) -> CalculusConfig {
        self.cut_allowed = true;
        self
    }

    pub fn without_cut(&self) -> CalculusConfig {
        CalculusConfig {
            cut_allowed: false,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleName {
    Ax,
    Equiv,
    WeakenSemi,
    ContractSemi,
    Cut,
    EmpR,
    EmpL,
    SepR,
    SepL,
    WandR,
    WandL,
    TrueR,
    TrueL,
    AndR,
    AndL,
    ImplR,
    ImplL,
    FalseL,
    DisjR1,
    DisjR2,
    DisjL,
    BoxR,
    BoxL,
    StructExt(usize),
}

impl RuleName {
    pub fn token(&self) -> String {
        match self {
            RuleName::Ax => "ax".into(),
            RuleName::Equiv => "equiv".into(),
            RuleName::WeakenSemi => "w;".into(),
            RuleName::ContractSemi => "c;".into(),
            RuleName::Cut => "cut".into(),
            RuleName::EmpR => "empR".into(),
            RuleName::EmpL => "empL".into(),
            RuleName::SepR => "sepR".into(),
            RuleName::SepL => "sepL".into(),
            RuleName::WandR => "wandR".into(),
            RuleName::WandL => "wandL".into(),
            RuleName::TrueR => "trueR".into(),
            RuleName::TrueL => "trueL".into(),
            RuleName::AndR => "andR".into(),
            RuleName::AndL => "andL".into(),
            RuleName::ImplR => "implR".into(),
            RuleName::ImplL => "implL".into(),
            RuleName::FalseL => "falseL".into(),
            RuleName::DisjR1 => "disjR1".into(),
            RuleName::DisjR2 => "disjR2".into(),
            RuleName::DisjL => "disjL".into(),
            RuleName::BoxR => "boxR".into(),
            RuleName::BoxL => "boxL".into(),
            RuleName::StructExt(i) => format!("ext:{i}"),
        }
    }

    pub fn parse_token(tok: &str) -> Option<RuleName> {
        Some(match tok {
            "ax" => RuleName::Ax,
            "equiv" => RuleName::Equiv,
            "w;" => RuleName::WeakenSemi,
            "c;" => RuleName::ContractSemi,
            "cut" => RuleName::Cut,
            "empR" => RuleName::EmpR,
            "empL" => RuleName::EmpL,
            "sepR" => RuleName::SepR,
            "sepL" => RuleName::SepL,
            "wandR" => RuleName::WandR,
            "wandL" => RuleName::WandL,
            "trueR" => RuleName::TrueR,
            "trueL" => RuleName::TrueL,
            "andR" => RuleName::AndR,
            "andL" => RuleName::AndL,
            "implR" => RuleName::ImplR,
            "implL" => RuleName::ImplL,
            "falseL" => RuleName::FalseL,
            "disjR1" => RuleName::DisjR1,
            "disjR2" => RuleName::DisjR2,
            "disjL" => RuleName::DisjL,
            "boxR" => RuleName::BoxR,
            "boxL" => RuleName::BoxL,
            other => RuleName::StructExt(other.strip_prefix("ext:")?.parse().ok()?),
        })
    }
}

impl std::fmt::Display for RuleName {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(out, "{}", self.token())
    }
}

/// Explicit witnesses for the rule instance at a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleParams {
    None,
    /// The context `Π(−)` the rule acts at.
    Ctx(BunchCtx),
    /// Context plus variable instantiation of a simple structural rule.
    StructExt {
        ctx: BunchCtx,
        env: BTreeMap<u32, Bunch>,
    },
}

impl RuleParams {
    pub fn ctx(&self) -> Option<&BunchCtx> {
        match self {
            RuleParams::None => None,
            RuleParams::Ctx(c) => Some(c),
            RuleParams::StructExt { ctx, .. } => Some(ctx),
        }
    }
}

/// A rule-labeled proof tree with a cached height. Leaf rules have height
/// 0; an internal node has height one more than its tallest premise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: RuleName,
    pub conclusion: Sequent,
    pub params: RuleParams,
    pub premises: Vec<Derivation>,
    height: usize,
}

impl Derivation {
    pub fn new(
        rule: RuleName,
        conclusion: Sequent,
        params: RuleParams,
        premises: Vec<Derivation>,
    ) -> Derivation {
        let height = premises.iter().map(|p| p.height + 1).max().unwrap_or(0);
        Derivation {
            rule,
            conclusion,
            params,
            premises,
            height,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn uses_cut(&self) -> bool {
        self.rule == RuleName::Cut || self.premises.iter().any(Derivation::uses_cut)
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(Derivation::node_count)
            .sum::<usize>()
    }

    // -- constructors that compute the conclusion from the rule shape --

    pub fn ax(a: Atom) -> Derivation {
        let f = Formula::Atom(a);
        Derivation::new(
            RuleName::Ax,
            Sequent::new(Bunch::Leaf(f.clone()), f),
            RuleParams::None,
            vec![],
        )
    }

    pub fn emp_r() -> Derivation {
        Derivation::new(
            RuleName::EmpR,
            Sequent::new(Bunch::EmpM, Formula::Emp),
            RuleParams::None,
            vec![],
        )
    }

    pub fn true_r() -> Derivation {
        Derivation::new(
            RuleName::TrueR,
            Sequent::new(Bunch::EmpA, Formula::True),
            RuleParams::None,
            vec![],
        )
    }

    pub fn false_l(ctx: BunchCtx, rhs: Formula) -> Derivation {
        let lhs = ctx.fill(Bunch::Leaf(Formula::False));
        Derivation::new(
            RuleName::FalseL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![],
        )
    }

    /// Conclusion `lhs ⊢ φ` from a premise with an equivalent left bunch.
    pub fn equiv(lhs: Bunch, premise: Derivation) -> Derivation {
        let rhs = premise.conclusion.rhs.clone();
        Derivation::new(
            RuleName::Equiv,
            Sequent::new(lhs, rhs),
            RuleParams::None,
            vec![premise],
        )
    }

    /// Like [`Derivation::equiv`] but skips the node when the bunch is
    /// already syntactically identical.
    pub fn equiv_if_needed(lhs: Bunch, premise: Derivation) -> Derivation {
        if premise.conclusion.lhs == lhs {
            premise
        } else {
            Derivation::equiv(lhs, premise)
        }
    }

    /// `Δ(Δ1) ⊢ φ  ⟹  Δ(Δ1 ; Δ2) ⊢ φ` where `premise.lhs = ctx.fill(kept)`.
    pub fn weaken_semi(
        ctx: BunchCtx,
        kept: Bunch,
        added: Bunch,
        premise: Derivation,
    ) -> Derivation {
        debug_assert_eq!(premise.conclusion.lhs, ctx.fill(kept.clone()));
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::semi(kept, added));
        Derivation::new(
            RuleName::WeakenSemi,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    /// `Δ(Δ1 ; Δ1) ⊢ φ  ⟹  Δ(Δ1) ⊢ φ`.
    pub fn contract_semi(ctx: BunchCtx, dup: Bunch, premise: Derivation) -> Derivation {
        debug_assert_eq!(
            premise.conclusion.lhs,
            ctx.fill(Bunch::semi(dup.clone(), dup.clone()))
        );
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(dup);
        Derivation::new(
            RuleName::ContractSemi,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    /// `Δ′ ⊢ A` and `Δ(A) ⊢ B` give `Δ(Δ′) ⊢ B`.
    pub fn cut(ctx: BunchCtx, lemma: Derivation, usage: Derivation) -> Derivation {
        debug_assert_eq!(
            usage.conclusion.lhs,
            ctx.fill(Bunch::Leaf(lemma.conclusion.rhs.clone()))
        );
        let lhs = ctx.fill(lemma.conclusion.lhs.clone());
        let rhs = usage.conclusion.rhs.clone();
        Derivation::new(
            RuleName::Cut,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![lemma, usage],
        )
    }

    pub fn emp_l(ctx: BunchCtx, premise: Derivation) -> Derivation {
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::Leaf(Formula::Emp));
        Derivation::new(
            RuleName::EmpL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    pub fn true_l(ctx: BunchCtx, premise: Derivation) -> Derivation {
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::Leaf(Formula::True));
        Derivation::new(
            RuleName::TrueL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    pub fn sep_r(left: Derivation, right: Derivation) -> Derivation {
        let lhs = Bunch::comma(left.conclusion.lhs.clone(), right.conclusion.lhs.clone());
        let rhs = Formula::sep(left.conclusion.rhs.clone(), right.conclusion.rhs.clone());
        Derivation::new(
            RuleName::SepR,
            Sequent::new(lhs, rhs),
            RuleParams::None,
            vec![left, right],
        )
    }

    pub fn sep_l(ctx: BunchCtx, phi: Formula, psi: Formula, premise: Derivation) -> Derivation {
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::Leaf(Formula::sep(phi, psi)));
        Derivation::new(
            RuleName::SepL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    pub fn and_r(left: Derivation, right: Derivation) -> Derivation {
        let lhs = Bunch::semi(left.conclusion.lhs.clone(), right.conclusion.lhs.clone());
        let rhs = Formula::and(left.conclusion.rhs.clone(), right.conclusion.rhs.clone());
        Derivation::new(
            RuleName::AndR,
            Sequent::new(lhs, rhs),
            RuleParams::None,
            vec![left, right],
        )
    }

    pub fn and_l(ctx: BunchCtx, phi: Formula, psi: Formula, premise: Derivation) -> Derivation {
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::Leaf(Formula::and(phi, psi)));
        Derivation::new(
            RuleName::AndL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    /// `Δ , φ ⊢ ψ  ⟹  Δ ⊢ φ −∗ ψ`.
    pub fn wand_r(delta: Bunch, phi: Formula, premise: Derivation) -> Derivation {
        debug_assert_eq!(
            premise.conclusion.lhs,
            Bunch::comma(delta.clone(), Bunch::Leaf(phi.clone()))
        );
        let psi = premise.conclusion.rhs.clone();
        Derivation::new(
            RuleName::WandR,
            Sequent::new(delta, Formula::wand(phi, psi)),
            RuleParams::None,
            vec![premise],
        )
    }

    /// `Δ1 ⊢ φ` and `Δ(Δ2 , ψ) ⊢ χ` give
    /// `Δ(Δ1 , (Δ2 , φ −∗ ψ)) ⊢ χ`; the hole content is right-nested.
    pub fn wand_l(
        ctx: BunchCtx,
        d2: Bunch,
        psi: Formula,
        arg: Derivation,
        usage: Derivation,
    ) -> Derivation {
        let phi = arg.conclusion.rhs.clone();
        let d1 = arg.conclusion.lhs.clone();
        let hole = Bunch::comma(d1, Bunch::comma(d2, Bunch::Leaf(Formula::wand(phi, psi))));
        let lhs = ctx.fill(hole);
        let rhs = usage.conclusion.rhs.clone();
        Derivation::new(
            RuleName::WandL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![arg, usage],
        )
    }

    /// `Δ ; φ ⊢ ψ  ⟹  Δ ⊢ φ → ψ`.
    pub fn impl_r(delta: Bunch, phi: Formula, premise: Derivation) -> Derivation {
        debug_assert_eq!(
            premise.conclusion.lhs,
            Bunch::semi(delta.clone(), Bunch::Leaf(phi.clone()))
        );
        let psi = premise.conclusion.rhs.clone();
        Derivation::new(
            RuleName::ImplR,
            Sequent::new(delta, Formula::impl_(phi, psi)),
            RuleParams::None,
            vec![premise],
        )
    }

    pub fn impl_l(
        ctx: BunchCtx,
        d2: Bunch,
        psi: Formula,
        arg: Derivation,
        usage: Derivation,
    ) -> Derivation {
        let phi = arg.conclusion.rhs.clone();
        let d1 = arg.conclusion.lhs.clone();
        let hole = Bunch::semi(d1, Bunch::semi(d2, Bunch::Leaf(Formula::impl_(phi, psi))));
        let lhs = ctx.fill(hole);
        let rhs = usage.conclusion.rhs.clone();
        Derivation::new(
            RuleName::ImplL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![arg, usage],
        )
    }

    pub fn disj_r1(psi: Formula, premise: Derivation) -> Derivation {
        let lhs = premise.conclusion.lhs.clone();
        let rhs = Formula::or(premise.conclusion.rhs.clone(), psi);
        Derivation::new(
            RuleName::DisjR1,
            Sequent::new(lhs, rhs),
            RuleParams::None,
            vec![premise],
        )
    }

    pub fn disj_r2(phi: Formula, premise: Derivation) -> Derivation {
        let lhs = premise.conclusion.lhs.clone();
        let rhs = Formula::or(phi, premise.conclusion.rhs.clone());
        Derivation::new(
            RuleName::DisjR2,
            Sequent::new(lhs, rhs),
            RuleParams::None,
            vec![premise],
        )
    }

    pub fn disj_l(
        ctx: BunchCtx,
        phi: Formula,
        psi: Formula,
        left: Derivation,
        right: Derivation,
    ) -> Derivation {
        let rhs = left.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::Leaf(Formula::or(phi, psi)));
        Derivation::new(
            RuleName::DisjL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![left, right],
        )
    }

    /// `□Δ ⊢ A  ⟹  □Δ ⊢ □A`.
    pub fn box_r(premise: Derivation) -> Derivation {
        let lhs = premise.conclusion.lhs.clone();
        let rhs = Formula::boxed(premise.conclusion.rhs.clone());
        Derivation::new(
            RuleName::BoxR,
            Sequent::new(lhs, rhs),
            RuleParams::None,
            vec![premise],
        )
    }

    /// `Δ(A) ⊢ B  ⟹  Δ(□A) ⊢ B`.
    pub fn box_l(ctx: BunchCtx, inner: Formula, premise: Derivation) -> Derivation {
        let rhs = premise.conclusion.rhs.clone();
        let lhs = ctx.fill(Bunch::Leaf(Formula::boxed(inner)));
        Derivation::new(
            RuleName::BoxL,
            Sequent::new(lhs, rhs),
            RuleParams::Ctx(ctx),
            vec![premise],
        )
    }

    pub fn struct_ext(
        index: usize,
        ctx: BunchCtx,
        env: BTreeMap<u32, Bunch>,
        conclusion_term: &crate::bterm::BTerm,
        premises: Vec<Derivation>,
        rhs: Formula,
    ) -> Derivation {
        let instantiated = subst(conclusion_term, &env).expect("env covers conclusion term");
        let lhs = ctx.fill(instantiated);
        Derivation::new(
            RuleName::StructExt(index),
            Sequent::new(lhs, rhs),
            RuleParams::StructExt { ctx, env },
            premises,
        )
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NodeError {
    #[error("rule {rule} is not permitted here: {why}")]
    IllegalRule { rule: String, why: String },
    #[error("{rule} expects {expected} premises, found {found}")]
    PremiseCount {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("{rule}: {field} mismatch: expected `{expected}`, found `{found}`")]
    Shape {
        rule: String,
        field: &'static str,
        expected: String,
        found: String,
    },
    #[error("{rule}: bad parameters: {why}")]
    BadParams { rule: String, why: String },
}

/// A node failure located by its premise-index path from the root.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("at node {}: {error}", if path.is_empty() { "<root>".to_string() } else { path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".") })]
pub struct CheckError {
    pub path: Vec<usize>,
    pub error: NodeError,
}

fn shape(rule: RuleName, field: &'static str, expected: String, found: String) -> NodeError {
    NodeError::Shape {
        rule: rule.token(),
        field,
        expected,
        found,
    }
}

fn illegal(rule: RuleName, why: &str) -> NodeError {
    NodeError::IllegalRule {
        rule: rule.token(),
        why: why.into(),
    }
}

fn need_ctx(d: &Derivation) -> Result<&BunchCtx, NodeError> {
    d.params.ctx().ok_or_else(|| NodeError::BadParams {
        rule: d.rule.token(),
        why: "missing context parameter".into(),
    })
}

/// The content of the conclusion hole at `ctx`, after verifying that the
/// stored context (frames and siblings) matches the conclusion bunch.
fn hole_content<'a>(
    d: &Derivation,
    lhs: &'a Bunch,
    ctx: &BunchCtx,
) -> Result<&'a Bunch, NodeError> {
    let path = ctx.path();
    let rebuilt = ctx_at_path(lhs, &path).map_err(|e| NodeError::BadParams {
        rule: d.rule.token(),
        why: e.to_string(),
    })?;
    if &rebuilt != ctx {
        return Err(NodeError::BadParams {
            rule: d.rule.token(),
            why: "context siblings do not match the conclusion".into(),
        });
    }
    subtree_at(lhs, &path).map_err(|e| NodeError::BadParams {
        rule: d.rule.token(),
        why: e.to_string(),
    })
}

fn expect_premises(d: &Derivation, n: usize) -> Result<(), NodeError> {
    if d.premises.len() != n {
        return Err(NodeError::PremiseCount {
            rule: d.rule.token(),
            expected: n,
            found: d.premises.len(),
        });
    }
    Ok(())
}

fn expect_same_rhs(d: &Derivation, premise: &Derivation) -> Result<(), NodeError> {
    if premise.conclusion.rhs != d.conclusion.rhs {
        return Err(shape(
            d.rule,
            "premise rhs",
            d.conclusion.rhs.to_string(),
            premise.conclusion.rhs.to_string(),
        ));
    }
    Ok(())
}

fn expect_premise_lhs(d: &Derivation, premise: &Derivation, want: Bunch) -> Result<(), NodeError> {
    if premise.conclusion.lhs != want {
        return Err(shape(
            d.rule,
            "premise lhs",
            want.to_string(),
            premise.conclusion.lhs.to_string(),
        ));
    }
    Ok(())
}

/// Checks a single node against its rule schema, assuming the premises
/// themselves have already been checked.
pub fn check_node(d: &Derivation, cfg: &CalculusConfig) -> Result<(), NodeError> {
    match d.rule {
        RuleName::Cut if !cfg.cut_allowed => {
            return Err(illegal(d.rule, "cut is not allowed by the configuration"))
        }
        RuleName::BoxR | RuleName::BoxL if !cfg.s4_enabled => {
            return Err(illegal(d.rule, "box rules need the S4 calculus"))
        }
        RuleName::StructExt(i) if i >= cfg.struct_rules.len() => {
            return Err(illegal(
                d.rule,
                &format!(
                    "structural rule index {i} out of range (have {})",
                    cfg.struct_rules.len()
                ),
            ))
        }
        RuleName::StructExt(i)
            if !crate::bterm::is_linear(&cfg.struct_rules.rules[i].conclusion) =>
        {
            return Err(illegal(
                d.rule,
                "extension rule's conclusion term is not linear",
            ))
        }
        _ => {}
    }
    // parameters must fit the rule's shape
    let params_ok = match d.rule {
        RuleName::Ax
        | RuleName::Equiv
        | RuleName::EmpR
        | RuleName::TrueR
        | RuleName::SepR
        | RuleName::AndR
        | RuleName::WandR
        | RuleName::ImplR
        | RuleName::DisjR1
        | RuleName::DisjR2
        | RuleName::BoxR => matches!(d.params, RuleParams::None),
        RuleName::StructExt(_) => matches!(d.params, RuleParams::StructExt { .. }),
        _ => matches!(d.params, RuleParams::Ctx(_)),
    };
    if !params_ok {
        return Err(NodeError::BadParams {
            rule: d.rule.token(),
            why: "parameters do not fit the rule".into(),
        });
    }
    let conclusion = &d.conclusion;
    match d.rule {
        RuleName::Ax => {
            expect_premises(d, 0)?;
            match (&conclusion.lhs, &conclusion.rhs) {
                (Bunch::Leaf(Formula::Atom(a)), Formula::Atom(b)) if a == b => Ok(()),
                _ => Err(shape(
                    d.rule,
                    "conclusion",
                    "a |- a for an atom a".into(),
                    conclusion.to_string(),
                )),
            }
        }
        RuleName::Equiv => {
            expect_premises(d, 1)?;
            expect_same_rhs(d, &d.premises[0])?;
            if !bunch_equiv(&d.premises[0].conclusion.lhs, &conclusion.lhs) {
                return Err(shape(
                    d.rule,
                    "premise lhs",
                    format!("a bunch equivalent to {}", conclusion.lhs),
                    d.premises[0].conclusion.lhs.to_string(),
                ));
            }
            Ok(())
        }
        RuleName::WeakenSemi => {
            expect_premises(d, 1)?;
            expect_same_rhs(d, &d.premises[0])?;
            let ctx = need_ctx(d)?;
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            let Bunch::Semi(kept, _) = hole else {
                return Err(shape(
                    d.rule,
                    "conclusion hole",
                    "Δ1 ; Δ2".into(),
                    hole.to_string(),
                ));
            };
            expect_premise_lhs(d, &d.premises[0], ctx.fill((**kept).clone()))
        }
        RuleName::ContractSemi => {
            expect_premises(d, 1)?;
            expect_same_rhs(d, &d.premises[0])?;
            let ctx = need_ctx(d)?;
            let dup = hole_content(d, &conclusion.lhs, ctx)?.clone();
            expect_premise_lhs(d, &d.premises[0], ctx.fill(Bunch::semi(dup.clone(), dup)))
        }
        RuleName::Cut => {
            expect_premises(d, 2)?;
            let ctx = need_ctx(d)?;
            let lemma = &d.premises[0];
            let usage = &d.premises[1];
            expect_same_rhs(d, usage)?;
            expect_premise_lhs(
                d,
                usage,
                ctx.fill(Bunch::Leaf(lemma.conclusion.rhs.clone())),
            )?;
            let want = ctx.fill(lemma.conclusion.lhs.clone());
            if conclusion.lhs != want {
                return Err(shape(
                    d.rule,
                    "conclusion lhs",
                    want.to_string(),
                    conclusion.lhs.to_string(),
                ));
            }
            Ok(())
        }
        RuleName::EmpR => {
            expect_premises(d, 0)?;
            if conclusion.lhs != Bunch::EmpM || conclusion.rhs != Formula::Emp {
                return Err(shape(
                    d.rule,
                    "conclusion",
                    "empm |- emp".into(),
                    conclusion.to_string(),
                ));
            }
            Ok(())
        }
        RuleName::TrueR => {
            expect_premises(d, 0)?;
            if conclusion.lhs != Bunch::EmpA || conclusion.rhs != Formula::True {
                return Err(shape(
                    d.rule,
                    "conclusion",
                    "empa |- top".into(),
                    conclusion.to_string(),
                ));
            }
            Ok(())
        }
        RuleName::FalseL => {
            expect_premises(d, 0)?;
            let ctx = need_ctx(d)?;
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            if *hole != Bunch::Leaf(Formula::False) {
                return Err(shape(
                    d.rule,
                    "conclusion hole",
                    "bot".into(),
                    hole.to_string(),
                ));
            }
            Ok(())
        }
        RuleName::EmpL | RuleName::TrueL => {
            expect_premises(d, 1)?;
            expect_same_rhs(d, &d.premises[0])?;
            let ctx = need_ctx(d)?;
            let (principal, replacement) = if d.rule == RuleName::EmpL {
                (Formula::Emp, Bunch::EmpM)
            } else {
                (Formula::True, Bunch::EmpA)
            };
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            if *hole != Bunch::Leaf(principal.clone()) {
                return Err(shape(
                    d.rule,
                    "conclusion hole",
                    principal.to_string(),
                    hole.to_string(),
                ));
            }
            expect_premise_lhs(d, &d.premises[0], ctx.fill(replacement))
        }
        RuleName::SepR | RuleName::AndR => {
            expect_premises(d, 2)?;
            let l = &d.premises[0].conclusion;
            let r = &d.premises[1].conclusion;
            let (want_lhs, want_rhs) = if d.rule == RuleName::SepR {
                (
                    Bunch::comma(l.lhs.clone(), r.lhs.clone()),
                    Formula::sep(l.rhs.clone(), r.rhs.clone()),
                )
            } else {
                (
                    Bunch::semi(l.lhs.clone(), r.lhs.clone()),
                    Formula::and(l.rhs.clone(), r.rhs.clone()),
                )
            };
            if conclusion.lhs != want_lhs {
                return Err(shape(
                    d.rule,
                    "conclusion lhs",
                    want_lhs.to_string(),
                    conclusion.lhs.to_string(),
                ));
            }
            if conclusion.rhs != want_rhs {
                return Err(shape(
                    d.rule,
                    "conclusion rhs",
                    want_rhs.to_string(),
                    conclusion.rhs.to_string(),
                ));
            }
            Ok(())
        }
        RuleName::SepL | RuleName::AndL => {
            expect_premises(d, 1)?;
            expect_same_rhs(d, &d.premises[0])?;
            let ctx = need_ctx(d)?;
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            let (phi, psi, replacement) = match (d.rule, hole) {
                (RuleName::SepL, Bunch::Leaf(Formula::Sep(phi, psi))) => (
                    phi,
                    psi,
                    Bunch::comma(Bunch::Leaf((**phi).clone()), Bunch::Leaf((**psi).clone())),
                ),
                (RuleName::AndL, Bunch::Leaf(Formula::And(phi, psi))) => (
                    phi,
                    psi,
                    Bunch::semi(Bunch::Leaf((**phi).clone()), Bunch::Leaf((**psi).clone())),
                ),
                _ => {
                    return Err(shape(
                        d.rule,
                        "conclusion hole",
                        "the principal formula".into(),
                        hole.to_string(),
                    ))
                }
            };
            let _ = (phi, psi);
            expect_premise_lhs(d, &d.premises[0], ctx.fill(replacement))
        }
        RuleName::WandR | RuleName::ImplR => {
            expect_premises(d, 1)?;
            let premise = &d.premises[0];
            let (phi, psi) = match (&d.rule, &conclusion.rhs) {
                (RuleName::WandR, Formula::Wand(phi, psi)) => (phi, psi),
                (RuleName::ImplR, Formula::Impl(phi, psi)) => (phi, psi),
                _ => {
                    return Err(shape(
                        d.rule,
                        "conclusion rhs",
                        "an implication".into(),
                        conclusion.rhs.to_string(),
                    ))
                }
            };
            if premise.conclusion.rhs != **psi {
                return Err(shape(
                    d.rule,
                    "premise rhs",
                    psi.to_string(),
                    premise.conclusion.rhs.to_string(),
                ));
            }
            let extended = Bunch::Leaf((**phi).clone());
            let want = if d.rule == RuleName::WandR {
                Bunch::comma(conclusion.lhs.clone(), extended)
            } else {
                Bunch::semi(conclusion.lhs.clone(), extended)
            };
            expect_premise_lhs(d, premise, want)
        }
        RuleName::WandL | RuleName::ImplL => {
            expect_premises(d, 2)?;
            let arg = &d.premises[0];
            let usage = &d.premises[1];
            expect_same_rhs(d, usage)?;
            let ctx = need_ctx(d)?;
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            // hole = Δ1 ⊙ (Δ2 ⊙ (φ ⋄ ψ)), right-nested
            let (d1, d2, phi, psi) = match (d.rule, hole) {
                (RuleName::WandL, Bunch::Comma(d1, rest)) => match &**rest {
                    Bunch::Comma(d2, leaf) => match &**leaf {
                        Bunch::Leaf(Formula::Wand(phi, psi)) => (d1, d2, phi, psi),
                        other => {
                            return Err(shape(
                                d.rule,
                                "conclusion hole",
                                "Δ1 , (Δ2 , φ -* ψ)".into(),
                                other.to_string(),
                            ))
                        }
                    },
                    other => {
                        return Err(shape(
                            d.rule,
                            "conclusion hole",
                            "Δ1 , (Δ2 , φ -* ψ)".into(),
                            other.to_string(),
                        ))
                    }
                },
                (RuleName::ImplL, Bunch::Semi(d1, rest)) => match &**rest {
                    Bunch::Semi(d2, leaf) => match &**leaf {
                        Bunch::Leaf(Formula::Impl(phi, psi)) => (d1, d2, phi, psi),
                        other => {
                            return Err(shape(
                                d.rule,
                                "conclusion hole",
                                "Δ1 ; (Δ2 ; φ -> ψ)".into(),
                                other.to_string(),
                            ))
                        }
                    },
                    other => {
                        return Err(shape(
                            d.rule,
                            "conclusion hole",
                            "Δ1 ; (Δ2 ; φ -> ψ)".into(),
                            other.to_string(),
                        ))
                    }
                },
                (_, other) => {
                    return Err(shape(
                        d.rule,
                        "conclusion hole",
                        "Δ1 ⊙ (Δ2 ⊙ principal)".into(),
                        other.to_string(),
                    ))
                }
            };
            if arg.conclusion.lhs != **d1 {
                return Err(shape(
                    d.rule,
                    "first premise lhs",
                    d1.to_string(),
                    arg.conclusion.lhs.to_string(),
                ));
            }
            if arg.conclusion.rhs != **phi {
                return Err(shape(
                    d.rule,
                    "first premise rhs",
                    phi.to_string(),
                    arg.conclusion.rhs.to_string(),
                ));
            }
            let replacement = if d.rule == RuleName::WandL {
                Bunch::comma((**d2).clone(), Bunch::Leaf((**psi).clone()))
            } else {
                Bunch::semi((**d2).clone(), Bunch::Leaf((**psi).clone()))
            };
            expect_premise_lhs(d, usage, ctx.fill(replacement))
        }
        RuleName::DisjR1 | RuleName::DisjR2 => {
            expect_premises(d, 1)?;
            let premise = &d.premises[0];
            let Formula::Or(phi, psi) = &conclusion.rhs else {
                return Err(shape(
                    d.rule,
                    "conclusion rhs",
                    "a disjunction".into(),
                    conclusion.rhs.to_string(),
                ));
            };
            let want = if d.rule == RuleName::DisjR1 { phi } else { psi };
            if premise.conclusion.rhs != **want {
                return Err(shape(
                    d.rule,
                    "premise rhs",
                    want.to_string(),
                    premise.conclusion.rhs.to_string(),
                ));
            }
            expect_premise_lhs(d, premise, conclusion.lhs.clone())
        }
        RuleName::DisjL => {
            expect_premises(d, 2)?;
            expect_same_rhs(d, &d.premises[0])?;
            expect_same_rhs(d, &d.premises[1])?;
            let ctx = need_ctx(d)?;
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            let Bunch::Leaf(Formula::Or(phi, psi)) = hole else {
                return Err(shape(
                    d.rule,
                    "conclusion hole",
                    "φ \\/ ψ".into(),
                    hole.to_string(),
                ));
            };
            expect_premise_lhs(d, &d.premises[0], ctx.fill(Bunch::Leaf((**phi).clone())))?;
            expect_premise_lhs(d, &d.premises[1], ctx.fill(Bunch::Leaf((**psi).clone())))
        }
        RuleName::BoxR => {
            expect_premises(d, 1)?;
            let premise = &d.premises[0];
            if !conclusion.lhs.is_box_image() {
                return Err(shape(
                    d.rule,
                    "conclusion lhs",
                    "a bunch with every leaf boxed".into(),
                    conclusion.lhs.to_string(),
                ));
            }
            let Formula::Box(inner) = &conclusion.rhs else {
                return Err(shape(
                    d.rule,
                    "conclusion rhs",
                    "box A".into(),
                    conclusion.rhs.to_string(),
                ));
            };
            if premise.conclusion.rhs != **inner {
                return Err(shape(
                    d.rule,
                    "premise rhs",
                    inner.to_string(),
                    premise.conclusion.rhs.to_string(),
                ));
            }
            expect_premise_lhs(d, premise, conclusion.lhs.clone())
        }
        RuleName::BoxL => {
            expect_premises(d, 1)?;
            expect_same_rhs(d, &d.premises[0])?;
            let ctx = need_ctx(d)?;
            let hole = hole_content(d, &conclusion.lhs, ctx)?;
            let Bunch::Leaf(Formula::Box(inner)) = hole else {
                return Err(shape(
                    d.rule,
                    "conclusion hole",
                    "box A".into(),
                    hole.to_string(),
                ));
            };
            expect_premise_lhs(d, &d.premises[0], ctx.fill(Bunch::Leaf((**inner).clone())))
        }
        RuleName::StructExt(i) => {
            let rule = &cfg.struct_rules.rules[i];
            expect_premises(d, rule.premises.len())?;
            let RuleParams::StructExt { ctx, env } = &d.params else {
                return Err(NodeError::BadParams {
                    rule: d.rule.token(),
                    why: "missing context/instantiation parameters".into(),
                });
            };
            let bad_env = |e: crate::bterm::BtermError| NodeError::BadParams {
                rule: d.rule.token(),
                why: e.to_string(),
            };
            let instantiated = subst(&rule.conclusion, env).map_err(bad_env)?;
            let want = ctx.fill(instantiated);
            if conclusion.lhs != want {
                return Err(shape(
                    d.rule,
                    "conclusion lhs",
                    want.to_string(),
                    conclusion.lhs.to_string(),
                ));
            }
            for (j, (premise, term)) in d.premises.iter().zip(rule.premises.iter()).enumerate() {
                expect_same_rhs(d, premise)?;
                let want = ctx.fill(subst(term, env).map_err(bad_env)?);
                if premise.conclusion.lhs != want {
                    return Err(shape(
                        d.rule,
                        if j == 0 {
                            "first premise lhs"
                        } else {
                            "premise lhs"
                        },
                        want.to_string(),
                        premise.conclusion.lhs.to_string(),
                    ));
                }
            }
            Ok(())
        }
    }
}

/// Checks the whole tree, reporting the first failing node (depth-first,
/// premises before conclusions) with its path from the root.
pub fn check_derivation(d: &Derivation, cfg: &CalculusConfig) -> Result<(), CheckError> {
    fn walk(d: &Derivation, cfg: &CalculusConfig, path: &mut Vec<usize>) -> Result<(), CheckError> {
        for (i, premise) in d.premises.iter().enumerate() {
            path.push(i);
            walk(premise, cfg, path)?;
            path.pop();
        }
        check_node(d, cfg).map_err(|error| CheckError {
            path: path.clone(),
            error,
        })
    }
    walk(d, cfg, &mut Vec::new())
}
