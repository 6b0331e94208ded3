//! Constructive implementations of the admissible and invertible rules:
//! identity expansion, inversion of the right implication rules, the four
//! left inversions, the collapse inversion, and box idempotence.
//!
//! Each transformation consumes a checked cut-free derivation and builds
//! a new one; callers can (and the tests do) re-check every output with
//! the kernel. The left inversions recurse on derivation height rather
//! than tree structure: contraction duplicates the principal formula, so
//! the induction hypothesis must apply to transformed derivations, which
//! are not subderivations of the input.
//!
//! On height: outputs never get taller. The matching-rule case removes a
//! node, so most inversions shrink, but a weakening (or an extension rule
//! with a premise-less variable) can hold the principal formula in a part
//! of the bunch that no premise traces, and rebuilding such a node keeps
//! the input's height.

use crate::bterm::{bterm_ctx_act_decomp, subst, var_occurrence_paths};
use crate::calculus::{check_derivation, CalculusConfig, Derivation, RuleName, RuleParams};
use crate::syntax::{
    box_bunch, ctx_at_path, locate_in_filled, subtree_at, transport_leaf_ctx, Bunch, BunchCtx, Dir,
    Formula, Located, SyntaxError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvertError {
    #[error("input derivation uses cut")]
    CutInInput,
    #[error("input derivation fails the kernel: {0}")]
    BadInput(String),
    #[error("position does not hold the expected principal: {0}")]
    PrincipalMismatch(String),
    #[error("box requires the S4 calculus")]
    NeedsS4,
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("internal invariant broke: {0}")]
    Internal(String),
}

/// Which left rule is being inverted. `BoxIdemp` inverts one doubly-boxed
/// leaf (`□□φ` to `□φ`); [`box_idemp_inv`] folds it over a whole bunch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafInversion {
    SepL,
    AndL,
    TrueL,
    EmpL,
    BoxIdemp,
}

impl LeafInversion {
    /// The bunch the principal leaf turns into, if the formula matches.
    fn replacement(self, principal: &Formula) -> Option<Bunch> {
        match (self, principal) {
            (LeafInversion::SepL, Formula::Sep(l, r)) => Some(Bunch::comma(
                Bunch::Leaf((**l).clone()),
                Bunch::Leaf((**r).clone()),
            )),
            (LeafInversion::AndL, Formula::And(l, r)) => Some(Bunch::semi(
                Bunch::Leaf((**l).clone()),
                Bunch::Leaf((**r).clone()),
            )),
            (LeafInversion::TrueL, Formula::True) => Some(Bunch::EmpA),
            (LeafInversion::EmpL, Formula::Emp) => Some(Bunch::EmpM),
            (LeafInversion::BoxIdemp, Formula::Box(inner))
                if matches!(**inner, Formula::Box(_)) =>
            {
                Some(Bunch::Leaf((**inner).clone()))
            }
            _ => None,
        }
    }

    /// The left rule whose premise is already the inverted sequent.
    fn matching_rule(self) -> RuleName {
        match self {
            LeafInversion::SepL => RuleName::SepL,
            LeafInversion::AndL => RuleName::AndL,
            LeafInversion::TrueL => RuleName::TrueL,
            LeafInversion::EmpL => RuleName::EmpL,
            LeafInversion::BoxIdemp => RuleName::BoxL,
        }
    }
}

fn internal(msg: impl Into<String>) -> InvertError {
    InvertError::Internal(msg.into())
}

fn validated(d: &Derivation, cfg: &CalculusConfig) -> Result<(), InvertError> {
    if d.uses_cut() {
        return Err(InvertError::CutInInput);
    }
    check_derivation(d, &cfg.without_cut()).map_err(|e| InvertError::BadInput(e.to_string()))
}

/// `Δ(φ ∗ ψ) ⊢ χ  ⟹  Δ(φ , ψ) ⊢ χ`.
pub fn invert_sep_l(
    d: &Derivation,
    ctx: &BunchCtx,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    invert_leaf(d, ctx, LeafInversion::SepL, cfg)
}

/// `Δ(φ ∧ ψ) ⊢ χ  ⟹  Δ(φ ; ψ) ⊢ χ`.
pub fn invert_and_l(
    d: &Derivation,
    ctx: &BunchCtx,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    invert_leaf(d, ctx, LeafInversion::AndL, cfg)
}

/// `Δ(⊤) ⊢ χ  ⟹  Δ(∅a) ⊢ χ`.
pub fn invert_true_l(
    d: &Derivation,
    ctx: &BunchCtx,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    invert_leaf(d, ctx, LeafInversion::TrueL, cfg)
}

/// `Δ(emp) ⊢ χ  ⟹  Δ(∅m) ⊢ χ`.
pub fn invert_emp_l(
    d: &Derivation,
    ctx: &BunchCtx,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    invert_leaf(d, ctx, LeafInversion::EmpL, cfg)
}

/// Dispatch by inversion name; the entry point used by the CLI.
pub fn invert_left(
    d: &Derivation,
    ctx: &BunchCtx,
    which: LeafInversion,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    if which == LeafInversion::BoxIdemp && !cfg.s4_enabled {
        return Err(InvertError::NeedsS4);
    }
    invert_leaf(d, ctx, which, cfg)
}

/// The heart of the module: replaces the principal leaf at `ctx` by its
/// inverted form, rewriting the derivation by recursion on height.
fn invert_leaf(
    d: &Derivation,
    ctx: &BunchCtx,
    kind: LeafInversion,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    let lhs = &d.conclusion.lhs;
    let rhs = &d.conclusion.rhs;
    let hole = subtree_at(lhs, &ctx.path()).map_err(|e| {
        InvertError::PrincipalMismatch(format!("context does not fit the conclusion: {e}"))
    })?;
    if ctx_at_path(lhs, &ctx.path())? != *ctx {
        return Err(InvertError::PrincipalMismatch(
            "context siblings do not match the conclusion".into(),
        ));
    }
    let Bunch::Leaf(principal) = hole else {
        return Err(InvertError::PrincipalMismatch(format!(
            "position holds the bunch `{hole}`, not a formula leaf"
        )));
    };
    let Some(replacement) = kind.replacement(principal) else {
        return Err(InvertError::PrincipalMismatch(format!(
            "position holds `{principal}`, which {kind:?} does not invert"
        )));
    };
    let goal_lhs = ctx.fill(replacement.clone());

    // The rule that introduced the principal right here: its premise is
    // the inverted sequent.
    if d.rule == kind.matching_rule() {
        if let Some(rule_ctx) = d.params.ctx() {
            if rule_ctx == ctx {
                return Ok(d.premises[0].clone());
            }
        }
    }

    // Re-addresses a disjoint position inside an edited tree.
    let moved = |tree: &Bunch, at: &BunchCtx| -> Result<BunchCtx, InvertError> {
        ctx_at_path(tree, &at.path()).map_err(|e| internal(format!("path lost in rewrite: {e}")))
    };

    match d.rule {
        RuleName::Ax | RuleName::EmpR | RuleName::TrueR => Err(internal(
            "axiom-shaped conclusion cannot hold the principal leaf",
        )),
        RuleName::Cut => Err(InvertError::CutInInput),
        RuleName::FalseL => {
            let old = d
                .params
                .ctx()
                .ok_or_else(|| internal("falseL without ctx"))?;
            Ok(Derivation::false_l(moved(&goal_lhs, old)?, rhs.clone()))
        }
        RuleName::Equiv => {
            let premise = &d.premises[0];
            let moved_ctx = transport_leaf_ctx(ctx, principal, &premise.conclusion.lhs)
                .ok_or_else(|| internal("equivalence lost the principal occurrence"))?;
            let inner = invert_leaf(premise, &moved_ctx, kind, cfg)?;
            Ok(Derivation::equiv_if_needed(goal_lhs, inner))
        }
        RuleName::WeakenSemi => {
            let wctx = d.params.ctx().ok_or_else(|| internal("w; without ctx"))?;
            let hole = subtree_at(lhs, &wctx.path()).map_err(|e| internal(e.to_string()))?;
            let Bunch::Semi(kept, added) = hole else {
                return Err(internal("w; hole is not a semi"));
            };
            let (kept, added) = ((**kept).clone(), (**added).clone());
            match locate_in_filled(wctx, hole, principal, ctx)? {
                Located::InsideOuter(two) => {
                    let premise =
                        invert_leaf(&d.premises[0], &two.outer_ctx_at_target(&kept), kind, cfg)?;
                    let new_ctx = two.whole_ctx_at_filled(&replacement);
                    Ok(Derivation::weaken_semi(new_ctx, kept, added, premise))
                }
                Located::InsideFilled(ctx0) => {
                    let Some(first) = ctx0.frames().first() else {
                        return Err(internal("principal leaf cannot be a whole semi"));
                    };
                    let rest = BunchCtx::from_frames(ctx0.frames()[1..].to_vec());
                    match first.dir() {
                        (crate::syntax::Conn::Semi, crate::syntax::Side::Left) => {
                            let premise =
                                invert_leaf(&d.premises[0], &wctx.then(&rest), kind, cfg)?;
                            let kept2 = rest.fill(replacement);
                            Ok(Derivation::weaken_semi(wctx.clone(), kept2, added, premise))
                        }
                        (crate::syntax::Conn::Semi, crate::syntax::Side::Right) => {
                            // The principal sits in the weakened-in part;
                            // no premise traces it.
                            let added2 = rest.fill(replacement);
                            Ok(Derivation::weaken_semi(
                                wctx.clone(),
                                kept,
                                added2,
                                d.premises[0].clone(),
                            ))
                        }
                        _ => Err(internal("w; decomposition does not start with a semi")),
                    }
                }
            }
        }
        RuleName::ContractSemi => {
            let cctx = d.params.ctx().ok_or_else(|| internal("c; without ctx"))?;
            let dup = subtree_at(lhs, &cctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            match locate_in_filled(cctx, &dup, principal, ctx)? {
                Located::InsideOuter(two) => {
                    let doubled = Bunch::semi(dup.clone(), dup.clone());
                    let premise = invert_leaf(
                        &d.premises[0],
                        &two.outer_ctx_at_target(&doubled),
                        kind,
                        cfg,
                    )?;
                    let new_ctx = two.whole_ctx_at_filled(&replacement);
                    Ok(Derivation::contract_semi(new_ctx, dup, premise))
                }
                Located::InsideFilled(ctx0) => {
                    // Both copies in the premise hold the principal; the
                    // induction hypothesis applies twice, which is why
                    // the recursion runs on height.
                    let dup2 = ctx0.fill(replacement.clone());
                    let left_ctx = cctx
                        .pushed(crate::syntax::Frame::new(
                            crate::syntax::Conn::Semi,
                            crate::syntax::Side::Left,
                            dup.clone(),
                        ))
                        .then(&ctx0);
                    let once = invert_leaf(&d.premises[0], &left_ctx, kind, cfg)?;
                    let right_ctx = cctx
                        .pushed(crate::syntax::Frame::new(
                            crate::syntax::Conn::Semi,
                            crate::syntax::Side::Right,
                            dup2.clone(),
                        ))
                        .then(&ctx0);
                    let twice = invert_leaf(&once, &right_ctx, kind, cfg)?;
                    Ok(Derivation::contract_semi(cctx.clone(), dup2, twice))
                }
            }
        }
        RuleName::EmpL | RuleName::TrueL | RuleName::SepL | RuleName::AndL | RuleName::BoxL => {
            // A left rule at a different position: the principal leaf is
            // untouched, so commute and recurse into the premise.
            let rctx = d
                .params
                .ctx()
                .ok_or_else(|| internal("left rule without ctx"))?;
            let rhole = subtree_at(lhs, &rctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let premise = &d.premises[0];
            let inner_ctx = moved(&premise.conclusion.lhs, ctx)?;
            let inner = invert_leaf(premise, &inner_ctx, kind, cfg)?;
            let new_rctx = moved(&goal_lhs, rctx)?;
            Ok(match (d.rule, &rhole) {
                (RuleName::EmpL, _) => Derivation::emp_l(new_rctx, inner),
                (RuleName::TrueL, _) => Derivation::true_l(new_rctx, inner),
                (RuleName::SepL, Bunch::Leaf(Formula::Sep(a, b))) => {
                    Derivation::sep_l(new_rctx, (**a).clone(), (**b).clone(), inner)
                }
                (RuleName::AndL, Bunch::Leaf(Formula::And(a, b))) => {
                    Derivation::and_l(new_rctx, (**a).clone(), (**b).clone(), inner)
                }
                (RuleName::BoxL, Bunch::Leaf(Formula::Box(a))) => {
                    Derivation::box_l(new_rctx, (**a).clone(), inner)
                }
                _ => return Err(internal("left-rule hole lost its principal")),
            })
        }
        RuleName::DisjL => {
            let rctx = d
                .params
                .ctx()
                .ok_or_else(|| internal("disjL without ctx"))?;
            let rhole = subtree_at(lhs, &rctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let Bunch::Leaf(Formula::Or(phi, psi)) = rhole else {
                return Err(internal("disjL hole is not a disjunction"));
            };
            let left = {
                let p = &d.premises[0];
                invert_leaf(p, &moved(&p.conclusion.lhs, ctx)?, kind, cfg)?
            };
            let right = {
                let p = &d.premises[1];
                invert_leaf(p, &moved(&p.conclusion.lhs, ctx)?, kind, cfg)?
            };
            let new_rctx = moved(&goal_lhs, rctx)?;
            Ok(Derivation::disj_l(
                new_rctx,
                (*phi).clone(),
                (*psi).clone(),
                left,
                right,
            ))
        }
        RuleName::WandL | RuleName::ImplL => {
            let rctx = d
                .params
                .ctx()
                .ok_or_else(|| internal("wandL/implL without ctx"))?;
            let comma = d.rule == RuleName::WandL;
            let conn = if comma {
                crate::syntax::Conn::Comma
            } else {
                crate::syntax::Conn::Semi
            };
            let rhole = subtree_at(lhs, &rctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let (d2, psi) = {
                let (c1, _, rest) = rhole.node().ok_or_else(|| internal("bad hole"))?;
                let (c2, d2, leaf) = rest.node().ok_or_else(|| internal("bad hole"))?;
                if c1 != conn || c2 != conn {
                    return Err(internal("wandL/implL hole has the wrong connectives"));
                }
                let f = match leaf {
                    Bunch::Leaf(Formula::Wand(_, psi)) if comma => (**psi).clone(),
                    Bunch::Leaf(Formula::Impl(_, psi)) if !comma => (**psi).clone(),
                    _ => return Err(internal("wandL/implL hole lost its principal")),
                };
                (d2.clone(), f)
            };
            let arg = &d.premises[0];
            let usage = &d.premises[1];
            let rpath = rctx.path();
            let cpath = ctx.path();
            if cpath.len() > rpath.len() && cpath[..rpath.len()] == rpath[..] {
                // inside the hole content Δ1 ⊙ (Δ2 ⊙ principal)
                let sub = &cpath[rpath.len()..];
                match sub[0].1 {
                    crate::syntax::Side::Left => {
                        // inside Δ1, traced by the argument premise
                        let inner_ctx = ctx_at_path(&arg.conclusion.lhs, &sub[1..])
                            .map_err(|e| internal(e.to_string()))?;
                        let arg2 = invert_leaf(arg, &inner_ctx, kind, cfg)?;
                        Ok(apply_wand_impl(
                            comma,
                            rctx.clone(),
                            d2,
                            psi,
                            arg2,
                            usage.clone(),
                        ))
                    }
                    crate::syntax::Side::Right => {
                        if sub.len() < 2 || sub[1].1 == crate::syntax::Side::Right {
                            return Err(internal("principal coincides with the implication leaf"));
                        }
                        // inside Δ2, traced by the usage premise
                        let usage_path: Vec<Dir> = rpath
                            .iter()
                            .copied()
                            .chain(std::iter::once((conn, crate::syntax::Side::Left)))
                            .chain(sub[2..].iter().copied())
                            .collect();
                        let inner_ctx = ctx_at_path(&usage.conclusion.lhs, &usage_path)
                            .map_err(|e| internal(e.to_string()))?;
                        let usage2 = invert_leaf(usage, &inner_ctx, kind, cfg)?;
                        let d2_edit =
                            ctx_at_path(&d2, &sub[2..]).map_err(|e| internal(e.to_string()))?;
                        let d2b = d2_edit.fill(replacement);
                        Ok(apply_wand_impl(
                            comma,
                            rctx.clone(),
                            d2b,
                            psi,
                            arg.clone(),
                            usage2,
                        ))
                    }
                }
            } else {
                // outside the rule position: only the usage premise sees it
                let inner_ctx = moved(&usage.conclusion.lhs, ctx)?;
                let usage2 = invert_leaf(usage, &inner_ctx, kind, cfg)?;
                let new_rctx = moved(&goal_lhs, rctx)?;
                Ok(apply_wand_impl(
                    comma,
                    new_rctx,
                    d2,
                    psi,
                    arg.clone(),
                    usage2,
                ))
            }
        }
        RuleName::SepR | RuleName::AndR => {
            let first = ctx
                .frames()
                .first()
                .ok_or_else(|| internal("two-premise right rule with identity ctx"))?;
            let rest = BunchCtx::from_frames(ctx.frames()[1..].to_vec());
            let (left, right) = (&d.premises[0], &d.premises[1]);
            match first.dir().1 {
                crate::syntax::Side::Left => {
                    let inner = invert_leaf(left, &rest, kind, cfg)?;
                    Ok(if d.rule == RuleName::SepR {
                        Derivation::sep_r(inner, right.clone())
                    } else {
                        Derivation::and_r(inner, right.clone())
                    })
                }
                crate::syntax::Side::Right => {
                    let inner = invert_leaf(right, &rest, kind, cfg)?;
                    Ok(if d.rule == RuleName::SepR {
                        Derivation::sep_r(left.clone(), inner)
                    } else {
                        Derivation::and_r(left.clone(), inner)
                    })
                }
            }
        }
        RuleName::WandR | RuleName::ImplR => {
            let comma = d.rule == RuleName::WandR;
            let (phi, conn) = match rhs {
                Formula::Wand(phi, _) if comma => ((**phi).clone(), crate::syntax::Conn::Comma),
                Formula::Impl(phi, _) if !comma => ((**phi).clone(), crate::syntax::Conn::Semi),
                _ => return Err(internal("right implication lost its shape")),
            };
            let premise = &d.premises[0];
            let extended = BunchCtx::from_frames(
                std::iter::once(crate::syntax::Frame::new(
                    conn,
                    crate::syntax::Side::Left,
                    Bunch::Leaf(phi.clone()),
                ))
                .chain(ctx.frames().iter().cloned())
                .collect(),
            );
            let inner = invert_leaf(premise, &extended, kind, cfg)?;
            Ok(if comma {
                Derivation::wand_r(goal_lhs, phi, inner)
            } else {
                Derivation::impl_r(goal_lhs, phi, inner)
            })
        }
        RuleName::DisjR1 | RuleName::DisjR2 => {
            let premise = &d.premises[0];
            let inner = invert_leaf(premise, ctx, kind, cfg)?;
            let Formula::Or(phi, psi) = rhs else {
                return Err(internal("disjR lost its shape"));
            };
            Ok(if d.rule == RuleName::DisjR1 {
                Derivation::disj_r1((**psi).clone(), inner)
            } else {
                Derivation::disj_r2((**phi).clone(), inner)
            })
        }
        RuleName::BoxR => {
            // The lhs is fully boxed, so only the box-idempotence
            // inversion can address one of its leaves, and the inverted
            // leaf is still boxed.
            if kind != LeafInversion::BoxIdemp {
                return Err(internal("unboxed principal inside a boxR conclusion"));
            }
            let inner = invert_leaf(&d.premises[0], ctx, kind, cfg)?;
            Ok(Derivation::box_r(inner))
        }
        RuleName::StructExt(i) => {
            let rule = cfg
                .struct_rules
                .rules
                .get(i)
                .ok_or_else(|| internal("extension rule out of range"))?
                .clone();
            let RuleParams::StructExt { ctx: sctx, env } = &d.params else {
                return Err(internal("extension node without instantiation"));
            };
            let filled = subst(&rule.conclusion, env).map_err(|e| internal(e.to_string()))?;
            match locate_in_filled(sctx, &filled, principal, ctx)? {
                Located::InsideOuter(two) => {
                    let mut premises = Vec::with_capacity(d.premises.len());
                    for (premise, term) in d.premises.iter().zip(rule.premises.iter()) {
                        let inst = subst(term, env).map_err(|e| internal(e.to_string()))?;
                        premises.push(invert_leaf(
                            premise,
                            &two.outer_ctx_at_target(&inst),
                            kind,
                            cfg,
                        )?);
                    }
                    let new_sctx = two.whole_ctx_at_filled(&replacement);
                    Ok(Derivation::struct_ext(
                        i,
                        new_sctx,
                        env.clone(),
                        &rule.conclusion,
                        premises,
                        rhs.clone(),
                    ))
                }
                Located::InsideFilled(ctx0) => {
                    let (var, inner) =
                        bterm_ctx_act_decomp(&rule.conclusion, env, &ctx0, principal)
                            .map_err(|e| internal(e.to_string()))?;
                    let mut env2 = env.clone();
                    env2.insert(var, inner.fill(replacement.clone()));
                    let mut premises = Vec::with_capacity(d.premises.len());
                    for (premise, term) in d.premises.iter().zip(rule.premises.iter()) {
                        // Invert at every occurrence of the variable, one
                        // at a time; paths stay valid across edits.
                        let mut current = premise.clone();
                        for occ in var_occurrence_paths(term, var) {
                            let full: Vec<Dir> = sctx
                                .path()
                                .into_iter()
                                .chain(occ)
                                .chain(inner.path())
                                .collect();
                            let at = ctx_at_path(&current.conclusion.lhs, &full)
                                .map_err(|e| internal(e.to_string()))?;
                            current = invert_leaf(&current, &at, kind, cfg)?;
                        }
                        premises.push(current);
                    }
                    Ok(Derivation::struct_ext(
                        i,
                        sctx.clone(),
                        env2,
                        &rule.conclusion,
                        premises,
                        rhs.clone(),
                    ))
                }
            }
        }
    }
}

fn apply_wand_impl(
    comma: bool,
    ctx: BunchCtx,
    d2: Bunch,
    psi: Formula,
    arg: Derivation,
    usage: Derivation,
) -> Derivation {
    if comma {
        Derivation::wand_l(ctx, d2, psi, arg, usage)
    } else {
        Derivation::impl_l(ctx, d2, psi, arg, usage)
    }
}

/// `Δ ⊢ φ −∗ ψ  ⟹  Δ , φ ⊢ ψ`.
pub fn invert_wand_r(d: &Derivation, cfg: &CalculusConfig) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    invert_right(d, cfg, true)
}

/// `Δ ⊢ φ → ψ  ⟹  Δ ; φ ⊢ ψ`.
pub fn invert_impl_r(d: &Derivation, cfg: &CalculusConfig) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    invert_right(d, cfg, false)
}

/// Shared implementation: commutes left and structural rules below the
/// right implication rule, by recursion on the derivation.
fn invert_right(
    d: &Derivation,
    cfg: &CalculusConfig,
    comma: bool,
) -> Result<Derivation, InvertError> {
    let (phi, conn) = match (&d.conclusion.rhs, comma) {
        (Formula::Wand(phi, _), true) => ((**phi).clone(), crate::syntax::Conn::Comma),
        (Formula::Impl(phi, _), false) => ((**phi).clone(), crate::syntax::Conn::Semi),
        (other, true) => {
            return Err(InvertError::PrincipalMismatch(format!(
                "conclusion proves `{other}`, not a magic wand"
            )))
        }
        (other, false) => {
            return Err(InvertError::PrincipalMismatch(format!(
                "conclusion proves `{other}`, not an implication"
            )))
        }
    };
    let lhs = &d.conclusion.lhs;
    let extend = |b: &Bunch| -> Bunch {
        if comma {
            Bunch::comma(b.clone(), Bunch::Leaf(phi.clone()))
        } else {
            Bunch::semi(b.clone(), Bunch::Leaf(phi.clone()))
        }
    };
    let prefix =
        crate::syntax::Frame::new(conn, crate::syntax::Side::Left, Bunch::Leaf(phi.clone()));
    let extend_ctx = |c: &BunchCtx| -> BunchCtx {
        BunchCtx::from_frames(
            std::iter::once(prefix.clone())
                .chain(c.frames().iter().cloned())
                .collect(),
        )
    };
    match d.rule {
        RuleName::WandR if comma => Ok(d.premises[0].clone()),
        RuleName::ImplR if !comma => Ok(d.premises[0].clone()),
        RuleName::Equiv => {
            let inner = invert_right(&d.premises[0], cfg, comma)?;
            Ok(Derivation::equiv(extend(lhs), inner))
        }
        RuleName::FalseL => {
            let old = d
                .params
                .ctx()
                .ok_or_else(|| internal("falseL without ctx"))?;
            let psi = match &d.conclusion.rhs {
                Formula::Wand(_, psi) | Formula::Impl(_, psi) => (**psi).clone(),
                _ => unreachable!("shape checked above"),
            };
            Ok(Derivation::false_l(extend_ctx(old), psi))
        }
        RuleName::WeakenSemi => {
            let wctx = d.params.ctx().ok_or_else(|| internal("w; without ctx"))?;
            let hole = subtree_at(lhs, &wctx.path()).map_err(|e| internal(e.to_string()))?;
            let Bunch::Semi(kept, added) = hole else {
                return Err(internal("w; hole is not a semi"));
            };
            let inner = invert_right(&d.premises[0], cfg, comma)?;
            Ok(Derivation::weaken_semi(
                extend_ctx(wctx),
                (**kept).clone(),
                (**added).clone(),
                inner,
            ))
        }
        RuleName::ContractSemi => {
            let cctx = d.params.ctx().ok_or_else(|| internal("c; without ctx"))?;
            let dup = subtree_at(lhs, &cctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let inner = invert_right(&d.premises[0], cfg, comma)?;
            Ok(Derivation::contract_semi(extend_ctx(cctx), dup, inner))
        }
        RuleName::EmpL | RuleName::TrueL | RuleName::SepL | RuleName::AndL | RuleName::BoxL => {
            let rctx = d
                .params
                .ctx()
                .ok_or_else(|| internal("left rule without ctx"))?;
            let rhole = subtree_at(lhs, &rctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let inner = invert_right(&d.premises[0], cfg, comma)?;
            let new_ctx = extend_ctx(rctx);
            Ok(match (d.rule, &rhole) {
                (RuleName::EmpL, _) => Derivation::emp_l(new_ctx, inner),
                (RuleName::TrueL, _) => Derivation::true_l(new_ctx, inner),
                (RuleName::SepL, Bunch::Leaf(Formula::Sep(a, b))) => {
                    Derivation::sep_l(new_ctx, (**a).clone(), (**b).clone(), inner)
                }
                (RuleName::AndL, Bunch::Leaf(Formula::And(a, b))) => {
                    Derivation::and_l(new_ctx, (**a).clone(), (**b).clone(), inner)
                }
                (RuleName::BoxL, Bunch::Leaf(Formula::Box(a))) => {
                    Derivation::box_l(new_ctx, (**a).clone(), inner)
                }
                _ => return Err(internal("left-rule hole lost its principal")),
            })
        }
        RuleName::DisjL => {
            let rctx = d
                .params
                .ctx()
                .ok_or_else(|| internal("disjL without ctx"))?;
            let rhole = subtree_at(lhs, &rctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let Bunch::Leaf(Formula::Or(a, b)) = rhole else {
                return Err(internal("disjL hole is not a disjunction"));
            };
            let left = invert_right(&d.premises[0], cfg, comma)?;
            let right = invert_right(&d.premises[1], cfg, comma)?;
            Ok(Derivation::disj_l(
                extend_ctx(rctx),
                (*a).clone(),
                (*b).clone(),
                left,
                right,
            ))
        }
        RuleName::WandL | RuleName::ImplL => {
            let rctx = d
                .params
                .ctx()
                .ok_or_else(|| internal("wandL/implL without ctx"))?;
            let is_wand_node = d.rule == RuleName::WandL;
            let rhole = subtree_at(lhs, &rctx.path())
                .map_err(|e| internal(e.to_string()))?
                .clone();
            let (_, _, rest) = rhole.node().ok_or_else(|| internal("bad hole"))?;
            let (_, d2, leaf) = rest.node().ok_or_else(|| internal("bad hole"))?;
            let psi = match leaf {
                Bunch::Leaf(Formula::Wand(_, psi)) if is_wand_node => (**psi).clone(),
                Bunch::Leaf(Formula::Impl(_, psi)) if !is_wand_node => (**psi).clone(),
                _ => return Err(internal("wandL/implL hole lost its principal")),
            };
            let usage = invert_right(&d.premises[1], cfg, comma)?;
            Ok(apply_wand_impl(
                is_wand_node,
                extend_ctx(rctx),
                d2.clone(),
                psi,
                d.premises[0].clone(),
                usage,
            ))
        }
        RuleName::StructExt(i) => {
            let rule = cfg
                .struct_rules
                .rules
                .get(i)
                .ok_or_else(|| internal("extension rule out of range"))?
                .clone();
            let RuleParams::StructExt { ctx: sctx, env } = &d.params else {
                return Err(internal("extension node without instantiation"));
            };
            let premises = d
                .premises
                .iter()
                .map(|p| invert_right(p, cfg, comma))
                .collect::<Result<Vec<_>, _>>()?;
            let psi = match &d.conclusion.rhs {
                Formula::Wand(_, psi) | Formula::Impl(_, psi) => (**psi).clone(),
                _ => unreachable!("shape checked above"),
            };
            Ok(Derivation::struct_ext(
                i,
                extend_ctx(sctx),
                env.clone(),
                &rule.conclusion,
                premises,
                psi,
            ))
        }
        RuleName::Cut => Err(InvertError::CutInInput),
        other => Err(internal(format!(
            "rule {other} cannot conclude the inverted implication"
        ))),
    }
}

/// A checked cut-free derivation of `φ ⊢ φ`, by recursion on `φ`.
pub fn identity_expansion(phi: &Formula, cfg: &CalculusConfig) -> Result<Derivation, InvertError> {
    let id = BunchCtx::identity;
    Ok(match phi {
        Formula::Atom(a) => Derivation::ax(a.clone()),
        Formula::True => Derivation::true_l(id(), Derivation::true_r()),
        Formula::Emp => Derivation::emp_l(id(), Derivation::emp_r()),
        Formula::False => Derivation::false_l(id(), Formula::False),
        Formula::And(l, r) => {
            let both = Derivation::and_r(identity_expansion(l, cfg)?, identity_expansion(r, cfg)?);
            Derivation::and_l(id(), (**l).clone(), (**r).clone(), both)
        }
        Formula::Sep(l, r) => {
            let both = Derivation::sep_r(identity_expansion(l, cfg)?, identity_expansion(r, cfg)?);
            Derivation::sep_l(id(), (**l).clone(), (**r).clone(), both)
        }
        Formula::Or(l, r) => {
            let left = Derivation::disj_r1((**r).clone(), identity_expansion(l, cfg)?);
            let right = Derivation::disj_r2((**l).clone(), identity_expansion(r, cfg)?);
            Derivation::disj_l(id(), (**l).clone(), (**r).clone(), left, right)
        }
        Formula::Impl(l, r) => {
            // φ→ψ ; φ  ⊢ ψ  via implL at Δ1 = φ, Δ2 = ∅a
            let arg = identity_expansion(l, cfg)?;
            let usage = Derivation::equiv(
                Bunch::semi(Bunch::EmpA, Bunch::Leaf((**r).clone())),
                identity_expansion(r, cfg)?,
            );
            let node = Derivation::impl_l(id(), Bunch::EmpA, (**r).clone(), arg, usage);
            let reshaped = Derivation::equiv(
                Bunch::semi(Bunch::Leaf(phi.clone()), Bunch::Leaf((**l).clone())),
                node,
            );
            Derivation::impl_r(Bunch::Leaf(phi.clone()), (**l).clone(), reshaped)
        }
        Formula::Wand(l, r) => {
            let arg = identity_expansion(l, cfg)?;
            let usage = Derivation::equiv(
                Bunch::comma(Bunch::EmpM, Bunch::Leaf((**r).clone())),
                identity_expansion(r, cfg)?,
            );
            let node = Derivation::wand_l(id(), Bunch::EmpM, (**r).clone(), arg, usage);
            let reshaped = Derivation::equiv(
                Bunch::comma(Bunch::Leaf(phi.clone()), Bunch::Leaf((**l).clone())),
                node,
            );
            Derivation::wand_r(Bunch::Leaf(phi.clone()), (**l).clone(), reshaped)
        }
        Formula::Box(inner) => {
            if !cfg.s4_enabled {
                return Err(InvertError::NeedsS4);
            }
            let opened =
                Derivation::box_l(id(), (**inner).clone(), identity_expansion(inner, cfg)?);
            Derivation::box_r(opened)
        }
    })
}

/// `Δ′(⌊Δ⌋) ⊢ χ  ⟹  Δ′(Δ) ⊢ χ`: unfolds the collapsed formula back into
/// bunch structure by iterating the four leaf inversions along `Δ`.
pub fn collapse_inv(
    d: &Derivation,
    ctx: &BunchCtx,
    delta: &Bunch,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    validated(d, cfg)?;
    collapse_inv_rec(d, ctx, delta, cfg)
}

fn collapse_inv_rec(
    d: &Derivation,
    ctx: &BunchCtx,
    delta: &Bunch,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    match delta {
        Bunch::Leaf(_) => Ok(d.clone()),
        Bunch::EmpA => invert_leaf(d, ctx, LeafInversion::TrueL, cfg),
        Bunch::EmpM => invert_leaf(d, ctx, LeafInversion::EmpL, cfg),
        Bunch::Comma(l, r) | Bunch::Semi(l, r) => {
            let conn = match delta {
                Bunch::Comma(..) => crate::syntax::Conn::Comma,
                _ => crate::syntax::Conn::Semi,
            };
            let kind = match conn {
                crate::syntax::Conn::Comma => LeafInversion::SepL,
                crate::syntax::Conn::Semi => LeafInversion::AndL,
            };
            let split = invert_leaf(d, ctx, kind, cfg)?;
            let rf = crate::syntax::bunch_to_formula(r);
            // after splitting: ctx[ ⌊l⌋ ⊙ ⌊r⌋ ]; unfold left, then right
            let left_ctx = ctx.pushed(crate::syntax::Frame::new(
                conn,
                crate::syntax::Side::Left,
                Bunch::Leaf(rf),
            ));
            let left_done = collapse_inv_rec(&split, &left_ctx, l, cfg)?;
            let right_path: Vec<Dir> = ctx
                .path()
                .into_iter()
                .chain(std::iter::once((conn, crate::syntax::Side::Right)))
                .collect();
            let right_ctx = ctx_at_path(&left_done.conclusion.lhs, &right_path)
                .map_err(|e| internal(e.to_string()))?;
            collapse_inv_rec(&left_done, &right_ctx, r, cfg)
        }
    }
}

/// `Γ(□□Δ) ⊢ φ  ⟹  Γ(□Δ) ⊢ φ`, stripping one box from every leaf of the
/// designated region, one leaf at a time.
pub fn box_idemp_inv(
    d: &Derivation,
    ctx: &BunchCtx,
    delta: &Bunch,
    cfg: &CalculusConfig,
) -> Result<Derivation, InvertError> {
    if !cfg.s4_enabled {
        return Err(InvertError::NeedsS4);
    }
    validated(d, cfg)?;
    let doubly = box_bunch(&box_bunch(delta));
    if ctx.fill(doubly) != d.conclusion.lhs {
        return Err(InvertError::PrincipalMismatch(
            "position does not hold the doubly boxed bunch".into(),
        ));
    }
    let mut current = d.clone();
    for leaf_path in leaf_paths(delta) {
        let full: Vec<Dir> = ctx.path().into_iter().chain(leaf_path).collect();
        let at =
            ctx_at_path(&current.conclusion.lhs, &full).map_err(|e| internal(e.to_string()))?;
        current = invert_leaf(&current, &at, LeafInversion::BoxIdemp, cfg)?;
    }
    Ok(current)
}

fn leaf_paths(b: &Bunch) -> Vec<Vec<Dir>> {
    fn walk(b: &Bunch, prefix: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
        match b {
            Bunch::Leaf(_) => out.push(prefix.clone()),
            Bunch::EmpM | Bunch::EmpA => {}
            Bunch::Comma(l, r) | Bunch::Semi(l, r) => {
                let conn = match b {
                    Bunch::Comma(..) => crate::syntax::Conn::Comma,
                    _ => crate::syntax::Conn::Semi,
                };
                prefix.push((conn, crate::syntax::Side::Left));
                walk(l, prefix, out);
                prefix.pop();
                prefix.push((conn, crate::syntax::Side::Right));
                walk(r, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(b, &mut Vec::new(), &mut out);
    out
}
