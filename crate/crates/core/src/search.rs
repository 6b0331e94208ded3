//! Bounded backward cut-free proof search, and cut elimination as
//! re-proving a conclusion without cut.
//!
//! The strategy: saturate with invertible rules (the left inversions ∗L,
//! ∧L, ⊤L, empL and the right rules −∗R, →R), then try the closing rules,
//! then right rules, then the branching left rules (−∗L, →L, ∨L, □L),
//! then structural steps (W;, C;, extension rules). Sequents are keyed by
//! their normal forms; revisiting a key along a branch fails that branch,
//! contractions per branch are bounded, and a node-fuel cap bounds the
//! total goals visited. The search is deliberately incomplete — failure
//! means "not found within budget" — but everything it returns is
//! kernel-checkable, and the kernel stays the oracle.

use crate::calculus::{check_derivation, CalculusConfig, Derivation};
use crate::syntax::{
    bunch_equiv, decompositions, leaf_positions, normalize, Bunch, BunchCtx, Conn, Formula, Sequent,
};
use std::collections::BTreeMap;

/// Knobs for [`prove_cf_with`]. `depth` bounds the height of the
/// returned derivation; `contractions` bounds C; applications per
/// branch; `fuel` bounds the total number of goals visited, so a search
/// always finishes in bounded time. Exhausting any budget means "not
/// found", never "not provable".
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub depth: usize,
    pub contractions: usize,
    pub fuel: usize,
}

impl SearchOptions {
    pub fn with_depth(depth: usize) -> SearchOptions {
        SearchOptions {
            depth,
            contractions: 2,
            fuel: 50_000,
        }
    }
}

/// Searches for a cut-free derivation of `goal` with height at most
/// `depth`. Returns `None` when nothing was found within the budget;
/// that is not a refutation.
pub fn prove_cf(goal: &Sequent, cfg: &CalculusConfig, depth: usize) -> Option<Derivation> {
    prove_cf_with(goal, cfg, SearchOptions::with_depth(depth))
}

pub fn prove_cf_with(
    goal: &Sequent,
    cfg: &CalculusConfig,
    opts: SearchOptions,
) -> Option<Derivation> {
    let cfg = cfg.without_cut();
    let mut state = SearchState {
        seen: Vec::new(),
        fuel: opts.fuel,
    };
    let found = prove(goal, &cfg, opts.depth, opts.contractions, &mut state)?;
    debug_assert!(check_derivation(&found, &cfg).is_ok());
    debug_assert!(found.height() <= opts.depth);
    Some(found)
}

struct SearchState {
    /// normalized sequents along the current branch, for loop checking
    seen: Vec<(Bunch, Formula)>,
    /// remaining goal visits before the whole search gives up
    fuel: usize,
}

/// Re-proves the conclusion of a (possibly cut-bearing) derivation in the
/// cut-free fragment. The input must check under its configuration with
/// cut allowed.
pub fn cut_eliminate(
    d: &Derivation,
    cfg: &CalculusConfig,
    depth: usize,
) -> Result<Option<Derivation>, crate::calculus::CheckError> {
    check_derivation(d, &cfg.clone().with_cut())?;
    Ok(prove_cf(&d.conclusion, cfg, depth))
}

fn prove(
    goal: &Sequent,
    cfg: &CalculusConfig,
    budget: usize,
    contractions: usize,
    state: &mut SearchState,
) -> Option<Derivation> {
    state.fuel = state.fuel.checked_sub(1)?;
    // ---- invertible saturation ----
    if let Some(d) = saturate_left(goal, cfg, budget, contractions, state) {
        return Some(d);
    }
    match &goal.rhs {
        Formula::Wand(phi, psi) => {
            if budget == 0 {
                return None;
            }
            let sub = Sequent::new(
                Bunch::comma(goal.lhs.clone(), Bunch::Leaf((**phi).clone())),
                (**psi).clone(),
            );
            let inner = prove(&sub, cfg, budget - 1, contractions, state)?;
            return Some(Derivation::wand_r(goal.lhs.clone(), (**phi).clone(), inner));
        }
        Formula::Impl(phi, psi) => {
            if budget == 0 {
                return None;
            }
            let sub = Sequent::new(
                Bunch::semi(goal.lhs.clone(), Bunch::Leaf((**phi).clone())),
                (**psi).clone(),
            );
            let inner = prove(&sub, cfg, budget - 1, contractions, state)?;
            return Some(Derivation::impl_r(goal.lhs.clone(), (**phi).clone(), inner));
        }
        _ => {}
    }

    let nlhs = normalize(&goal.lhs);

    // ---- closing rules ----
    if let Some(d) = close(goal, &nlhs, budget) {
        return Some(d);
    }

    // ---- loop check ----
    let key = (nlhs.clone(), goal.rhs.clone());
    if state.seen.contains(&key) {
        return None;
    }
    state.seen.push(key);
    let result = branch(goal, &nlhs, cfg, budget, contractions, state);
    state.seen.pop();
    result
}

/// Applies the first applicable invertible left rule and recurses, or
/// reports that none applies.
fn saturate_left(
    goal: &Sequent,
    cfg: &CalculusConfig,
    budget: usize,
    contractions: usize,
    state: &mut SearchState,
) -> Option<Derivation> {
    for d in decompositions(&goal.lhs) {
        let Bunch::Leaf(f) = &d.sub else { continue };
        let replacement = match f {
            Formula::Sep(l, r) => {
                Bunch::comma(Bunch::Leaf((**l).clone()), Bunch::Leaf((**r).clone()))
            }
            Formula::And(l, r) => {
                Bunch::semi(Bunch::Leaf((**l).clone()), Bunch::Leaf((**r).clone()))
            }
            Formula::True => Bunch::EmpA,
            Formula::Emp => Bunch::EmpM,
            _ => continue,
        };
        if budget == 0 {
            return None;
        }
        let sub = Sequent::new(d.ctx.fill(replacement), goal.rhs.clone());
        let inner = prove(&sub, cfg, budget - 1, contractions, state)?;
        return Some(match f {
            Formula::Sep(l, r) => Derivation::sep_l(d.ctx, (**l).clone(), (**r).clone(), inner),
            Formula::And(l, r) => Derivation::and_l(d.ctx, (**l).clone(), (**r).clone(), inner),
            Formula::True => Derivation::true_l(d.ctx, inner),
            Formula::Emp => Derivation::emp_l(d.ctx, inner),
            _ => unreachable!(),
        });
    }
    None
}

fn close(goal: &Sequent, nlhs: &Bunch, budget: usize) -> Option<Derivation> {
    // ⊥ anywhere on the left closes immediately
    if let Some(ctx) = leaf_positions(&goal.lhs, &Formula::False)
        .into_iter()
        .next()
    {
        return Some(Derivation::false_l(ctx, goal.rhs.clone()));
    }
    let wrap = |core: Derivation| -> Option<Derivation> {
        let needs_equiv = core.conclusion.lhs != goal.lhs;
        if core.height() + usize::from(needs_equiv) > budget {
            return None;
        }
        Some(Derivation::equiv_if_needed(goal.lhs.clone(), core))
    };
    match &goal.rhs {
        Formula::Atom(a) => {
            if *nlhs == Bunch::Leaf(goal.rhs.clone()) {
                return wrap(Derivation::ax(a.clone()));
            }
        }
        Formula::Emp => {
            if *nlhs == Bunch::EmpM {
                return wrap(Derivation::emp_r());
            }
        }
        Formula::True => {
            if *nlhs == Bunch::EmpA {
                return wrap(Derivation::true_r());
            }
            // anything proves ⊤ by weakening the additive unit in
            let core = Derivation::weaken_semi(
                BunchCtx::identity(),
                Bunch::EmpA,
                goal.lhs.clone(),
                Derivation::true_r(),
            );
            let d = Derivation::equiv(goal.lhs.clone(), core);
            if d.height() <= budget {
                return Some(d);
            }
        }
        _ => {}
    }
    None
}

fn branch(
    goal: &Sequent,
    nlhs: &Bunch,
    cfg: &CalculusConfig,
    budget: usize,
    contractions: usize,
    state: &mut SearchState,
) -> Option<Derivation> {
    if budget == 0 {
        return None;
    }
    let rhs = &goal.rhs;
    let equiv_cost = usize::from(*nlhs != goal.lhs);
    // exact height cost of wrapping a rule node whose conclusion bunch is
    // `core_lhs`: one for the rule, one more if an equiv node must bring
    // it back to the goal's literal bunch
    let cost_for = |core_lhs: &Bunch| 1 + usize::from(core_lhs != &goal.lhs);

    // ---- right rules ----
    match rhs {
        Formula::Sep(phi, psi) => {
            let items = region_items(nlhs, Conn::Comma);
            for (left_items, right_items) in bipartitions(&items) {
                let d1_bunch = rebuild(Conn::Comma, &left_items);
                let d2_bunch = rebuild(Conn::Comma, &right_items);
                let core_lhs = Bunch::comma(d1_bunch.clone(), d2_bunch.clone());
                let Some(inner_budget) = budget.checked_sub(cost_for(&core_lhs)) else {
                    continue;
                };
                let Some(p1) = prove(
                    &Sequent::new(d1_bunch, (**phi).clone()),
                    cfg,
                    inner_budget,
                    contractions,
                    state,
                ) else {
                    continue;
                };
                let Some(p2) = prove(
                    &Sequent::new(d2_bunch, (**psi).clone()),
                    cfg,
                    inner_budget,
                    contractions,
                    state,
                ) else {
                    continue;
                };
                let core = Derivation::sep_r(p1, p2);
                return Some(Derivation::equiv_if_needed(goal.lhs.clone(), core));
            }
        }
        Formula::And(phi, psi) => {
            // duplicate the whole bunch, then split additively
            if budget >= 2 {
                let p1 = prove(
                    &Sequent::new(goal.lhs.clone(), (**phi).clone()),
                    cfg,
                    budget - 2,
                    contractions,
                    state,
                );
                if let Some(p1) = p1 {
                    if let Some(p2) = prove(
                        &Sequent::new(goal.lhs.clone(), (**psi).clone()),
                        cfg,
                        budget - 2,
                        contractions,
                        state,
                    ) {
                        let core = Derivation::and_r(p1, p2);
                        return Some(Derivation::contract_semi(
                            BunchCtx::identity(),
                            goal.lhs.clone(),
                            core,
                        ));
                    }
                }
            }
        }
        Formula::Or(phi, psi) => {
            if let Some(p) = prove(
                &Sequent::new(goal.lhs.clone(), (**phi).clone()),
                cfg,
                budget - 1,
                contractions,
                state,
            ) {
                return Some(Derivation::disj_r1((**psi).clone(), p));
            }
            if let Some(p) = prove(
                &Sequent::new(goal.lhs.clone(), (**psi).clone()),
                cfg,
                budget - 1,
                contractions,
                state,
            ) {
                return Some(Derivation::disj_r2((**phi).clone(), p));
            }
        }
        Formula::Box(inner) if cfg.s4_enabled && nlhs.is_box_image() => {
            let inner_budget = budget.checked_sub(1 + equiv_cost);
            if let Some(b) = inner_budget {
                if let Some(p) = prove(
                    &Sequent::new(nlhs.clone(), (**inner).clone()),
                    cfg,
                    b,
                    contractions,
                    state,
                ) {
                    let core = Derivation::box_r(p);
                    return Some(Derivation::equiv_if_needed(goal.lhs.clone(), core));
                }
            }
        }
        _ => {}
    }

    // ---- branching left rules ----
    for d in decompositions(&goal.lhs) {
        let Bunch::Leaf(Formula::Or(phi, psi)) = &d.sub else {
            continue;
        };
        let left = prove(
            &Sequent::new(d.ctx.fill(Bunch::Leaf((**phi).clone())), rhs.clone()),
            cfg,
            budget - 1,
            contractions,
            state,
        );
        if let Some(left) = left {
            if let Some(right) = prove(
                &Sequent::new(d.ctx.fill(Bunch::Leaf((**psi).clone())), rhs.clone()),
                cfg,
                budget - 1,
                contractions,
                state,
            ) {
                return Some(Derivation::disj_l(
                    d.ctx,
                    (**phi).clone(),
                    (**psi).clone(),
                    left,
                    right,
                ));
            }
        }
    }

    if let Some(d) = left_implications(goal, nlhs, cfg, budget, contractions, state, Conn::Comma) {
        return Some(d);
    }
    if let Some(d) = left_implications(goal, nlhs, cfg, budget, contractions, state, Conn::Semi) {
        return Some(d);
    }

    if cfg.s4_enabled {
        for d in decompositions(&goal.lhs) {
            let Bunch::Leaf(Formula::Box(inner)) = &d.sub else {
                continue;
            };
            if let Some(p) = prove(
                &Sequent::new(d.ctx.fill(Bunch::Leaf((**inner).clone())), rhs.clone()),
                cfg,
                budget - 1,
                contractions,
                state,
            ) {
                return Some(Derivation::box_l(d.ctx, (**inner).clone(), p));
            }
        }
    }

    // ---- structural rules ----
    // W;: drop either half of any additive pairing in the normal form
    for d in decompositions(nlhs) {
        let Bunch::Semi(l, r) = &d.sub else { continue };
        for (kept, dropped) in [(l, r), (r, l)] {
            let core_lhs = d
                .ctx
                .fill(Bunch::semi((**kept).clone(), (**dropped).clone()));
            let Some(b) = budget.checked_sub(cost_for(&core_lhs)) else {
                continue;
            };
            let sub = Sequent::new(d.ctx.fill((**kept).clone()), rhs.clone());
            if let Some(p) = prove(&sub, cfg, b, contractions, state) {
                let core = Derivation::weaken_semi(
                    d.ctx.clone(),
                    (**kept).clone(),
                    (**dropped).clone(),
                    p,
                );
                return Some(Derivation::equiv_if_needed(goal.lhs.clone(), core));
            }
        }
    }

    // extension rules: match the linear conclusion term anywhere
    for (index, rule) in cfg.struct_rules.rules.iter().enumerate() {
        let all_vars = rule.vars();
        for d in decompositions(nlhs) {
            for mut env in match_term(&rule.conclusion, &d.sub) {
                // premise-only variables get the multiplicative unit
                for v in &all_vars {
                    env.entry(*v).or_insert(Bunch::EmpM);
                }
                let Some(core_inst) = crate::bterm::subst(&rule.conclusion, &env).ok() else {
                    continue;
                };
                let core_lhs = d.ctx.fill(core_inst);
                let Some(b) = budget.checked_sub(cost_for(&core_lhs)) else {
                    continue;
                };
                let premises: Option<Vec<Derivation>> = rule
                    .premises
                    .iter()
                    .map(|t| {
                        let inst = crate::bterm::subst(t, &env).ok()?;
                        prove(
                            &Sequent::new(d.ctx.fill(inst), rhs.clone()),
                            cfg,
                            b,
                            contractions,
                            state,
                        )
                    })
                    .collect();
                if let Some(premises) = premises {
                    let core = Derivation::struct_ext(
                        index,
                        d.ctx.clone(),
                        env,
                        &rule.conclusion,
                        premises,
                        rhs.clone(),
                    );
                    return Some(Derivation::equiv_if_needed(goal.lhs.clone(), core));
                }
            }
        }
    }

    // C;: duplicate a sub-bunch, bounded per branch (conclusion is the
    // normal form itself, so the precomputed equiv cost is exact)
    if contractions > 0 {
        if let Some(b) = budget.checked_sub(1 + equiv_cost) {
            for d in decompositions(nlhs) {
                if matches!(d.sub, Bunch::EmpM | Bunch::EmpA) {
                    continue;
                }
                let sub = Sequent::new(
                    d.ctx.fill(Bunch::semi(d.sub.clone(), d.sub.clone())),
                    rhs.clone(),
                );
                if let Some(p) = prove(&sub, cfg, b, contractions - 1, state) {
                    let core = Derivation::contract_semi(d.ctx.clone(), d.sub.clone(), p);
                    return Some(Derivation::equiv_if_needed(goal.lhs.clone(), core));
                }
            }
        }
    }

    None
}

/// Backward −∗L / →L: pick an implication leaf, bipartition the rest of
/// its enclosing region into the argument part Δ1 and the frame part Δ2.
fn left_implications(
    goal: &Sequent,
    nlhs: &Bunch,
    cfg: &CalculusConfig,
    budget: usize,
    contractions: usize,
    state: &mut SearchState,
    conn: Conn,
) -> Option<Derivation> {
    let mut candidates: Vec<(BunchCtx, Vec<Bunch>, Formula, Formula)> = Vec::new();
    for d in decompositions(nlhs) {
        let (phi, psi) = match (&d.sub, conn) {
            (Bunch::Leaf(Formula::Wand(phi, psi)), Conn::Comma) => {
                ((**phi).clone(), (**psi).clone())
            }
            (Bunch::Leaf(Formula::Impl(phi, psi)), Conn::Semi) => {
                ((**phi).clone(), (**psi).clone())
            }
            _ => continue,
        };
        // strip trailing same-connective frames: their subtree is the
        // region this leaf is an item of
        let frames = d.ctx.frames();
        let mut cut = frames.len();
        while cut > 0 && frames[cut - 1].dir().0 == conn {
            cut -= 1;
        }
        let region_ctx = BunchCtx::from_frames(frames[..cut].to_vec());
        let region = region_ctx.path();
        let region_tree = crate::syntax::subtree_at(nlhs, &region).ok()?;
        let mut items = region_items(region_tree, conn);
        // remove this occurrence of the implication leaf
        let pos = items.iter().position(|b| b == &d.sub)?;
        items.remove(pos);
        if !candidates
            .iter()
            .any(|(c, i, p, q)| *c == region_ctx && *i == items && *p == phi && *q == psi)
        {
            candidates.push((region_ctx, items, phi, psi));
        }
    }
    for (region_ctx, items, phi, psi) in candidates {
        let principal = if conn == Conn::Comma {
            Formula::wand(phi.clone(), psi.clone())
        } else {
            Formula::impl_(phi.clone(), psi.clone())
        };
        for (arg_items, frame_items) in bipartitions(&items) {
            let d1 = rebuild(conn, &arg_items);
            let d2 = rebuild(conn, &frame_items);
            let core_lhs = region_ctx.fill(conn.join(
                d1.clone(),
                conn.join(d2.clone(), Bunch::Leaf(principal.clone())),
            ));
            let cost = 1 + usize::from(core_lhs != goal.lhs);
            let Some(b) = budget.checked_sub(cost) else {
                continue;
            };
            let Some(arg) = prove(
                &Sequent::new(d1.clone(), phi.clone()),
                cfg,
                b,
                contractions,
                state,
            ) else {
                continue;
            };
            let usage_lhs = region_ctx.fill(conn.join(d2.clone(), Bunch::Leaf(psi.clone())));
            let Some(usage) = prove(
                &Sequent::new(usage_lhs, goal.rhs.clone()),
                cfg,
                b,
                contractions,
                state,
            ) else {
                continue;
            };
            let core = if conn == Conn::Comma {
                Derivation::wand_l(region_ctx.clone(), d2, psi.clone(), arg, usage)
            } else {
                Derivation::impl_l(region_ctx.clone(), d2, psi.clone(), arg, usage)
            };
            debug_assert!(bunch_equiv(&core.conclusion.lhs, &goal.lhs));
            return Some(Derivation::equiv_if_needed(goal.lhs.clone(), core));
        }
    }
    None
}

/// The items of the maximal `conn` region at the root of `b`.
fn region_items(b: &Bunch, conn: Conn) -> Vec<Bunch> {
    fn walk(b: &Bunch, conn: Conn, out: &mut Vec<Bunch>) {
        match (b.node(), conn) {
            (Some((Conn::Comma, l, r)), Conn::Comma) | (Some((Conn::Semi, l, r)), Conn::Semi) => {
                walk(l, conn, out);
                walk(r, conn, out);
            }
            _ => match (b, conn) {
                (Bunch::EmpM, Conn::Comma) | (Bunch::EmpA, Conn::Semi) => {}
                _ => out.push(b.clone()),
            },
        }
    }
    let mut out = Vec::new();
    walk(b, conn, &mut out);
    out
}

fn rebuild(conn: Conn, items: &[Bunch]) -> Bunch {
    let mut iter = items.iter().rev().cloned();
    match iter.next() {
        None => conn.unit(),
        Some(last) => iter.fold(last, |acc, b| conn.join(b, acc)),
    }
}

/// All splits of `items` into two sub-multisets, in deterministic order.
fn bipartitions(items: &[Bunch]) -> Vec<(Vec<Bunch>, Vec<Bunch>)> {
    let n = items.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, item) in items.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(item.clone());
            } else {
                right.push(item.clone());
            }
        }
        out.push((left, right));
    }
    out
}

/// All ways of matching a linear bunched term against a bunch, up to the
/// commutative-monoid structure of the bunch's regions: a variable
/// matches any sub-multiset of a region, connective nodes split regions.
fn match_term(t: &crate::bterm::BTerm, b: &Bunch) -> Vec<BTreeMap<u32, Bunch>> {
    use crate::bterm::BTerm;
    match t {
        BTerm::Var(i) => vec![BTreeMap::from([(*i, b.clone())])],
        BTerm::Comma(tl, tr) | BTerm::Semi(tl, tr) => {
            let conn = match t {
                BTerm::Comma(..) => Conn::Comma,
                _ => Conn::Semi,
            };
            let items = region_items(b, conn);
            let mut out = Vec::new();
            for (li, ri) in bipartitions(&items) {
                let lb = rebuild(conn, &li);
                let rb = rebuild(conn, &ri);
                for le in match_term(tl, &lb) {
                    for re in match_term(tr, &rb) {
                        // linear conclusion terms: variable sets are
                        // disjoint, so a plain merge is sound
                        let mut env = le.clone();
                        let mut ok = true;
                        for (k, v) in &re {
                            if let Some(prev) = env.get(k) {
                                if prev != v {
                                    ok = false;
                                    break;
                                }
                            }
                            env.insert(*k, v.clone());
                        }
                        if ok && !out.contains(&env) {
                            out.push(env);
                        }
                    }
                }
            }
            out
        }
    }
}
