//! Shared helpers for the integration and acceptance suites: exhaustive
//! enumerators for small syntax and small PCMs, seeded random generators,
//! and a forward generator of checked cut-free derivations.

#![allow(dead_code)]

use bunched::algebra::{FinitePcm, Mask, PowersetAlgebra, Valuation};
use bunched::bterm::RuleSet;
use bunched::calculus::{check_derivation, CalculusConfig, Derivation};
use bunched::syntax::{decompositions, normalize, Atom, Bunch, BunchCtx, Formula, Sequent};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------- enumeration ----------

/// All bunches over the given atomic leaves with at most `max_size` tree
/// nodes (formula leaves, units, and connective nodes all count as one).
pub fn enumerate_bunches(atoms: &[&str], max_size: usize) -> Vec<Bunch> {
    let mut by_size: Vec<Vec<Bunch>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = atoms
            .iter()
            .map(|a| Bunch::atom(a))
            .chain([Bunch::EmpM, Bunch::EmpA])
            .collect();
    }
    for size in 2..=max_size {
        let mut here = Vec::new();
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    here.push(Bunch::comma(l.clone(), r.clone()));
                    here.push(Bunch::semi(l.clone(), r.clone()));
                }
            }
        }
        by_size[size] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// All formulas up to the given depth (0 = leaves only).
pub fn enumerate_formulas(atoms: &[&str], depth: usize, with_box: bool) -> Vec<Formula> {
    let mut cur: Vec<Formula> = atoms
        .iter()
        .map(|a| Formula::atom(a))
        .chain([Formula::True, Formula::False, Formula::Emp])
        .collect();
    let mut all = cur.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        if with_box {
            for f in &cur {
                next.push(Formula::boxed(f.clone()));
            }
        }
        for l in &all {
            for r in &all {
                next.push(Formula::and(l.clone(), r.clone()));
                next.push(Formula::or(l.clone(), r.clone()));
                next.push(Formula::impl_(l.clone(), r.clone()));
                next.push(Formula::sep(l.clone(), r.clone()));
                next.push(Formula::wand(l.clone(), r.clone()));
            }
        }
        all.extend(next.iter().cloned());
        all.sort();
        all.dedup();
        cur = next;
    }
    all
}

/// Every lawful PCM with at most `max_size` elements, enumerated by
/// filling the table of non-unit pairs and filtering by associativity.
pub fn all_pcms(max_size: usize) -> Vec<FinitePcm> {
    let names = ["e", "m", "n", "p"];
    let mut out = Vec::new();
    for size in 1..=max_size.min(names.len()) {
        let elems: Vec<String> = names[..size].iter().map(|s| s.to_string()).collect();
        let non_unit: Vec<usize> = (1..size).collect();
        // unordered pairs of non-unit elements
        let mut pairs = Vec::new();
        for (i, &x) in non_unit.iter().enumerate() {
            for &y in &non_unit[i..] {
                pairs.push((x, y));
            }
        }
        // each pair maps to: undefined, or any element
        let options = size + 1;
        let total = (options as u64).pow(pairs.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut products = Vec::new();
            for &(x, y) in &pairs {
                let choice = (c % options as u64) as usize;
                c /= options as u64;
                if choice > 0 {
                    products.push((
                        elems[x].clone(),
                        elems[y].clone(),
                        elems[choice - 1].clone(),
                    ));
                }
            }
            if let Ok(pcm) = FinitePcm::new(elems.clone(), "e", &products) {
                out.push(pcm);
            }
        }
    }
    out
}

pub fn random_valuation(
    rng: &mut ChaCha8Rng,
    alg: &PowersetAlgebra,
    atoms: &[Atom],
) -> Valuation<Mask> {
    atoms
        .iter()
        .map(|a| (a.clone(), rng.gen_range(0..=alg.full())))
        .collect()
}

// ---------- random syntax ----------

pub fn random_formula(rng: &mut ChaCha8Rng, depth: usize, with_box: bool) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..6) {
            0 => Formula::atom("a"),
            1 => Formula::atom("b"),
            2 => Formula::atom("c"),
            3 => Formula::True,
            4 => Formula::Emp,
            _ => Formula::False,
        };
    }
    let l = random_formula(rng, depth - 1, with_box);
    let r = random_formula(rng, depth - 1, with_box);
    match rng.gen_range(0..if with_box { 6 } else { 5 }) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        2 => Formula::impl_(l, r),
        3 => Formula::sep(l, r),
        4 => Formula::wand(l, r),
        _ => Formula::boxed(l),
    }
}

pub fn random_bunch(rng: &mut ChaCha8Rng, depth: usize, with_box: bool) -> Bunch {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..5) {
            0 => Bunch::EmpM,
            1 => Bunch::EmpA,
            _ => Bunch::Leaf(random_formula(rng, 2, with_box)),
        };
    }
    let l = random_bunch(rng, depth - 1, with_box);
    let r = random_bunch(rng, depth - 1, with_box);
    if rng.gen_bool(0.5) {
        Bunch::comma(l, r)
    } else {
        Bunch::semi(l, r)
    }
}

/// A random bunch structurally different from but equivalent to `b`.
pub fn random_equivalent(rng: &mut ChaCha8Rng, b: &Bunch) -> Bunch {
    fn shuffle(rng: &mut ChaCha8Rng, b: &Bunch) -> Bunch {
        match b.node() {
            None => b.clone(),
            Some((conn, l, r)) => {
                let (l, r) = (shuffle(rng, l), shuffle(rng, r));
                let (l, r) = if rng.gen_bool(0.5) { (r, l) } else { (l, r) };
                let node = conn.join(l, r);
                if rng.gen_bool(0.3) {
                    // slip a unit in
                    if rng.gen_bool(0.5) {
                        conn.join(conn.unit(), node)
                    } else {
                        conn.join(node, conn.unit())
                    }
                } else {
                    node
                }
            }
        }
    }
    let candidate = shuffle(rng, &normalize(b));
    if rng.gen_bool(0.3) {
        Bunch::semi(candidate, Bunch::EmpA)
    } else {
        candidate
    }
}

// ---------- forward derivation generator ----------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenCalc {
    Bi,
    Affine,
    Bis4,
}

pub fn gen_config(kind: GenCalc) -> CalculusConfig {
    match kind {
        GenCalc::Bi => CalculusConfig::bi(),
        GenCalc::Affine => {
            let (rules, _) = RuleSet::parse("x1 => x1 , x2").unwrap();
            CalculusConfig::bi().with_rules(rules)
        }
        GenCalc::Bis4 => CalculusConfig::bis4(),
    }
}

/// Grows a random checked cut-free derivation of height at most
/// `max_height` by stacking rule applications on random leaf proofs.
pub fn random_derivation(rng: &mut ChaCha8Rng, kind: GenCalc, max_height: usize) -> Derivation {
    let cfg = gen_config(kind);
    let d = grow(rng, kind, max_height, 0);
    debug_assert!(d.height() <= max_height);
    check_derivation(&d, &cfg).expect("generator must produce checked derivations");
    d
}

fn leaf_derivation(rng: &mut ChaCha8Rng, kind: GenCalc) -> Derivation {
    let with_box = kind == GenCalc::Bis4;
    match rng.gen_range(0..5) {
        0 => Derivation::ax(Atom::new(["a", "b", "c"][rng.gen_range(0..3)]).unwrap()),
        1 => Derivation::emp_r(),
        2 => Derivation::true_r(),
        _ => {
            // ⊥ somewhere inside a random bunch
            let host = random_bunch(rng, 2, with_box);
            let decs = decompositions(&host);
            let at = rng.gen_range(0..decs.len());
            Derivation::false_l(decs[at].ctx.clone(), random_formula(rng, 2, with_box))
        }
    }
}

fn grow(rng: &mut ChaCha8Rng, kind: GenCalc, max_height: usize, depth: usize) -> Derivation {
    let mut d = leaf_derivation(rng, kind);
    let steps = rng.gen_range(0..=max_height);
    for _ in 0..steps {
        if d.height() >= max_height {
            break;
        }
        d = match step(rng, kind, d.clone(), max_height, depth) {
            Some(next) => next,
            None => d,
        };
    }
    d
}

fn step(
    rng: &mut ChaCha8Rng,
    kind: GenCalc,
    d: Derivation,
    max_height: usize,
    depth: usize,
) -> Option<Derivation> {
    let with_box = kind == GenCalc::Bis4;
    let lhs = d.conclusion.lhs.clone();
    let rhs = d.conclusion.rhs.clone();
    let decs = decompositions(&lhs);
    let headroom = max_height - d.height();
    match rng.gen_range(0..13) {
        // equiv over a reshuffled bunch
        0 => Some(Derivation::equiv(random_equivalent(rng, &lhs), d)),
        // weaken a random position with random junk
        1 => {
            let at = &decs[rng.gen_range(0..decs.len())];
            Some(Derivation::weaken_semi(
                at.ctx.clone(),
                at.sub.clone(),
                random_bunch(rng, 2, with_box),
                d,
            ))
        }
        // weaken-then-contract: a net no-op that embeds a C; node
        2 => {
            if headroom < 2 {
                return None;
            }
            let at = &decs[rng.gen_range(0..decs.len())];
            let widened =
                Derivation::weaken_semi(at.ctx.clone(), at.sub.clone(), at.sub.clone(), d);
            Some(Derivation::contract_semi(
                at.ctx.clone(),
                at.sub.clone(),
                widened,
            ))
        }
        // left rules at an exactly matching position
        3 => {
            let mut candidates = Vec::new();
            for dec in &decs {
                match &dec.sub {
                    Bunch::Comma(l, r) => {
                        if let (Bunch::Leaf(x), Bunch::Leaf(y)) = (&**l, &**r) {
                            candidates.push(Derivation::sep_l(
                                dec.ctx.clone(),
                                x.clone(),
                                y.clone(),
                                d.clone(),
                            ));
                        }
                    }
                    Bunch::Semi(l, r) => {
                        if let (Bunch::Leaf(x), Bunch::Leaf(y)) = (&**l, &**r) {
                            candidates.push(Derivation::and_l(
                                dec.ctx.clone(),
                                x.clone(),
                                y.clone(),
                                d.clone(),
                            ));
                        }
                    }
                    Bunch::EmpA => candidates.push(Derivation::true_l(dec.ctx.clone(), d.clone())),
                    Bunch::EmpM => candidates.push(Derivation::emp_l(dec.ctx.clone(), d.clone())),
                    Bunch::Leaf(_) => {}
                }
            }
            if candidates.is_empty() {
                None
            } else {
                let at = rng.gen_range(0..candidates.len());
                Some(candidates.swap_remove(at))
            }
        }
        // disjunction introductions
        4 => Some(if rng.gen_bool(0.5) {
            Derivation::disj_r1(random_formula(rng, 2, with_box), d)
        } else {
            Derivation::disj_r2(random_formula(rng, 2, with_box), d)
        }),
        // right implication rules when the root splits
        5 => match &lhs {
            Bunch::Comma(delta, phi) => match &**phi {
                Bunch::Leaf(f) => Some(Derivation::wand_r((**delta).clone(), f.clone(), d)),
                _ => None,
            },
            Bunch::Semi(delta, phi) => match &**phi {
                Bunch::Leaf(f) => Some(Derivation::impl_r((**delta).clone(), f.clone(), d)),
                _ => None,
            },
            _ => None,
        },
        // pair rules with a freshly grown sibling
        6 => {
            if depth >= 2 || headroom < 2 {
                return None;
            }
            let sibling = grow(rng, kind, headroom.saturating_sub(1).min(2), depth + 1);
            Some(match (rng.gen_bool(0.5), rng.gen_bool(0.5)) {
                (true, true) => Derivation::sep_r(d, sibling),
                (true, false) => Derivation::sep_r(sibling, d),
                (false, true) => Derivation::and_r(d, sibling),
                (false, false) => Derivation::and_r(sibling, d),
            })
        }
        // wandL / implL with a grown argument premise
        7 => {
            if depth >= 2 || headroom < 2 {
                return None;
            }
            let mut candidates = Vec::new();
            for dec in &decs {
                if let Bunch::Comma(x, y) = &dec.sub {
                    if let Bunch::Leaf(psi) = &**y {
                        candidates.push((dec.ctx.clone(), (**x).clone(), psi.clone(), true));
                    }
                }
                if let Bunch::Semi(x, y) = &dec.sub {
                    if let Bunch::Leaf(psi) = &**y {
                        candidates.push((dec.ctx.clone(), (**x).clone(), psi.clone(), false));
                    }
                }
            }
            if candidates.is_empty() {
                return None;
            }
            let (ctx, d2, psi, is_wand) =
                candidates.swap_remove(rng.gen_range(0..candidates.len()));
            let arg = grow(rng, kind, headroom.saturating_sub(1).min(2), depth + 1);
            Some(if is_wand {
                Derivation::wand_l(ctx, d2, psi, arg, d)
            } else {
                Derivation::impl_l(ctx, d2, psi, arg, d)
            })
        }
        // box a leaf (S4 only); sometimes twice, to seed □□ positions
        8 if with_box => {
            let leaves: Vec<_> = decs
                .iter()
                .filter(|dec| matches!(dec.sub, Bunch::Leaf(_)))
                .collect();
            if leaves.is_empty() {
                return None;
            }
            let dec = leaves[rng.gen_range(0..leaves.len())];
            let Bunch::Leaf(f) = &dec.sub else {
                unreachable!()
            };
            let once = Derivation::box_l(dec.ctx.clone(), f.clone(), d);
            if rng.gen_bool(0.6) && once.height() < max_height {
                Some(Derivation::box_l(
                    dec.ctx.clone(),
                    Formula::boxed(f.clone()),
                    once,
                ))
            } else {
                Some(once)
            }
        }
        // boxR when everything is boxed (S4 only)
        9 if with_box => {
            if lhs.is_box_image() {
                Some(Derivation::box_r(d))
            } else {
                None
            }
        }
        // wrap with disjL: the current derivation proves one disjunct's
        // branch, a falseL leaf proves the other
        10 if kind != GenCalc::Affine || rng.gen_bool(0.5) => {
            let formula_leaves: Vec<_> = decs
                .iter()
                .filter(|dec| matches!(dec.sub, Bunch::Leaf(_)))
                .collect();
            if formula_leaves.is_empty() || headroom < 1 {
                return None;
            }
            let dec = formula_leaves[rng.gen_range(0..formula_leaves.len())];
            let Bunch::Leaf(g) = &dec.sub else {
                unreachable!()
            };
            let bottom = Derivation::false_l(dec.ctx.clone(), rhs.clone());
            Some(if rng.gen_bool(0.5) {
                Derivation::disj_l(dec.ctx.clone(), Formula::False, g.clone(), bottom, d)
            } else {
                Derivation::disj_l(dec.ctx.clone(), g.clone(), Formula::False, d, bottom)
            })
        }
        // the affine extension rule at a random position
        11 if kind == GenCalc::Affine => {
            let at = &decs[rng.gen_range(0..decs.len())];
            let env: std::collections::BTreeMap<u32, Bunch> =
                [(1, at.sub.clone()), (2, random_bunch(rng, 2, with_box))]
                    .into_iter()
                    .collect();
            let cfg = gen_config(kind);
            Some(Derivation::struct_ext(
                0,
                at.ctx.clone(),
                env,
                &cfg.struct_rules.rules[0].conclusion,
                vec![d],
                rhs,
            ))
        }
        _ => None,
    }
}

// ---------- misc ----------

pub fn sequent(text: &str) -> Sequent {
    bunched::syntax::parse_sequent(text).unwrap()
}

pub fn identity_ctx() -> BunchCtx {
    BunchCtx::identity()
}

pub fn workspace_root() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}
