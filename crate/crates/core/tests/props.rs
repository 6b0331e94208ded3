//! Property tests for the syntax layer and the algebra bridges.

mod support;

use bunched::algebra::{interp_formula, FinitePcm, PowersetAlgebra, Valuation};
use bunched::bterm::{interp_bterm, subst, validates_rule, BTerm, StructRule};
use bunched::calculus::{derivation_from_json, derivation_to_json};
use bunched::syntax::{
    box_bunch, bunch_equiv, bunch_to_formula, normalize, parse_bunch, parse_formula, parse_sequent,
    unbox_bunch, Atom, Bunch, BunchCtx, Formula, Frame, Sequent,
};
use proptest::prelude::*;
use rand::Rng as _;
use support::{enumerate_bunches, gen_config, random_derivation, rng, GenCalc};

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("a")),
        Just(Formula::atom("b")),
        Just(Formula::atom("c")),
        Just(Formula::True),
        Just(Formula::False),
        Just(Formula::Emp),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::impl_(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::sep(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::wand(l, r)),
            inner.prop_map(Formula::boxed),
        ]
    })
}

fn bunch_strategy() -> impl Strategy<Value = Bunch> {
    let leaf = prop_oneof![
        formula_strategy().prop_map(Bunch::Leaf),
        Just(Bunch::EmpM),
        Just(Bunch::EmpA),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Bunch::comma(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Bunch::semi(l, r)),
        ]
    })
}

fn ctx_strategy() -> impl Strategy<Value = BunchCtx> {
    proptest::collection::vec(
        (bunch_strategy(), 0..4u8).prop_map(|(sib, kind)| match kind {
            0 => Frame::CommaL(sib),
            1 => Frame::CommaR(sib),
            2 => Frame::SemiL(sib),
            _ => Frame::SemiR(sib),
        }),
        0..4,
    )
    .prop_map(BunchCtx::from_frames)
}

proptest! {
    #[test]
    fn normalize_is_idempotent(b in bunch_strategy()) {
        let once = normalize(&b);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric(b1 in bunch_strategy(), b2 in bunch_strategy()) {
        prop_assert!(bunch_equiv(&b1, &b1));
        prop_assert_eq!(bunch_equiv(&b1, &b2), bunch_equiv(&b2, &b1));
    }

    #[test]
    fn equivalence_is_transitive_on_reshuffles(b in bunch_strategy(), seed in any::<u64>()) {
        // the interesting transitivity cases come from genuine variants
        let mut r = rng(seed);
        let v1 = support::random_equivalent(&mut r, &b);
        let v2 = support::random_equivalent(&mut r, &v1);
        prop_assert!(bunch_equiv(&b, &v1));
        prop_assert!(bunch_equiv(&v1, &v2));
        prop_assert!(bunch_equiv(&b, &v2));
    }

    #[test]
    fn equivalence_is_a_congruence(b in bunch_strategy(), ctx in ctx_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let variant = support::random_equivalent(&mut r, &b);
        prop_assert!(bunch_equiv(&b, &variant));
        prop_assert!(bunch_equiv(&ctx.fill(b), &ctx.fill(variant)));
    }

    #[test]
    fn fill_distributes_over_composition(
        outer in ctx_strategy(),
        inner in ctx_strategy(),
        b in bunch_strategy(),
    ) {
        prop_assert_eq!(
            outer.then(&inner).fill(b.clone()),
            outer.fill(inner.fill(b))
        );
    }

    #[test]
    fn printing_round_trips_formulas(f in formula_strategy()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn printing_round_trips_bunches(b in bunch_strategy()) {
        prop_assert_eq!(parse_bunch(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn printing_round_trips_sequents(b in bunch_strategy(), f in formula_strategy()) {
        let s = Sequent::new(b, f);
        prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn box_bunch_commutes_with_normalize(b in bunch_strategy()) {
        prop_assert_eq!(normalize(&box_bunch(&b)), box_bunch(&normalize(&b)));
    }

    #[test]
    fn box_bunch_is_injective_up_to_equiv(b1 in bunch_strategy(), b2 in bunch_strategy()) {
        prop_assert_eq!(
            bunch_equiv(&box_bunch(&b1), &box_bunch(&b2)),
            bunch_equiv(&b1, &b2)
        );
        let stripped = unbox_bunch(&box_bunch(&b1));
        prop_assert_eq!(stripped, Some(b1));
    }
}

#[test]
fn derivation_documents_round_trip() {
    let mut r = rng(0xd0c5);
    for kind in [GenCalc::Bi, GenCalc::Affine, GenCalc::Bis4] {
        for _ in 0..40 {
            let d = random_derivation(&mut r, kind, 5);
            let json = derivation_to_json(&d);
            let back = derivation_from_json(&json).unwrap();
            assert_eq!(back, d, "round trip changed a derivation:\n{json}");
            assert_eq!(back.height(), d.height());
        }
    }
}

#[test]
fn generated_derivations_stay_sound_in_a_model() {
    // soundness harness over freshly generated derivations rather than
    // the fixed corpus: plain BI over the two-element PCM
    let mut r = rng(0x5077);
    let pcm = FinitePcm::new(vec!["e".into(), "m".into()], "e", &[]).unwrap();
    let alg = PowersetAlgebra::new(pcm);
    let cfg = gen_config(GenCalc::Bi);
    for _ in 0..120 {
        let d = random_derivation(&mut r, GenCalc::Bi, 5);
        let atoms: Vec<Atom> = d
            .conclusion
            .lhs
            .atoms()
            .into_iter()
            .chain(d.conclusion.rhs.atoms())
            .collect();
        for _ in 0..10 {
            let val = support::random_valuation(&mut r, &alg, &atoms);
            assert!(
                bunched::algebra::soundness_check(&d, &cfg, &alg, &val).unwrap(),
                "soundness failed for {} under a random valuation",
                d.conclusion
            );
        }
    }
}

#[test]
fn interpretation_respects_bunch_equivalence() {
    let pcm = FinitePcm::new(vec!["e".into(), "m".into()], "e", &[]).unwrap();
    let alg = PowersetAlgebra::new(pcm);
    let mut r = rng(0x1e4);
    for b in enumerate_bunches(&["a", "b"], 5) {
        let atoms = b.atoms();
        let val: Valuation<_> = atoms
            .iter()
            .map(|a| (a.clone(), r.gen_range(0..=alg.full())))
            .collect();
        let direct = interp_formula(&bunch_to_formula(&b), &alg, &val).unwrap();
        let normalized = interp_formula(&bunch_to_formula(&normalize(&b)), &alg, &val).unwrap();
        assert_eq!(
            direct, normalized,
            "interpretation differs across ≡ for {b}"
        );
    }
}

#[test]
fn subst_and_interp_commute() {
    // ⟦⌊T[env]⌋⟧ = ⟦T⟧(⟦⌊env⌋⟧) on a finite algebra, exhaustively for
    // small terms over a pool of small bunches
    let pcm = FinitePcm::new(vec!["e".into(), "m".into()], "e", &[]).unwrap();
    let alg = PowersetAlgebra::new(pcm);
    let pool = enumerate_bunches(&["a", "b"], 3);
    let mut r = rng(0x5b57);
    let terms = [
        BTerm::var(1),
        BTerm::comma(BTerm::var(1), BTerm::var(2)),
        BTerm::semi(BTerm::var(1), BTerm::var(2)),
        BTerm::semi(BTerm::comma(BTerm::var(1), BTerm::var(2)), BTerm::var(1)),
        BTerm::comma(BTerm::var(1), BTerm::semi(BTerm::var(2), BTerm::var(3))),
    ];
    for t in &terms {
        for _ in 0..40 {
            let env: std::collections::BTreeMap<u32, Bunch> = t
                .vars()
                .into_iter()
                .map(|v| (v, pool[r.gen_range(0..pool.len())].clone()))
                .collect();
            let whole = subst(t, &env).unwrap();
            let mut atoms: Vec<Atom> = whole.atoms();
            atoms.sort();
            let val: Valuation<_> = atoms
                .iter()
                .map(|a| (a.clone(), r.gen_range(0..=alg.full())))
                .collect();
            let via_subst = interp_formula(&bunch_to_formula(&whole), &alg, &val).unwrap();
            let elem_env: std::collections::BTreeMap<u32, _> = env
                .iter()
                .map(|(v, b)| {
                    (
                        *v,
                        interp_formula(&bunch_to_formula(b), &alg, &val).unwrap(),
                    )
                })
                .collect();
            let via_interp = interp_bterm(t, &alg, &elem_env).unwrap();
            assert_eq!(via_subst, via_interp, "homomorphism broke for {t}");
        }
    }
}

#[test]
fn validates_rule_agrees_with_brute_force() {
    // an independent evaluator for the validation inequality
    fn brute<A: bunched::algebra::BiAlgebra>(alg: &A, rule: &StructRule) -> bool {
        fn eval<A: bunched::algebra::BiAlgebra>(
            t: &BTerm,
            alg: &A,
            env: &std::collections::BTreeMap<u32, A::Elem>,
        ) -> A::Elem {
            match t {
                BTerm::Var(i) => env[i].clone(),
                BTerm::Comma(l, r) => alg.sep(&eval(l, alg, env), &eval(r, alg, env)),
                BTerm::Semi(l, r) => alg.meet(&eval(l, alg, env), &eval(r, alg, env)),
            }
        }
        let vars = rule.vars();
        let elems = alg.elements();
        let mut stack = vec![std::collections::BTreeMap::new()];
        for v in &vars {
            let mut next = Vec::new();
            for env in &stack {
                for e in &elems {
                    let mut env = env.clone();
                    env.insert(*v, e.clone());
                    next.push(env);
                }
            }
            stack = next;
        }
        stack.iter().all(|env| {
            let lhs = eval(&rule.conclusion, alg, env);
            let rhs = rule
                .premises
                .iter()
                .map(|p| eval(p, alg, env))
                .fold(alg.bot(), |acc, v| alg.join(&acc, &v));
            alg.leq(&lhs, &rhs)
        })
    }

    let rules: Vec<StructRule> = [
        ("x1 => x1 , x2", true),
        ("x1 ; x1 => x1", true),
        ("x1 => x1 ; x2", true),
        ("=> x1", false),
        ("x1 & x2 => x1 , x2", true),
    ]
    .iter()
    .map(|(text, _)| bunched::bterm::RuleSet::parse(text).unwrap().0.rules[0].clone())
    .collect();

    for pcm in support::all_pcms(2) {
        let alg = PowersetAlgebra::new(pcm);
        for rule in &rules {
            assert_eq!(
                validates_rule(&alg, rule),
                brute(&alg, rule),
                "disagreement on rule {rule}"
            );
        }
    }
}

#[test]
fn every_small_pcm_powerset_is_a_lawful_algebra() {
    // exhaustive over all lawful PCMs with at most four elements
    let pcms = support::all_pcms(4);
    assert!(
        pcms.len() > 100,
        "enumeration looks too small: {}",
        pcms.len()
    );
    for pcm in &pcms {
        let alg = PowersetAlgebra::new(pcm.clone());
        let report = bunched::algebra::check_bi_axioms(&alg);
        assert!(
            report.passed(),
            "a {}-element PCM broke the laws: {report}",
            pcm.size()
        );
    }
}

#[test]
fn decompositions_complete_up_to_size_seven() {
    // the enumerator agrees with a brute-force path walk on every bunch
    // over two atoms with at most seven nodes
    for b in enumerate_bunches(&["a", "b"], 7) {
        let mut oracle: Vec<(Vec<bunched::syntax::Dir>, Bunch)> = Vec::new();
        let mut stack = vec![(Vec::new(), b.clone())];
        while let Some((path, node)) = stack.pop() {
            oracle.push((path.clone(), node.clone()));
            if let Some((conn, l, r)) = node.node() {
                let mut lp = path.clone();
                lp.push((conn, bunched::syntax::Side::Left));
                stack.push((lp, l.clone()));
                let mut rp = path;
                rp.push((conn, bunched::syntax::Side::Right));
                stack.push((rp, r.clone()));
            }
        }
        oracle.sort();
        let mut got: Vec<(Vec<bunched::syntax::Dir>, Bunch)> = bunched::syntax::decompositions(&b)
            .into_iter()
            .map(|d| {
                assert_eq!(d.ctx.fill(d.sub.clone()), b);
                (d.ctx.path(), d.sub)
            })
            .collect();
        got.sort();
        assert_eq!(got, oracle);
    }
}

#[test]
fn right_inversions_hold_on_random_derivations() {
    use bunched::admissible::{invert_impl_r, invert_wand_r};
    let mut r = rng(0x14b5);
    let kinds = [GenCalc::Bi, GenCalc::Affine, GenCalc::Bis4];
    let mut wand_samples = 0usize;
    let mut impl_samples = 0usize;
    let mut round = 0usize;
    while wand_samples < 500 || impl_samples < 500 {
        let kind = kinds[round % kinds.len()];
        round += 1;
        let cfg = gen_config(kind);
        let d = random_derivation(&mut r, kind, 6);
        match &d.conclusion.rhs {
            Formula::Wand(phi, psi) if wand_samples < 500 => {
                let out = invert_wand_r(&d, &cfg).unwrap();
                assert!(!out.uses_cut());
                bunched::calculus::check_derivation(&out, &cfg).unwrap();
                assert_eq!(
                    out.conclusion.lhs,
                    Bunch::comma(d.conclusion.lhs.clone(), Bunch::Leaf((**phi).clone()))
                );
                assert_eq!(out.conclusion.rhs, (**psi).clone());
                wand_samples += 1;
            }
            Formula::Impl(phi, psi) if impl_samples < 500 => {
                let out = invert_impl_r(&d, &cfg).unwrap();
                assert!(!out.uses_cut());
                bunched::calculus::check_derivation(&out, &cfg).unwrap();
                assert_eq!(
                    out.conclusion.lhs,
                    Bunch::semi(d.conclusion.lhs.clone(), Bunch::Leaf((**phi).clone()))
                );
                assert_eq!(out.conclusion.rhs, (**psi).clone());
                impl_samples += 1;
            }
            _ => {}
        }
    }
}

#[test]
fn collapse_inversion_rebuilds_random_bunches() {
    use bunched::admissible::{collapse_inv, identity_expansion};
    use bunched::syntax::{bunch_to_formula, BunchCtx};
    let mut r = rng(0xc011);
    let cfg = gen_config(GenCalc::Bis4);
    for _ in 0..200 {
        let delta = support::random_bunch(&mut r, 3, true);
        let collapsed = bunch_to_formula(&delta);
        let d = identity_expansion(&collapsed, &cfg).unwrap();
        let out = collapse_inv(&d, &BunchCtx::identity(), &delta, &cfg).unwrap();
        assert_eq!(out.conclusion.lhs, delta);
        assert_eq!(out.conclusion.rhs, collapsed);
        assert!(!out.uses_cut());
        bunched::calculus::check_derivation(&out, &cfg).unwrap();
    }
}
