//! Regenerates the checked-in corpora:
//!
//! - `corpus/kernel`: one accepted instance and one rejected near-miss
//!   for each cut-free rule form (the Fig-style rules plus boxR, boxL and
//!   an extension rule), consumed by `bunched corpus-run`;
//! - `corpus/cutelim`: cut-bearing derivations across plain, affine and
//!   S4 configurations for the cut-elimination harness.
//!
//! Usage: `cargo run --example make_corpus -- <workspace-root>/corpus`

use bunched::bterm::RuleSet;
use bunched::calculus::{
    check_derivation, CalculusConfig, Derivation, DerivationDoc, RuleName, RuleParams,
};
use bunched::search::prove_cf;
use bunched::syntax::{parse_path, parse_sequent, Atom, Bunch, BunchCtx, Formula, Frame};

struct Case {
    name: String,
    expect: &'static str,
    s4: bool,
    allow_cut: bool,
    rules: Option<String>,
    derivation: Derivation,
}

const AFFINE_RULES: &str = "x1 => x1 , x2";

fn affine_cfg() -> CalculusConfig {
    let (rules, _) = RuleSet::parse(AFFINE_RULES).unwrap();
    CalculusConfig::bi().with_rules(rules)
}

fn atom(name: &str) -> Atom {
    Atom::new(name).unwrap()
}

fn leaf(name: &str) -> Bunch {
    Bunch::atom(name)
}

fn f(name: &str) -> Formula {
    Formula::atom(name)
}

fn id() -> BunchCtx {
    BunchCtx::identity()
}

fn case(
    idx: usize,
    form: &str,
    expect: &'static str,
    s4: bool,
    rules: Option<&str>,
    derivation: Derivation,
) -> Case {
    Case {
        name: format!("{idx:02}-{form}-{expect}"),
        expect,
        s4,
        allow_cut: false,
        rules: rules.map(String::from),
        derivation,
    }
}

fn kernel_cases() -> Vec<Case> {
    let mut out = Vec::new();
    let affine = Some(AFFINE_RULES);

    // ax
    out.push(case(
        1,
        "ax",
        "accept",
        false,
        None,
        Derivation::ax(atom("a")),
    ));
    let compound = Formula::and(f("a"), f("b"));
    out.push(case(
        1,
        "ax",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::Ax,
            bunched::syntax::Sequent::new(Bunch::Leaf(compound.clone()), compound),
            RuleParams::None,
            vec![],
        ),
    ));

    // equiv
    out.push(case(
        2,
        "equiv",
        "accept",
        false,
        None,
        Derivation::equiv(
            Bunch::semi(leaf("a"), Bunch::EmpA),
            Derivation::ax(atom("a")),
        ),
    ));
    out.push(case(
        2,
        "equiv",
        "reject",
        false,
        None,
        Derivation::equiv(
            Bunch::comma(leaf("a"), leaf("b")),
            Derivation::weaken_semi(id(), leaf("a"), leaf("b"), Derivation::ax(atom("a"))),
        ),
    ));

    // w;
    out.push(case(
        3,
        "weaken-semi",
        "accept",
        false,
        None,
        Derivation::weaken_semi(id(), leaf("a"), leaf("b"), Derivation::ax(atom("a"))),
    ));
    out.push(case(
        3,
        "weaken-semi",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::WeakenSemi,
            parse_sequent("a ; b |- a").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::ax(atom("b"))],
        ),
    ));

    // c;
    out.push(case(
        4,
        "contract-semi",
        "accept",
        false,
        None,
        Derivation::contract_semi(
            id(),
            leaf("a"),
            Derivation::and_r(Derivation::ax(atom("a")), Derivation::ax(atom("a"))),
        ),
    ));
    out.push(case(
        4,
        "contract-semi",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::ContractSemi,
            parse_sequent("a |- a").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // empR
    out.push(case(5, "empR", "accept", false, None, Derivation::emp_r()));
    out.push(case(
        5,
        "empR",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::EmpR,
            parse_sequent("empa |- emp").unwrap(),
            RuleParams::None,
            vec![],
        ),
    ));

    // empL
    out.push(case(
        6,
        "empL",
        "accept",
        false,
        None,
        Derivation::emp_l(id(), Derivation::emp_r()),
    ));
    out.push(case(
        6,
        "empL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::EmpL,
            parse_sequent("emp |- emp").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::true_r()],
        ),
    ));

    // sepR
    let pair = Derivation::sep_r(Derivation::ax(atom("a")), Derivation::ax(atom("b")));
    out.push(case(7, "sepR", "accept", false, None, pair.clone()));
    out.push(case(
        7,
        "sepR",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::SepR,
            parse_sequent("a ; b |- a * b").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a")), Derivation::ax(atom("b"))],
        ),
    ));

    // sepL
    out.push(case(
        8,
        "sepL",
        "accept",
        false,
        None,
        Derivation::sep_l(id(), f("a"), f("b"), pair.clone()),
    ));
    out.push(case(
        8,
        "sepL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::SepL,
            parse_sequent("a * b |- a /\\ b").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::and_r(
                Derivation::ax(atom("a")),
                Derivation::ax(atom("b")),
            )],
        ),
    ));

    // wandR
    out.push(case(
        9,
        "wandR",
        "accept",
        false,
        None,
        Derivation::wand_r(
            Bunch::EmpM,
            f("a"),
            Derivation::equiv(
                Bunch::comma(Bunch::EmpM, leaf("a")),
                Derivation::ax(atom("a")),
            ),
        ),
    ));
    out.push(case(
        9,
        "wandR",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::WandR,
            parse_sequent("a |- a /\\ a").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // wandL
    let usage = || {
        Derivation::equiv(
            Bunch::comma(Bunch::EmpM, leaf("b")),
            Derivation::ax(atom("b")),
        )
    };
    out.push(case(
        10,
        "wandL",
        "accept",
        false,
        None,
        Derivation::wand_l(
            id(),
            Bunch::EmpM,
            f("b"),
            Derivation::ax(atom("a")),
            usage(),
        ),
    ));
    out.push(case(
        10,
        "wandL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::WandL,
            parse_sequent("a , (empm , (a -* b)) |- b").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::ax(atom("b")), usage()],
        ),
    ));

    // trueR
    out.push(case(
        11,
        "trueR",
        "accept",
        false,
        None,
        Derivation::true_r(),
    ));
    out.push(case(
        11,
        "trueR",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::TrueR,
            parse_sequent("empm |- top").unwrap(),
            RuleParams::None,
            vec![],
        ),
    ));

    // trueL
    out.push(case(
        12,
        "trueL",
        "accept",
        false,
        None,
        Derivation::true_l(id(), Derivation::true_r()),
    ));
    out.push(case(
        12,
        "trueL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::TrueL,
            parse_sequent("top |- top").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::emp_r()],
        ),
    ));

    // andR
    let both = Derivation::and_r(Derivation::ax(atom("a")), Derivation::ax(atom("b")));
    out.push(case(13, "andR", "accept", false, None, both.clone()));
    out.push(case(
        13,
        "andR",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::AndR,
            parse_sequent("a , b |- a /\\ b").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a")), Derivation::ax(atom("b"))],
        ),
    ));

    // andL at a deep position, straight from the motivating example
    let wk = || {
        Derivation::equiv(
            Bunch::semi(leaf("p"), leaf("q")),
            Derivation::weaken_semi(id(), leaf("q"), leaf("p"), Derivation::ax(atom("q"))),
        )
    };
    let and_l_premise = Derivation::sep_r(Derivation::ax(atom("p")), wk());
    out.push(case(
        14,
        "andL",
        "accept",
        false,
        None,
        Derivation::and_l(
            BunchCtx::from_frames(vec![Frame::CommaR(leaf("p"))]),
            f("p"),
            f("q"),
            and_l_premise.clone(),
        ),
    ));
    out.push(case(
        14,
        "andL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::AndL,
            parse_sequent("p , (p /\\ q) |- p * q").unwrap(),
            RuleParams::Ctx(id()),
            vec![and_l_premise],
        ),
    ));

    // implR
    out.push(case(
        15,
        "implR",
        "accept",
        false,
        None,
        Derivation::impl_r(
            Bunch::EmpA,
            f("a"),
            Derivation::equiv(
                Bunch::semi(Bunch::EmpA, leaf("a")),
                Derivation::ax(atom("a")),
            ),
        ),
    ));
    out.push(case(
        15,
        "implR",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::ImplR,
            parse_sequent("a |- a -* a").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // implL
    let iusage = || {
        Derivation::equiv(
            Bunch::semi(Bunch::EmpA, leaf("b")),
            Derivation::ax(atom("b")),
        )
    };
    out.push(case(
        16,
        "implL",
        "accept",
        false,
        None,
        Derivation::impl_l(
            id(),
            Bunch::EmpA,
            f("b"),
            Derivation::ax(atom("a")),
            iusage(),
        ),
    ));
    out.push(case(
        16,
        "implL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::ImplL,
            parse_sequent("a ; (empa ; (a -> b)) |- b").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::ax(atom("b")), iusage()],
        ),
    ));

    // falseL
    out.push(case(
        17,
        "falseL",
        "accept",
        false,
        None,
        Derivation::false_l(
            BunchCtx::from_frames(vec![Frame::CommaR(leaf("a"))]),
            f("q"),
        ),
    ));
    out.push(case(
        17,
        "falseL",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::FalseL,
            parse_sequent("a |- q").unwrap(),
            RuleParams::Ctx(id()),
            vec![],
        ),
    ));

    // disjR1
    out.push(case(
        18,
        "disjR1",
        "accept",
        false,
        None,
        Derivation::disj_r1(f("b"), Derivation::ax(atom("a"))),
    ));
    out.push(case(
        18,
        "disjR1",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::DisjR1,
            parse_sequent("a |- b \\/ a").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // disjR2
    out.push(case(
        19,
        "disjR2",
        "accept",
        false,
        None,
        Derivation::disj_r2(f("b"), Derivation::ax(atom("a"))),
    ));
    out.push(case(
        19,
        "disjR2",
        "reject",
        false,
        None,
        Derivation::new(
            RuleName::DisjR2,
            parse_sequent("a |- a \\/ b").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // disjL
    let dl = || Derivation::disj_r1(f("b"), Derivation::ax(atom("a")));
    let dr = || Derivation::disj_r2(f("a"), Derivation::ax(atom("b")));
    out.push(case(
        20,
        "disjL",
        "accept",
        false,
        None,
        Derivation::disj_l(id(), f("a"), f("b"), dl(), dr()),
    ));
    out.push(case(
        20,
        "disjL",
        "reject",
        false,
        None,
        Derivation::disj_l(id(), f("a"), f("b"), dr(), dl()),
    ));

    // boxR
    let unboxed = Derivation::box_l(id(), f("a"), Derivation::ax(atom("a")));
    out.push(case(
        21,
        "boxR",
        "accept",
        true,
        None,
        Derivation::box_r(unboxed.clone()),
    ));
    out.push(case(
        21,
        "boxR",
        "reject",
        true,
        None,
        Derivation::new(
            RuleName::BoxR,
            parse_sequent("a |- box a").unwrap(),
            RuleParams::None,
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // boxL
    out.push(case(22, "boxL", "accept", true, None, unboxed));
    out.push(case(
        22,
        "boxL",
        "reject",
        true,
        None,
        Derivation::new(
            RuleName::BoxL,
            parse_sequent("a |- a").unwrap(),
            RuleParams::Ctx(id()),
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    // ext (affine weakening)
    let cfg = affine_cfg();
    let env: std::collections::BTreeMap<u32, Bunch> =
        [(1, leaf("a")), (2, leaf("b"))].into_iter().collect();
    out.push(case(
        23,
        "ext",
        "accept",
        false,
        affine,
        Derivation::struct_ext(
            0,
            id(),
            env,
            &cfg.struct_rules.rules[0].conclusion,
            vec![Derivation::ax(atom("a"))],
            f("a"),
        ),
    ));
    let bad_env: std::collections::BTreeMap<u32, Bunch> =
        [(1, leaf("b")), (2, leaf("a"))].into_iter().collect();
    out.push(case(
        23,
        "ext",
        "reject",
        false,
        affine,
        Derivation::new(
            RuleName::StructExt(0),
            parse_sequent("a , b |- a").unwrap(),
            RuleParams::StructExt {
                ctx: id(),
                env: bad_env,
            },
            vec![Derivation::ax(atom("a"))],
        ),
    ));

    out
}

/// A cut assembled from two searched proofs: `lemma: Δ′ ⊢ ψ` and
/// `usage: Π(ψ) ⊢ φ` give `Π(Δ′) ⊢ φ`.
struct CutSpec {
    name: &'static str,
    kind: Kind,
    lemma: &'static str,
    usage: &'static str,
    path: &'static str,
    depth: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Plain,
    Affine,
    S4,
}

fn cut_specs() -> Vec<CutSpec> {
    let c = |name, kind, lemma, usage, path, depth| CutSpec {
        name,
        kind,
        lemma,
        usage,
        path,
        depth,
    };
    vec![
        // plain BI
        c(
            "bi-commute",
            Kind::Plain,
            "a * b |- b * a",
            "b * a |- b * a",
            "",
            8,
        ),
        c(
            "bi-pair",
            Kind::Plain,
            "a , b |- a * b",
            "a * b |- b * a",
            "",
            8,
        ),
        c(
            "bi-and-proj",
            Kind::Plain,
            "p /\\ q |- q",
            "p , q |- p * q",
            "R,",
            8,
        ),
        c(
            "bi-intro-contraction",
            Kind::Plain,
            "a , b |- (a * b) /\\ (a * b)",
            "((a * b) /\\ (a * b)) , c |- ((a * b) /\\ (a * b)) * c",
            "L,",
            10,
        ),
        c(
            "bi-wand-package",
            Kind::Plain,
            "a |- b -* (a * b)",
            "(b -* (a * b)) , b |- a * b",
            "L,",
            8,
        ),
        c(
            "bi-emp-left",
            Kind::Plain,
            "emp |- emp",
            "emp , a |- a",
            "L,",
            8,
        ),
        c(
            "bi-emp-unit",
            Kind::Plain,
            "empm |- emp",
            "emp |- emp",
            "",
            8,
        ),
        c(
            "bi-and-or",
            Kind::Plain,
            "a /\\ b |- a",
            "a |- a \\/ c",
            "",
            8,
        ),
        c(
            "bi-or-swap",
            Kind::Plain,
            "a \\/ b |- b \\/ a",
            "b \\/ a |- b \\/ a",
            "",
            8,
        ),
        c(
            "bi-or-inject",
            Kind::Plain,
            "a |- a \\/ b",
            "a \\/ b |- b \\/ a",
            "",
            8,
        ),
        c(
            "bi-top-weaken",
            Kind::Plain,
            "a ; b |- top",
            "top ; c |- c",
            "L;",
            8,
        ),
        c(
            "bi-impl-fire",
            Kind::Plain,
            "a -> b ; a |- b",
            "b |- b \\/ c",
            "",
            8,
        ),
        c(
            "bi-impl-package",
            Kind::Plain,
            "a |- b -> (a /\\ b)",
            "(b -> (a /\\ b)) ; b |- a /\\ b",
            "L;",
            8,
        ),
        c("bi-false", Kind::Plain, "bot |- c", "c |- c", "", 6),
        c(
            "bi-assoc",
            Kind::Plain,
            "a * (b * c) |- (a * b) * c",
            "(a * b) * c |- c * (a * b)",
            "",
            10,
        ),
        c(
            "bi-emp-round",
            Kind::Plain,
            "a |- a * emp",
            "a * emp |- a",
            "",
            8,
        ),
        c(
            "bi-and-assoc",
            Kind::Plain,
            "a /\\ (b /\\ c) |- (a /\\ b) /\\ c",
            "(a /\\ b) /\\ c |- b",
            "",
            10,
        ),
        c(
            "bi-impl-chain",
            Kind::Plain,
            "(a -> b) ; (b -> c) ; a |- c",
            "c |- c \\/ d",
            "",
            10,
        ),
        c(
            "bi-wand-fire",
            Kind::Plain,
            "(a -* b) , a |- b",
            "b |- b \\/ a",
            "",
            8,
        ),
        c(
            "bi-curry",
            Kind::Plain,
            "a -* (b -* c) |- (a * b) -* c",
            "(a * b) -* c |- (a * b) -* c",
            "",
            10,
        ),
        c(
            "bi-deep-or",
            Kind::Plain,
            "a /\\ b |- b",
            "b , c |- b * c",
            "L,",
            8,
        ),
        c(
            "bi-sep-or",
            Kind::Plain,
            "a * b |- b * a",
            "b * a |- (b * a) \\/ emp",
            "",
            8,
        ),
        // affine BI
        c(
            "affine-weaken",
            Kind::Affine,
            "a * b |- a",
            "a |- a \\/ c",
            "",
            10,
        ),
        c(
            "affine-pair-drop",
            Kind::Affine,
            "a , b |- a",
            "a |- a",
            "",
            8,
        ),
        c(
            "affine-triple",
            Kind::Affine,
            "(a * b) * c |- a * b",
            "a * b |- b * a",
            "",
            10,
        ),
        c(
            "affine-wand",
            Kind::Affine,
            "a |- b -* a",
            "(b -* a) , b |- a",
            "L,",
            8,
        ),
        c(
            "affine-nested",
            Kind::Affine,
            "a , (b , c) |- a * b",
            "a * b |- a",
            "",
            10,
        ),
        c(
            "affine-frame",
            Kind::Affine,
            "b |- b",
            "b , a |- b",
            "L,",
            8,
        ),
        c(
            "affine-emp-frame",
            Kind::Affine,
            "emp |- emp",
            "emp , (a , b) |- a",
            "L,",
            10,
        ),
        c(
            "affine-sep-and",
            Kind::Affine,
            "a * b |- a",
            "a , c |- a * c",
            "L,",
            10,
        ),
        c(
            "affine-or",
            Kind::Affine,
            "a * (b * c) |- a",
            "a |- a \\/ emp",
            "",
            10,
        ),
        c(
            "affine-deep",
            Kind::Affine,
            "a , b |- a",
            "a , (c , d) |- a",
            "L,",
            10,
        ),
        c(
            "affine-wand-drop",
            Kind::Affine,
            "(a -* b) , (a , c) |- b",
            "b |- b",
            "",
            10,
        ),
        c(
            "affine-top",
            Kind::Affine,
            "a * b |- top",
            "top |- top \\/ c",
            "",
            8,
        ),
        // BIS4
        c("s4-open", Kind::S4, "box a |- a", "a |- a \\/ b", "", 8),
        c(
            "s4-split",
            Kind::S4,
            "box (a /\\ b) |- box a",
            "box a , box c |- box (a * c)",
            "L,",
            10,
        ),
        c(
            "s4-idem",
            Kind::S4,
            "box a |- box box a",
            "box box a |- box a",
            "",
            8,
        ),
        c(
            "s4-pair",
            Kind::S4,
            "box a , box b |- box (a * b)",
            "box (a * b) |- a * b",
            "",
            10,
        ),
        c(
            "s4-impl",
            Kind::S4,
            "box (a -> b) ; box a |- b",
            "b |- b \\/ c",
            "",
            10,
        ),
        c("s4-false", Kind::S4, "box bot |- bot", "bot |- q", "", 6),
        c(
            "s4-frame",
            Kind::S4,
            "box a |- a",
            "a ; box b |- a",
            "L;",
            8,
        ),
        c(
            "s4-and",
            Kind::S4,
            "box (a /\\ b) |- box a /\\ box b",
            "box a /\\ box b |- box b",
            "",
            10,
        ),
    ]
}

fn main() {
    let root = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "corpus".to_string());
    let kernel_dir = std::path::Path::new(&root).join("kernel");
    let cutelim_dir = std::path::Path::new(&root).join("cutelim");
    std::fs::create_dir_all(&kernel_dir).unwrap();
    std::fs::create_dir_all(&cutelim_dir).unwrap();

    let kernel = kernel_cases();
    for case in &kernel {
        let mut cfg = CalculusConfig {
            s4_enabled: case.s4,
            cut_allowed: case.allow_cut,
            ..CalculusConfig::default()
        };
        if let Some(rules) = &case.rules {
            cfg.struct_rules = RuleSet::parse(rules).unwrap().0;
        }
        // self-check: the emitted expectation must hold after a JSON round trip
        let doc = DerivationDoc::from_derivation(&case.derivation);
        let resolved = doc.resolve().expect("corpus docs must resolve");
        let outcome = check_derivation(&resolved, &cfg);
        match case.expect {
            "accept" => assert!(outcome.is_ok(), "{}: {:?}", case.name, outcome),
            "reject" => assert!(outcome.is_err(), "{}: unexpectedly accepted", case.name),
            other => panic!("unknown expectation {other}"),
        }
    }
    write_cases(&kernel_dir, &kernel);
    println!("wrote {} kernel cases", kernel.len());

    let mut cut_cases = Vec::new();
    for (i, spec) in cut_specs().iter().enumerate() {
        let (cfg, s4, rules) = match spec.kind {
            Kind::Plain => (CalculusConfig::bi(), false, None),
            Kind::Affine => (affine_cfg(), false, Some(AFFINE_RULES.to_string())),
            Kind::S4 => (CalculusConfig::bis4(), true, None),
        };
        let lemma_goal = parse_sequent(spec.lemma).unwrap();
        let usage_goal = parse_sequent(spec.usage).unwrap();
        let lemma = prove_cf(&lemma_goal, &cfg, spec.depth)
            .unwrap_or_else(|| panic!("{}: lemma {} not provable", spec.name, spec.lemma));
        let usage = prove_cf(&usage_goal, &cfg, spec.depth)
            .unwrap_or_else(|| panic!("{}: usage {} not provable", spec.name, spec.usage));
        let dirs = parse_path(spec.path).unwrap();
        let ctx = bunched::syntax::ctx_at_path(&usage_goal.lhs, &dirs)
            .unwrap_or_else(|e| panic!("{}: bad cut path: {e}", spec.name));
        let d = Derivation::cut(ctx, lemma, usage);
        let cut_cfg = cfg.clone().with_cut();
        check_derivation(&d, &cut_cfg)
            .unwrap_or_else(|e| panic!("{}: cut does not check: {e}", spec.name));
        assert!(d.uses_cut());
        cut_cases.push(Case {
            name: format!("{:02}-{}", i + 1, spec.name),
            expect: "accept",
            s4,
            allow_cut: true,
            rules,
            derivation: d,
        });
    }
    // two stacked variants: a second cut over an existing one
    let double = {
        let cfg = CalculusConfig::bi();
        let first = Derivation::cut(
            id(),
            prove_cf(&parse_sequent("a * b |- b * a").unwrap(), &cfg, 8).unwrap(),
            prove_cf(&parse_sequent("b * a |- b * a").unwrap(), &cfg, 8).unwrap(),
        );
        Derivation::cut(
            id(),
            first,
            prove_cf(&parse_sequent("b * a |- a * b").unwrap(), &cfg, 8).unwrap(),
        )
    };
    check_derivation(&double, &CalculusConfig::bi().with_cut()).unwrap();
    cut_cases.push(Case {
        name: format!("{:02}-bi-double-cut", cut_cases.len() + 1),
        expect: "accept",
        s4: false,
        allow_cut: true,
        rules: None,
        derivation: double,
    });
    let under_rule = {
        let cfg = CalculusConfig::bi();
        let inner = Derivation::cut(
            id(),
            prove_cf(&parse_sequent("empm , a |- a").unwrap(), &cfg, 8).unwrap(),
            prove_cf(&parse_sequent("a |- a").unwrap(), &cfg, 8).unwrap(),
        );
        Derivation::wand_r(Bunch::EmpM, f("a"), inner)
    };
    check_derivation(&under_rule, &CalculusConfig::bi().with_cut()).unwrap();
    cut_cases.push(Case {
        name: format!("{:02}-bi-cut-under-wandr", cut_cases.len() + 1),
        expect: "accept",
        s4: false,
        allow_cut: true,
        rules: None,
        derivation: under_rule,
    });

    write_cases(&cutelim_dir, &cut_cases);
    println!("wrote {} cut cases", cut_cases.len());
}

fn write_cases(dir: &std::path::Path, cases: &[Case]) {
    for case in cases {
        let doc = DerivationDoc::from_derivation(&case.derivation);
        let json = serde_json::json!({
            "name": case.name,
            "expect": case.expect,
            "s4": case.s4,
            "allow_cut": case.allow_cut,
            "rules": case.rules,
            "derivation": doc,
        });
        let path = dir.join(format!("{}.json", case.name));
        std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    }
}
