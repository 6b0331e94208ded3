//! Bunched terms and simple structural rules.
//!
//! A simple structural rule is a tuple of premise terms and one linear
//! conclusion term; instantiating the variables with bunches and placing
//! the result inside an arbitrary context yields a rule instance. Terms
//! also interpret into any BI algebra, which is how a rule is validated
//! in a model.

use crate::algebra::BiAlgebra;
use crate::syntax::{ctx_at_path, Bunch, BunchCtx, Conn, Dir, Formula, SyntaxError};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BtermError {
    #[error("variable x{0} is unbound in the instantiation")]
    Unbound(u32),
    #[error("conclusion term is not linear: x{0} occurs more than once")]
    NonLinear(u32),
    #[error("rule file line {line}: {err}")]
    Parse { line: usize, err: String },
    #[error("{0}")]
    Malformed(String),
}

/// A bunch skeleton over variables: `x<n> | t , t | t ; t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BTerm {
    Var(u32),
    Comma(Box<BTerm>, Box<BTerm>),
    Semi(Box<BTerm>, Box<BTerm>),
}

impl BTerm {
    pub fn var(i: u32) -> BTerm {
        BTerm::Var(i)
    }

    pub fn comma(l: BTerm, r: BTerm) -> BTerm {
        BTerm::Comma(Box::new(l), Box::new(r))
    }

    pub fn semi(l: BTerm, r: BTerm) -> BTerm {
        BTerm::Semi(Box::new(l), Box::new(r))
    }

    /// Variable indices in order of first occurrence.
    pub fn vars(&self) -> Vec<u32> {
        fn walk(t: &BTerm, out: &mut Vec<u32>) {
            match t {
                BTerm::Var(i) => {
                    if !out.contains(i) {
                        out.push(*i);
                    }
                }
                BTerm::Comma(l, r) | BTerm::Semi(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            BTerm::Var(_) => 1,
            BTerm::Comma(l, r) | BTerm::Semi(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// True iff no variable occurs twice.
pub fn is_linear(t: &BTerm) -> bool {
    fn walk(t: &BTerm, seen: &mut Vec<u32>) -> bool {
        match t {
            BTerm::Var(i) => {
                if seen.contains(i) {
                    false
                } else {
                    seen.push(*i);
                    true
                }
            }
            BTerm::Comma(l, r) | BTerm::Semi(l, r) => walk(l, seen) && walk(r, seen),
        }
    }
    walk(t, &mut Vec::new())
}

/// Homomorphic substitution of bunches for variables.
pub fn subst(t: &BTerm, env: &BTreeMap<u32, Bunch>) -> Result<Bunch, BtermError> {
    match t {
        BTerm::Var(i) => env.get(i).cloned().ok_or(BtermError::Unbound(*i)),
        BTerm::Comma(l, r) => Ok(Bunch::comma(subst(l, env)?, subst(r, env)?)),
        BTerm::Semi(l, r) => Ok(Bunch::semi(subst(l, env)?, subst(r, env)?)),
    }
}

/// The interpretation `⟦T⟧ : Aⁿ → A`: `,` becomes `∗` and `;` becomes `∧`.
pub fn interp_bterm<A: BiAlgebra>(
    t: &BTerm,
    alg: &A,
    env: &BTreeMap<u32, A::Elem>,
) -> Result<A::Elem, BtermError> {
    match t {
        BTerm::Var(i) => env.get(i).cloned().ok_or(BtermError::Unbound(*i)),
        BTerm::Comma(l, r) => Ok(alg.sep(&interp_bterm(l, alg, env)?, &interp_bterm(r, alg, env)?)),
        BTerm::Semi(l, r) => Ok(alg.meet(&interp_bterm(l, alg, env)?, &interp_bterm(r, alg, env)?)),
    }
}

/// A simple structural rule `(T1 & ... & Tm => T)` with linear conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructRule {
    pub premises: Vec<BTerm>,
    pub conclusion: BTerm,
}

impl StructRule {
    /// Builds a rule, enforcing linearity of the conclusion. Premise
    /// variables missing from the conclusion are tolerated but reported
    /// back as warnings, since instantiating them is guesswork.
    pub fn new(
        premises: Vec<BTerm>,
        conclusion: BTerm,
    ) -> Result<(StructRule, Vec<String>), BtermError> {
        if let Some(dup) = first_duplicate(&conclusion) {
            return Err(BtermError::NonLinear(dup));
        }
        let cvars = conclusion.vars();
        let mut warnings = Vec::new();
        for p in &premises {
            for v in p.vars() {
                if !cvars.contains(&v) {
                    warnings.push(format!(
                        "premise variable x{v} does not occur in the conclusion"
                    ));
                }
            }
        }
        Ok((
            StructRule {
                premises,
                conclusion,
            },
            warnings,
        ))
    }

    /// All variables of the rule (conclusion first, then premise-only ones).
    pub fn vars(&self) -> Vec<u32> {
        let mut vars = self.conclusion.vars();
        for p in &self.premises {
            for v in p.vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        vars
    }
}

fn first_duplicate(t: &BTerm) -> Option<u32> {
    fn walk(t: &BTerm, seen: &mut Vec<u32>) -> Option<u32> {
        match t {
            BTerm::Var(i) => {
                if seen.contains(i) {
                    Some(*i)
                } else {
                    seen.push(*i);
                    None
                }
            }
            BTerm::Comma(l, r) | BTerm::Semi(l, r) => walk(l, seen).or_else(|| walk(r, seen)),
        }
    }
    walk(t, &mut Vec::new())
}

/// An ordered set of simple structural rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    pub rules: Vec<StructRule>,
}

impl RuleSet {
    pub fn empty() -> RuleSet {
        RuleSet::default()
    }

    pub fn new(rules: Vec<StructRule>) -> RuleSet {
        RuleSet { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Parses a rule set, one rule per line: `T1 & T2 & ... => T`. An
    /// empty premise list is written `=> T`. Blank lines and lines
    /// starting with `#` are skipped. Returns the set plus any warnings.
    pub fn parse(text: &str) -> Result<(RuleSet, Vec<String>), BtermError> {
        let mut rules = Vec::new();
        let mut warnings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (prem_part, concl_part) = line.split_once("=>").ok_or(BtermError::Parse {
                line: idx + 1,
                err: "missing `=>`".into(),
            })?;
            let mut premises = Vec::new();
            let prem_part = prem_part.trim();
            if !prem_part.is_empty() {
                for chunk in prem_part.split('&') {
                    premises.push(
                        parse_bterm(chunk)
                            .map_err(|err| BtermError::Parse { line: idx + 1, err })?,
                    );
                }
            }
            let conclusion =
                parse_bterm(concl_part).map_err(|err| BtermError::Parse { line: idx + 1, err })?;
            let (rule, mut warns) =
                StructRule::new(premises, conclusion).map_err(|e| BtermError::Parse {
                    line: idx + 1,
                    err: e.to_string(),
                })?;
            warnings.extend(warns.drain(..).map(|w| format!("line {}: {w}", idx + 1)));
            rules.push(rule);
        }
        Ok((RuleSet { rules }, warnings))
    }
}

/// Parses the bterm grammar `x<digits> | t , t | t ; t | ( t )`, with `,`
/// binding tighter than `;`, both left-nested.
pub fn parse_bterm(text: &str) -> Result<BTerm, String> {
    struct P<'a> {
        chars: std::iter::Peekable<std::str::Chars<'a>>,
    }
    impl P<'_> {
        fn skip_ws(&mut self) {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.chars.next();
            }
        }
        fn semi(&mut self) -> Result<BTerm, String> {
            let mut acc = self.comma()?;
            loop {
                self.skip_ws();
                if self.chars.peek() == Some(&';') {
                    self.chars.next();
                    acc = BTerm::semi(acc, self.comma()?);
                } else {
                    return Ok(acc);
                }
            }
        }
        fn comma(&mut self) -> Result<BTerm, String> {
            let mut acc = self.primary()?;
            loop {
                self.skip_ws();
                if self.chars.peek() == Some(&',') {
                    self.chars.next();
                    acc = BTerm::comma(acc, self.primary()?);
                } else {
                    return Ok(acc);
                }
            }
        }
        fn primary(&mut self) -> Result<BTerm, String> {
            self.skip_ws();
            match self.chars.peek() {
                Some('(') => {
                    self.chars.next();
                    let t = self.semi()?;
                    self.skip_ws();
                    if self.chars.next() != Some(')') {
                        return Err("expected `)`".into());
                    }
                    Ok(t)
                }
                Some('x') => {
                    self.chars.next();
                    let mut digits = String::new();
                    while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        digits.push(self.chars.next().unwrap());
                    }
                    if digits.is_empty() {
                        return Err("expected digits after `x`".into());
                    }
                    digits
                        .parse::<u32>()
                        .map(BTerm::Var)
                        .map_err(|e| e.to_string())
                }
                other => Err(format!("expected `x<digits>` or `(`, found {other:?}")),
            }
        }
    }
    let mut p = P {
        chars: text.chars().peekable(),
    };
    let t = p.semi()?;
    p.skip_ws();
    if let Some(c) = p.chars.next() {
        return Err(format!("trailing input starting at {c:?}"));
    }
    Ok(t)
}

impl fmt::Display for BTerm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `,` tighter than `;`, left-nested, mirroring the parser
        fn go(t: &BTerm, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            let p = match t {
                BTerm::Semi(..) => 1,
                BTerm::Comma(..) => 2,
                BTerm::Var(_) => 3,
            };
            let parens = p < min;
            if parens {
                write!(out, "(")?;
            }
            match t {
                BTerm::Var(i) => write!(out, "x{i}")?,
                BTerm::Comma(l, r) => {
                    go(l, p, out)?;
                    write!(out, " , ")?;
                    go(r, p + 1, out)?;
                }
                BTerm::Semi(l, r) => {
                    go(l, p, out)?;
                    write!(out, " ; ")?;
                    go(r, p + 1, out)?;
                }
            }
            if parens {
                write!(out, ")")?;
            }
            Ok(())
        }
        go(self, 0, out)
    }
}

impl fmt::Display for StructRule {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(|t| t.to_string()).collect();
        if premises.is_empty() {
            write!(out, "=> {}", self.conclusion)
        } else {
            write!(out, "{} => {}", premises.join(" & "), self.conclusion)
        }
    }
}

/// Checks the validation inequality `⟦T⟧(ā) ≤ ⟦T1⟧(ā) ∨ … ∨ ⟦Tm⟧(ā)` for
/// every environment into the (finite) carrier. The empty join is `⊥`.
pub fn validates_rule<A: BiAlgebra>(alg: &A, rule: &StructRule) -> bool {
    let vars = rule.vars();
    let carrier = alg.elements();
    let mut env_idx = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<u32, A::Elem> = vars
            .iter()
            .zip(env_idx.iter())
            .map(|(v, i)| (*v, carrier[*i].clone()))
            .collect();
        let lhs = interp_bterm(&rule.conclusion, alg, &env).expect("env covers all variables");
        let mut rhs = alg.bot();
        for p in &rule.premises {
            let val = interp_bterm(p, alg, &env).expect("env covers all variables");
            rhs = alg.join(&rhs, &val);
        }
        if !alg.leq(&lhs, &rhs) {
            return false;
        }
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == env_idx.len() {
                return true;
            }
            env_idx[k] += 1;
            if env_idx[k] < carrier.len() {
                break;
            }
            env_idx[k] = 0;
            k += 1;
        }
        if vars.is_empty() {
            return true;
        }
    }
}

/// Direction paths (through the term skeleton) of every occurrence of the
/// variable `j` in `t`.
pub fn var_occurrence_paths(t: &BTerm, j: u32) -> Vec<Vec<Dir>> {
    fn walk(t: &BTerm, j: u32, prefix: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
        match t {
            BTerm::Var(i) => {
                if *i == j {
                    out.push(prefix.clone());
                }
            }
            BTerm::Comma(l, r) | BTerm::Semi(l, r) => {
                let conn = match t {
                    BTerm::Comma(..) => Conn::Comma,
                    _ => Conn::Semi,
                };
                prefix.push((conn, crate::syntax::Side::Left));
                walk(l, j, prefix, out);
                prefix.pop();
                prefix.push((conn, crate::syntax::Side::Right));
                walk(r, j, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(t, j, &mut Vec::new(), &mut out);
    out
}

/// Locates the hole of `Π` within one instantiated variable of a linear
/// term: given `subst(t, env) = fill(Π, leaf φ)`, returns `(j, Π′)` with
/// `env(j) = fill(Π′, leaf φ)` and, for every `Γ`,
/// `subst(t, env[j ↦ fill(Π′, Γ)]) = fill(Π, Γ)`.
pub fn bterm_ctx_act_decomp(
    t: &BTerm,
    env: &BTreeMap<u32, Bunch>,
    ctx: &BunchCtx,
    target: &Formula,
) -> Result<(u32, BunchCtx), BtermError> {
    if !is_linear(t) {
        return Err(BtermError::Malformed(
            "bterm_ctx_act_decomp requires a linear term".into(),
        ));
    }
    let whole = subst(t, env)?;
    if ctx.fill(Bunch::Leaf(target.clone())) != whole {
        return Err(BtermError::Malformed(
            "context does not address the target inside the instantiated term".into(),
        ));
    }
    let path = ctx.path();
    // Descend the term skeleton along the hole path until a variable.
    let mut term = t;
    let mut consumed = 0usize;
    loop {
        match term {
            BTerm::Var(j) => {
                let inner_path: Vec<Dir> = path[consumed..].to_vec();
                let bound = env.get(j).ok_or(BtermError::Unbound(*j))?;
                let inner = ctx_at_path(bound, &inner_path).map_err(|e: SyntaxError| {
                    BtermError::Malformed(format!("hole path leaves the variable's bunch: {e}"))
                })?;
                return Ok((*j, inner));
            }
            BTerm::Comma(l, r) | BTerm::Semi(l, r) => {
                let want = match term {
                    BTerm::Comma(..) => Conn::Comma,
                    _ => Conn::Semi,
                };
                let Some((conn, side)) = path.get(consumed).copied() else {
                    return Err(BtermError::Malformed(
                        "hole stops at a term connective, not inside a variable".into(),
                    ));
                };
                if conn != want {
                    return Err(BtermError::Malformed(
                        "hole path disagrees with the term skeleton".into(),
                    ));
                }
                term = match side {
                    crate::syntax::Side::Left => l,
                    crate::syntax::Side::Right => r,
                };
                consumed += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Frame, Side};

    fn env(pairs: &[(u32, Bunch)]) -> BTreeMap<u32, Bunch> {
        pairs.iter().cloned().collect()
    }

    #[test]
    fn linearity() {
        assert!(is_linear(&BTerm::comma(BTerm::var(1), BTerm::var(2))));
        assert!(!is_linear(&BTerm::semi(
            BTerm::comma(BTerm::var(1), BTerm::var(2)),
            BTerm::var(1)
        )));
        assert!(is_linear(&BTerm::var(1)));
    }

    #[test]
    fn substitution() {
        // weakening conclusion x1 , x2 at {1 ↦ a, 2 ↦ b}
        let t = BTerm::comma(BTerm::var(1), BTerm::var(2));
        let e = env(&[(1, Bunch::atom("a")), (2, Bunch::atom("b"))]);
        assert_eq!(
            subst(&t, &e).unwrap(),
            Bunch::comma(Bunch::atom("a"), Bunch::atom("b"))
        );
        assert_eq!(subst(&BTerm::var(1), &e).unwrap(), Bunch::atom("a"));

        let dup = BTerm::semi(BTerm::var(1), BTerm::var(1));
        let e2 = env(&[(1, Bunch::comma(Bunch::atom("a"), Bunch::atom("b")))]);
        assert_eq!(
            subst(&dup, &e2).unwrap(),
            Bunch::semi(
                Bunch::comma(Bunch::atom("a"), Bunch::atom("b")),
                Bunch::comma(Bunch::atom("a"), Bunch::atom("b"))
            )
        );

        assert!(matches!(
            subst(&t, &env(&[(1, Bunch::atom("a"))])),
            Err(BtermError::Unbound(2))
        ));
    }

    #[test]
    fn interpretation_maps_comma_to_sep_and_semi_to_meet() {
        use crate::algebra::{BiAlgebra, FinitePcm, PowersetAlgebra};
        let alg =
            PowersetAlgebra::new(FinitePcm::new(vec!["e".into(), "m".into()], "e", &[]).unwrap());
        // (x1 , x2) ; x1 denotes (X1 ∗ X2) ∧ X1
        let t = BTerm::semi(BTerm::comma(BTerm::var(1), BTerm::var(2)), BTerm::var(1));
        for x1 in alg.elements() {
            for x2 in alg.elements() {
                let env: BTreeMap<u32, u64> = [(1, x1), (2, x2)].into_iter().collect();
                assert_eq!(
                    interp_bterm(&t, &alg, &env).unwrap(),
                    alg.meet(&alg.sep(&x1, &x2), &x1)
                );
            }
        }
        let env: BTreeMap<u32, u64> = [(1, 0b10)].into_iter().collect();
        assert_eq!(interp_bterm(&BTerm::var(1), &alg, &env).unwrap(), 0b10);
        assert!(matches!(
            interp_bterm(&BTerm::var(2), &alg, &env),
            Err(BtermError::Unbound(2))
        ));
    }

    #[test]
    fn rule_set_parsing() {
        let (rs, warnings) = RuleSet::parse("# affine weakening\nx1 => x1 , x2\n").unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.rules[0].premises, vec![BTerm::var(1)]);
        assert_eq!(
            rs.rules[0].conclusion,
            BTerm::comma(BTerm::var(1), BTerm::var(2))
        );
        assert!(warnings.is_empty());

        // empty premise list
        let (rs, _) = RuleSet::parse("=> x1 , x2").unwrap();
        assert!(rs.rules[0].premises.is_empty());

        // non-linear conclusion rejected
        assert!(RuleSet::parse("x1 => x1 ; x1").is_err());

        // premise-only variable warns
        let (_, warnings) = RuleSet::parse("x1 , x2 => x1").unwrap();
        assert_eq!(warnings.len(), 1);

        // round-trip through Display
        let (rs, _) = RuleSet::parse("x1 & x2 ; x1 => (x1 , x2) ; x3").unwrap();
        let printed = rs.rules[0].to_string();
        let (rs2, _) = RuleSet::parse(&printed).unwrap();
        assert_eq!(rs, rs2);
    }

    #[test]
    fn ctx_act_decomp_finds_the_variable() {
        let phi = Formula::atom("f");
        // t = x1 , x2 with the target being the whole of env(1)
        let t = BTerm::comma(BTerm::var(1), BTerm::var(2));
        let e = env(&[(1, Bunch::Leaf(phi.clone())), (2, Bunch::atom("b"))]);
        let ctx = BunchCtx::from_frames(vec![Frame::CommaL(Bunch::atom("b"))]);
        let (j, inner) = bterm_ctx_act_decomp(&t, &e, &ctx, &phi).unwrap();
        assert_eq!(j, 1);
        assert!(inner.is_identity());

        // t = x1 ; x2 with the target nested inside env(2)
        let t = BTerm::semi(BTerm::var(1), BTerm::var(2));
        let e = env(&[
            (1, Bunch::atom("a")),
            (2, Bunch::comma(Bunch::atom("c"), Bunch::Leaf(phi.clone()))),
        ]);
        let whole = subst(&t, &e).unwrap();
        let ctx = crate::syntax::ctx_at_path(
            &whole,
            &[(Conn::Semi, Side::Right), (Conn::Comma, Side::Right)],
        )
        .unwrap();
        let (j, inner) = bterm_ctx_act_decomp(&t, &e, &ctx, &phi).unwrap();
        assert_eq!(j, 2);
        assert_eq!(inner.fill(Bunch::Leaf(phi.clone())), e[&2]);
        // the uniformity equation, sampled
        for gamma in [Bunch::atom("g"), Bunch::EmpM] {
            let mut e2 = e.clone();
            e2.insert(j, inner.fill(gamma.clone()));
            assert_eq!(subst(&t, &e2).unwrap(), ctx.fill(gamma));
        }

        // nonlinear terms are rejected
        let bad = BTerm::comma(BTerm::var(1), BTerm::var(1));
        assert!(bterm_ctx_act_decomp(&bad, &e, &ctx, &phi).is_err());
    }
}
