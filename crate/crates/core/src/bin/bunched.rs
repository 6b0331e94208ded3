//! Command-line surface: derivation checking, proof search, admissible
//! inversions, finite model checking, the closure laboratory, and the
//! acceptance corpus runner.
//!
//! Exit codes: 0 on success, 1 when a check or verification fails, 2 on
//! malformed input. Diagnostics go to standard error.

use anyhow::{anyhow, Context, Result};
use bunched::admissible::{
    box_idemp_inv, invert_impl_r, invert_left, invert_wand_r, LeafInversion,
};
use bunched::algebra::{
    check_bi_axioms, interp_sequent, soundness_check, BiAlgebra, FinitePcm, Mask, PowersetAlgebra,
    Valuation,
};
use bunched::bterm::RuleSet;
use bunched::calculus::{
    check_derivation, derivation_from_json, derivation_to_json, CalculusConfig, DerivationDoc,
};
use bunched::closure::{build_closed_algebra, Basis, MooreClosure};
use bunched::search::prove_cf;
use bunched::syntax::{ctx_at_path, parse_path, parse_sequent, subtree_at, unbox_bunch, Atom};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bunched",
    about = "Proof tools for the logic of bunched implications"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CalculusFlags {
    /// File of simple structural rules, one `T1 & ... => T` per line
    #[arg(long = "rules", value_name = "FILE")]
    rules: Option<PathBuf>,
    /// Enable the S4 box rules
    #[arg(long = "s4")]
    s4: bool,
    /// Permit the cut rule
    #[arg(long = "allow-cut")]
    allow_cut: bool,
}

impl CalculusFlags {
    fn config(&self) -> Result<CalculusConfig> {
        let mut cfg = CalculusConfig {
            s4_enabled: self.s4,
            cut_allowed: self.allow_cut,
            ..CalculusConfig::default()
        };
        if let Some(path) = &self.rules {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading rule set {}", path.display()))?;
            let (rules, warnings) =
                RuleSet::parse(&text).map_err(|e| anyhow!("parsing rule set: {e}"))?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            cfg.struct_rules = rules;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation file against the kernel
    Check {
        derivation: PathBuf,
        #[command(flatten)]
        flags: CalculusFlags,
    },
    /// Search for a cut-free derivation of a sequent
    Prove {
        /// The goal, e.g. "a * b |- b * a"
        sequent: String,
        #[command(flatten)]
        flags: CalculusFlags,
        /// Height budget for the search
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Write the found derivation to a file
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Apply an admissible inversion to a derivation
    Invert {
        derivation: PathBuf,
        /// One of: sepL, andL, trueL, empL, boxIdemp, wandR, implR
        #[arg(long)]
        rule: String,
        /// Frame path of the principal position, e.g. `R,L;`
        #[arg(long, default_value = "")]
        path: String,
        #[command(flatten)]
        flags: CalculusFlags,
        /// Write the transformed derivation to a file instead of stdout
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Interpret a sequent (or a derivation's conclusion) over the
    /// powerset algebra of a finite PCM
    ModelCheck {
        pcm: PathBuf,
        /// A sequent in text form, or a path to a derivation file
        target: String,
        /// Valuation file (`atom = elements` per line); without it all
        /// valuations of the occurring atoms are enumerated
        #[arg(long, value_name = "FILE")]
        valuation: Option<PathBuf>,
        #[command(flatten)]
        flags: CalculusFlags,
    },
    /// Report the closed sets of a basis, the strength verdict, and the
    /// axiom check of the lifted algebra
    ClosureLab { pcm: PathBuf, basis: PathBuf },
    /// Run a directory of corpus cases and print a pass/fail table
    CorpusRun { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { derivation, flags } => {
            let cfg = flags.config()?;
            let d = load_derivation(&derivation)?;
            match check_derivation(&d, &cfg) {
                Ok(()) => {
                    println!("accepted: {}", d.conclusion);
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("rejected: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Prove {
            sequent,
            flags,
            depth,
            emit,
        } => {
            let cfg = flags.config()?;
            let goal = parse_sequent(&sequent).map_err(|e| anyhow!("parsing sequent: {e}"))?;
            match prove_cf(&goal, &cfg, depth) {
                Some(d) => {
                    check_derivation(&d, &cfg.without_cut())
                        .map_err(|e| anyhow!("search produced an unsound derivation: {e}"))?;
                    let json = derivation_to_json(&d);
                    match emit {
                        Some(path) => std::fs::write(&path, json)
                            .with_context(|| format!("writing {}", path.display()))?,
                        None => println!("{json}"),
                    }
                    eprintln!("proved (height {})", d.height());
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    eprintln!("no cut-free derivation found within depth {depth}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Invert {
            derivation,
            rule,
            path,
            flags,
            emit,
        } => {
            let cfg = flags.config()?;
            let d = load_derivation(&derivation)?;
            let dirs = parse_path(&path).map_err(|e| anyhow!("parsing path: {e}"))?;
            let ctx = ctx_at_path(&d.conclusion.lhs, &dirs)
                .map_err(|e| anyhow!("path does not fit the conclusion: {e}"))?;
            let out = match rule.as_str() {
                "sepL" => invert_left(&d, &ctx, LeafInversion::SepL, &cfg),
                "andL" => invert_left(&d, &ctx, LeafInversion::AndL, &cfg),
                "trueL" => invert_left(&d, &ctx, LeafInversion::TrueL, &cfg),
                "empL" => invert_left(&d, &ctx, LeafInversion::EmpL, &cfg),
                "boxIdemp" => {
                    let content = subtree_at(&d.conclusion.lhs, &dirs)
                        .map_err(|e| anyhow!("path does not fit the conclusion: {e}"))?;
                    let delta = unbox_bunch(content)
                        .and_then(|once| unbox_bunch(&once))
                        .ok_or_else(|| anyhow!("position is not a doubly boxed bunch"))?;
                    box_idemp_inv(&d, &ctx, &delta, &cfg)
                }
                "wandR" => invert_wand_r(&d, &cfg),
                "implR" => invert_impl_r(&d, &cfg),
                other => return Err(anyhow!("unknown inversion {other:?}")),
            };
            match out {
                Ok(t) => {
                    let json = derivation_to_json(&t);
                    match emit {
                        Some(path) => std::fs::write(&path, json)
                            .with_context(|| format!("writing {}", path.display()))?,
                        None => println!("{json}"),
                    }
                    eprintln!("inverted: {}", t.conclusion);
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("inversion failed: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::ModelCheck {
            pcm,
            target,
            valuation,
            flags,
        } => {
            let cfg = flags.config()?;
            let text = std::fs::read_to_string(&pcm)
                .with_context(|| format!("reading PCM {}", pcm.display()))?;
            let alg = PowersetAlgebra::new(
                FinitePcm::parse(&text).map_err(|e| anyhow!("parsing PCM: {e}"))?,
            );
            let sequent = if Path::new(&target).exists() {
                let d = load_derivation(Path::new(&target))?;
                check_derivation(&d, &cfg).map_err(|e| anyhow!("derivation rejected: {e}"))?;
                for (i, rule) in cfg.struct_rules.rules.iter().enumerate() {
                    if !bunched::bterm::validates_rule(&alg, rule) {
                        eprintln!(
                            "note: the algebra does not validate rule {i} ({rule}); \
                             soundness is not guaranteed"
                        );
                    }
                }
                // evaluating is still meaningful; use the soundness path
                let vals = valuations(
                    &alg,
                    &d.conclusion.lhs.atoms(),
                    &d.conclusion.rhs.atoms(),
                    &valuation,
                )?;
                let mut failures = 0usize;
                for val in &vals {
                    if !soundness_check(&d, &cfg, &alg, val)
                        .map_err(|e| anyhow!("soundness check: {e}"))?
                    {
                        failures += 1;
                        eprintln!("fails under valuation {}", show_valuation(&alg, val));
                    }
                }
                println!(
                    "{} of {} valuations satisfy {}",
                    vals.len() - failures,
                    vals.len(),
                    d.conclusion
                );
                return Ok(if failures == 0 {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            } else {
                parse_sequent(&target).map_err(|e| anyhow!("parsing sequent: {e}"))?
            };
            let vals = valuations(&alg, &sequent.lhs.atoms(), &sequent.rhs.atoms(), &valuation)?;
            let mut failures = 0usize;
            for val in &vals {
                if !interp_sequent(&sequent, &alg, val).map_err(|e| anyhow!("{e}"))? {
                    failures += 1;
                    eprintln!("fails under valuation {}", show_valuation(&alg, val));
                }
            }
            println!(
                "{} of {} valuations satisfy {}",
                vals.len() - failures,
                vals.len(),
                sequent
            );
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::ClosureLab { pcm, basis } => {
            let text = std::fs::read_to_string(&pcm)
                .with_context(|| format!("reading PCM {}", pcm.display()))?;
            let alg = PowersetAlgebra::new(
                FinitePcm::parse(&text).map_err(|e| anyhow!("parsing PCM: {e}"))?,
            );
            let btext = std::fs::read_to_string(&basis)
                .with_context(|| format!("reading basis {}", basis.display()))?;
            let basis = Basis::parse(alg.clone(), &btext).map_err(|e| anyhow!("{e}"))?;
            let mc = MooreClosure::new(basis);
            println!("closed sets: {}", mc.closed_sets().len());
            for c in mc.closed_sets() {
                println!("  {}", alg.describe(*c));
            }
            let strong = mc.is_strong();
            println!("strong: {strong}");
            println!("exponential ideal: {}", mc.exponential_ideal());
            match build_closed_algebra(mc) {
                Ok(lifted) => {
                    let report = check_bi_axioms(&lifted);
                    println!("lifted algebra: {report}");
                    Ok(if report.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
                Err(refusal) => {
                    println!("construction refused: {refusal}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::CorpusRun { dir } => corpus_run(&dir),
    }
}

fn load_derivation(path: &Path) -> Result<bunched::calculus::Derivation> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading derivation {}", path.display()))?;
    derivation_from_json(&text).map_err(|e| anyhow!("loading derivation: {e}"))
}

/// Either the single valuation from a file, or every valuation of the
/// given atoms (bounded to keep enumeration sane).
fn valuations(
    alg: &PowersetAlgebra,
    lhs_atoms: &[Atom],
    rhs_atoms: &[Atom],
    file: &Option<PathBuf>,
) -> Result<Vec<Valuation<Mask>>> {
    let mut atoms: Vec<Atom> = lhs_atoms.to_vec();
    for a in rhs_atoms {
        if !atoms.contains(a) {
            atoms.push(a.clone());
        }
    }
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading valuation {}", path.display()))?;
        let val = parse_valuation(alg, &text)?;
        for a in &atoms {
            if !val.contains_key(a) {
                return Err(anyhow!("valuation does not cover atom {:?}", a.name()));
            }
        }
        return Ok(vec![val]);
    }
    let subsets = alg.elements();
    let total = subsets.len().checked_pow(atoms.len() as u32);
    match total {
        Some(n) if n <= 65536 => {}
        _ => {
            return Err(anyhow!(
                "too many valuations to enumerate ({} atoms over {} subsets); \
                 provide --valuation",
                atoms.len(),
                subsets.len()
            ))
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; atoms.len()];
    loop {
        out.push(
            atoms
                .iter()
                .zip(idx.iter())
                .map(|(a, i)| (a.clone(), subsets[*i]))
                .collect(),
        );
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < subsets.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if atoms.is_empty() {
            return Ok(out);
        }
    }
}

fn parse_valuation(alg: &PowersetAlgebra, text: &str) -> Result<Valuation<Mask>> {
    let mut out = Valuation::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, set) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("valuation line {}: expected `atom = elements`", i + 1))?;
        let atom = Atom::new(name.trim()).map_err(|e| anyhow!("valuation line {}: {e}", i + 1))?;
        let inner = set.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(inner);
        let mask = alg
            .parse_subset(inner)
            .map_err(|e| anyhow!("valuation line {}: {e}", i + 1))?;
        out.insert(atom, mask);
    }
    Ok(out)
}

fn show_valuation(alg: &PowersetAlgebra, val: &Valuation<Mask>) -> String {
    let parts: Vec<String> = val
        .iter()
        .map(|(a, m)| format!("{} = {}", a.name(), alg.describe(*m)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Deserialize)]
struct CorpusCase {
    name: String,
    expect: String,
    #[serde(default)]
    s4: bool,
    #[serde(default)]
    allow_cut: bool,
    #[serde(default)]
    rules: Option<String>,
    derivation: DerivationDoc,
}

fn corpus_run(dir: &Path) -> Result<ExitCode> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading corpus directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(anyhow!("no corpus cases in {}", dir.display()));
    }
    let mut passed = 0usize;
    let mut total = 0usize;
    for path in &paths {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let case: CorpusCase =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        total += 1;
        let mut cfg = CalculusConfig {
            s4_enabled: case.s4,
            cut_allowed: case.allow_cut,
            ..CalculusConfig::default()
        };
        if let Some(rules) = &case.rules {
            let (rs, _) =
                RuleSet::parse(rules).map_err(|e| anyhow!("{}: parsing rules: {e}", case.name))?;
            cfg.struct_rules = rs;
        }
        let outcome = case
            .derivation
            .resolve()
            .map_err(|e| e.to_string())
            .and_then(|d| check_derivation(&d, &cfg).map_err(|e| e.to_string()));
        let (ok, detail) = match (case.expect.as_str(), &outcome) {
            ("accept", Ok(())) => (true, String::new()),
            ("accept", Err(e)) => (false, format!(" (rejected: {e})")),
            ("reject", Err(_)) => (true, String::new()),
            ("reject", Ok(())) => (false, " (accepted, expected rejection)".into()),
            (other, _) => (false, format!(" (unknown expectation {other:?})")),
        };
        if ok {
            passed += 1;
            println!("PASS {}", case.name);
        } else {
            println!("FAIL {}{detail}", case.name);
        }
    }
    println!("{passed}/{total} cases pass");
    Ok(if passed == total {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
