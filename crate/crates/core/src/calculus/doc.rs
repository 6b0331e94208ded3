//! Derivation interchange documents.
//!
//! A derivation file is a JSON tree with `rule`, `conclusion` (sequent
//! text), optional `ctx` (a frame path such as `R,L;`), optional `env`
//! (variable instantiation for structural-rule extensions, bunch text per
//! variable), and `premises`. Contexts are stored as paths only; the
//! frames' siblings are reconstructed from the conclusion when loading.

use super::{Derivation, RuleName, RuleParams};
use crate::syntax::{ctx_at_path, format_path, parse_bunch, parse_path, parse_sequent};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("bad JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("node {at}: unknown rule {rule:?}")]
    UnknownRule { at: String, rule: String },
    #[error("node {at}: {msg}")]
    Node { at: String, msg: String },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DerivationDoc {
    pub rule: String,
    pub conclusion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ctx: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationDoc>,
}

impl DerivationDoc {
    pub fn from_derivation(d: &Derivation) -> DerivationDoc {
        let (ctx, env) = match &d.params {
            RuleParams::None => (None, None),
            RuleParams::Ctx(ctx) => (Some(format_path(&ctx.path())), None),
            RuleParams::StructExt { ctx, env } => (
                Some(format_path(&ctx.path())),
                Some(
                    env.iter()
                        .map(|(v, b)| (format!("x{v}"), b.to_string()))
                        .collect(),
                ),
            ),
        };
        DerivationDoc {
            rule: d.rule.token(),
            conclusion: d.conclusion.to_string(),
            ctx,
            env,
            premises: d
                .premises
                .iter()
                .map(DerivationDoc::from_derivation)
                .collect(),
        }
    }

    /// Rebuilds the typed derivation; contexts are resolved against the
    /// conclusion bunch, so a path that does not fit is an error.
    pub fn resolve(&self) -> Result<Derivation, DocError> {
        self.resolve_at("<root>")
    }

    fn resolve_at(&self, at: &str) -> Result<Derivation, DocError> {
        let node = |msg: String| DocError::Node {
            at: at.to_string(),
            msg,
        };
        let rule = RuleName::parse_token(&self.rule).ok_or_else(|| DocError::UnknownRule {
            at: at.to_string(),
            rule: self.rule.clone(),
        })?;
        let conclusion = parse_sequent(&self.conclusion).map_err(|e| node(e.to_string()))?;
        let ctx = self
            .ctx
            .as_ref()
            .map(|text| {
                let path = parse_path(text).map_err(|e| node(e.to_string()))?;
                ctx_at_path(&conclusion.lhs, &path).map_err(|e| node(e.to_string()))
            })
            .transpose()?;
        let env = self
            .env
            .as_ref()
            .map(|m| {
                m.iter()
                    .map(|(k, v)| {
                        let idx: u32 = k
                            .strip_prefix('x')
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| node(format!("bad variable name {k:?}")))?;
                        let bunch = parse_bunch(v).map_err(|e| node(e.to_string()))?;
                        Ok((idx, bunch))
                    })
                    .collect::<Result<BTreeMap<_, _>, DocError>>()
            })
            .transpose()?;
        let params = match (rule, ctx, env) {
            (RuleName::StructExt(_), Some(ctx), env) => RuleParams::StructExt {
                ctx,
                env: env.unwrap_or_default(),
            },
            (_, Some(ctx), None) => RuleParams::Ctx(ctx),
            (_, None, None) => RuleParams::None,
            _ => return Err(node("env given for a rule that takes none".into())),
        };
        let premises = self
            .premises
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let child_at = if at == "<root>" {
                    i.to_string()
                } else {
                    format!("{at}.{i}")
                };
                p.resolve_at(&child_at)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation::new(rule, conclusion, params, premises))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("doc serializes")
    }

    pub fn from_json(text: &str) -> Result<DerivationDoc, DocError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Serializes a derivation to its JSON document form.
pub fn derivation_to_json(d: &Derivation) -> String {
    DerivationDoc::from_derivation(d).to_json()
}

/// Parses a JSON document and rebuilds the typed derivation.
pub fn derivation_from_json(text: &str) -> Result<Derivation, DocError> {
    DerivationDoc::from_json(text)?.resolve()
}
