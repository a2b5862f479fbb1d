//! JSON encoding of derivations.
//!
//! A node is `{"rule", "conclusion", "params", "premises"}` where the
//! conclusion is a sequent string and `params` holds any of `principal`,
//! `split`, `u`, `y`, `pi` and `k`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Derivation, Fm, Params, Rule, Sequent};
use crate::error::Code;
use crate::syntax::{SyntaxError, Var};

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    principal: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
}

impl ParamsJson {
    fn is_empty(&self) -> bool {
        self.principal.is_none() && self.split.is_none() && self.u.is_none() && self.y.is_none() && self.pi.is_none() && self.k.is_none()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    rule: String,
    conclusion: String,
    #[serde(default, skip_serializing_if = "ParamsJson::is_empty")]
    params: ParamsJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<NodeJson>,
}

/// A derivation file that could not be decoded.
#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed derivation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad formula at node {path}: {source}")]
    Formula { path: String, source: SyntaxError },
    #[error("bad node {path}: {msg}")]
    Schema { path: String, msg: String },
}

impl DecodeError {
    pub fn code(&self) -> Code {
        match self {
            DecodeError::Formula { source, .. } => source.code(),
            _ => Code::Schema,
        }
    }
}

fn path_str(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

fn encode<F: Fm>(d: &Derivation<F>) -> NodeJson {
    let p = &d.params;
    NodeJson {
        rule: d.rule.name().into(),
        conclusion: d.conclusion.to_string(),
        params: ParamsJson {
            principal: p.principal,
            split: p.split.clone(),
            u: p.u.map(|v| v.to_string()),
            y: p.y.map(|v| v.to_string()),
            pi: p.pi.as_ref().map(|pi| pi.iter().map(ToString::to_string).collect()),
            k: match d.rule {
                Rule::Contract(k) => Some(k),
                _ => None,
            },
        },
        premises: d.premises.iter().map(encode).collect(),
    }
}

fn decode<F: Fm>(n: NodeJson, path: &mut Vec<usize>) -> Result<Derivation<F>, DecodeError> {
    let schema = |path: &[usize], msg: String| DecodeError::Schema { path: path_str(path), msg };
    let formula = |path: &[usize], source| DecodeError::Formula { path: path_str(path), source };
    let rule = Rule::from_name(&n.rule, n.params.k).ok_or_else(|| {
        if n.rule == "contract" {
            schema(path, "contract needs the exponent `k`".into())
        } else {
            schema(path, format!("unknown rule `{}`", n.rule))
        }
    })?;
    let var = |s: Option<String>| -> Result<Option<Var>, DecodeError> {
        s.map(|s| s.parse::<Var>().map_err(|_| schema(path, format!("bad variable `{s}`")))).transpose()
    };
    let u = var(n.params.u)?;
    let y = var(n.params.y)?;
    let conclusion = Sequent::parse(&n.conclusion).map_err(|e| formula(path, e))?;
    let pi = match n.params.pi {
        None => None,
        Some(list) => Some(list.iter().map(|s| F::parse(s)).collect::<Result<Vec<_>, _>>().map_err(|e| formula(path, e))?),
    };
    let mut premises = Vec::with_capacity(n.premises.len());
    for (i, p) in n.premises.into_iter().enumerate() {
        path.push(i);
        premises.push(decode(p, path)?);
        path.pop();
    }
    let params = Params { principal: n.params.principal, split: n.params.split, u, y, pi };
    Ok(Derivation { rule, conclusion, params, premises })
}

/// Decodes a derivation from a JSON value.
pub fn from_json<F: Fm>(v: serde_json::Value) -> Result<Derivation<F>, DecodeError> {
    decode(serde_json::from_value(v)?, &mut Vec::new())
}

/// Decodes a derivation from JSON text.
pub fn from_json_str<F: Fm>(text: &str) -> Result<Derivation<F>, DecodeError> {
    decode(serde_json::from_str(text)?, &mut Vec::new())
}

/// Encodes a derivation as a JSON value.
pub fn to_json<F: Fm>(d: &Derivation<F>) -> serde_json::Value {
    serde_json::to_value(encode(d)).expect("derivation JSON is always serializable")
}

/// Encodes a derivation as pretty-printed JSON text.
pub fn to_json_string<F: Fm>(d: &Derivation<F>) -> String {
    serde_json::to_string_pretty(&encode(d)).expect("derivation JSON is always serializable")
}
