//! File formats: match states, sequence logs, DOT export and run manifests.
//!
//! Canonical JSON: match-state keys sorted alphabetically (other records keep
//! their declared field order), two-space indentation, a trailing newline,
//! and numbers in the shortest form that parses back to the same `f64`.
//! Parsing then serialising a canonical file is the identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::network::{DecisionNetwork, PlayerId, TEAM_SIZE};
use crate::sequence::PossessionSequence;
use crate::state::{MatchState, Pitch, Placement};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] crate::error::ModelError),
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key)
        .ok_or_else(|| invalid(format!("{path}.{key}"), "missing field"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object()
        .ok_or_else(|| invalid(path, "expected an object"))
}

fn as_number(v: &Value, path: &str) -> Result<f64, IoError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| invalid(path, "expected a number"))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, known: &[&str]) -> Result<(), IoError> {
    match obj.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(invalid(format!("{path}.{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn placement(v: &Value, path: &str, pitch: &Pitch, keys: &[&str]) -> Result<Placement, IoError> {
    let obj = as_object(v, path)?;
    reject_unknown(obj, path, keys)?;
    let x = as_number(field(obj, path, "x")?, &format!("{path}.x"))?;
    let y = as_number(field(obj, path, "y")?, &format!("{path}.y"))?;
    let outside = match obj.get("outside") {
        None => false,
        Some(b) => b
            .as_bool()
            .ok_or_else(|| invalid(format!("{path}.outside"), "expected a boolean"))?,
    };
    if !outside {
        if !(0.0..=pitch.length).contains(&x) {
            return Err(invalid(
                format!("{path}.x"),
                format!("{x} outside [0, {}]", pitch.length),
            ));
        }
        if !(0.0..=pitch.width).contains(&y) {
            return Err(invalid(
                format!("{path}.y"),
                format!("{y} outside [0, {}]", pitch.width),
            ));
        }
    }
    Ok(Placement {
        pos: crate::state::Point::new(x, y),
        outside,
    })
}

/// Parses and validates a match state. Errors name the first violated
/// constraint by its JSON path, e.g. `$.team[3].x`.
pub fn parse_match_state(bytes: &[u8]) -> Result<MatchState, IoError> {
    let root: Value = serde_json::from_slice(bytes)?;
    let obj = as_object(&root, "$")?;
    reject_unknown(obj, "$", &["pitch", "team", "opponents", "holder"])?;

    let pobj = as_object(field(obj, "$", "pitch")?, "$.pitch")?;
    reject_unknown(pobj, "$.pitch", &["length", "width"])?;
    let length = as_number(field(pobj, "$.pitch", "length")?, "$.pitch.length")?;
    let width = as_number(field(pobj, "$.pitch", "width")?, "$.pitch.width")?;
    let pitch = Pitch::new(length, width).map_err(|e| invalid("$.pitch", e.to_string()))?;

    let team_arr = field(obj, "$", "team")?
        .as_array()
        .ok_or_else(|| invalid("$.team", "expected an array"))?;
    if team_arr.len() != usize::from(TEAM_SIZE) {
        return Err(invalid(
            "$.team",
            format!("expected 11 players, found {}", team_arr.len()),
        ));
    }
    let mut team = BTreeMap::new();
    for (k, v) in team_arr.iter().enumerate() {
        let path = format!("$.team[{k}]");
        let pl = placement(v, &path, &pitch, &["id", "x", "y", "outside"])?;
        let raw = field(as_object(v, &path)?, &path, "id")?;
        let id = raw
            .as_i64()
            .ok_or_else(|| invalid(format!("{path}.id"), "expected an integer"))
            .and_then(|i| {
                PlayerId::try_from(i).map_err(|e| invalid(format!("{path}.id"), e.to_string()))
            })?;
        if team.insert(id, pl).is_some() {
            return Err(invalid(
                format!("{path}.id"),
                format!("duplicate id {}", id.index()),
            ));
        }
    }

    let opp_arr = field(obj, "$", "opponents")?
        .as_array()
        .ok_or_else(|| invalid("$.opponents", "expected an array"))?;
    if opp_arr.len() != usize::from(TEAM_SIZE) {
        return Err(invalid(
            "$.opponents",
            format!("expected 11 players, found {}", opp_arr.len()),
        ));
    }
    let opponents = opp_arr
        .iter()
        .enumerate()
        .map(|(k, v)| {
            placement(
                v,
                &format!("$.opponents[{k}]"),
                &pitch,
                &["x", "y", "outside"],
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let holder = field(obj, "$", "holder")?
        .as_i64()
        .ok_or_else(|| invalid("$.holder", "expected an integer"))
        .and_then(|i| PlayerId::try_from(i).map_err(|e| invalid("$.holder", e.to_string())))?;
    match team.get(&holder) {
        None => return Err(invalid("$.holder", "holder id not present in team")),
        Some(p) if p.outside => return Err(invalid("$.holder", "holder is outside")),
        _ => {}
    }
    MatchState::new(pitch, team, opponents, holder).map_err(|e| invalid("$", e.to_string()))
}

fn placement_value(mut base: Map<String, Value>, pl: &Placement) -> Value {
    base.insert("x".into(), json!(pl.pos.x));
    base.insert("y".into(), json!(pl.pos.y));
    if pl.outside {
        base.insert("outside".into(), Value::Bool(true));
    }
    Value::Object(base)
}

/// Canonical JSON of a match state: team sorted by id.
pub fn match_state_to_value(state: &MatchState) -> Value {
    let team: Vec<Value> = state
        .team()
        .iter()
        .map(|(id, pl)| {
            let mut m = Map::new();
            m.insert("id".into(), json!(id.index()));
            placement_value(m, pl)
        })
        .collect();
    let opponents: Vec<Value> = state
        .opponents()
        .iter()
        .map(|pl| placement_value(Map::new(), pl))
        .collect();
    json!({
        "pitch": {"length": state.pitch().length, "width": state.pitch().width},
        "team": team,
        "opponents": opponents,
        "holder": state.holder().index(),
    })
}

pub fn serialize_match_state(state: &MatchState) -> String {
    to_canonical_string(&match_state_to_value(state))
}

/// Pretty JSON with a trailing newline. Relies on serde_json's
/// `preserve_order` being off, so keys of `Value` maps come out sorted;
/// struct-derived values keep declaration order.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

/// Reads either one sequence (array of steps) or an array of sequences.
pub fn parse_sequence_log(bytes: &[u8]) -> Result<Vec<PossessionSequence>, IoError> {
    let root: Value = serde_json::from_slice(bytes)?;
    let arr = root
        .as_array()
        .ok_or_else(|| invalid("$", "expected an array"))?;
    if arr.first().is_some_and(Value::is_array) {
        arr.iter()
            .enumerate()
            .map(|(k, v)| {
                PossessionSequence::deserialize(v)
                    .map_err(|e| invalid(format!("$[{k}]"), e.to_string()))
            })
            .collect()
    } else {
        PossessionSequence::deserialize(&root)
            .map(|q| vec![q])
            .map_err(|e| invalid("$", e.to_string()))
    }
}

/// A single sequence is written bare; several as an array of sequences.
pub fn serialize_sequence_log(seqs: &[PossessionSequence]) -> String {
    match seqs {
        [one] => to_canonical_string(one),
        many => to_canonical_string(many),
    }
}

/// Renders a 4-network as an undirected DOT graph: one node per player, the
/// holder filled, each edge labelled `(s, tau, p, r)`.
pub fn export_network_dot(network: &DecisionNetwork) -> String {
    let holder = network.holder();
    let mut out = String::new();
    let _ = writeln!(out, "graph N{} {{", holder.index());
    let _ = writeln!(out, "  node [shape=circle];");
    for id in PlayerId::all() {
        if id == holder {
            let _ = writeln!(
                out,
                "  {id} [label=\"{id}\", style=filled, fillcolor=gold];"
            );
        } else {
            let _ = writeln!(out, "  {id} [label=\"{id}\"];");
        }
    }
    for (j, e) in network.edges() {
        let _ = writeln!(
            out,
            "  {holder} -- {j} [label=\"({:.3}, {:.3}, {:.3}, {})\"];",
            e.s(),
            e.tau(),
            e.p(),
            e.r()
        );
    }
    out.push_str("}\n");
    out
}

/// Everything needed to regenerate an output artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    /// Arguments that determine the output (paths excluded).
    pub args: BTreeMap<String, String>,
    pub config: crate::config::Config,
    /// sha256 of each input file, keyed by its path as given.
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, config: crate::config::Config, seed: Option<u64>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args: BTreeMap::new(),
            config,
            inputs: BTreeMap::new(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(mut self, path: &str, bytes: &[u8]) -> Self {
        self.inputs.insert(path.to_string(), sha256_hex(bytes));
        self
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, IoError> {
    std::fs::read(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let err = |source| IoError::File {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
