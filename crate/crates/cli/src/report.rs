//! Report assembly, serialization and the evidence checker.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const BASE_FIELD_CAVEAT: &str = "computed over non-closed base field";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: String,
    pub input_hash: String,
    pub characteristic: u64,
    pub dim: usize,
    pub order: Option<u32>,
    pub evidence: Value,
    pub verdict: String,
    pub caveats: Vec<String>,
    pub ms: u64,
}

impl Report {
    /// `true` when `--verify` ran and some cross-check disagreed.
    pub fn verification_failed(&self) -> bool {
        self.evidence
            .get("verify")
            .and_then(|v| v.get("agrees"))
            .and_then(Value::as_bool)
            == Some(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Text => render_text(report).into_bytes(),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("task:           {}\n", r.task));
    out.push_str(&format!("verdict:        {}\n", r.verdict));
    out.push_str(&format!("characteristic: {}\n", r.characteristic));
    out.push_str(&format!("dim:            {}\n", r.dim));
    match r.order {
        Some(n) => out.push_str(&format!("order:          {n}\n")),
        None => out.push_str("order:          -\n"),
    }
    out.push_str(&format!("input_hash:     {}\n", r.input_hash));
    out.push_str("evidence:\n");
    render_value(&r.evidence, 1, &mut out);
    out.push_str("caveats:\n");
    for c in &r.caveats {
        out.push_str(&format!("  - {c}\n"));
    }
    out.push_str(&format!("ms:             {}\n", r.ms));
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar_text).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

fn field<'a>(ev: &'a Value, key: &str) -> Result<&'a Value, String> {
    ev.get(key).ok_or_else(|| format!("evidence lacks '{key}'"))
}

fn uint(ev: &Value, key: &str) -> Result<u64, String> {
    field(ev, key)?
        .as_u64()
        .ok_or_else(|| format!("'{key}' is not an integer"))
}

/// Recomputes the verdict of `report` from its evidence alone.
pub fn verdict_from_evidence(report: &Report) -> Result<String, String> {
    let ev = &report.evidence;
    let v = match report.task.as_str() {
        "nash-check" => {
            let free = uint(ev, "free_rank")?;
            let expected = uint(ev, "expected_rank")?;
            let principal = ev
                .get("minor_ideal")
                .filter(|m| !m.is_null())
                .map(|m| uint(m, "local_generators").map(|c| c == 1))
                .transpose()?
                .unwrap_or(false);
            let hyper = field(ev, "hypersurface")?.as_bool() == Some(true);
            if free < expected {
                "NOT_ISO"
            } else if hyper && principal {
                "ISO_CERTIFIED"
            } else {
                "NO_OBSTRUCTION"
            }
        }
        "diffpower" => {
            let codim = uint(ev, "codim")?;
            let rank = uint(field(ev, "pairing")?, "rank")?;
            let staircase = field(ev, "standard_monomials")?.as_array().map_or(0, Vec::len) as u64;
            if codim == rank && codim == staircase {
                "PATHS_AGREE"
            } else {
                "PATHS_DISAGREE"
            }
        }
        "oracle" => {
            let jets = uint(ev, "jets_dim")?;
            if jets == uint(ev, "diff_power_codim")? && jets == uint(ev, "pairing_rank")? {
                "PATHS_AGREE"
            } else {
                "PATHS_DISAGREE"
            }
        }
        "pparts" => {
            let tor = field(ev, "torsion")?;
            if field(tor, "generators")?.as_array().is_some_and(Vec::is_empty) {
                "TORSION_FREE"
            } else {
                "HAS_TORSION"
            }
        }
        "core-chain" => {
            let chain = field(ev, "chain")?.as_array().ok_or("'chain' is not a list")?;
            let codims: Vec<u64> = chain.iter().map(|e| uint(e, "codim")).collect::<Result<_, _>>()?;
            match codims.as_slice() {
                [.., a, b] if a == b => "CORE_STABILIZED",
                _ => "CORE_ZERO_LIKELY",
            }
        }
        "fpure" => {
            if field(ev, "witness")?.is_null() {
                "NOT_F_PURE"
            } else {
                "F_PURE"
            }
        }
        "kunz" => {
            if uint(ev, "fiber_dim")? == uint(ev, "expected_rank")? {
                "REGULAR"
            } else {
                "SINGULAR"
            }
        }
        "smooth" => {
            if uint(ev, "jacobian_rank")? == uint(ev, "codim")? {
                "SMOOTH"
            } else {
                "SINGULAR"
            }
        }
        "quotient" => {
            if uint(ev, "codim")? < uint(ev, "bound")? {
                "NOT_ISO"
            } else {
                "NO_OBSTRUCTION"
            }
        }
        other => return Err(format!("unknown task '{other}'")),
    };
    Ok(v.to_string())
}

/// Checks the fixed top-level layout of a serialized report.
pub fn check_schema(doc: &Value) -> Result<(), String> {
    const KEYS: [&str; 9] = [
        "task",
        "input_hash",
        "characteristic",
        "dim",
        "order",
        "evidence",
        "verdict",
        "caveats",
        "ms",
    ];
    let map = doc.as_object().ok_or("a report is a JSON object")?;
    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
    let mut want = KEYS.to_vec();
    want.sort_unstable();
    if keys != want {
        return Err(format!("report keys {keys:?} differ from {KEYS:?}"));
    }
    let hash = doc["input_hash"].as_str().ok_or("input_hash is a string")?;
    if hash.len() != 64 || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err("input_hash is not a sha256 digest".into());
    }
    for k in ["characteristic", "dim", "ms"] {
        doc[k].as_u64().ok_or(format!("{k} is not an unsigned integer"))?;
    }
    if !(doc["order"].is_null() || doc["order"].is_u64()) {
        return Err("order is neither null nor an integer".into());
    }
    if !doc["evidence"].is_object() {
        return Err("evidence is not an object".into());
    }
    doc["verdict"].as_str().ok_or("verdict is not a string")?;
    let caveats = doc["caveats"].as_array().ok_or("caveats is not a list")?;
    if !caveats.iter().all(Value::is_string) {
        return Err("caveats must be strings".into());
    }
    Ok(())
}
