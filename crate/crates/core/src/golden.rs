//! Pinned reference values.
//!
//! Each fixture file under `golden/` is a JSON array of `{"query", "value", "oracle"}` records.
//! [`regenerate`] recomputes every file from [`crate::oracle`] alone.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::oracle;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub query: Value,
    pub value: Value,
    pub oracle: String,
}

pub const FIXTURES: [&str; 4] = ["el_index", "sl_order", "abelianization", "hensel"];

const EMBEDDED: [(&str, &str); 4] = [
    ("el_index", include_str!("../golden/el_index.json")),
    ("sl_order", include_str!("../golden/sl_order.json")),
    ("abelianization", include_str!("../golden/abelianization.json")),
    ("hensel", include_str!("../golden/hensel.json")),
];

/// Fixture directory of the source tree this crate was built from.
pub fn source_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

/// The fixtures compiled into this build.
pub fn embedded(name: &str) -> Vec<GoldenEntry> {
    let text = EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("unknown fixture {name}"))
        .1;
    serde_json::from_str(text).expect("embedded fixture parses")
}

pub fn lookup<'a>(entries: &'a [GoldenEntry], query: &Value) -> Option<&'a GoldenEntry> {
    entries.iter().find(|e| &e.query == query)
}

pub const EL_INDEX_QUERIES: [(usize, u64, u32, u32); 6] =
    [(2, 2, 1, 3), (2, 3, 1, 2), (2, 2, 1, 2), (3, 2, 1, 2), (2, 2, 2, 3), (2, 5, 1, 2)];

pub const SL_ORDER_QUERIES: [(usize, u64, u32); 9] =
    [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 3, 1), (2, 3, 2), (2, 5, 1), (2, 5, 2), (3, 2, 1), (3, 3, 1)];

pub const ABELIANIZATION_QUERIES: [(usize, u64, u32); 10] = [
    (2, 2, 1),
    (2, 3, 1),
    (2, 2, 2),
    (2, 3, 2),
    (2, 2, 3),
    (2, 5, 1),
    (2, 7, 1),
    (2, 5, 2),
    (3, 2, 1),
    (3, 3, 1),
];

/// `(coefficients, start, p, precision)` for lifting problems small enough to search exhaustively.
pub const HENSEL_QUERIES: [(&[i64], u64, u64, u32); 6] = [
    (&[-1, 3], 3, 2, 4),
    (&[31, 0, 0, 0, 1], 1, 2, 16),
    (&[-2, 0, 1], 3, 7, 5),
    (&[4, 0, 0, 0, 1], 4, 5, 6),
    (&[2, 0, 0, 0, 1], 1, 3, 10),
    (&[-17, 0, 1], 1, 2, 12),
];

pub fn el_index_query(n: usize, p: u64, k: u32, m: u32) -> Value {
    json!({"n": n, "p": p, "k": k, "m": m})
}

pub fn group_query(n: usize, p: u64, m: u32) -> Value {
    json!({"n": n, "p": p, "m": m})
}

pub fn hensel_query(coeffs: &[i64], a: u64, p: u64, precision: u32) -> Value {
    json!({"poly": coeffs, "a": a, "p": p, "precision": precision})
}

/// Recomputes one fixture from the brute-force oracles.
pub fn regenerate_one(name: &str) -> Vec<GoldenEntry> {
    match name {
        "el_index" => EL_INDEX_QUERIES
            .iter()
            .map(|&(n, p, k, m)| GoldenEntry {
                query: el_index_query(n, p, k, m),
                value: json!(oracle::el_index(n, p, k, m)),
                oracle: "naive-closure-quotient".into(),
            })
            .collect(),
        "sl_order" => SL_ORDER_QUERIES
            .iter()
            .map(|&(n, p, m)| GoldenEntry {
                query: group_query(n, p, m),
                value: json!(oracle::sl_order_by_count(n, p.pow(m))),
                oracle: "determinant-count".into(),
            })
            .collect(),
        "abelianization" => ABELIANIZATION_QUERIES
            .iter()
            .map(|&(n, p, m)| {
                let (order, derived, factors) = oracle::sl_abelianization(n, p, m);
                GoldenEntry {
                    query: group_query(n, p, m),
                    value: json!({
                        "group_order": order,
                        "derived_order": derived,
                        "invariant_factors": factors,
                    }),
                    oracle: "naive-closure-commutator".into(),
                }
            })
            .collect(),
        "hensel" => HENSEL_QUERIES
            .iter()
            .map(|&(coeffs, a, p, n)| GoldenEntry {
                query: hensel_query(coeffs, a, p, n),
                value: json!(oracle::roots_in_lift_class(coeffs, a, p, n)),
                oracle: "exhaustive-residue-search".into(),
            })
            .collect(),
        other => panic!("unknown fixture {other}"),
    }
}

pub fn regenerate() -> BTreeMap<String, Vec<GoldenEntry>> {
    FIXTURES
        .iter()
        .map(|n| (n.to_string(), regenerate_one(n)))
        .collect()
}

/// Writes every fixture into `dir` as pretty-printed JSON; returns the paths written.
pub fn write_all(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, entries) in regenerate() {
        let path = dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(&entries).expect("serializable");
        text.push('\n');
        std::fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}
