//! JSON and Graphviz DOT rendering of engine results.
//!
//! All output is canonically ordered: object keys are alphabetical (the
//! serde_json map is a BTreeMap) and every embedded object uses the
//! canonical DSL printers, so identical inputs produce byte-identical
//! output.

use eqlat::galois::Lattice;
use eqlat::oracle::OracleVerdict;
use eqlat::{Downset, Grid, HFam};
use serde_json::{json, Value};

use crate::dsl;

pub fn downset_json(d: &Downset) -> Value {
    let maximal: Vec<String> = d
        .maximal()
        .iter()
        .map(|&m| dsl::member_str(d.grid(), m))
        .collect();
    json!({
        "kind": "downset",
        "maximal": maximal,
        "text": dsl::downset_str(d),
    })
}

pub fn efam_json(h: &HFam) -> Value {
    match h {
        HFam::Empty => json!({ "kind": "empty-family", "text": "empty" }),
        HFam::Full => json!({ "kind": "all-closed-subsets", "text": "full" }),
        HFam::Downset(d) => downset_json(d),
        HFam::ClosedSubsets(s) => json!({
            "kind": "closed-subsets",
            "of": dsl::set_str(s),
            "text": dsl::efam_str(h),
        }),
        HFam::SeparatedUnion(parts) => {
            let parts: Vec<String> = parts.iter().map(dsl::set_str).collect();
            json!({
                "kind": "separated-union",
                "parts": parts,
                "text": dsl::efam_str(h),
            })
        }
    }
}

pub fn lattice_json(l: &Lattice) -> Value {
    let elements: Vec<Value> = l
        .elements
        .iter()
        .enumerate()
        .map(|(i, d)| {
            json!({
                "index": i,
                "text": dsl::downset_str(d),
            })
        })
        .collect();
    let edges: Vec<Value> = l.edges.iter().map(|&(a, b)| json!([a, b])).collect();
    json!({
        "count": l.elements.len(),
        "edges": edges,
        "elements": elements,
        "greatest": l.greatest,
        "grid": dsl::grid_str(&l.grid),
        "least": l.least,
    })
}

/// The Hasse diagram of a fixed-point lattice, edges pointing upward.
pub fn lattice_dot(l: &Lattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
    for (i, d) in l.elements.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{}\"];\n", dsl::downset_str(d)));
    }
    for &(a, b) in &l.edges {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn verdict_json(v: &OracleVerdict, grid: &Grid) -> Value {
    let certificates: serde_json::Map<String, Value> = v
        .certificates
        .iter()
        .map(|(&mask, f)| {
            (dsl::member_str(grid, mask), Value::String(dsl::fn_str(f)))
        })
        .collect();
    json!({
        "certificates": certificates,
        "theorem": downset_json(&v.theorem),
        "upper": downset_json(&v.upper),
        "verdict": if v.pass { "PASS" } else { "FAIL" },
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON rendering cannot fail");
    s.push('\n');
    s
}
