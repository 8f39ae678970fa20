use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Number, Value};
use smithcube::reduction::SmithGroupSummary;
use smithcube::InvariantFactors;

/// An exact JSON number from any integer's decimal form.
pub fn num(v: impl Display) -> Value {
    let s = v.to_string();
    Value::Number(s.parse::<Number>().unwrap_or_else(|_| panic!("{s} is not an integer")))
}

pub fn pairs<'a, K: Display + 'a, V: Display + 'a>(
    items: impl IntoIterator<Item = (K, V)>,
    key: &str,
    val: &str,
) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|(k, v)| {
                let mut obj = Map::new();
                obj.insert(key.to_string(), num(k));
                obj.insert(val.to_string(), num(v));
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn entries(map: &BTreeMap<BigUint, BigUint>) -> Value {
    pairs(map.iter(), "value", "multiplicity")
}

pub fn factors(inv: &InvariantFactors) -> Value {
    pairs(
        inv.runs().iter().map(|(v, c): &(BigInt, BigUint)| (v, c)),
        "value",
        "multiplicity",
    )
}

pub fn summary_brief(method: &str, s: &SmithGroupSummary) -> Value {
    json!({
        "method": method,
        "free_rank": num(&s.free_rank),
        "invariant_factors": factors(&s.invariant_factors),
    })
}

/// One JSON document per line, keys sorted, no floats; parsing and
/// re-serializing gives the same bytes.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values are serializable");
    s.push('\n');
    s
}

/// `value,multiplicity` rows; the free rank is listed as value 0.
pub fn csv(s: &SmithGroupSummary) -> String {
    let mut out = String::from("value,multiplicity\n");
    if s.free_rank != BigUint::default() {
        out.push_str(&format!("0,{}\n", s.free_rank));
    }
    for (v, c) in &s.nonzero {
        out.push_str(&format!("{v},{c}\n"));
    }
    out
}
