//! JSON-lines and CSV projections of classifications.

use serde::Serialize;
use serde_json::Value;

use super::decide::{PairClassification, Status};
use crate::error::{Error, Result};

/// Column names of the CSV projection.
pub const CSV_HEADER: [&str; 11] = ["q", "n", "status", "rule", "delta", "Delta", "r", "s", "W_ell", "Wq_g", "millis"];

/// One line of JSON with keys sorted at every level.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is ordered, so a round trip through Value sorts keys
    let v: Value = serde_json::to_value(value).map_err(|e| Error::invalid(e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| Error::invalid(e.to_string()))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::ProvedInB => "ProvedInB",
        Status::ProvedNotInB => "ProvedNotInB",
        Status::Unresolved => "Unresolved",
        Status::Indeterminate => "Indeterminate",
    }
}

/// CSV fields in `CSV_HEADER` order; empty where a value does not apply.
pub fn csv_record(c: &PairClassification, millis: u128) -> Vec<String> {
    let sieve = c.sieve();
    let opt = |v: Option<String>| v.unwrap_or_default();
    vec![
        c.q.to_string(),
        c.n.to_string(),
        status_name(c.status).to_string(),
        c.rule.as_ref().map(|r| r.name().to_string()).unwrap_or_default(),
        opt(sieve.map(|s| format!("{:.6}", s.delta))),
        opt(sieve.and_then(|s| s.Delta).map(|d| format!("{d:.6}"))),
        opt(sieve.map(|s| s.r.to_string())),
        opt(sieve.map(|s| s.s.to_string())),
        opt(sieve.map(|s| s.W_ell.clone())),
        opt(sieve.map(|s| s.Wq_g.clone())),
        millis.to_string(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{bounded_strategy, classify_pair, ClassifyOptions};

    #[test]
    fn sorted_keys() {
        let c = classify_pair(23, 22, 3, 2, &bounded_strategy(), &ClassifyOptions::default());
        let line = to_json_line(&c).unwrap();
        let ci = line.find("\"certificate\"").unwrap();
        let ni = line.find("\"n\"").unwrap();
        let qi = line.find("\"q\"").unwrap();
        assert!(ci < ni && ni < qi);
        let rec = csv_record(&c, 0);
        assert_eq!(rec.len(), CSV_HEADER.len());
        assert_eq!(rec[2], "ProvedInB");
        assert_eq!(rec[6], "3");
    }
}
