//! Versioned JSON reports.
//!
//! Reports contain no timestamps or host data, and every map is a
//! `BTreeMap`, so equal inputs serialize to equal bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{usage, Result};

pub const REPORT_VERSION: &str = "coarsehyp-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub constants: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Verdict { name: name.into(), pass, constants: BTreeMap::new(), witnesses: Vec::new() }
    }

    pub fn constant(mut self, key: &str, value: impl Serialize) -> Self {
        self.constants.insert(key.to_string(), to_value(value));
        self
    }

    pub fn witness(mut self, value: impl Serialize) -> Self {
        self.witnesses.push(to_value(value));
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub verdicts: Vec<Verdict>,
    pub version: String,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: impl Serialize) -> Self {
        Report { suite: suite.into(), config: to_value(config), verdicts: Vec::new(), version: REPORT_VERSION.into() }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| !v.pass).collect()
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Concatenates verdicts as `suite/name`; configs are kept per suite.
    pub fn merge(reports: &[Report]) -> Result<Report> {
        if reports.is_empty() {
            return Err(usage("nothing to merge"));
        }
        if let Some(r) = reports.iter().find(|r| r.version != REPORT_VERSION) {
            return Err(usage(format!("cannot merge report version {}", r.version)));
        }
        let config: BTreeMap<String, Value> = reports.iter().map(|r| (r.suite.clone(), r.config.clone())).collect();
        let mut out = Report::new("merged", config);
        for r in reports {
            for v in &r.verdicts {
                let mut v = v.clone();
                v.name = format!("{}/{}", r.suite, v.name);
                out.push(v);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_field_order() {
        let mut r = Report::new("s", serde_json::json!({"depth": 3}));
        r.push(Verdict::new("v", true).constant("b", 2).constant("a", 1.5).witness([1, 2]));
        let json = r.to_json();
        let pos = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("suite") < pos("config") && pos("config") < pos("verdicts") && pos("verdicts") < pos("version"));
        assert!(pos("a") < pos("b"));
        assert_eq!(Report::from_json(&json).unwrap(), r);
    }

    #[test]
    fn merge_prefixes_names() {
        let mut a = Report::new("a", ());
        a.push(Verdict::new("x", true));
        let mut b = Report::new("b", ());
        b.push(Verdict::new("y", false));
        let m = Report::merge(&[a, b]).unwrap();
        assert_eq!(m.verdicts.iter().map(|v| v.name.as_str()).collect::<Vec<_>>(), ["a/x", "b/y"]);
        assert!(!m.pass());
        assert!(Report::merge(&[]).is_err());
    }
}
