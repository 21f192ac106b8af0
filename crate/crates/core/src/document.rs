//! Versioned JSON envelope for command results.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_secs: f64,
}

/// Command echo, inputs and outputs of one invocation.
///
/// Timing is kept out of `outputs`, so replaying `command` reproduces
/// `outputs` exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: Value,
    pub outputs: Value,
    pub timing: Timing,
    pub library_version: String,
}

impl ResultDocument {
    /// Builds a document. Any `elapsed_secs` fields inside `outputs` are
    /// removed and added to the document's timing.
    pub fn new<I: Serialize, O: Serialize>(
        command: Vec<String>,
        inputs: &I,
        outputs: &O,
        elapsed_secs: f64,
    ) -> Result<Self> {
        let mut outputs = serde_json::to_value(outputs)?;
        strip_timing(&mut outputs);
        Ok(ResultDocument {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: serde_json::to_value(inputs)?,
            outputs,
            timing: Timing { elapsed_secs },
            library_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    /// Pretty JSON with keys in sorted order at every level.
    pub fn to_canonical_json(&self) -> Result<String> {
        // serde_json::Value maps are ordered by key.
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_secs");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_round_trip() {
        let doc = ResultDocument::new(
            vec!["divisors".into(), "1,2,3".into()],
            &json!({"set": [1, 2, 3]}),
            &json!({"zeta": 1, "alpha": {"elapsed_secs": 0.5, "d": 5}, "list": [{"elapsed_secs": 1.0}]}),
            0.25,
        )
        .unwrap();
        assert_eq!(
            doc.outputs,
            json!({"alpha": {"d": 5}, "list": [{}], "zeta": 1})
        );
        let text = doc.to_canonical_json().unwrap();
        let again = ResultDocument::from_json(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_canonical_json().unwrap(), text);
        let first_key = text.lines().nth(1).unwrap().trim();
        assert!(first_key.starts_with("\"command\""));
    }
}
