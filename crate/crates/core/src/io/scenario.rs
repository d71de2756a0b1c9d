use serde_json::Value;

use crate::error::{Error, Result};
use crate::tradestudy::Scenario;

/// Treatment of keys the scenario schema does not know.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyPolicy {
    #[default]
    Strict,
    /// Unknown keys become warnings and are ignored.
    Lenient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedScenario {
    pub scenario: Scenario,
    pub warnings: Vec<String>,
}

/// Parses, defaults and validates a JSON scenario document.
pub fn parse_scenario(text: &str, policy: KeyPolicy) -> Result<ParsedScenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::ScenarioSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if !value.is_object() {
        return Err(Error::scenario("$", "scenario must be a JSON object"));
    }

    let scenario: Scenario = serde_path_to_error::deserialize(&value).map_err(|e| {
        let key = e.path().to_string();
        Error::scenario(key, e.into_inner().to_string())
    })?;

    // Anything in the input that does not survive a round trip through the
    // typed scenario is a key the schema does not know.
    let canonical = serde_json::to_value(&scenario).map_err(|e| Error::Serialize(e.to_string()))?;
    let mut unknown = Vec::new();
    collect_unknown(&value, &canonical, "", &mut unknown);
    let warnings = match (policy, unknown.first()) {
        (KeyPolicy::Strict, Some(first)) => return Err(Error::UnknownKey(first.clone())),
        _ => unknown
            .into_iter()
            .map(|k| format!("ignoring unknown scenario key `{k}`"))
            .collect(),
    };

    scenario.validate()?;
    Ok(ParsedScenario { scenario, warnings })
}

fn collect_unknown(input: &Value, known: &Value, path: &str, out: &mut Vec<String>) {
    match (input, known) {
        (Value::Object(given), Value::Object(schema)) => {
            for (k, v) in given {
                let child = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                match schema.get(k) {
                    Some(s) => collect_unknown(v, s, &child, out),
                    None => out.push(child),
                }
            }
        }
        (Value::Array(given), Value::Array(schema)) => {
            for (i, (v, s)) in given.iter().zip(schema).enumerate() {
                collect_unknown(v, s, &format!("{path}[{i}]"), out);
            }
        }
        _ => {}
    }
}

/// Pretty JSON form of a scenario with every default spelled out.
pub fn scenario_to_string(scenario: &Scenario) -> Result<String> {
    serde_json::to_string_pretty(scenario).map_err(|e| Error::Serialize(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        let p = parse_scenario("{}", KeyPolicy::Strict).unwrap();
        assert_eq!(p.scenario, Scenario::default());
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_scenario("{\n  \"walker\": {,}\n}", KeyPolicy::Strict) {
            Err(Error::ScenarioSyntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn planes_must_divide() {
        let err = parse_scenario(r#"{"walker": {"total_sats": 300, "planes": 7}}"#, KeyPolicy::Strict).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("walker.planes") && msg.contains("walker.total_sats"),
            "{msg}"
        );
        assert!(err.is_validation());
    }

    #[test]
    fn unknown_keys() {
        let text =
            r#"{"walker": {"plnes": 4}, "materials": {"materials": [{"name": "x", "loss_db": 3, "colour": 1}]}}"#;
        match parse_scenario(text, KeyPolicy::Strict) {
            // keys are visited in sorted order
            Err(Error::UnknownKey(k)) => assert_eq!(k, "materials.materials[0].colour"),
            other => panic!("{other:?}"),
        }
        let p = parse_scenario(text, KeyPolicy::Lenient).unwrap();
        assert_eq!(p.warnings.len(), 2);
        assert!(p.warnings[1].contains("walker.plnes"));
    }

    #[test]
    fn type_errors_name_the_key() {
        let err = parse_scenario(r#"{"sweep": {"mask_deg": "five"}}"#, KeyPolicy::Strict).unwrap_err();
        assert!(err.to_string().contains("sweep.mask_deg"), "{err}");
    }

    #[test]
    fn round_trip() {
        let text = r#"{"walker": {"total_sats": 120, "planes": 12, "altitude_km": 1100},
                       "grid": {"scheme": "lat-lon", "sites": 200},
                       "sweep": {"aggregation": "worst-site", "pdop_target": 2.5}}"#;
        let a = parse_scenario(text, KeyPolicy::Strict).unwrap().scenario;
        let b = parse_scenario(&scenario_to_string(&a).unwrap(), KeyPolicy::Strict)
            .unwrap()
            .scenario;
        assert_eq!(a, b);
        assert_eq!(a.hash(), b.hash());
    }
}
