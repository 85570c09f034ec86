//! Minimal JSON-Schema checker covering the subset the shipped summary
//! schema uses: `type`, `properties`, `required`, `items`, `enum`,
//! `additionalProperties` and `minimum`. Keeping the validator in-tree makes
//! the determinism and format guarantees self-contained.

use serde_json::Value;

/// The shipped summary schema (also installed at `schema/summary.schema.json`).
pub const SUMMARY_SCHEMA: &str = include_str!("../../../schema/summary.schema.json");

/// Validates `value` against `schema`, returning every violation with its
/// JSON pointer path.
pub fn validate(schema: &Value, value: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, value, "$", &mut errors);
    errors
}

pub fn validate_summary(summary_json: &Value) -> Result<(), String> {
    let schema: Value =
        serde_json::from_str(SUMMARY_SCHEMA).map_err(|e| format!("schema parse: {e}"))?;
    let errors = validate(&schema, summary_json);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

fn type_matches(ty: &str, value: &Value) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn check(schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    let Some(obj) = schema.as_object() else {
        return;
    };
    if let Some(ty) = obj.get("type") {
        let ok = match ty {
            Value::String(s) => type_matches(s, value),
            Value::Array(options) => options
                .iter()
                .filter_map(|t| t.as_str())
                .any(|s| type_matches(s, value)),
            _ => true,
        };
        if !ok {
            errors.push(format!("{path}: expected type {ty}, got {value_kind}", value_kind = kind(value)));
            return;
        }
    }
    if let Some(allowed) = obj.get("enum").and_then(|e| e.as_array()) {
        if !allowed.contains(value) {
            errors.push(format!("{path}: value not in enum"));
        }
    }
    if let Some(min) = obj.get("minimum").and_then(|m| m.as_f64()) {
        if let Some(v) = value.as_f64() {
            if v < min {
                errors.push(format!("{path}: {v} below minimum {min}"));
            }
        }
    }
    if let Some(map) = value.as_object() {
        if let Some(required) = obj.get("required").and_then(|r| r.as_array()) {
            for key in required.iter().filter_map(|k| k.as_str()) {
                if !map.contains_key(key) {
                    errors.push(format!("{path}: missing required field '{key}'"));
                }
            }
        }
        let props = obj.get("properties").and_then(|p| p.as_object());
        if let Some(props) = props {
            for (key, sub) in props {
                if let Some(v) = map.get(key) {
                    check(sub, v, &format!("{path}.{key}"), errors);
                }
            }
        }
        if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
            if let Some(props) = props {
                for key in map.keys() {
                    if !props.contains_key(key) {
                        errors.push(format!("{path}: unexpected field '{key}'"));
                    }
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (obj.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            check(items, v, &format!("{path}[{i}]"), errors);
        }
    }
}

fn kind(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}
