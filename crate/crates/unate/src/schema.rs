//! A small JSON Schema subset validator for the shipped result schemas.
//!
//! Supported keywords: `type` (string or list), `properties`, `required`,
//! `additionalProperties` (boolean only), `items` (single schema), `enum`,
//! `minimum`, `minItems`, `maxItems`. Unknown keywords are rejected so a
//! schema cannot silently rely on something unchecked.

use serde_json::Value;

pub const SCHEMAS: &[(&str, &str)] = &[
    ("classify", include_str!("../schemas/classify.json")),
    ("census", include_str!("../schemas/census.json")),
    ("turan", include_str!("../schemas/turan.json")),
    ("certify", include_str!("../schemas/certify.json")),
    ("orient", include_str!("../schemas/orient.json")),
    ("stability", include_str!("../schemas/stability.json")),
    ("selftest", include_str!("../schemas/selftest.json")),
    ("manifest", include_str!("../schemas/manifest.json")),
];

pub fn schema_for(name: &str) -> Option<Value> {
    SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| serde_json::from_str(s).expect("shipped schemas are valid json"))
}

const KNOWN: &[&str] = &[
    "$schema",
    "title",
    "description",
    "type",
    "properties",
    "required",
    "additionalProperties",
    "items",
    "enum",
    "minimum",
    "minItems",
    "maxItems",
];

fn type_matches(t: &str, v: &Value) -> Result<bool, String> {
    Ok(match t {
        "null" => v.is_null(),
        "boolean" => v.is_boolean(),
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        other => return Err(format!("unsupported type `{other}`")),
    })
}

/// Errors as `path: message`, empty when `value` conforms.
pub fn validate(schema: &Value, value: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, value, "$", &mut errors);
    errors
}

fn check(schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    let Some(s) = schema.as_object() else {
        errors.push(format!("{path}: schema is not an object"));
        return;
    };
    for key in s.keys() {
        if !KNOWN.contains(&key.as_str()) {
            errors.push(format!("{path}: unsupported schema keyword `{key}`"));
        }
    }
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(x) => vec![x.as_str()],
            Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let mut ok = false;
        for ty in &types {
            match type_matches(ty, v) {
                Ok(m) => ok |= m,
                Err(e) => errors.push(format!("{path}: {e}")),
            }
        }
        if !ok {
            errors.push(format!("{path}: expected {}", types.join(" or ")));
            return;
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            errors.push(format!("{path}: value not in enum"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_i64), v.as_i64()) {
        if x < min {
            errors.push(format!("{path}: {x} < minimum {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(req)) = s.get("required") {
            for r in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(r) {
                    errors.push(format!("{path}: missing `{r}`"));
                }
            }
        }
        let closed = s.get("additionalProperties") == Some(&Value::Bool(false));
        for (key, val) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => check(sub, val, &format!("{path}.{key}"), errors),
                None if closed => errors.push(format!("{path}: unexpected `{key}`")),
                None => {}
            }
        }
    }
    if let Some(items) = v.as_array() {
        if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                errors.push(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = s.get("maxItems").and_then(Value::as_u64) {
            if items.len() as u64 > max {
                errors.push(format!("{path}: more than {max} items"));
            }
        }
        if let Some(sub) = s.get("items") {
            for (i, item) in items.iter().enumerate() {
                check(sub, item, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn shipped_schemas_parse_and_use_known_keywords() {
        for (name, _) in SCHEMAS {
            let s = schema_for(name).unwrap();
            // an empty object fails `required` but must not hit unknown keywords
            let errs = validate(&s, &json!({}));
            assert!(
                errs.iter().all(|e| !e.contains("unsupported")),
                "{name}: {errs:?}"
            );
        }
    }

    #[test]
    fn subset_semantics() {
        let s = json!({
            "type": "object",
            "required": ["a"],
            "additionalProperties": false,
            "properties": {
                "a": {"type": "integer", "minimum": 0},
                "b": {"type": ["string", "null"]},
                "c": {"type": "array", "items": {"enum": ["x", "y"]}, "maxItems": 2}
            }
        });
        assert!(validate(&s, &json!({"a": 1, "b": null, "c": ["x"]})).is_empty());
        assert_eq!(validate(&s, &json!({"a": -1})).len(), 1);
        assert_eq!(validate(&s, &json!({"b": 3})).len(), 2);
        assert_eq!(
            validate(&s, &json!({"a": 0, "c": ["z", "x", "y"]})).len(),
            2
        );
        assert_eq!(validate(&s, &json!({"a": 0, "d": 1})).len(), 1);
        assert!(!validate(&json!({"pattern": "x"}), &json!(1)).is_empty());
    }
}
