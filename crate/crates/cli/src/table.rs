//! Plain-text rendering of a JSON report: one `path = value` line per leaf,
//! with arrays of scalars printed inline.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn walk(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(&p, x, out);
            }
        }
        Value::Array(items) => {
            if let Some(flat) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{path} = [{}]\n", flat.join(", ")));
            } else {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{path}[{i}]"), x, out);
                }
            }
        }
        leaf => {
            out.push_str(&format!("{path} = {}\n", scalar(leaf).unwrap_or_default()));
        }
    }
}

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_reports() {
        let v = json!({"a": {"b": ["1/2", "3"]}, "c": [[1, 2], [3]], "d": true});
        assert_eq!(
            render(&v),
            "a.b = [1/2, 3]\nc[0] = [1, 2]\nc[1] = [3]\nd = true\n"
        );
    }
}
