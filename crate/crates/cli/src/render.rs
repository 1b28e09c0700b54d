use serde_json::Value;

/// One `path: value` line per scalar leaf.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, p, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                walk(x, format!("{path}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{path}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
