use toml::{Table, Value};

use crate::ConfigError;

/// Parses a command-line value as a TOML value; bare words become strings.
pub fn parse_value(raw: &str) -> Value {
    match toml::from_str::<Table>(&format!("v = {raw}")).ok().and_then(|mut t| t.remove("v")) {
        Some(Value::Datetime(_)) | None => Value::String(raw.to_string()),
        Some(v) => v,
    }
}

/// Sets dotted `key` (e.g. `player.u`) in `table`, creating sub-tables.
pub fn set_path(table: &mut Table, key: &str, value: Value) -> Result<(), ConfigError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| ConfigError(format!("empty key in `{key}`")))?;
    let mut cur = table;
    for part in parts {
        let entry = cur.entry(part.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| ConfigError(format!("`{part}` in `{key}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Applies `key=value` assignments in order.
pub fn apply_sets(table: &mut Table, sets: &[String]) -> Result<(), ConfigError> {
    for set in sets {
        let (key, raw) =
            set.split_once('=').ok_or_else(|| ConfigError(format!("expected key=value, got `{set}`")))?;
        set_path(table, key.trim(), parse_value(raw.trim()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_paths() {
        assert_eq!(parse_value("3"), Value::Integer(3));
        assert_eq!(parse_value("0.5"), Value::Float(0.5));
        assert_eq!(parse_value("ucb1"), Value::String("ucb1".into()));
        assert_eq!(parse_value("2024-01-01"), Value::String("2024-01-01".into()));
        let mut t = Table::new();
        apply_sets(&mut t, &["player.u=0.4".into(), "trials=10".into(), "sweep.values=[1.0, 2.0]".into()]).unwrap();
        assert_eq!(t["player"]["u"], Value::Float(0.4));
        assert_eq!(t["trials"], Value::Integer(10));
        assert_eq!(t["sweep"]["values"].as_array().unwrap().len(), 2);
        assert!(apply_sets(&mut t, &["trials".into()]).is_err());
        assert!(apply_sets(&mut t, &["trials.x=1".into()]).is_err());
    }
}
