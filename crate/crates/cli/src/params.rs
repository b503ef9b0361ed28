//! `key=value` family parameters from the command line.
//!
//! A value is a number, a comma-separated list of numbers (vectors and
//! polynomial coefficients), a comma-separated list of expressions, or a
//! bare string.

use serde_json::{Map, Value};

fn value(raw: &str) -> Value {
    if let Ok(x) = raw.trim().parse::<f64>() {
        return Value::from(x);
    }
    if !raw.contains(',') {
        return Value::from(raw.trim());
    }
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let nums: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums {
        Some(v) => Value::from(v),
        None => Value::from(parts),
    }
}

pub fn parse_params(pairs: &[String]) -> Result<Map<String, Value>, String> {
    let mut map = Map::new();
    for p in pairs {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| format!("parameter `{p}` is not key=value"))?;
        if map.insert(k.trim().to_string(), value(v)).is_some() {
            return Err(format!("parameter `{}` given twice", k.trim()));
        }
    }
    Ok(map)
}

pub fn parse_domain(raw: &str) -> Result<[f64; 2], String> {
    let bad = || format!("domain `{raw}` is not LO,HI");
    let (lo, hi) = raw.split_once(',').ok_or_else(bad)?;
    Ok([lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn values() {
        let m = parse_params(&["r=1".into(), "beta0=0.5,-1".into(), "causal=timelike".into(), "beta=s^2, 0".into()])
            .unwrap();
        assert_eq!(Value::Object(m), json!({"r": 1.0, "beta0": [0.5, -1.0], "causal": "timelike", "beta": ["s^2", "0"]}));
        assert!(parse_params(&["r".into()]).is_err());
        assert!(parse_params(&["r=1".into(), "r=2".into()]).is_err());
    }

    #[test]
    fn domains() {
        assert_eq!(parse_domain("-1, 2.5").unwrap(), [-1.0, 2.5]);
        assert!(parse_domain("1").is_err());
    }
}
