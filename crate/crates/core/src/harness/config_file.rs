//! Flat `key = value` configuration files.

use std::collections::BTreeMap;

use super::HarnessError;

/// Keys are normalised to lower case with `-` separators.
pub type ConfigMap = BTreeMap<String, String>;

/// Parses one `key = value` (or `key value`) pair per line. Blank lines and
/// `#` comments are skipped; repeating a key is an error.
pub fn parse_config_text(text: &str) -> Result<ConfigMap, HarnessError> {
    let mut map = ConfigMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, ""),
            },
        };
        if key.is_empty() || value.is_empty() {
            return Err(HarnessError::Config(format!(
                "line {}: expected key = value, got '{raw}'",
                lineno + 1
            )));
        }
        let key = key.trim_start_matches("--").replace('_', "-").to_ascii_lowercase();
        let value = value.trim_matches('"').to_string();
        if map.insert(key.clone(), value).is_some() {
            return Err(HarnessError::Config(format!(
                "line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let m = parse_config_text(
            "# sweep\nn = 4\nmin_errors=100\n--snr-db 0:5:40\nout = \"a.csv\" # trailing\n\n",
        )
        .unwrap();
        assert_eq!(m["n"], "4");
        assert_eq!(m["min-errors"], "100");
        assert_eq!(m["snr-db"], "0:5:40");
        assert_eq!(m["out"], "a.csv");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_config_text("n =").is_err());
        assert!(parse_config_text("lonely").is_err());
        assert!(parse_config_text("n=4\nn=5").is_err());
    }
}
