//! Line-oriented `key = value` files with `[section]` headers and `#`
//! comments.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// Splits `text` into sections. Entries before the first header are an
/// error, as are repeated sections and repeated keys within a section.
pub fn parse_sections(text: &str) -> Result<Vec<Section>, SyntaxError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| SyntaxError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(format!("unterminated section header '{content}'")))?
                .trim();
            if name.is_empty() {
                return Err(err("empty section name".into()));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(err(format!("section [{name}] appears twice")));
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', found '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err("missing key before '='".into()));
        }
        if value.is_empty() {
            return Err(err(format!("missing value for '{key}'")));
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| err(format!("'{key}' appears before any [section] header")))?;
        if section.entries.iter().any(|e| e.key == key) {
            return Err(err(format!("key '{key}' repeated in [{}]", section.name)));
        }
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(sections)
}

pub fn parse_f64(e: &Entry) -> Result<f64, SyntaxError> {
    let v: f64 = e.value.parse().map_err(|_| SyntaxError {
        line: e.line,
        message: format!("'{}' expects a number, found '{}'", e.key, e.value),
    })?;
    if v.is_nan() {
        return Err(SyntaxError {
            line: e.line,
            message: format!("'{}' must not be NaN", e.key),
        });
    }
    Ok(v)
}

pub fn parse_u32(e: &Entry) -> Result<u32, SyntaxError> {
    e.value.parse().map_err(|_| SyntaxError {
        line: e.line,
        message: format!("'{}' expects a non-negative integer, found '{}'", e.key, e.value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let s = parse_sections("# head\n[design]\nkind = diode # trailing\n\n[diode.a]\ndonor=NH2\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].name, "design");
        assert_eq!(s[0].entries[0].key, "kind");
        assert_eq!(s[0].entries[0].value, "diode");
        assert_eq!(s[0].entries[0].line, 3);
        assert_eq!(s[1].entries[0].line, 6);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(parse_sections("kind = x").unwrap_err().line, 1);
        assert_eq!(parse_sections("[a]\nnovalue").unwrap_err().line, 2);
        assert_eq!(parse_sections("[a]\nk=1\nk=2").unwrap_err().line, 3);
        assert_eq!(parse_sections("[a]\n[a]").unwrap_err().line, 2);
        assert_eq!(parse_sections("[a").unwrap_err().line, 1);
        assert_eq!(parse_sections("[a]\nk =").unwrap_err().line, 2);
    }

    #[test]
    fn numbers() {
        let e = |v: &str| Entry {
            key: "k".into(),
            value: v.into(),
            line: 4,
        };
        assert_eq!(parse_f64(&e("1e5")).unwrap(), 1e5);
        assert_eq!(parse_f64(&e("inf")).unwrap(), f64::INFINITY);
        assert!(parse_f64(&e("NaN")).is_err());
        assert_eq!(parse_u32(&e("2")).unwrap(), 2);
        assert_eq!(parse_u32(&e("-1")).unwrap_err().line, 4);
    }
}
