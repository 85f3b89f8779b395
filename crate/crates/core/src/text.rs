//! Plain-text formats: set files, indicator/word files and `key: value`
//! records used for certificates, traces and reports.

use std::fmt::{self, Display, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::WindowSet;
use crate::subshift::Word;

/// Set file: `#horizon H` followed by one element per line, ascending.
pub fn format_set(set: &WindowSet) -> String {
    let mut s = String::with_capacity(16 + set.len() * 7);
    let _ = writeln!(s, "#horizon {}", set.horizon());
    for e in set.iter() {
        let _ = writeln!(s, "{e}");
    }
    s
}

pub fn parse_set(text: &str) -> Result<WindowSet> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty set file"))?;
    let horizon = header
        .trim()
        .strip_prefix("#horizon")
        .ok_or_else(|| Error::parse(1, "expected `#horizon H`"))?
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::parse(1, e.to_string()))?;
    let mut elements = Vec::new();
    for (i, l) in lines {
        let e = l
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::parse(i + 1, e.to_string()))?;
        elements.push(e);
    }
    WindowSet::new(horizon, elements)
}

/// Indicator/word file: a single line of `0`/`1` characters.
pub fn parse_word(text: &str) -> Result<Word> {
    let body: String = text.split_whitespace().collect();
    body.parse()
}

pub fn format_word(word: &Word) -> String {
    format!("{word}\n")
}

/// An ordered block of `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    line: usize,
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(self.line, format!("missing key `{key}`")))
    }

    pub fn parse<T>(&self, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.require(key)?
            .trim()
            .parse()
            .map_err(|e: T::Err| Error::parse(self.line, format!("`{key}`: {e}")))
    }

    /// Whitespace-separated list value; an empty value is an empty list.
    pub fn parse_list<T>(&self, key: &str) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.require(key)?
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|e: T::Err| Error::parse(self.line, format!("`{key}`: {e}")))
            })
            .collect()
    }

    pub fn line(&self) -> usize {
        self.line
    }
}

impl Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// Records separated by blank lines; `#` lines are comments.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut cur: Option<Record> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.trim().is_empty() {
            if let Some(r) = cur.take() {
                out.push(r);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(i + 1, "expected `key: value`"))?;
        let rec = cur.get_or_insert_with(|| Record {
            line: i + 1,
            entries: Vec::new(),
        });
        rec.entries.push((k.trim().to_string(), v.trim().to_string()));
    }
    out.extend(cur);
    Ok(out)
}

pub fn format_records<'a, I: IntoIterator<Item = &'a Record>>(records: I) -> String {
    let mut s = String::new();
    for (i, r) in records.into_iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = write!(s, "{r}");
    }
    s
}

/// Space-separated inline list.
pub fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut s = String::new();
    for (i, it) in items.into_iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{it}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_file_roundtrip() {
        let s = WindowSet::new(12, vec![0, 3, 11]).unwrap();
        let text = format_set(&s);
        assert_eq!(text, "#horizon 12\n0\n3\n11\n");
        assert_eq!(parse_set(&text).unwrap(), s);
        assert!(parse_set("3\n4\n").is_err());
        assert!(parse_set("#horizon 4\n2\n1\n").is_err());
    }

    #[test]
    fn records_parse() {
        let text = "# comment\nkind: A\nx: 1 2 3\n\n\nkind: B\n";
        let recs = parse_records(text).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].get("kind"), Some("A"));
        assert_eq!(recs[0].parse_list::<u32>("x").unwrap(), vec![1, 2, 3]);
        assert!(recs[1].require("x").is_err());
        let again = parse_records(&format_records(&recs)).unwrap();
        assert_eq!(again[0].entries(), recs[0].entries());
        assert_eq!(again[1].entries(), recs[1].entries());
    }
}
