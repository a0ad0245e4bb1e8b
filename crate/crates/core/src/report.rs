//! Line-oriented reports.
//!
//! A report is an ordered list of `(key, value)` rows. The machine format is
//! one `key<TAB>value` line per row, so reports diff cleanly; the text
//! format aligns keys for reading.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rows(Vec<(String, String)>);

impl Rows {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn extend(&mut self, other: Rows) {
        self.0.extend(other.0);
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: Rows) {
        for (k, v) in other.0 {
            self.0.push((format!("{prefix}.{k}"), v));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `key<TAB>value` lines. Tabs and newlines inside values are escaped.
    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.0 {
            out.push_str(&escape(k));
            out.push('\t');
            out.push_str(&escape(v));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let width = self.0.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.0 {
            let pad = width - k.chars().count();
            out.push_str(k);
            out.push_str(&" ".repeat(pad));
            out.push_str("  ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}
