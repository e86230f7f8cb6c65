use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    JsonLines,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    Pair(String, String),
    Comment(String),
}

/// Ordered `key: value` lines; the unit every command prints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.lines.push(Line::Pair(key.into(), value.to_string()));
        self
    }

    /// A `# ...` line in text output, so file-shaped reports stay parseable.
    pub fn comment(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(Line::Comment(text.into()));
        self
    }

    /// Appends every `key: value` line of a file in one of the text formats.
    pub fn extend_from_text(&mut self, text: &str) -> &mut Self {
        for line in text.lines() {
            if let Some((k, v)) = line.split_once(':') {
                self.push(k.trim(), v.trim());
            }
        }
        self
    }

    pub fn render(&self, format: ReportFormat) -> String {
        let mut out = String::new();
        for line in &self.lines {
            match (line, format) {
                (Line::Pair(k, v), ReportFormat::Text) => writeln!(out, "{k}: {v}").unwrap(),
                (Line::Pair(k, v), ReportFormat::JsonLines) => {
                    writeln!(out, "{}", serde_json::json!({ "key": k, "value": v })).unwrap()
                }
                (Line::Comment(c), ReportFormat::Text) => writeln!(out, "# {c}").unwrap(),
                (Line::Comment(c), ReportFormat::JsonLines) => {
                    writeln!(out, "{}", serde_json::json!({ "comment": c })).unwrap()
                }
            }
        }
        out
    }
}

/// `{1,3}` from zero-based indices.
pub fn index_set(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_formats() {
        let mut r = Report::new();
        r.push("verdict", "MEMBER").comment("note").push("level", 2);
        assert_eq!(
            r.render(ReportFormat::Text),
            "verdict: MEMBER\n# note\nlevel: 2\n"
        );
        assert_eq!(
            r.render(ReportFormat::JsonLines),
            "{\"key\":\"verdict\",\"value\":\"MEMBER\"}\n{\"comment\":\"note\"}\n{\"key\":\"level\",\"value\":\"2\"}\n"
        );
    }

    #[test]
    fn one_based_sets() {
        assert_eq!(index_set(&[0, 2]), "{1,3}");
        assert_eq!(index_set(&[]), "{}");
    }
}
