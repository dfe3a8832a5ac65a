//! Deterministic command reports, rendered as text or JSON.
//!
//! A report always carries the command echo and a one-word verdict;
//! failing verdicts add witnesses. Field order is fixed, so the same
//! input produces byte-identical output on every run. Timing is filled
//! in only when the `PRESENCE_TIMING` environment variable is set —
//! otherwise it would differ between runs and break that guarantee.

use serde::Serialize;
use std::fmt::Write as _;

/// One piece of evidence behind a failing verdict: a short label and
/// indented detail lines.
#[derive(Debug, Serialize)]
pub struct Witness {
    pub label: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
}

impl Witness {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            detail: Vec::new(),
        }
    }

    pub fn with_detail(mut self, lines: Vec<String>) -> Self {
        self.detail = lines;
        self
    }
}

/// The full outcome of one command invocation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdict: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            verdict: verdict.into(),
            details: Vec::new(),
            witnesses: Vec::new(),
            skipped: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn detail(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    pub fn witness(&mut self, witness: Witness) {
        self.witnesses.push(witness);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self).expect("report serializes");
                out.push('\n');
                out
            }
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "verdict: {}", self.verdict).unwrap();
        for line in &self.details {
            writeln!(out, "  {line}").unwrap();
        }
        if !self.witnesses.is_empty() {
            writeln!(out, "witnesses: {}", self.witnesses.len()).unwrap();
            for witness in &self.witnesses {
                writeln!(out, "  - {}", witness.label).unwrap();
                for line in &witness.detail {
                    writeln!(out, "      {line}").unwrap();
                }
            }
        }
        if !self.skipped.is_empty() {
            writeln!(out, "skipped: {}", self.skipped.len()).unwrap();
            for line in &self.skipped {
                writeln!(out, "  - {line}").unwrap();
            }
        }
        if let Some(ms) = self.timing_ms {
            writeln!(out, "timing_ms: {ms}").unwrap();
        }
        out
    }
}

/// Output format selected with `--report`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_is_stable_and_indented() {
        let mut report = Report::new("check coherence", "incoherent");
        report.detail("target: NOTE");
        report.witness(Witness::new("extrinsic conflict").with_detail(vec![
            "world jane at (0,0)".to_string(),
            "color=red vs color=blue".to_string(),
        ]));
        let text = report.render(Format::Text);
        assert_eq!(
            text,
            "command: check coherence\nverdict: incoherent\n  target: NOTE\nwitnesses: 1\n  - extrinsic conflict\n      world jane at (0,0)\n      color=red vs color=blue\n"
        );
        assert_eq!(text, report.render(Format::Text));
    }

    #[test]
    fn json_rendering_keeps_field_order_and_drops_empty_sections() {
        let report = Report::new("validate", "valid");
        let json = report.render(Format::Json);
        assert_eq!(json, "{\n  \"command\": \"validate\",\n  \"verdict\": \"valid\"\n}\n");
    }

    #[test]
    fn timing_appears_only_when_set() {
        let mut report = Report::new("validate", "valid");
        assert!(!report.render(Format::Text).contains("timing"));
        report.timing_ms = Some(3);
        assert!(report.render(Format::Text).contains("timing_ms: 3"));
    }
}
