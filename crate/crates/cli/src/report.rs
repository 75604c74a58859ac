use std::fmt::Write as _;
use std::path::PathBuf;

use nodal_core::constructions::Claim;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_DIR_VAR: &str = "NODAL_REPORT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Markdown,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Markdown => "md",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    /// Free-form lines shown above the claims, such as a table.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub results: Vec<Claim>,
    pub exit_status: i32,
    pub data: Value,
}

impl Report {
    pub fn new(command: String, notes: Vec<String>, results: Vec<Claim>, data: Value) -> Self {
        let exit_status = if results.iter().all(Claim::passed) { 0 } else { 1 };
        Self { command, timestamp: None, notes, results, exit_status, data }
    }

    pub fn stamp(&mut self) {
        self.timestamp = Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Text => self.text(),
            Format::Markdown => self.markdown(),
        }
    }

    fn summary(&self) -> String {
        let failed = self.results.iter().filter(|c| !c.passed()).count();
        let n = self.results.len();
        let noun = if n == 1 { "claim" } else { "claims" };
        if failed == 0 {
            format!("{n} {noun} checked, all pass")
        } else {
            format!("{failed} of {n} {noun} fail")
        }
    }

    fn text(&self) -> String {
        let mut out = format!("$ {}\n", self.command);
        if let Some(t) = &self.timestamp {
            let _ = writeln!(out, "at {t}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        for c in &self.results {
            let tag = if c.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {}: {}", c.id, c.anchor);
            for (k, v) in &c.evidence {
                let _ = writeln!(out, "    {k}: {v}");
            }
        }
        let _ = writeln!(out, "{}", self.summary());
        out
    }

    fn markdown(&self) -> String {
        let mut out = format!("# `{}`\n\n", self.command);
        if let Some(t) = &self.timestamp {
            let _ = writeln!(out, "Generated {t}.\n");
        }
        if !self.notes.is_empty() {
            out.push_str("```\n");
            for n in &self.notes {
                let _ = writeln!(out, "{n}");
            }
            out.push_str("```\n\n");
        }
        out.push_str("| claim | status | statement |\n|---|---|---|\n");
        for c in &self.results {
            let tag = if c.passed() { "pass" } else { "**fail**" };
            let _ = writeln!(out, "| `{}` | {tag} | {} |", c.id, c.anchor);
        }
        for c in &self.results {
            let _ = writeln!(out, "\n## `{}`\n", c.id);
            for (k, v) in &c.evidence {
                let _ = writeln!(out, "- {k}: `{v}`");
            }
        }
        let _ = writeln!(out, "\n{}.", self.summary());
        out
    }

    /// File name derived from the command words, e.g. `verify-f3.json`.
    pub fn file_name(&self, format: Format) -> String {
        let slug: String = self
            .command
            .split_whitespace()
            .skip(1)
            .filter(|w| !w.starts_with("--"))
            .map(|w| w.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect::<String>())
            .collect::<Vec<_>>()
            .join("-");
        format!("{slug}.{}", format.extension())
    }

    /// Writes the rendered report into `$NODAL_REPORT_DIR` when it is set.
    pub fn save(&self, format: Format) -> std::io::Result<Option<PathBuf>> {
        let Some(dir) = std::env::var_os(REPORT_DIR_VAR) else { return Ok(None) };
        let dir = PathBuf::from(dir);
        std::fs::create_dir_all(&dir)?;
        let path = dir.join(self.file_name(format));
        std::fs::write(&path, self.render(format))?;
        Ok(Some(path))
    }
}
