use std::fmt::Write;

use serde::Serialize;

use crate::args::Format;
use crate::error::{CliError, Result};

/// Buffered command output; written to stdout once the command finishes.
pub struct Output {
    format: Format,
    buf: String,
}

impl Output {
    pub fn new(format: Format) -> Self {
        Output { format, buf: String::new() }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn is_json(&self) -> bool {
        self.format == Format::Json
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.buf.push_str(text.as_ref());
        self.buf.push('\n');
    }

    /// The descriptive line naming what a command computes.
    pub fn provenance(&mut self, what: &str) {
        let _ = writeln!(self.buf, "# {what}");
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::invalid(e.to_string()))?;
        self.line(text);
        Ok(())
    }

    pub fn raw(&mut self, text: &str) {
        self.buf.push_str(text);
    }

    pub fn text(&self) -> &str {
        &self.buf
    }

    /// Rejects formats a command has no rendering for.
    pub fn require(&self, allowed: &[Format]) -> Result<()> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(CliError::invalid(format!("this command has no {:?} output", self.format).to_lowercase()))
        }
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
