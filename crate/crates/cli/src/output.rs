use std::fmt::Display;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// Only `@key=value` lines.
    Kv,
}

/// Collects either the human lines or the key-value lines of a run.
pub struct Out {
    format: Format,
    text: String,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out {
            format,
            text: String::new(),
        }
    }

    pub fn human(&mut self, line: impl AsRef<str>) {
        if self.format == Format::Human {
            self.text.push_str(line.as_ref());
            self.text.push('\n');
        }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        if self.format == Format::Kv {
            let value = value.to_string().replace('\n', " ");
            self.text.push_str(&format!("@{key}={value}\n"));
        }
    }

    pub fn finish(self) -> String {
        self.text
    }
}
