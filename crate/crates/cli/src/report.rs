use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Duration;

/// What a command prints: an echo of the command, one line per item, and
/// the pass/fail/indeterminate tally. Wall time is kept apart so standard
/// output is identical across runs.
#[derive(Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub precision: Option<u32>,
    pub lines: Vec<String>,
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(command: String, precision: Option<u32>) -> Self {
        Self {
            command,
            precision,
            ..Self::default()
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn record(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "abelquot {} {}",
            env!("CARGO_PKG_VERSION"),
            self.command
        )
        .unwrap();
        if let Some(p) = self.precision {
            writeln!(out, "precision: {p} bits").unwrap();
        }
        for line in &self.lines {
            writeln!(out, "{line}").unwrap();
        }
        writeln!(
            out,
            "summary: {} pass, {} fail, {} indeterminate",
            self.pass, self.fail, self.indeterminate
        )
        .unwrap();
        out
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.fail == 0 && self.indeterminate == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}
