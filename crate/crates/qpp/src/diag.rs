use std::fmt;

use crate::ast::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagKind {
    Syntax,
    Semantic,
    /// Well-formed, but larger than the simulator supports.
    Capacity,
}

/// An error in a source file, located at a line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub pos: Pos,
    pub message: String,
    /// What would have been accepted here. Never empty.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn syntax(pos: Pos, message: impl Into<String>, expected: Vec<String>) -> Self {
        Diagnostic {
            kind: DiagKind::Syntax,
            pos,
            message: message.into(),
            expected,
        }
    }

    pub fn semantic(pos: Pos, message: impl Into<String>, expected: &str) -> Self {
        Diagnostic {
            kind: DiagKind::Semantic,
            pos,
            message: message.into(),
            expected: vec![expected.to_string()],
        }
    }

    /// A semantic or capacity diagnostic for a library error.
    pub fn from_core(pos: Pos, e: &qpp_core::Error, expected: &str) -> Self {
        let mut d = Diagnostic::semantic(pos, e.to_string(), expected);
        if e.is_capacity() {
            d.kind = DiagKind::Capacity;
        }
        d
    }

    /// The diagnostic with the offending source line and a caret under the
    /// column.
    pub fn render(&self, path: &str, source: &str) -> String {
        let mut out = format!("{path}:{self}\n");
        // An error at the end of input may sit on a line past the last one.
        let lines: Vec<&str> = source.lines().collect();
        let (line_no, col) = match lines.get(self.pos.line.saturating_sub(1)) {
            Some(_) => (self.pos.line, self.pos.col),
            None => match lines.iter().rposition(|l| !l.trim().is_empty()) {
                Some(i) => (i + 1, lines[i].chars().count() + 1),
                None => (0, 0),
            },
        };
        if let Some(line) = line_no.checked_sub(1).and_then(|i| lines.get(i)) {
            let width = line_no.to_string().len();
            out.push_str(&format!("{:width$} |\n", ""));
            out.push_str(&format!("{line_no} | {line}\n"));
            let pad: String = line
                .chars()
                .take(col.saturating_sub(1))
                .map(|c| if c == '\t' { '\t' } else { ' ' })
                .collect();
            out.push_str(&format!("{:width$} | {pad}^\n", ""));
        }
        out
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagKind::Syntax => "syntax error",
            DiagKind::Semantic | DiagKind::Capacity => "error",
        };
        write!(f, "{}: {kind}: {}", self.pos, self.message)?;
        match self.expected.as_slice() {
            [] => Ok(()),
            [one] => write!(f, " (expected {one})"),
            many => write!(f, " (expected one of {})", many.join(", ")),
        }
    }
}

impl std::error::Error for Diagnostic {}
