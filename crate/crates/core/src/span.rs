use std::fmt;

use serde::{Deserialize, Serialize};

/// A region of source text. Lines and columns are 1-based and both ends are
/// inclusive; columns count characters, not bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceSpan {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub const fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Self {
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        let (start_line, start_col) =
            (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let (end_line, end_col) = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan::new(start_line, start_col, end_line, end_col)
    }

    /// True when both line numbers fall inside `1..=line_count`.
    pub fn within_lines(&self, line_count: usize) -> bool {
        let lc = line_count as u64;
        self.start_line >= 1
            && self.end_line >= self.start_line
            && u64::from(self.end_line) <= lc
    }

    /// Slice `source` by this span. Returns `None` when the span does not
    /// address characters that exist.
    pub fn slice<'s>(&self, source: &'s str) -> Option<&'s str> {
        let start = char_offset(source, self.start_line, self.start_col)?;
        let end_start = char_offset(source, self.end_line, self.end_col)?;
        let last = source[end_start..].chars().next()?;
        let end = end_start + last.len_utf8();
        (start <= end).then(|| &source[start..end])
    }
}

fn char_offset(source: &str, line: u32, col: u32) -> Option<usize> {
    let (mut cur_line, mut cur_col) = (1u32, 1u32);
    for (offset, ch) in source.char_indices() {
        if cur_line == line && cur_col == col {
            return Some(offset);
        }
        if ch == '\n' {
            cur_line += 1;
            cur_col = 1;
        } else {
            cur_col += 1;
        }
    }
    None
}

/// Number of lines in `source` as an editor would count them: a trailing
/// newline does not open a new line.
pub fn line_count(source: &str) -> usize {
    if source.is_empty() {
        return 0;
    }
    let newlines = source.bytes().filter(|&b| b == b'\n').count();
    if source.ends_with('\n') {
        newlines
    } else {
        newlines + 1
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}
