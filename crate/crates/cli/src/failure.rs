use std::fmt;
use std::path::Path;

use entangle::Error;

pub const USAGE: i32 = 2;
pub const DEGENERATE: i32 = 3;
pub const UNREALIZABLE: i32 = 4;
pub const IO: i32 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }

    pub fn unrealizable(message: impl Into<String>) -> Self {
        Failure { code: UNREALIZABLE, message: message.into() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Failure { code: IO, message: format!("{}: {err}", path.display()) }
    }

    /// Parse errors with the source echoed and a caret under the offset.
    pub fn parse(source: &str, err: &Error, line: Option<usize>) -> Self {
        let Error::Parse(p) = err else { return Failure::from(err.clone()) };
        let column = source.get(..p.offset).map_or(p.offset, |s| s.chars().count());
        let place = match line {
            Some(l) => format!("line {l}, offset {}", p.offset),
            None => format!("offset {}", p.offset),
        };
        Failure {
            code: USAGE,
            message: format!("parse error: {} at {place}\n  {source}\n  {}^", p.kind, " ".repeat(column)),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Degenerate(_) => DEGENERATE,
            _ => USAGE,
        };
        Failure { code, message: err.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
