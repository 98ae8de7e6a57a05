//! Front end for the staircase engine: expression parsing, queries and the
//! verification harness.

pub mod parse;
pub mod query;
pub mod verify;

/// Result classes, mapped to process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undecided => 2,
        }
    }
}

/// Exit code for malformed input or flags.
pub const USAGE: i32 = 3;
