//! File formats: the native election format, PrefLib categorical data,
//! swap-sequence and label files, and CSV tables.

pub mod native;
pub mod preflib;
pub mod sequence;
pub mod table;

pub use native::{parse_native, serialize_native};
pub use preflib::{parse_preflib_categorical, PreflibData};
pub use sequence::{
    parse_labels, parse_sequence, serialize_labels, serialize_sequence, trace_table, SequenceFile,
};
pub use table::{read_csv, write_csv, CsvTable};

use crate::error::{Error, Result};

pub(crate) fn parse_err<T>(line: usize, reason: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        reason: reason.into(),
    })
}

pub(crate) fn parse_index(line: usize, token: &str) -> Result<usize> {
    token.parse().or_else(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer, got {token:?}"),
        )
    })
}
