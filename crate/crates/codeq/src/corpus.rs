//! The bundled reference codes: three additive MDS `(8, 9^3, 6)_9` codes
//! over `F_9` (with `e^2 = e + 1`). `C1` and `C2` are linear, `C3` is
//! additive but not `F_9`-linear. These anchor the demo pipeline and a good
//! part of the test suite.

use crate::additive::AdditiveCode;
use crate::code::LinearCode;
use crate::error::Error;
use crate::io::{parse_code, CodeFile};
use crate::Result;

/// Generator of the first linear reference code, in the code file format.
pub const C1_TEXT: &str = include_str!("../data/c1.code");
/// Generator of the second linear reference code (a truncated
/// Reed-Solomon code; its columns lie on a conic).
pub const C2_TEXT: &str = include_str!("../data/c2.code");
/// Generators of the additive, non-linear reference code, as the expanded
/// `6 x 16` integer matrix over `F_3`.
pub const C3_TEXT: &str = include_str!("../data/c3.code");

pub fn c1() -> Result<LinearCode> {
    expect_linear(parse_code(C1_TEXT, "c1.code")?)
}

pub fn c2() -> Result<LinearCode> {
    expect_linear(parse_code(C2_TEXT, "c2.code")?)
}

pub fn c3() -> Result<AdditiveCode> {
    match parse_code(C3_TEXT, "c3.code")? {
        CodeFile::Additive(c) => Ok(c),
        _ => Err(Error::BadShape("c3.code is additive".into())),
    }
}

fn expect_linear(c: CodeFile) -> Result<LinearCode> {
    match c {
        CodeFile::Linear(c) => Ok(c),
        _ => Err(Error::BadShape("expected a linear code file".into())),
    }
}
