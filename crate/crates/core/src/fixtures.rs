//! The bundled example knowledge bases.

use crate::model::Query;
use crate::parser::{parse_document, Document};

pub const EX1: &str = include_str!("../examples/ex1.tkb");
pub const EX2: &str = include_str!("../examples/ex2.tkb");
pub const EX3: &str = include_str!("../examples/ex3.tkb");
pub const BOB: &str = include_str!("../examples/bob.tkb");

/// `(file name, source)` for every bundled example.
pub const ALL: [(&str, &str); 4] = [("ex1.tkb", EX1), ("ex2.tkb", EX2), ("ex3.tkb", EX3), ("bob.tkb", BOB)];

pub fn load(name: &str) -> Option<Document> {
    let (file, text) = ALL
        .iter()
        .find(|(f, _)| *f == name || f.trim_end_matches(".tkb") == name)?;
    Some(parse_document(text, file).expect("bundled examples parse"))
}

pub fn ex1() -> Document {
    load("ex1").expect("bundled")
}

/// The queries listed in a bundled example.
pub fn queries(name: &str) -> Vec<Query> {
    load(name).map(|d| d.queries).unwrap_or_default()
}
