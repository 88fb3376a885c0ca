//! Front end for `wildiag-core`: the `.wd` input language, JSON and DOT
//! exporters, seeded random generators and the property suites behind
//! `wildiag check`.

pub mod dot;
pub mod dsl;
pub mod gen;
pub mod json;
pub mod report;
pub mod suites;

pub use dsl::{parse, parse_formal, parse_modified, print_formal, Diagnostic, DslDocument};
