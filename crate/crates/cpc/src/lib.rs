//! Workbench companion to `cpc-core`: surface syntax for the calculus and
//! its two encoded languages, pretty-printing, trace running, and the
//! drivers behind the `cpc` binary.

pub mod cmd;
pub mod corpus_data;
pub mod lex;
pub mod parse;
pub mod parse_linda;
pub mod parse_spi;
pub mod print;
pub mod run;
