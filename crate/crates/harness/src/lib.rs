//! Random instance generation, verification campaigns, reports and the
//! `cmean` command-line interface.

pub mod campaign;
pub mod cli;
pub mod generate;
pub mod report;
pub mod selftest;
