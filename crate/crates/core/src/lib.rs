//! Exact verification engine for deformed supersymmetry algebras.

pub mod background;
pub mod clifford;
pub mod config;
pub mod emit;
pub mod exactla;
pub mod g2;
pub mod grading;
pub mod par;
pub mod report;
pub mod scenarios;
pub mod suites;
pub mod superfields;
pub mod susy;
