//! Benchmark forge and evaluation toolchain for visual graph reasoning.
//!
//! The pipeline turns seeded random graph instances into vision-language
//! benchmark records: algorithmic solvers produce gold answers, a
//! deterministic renderer draws each graph as an SVG under controlled style
//! variations, templated describers and questioners produce the textual side,
//! and an evaluation harness drives external chat endpoints and scores their
//! replies by exact match and by task-specific answer verification.

pub mod chat;
pub mod dataset;
pub mod describer;
pub mod error;
pub mod eval;
pub mod generator;
pub mod graph;
pub mod oracles;
pub mod questioner;
pub mod reference;
pub mod seeding;
pub mod visualizer;

pub use error::{Error, Result};
