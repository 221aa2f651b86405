//! Library surface of the CUSUM design CLI: configuration loading, command
//! implementations, and output rendering. The binary in `main.rs` is a thin
//! argument-parsing layer over this crate.

pub mod commands;
pub mod config;
pub mod output;
