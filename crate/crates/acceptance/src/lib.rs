//! Workspace acceptance checks live in `tests/acceptance.rs`.
