//! Text formats and seeded generation behind the `vass` binary, exposed as
//! a library so tests and downstream tooling can reuse them.

pub mod format;
pub mod gen;
