//! Synthesis of AND-OR path and binary adder (carry) circuits over the
//! monotone basis {AND2, OR2}.
//!
//! The crate is organised bottom-up:
//!
//! * [`circuit`] holds the append-only gate arena, metrics, evaluation and
//!   netlist export.
//! * [`reference`] and [`verify`] provide the functional oracles every
//!   construction is checked against.
//! * [`symmetric`] builds delay-optimum symmetric trees, leftist circuits and
//!   the triangular-set machinery that lets symmetric trees share gates.
//! * [`aop`] is the depth-optimizing AND-OR path synthesis with linear size.
//! * [`prefix`] contains Ladner-Fischer prefix networks and the small adders.
//! * [`adder`] assembles the recursive and linearized adder families.
//! * [`report`] turns a built circuit into a machine-readable summary.

pub mod adder;
pub mod aop;
pub mod circuit;
mod error;
pub mod export;
pub mod prefix;
pub mod reference;
pub mod report;
pub mod symmetric;
pub mod verify;

pub use circuit::{Circuit, GateKind, Node, NodeId};
pub use error::{Error, Result};

/// Exact `⌊log2 x⌋` for `x ≥ 1`.
pub(crate) fn floor_log2(x: u64) -> u32 {
    debug_assert!(x > 0);
    63 - x.leading_zeros()
}

/// Exact `⌈log2 x⌉` for `x ≥ 1`.
pub(crate) fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x > 0);
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}
