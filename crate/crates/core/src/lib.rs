//! Exact-arithmetic workbench for functions of bounded variation.
//!
//! Everything here works over [`Rational`]: there is no floating point in
//! the crate. The modules build on each other bottom-up:
//!
//! * [`exactnum`]: rationals, binary strings, dyadic intervals, partitions.
//! * [`polyfun`]: polygonal functions, sawtooth blocks, variation, Cauchy names.
//! * [`present`]: rational presentations and the vertical-shift construction.
//! * [`trees`]: binary trees, open-set codes, level measures, tree powers and
//!   the bounded-width path finder.
//! * [`jordan`]: the Jordan tree, its variation branch, and the range decoders.
//! * [`gadgets`]: the sawtooth gadgets, the jump function, the separation gadget.
//! * [`deriv`]: pseudo-slope bounds, slope witnesses, slope trees and
//!   alternation sequences.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;

pub mod deriv;
pub mod exactnum;
pub mod gadgets;
pub mod jordan;
pub mod polyfun;
pub mod present;
pub mod trees;

pub use error::{Error, Result};
pub use exactnum::{DyadicInterval, DyadicString, Partition, Rational};
pub use polyfun::{BlockFunction, ExactFunction, PolygonalFunction, RealFunction, SawtoothBlock};
pub use present::{Membership, Presentation};
pub use trees::{BinaryTree, OpenSetCode};

/// Three-valued outcome of a finitely checked assertion.
///
/// `Undecided` means the search budget ran out before a certificate was found
/// either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Combines verdicts: any failure wins, then any undecided.
    pub fn and(self, other: Verdict) -> Verdict {
        core::cmp::min_by_key(self, other, |v| match v {
            Verdict::Fail => 0,
            Verdict::Undecided => 1,
            Verdict::Pass => 2,
        })
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}
