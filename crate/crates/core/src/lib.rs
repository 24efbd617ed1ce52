//! Reversible-logic toolkit built around the Peres gate.
//!
//! * [`gate`]: the named reversible gates and the generalized k×k family.
//! * [`netlist`]: fan-out-free reversible circuits, the RNL text format,
//!   simulation, support-aware unit-delay timing and equivalence checking.
//! * [`adders`]: generators for the Peres full adder, ripple chains and
//!   carry-skip adders with fixed or variable block sizes.
//! * [`delay`]: the closed-form carry-skip delay model and a brute-force
//!   optimizer used as its oracle.
//! * [`bounds`]: garbage-output and constant-input lower bounds for
//!   irreversible multi-output functions.
//! * [`cli`]: the `revskip` command-line front end.

pub mod adders;
pub mod bounds;
pub mod cli;
pub mod delay;
pub mod gate;
pub mod netlist;

pub use gate::{Gate, GateError, GeneralizedSpec, TruthTable};
pub use netlist::{Metrics, Netlist, NetlistError};
