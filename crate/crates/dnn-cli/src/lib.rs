//! Batch front end for the DNN solvers: instance handling, suite running
//! and serialization.  The `dnn` binary in this crate wires these pieces
//! to a command line.

pub mod instances;
pub mod output;
pub mod suite;
