//! Exact solvers, hardness reductions, and witness machinery for
//! tokenisation objectives over small alphabets.
//!
//! The crate is organised bottom-up: `core` defines the shared vocabulary
//! of types, `encoders` the three tokenisation procedures, `oracles` the
//! exact (exponential-time) solvers, `reductions` the instance maps from
//! MAX2SAT / vertex cover / addition chains, `witnesses` the certificate
//! constructions and their inverses, and `harness` the end-to-end
//! equivalence pipelines. `formats` holds the plain-text file formats used
//! by the command-line frontend.

pub mod core;
pub mod encoders;
pub mod formats;
pub mod harness;
pub mod oracles;
pub mod reductions;
pub mod witnesses;
