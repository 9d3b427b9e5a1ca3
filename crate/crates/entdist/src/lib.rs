//! Entanglement between two spin-1/2 ensembles from collective observables.
//!
//! A handful of sample-level numbers — the total spin components of two
//! samples and their cross-correlations — define a two-qubit "virtual"
//! state whose entanglement is a lower bound on the average entanglement
//! over all cross-sample pairs, and equals it for a recognizable class of
//! states. This crate builds the example states, runs that collective
//! pipeline, and checks it against a brute-force average over explicit
//! pair reductions.
//!
//! Modules:
//! - [`matcore`]: dense complex matrices, Kronecker products, partial
//!   trace/transpose, Hermitian eigenvalues.
//! - [`pairmeasures`]: two-qubit states in Pauli-coefficient form,
//!   negativity and concurrence.
//! - [`states`]: explicit N-qubit states, ensembles, pair reductions and
//!   the state-vector file format.
//! - [`collective`]: collective moments, the virtual state, closed-form
//!   eigenvalues and the tightness analysis.
//! - [`oracle`]: brute-force pair averages and verdicts.
//! - [`cli`]: the `entdist` command line.

pub mod cli;
pub mod collective;
pub mod error;
pub mod matcore;
pub mod oracle;
pub mod pairmeasures;
pub mod states;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
