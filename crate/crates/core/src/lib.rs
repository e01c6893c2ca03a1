//! Contact-process laboratory on rank-one inhomogeneous and Erdős–Rényi
//! random graphs.
//!
//! - [`weights`]: weight laws, mixed-Poisson offspring laws, budget functions.
//! - [`graph`]: graph sampling, the glued star-path graph, traversal, file IO.
//! - [`gw`]: marked mixed-Poisson Galton–Watson trees and the neighbourhood
//!   coupling harness.
//! - [`structure`]: exploration / trial / experiment pipeline, greedy ER stars
//!   and star certificates.
//! - [`contact`]: event-driven contact-process simulation and the exact
//!   small-graph extinction oracle.
//! - [`harness`]: sweeps, pilot calibration, metastability tests.

pub mod rng;
pub mod weights;
pub mod exec;
pub mod graph;
pub mod contact;
pub mod stats;
pub mod gw;
pub mod structure;
pub mod harness;
