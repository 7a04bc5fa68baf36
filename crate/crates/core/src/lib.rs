//! Exact computations with finite-dimensional weak Hopf algebras, finite groupoids, module
//! algebras, smash products and Lie algebroid actions over the rationals.
//!
//! Every checker returns a [`report::Report`] whose failures carry concrete witnesses; typed
//! errors are reserved for malformed input and unsupported situations.

pub mod exact;
pub mod grouplike;
pub mod groupoid;
pub mod lie;
pub mod module_alg;
pub mod report;
pub mod smash;
pub mod split;
pub mod truncation;
pub mod walg;
