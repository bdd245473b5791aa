//! Exact computations for minimal Cantor systems presented by Kakutani-Rohlin tower sequences.

// Field handles cache root brackets behind a mutex; hashing never looks at the cache.
#![allow(clippy::mutable_key_type)]

pub mod catalog;
pub mod cli;
pub mod dimgroup;
pub mod exactnum;
pub mod intlattice;
pub mod measure;
pub mod serial;
pub mod spectra;
pub mod tower;
