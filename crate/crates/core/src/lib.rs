//! Carry-counting machinery for the divisibility `a! b! | n! (a+b-n)!` with
//! `(a, b, n) = (m + k, m, 2m)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; range scans are exposed over explicit subranges
//! together with associative merges so callers can parallelize freely.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod carry_chain;
pub mod density;
pub mod divisibility;
pub mod error;
pub mod primes;
pub mod range;
pub mod search;
pub mod valuation;

pub use error::{Error, Result};
pub use primes::Prime;
