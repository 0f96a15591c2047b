//! Exact symbolic computation in the twisted quantized enveloping algebra
//! `U_q^tw(gl_n)` of type CI, realized as a coideal subalgebra of
//! `U_q(sp_2n)` through its reflection-equation presentation.
//!
//! All quantum quantities live over the field `Q(i)(q)` ([`qscalar`]).
//! Elements of the algebra are linear combinations of words in the
//! generators `s[i,j]` ([`freealg`]); the defining relations are expanded
//! from the matrix identities built in [`tensorlab`] and oriented into a
//! confluent rewriting system in [`pbwengine`]. The `q = 1` side lives in
//! [`classical`] and [`poisson`], and the braid group action in
//! [`braidact`].
//!
//! The crate is `no_std` and only needs an allocator.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod audit;
pub mod braidact;
pub mod classical;
pub mod crosscheck;
pub mod error;
pub mod freealg;
pub mod pbwengine;
pub mod poisson;
pub mod qscalar;
pub mod tensorlab;

pub use error::Error;
pub use freealg::{Element, Gen, Word};
pub use pbwengine::Engine;
pub use qscalar::{GaussRat, LaurentPoly, RatFunc};
