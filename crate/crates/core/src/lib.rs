//! Exact computations around hyperelliptic curves `y^2 = f(x)` over small
//! finite fields of odd characteristic: divisor class groups in Mumford
//! representation, zeta-function counting identities, divisor decompositions
//! under the hyperelliptic involution, pushforward measures on rank-2 bundle
//! types over the projective line, and the combinatorial coefficient bounds
//! that control them.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the
//! command-line driver live in the companion `bun2` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod charclass;
pub mod curve;
pub mod divisors;
pub mod jacobian;
pub mod measures;
