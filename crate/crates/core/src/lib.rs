//! Construction and triple-transitivity certification of strongly regular graphs.
//!
//! The crate builds the collinearity graph of the elliptic quadric `Q^-(5, q)` and
//! the affine polar graphs `VO^eps_{2m}(2)` from their quadratic forms, then compares
//! three dimensions at a base vertex `w`:
//!
//! * `T0`, the span of the products `E*_i A_j E*_k`,
//! * `T`, the Terwilliger algebra generated by the `A_j` and `E*_i`,
//! * `End_{H_w}`, the centraliser of the stabiliser of `w` in a group `H` generated by
//!   explicit automorphisms.
//!
//! Since `T0 <= T <= End_{Aut_w} <= End_{H_w}`, equality of the outer two dimensions on a
//! vertex-transitive graph certifies triple transitivity without knowing `Aut` itself.

pub mod bitset;
pub mod config;
pub mod error;
pub mod formats;
pub mod gf;
pub mod orbits;
pub mod quadspace;
pub mod srg;
pub mod talg;
pub mod verifier;

pub use error::{Error, Result};
