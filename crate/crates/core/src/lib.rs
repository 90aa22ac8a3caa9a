//! Exact computational algebra for group algebras of indecomposable
//! 2-groups and the loop algebras built on top of them.
//!
//! The library computes Wedderburn decompositions of `KG` for the six
//! families of finite nonabelian 2-groups whose group algebras decompose
//! into fields and quaternion algebras, over `Q` and over finite fields of
//! odd order, and of `KL` for the corresponding RA loops. Component counts
//! are obtained three independent ways (element-level brute force, a
//! subquotient counting pipeline, and closed-form predictions) so that
//! each route checks the others.

pub mod abelian;
pub mod arith2;
pub mod classify;
pub mod codes;
mod gf;
pub mod groups;
pub mod raloops;
pub mod wedderburn;
