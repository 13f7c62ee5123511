//! Finite order-theoretic constructions: posets, bounded sequence spaces,
//! the ternary universal relation, depletions and walks, reduced products,
//! the condition calculus of a forcing poset, and tie points in the clopen
//! algebra of Cantor space.

pub mod bignum;
pub mod depletion;
pub mod forcing;
pub mod order;
pub mod product;
pub mod seq;
pub mod ternary;
pub mod tie;
pub mod universal;
pub mod verify;
