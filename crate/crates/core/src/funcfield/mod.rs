//! The genus-2 hyperelliptic function field K = F_q(x)[y]/(y² − f(x)), its canonical
//! derivation, differentials, dual derivations and the hyperelliptic involution.

mod curve;
mod derivation;
mod element;
mod poly;

pub use curve::{default_degree_cap, Curve};
pub use derivation::{
    canonical_d, dual_derivation, hyperelliptic_involution, iterate_derivation, pair, Derivation,
    Differential, Involution,
};
pub use element::FfElem;
pub use poly::Poly;
