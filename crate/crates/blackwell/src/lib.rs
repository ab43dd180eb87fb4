//! Exact-rational toolkit for comparing finite information channels:
//! garbling (Blackwell) order with witnesses and certificates, zonotope
//! inclusion, k-decision orders, optimal decision-problem rewards, and
//! lattice meet/join for binary-input channels.

pub mod channel;
pub mod convexity;
pub mod data;
pub mod exact_linear;
pub mod orders;
pub mod polytope;
pub mod sample;
pub mod textio;
pub mod verify;
pub mod zonotope;
