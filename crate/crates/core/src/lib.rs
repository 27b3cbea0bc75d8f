//! Groups of finite-state machines `K(G, A, H)` over the distance-constrained
//! subshift `X_A`, impredictable recursively enumerable sets, and multi-head
//! group-walking automata, with brute-force cross-checks at desk scale.

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod automata;
pub mod groups;
pub mod kgroup;
pub mod pipeline;
pub mod recursion;
mod serde_util;
pub mod subshift;
