//! Capacity theory for classical and classical-quantum list decoding.
//!
//! - [`channel`]: distributions, density matrices, channels, divergences.
//! - [`capacity`]: alternating maximization with a duality-gap certificate.
//! - [`renyi`]: Rényi overlaps and strong-converse exponents.
//! - [`code`]: list codes, exact and Monte-Carlo error probabilities, the
//!   list lift, derandomization, and numerical checks of the converse bound.
//! - [`experiment`]: rate sweeps that drive everything above.
//! - [`io`]: JSON formats for channels, states and codes.

#![forbid(unsafe_code)]

pub mod capacity;
pub mod channel;
pub mod code;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod renyi;
pub mod rng;

mod exact;

pub use capacity::{arimoto_blahut, capacity_bounds, CapacityResult};
pub use channel::{Channel, ChannelKind, DensityMatrix, ProbDist, State};
pub use error::{Error, Result};
