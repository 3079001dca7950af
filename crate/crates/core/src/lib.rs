//! Mp(2)-projected entanglement probabilities for circle, cylinder, coset
//! and cat states, with series oracles, closed forms and figure sweeps.

pub mod error;
pub mod numerics;
pub mod states;
pub mod pair;
pub mod circle;
pub mod cylinder;
pub mod coset;
pub mod cat;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
