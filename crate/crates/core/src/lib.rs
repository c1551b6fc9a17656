//! Transfinite values of open infinite games.
//!
//! - [`ordinal`]: Cantor normal form ordinals below epsilon_0.
//! - [`gamecore`]: game values, strategies, well-founded tree ranks, climbing games.
//! - [`hex`]: finite and infinite Hex.
//! - [`stoneplacing`]: stone-placing games on hypergraphs.
//! - [`draughts`]: Infinite Draughts and the tree-to-position compiler.
//! - [`verify`]: the acceptance suite.

pub mod draughts;
pub mod gamecore;
pub mod hex;
pub mod ordinal;
pub mod stoneplacing;
pub mod verify;

pub use ordinal::Ordinal;
