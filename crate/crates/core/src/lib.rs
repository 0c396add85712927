//! Numerical laboratory for random quantum channels built from random
//! subspaces of `C^k ⊗ C^d`: minimal output entropy bounds, the
//! concentration-of-measure estimates behind them, and the net/chaining
//! machinery used to prove Dvoretzky-type statements.

pub mod chaining;
pub mod channel;
pub mod concentration;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod optimize;
pub mod sampling;

pub use error::{Error, Result};
