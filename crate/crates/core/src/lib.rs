//! Generalized network creation games on weighted host graphs.

pub mod cli;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod families;
pub mod game;
pub mod hostgraph;
pub mod io;
pub mod optima;
pub mod random;
mod scalar;
pub mod weight;

pub use error::{Error, Result};
pub use game::{CostBreakdown, Network, StrategyProfile};
pub use hostgraph::{HostGraph, HostKind};
pub use weight::{Rational, Weight};
