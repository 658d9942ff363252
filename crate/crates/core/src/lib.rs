//! Stable matchings when agents hold approval preferences over several layers.
//!
//! An instance has `n` agents and `ell` layers; in each layer every agent
//! approves a set of other agents. A matching can be weakly, strongly or super
//! stable in a single layer, and these per-layer notions are lifted to the
//! whole instance by the all-layers, global, pair and individual aggregations.
//!
//! [`verify::check`] decides any notion for a given matching,
//! [`solvers::dispatch`] searches for a stable matching using the fastest
//! applicable algorithm, and [`oracle`] provides exhaustive ground truth on
//! small instances.

pub mod blocking;
pub mod error;
pub mod graphalg;
pub mod io;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod reductions;
pub mod solvers;
pub mod suites;
pub mod verify;

pub use blocking::StabilityBase;
pub use error::{Error, Result};
pub use matching::Matching;
pub use model::{AgentId, MultilayerInstance};
pub use verify::{Aggregation, StabilityQuery, Verdict};
