//! Physics-informed neural networks with logistic activations for two-scale
//! traveling-wave PDEs, trained on collocation points drawn from the active
//! gradient zones of the first hidden layer.
//!
//! The crate is organised bottom-up:
//!
//! - [`calculus`]: Stirling numbers of the second kind, closed-form sigmoid
//!   derivatives and the zone radius below which sigmoid derivatives stay
//!   non-negligible.
//! - [`net`]: the feedforward sigmoid network, its exact input jets
//!   (`u`, `u_x`, `u_t`, `u_xx`) and reverse-mode parameter gradients.
//! - [`pde`]: the benchmark problems (advection, Fisher, Zeldovich) with exact
//!   solutions.
//! - [`sampler`]: classical uniform and stratified collocation sampling.
//! - [`train`]: loss assembly, Adam with the two-level learning rate, and the
//!   two-stage training protocol.
//! - [`verify`]: numerical checks of the zone and gradient-filtering claims.
//! - [`experiment`]: config-driven runner that writes metrics CSVs,
//!   checkpoints, summaries and SVG plots.
//!
//! All arithmetic is `f64`.

pub mod calculus;
pub mod error;
pub mod experiment;
pub mod net;
pub mod pde;
pub mod plot;
pub mod sampler;
pub mod train;
pub mod verify;

pub use error::{Error, Result};
pub use net::{EvalJet, NetworkParams, NetworkShape};
pub use pde::{Domain, PdeProblem};
pub use sampler::{Point, SampleSet, SamplerConfig, ZoneSet};
pub use train::{TrainConfig, TrainMetrics};
