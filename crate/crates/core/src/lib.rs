//! Coherence fraction of quantum states and optimal coherence fraction of
//! quantum channels.
//!
//! Modules, bottom-up:
//!
//! - [`qcore`]: validated states, tensor products, partial traces, random sampling.
//! - [`measures`]: l1-norm and relative-entropy coherence, qubit closed forms, phase alignment.
//! - [`fraction`]: coherence fraction of states (exact qubit form, coordinate ascent, grid oracle).
//! - [`channels`]: Kraus channels, the named qubit families and their affine (Bloch) form.
//! - [`chan_analysis`]: optimal coherence fraction, cohering/decohering power, closed forms.
//! - [`io`]: JSON file formats for states and channels.

pub mod error;
pub mod chan_analysis;
pub mod channels;
pub mod families;
pub mod fraction;
pub mod io;
pub mod measures;
pub mod qcore;

pub use error::{Error, Result};
pub use fraction::{FractionResult, OptimizerConfig};
pub use qcore::{ComplexMatrix, DensityMatrix, PhaseVector, PureState};
pub use channels::{AffineRep, Channel, ChannelSpec};
pub use chan_analysis::{ChannelFractionResult, ComplementarityReport, SearchMethod};
