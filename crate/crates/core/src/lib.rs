//! Exact transfinite means of symbolic sequences indexed by ordinals below ε₀.
//!
//! Sequences are finite trees over constant runs, concatenation, finite and
//! ω-fold repetition, and a doubling oscillator. Their upper and lower means
//! are computed in closed form by [`mean::upper_mean`] and [`mean::lower_mean`].

pub mod capture;
pub mod laws;
pub mod mean;
pub mod ordinal;
pub mod rational;
pub mod seq;
mod syntax;

pub use capture::{CaptureError, ProbSpace};
pub use mean::{divide, lower_mean, mean, upper_mean, DivideError, MeanPair};
pub use ordinal::{Ordinal, OrdinalError, ParseError};
pub use rational::Rat;
pub use seq::{LabelSeq, RealSeq, Seq, SeqError};
