//! Streaming one-step-ahead linear prediction over shift-structured
//! feature windows.
//!
//! The toolkit contains three sequential learners over sliding sample
//! windows:
//!
//! - [`predictors::Ogd`] — first-order sign-gradient descent, O(M) per step;
//! - [`predictors::Ons`] — the online Newton step, carrying a full M×M
//!   inverse Hessian proxy, O(M²) per step;
//! - [`predictors::FastOns`] — an exact reformulation of the Newton step
//!   that exploits the one-sample shift between consecutive windows. The
//!   inverse proxy is replaced by a rank-2 factor updated through a
//!   Givens/hyperbolic rotation pair, bringing the per-step cost to O(M)
//!   while producing the same weight trajectory as [`predictors::Ons`] up
//!   to floating-point round-off.
//!
//! The [`harness`] module adds data ingestion (CSV, 16-bit PCM WAV,
//! synthetic AR processes), experiment drivers (lockstep equivalence
//! comparison, metric collection) and a timing sweep that fits log-log
//! scaling exponents per algorithm.

pub mod harness;
pub mod loss;
pub mod params;
pub mod predictors;
pub mod rotations;
pub mod scalar;
pub mod window;

pub use loss::{absolute_loss, gradient_sign, StepOutcome};
pub use params::HyperParams;
pub use predictors::{FastOns, Ogd, Ons, Predictor, PredictorError};
pub use scalar::Scalar;
pub use window::{ExtendedVector, SlidingWindow};
