//! Exact value-of-information analysis for agents who may not update by
//! conditionalization.
//!
//! The crate models finite decision problems with rational probabilities and
//! utilities, computes the classical value of information (which assumes the
//! agent conditionalizes) and a generalized value that scores the actions an
//! agent predicts she will actually take, and constructs choice sets on which
//! a modest agent is better off refusing free information.

pub mod adversary;
pub mod decision;
pub mod error;
pub mod generator;
pub mod prob;
pub mod problem_file;
pub mod properties;
pub mod rational;
pub mod scenarios;
pub mod update;
pub mod voi;

pub use error::{Error, Result};
pub use rational::Rational;
