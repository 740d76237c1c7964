//! Coalitional-game analysis of group multiuser detection in a CDMA
//! multiple-access channel.
//!
//! Known users at a base station may pool their signature sequences so the
//! receiver decorrelates them jointly; users outside the group (and users of
//! other cells) are seen only as interference power. Each user's payoff is
//! its SINR, which cannot be transferred between users, so every partition of
//! the known-user set ("coalition structure") induces a payoff vector of a
//! non-transferable-utility game. This crate enumerates those structures,
//! computes the payoffs under decorrelating and matched-filter reception,
//! decides stability (individual rationality, dominance, core membership by
//! exhaustive deviation search), and runs seeded parameter sweeps over SNR,
//! shadowing, and path-loss exponent.
//!
//! The crate is `no_std` (with `alloc`); all file and terminal handling lives
//! in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod channel;
pub mod error;
pub mod experiment;
pub mod game;
pub mod partition;
pub mod payoff;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
