//! RePair grammar compression, computed either from a plain text or
//! directly from a straight-line program of the text.
//!
//! The entry points are [`text::naive::repair_naive`] and
//! [`text::fast::repair_fast`] for texts, [`recompress::scan::run`] and
//! [`recompress::fast::run_fast`] for SLPs, and [`hybrid::run_hybrid`].

pub mod corpus;
pub mod error;
pub mod format;
pub mod freq;
pub mod grammar;
pub mod hybrid;
pub mod level;
mod local;
pub mod recompress;
pub mod rl;
mod runlist;
pub mod slp;
pub mod stats;
pub mod symbol;
pub mod text;

pub use error::{Error, Result};
pub use grammar::RePairGrammar;
pub use slp::Slp;
pub use symbol::{Bigram, Symbol};
