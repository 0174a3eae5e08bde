//! Random walks on Newman–Watts small-world graphs.
//!
//! The crate samples `H_{n,k,p}` (an `(n,k)`-ring plus independent shortcuts with
//! probability `p = c/n`), computes exact mixing times of the lazy walk, profiles
//! connected-set conductance across dyadic volume scales, counts subtrees of
//! Galton–Watson trees through exact power series, and evaluates the explicit
//! constants that appear in the `log² n` mixing bounds.
//!
//! ```
//! use nwmix::graph::{sample_small_world, GraphSpec};
//! use nwmix::walk::{mixing_time, MixingOptions, Starts};
//!
//! let g = sample_small_world(&GraphSpec::with_integer_c(64, 1, 4, 7)?)?;
//! let result = mixing_time(&g, &Starts::All, MixingOptions::default())?;
//! assert!(!result.censored);
//! # Ok::<(), nwmix::Error>(())
//! ```

pub mod conductance;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod gw;
pub mod rational;
pub mod seed;
pub mod walk;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/graph-model.md")]
    mod graph_model {}
    #[doc = include_str!("../../../book/src/walks.md")]
    mod walks {}
    #[doc = include_str!("../../../book/src/conductance.md")]
    mod conductance {}
    #[doc = include_str!("../../../book/src/subtrees.md")]
    mod subtrees {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
