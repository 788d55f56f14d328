//! Exact-arithmetic heights for algebraic dynamics over the rational
//! function field k(t).
//!
//! The crate computes Weil heights of points in products of projective
//! spaces over Q(t) or F_p(t), the pullback action of a morphism or
//! correspondence on the Neron-Severi lattice with its expanding/contracting
//! spectral splitting, and vector-valued canonical heights by exact Tate
//! telescoping, together with orbit classification and bounded-height
//! censuses over finite base fields.
//!
//! Start with the runnable programs in `examples/`; each one walks through a
//! capability end to end. The `heightforge` binary exposes the same
//! pipeline stages as subcommands with tab-separated machine output.

pub mod algebra;
pub mod cli;
pub mod canheight;
pub mod correspondence;
pub mod dynparse;
pub mod error;
pub mod nslattice;
pub mod northcott;
pub mod projective;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
