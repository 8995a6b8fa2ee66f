//! Finite ultrametric spaces and their combinatorial structure.
//!
//! The crate revolves around a single data model: a finite ultrametric space
//! (exact rational distances), its nerve of closed balls (a laminar family
//! forming a ramified tree), and the valued-tree codec between the two. On
//! top of that it provides
//!
//! * generators for standard spaces (max-distance spaces, truncated word
//!   spaces, block unions realizing a prescribed spectrum),
//! * spectrum-preserving partial embeddings and their one-point extension,
//! * the path-extension algebra: initial segments of ball chains, their
//!   lattice-like infimum, the induced ultrametric, and the embedding
//!   `phi` of the host into its path space,
//! * word monoids with a compatible addition lifted to balls and paths,
//! * the subdominant ultrametric and small-scale divisibility search.
//!
//! All distance arithmetic is exact (`Rat`), all enumeration orders are
//! deterministic, and every tie is broken by least index.

pub mod embed;
pub mod fixtures;
pub mod generators;
pub mod json;
pub mod monoid;
pub mod path;
pub mod ramsey;
pub mod rat;
pub mod space;
pub mod tree;

pub use rat::{ExtRat, Rat};
pub use space::{Ball, Space, SpectrumSet};
