//! Combinatorics of Ekedahl-Oort and Newton stratifications for PEL-type
//! groups: Weyl group cosets and the specialization order on `ᴶW`, the
//! extended affine Weyl group, Newton points and `B(G, μ)`, fundamental
//! elements, and the map `b ↦ w(b)`.

pub mod affine;
pub mod eo_order;
pub mod error;
pub mod rootdata;
pub mod siegel;
pub mod strata;
pub mod weyl;

pub use error::{Error, Result};
