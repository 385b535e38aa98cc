//! Completed (Tate) cohomology and completed Ext-functors for modules over
//! modular group algebras F_p[G] of finite groups.
//!
//! The crate computes the completion of the ordinary Ext-functors through
//! three independent routes — stabilized homs between syzygies, the colimit
//! of connecting maps along a projective resolution of the coefficient
//! module, and the cohomology of a complete resolution — together with cup,
//! external and composition products on the resulting graded groups.  All
//! arithmetic is exact over F_p and every answer is produced with a runtime
//! certificate (stabilization or acyclicity witness) that is re-verified on
//! the spot.

pub mod catalog;
pub mod completion;
pub mod error;
pub mod linalg;
pub mod modrep;
pub mod products;
pub mod resolution;
pub mod stable;
pub mod suites;

pub use error::Error;

use std::sync::OnceLock;

/// Hard cap on matrix dimensions, read once from TATEKIT_MAX_DIM
/// (default 4096).  Guards against runaway resolutions.
pub fn max_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("TATEKIT_MAX_DIM")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(4096)
    })
}

/// Error out if a vector space of dimension `dim` exceeds the cap.
pub fn check_dim(dim: usize) -> Result<(), Error> {
    let cap = max_dim();
    if dim > cap {
        Err(Error::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}
