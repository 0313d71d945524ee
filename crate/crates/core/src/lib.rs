//! Periodic billiard trajectories in polygons: unfolding strips and corridors,
//! the rotation-vector stability test, winding vectors with semicircle
//! decorations, the hexagonal-lattice case analysis near the 30-60-90
//! triangle, the horizontal-component transition system of the Veech
//! triangles `V_n`, and orbit-tile rasters.

pub mod error;
pub mod geom;
pub mod stability;
pub mod svg;
pub mod tiles;
pub mod tri3060;
pub mod unfolding;
pub mod veech;

pub use error::{Error, Result};

/// Default tolerance for identity, closure and corridor-width tests.
pub const DEFAULT_TOL: f64 = 1e-9;
