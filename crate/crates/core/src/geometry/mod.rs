//! Linear algebra and simplex primitives shared by all query structures.

mod canonical;
mod flat;
pub mod linalg;
mod point;
mod simplex;

pub use canonical::{orbit_point, orthonormal_frame, BaseAngles, CanonicalFrame};
pub use flat::{
    direction, flat_distance, linear_flat_distance, point_segment_distance, BaseSet, FlatFrame,
    FlatProjection,
};
pub use point::{Point, PointSet};
pub use simplex::{simplex_distance, SimplexWitness};
pub(crate) use simplex::simplex_distance_coords;
