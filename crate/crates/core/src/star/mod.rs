//! Nearest neighbour queries over stars of segments and the online nearest induced
//! segment structure built from them.
//!
//! A star with center `c` over a set `P` is the union of the segments `c p` for `p` in `P`.

mod online;
mod prefix;
mod sliced;
mod uniform;

pub use online::OnlineSegmentIndex;
pub use prefix::PrefixAnnIndex;
pub use sliced::StarIndex;
pub use uniform::UniformStarIndex;

use crate::geometry::point_segment_distance;
use crate::{QueryResult, Variant};

/// Result for the segment `a b` with the nearest point at parameter `t` along it.
pub(crate) fn segment_result(a: usize, b: usize, distance: f64, t: f64) -> QueryResult {
    if a == b {
        return QueryResult::new(Variant::Segment, distance, vec![(a, 1.0)]);
    }
    QueryResult::new(Variant::Segment, distance, vec![(a, 1.0 - t), (b, t)])
}

/// Exact distance from `q` to the segment between two labelled points.
pub(crate) fn score_segment(a: (usize, &[f64]), b: (usize, &[f64]), q: &[f64]) -> QueryResult {
    let (d, t) = point_segment_distance(a.1, b.1, q);
    segment_result(a.0, b.0, d, t)
}
