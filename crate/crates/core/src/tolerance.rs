/// Geometric tolerances shared by every structure.
///
/// Inputs are plain `f64`; these thresholds decide rank, zero and containment tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Smallest singular value accepted for an affinely independent base.
    pub rank: f64,
    /// Distances below this are treated as zero when a direction is needed.
    pub zero: f64,
    /// Barycentric slack for closed-simplex containment.
    pub containment: f64,
    /// Squared heights in `[-realizable, 0)` clamp to zero during trilateration.
    pub realizable: f64,
    /// Barycentric slack used when accepting a face projection.
    pub face: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        rank: 1e-9,
        zero: 1e-12,
        containment: 1e-10,
        realizable: 1e-9,
        face: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
