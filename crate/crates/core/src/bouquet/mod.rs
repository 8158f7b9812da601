//! Nearest flat among the flats through a common base, and the enumeration indexes
//! for the nearest induced (linear) flat built from one bouquet per base.
//!
//! The bouquet of a base `B` over `P` is the family of flats `flat(B ∪ {p})`. Projecting
//! onto the orthogonal complement of `F_B` turns it into a star of lines through the
//! origin, so one nearest neighbour query over the directions `±dir(F_B, p)` finds the
//! nearest flat.

mod enumerate;

pub use enumerate::{AnifIndex, AnlfIndex};

use crate::ann::{AnnConfig, AnnIndex};
use crate::geometry::linalg::{dot, norm};
use crate::geometry::{direction, BaseSet, FlatFrame, Point};
use crate::{Error, QueryResult, Result, Tolerances, Variant};

/// Shared per-base data: the frame and one direction per indexed point.
#[derive(Debug, Clone)]
pub(crate) struct BouquetCore {
    base: BaseSet,
    frame: FlatFrame,
    variant: Variant,
    ids: Vec<usize>,
    directions: Vec<Vec<f64>>,
    heights: Vec<f64>,
    /// Member weights of each point's projection onto `F_B`.
    foot_weights: Vec<Vec<f64>>,
    on_flat: Vec<usize>,
    /// `F_B` origin followed by the complement basis, row by row, so a query
    /// is lifted from one contiguous buffer.
    kernel: Vec<f64>,
}

/// A query expressed relative to `F_B`.
#[derive(Debug, Clone)]
pub(crate) struct Lifted {
    /// Distance from `F_B`.
    pub height: f64,
    /// Unit direction away from `F_B` in complement coordinates (zero if on the flat).
    pub direction: Vec<f64>,
    /// `F_B` coordinates of the query.
    local: Vec<f64>,
}

impl BouquetCore {
    pub fn new(base: BaseSet, frame: FlatFrame, points: &[Point], variant: Variant) -> Result<Self> {
        let dim = base.dim();
        let base_ids = base.ids();
        let mut kernel = frame.origin().to_vec();
        kernel.extend(frame.complement().iter().flatten());
        let mut core = Self {
            base,
            frame,
            variant,
            ids: Vec::new(),
            directions: Vec::new(),
            heights: Vec::new(),
            foot_weights: Vec::new(),
            on_flat: Vec::new(),
            kernel,
        };
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if base_ids.contains(&p.id) {
                continue;
            }
            let h = core.frame.distance(&p.coords);
            if h < Tolerances::DEFAULT.rank {
                core.on_flat.push(p.id);
                continue;
            }
            core.ids.push(p.id);
            core.directions.push(direction(&core.frame, &p.coords)?);
            core.heights.push(h);
            core.foot_weights.push(core.frame.member_weights(&core.frame.local(&p.coords)));
        }
        Ok(core)
    }

    pub fn base(&self) -> &BaseSet {
        &self.base
    }

    pub fn frame(&self) -> &FlatFrame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn on_flat(&self) -> &[usize] {
        &self.on_flat
    }

    pub fn check(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.base.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base.dim(),
                got: q.len(),
            });
        }
        Ok(())
    }

    /// Distance of `q` from `F_B` and its direction in complement coordinates
    /// (zero when `q` is on the flat).
    fn height_and_direction(&self, q: &[f64]) -> (f64, Vec<f64>) {
        let dim = q.len();
        let (origin, complement) = self.kernel.split_at(dim);
        let mut u: Vec<f64> = complement
            .chunks_exact(dim)
            .map(|c| c.iter().zip(q.iter().zip(origin)).map(|(a, (x, o))| a * (x - o)).sum())
            .collect();
        let height = norm(&u);
        if height > Tolerances::DEFAULT.zero {
            u.iter_mut().for_each(|x| *x /= height);
        } else {
            u.iter_mut().for_each(|x| *x = 0.0);
        }
        (height, u)
    }

    pub fn lift(&self, q: &[f64]) -> Lifted {
        let (height, direction) = self.height_and_direction(q);
        Lifted {
            height,
            direction,
            local: self.frame.local(q),
        }
    }

    fn result(&self, distance: f64, lifted: &Lifted, extra: Option<(usize, f64)>) -> QueryResult {
        let foot = self.frame.member_weights(&lifted.local);
        let mut tau: Vec<(usize, f64)> = self.base.ids().into_iter().zip(foot).collect();
        if let Some((slot, w)) = extra {
            for (t, c) in tau.iter_mut().zip(&self.foot_weights[slot]) {
                t.1 -= w * c;
            }
            tau.push((self.ids[slot], w));
        }
        QueryResult::new(self.variant, distance, tau)
    }

    /// Result for a query that lies on `F_B` or whose best flat degenerates to `F_B`.
    pub fn base_result(&self, lifted: &Lifted) -> QueryResult {
        self.result(lifted.height, lifted, None)
    }

    /// Exact distance to `flat(B ∪ {p})` for the point in `slot`.
    pub fn flat_result(&self, slot: usize, lifted: &Lifted) -> QueryResult {
        let s = lifted.height * dot(&lifted.direction, &self.directions[slot]);
        let distance = (lifted.height * lifted.height - s * s).max(0.0).sqrt();
        self.result(distance, lifted, Some((slot, s / self.heights[slot])))
    }

    /// Distance to the positive halfflat of the point in `slot`.
    pub fn halfflat_distance(&self, slot: usize, lifted: &Lifted) -> f64 {
        let s = lifted.height * dot(&lifted.direction, &self.directions[slot]);
        if s <= 0.0 {
            lifted.height
        } else {
            (lifted.height * lifted.height - s * s).max(0.0).sqrt()
        }
    }

    /// Exact distance to the positive halfflat of `flat(B ∪ {p})` on the side of `p`.
    pub fn halfflat_result(&self, slot: usize, lifted: &Lifted) -> QueryResult {
        let s = lifted.height * dot(&lifted.direction, &self.directions[slot]);
        if s <= 0.0 {
            let mut r = self.result(lifted.height, lifted, Some((slot, 0.0)));
            r.distance = lifted.height;
            return r;
        }
        let distance = (lifted.height * lifted.height - s * s).max(0.0).sqrt();
        self.result(distance, lifted, Some((slot, s / self.heights[slot])))
    }

    /// Candidate for the flats that collapse onto `F_B`.
    fn degenerate_result(&self, lifted: &Lifted) -> Option<QueryResult> {
        let &id = self.on_flat.first()?;
        let mut r = self.base_result(lifted);
        r.tau.push((id, 0.0));
        Some(QueryResult::new(r.variant, r.distance, r.tau))
    }
}

/// Approximate nearest flat among `flat(B ∪ {p})`, `p ∈ P ∖ B`.
#[derive(Debug, Clone)]
pub struct BouquetIndex {
    core: BouquetCore,
    ann: Option<AnnIndex>,
}

impl BouquetIndex {
    /// Points lying on `F_B` are left out of the index and recorded in [`Self::excluded`].
    pub fn build(base: BaseSet, points: &[Point], cfg: AnnConfig) -> Result<Self> {
        let variant = if base.is_linear() { Variant::Anlf } else { Variant::Anif };
        let frame = base.frame().with_complement();
        let core = BouquetCore::new(base, frame, points, variant)?;
        let signed = core
            .directions
            .iter()
            .enumerate()
            .flat_map(|(i, u)| [(2 * i, u.clone()), (2 * i + 1, u.iter().map(|x| -x).collect())]);
        let ann = if core.len() == 0 {
            None
        } else {
            Some(AnnIndex::build(core.frame.complement().len(), signed, cfg)?)
        };
        Ok(Self { core, ann })
    }

    pub fn base(&self) -> &BaseSet {
        self.core.base()
    }

    pub fn frame(&self) -> &FlatFrame {
        self.core.frame()
    }

    /// Ids of the indexed points.
    pub fn ids(&self) -> &[usize] {
        self.core.ids()
    }

    /// Indexed vectors `±dir(F_B, p)` in complement coordinates, in slot order.
    pub fn signed_directions(&self) -> Vec<Vec<f64>> {
        self.core
            .directions
            .iter()
            .flat_map(|u| [u.clone(), u.iter().map(|x| -x).collect()])
            .collect()
    }

    /// Ids of points that lie on `F_B`.
    pub fn excluded(&self) -> &[usize] {
        self.core.on_flat()
    }

    /// Height above `F_B` and unit direction of `q`; the first half of
    /// [`Self::query_distance`].
    pub(crate) fn lift_direction(&self, q: &[f64]) -> (f64, Vec<f64>) {
        self.core.height_and_direction(q)
    }

    /// Index queried with the direction from [`Self::lift_direction`], if any.
    pub(crate) fn ann(&self) -> Option<&AnnIndex> {
        self.ann.as_ref()
    }

    pub(crate) fn set_ann(&mut self, ann: Option<AnnIndex>) {
        self.ann = ann;
    }

    /// Distance that [`Self::query`] would report for a query with the given
    /// height and direction, without assembling the result.
    pub(crate) fn query_distance(&self, height: f64, direction: &[f64]) -> Result<f64> {
        if height <= Tolerances::DEFAULT.zero {
            return Ok(height);
        }
        let Some(ann) = &self.ann else {
            return Ok(height);
        };
        // unit directions at distance δ meet at cosine 1 - δ²/2, so the flat
        // distance is h·sin = h·δ·sqrt(1 - δ²/4)
        let delta = ann.query(direction)?.distance;
        let flat = height * delta * (1.0 - 0.25 * delta * delta).max(0.0).sqrt();
        Ok(if self.core.on_flat.is_empty() { flat } else { flat.min(height) })
    }

    pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
        self.core.check(q)?;
        let lifted = self.core.lift(q);
        if lifted.height <= Tolerances::DEFAULT.zero {
            return Ok(self.core.base_result(&lifted));
        }
        let mut best = self.core.degenerate_result(&lifted);
        if let Some(ann) = &self.ann {
            let hit = ann.query(&lifted.direction)?;
            best = QueryResult::best(best, Some(self.core.flat_result(hit.id / 2, &lifted)));
        }
        Ok(best.unwrap_or_else(|| self.core.base_result(&lifted)))
    }
}

/// Like [`BouquetIndex`], but each point contributes only the halfflat of
/// `flat(B ∪ {p})` bounded by `F_B` that contains `p`.
#[derive(Debug, Clone)]
pub struct PositiveBouquetIndex {
    core: BouquetCore,
    ann: Option<AnnIndex>,
}

impl PositiveBouquetIndex {
    pub fn build(base: BaseSet, points: &[Point], cfg: AnnConfig) -> Result<Self> {
        let variant = if base.is_linear() { Variant::Anlf } else { Variant::Anif };
        let frame = base.frame().with_complement();
        let core = BouquetCore::new(base, frame, points, variant)?;
        let ann = positive_ann(&core, 0..core.len(), cfg)?;
        Ok(Self { core, ann })
    }

    pub fn ids(&self) -> &[usize] {
        self.core.ids()
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        self.core.directions()
    }

    pub fn excluded(&self) -> &[usize] {
        self.core.on_flat()
    }

    pub fn query(&self, q: &[f64]) -> Result<QueryResult> {
        self.core.check(q)?;
        let lifted = self.core.lift(q);
        if lifted.height <= Tolerances::DEFAULT.zero {
            return Ok(self.core.base_result(&lifted));
        }
        let hit = match &self.ann {
            Some(ann) => Some(self.core.halfflat_result(ann.query(&lifted.direction)?.id, &lifted)),
            None => None,
        };
        Ok(QueryResult::best(hit, self.core.degenerate_result(&lifted)).unwrap_or_else(|| self.core.base_result(&lifted)))
    }
}

/// Index over the positive directions of the given slots, labelled by slot.
pub(crate) fn positive_ann(core: &BouquetCore, slots: impl IntoIterator<Item = usize>, cfg: AnnConfig) -> Result<Option<AnnIndex>> {
    let items: Vec<(usize, &Vec<f64>)> = slots.into_iter().map(|s| (s, &core.directions[s])).collect();
    if items.is_empty() {
        return Ok(None);
    }
    Ok(Some(AnnIndex::build(core.frame.complement().len(), items, cfg)?))
}
