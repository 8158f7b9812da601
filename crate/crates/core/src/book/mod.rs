//! Nearest induced simplex.
//!
//! For a base `B` of `k - 1` points, the *book* of `B` holds the pages
//! `conv(B ∪ {p})`. All pages are rotated into one canonical halfflat `G`, where page
//! membership of a point reduces to dominance of base angles. A range tree over the
//! angles yields canonical sets, each carrying a positive-bouquet index; a randomized
//! binary search over the orbit of the query then finds an approximately nearest page.

mod anis;
mod range_tree;

pub use anis::AnisIndex;
pub use range_tree::RangeTree;

use crate::ann::{AnnConfig, AnnIndex};
use crate::bouquet::{positive_ann, BouquetCore, Lifted};
use crate::geometry::simplex_distance_coords;
use crate::geometry::{orbit_point, BaseSet, CanonicalFrame, Point};
use crate::{Error, QueryResult, Result, Tolerances, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier of a canonical set of a [`BookIndex`].
pub type Handle = usize;

/// Relative precision of the critical value bisection.
const BISECTION_TOLERANCE: f64 = 1e-10;
/// Rejection attempts before sampling falls back to an explicit list.
const SAMPLE_ATTEMPTS: usize = 32;

#[derive(Debug, Clone)]
pub struct BookIndex {
    frame: CanonicalFrame,
    core: BouquetCore,
    base_coords: Vec<Vec<f64>>,
    coords: Vec<Vec<f64>>,
    canonical_coords: Vec<Vec<f64>>,
    angles: Vec<Vec<f64>>,
    tree: RangeTree,
    anns: Vec<Option<AnnIndex>>,
}

/// Per-query state of the orbit search.
struct Search<'a> {
    book: &'a BookIndex,
    q: &'a [f64],
    lifted: Lifted,
    qb: Vec<f64>,
    scored: Vec<bool>,
    best: Option<QueryResult>,
}

impl<'a> Search<'a> {
    fn orbit(&self, x: f64) -> Vec<f64> {
        orbit_point(&self.qb, self.lifted.height, x.min(self.lifted.height))
            .expect("orbit parameter within radius")
            .0
    }

    fn score(&mut self, slot: usize) {
        if !std::mem::replace(&mut self.scored[slot], true) {
            let cand = self.book.page_result(slot, self.q);
            self.best = QueryResult::best(self.best.take(), Some(cand));
        }
    }

    /// Smallest approximate halfflat distance over the pages containing `q_G(x)`.
    fn eval(&mut self, x: f64) -> Result<f64> {
        let handles = self.book.simplices_containing(&self.orbit(x));
        let mut tau = f64::INFINITY;
        for h in handles {
            if let Some(ann) = &self.book.anns[h] {
                let slot = ann.query(&self.lifted.direction)?.id;
                tau = tau.min(self.book.core.halfflat_distance(slot, &self.lifted));
                self.score(slot);
            }
        }
        Ok(tau)
    }
}

impl BookIndex {
    /// Builds the book of `base` over `points`. Points of `B` itself and points on
    /// `F_B` carry no page and are ignored.
    pub fn build(base: BaseSet, points: &[Point], cfg: AnnConfig) -> Result<Self> {
        if base.is_linear() {
            return Err(Error::DegenerateBase { sigma: 0.0 });
        }
        let frame = CanonicalFrame::new(&base)?;
        let base_coords = base.members().iter().map(|p| p.coords.clone()).collect();
        let core = BouquetCore::new(base, frame.flat().clone(), points, Variant::Anis)?;
        let by_id: std::collections::HashMap<usize, &Point> = points.iter().map(|p| (p.id, p)).collect();
        let coords: Vec<Vec<f64>> = core.ids().iter().map(|id| by_id[id].coords.clone()).collect();
        let canonical_coords: Vec<Vec<f64>> = coords.iter().map(|c| frame.to_halfflat(c)).collect();
        let angles: Vec<Vec<f64>> = canonical_coords.iter().map(|c| frame.angles(c)).collect();
        let dims = frame.base_len().max(1);
        let tree = RangeTree::new(&angles, dims);
        let anns = tree
            .canonical_sets()
            .iter()
            .map(|set| positive_ann(&core, set.iter().copied(), cfg))
            .collect::<Result<_>>()?;
        Ok(Self {
            frame,
            core,
            base_coords,
            coords,
            canonical_coords,
            angles,
            tree,
            anns,
        })
    }

    pub fn base(&self) -> &BaseSet {
        self.core.base()
    }

    pub fn frame(&self) -> &CanonicalFrame {
        &self.frame
    }

    /// Ids of the points that have a page in this book.
    pub fn ids(&self) -> &[usize] {
        self.core.ids()
    }

    /// Canonical `G` coordinates of the page apex of each point, in [`Self::ids`] order.
    pub fn canonical_coords(&self) -> &[Vec<f64>] {
        &self.canonical_coords
    }

    pub fn tree(&self) -> &RangeTree {
        &self.tree
    }

    /// Point ids of a canonical set.
    pub fn handle_ids(&self, h: Handle) -> Vec<usize> {
        self.tree.canonical_sets()[h].iter().map(|&s| self.core.ids()[s]).collect()
    }

    /// Total size of all canonical sets.
    pub fn canonical_size(&self) -> usize {
        self.tree.total_size()
    }

    /// Membership of a canonical point in the prism over `conv(B)`.
    pub fn in_prism(&self, q: &[f64]) -> bool {
        self.frame.in_prism(q)
    }

    /// Canonical sets whose union is every page containing the canonical point `qpt`.
    pub fn simplices_containing(&self, qpt: &[f64]) -> Vec<Handle> {
        let ranges: Vec<_> = self.frame.angles(qpt).into_iter().map(|a| (a, f64::INFINITY)).collect();
        let mut out = Vec::new();
        self.tree.query(&ranges, &mut out);
        out
    }

    /// Canonical sets whose union is every page containing `low` but not `high`,
    /// where `high` lies vertically above `low`.
    pub fn simplices_between(&self, low: &[f64], high: &[f64]) -> Result<Vec<Handle>> {
        let m = low.len();
        let aligned = high.len() == m
            && low[..m - 1]
                .iter()
                .zip(&high[..m - 1])
                .all(|(a, b)| (a - b).abs() <= Tolerances::DEFAULT.zero * (1.0 + a.abs()))
            && high[m - 1] >= low[m - 1];
        if !aligned {
            return Err(Error::NotVerticallyAligned);
        }
        let lo = self.frame.angles(low);
        let hi = self.frame.angles(high);
        let mut out = Vec::new();
        for i in 0..lo.len() {
            let ranges: Vec<_> = (0..lo.len())
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => (lo[j].max(hi[j]), f64::INFINITY),
                    std::cmp::Ordering::Equal => (lo[j], hi[j]),
                    std::cmp::Ordering::Greater => (lo[j], f64::INFINITY),
                })
                .collect();
            self.tree.query(&ranges, &mut out);
        }
        Ok(out)
    }

    fn slot_contains(&self, slot: usize, qpt: &[f64]) -> bool {
        self.frame
            .angles(qpt)
            .iter()
            .zip(&self.angles[slot])
            .all(|(a, b)| a <= b)
    }

    fn slot_of(&self, id: usize) -> Result<usize> {
        self.core.ids().iter().position(|&i| i == id).ok_or(Error::IndexOutOfRange {
            index: id,
            len: self.core.len(),
        })
    }

    /// Smallest orbit parameter `x` for which `q_G(x)` lies in the page of point `id`.
    pub fn critical_value(&self, q: &[f64], id: usize) -> Result<f64> {
        self.core.check(q)?;
        if !self.in_prism(q) {
            return Err(Error::QueryOutsidePrism);
        }
        let slot = self.slot_of(id)?;
        let qb = self.frame.flat().local(q);
        Ok(self.critical_slot(&qb, self.frame.flat().distance(q), slot))
    }

    fn critical_slot(&self, qb: &[f64], r: f64, slot: usize) -> f64 {
        let at = |x: f64| orbit_point(qb, r, x).expect("orbit parameter within radius").0;
        if self.slot_contains(slot, &at(0.0)) {
            return 0.0;
        }
        assert!(self.slot_contains(slot, &at(r)), "projection of a prism query lies in every page");
        let (mut lo, mut hi) = (0.0, r);
        while hi - lo > BISECTION_TOLERANCE * r {
            let mid = 0.5 * (lo + hi);
            if self.slot_contains(slot, &at(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn page_result(&self, slot: usize, q: &[f64]) -> QueryResult {
        let mut verts: Vec<&[f64]> = self.base_coords.iter().map(Vec::as_slice).collect();
        verts.push(&self.coords[slot]);
        let mut ids = self.core.base().ids();
        ids.push(self.core.ids()[slot]);
        let w = simplex_distance_coords(&verts, &ids, q);
        QueryResult::new(
            Variant::Anis,
            w.distance,
            w.vertex_ids.iter().copied().zip(w.barycentric.iter().copied()).collect(),
        )
    }

    /// [`Self::page_query_with`] with a generator seeded from `seed`.
    pub fn page_query(&self, q: &[f64], seed: u64) -> Result<QueryResult> {
        self.page_query_with(q, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Approximately nearest page for a query inside the prism over `conv(B)`.
    ///
    /// Binary search over the critical values on the orbit of `q`, maintained as the
    /// interval `(lo, hi]`. Every page returned by a positive-bouquet query along the
    /// way is scored exactly and the best one is reported.
    pub fn page_query_with(&self, q: &[f64], rng: &mut ChaCha8Rng) -> Result<QueryResult> {
        self.core.check(q)?;
        if !self.in_prism(q) {
            return Err(Error::QueryOutsidePrism);
        }
        let lifted = self.core.lift(q);
        let r = lifted.height;
        if r <= Tolerances::DEFAULT.zero || self.core.len() == 0 {
            let mut base = self.core.base_result(&lifted);
            base.distance = r;
            return Ok(base);
        }
        let mut s = Search {
            book: self,
            q,
            qb: self.frame.flat().local(q),
            lifted,
            scored: vec![false; self.core.len()],
            best: None,
        };
        let n = self.core.len();
        let cap = 8 * ((n + 2) as f64).log2().ceil() as usize;
        let mut excluded = vec![false; n];
        let (mut lo, mut hi) = (0.0, r);
        let mut exhausted = true;
        for _ in 0..cap {
            let handles = self.simplices_between(&s.orbit(hi), &s.orbit(lo))?;
            let Some(slot) = self.sample(&handles, &excluded, rng) else {
                exhausted = false;
                break;
            };
            excluded[slot] = true;
            let gamma = self.critical_slot(&s.qb, r, slot);
            if s.eval(gamma)? < gamma {
                hi = gamma;
            } else {
                lo = gamma;
            }
        }
        if exhausted {
            log::trace!("page search hit its iteration cap; scanning the remaining interval");
            for h in self.simplices_between(&s.orbit(hi), &s.orbit(lo))? {
                for &slot in &self.tree.canonical_sets()[h] {
                    s.score(slot);
                }
            }
        }
        s.eval(hi)?;
        Ok(s.best.unwrap_or_else(|| {
            let mut base = self.core.base_result(&s.lifted);
            base.distance = r;
            base
        }))
    }

    /// Uniform slot from the disjoint union of the canonical sets, skipping excluded ones.
    fn sample(&self, handles: &[Handle], excluded: &[bool], rng: &mut ChaCha8Rng) -> Option<usize> {
        let sets = self.tree.canonical_sets();
        let total: usize = handles.iter().map(|&h| sets[h].len()).sum();
        if total == 0 {
            return None;
        }
        for _ in 0..SAMPLE_ATTEMPTS {
            let mut pick = rng.gen_range(0..total);
            for &h in handles {
                if pick < sets[h].len() {
                    let slot = sets[h][pick];
                    if !excluded[slot] {
                        return Some(slot);
                    }
                    break;
                }
                pick -= sets[h].len();
            }
        }
        let open: Vec<usize> = handles
            .iter()
            .flat_map(|&h| sets[h].iter().copied())
            .filter(|&s| !excluded[s])
            .collect();
        if open.is_empty() {
            None
        } else {
            Some(open[rng.gen_range(0..open.len())])
        }
    }
}
