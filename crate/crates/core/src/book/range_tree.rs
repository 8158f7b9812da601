//! Multi-level range tree over base-angle vectors.
//!
//! Every node of the last level is a canonical set. A dominance or box query is
//! answered by a disjoint family of canonical sets whose union is the exact answer.

/// Per-dimension interval `[lo, hi)`; `hi = +inf` leaves it unbounded.
pub type Range = (f64, f64);

#[derive(Debug, Clone)]
enum Payload {
    Next(Box<Level>),
    Canonical(usize),
}

#[derive(Debug, Clone)]
struct Node {
    lo: usize,
    hi: usize,
    children: Option<(usize, usize)>,
    payload: Payload,
}

#[derive(Debug, Clone)]
struct Level {
    dim: usize,
    keys: Vec<f64>,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone)]
pub struct RangeTree {
    root: Option<Level>,
    canonical: Vec<Vec<usize>>,
    dims: usize,
}

impl RangeTree {
    /// Builds the tree over `points[slot]`, all of length `dims`.
    pub fn new(points: &[Vec<f64>], dims: usize) -> Self {
        let mut canonical = Vec::new();
        let root = if points.is_empty() {
            None
        } else {
            Some(build_level(points, (0..points.len()).collect(), 0, dims, &mut canonical))
        };
        Self { root, canonical, dims }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Slots of every canonical set, indexed by handle.
    pub fn canonical_sets(&self) -> &[Vec<usize>] {
        &self.canonical
    }

    /// Total number of slot entries over all canonical sets.
    pub fn total_size(&self) -> usize {
        self.canonical.iter().map(Vec::len).sum()
    }

    /// Handles of disjoint canonical sets covering the points inside the box.
    pub fn query(&self, ranges: &[Range], out: &mut Vec<usize>) {
        debug_assert_eq!(ranges.len(), self.dims);
        if ranges.iter().any(|&(lo, hi)| !(lo < hi)) {
            return;
        }
        if let Some(root) = &self.root {
            query_level(root, ranges, out);
        }
    }
}

fn build_level(points: &[Vec<f64>], mut slots: Vec<usize>, dim: usize, dims: usize, canonical: &mut Vec<Vec<usize>>) -> Level {
    slots.sort_by(|&a, &b| points[a][dim].total_cmp(&points[b][dim]).then(a.cmp(&b)));
    let keys = slots.iter().map(|&s| points[s][dim]).collect();
    let mut level = Level {
        dim,
        keys,
        nodes: Vec::new(),
    };
    build_node(points, &slots, 0, slots.len(), dim, dims, canonical, &mut level.nodes);
    level
}

#[allow(clippy::too_many_arguments)]
fn build_node(
    points: &[Vec<f64>],
    slots: &[usize],
    lo: usize,
    hi: usize,
    dim: usize,
    dims: usize,
    canonical: &mut Vec<Vec<usize>>,
    nodes: &mut Vec<Node>,
) -> usize {
    let members = slots[lo..hi].to_vec();
    let payload = if dim + 1 == dims {
        canonical.push(members);
        Payload::Canonical(canonical.len() - 1)
    } else {
        Payload::Next(Box::new(build_level(points, members, dim + 1, dims, canonical)))
    };
    let id = nodes.len();
    nodes.push(Node {
        lo,
        hi,
        children: None,
        payload,
    });
    if hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let l = build_node(points, slots, lo, mid, dim, dims, canonical, nodes);
        let r = build_node(points, slots, mid, hi, dim, dims, canonical, nodes);
        nodes[id].children = Some((l, r));
    }
    id
}

fn query_level(level: &Level, ranges: &[Range], out: &mut Vec<usize>) {
    let (lo, hi) = ranges[level.dim];
    let s = level.keys.partition_point(|&k| k < lo);
    let e = level.keys.partition_point(|&k| k < hi);
    if s >= e {
        return;
    }
    let mut stack = vec![0];
    while let Some(n) = stack.pop() {
        let node = &level.nodes[n];
        if node.hi <= s || node.lo >= e {
            continue;
        }
        if s <= node.lo && node.hi <= e {
            match &node.payload {
                Payload::Canonical(c) => out.push(*c),
                Payload::Next(next) => query_level(next, ranges, out),
            }
        } else if let Some((l, r)) = node.children {
            stack.push(r);
            stack.push(l);
        }
    }
}
