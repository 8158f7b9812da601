use super::Rows;

const BUCKET: usize = 16;

/// Largest dimension searched with a stack-allocated offset buffer.
const STACK_DIM: usize = 16;

/// Tree node. A split's left child immediately follows it in the node list.
#[derive(Debug, Clone, Copy)]
struct Node {
    /// Split coordinate for inner nodes.
    value: f64,
    /// Split axis, or `u32::MAX` for a leaf.
    axis: u32,
    /// Right child for inner nodes; for leaves, the end of the row range.
    right: u32,
    /// Start of the row range (leaves only).
    start: u32,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.axis == u32::MAX
    }
}

/// kd-tree with sliding-midpoint splits and `(1+ε)` pruning.
#[derive(Debug, Clone)]
pub struct TreeIndex {
    /// Rows permuted so every leaf covers a contiguous range.
    pub(super) rows: Rows,
    nodes: Vec<Node>,
    /// Squared pruning factor `(1+ε)^2`.
    slack: f64,
}

impl TreeIndex {
    pub(super) fn new(rows: Rows, epsilon: f64) -> Self {
        assert!(rows.len() < u32::MAX as usize, "too many rows for a tree index");
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let mut nodes = Vec::new();
        let (lo, hi) = bounds(&rows, &order);
        build(&rows, &mut order, 0, &lo, &hi, &mut nodes);
        let rows = Rows {
            dim: rows.dim,
            data: order.iter().flat_map(|&i| rows.row(i).iter().copied()).collect(),
            labels: order.iter().map(|&i| rows.labels[i]).collect(),
        };
        Self {
            rows,
            nodes,
            slack: (1.0 + epsilon) * (1.0 + epsilon),
        }
    }

    pub(super) fn nearest(&self, q: &[f64]) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        let dim = self.rows.dim;
        if dim <= STACK_DIM {
            let mut off = [0.0; STACK_DIM];
            self.search(0, q, 0.0, &mut off[..dim], &mut best);
        } else {
            self.search(0, q, 0.0, &mut vec![0.0; dim], &mut best);
        }
        best
    }

    fn better(&self, i: usize, d: f64, best: &(usize, f64)) -> bool {
        d < best.1 || (d == best.1 && self.rows.labels[i] < self.rows.labels[best.0])
    }

    fn search(&self, node: usize, q: &[f64], rd: f64, off: &mut [f64], best: &mut (usize, f64)) {
        let n = self.nodes[node];
        if n.is_leaf() {
            for i in n.start as usize..n.right as usize {
                let d = self.rows.dist_sq(i, q);
                if self.better(i, d, best) {
                    *best = (i, d);
                }
            }
            return;
        }
        let axis = n.axis as usize;
        let diff = q[axis] - n.value;
        let (near, far) = if diff <= 0.0 { (node + 1, n.right as usize) } else { (n.right as usize, node + 1) };
        self.search(near, q, rd, off, best);
        let old = off[axis];
        let far_rd = rd - old * old + diff * diff;
        if far_rd * self.slack <= best.1 {
            off[axis] = diff;
            self.search(far, q, far_rd, off, best);
            off[axis] = old;
        }
    }
}

/// Follows the near-side path of every `(tree, query)` pair one level at a time
/// and touches each reached leaf, so loads from independent trees overlap.
/// Returns a value derived from the loads so they are kept.
pub(super) fn warm(batch: &[(&TreeIndex, &[f64])]) -> f64 {
    let mut cur = vec![0usize; batch.len()];
    let mut descending = true;
    while descending {
        descending = false;
        for (c, (t, q)) in cur.iter_mut().zip(batch) {
            let n = t.nodes[*c];
            if !n.is_leaf() {
                descending = true;
                *c = if q[n.axis as usize] <= n.value { *c + 1 } else { n.right as usize };
            }
        }
    }
    cur.iter()
        .zip(batch)
        .map(|(&c, (t, _))| t.rows.data[t.nodes[c].start as usize * t.rows.dim])
        .sum()
}

fn bounds(rows: &Rows, idx: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; rows.dim];
    let mut hi = vec![f64::NEG_INFINITY; rows.dim];
    for &i in idx {
        for (j, &c) in rows.row(i).iter().enumerate() {
            lo[j] = lo[j].min(c);
            hi[j] = hi[j].max(c);
        }
    }
    (lo, hi)
}

/// Builds the subtree over `order[..]` (which starts at global offset `base`) and returns its node index.
fn build(rows: &Rows, order: &mut [usize], base: usize, lo: &[f64], hi: &[f64], nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    nodes.push(Node {
        value: 0.0,
        axis: u32::MAX,
        right: (base + order.len()) as u32,
        start: base as u32,
    });
    if order.len() <= BUCKET {
        return id;
    }
    let axis = (0..rows.dim)
        .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
        .unwrap();
    if hi[axis] - lo[axis] <= 0.0 {
        // all points coincide
        return id;
    }
    let mut value = 0.5 * (lo[axis] + hi[axis]);
    let coord = |i: usize| rows.row(i)[axis];
    let (pmin, pmax) = order.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &i| {
        (a.min(coord(i)), b.max(coord(i)))
    });
    // slide the cut so neither side is empty
    if value < pmin {
        value = pmin;
    } else if value >= pmax {
        value = order.iter().map(|&i| coord(i)).filter(|&c| c < pmax).fold(f64::NEG_INFINITY, f64::max);
    }
    let split = partition(order, |i| coord(i) <= value);
    debug_assert!(split > 0 && split < order.len());
    let (l, r) = order.split_at_mut(split);
    let mut lhi = hi.to_vec();
    lhi[axis] = value;
    let mut rlo = lo.to_vec();
    rlo[axis] = value;
    let left = build(rows, l, base, lo, &lhi, nodes);
    debug_assert_eq!(left, id + 1);
    let right = build(rows, r, base + split, &rlo, hi, nodes);
    nodes[id] = Node {
        value,
        axis: axis as u32,
        right: right as u32,
        start: base as u32,
    };
    id
}

fn partition(order: &mut [usize], pred: impl Fn(usize) -> bool) -> usize {
    let mut k = 0;
    for i in 0..order.len() {
        if pred(order[i]) {
            order.swap(i, k);
            k += 1;
        }
    }
    k
}
