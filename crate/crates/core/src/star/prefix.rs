use crate::ann::{AnnConfig, AnnIndex, Neighbor};
use crate::{Error, Result};

#[derive(Debug, Clone)]
struct Node {
    lo: usize,
    hi: usize,
    ann: AnnIndex,
    children: Option<(usize, usize)>,
}

/// Nearest neighbour queries restricted to a prefix `p_1, ..., p_i` of an ordered set.
///
/// A balanced tree over the order stores an index for every subtree; a prefix is the
/// disjoint union of `O(log n)` subtrees.
#[derive(Debug, Clone)]
pub struct PrefixAnnIndex {
    nodes: Vec<Node>,
    len: usize,
}

impl PrefixAnnIndex {
    /// `items` are `(label, vector)` pairs in prefix order.
    pub fn build(dim: usize, items: &[(usize, Vec<f64>)], cfg: AnnConfig) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut nodes = Vec::new();
        build_node(dim, items, 0, items.len(), cfg, &mut nodes)?;
        Ok(Self { nodes, len: items.len() })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Approximate nearest neighbour of `q` among the first `i` items (`1 <= i <= len`).
    pub fn query(&self, i: usize, q: &[f64]) -> Result<Neighbor> {
        if i == 0 || i > self.len {
            return Err(Error::IndexOutOfRange { index: i, len: self.len });
        }
        let mut best: Option<Neighbor> = None;
        let mut stack = vec![0];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if node.lo >= i {
                continue;
            }
            if node.hi <= i || node.children.is_none() {
                let hit = node.ann.query(q)?;
                best = match best {
                    Some(b) if (b.distance, b.id) <= (hit.distance, hit.id) => Some(b),
                    _ => Some(hit),
                };
            } else if let Some((l, r)) = node.children {
                stack.push(r);
                stack.push(l);
            }
        }
        Ok(best.expect("prefix is non-empty"))
    }

    /// Number of canonical subtrees that cover the prefix of length `i`.
    pub fn cover_size(&self, i: usize) -> usize {
        let mut count = 0;
        let mut stack = vec![0];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if node.lo >= i {
                continue;
            }
            match node.children {
                Some((l, r)) if node.hi > i => {
                    stack.push(l);
                    stack.push(r);
                }
                _ => count += 1,
            }
        }
        count
    }
}

fn build_node(dim: usize, items: &[(usize, Vec<f64>)], lo: usize, hi: usize, cfg: AnnConfig, nodes: &mut Vec<Node>) -> Result<usize> {
    let id = nodes.len();
    let ann = AnnIndex::build(dim, items[lo..hi].iter().map(|(l, v)| (*l, v)), cfg)?;
    nodes.push(Node {
        lo,
        hi,
        ann,
        children: None,
    });
    if hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let l = build_node(dim, items, lo, mid, cfg, nodes)?;
        let r = build_node(dim, items, mid, hi, cfg, nodes)?;
        nodes[id].children = Some((l, r));
    }
    Ok(id)
}
