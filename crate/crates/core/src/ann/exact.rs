use super::Rows;

/// Linear scan returning the true nearest neighbour, lowest label on ties.
#[derive(Debug, Clone)]
pub struct ExactIndex {
    pub(super) rows: Rows,
}

impl ExactIndex {
    pub(super) fn new(rows: Rows) -> Self {
        Self { rows }
    }

    pub(super) fn nearest(&self, q: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for i in 0..self.rows.len() {
            let d = self.rows.dist_sq(i, q);
            if d < best.1 || (d == best.1 && self.rows.labels[i] < self.rows.labels[best.0]) {
                best = (i, d);
            }
        }
        best
    }
}
