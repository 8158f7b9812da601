use crate::config::RunConfig;
use serde::{Deserialize, Serialize};
use sparsegeom::ann::Backend;
use sparsegeom::QueryResult;

/// One answered query with timings and the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub variant: String,
    pub distance: f64,
    pub witness_ids: Vec<usize>,
    pub tau: Vec<(usize, f64)>,
    pub build_ms: Option<f64>,
    pub query_ms: Option<f64>,
    pub seed: u64,
    pub backend: Backend,
    pub k: usize,
    pub epsilon: f64,
    pub version: String,
}

impl ResultRecord {
    pub fn new(result: QueryResult, cfg: &RunConfig, build_ms: Option<f64>, query_ms: Option<f64>) -> Self {
        Self {
            variant: cfg.variant.to_string(),
            distance: result.distance,
            witness_ids: result.witness_ids,
            tau: result.tau,
            build_ms,
            query_ms,
            seed: cfg.seed,
            backend: cfg.ann.backend,
            k: cfg.k,
            epsilon: cfg.ann.epsilon,
            version: crate::VERSION.to_string(),
        }
    }
}

/// Outcome of an oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub variant: String,
    pub trials: usize,
    pub n: usize,
    pub dim: usize,
    pub k: usize,
    pub epsilon: f64,
    pub backend: Backend,
    pub seed: u64,
    pub max_factor: f64,
    pub bound: f64,
    pub violations: usize,
    pub pass: bool,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub variant: String,
    pub n: usize,
    pub dim: usize,
    pub k: usize,
    pub epsilon: f64,
    pub backend: Backend,
    pub build_ms: f64,
    pub median_query_ms: f64,
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub variant: String,
    pub sizes: Vec<usize>,
    pub median_query_ms: Vec<f64>,
    /// Least-squares slope of log query time against log n.
    pub loglog_slope: f64,
    pub monotone: bool,
}
