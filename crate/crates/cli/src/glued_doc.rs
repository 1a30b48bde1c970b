//! On-disk form of a glued pair of graph nets, the input of `topo transfer`.
//!
//! The document carries both graphs, their sample points, the bridge pairs,
//! and the gluing slack, so a transfer run can rebuild the glued metric and
//! the geodesic tables it needs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use gh_forge_core::error::Result;
use gh_forge_core::gh_solver::{glue, Correspondence, GluedSpace};
use gh_forge_core::graph_spaces::{graph_metric, GeodesicTable, MetricGraph, PointOnGraph};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluedNetsDoc {
    pub left_graph: MetricGraph,
    pub left_points: Vec<PointOnGraph>,
    pub right_graph: MetricGraph,
    pub right_points: Vec<PointOnGraph>,
    pub pairs: Vec<(usize, usize)>,
    pub eta: f64,
}

impl GluedNetsDoc {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// Rebuilds the glued space and the two geodesic tables.
    pub fn realize(&self) -> Result<(GluedSpace, GeodesicTable, GeodesicTable)> {
        let left = graph_metric(&self.left_graph, &self.left_points)?;
        let right = graph_metric(&self.right_graph, &self.right_points)?;
        let rel = Correspondence::new(self.pairs.clone());
        let glued = glue(&left.metric, &right.metric, &rel, self.eta)?;
        Ok((glued, left, right))
    }
}
