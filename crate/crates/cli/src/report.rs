//! JSON report shapes emitted on stdout, one object per command run.
//!
//! Field order is fixed by the struct definitions and floats are printed
//! with the shortest round-tripping decimal representation, so reports are
//! stable byte-for-byte for identical inputs. The schemas under `schemas/`
//! at the repository root describe each shape.

use serde::Serialize;

use dispersion::bounds::BoundsReport;
use dispersion::geometry::DyadicBox;
use dispersion::witness::WitnessBranch;

#[derive(Debug, Serialize)]
pub struct DispReport {
    pub value: f64,
    pub witness_lo: Vec<f64>,
    pub witness_hi: Vec<f64>,
    pub method: &'static str,
    pub elapsed_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct BoxJson {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    #[serde(rename = "box")]
    pub box_: BoxJson,
    pub guaranteed_volume: f64,
    pub ell: usize,
    pub slab_index: Option<usize>,
    pub branch: WitnessBranch,
}

#[derive(Debug, Serialize)]
pub struct BoundsJsonReport {
    #[serde(flatten)]
    pub bounds: BoundsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Lower bound on the number of points needed to force dispersion
    /// below `eps`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_eps_lower: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct NetCheckJson {
    pub t_star: u32,
    pub boxes_checked: u64,
    pub failure_example: Option<DyadicBox>,
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub best_disp: f64,
    pub best_set_path: Option<String>,
    pub evaluations: u64,
}
