//! JSON documents written by `decompose` and printed by `probe`.

use serde::Serialize;

pub const SCHEMA: u32 = 1;

/// Column names of the energy table.
pub const ENERGY_TABLE_HEADER: &str = "i,E_x_i,sum_E_x_i,% error";

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub input: InputInfo,
    pub algorithm: AlgorithmInfo,
    pub filter: FilterInfo,
    pub stages_requested: usize,
    pub stages_run: usize,
    pub components: Vec<ComponentInfo>,
    pub energy_table: String,
    pub total_energy: f64,
    pub sum_component_energy: f64,
    pub pee_percent: f64,
    pub orthogonality: OrthogonalitySummary,
    pub verdict: VerdictInfo,
    /// Real parts of the component Gram matrix.
    pub gram: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Timing>,
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub format: &'static str,
    pub shape: Vec<usize>,
    pub energy: f64,
}

#[derive(Debug, Serialize)]
pub struct AlgorithmInfo {
    pub number: u8,
    pub name: &'static str,
}

#[derive(Debug, Serialize)]
pub struct FilterInfo {
    pub kind: &'static str,
    pub schedule: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct ComponentInfo {
    pub index: usize,
    /// Exact samples, relative to the output directory.
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub display: Option<DisplayInfo>,
    pub energy: f64,
    /// Orthogonalization constant of the stage that emitted this component.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// `pixel = round((value - offset) * scale)` clamped to `0..=maxval`.
#[derive(Debug, Serialize)]
pub struct DisplayInfo {
    pub file: String,
    pub maxval: u16,
    pub offset: f64,
    pub scale: f64,
}

#[derive(Debug, Serialize)]
pub struct OrthogonalitySummary {
    /// Largest normalized `|<x_k, sum_{l>k} x_l>|`.
    pub max_telescoping_residual: f64,
    /// Largest normalized off-diagonal Gram entry.
    pub max_pairwise_off_diagonal: f64,
}

#[derive(Debug, Serialize)]
pub struct VerdictInfo {
    pub tolerance: f64,
    pub is_energy_preserving: bool,
    pub classification: &'static str,
    pub energy_identity_gap: f64,
    pub per_index_residuals: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub read: f64,
    pub decompose: f64,
    pub verify: f64,
    pub write: f64,
}

#[derive(Debug, Serialize)]
pub struct ProbeOutput {
    pub schema: u32,
    pub property: &'static str,
    pub system: String,
    pub filter: FilterInfo,
    pub fixture: FixtureInfo,
    /// Scale factor for homogeneity, shift for time invariance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
    /// Shifts wrap around the end of the signal.
    pub shift_convention: &'static str,
    pub max_violation: f64,
    pub worst_component: Option<usize>,
    pub tolerance: f64,
    pub passed: bool,
    pub witness: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct FixtureInfo {
    pub name: &'static str,
    pub length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Energy table rows: index, energy, running sum, running percentage error.
pub fn energy_table(total: f64, energies: &[f64]) -> String {
    let mut out = String::from(ENERGY_TABLE_HEADER);
    out.push('\n');
    let mut sum = fmd_core::signal::CompensatedSum::default();
    for (i, &e) in energies.iter().enumerate() {
        sum.add(fmd_core::Complex64::new(e, 0.0));
        let running = sum.value().re;
        let err = if total > 0.0 { (total - running) / total * 100.0 } else { 0.0 };
        out.push_str(&format!("{},{e:?},{running:?},{err:?}\n", i + 1));
    }
    out
}
