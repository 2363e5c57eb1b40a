//! Filter mode decomposition.
//!
//! Each stage filters the current stage input `x_i` into `y_i` and the
//! residue `r_i = x_i - y_i`. The plain variant keeps `y_i` as the component
//! and recurses on `r_i`. The two LINOEP variants re-mix `y_i` and `r_i` with
//! a scalar `alpha_i` so that the emitted component is orthogonal to the
//! signal passed to the next stage; the components then telescope
//! (`comp_i` is orthogonal to the sum of all later components) and their
//! energies add up to the input energy, even though they are not pairwise
//! orthogonal.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filters::FilterSpec;
use crate::signal::{energy, inner_product, EnergyLedger, Signal};

/// A stage signal whose norm is below this fraction of the stage input is
/// treated as zero.
const NUMERICAL_ZERO: f64 = 1e-13;

/// Relative norm below which a Gram-Schmidt residual signals dependence.
const DEPENDENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Components `y_i`; neither orthogonal nor energy preserving in general.
    Plain,
    /// Components `c_i = y_i - alpha_i r_i`, next input `(1 + alpha_i) r_i`.
    LinoepResidueSide,
    /// Components `v_i = (1 + alpha_i) y_i`, next input `r_i - alpha_i y_i`.
    LinoepFilterSide,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Plain,
        Algorithm::LinoepResidueSide,
        Algorithm::LinoepFilterSide,
    ];

    /// 1, 2 or 3.
    pub fn number(self) -> u8 {
        match self {
            Algorithm::Plain => 1,
            Algorithm::LinoepResidueSide => 2,
            Algorithm::LinoepFilterSide => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Algorithm::Plain),
            2 => Some(Algorithm::LinoepResidueSide),
            3 => Some(Algorithm::LinoepFilterSide),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Plain => "plain",
            Algorithm::LinoepResidueSide => "linoep_residue_side",
            Algorithm::LinoepFilterSide => "linoep_filter_side",
        }
    }

    pub fn is_linoep(self) -> bool {
        self != Algorithm::Plain
    }
}

/// Output of one decomposition run.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub algorithm: Algorithm,
    /// Components in extraction order; they sum to the input.
    pub components: Vec<Signal>,
    /// One mixing coefficient per completed stage (empty for [`Algorithm::Plain`]).
    pub alphas: Vec<f64>,
    pub ledger: EnergyLedger,
    /// `gram[i][j] = <components[i], components[j]>`.
    pub gram: Vec<Vec<Complex64>>,
    pub stages_requested: usize,
    /// Number of stages that split their input (components minus one).
    pub stages_run: usize,
    pub warnings: Vec<String>,
}

/// Runs `algorithm` on `x` with `filter.stages()` stages.
pub fn decompose(x: &Signal, filter: &FilterSpec, algorithm: Algorithm) -> Result<DecompositionResult> {
    let stages = filter.stages();
    filter.validate(stages, x.shape())?;

    let mut warnings = Vec::new();
    let mut alphas = Vec::new();
    let mut components = Vec::with_capacity(stages + 1);

    if x.is_zero() {
        warnings.push("input is identically zero; returning a single zero component".into());
        components.push(x.clone());
        return finish(x, algorithm, components, alphas, stages, warnings);
    }

    let mut current = x.clone();
    for stage in 0..stages {
        let y = filter.apply_stage(stage, &current)?;
        let r = current.sub(&y)?;
        match algorithm {
            Algorithm::Plain => {
                components.push(y);
                current = r;
            }
            Algorithm::LinoepResidueSide => {
                if energy(&r) <= NUMERICAL_ZERO * NUMERICAL_ZERO * energy(&current) {
                    warnings.push(format!(
                        "stage {}: residue vanished, stopping after {} stage(s)",
                        stage + 1,
                        stage
                    ));
                    break;
                }
                let split = residue_side_split(&y, &r)?;
                components.push(split.component);
                alphas.push(split.alpha);
                current = split.carry;
            }
            Algorithm::LinoepFilterSide => {
                if energy(&y) <= NUMERICAL_ZERO * NUMERICAL_ZERO * energy(&current) {
                    warnings.push(format!(
                        "stage {}: filter output vanished, emitting a zero component",
                        stage + 1
                    ));
                    alphas.push(0.0);
                    components.push(Signal::zeros(x.shape())?);
                    continue;
                }
                let split = filter_side_split(&y, &r)?;
                components.push(split.component);
                alphas.push(split.alpha);
                current = split.carry;
            }
        }
    }
    components.push(current);
    finish(x, algorithm, components, alphas, stages, warnings)
}

/// One LINOEP stage: the emitted component and the signal carried to the
/// next stage, orthogonal to each other and summing to `y + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSplit {
    pub alpha: f64,
    pub component: Signal,
    pub carry: Signal,
}

/// `alpha = Re<y, r> / <r, r>`, component `y - alpha r`, carry `(1 + alpha) r`.
pub fn residue_side_split(y: &Signal, r: &Signal) -> Result<StageSplit> {
    let rr = energy(r);
    if rr == 0.0 {
        return Err(Error::InvalidParameter("residue has zero energy".into()));
    }
    let alpha = inner_product(y, r)?.re / rr;
    Ok(StageSplit {
        alpha,
        component: y.sub_scaled(alpha, r)?,
        carry: r.scale(1.0 + alpha)?,
    })
}

/// `alpha = Re<y, r> / <y, y>`, component `(1 + alpha) y`, carry `r - alpha y`.
pub fn filter_side_split(y: &Signal, r: &Signal) -> Result<StageSplit> {
    let yy = energy(y);
    if yy == 0.0 {
        return Err(Error::InvalidParameter("filter output has zero energy".into()));
    }
    let alpha = inner_product(y, r)?.re / yy;
    Ok(StageSplit {
        alpha,
        component: y.scale(1.0 + alpha)?,
        carry: r.sub_scaled(alpha, y)?,
    })
}

fn finish(
    x: &Signal,
    algorithm: Algorithm,
    components: Vec<Signal>,
    alphas: Vec<f64>,
    stages_requested: usize,
    warnings: Vec<String>,
) -> Result<DecompositionResult> {
    let ledger = build_ledger(x, &components)?;
    let gram = gram_matrix(&components)?;
    Ok(DecompositionResult {
        algorithm,
        stages_run: components.len() - 1,
        components,
        alphas,
        ledger,
        gram,
        stages_requested,
        warnings,
    })
}

/// Plain iterative filtering.
pub fn decompose_plain(x: &Signal, filter: &FilterSpec) -> Result<DecompositionResult> {
    decompose(x, filter, Algorithm::Plain)
}

/// LINOEP decomposition with `alpha_i = Re<y_i, r_i> / <r_i, r_i>`.
pub fn decompose_linoep_residue_side(x: &Signal, filter: &FilterSpec) -> Result<DecompositionResult> {
    decompose(x, filter, Algorithm::LinoepResidueSide)
}

/// LINOEP decomposition with `alpha_i = Re<y_i, r_i> / <y_i, y_i>`.
pub fn decompose_linoep_filter_side(x: &Signal, filter: &FilterSpec) -> Result<DecompositionResult> {
    decompose(x, filter, Algorithm::LinoepFilterSide)
}

/// Energy ledger of `components` against the input they decompose.
pub fn build_ledger(x: &Signal, components: &[Signal]) -> Result<EnergyLedger> {
    EnergyLedger::new(x, components)
}

/// Full matrix of pairwise inner products.
pub fn gram_matrix(signals: &[Signal]) -> Result<Vec<Vec<Complex64>>> {
    signals
        .iter()
        .map(|a| signals.iter().map(|b| inner_product(a, b)).collect())
        .collect()
}

/// Gram-Schmidt orthogonalization without normalization.
///
/// `u_1 = s_1`, `u_k = s_k - sum_{j<k} <s_k, u_j>/<u_j, u_j> u_j`. The
/// projection is applied twice per vector, which leaves the exact-arithmetic
/// result unchanged and keeps the outputs orthogonal to working precision.
pub fn gram_schmidt(signals: &[Signal]) -> Result<Vec<Signal>> {
    let mut basis: Vec<(Signal, f64)> = Vec::with_capacity(signals.len());
    for (k, s) in signals.iter().enumerate() {
        let mut u = s.clone();
        for _pass in 0..2 {
            for (q, qq) in &basis {
                let coef = inner_product(&u, q)? / *qq;
                let samples = u
                    .samples()
                    .iter()
                    .zip(q.samples())
                    .map(|(a, b)| a - coef * b)
                    .collect();
                u = Signal::new(u.shape(), samples)?;
            }
        }
        let uu = energy(&u);
        if uu.sqrt() <= DEPENDENCE_TOL * energy(s).sqrt() {
            return Err(Error::LinearDependence { index: k + 1 });
        }
        basis.push((u, uu));
    }
    Ok(basis.into_iter().map(|(u, _)| u).collect())
}
