//! Energy-preserving sequence verification and black-box system probes.
//!
//! A sequence `x_1..x_n` is energy preserving when every `x_k` is orthogonal
//! to the sum of the vectors after it; then `||sum x_k||^2 = sum ||x_k||^2`
//! whether or not the vectors are pairwise orthogonal or even independent.
//!
//! The probes test superposition and circular-shift invariance of any
//! function mapping a signal to an ordered component list.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filters::FilterSpec;
use crate::fmd::{decompose, gram_matrix, Algorithm};
use crate::signal::{energy, norm, normalized_inner, Signal};

/// Smallest-to-largest Gram eigenvalue ratio below which a set counts as
/// linearly dependent.
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// Default tolerance for probe verdicts.
pub const PROBE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Pairwise orthogonal.
    Orthogonal,
    /// Energy preserving, linearly independent, not pairwise orthogonal.
    Linoep,
    /// Energy preserving but linearly dependent.
    DependentEnergyPreserving,
    NotEnergyPreserving,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Orthogonal => "orthogonal",
            Classification::Linoep => "linoep",
            Classification::DependentEnergyPreserving => "dependent_energy_preserving",
            Classification::NotEnergyPreserving => "not_energy_preserving",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceVerdict {
    pub is_energy_preserving: bool,
    /// `|<x_k, sum_{l>k} x_l>| / (||x_k|| ||sum_{l>k} x_l||)` for each `k` but the last.
    pub per_index_residuals: Vec<f64>,
    /// Largest normalized off-diagonal Gram entry.
    pub max_pairwise: f64,
    pub classification: Classification,
    /// `| ||sum x_k||^2 - sum ||x_k||^2 | / ||sum x_k||^2`.
    pub energy_identity_gap: f64,
}

impl SequenceVerdict {
    pub fn max_residual(&self) -> f64 {
        self.per_index_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks the telescoping orthogonality condition at relative tolerance `tol`
/// and classifies the sequence.
pub fn verify_sequence(xs: &[Signal], tol: f64) -> Result<SequenceVerdict> {
    let first = xs.first().ok_or(Error::Empty)?;
    if let Some(bad) = xs.iter().find(|x| x.shape() != first.shape()) {
        return Err(Error::ShapeMismatch {
            left: first.shape(),
            right: bad.shape(),
        });
    }

    let mut per_index_residuals = Vec::with_capacity(xs.len().saturating_sub(1));
    for k in 0..xs.len() - 1 {
        let tail = Signal::sum_all(&xs[k + 1..])?;
        per_index_residuals.push(normalized_inner(&xs[k], &tail)?);
    }
    let is_energy_preserving = per_index_residuals.iter().all(|&r| r <= tol);

    let total = energy(&Signal::sum_all(xs)?);
    let parts = crate::signal::compensated_sum(xs.iter().map(energy));
    let energy_identity_gap = if total > 0.0 {
        (total - parts).abs() / total
    } else if parts == 0.0 {
        0.0
    } else {
        1.0
    };

    let gram = gram_matrix(xs)?;
    let norms: Vec<f64> = xs.iter().map(norm).collect();
    let mut max_pairwise: f64 = 0.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = norms[i] * norms[j];
            if d > 0.0 {
                max_pairwise = max_pairwise.max(gram[i][j].norm() / d);
            }
        }
    }

    let classification = if !is_energy_preserving {
        Classification::NotEnergyPreserving
    } else if max_pairwise <= tol {
        Classification::Orthogonal
    } else if is_independent(&gram, first.len()) {
        Classification::Linoep
    } else {
        Classification::DependentEnergyPreserving
    };

    Ok(SequenceVerdict {
        is_energy_preserving,
        per_index_residuals,
        max_pairwise,
        classification,
        energy_identity_gap,
    })
}

/// Numerical independence from the Gram spectrum of `gram.len()` vectors of
/// dimension `dim`.
fn is_independent(gram: &[Vec<Complex64>], dim: usize) -> bool {
    let n = gram.len();
    if n > dim {
        return false;
    }
    let m = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
    let eig = m.symmetric_eigenvalues();
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    max > 0.0 && min / max >= INDEPENDENCE_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbeProperty {
    Additivity,
    Homogeneity,
    TimeInvariance,
}

impl ProbeProperty {
    pub fn name(self) -> &'static str {
        match self {
            ProbeProperty::Additivity => "additivity",
            ProbeProperty::Homogeneity => "homogeneity",
            ProbeProperty::TimeInvariance => "time_invariance",
        }
    }
}

/// Outcome of one probe. `passed` iff `max_violation <= tolerance`.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub property: ProbeProperty,
    pub system_name: String,
    pub max_violation: f64,
    /// Component index where the violation peaked, if the lists aligned.
    pub worst_component: Option<usize>,
    /// The probe inputs.
    pub witness: Vec<Signal>,
    pub tolerance: f64,
    pub passed: bool,
}

impl ProbeReport {
    fn new(
        property: ProbeProperty,
        system_name: &str,
        deviation: Deviation,
        scale: f64,
        witness: Vec<Signal>,
        tolerance: f64,
    ) -> Self {
        let (max_violation, worst_component) = match deviation {
            Deviation::Aligned { max_norm, index } => (max_norm / scale, Some(index)),
            Deviation::CountMismatch => (1.0, None),
        };
        ProbeReport {
            property,
            system_name: system_name.to_string(),
            max_violation,
            worst_component,
            witness,
            tolerance,
            passed: max_violation <= tolerance,
        }
    }
}

enum Deviation {
    Aligned { max_norm: f64, index: usize },
    CountMismatch,
}

fn run(system: &dyn Fn(&Signal) -> Result<Vec<Signal>>, x: &Signal) -> Result<Vec<Signal>> {
    system(x).map_err(|e| Error::System(e.to_string()))
}

/// Brings two component lists to a common length. An all-zero list stands
/// for the zero element of any length.
fn align(a: Vec<Signal>, b: Vec<Signal>) -> Result<Option<(Vec<Signal>, Vec<Signal>)>> {
    if a.len() == b.len() {
        return Ok(Some((a, b)));
    }
    let zeros_like = |template: &[Signal]| -> Result<Vec<Signal>> {
        template.iter().map(|s| Signal::zeros(s.shape())).collect()
    };
    if a.iter().all(Signal::is_zero) {
        let z = zeros_like(&b)?;
        return Ok(Some((z, b)));
    }
    if b.iter().all(Signal::is_zero) {
        let z = zeros_like(&a)?;
        return Ok(Some((a, z)));
    }
    Ok(None)
}

fn deviation(lhs: Vec<Signal>, rhs: Vec<Signal>) -> Result<Deviation> {
    let Some((lhs, rhs)) = align(lhs, rhs)? else {
        return Ok(Deviation::CountMismatch);
    };
    let mut max_norm = 0.0;
    let mut index = 0;
    for (k, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        let d = norm(&l.sub(r)?);
        if d > max_norm {
            max_norm = d;
            index = k;
        }
    }
    Ok(Deviation::Aligned { max_norm, index })
}

fn positive_or(v: f64, fallback: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        fallback
    }
}

/// Max componentwise `||S(x1 + x2) - S(x1) - S(x2)|| / ||x1 + x2||`.
pub fn probe_additivity(
    system_name: &str,
    system: &dyn Fn(&Signal) -> Result<Vec<Signal>>,
    x1: &Signal,
    x2: &Signal,
    tolerance: f64,
) -> Result<ProbeReport> {
    let sum = x1.add(x2)?;
    let joint = run(system, &sum)?;
    let separate = match align(run(system, x1)?, run(system, x2)?)? {
        Some((a, b)) => Some(
            a.iter()
                .zip(&b)
                .map(|(p, q)| p.add(q))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let dev = match separate {
        Some(rhs) => deviation(joint, rhs)?,
        None => Deviation::CountMismatch,
    };
    let scale = positive_or(norm(&sum), positive_or(norm(x1) + norm(x2), 1.0));
    Ok(ProbeReport::new(
        ProbeProperty::Additivity,
        system_name,
        dev,
        scale,
        vec![x1.clone(), x2.clone()],
        tolerance,
    ))
}

/// Max componentwise `||S(a x) - a S(x)|| / (|a| ||x||)`.
pub fn probe_homogeneity(
    system_name: &str,
    system: &dyn Fn(&Signal) -> Result<Vec<Signal>>,
    x: &Signal,
    a: f64,
    tolerance: f64,
) -> Result<ProbeReport> {
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("scale must be finite, got {a}")));
    }
    let scaled = run(system, &x.scale(a)?)?;
    let expected = run(system, x)?
        .iter()
        .map(|c| c.scale(a))
        .collect::<Result<Vec<_>>>()?;
    let dev = deviation(scaled, expected)?;
    let scale = positive_or(a.abs() * norm(x), positive_or(norm(x), 1.0));
    Ok(ProbeReport::new(
        ProbeProperty::Homogeneity,
        system_name,
        dev,
        scale,
        vec![x.clone()],
        tolerance,
    ))
}

/// Max componentwise `||S(shift(x)) - shift(S(x))|| / ||x||` for a circular
/// shift by `tau` samples.
pub fn probe_time_invariance(
    system_name: &str,
    system: &dyn Fn(&Signal) -> Result<Vec<Signal>>,
    x: &Signal,
    tau: i64,
    tolerance: f64,
) -> Result<ProbeReport> {
    let shifted_out = run(system, &x.shifted(tau)?)?;
    let expected = run(system, x)?
        .iter()
        .map(|c| c.shifted(tau))
        .collect::<Result<Vec<_>>>()?;
    let dev = deviation(shifted_out, expected)?;
    Ok(ProbeReport::new(
        ProbeProperty::TimeInvariance,
        system_name,
        dev,
        positive_or(norm(x), 1.0),
        vec![x.clone()],
        tolerance,
    ))
}

/// A decomposition wrapped as a black-box system.
pub fn fmd_system(filter: FilterSpec, algorithm: Algorithm) -> impl Fn(&Signal) -> Result<Vec<Signal>> {
    move |x| decompose(x, &filter, algorithm).map(|r| r.components)
}
