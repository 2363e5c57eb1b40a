//! Zero-phase filters used as the per-stage filter of a decomposition.
//!
//! Frequency-domain filters multiply the DFT by a real, nonnegative, even
//! response, so real inputs map to real outputs with no phase shift. All
//! filtering is circular.

use crate::dft::{dft_forward, dft_inverse};
use crate::error::{Error, Result};
use crate::signal::{Shape, Signal};

/// Imaginary residue allowed on the output of a real input, relative to the
/// input's largest magnitude.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// A real frequency response laid out like the DFT bins of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    shape: Shape,
    gains: Vec<f64>,
}

impl FrequencyResponse {
    pub fn new(shape: Shape, gains: Vec<f64>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::Empty);
        }
        if gains.len() != shape.len() {
            return Err(Error::SampleCount {
                shape,
                samples: gains.len(),
            });
        }
        Ok(FrequencyResponse { shape, gains })
    }

    /// Response that is `gain` at every bin.
    pub fn constant(shape: Shape, gain: f64) -> Result<Self> {
        FrequencyResponse::new(shape, vec![gain; shape.len()])
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    fn validate(&self) -> Result<()> {
        if let Some(k) = self.gains.iter().position(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::InvalidResponse(format!(
                "gain {} at bin {k} is not a finite nonnegative value",
                self.gains[k]
            )));
        }
        for (k, &g) in self.gains.iter().enumerate() {
            let m = self.gains[mirror_index(self.shape, k)];
            if (g - m).abs() > 1e-12 * g.abs().max(m.abs()).max(1.0) {
                return Err(Error::InvalidResponse(format!(
                    "not even: bin {k} has gain {g}, its mirror has {m}"
                )));
            }
        }
        Ok(())
    }
}

/// Flat index of the bin at negated frequency.
fn mirror_index(shape: Shape, k: usize) -> usize {
    match shape {
        Shape::D1(n) => (n - k) % n,
        Shape::D2 { rows, cols } => {
            let (r, c) = (k / cols, k % cols);
            ((rows - r) % rows) * cols + (cols - c) % cols
        }
    }
}

/// Distance of bin `k` from DC along an axis of length `n`, with wrap-around.
fn wrapped_offset(k: usize, n: usize) -> usize {
    k.min(n - k)
}

/// `dft_inverse(response * dft_forward(x))`.
///
/// For a real input the output is checked to be real and its imaginary
/// residue dropped. Complex inputs are filtered as-is.
pub fn apply_zero_phase(x: &Signal, response: &FrequencyResponse) -> Result<Signal> {
    if x.shape() != response.shape {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: response.shape,
        });
    }
    response.validate()?;
    let mut spectrum = dft_forward(x);
    for (bin, &g) in spectrum.bins_mut().iter_mut().zip(&response.gains) {
        *bin *= g;
    }
    let out = dft_inverse(&spectrum);
    if !x.is_real() {
        return Ok(out);
    }
    let peak = x.samples().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let residue = out.samples().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > IMAG_RESIDUE_TOL * peak {
        return Err(Error::ImaginaryResidue { max_abs: residue });
    }
    Signal::from_real(out.shape(), &out.real_parts())
}

/// Gaussian low-pass `H = exp(-D^2 / (2 sigma^2))`, `D` the wrapped bin
/// distance from DC (Euclidean over row/column offsets for images).
pub fn gaussian_response(shape: Shape, sigma: f64) -> Result<FrequencyResponse> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian sigma must be positive and finite, got {sigma}"
        )));
    }
    let denom = 2.0 * sigma * sigma;
    let gains = bin_offsets(shape)
        .map(|(dr, dc)| {
            let d2 = (dr * dr + dc * dc) as f64;
            (-d2 / denom).exp()
        })
        .collect();
    FrequencyResponse::new(shape, gains)
}

/// Brick-wall low-pass: gain 1 where the normalized frequency magnitude is at
/// most `cutoff`, 0 elsewhere. Images use a square passband (both axis
/// frequencies within the cutoff), so `cutoff = 0.5` passes everything.
pub fn ideal_response(shape: Shape, cutoff: f64) -> Result<FrequencyResponse> {
    if !(0.0..=0.5).contains(&cutoff) {
        return Err(Error::InvalidParameter(format!(
            "ideal cutoff must lie in [0, 0.5], got {cutoff}"
        )));
    }
    let (n_rows, n_cols) = match shape {
        Shape::D1(n) => (1, n),
        Shape::D2 { rows, cols } => (rows, cols),
    };
    let gains = bin_offsets(shape)
        .map(|(dr, dc)| {
            let fr = dr as f64 / n_rows as f64;
            let fc = dc as f64 / n_cols as f64;
            if fr <= cutoff && fc <= cutoff {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    FrequencyResponse::new(shape, gains)
}

/// Wrapped (row, column) bin offsets in flat order; 1D signals report row 0.
fn bin_offsets(shape: Shape) -> impl Iterator<Item = (usize, usize)> {
    let (rows, cols) = match shape {
        Shape::D1(n) => (1, n),
        Shape::D2 { rows, cols } => (rows, cols),
    };
    (0..rows * cols).map(move |k| (wrapped_offset(k / cols, rows), wrapped_offset(k % cols, cols)))
}

/// Circular centered moving average with odd window `w`.
///
/// Images are averaged separably over a `w x w` box.
pub fn moving_average(x: &Signal, w: usize) -> Result<Signal> {
    let check = |len: usize| {
        if w == 0 || w.is_multiple_of(2) || w > len {
            Err(Error::InvalidParameter(format!(
                "moving-average window must be odd and in 1..={len}, got {w}"
            )))
        } else {
            Ok(())
        }
    };
    match x.shape() {
        Shape::D1(n) => {
            check(n)?;
            let out = circular_box(x.samples(), w);
            Signal::new(x.shape(), out)
        }
        Shape::D2 { rows, cols } => {
            check(rows.min(cols))?;
            let mut data: Vec<_> = x
                .samples()
                .chunks_exact(cols)
                .flat_map(|row| circular_box(row, w))
                .collect();
            let mut column = Vec::with_capacity(rows);
            for c in 0..cols {
                column.clear();
                column.extend((0..rows).map(|r| data[r * cols + c]));
                for (r, v) in circular_box(&column, w).into_iter().enumerate() {
                    data[r * cols + c] = v;
                }
            }
            Signal::new(x.shape(), data)
        }
    }
}

fn circular_box(x: &[num_complex::Complex64], w: usize) -> Vec<num_complex::Complex64> {
    let n = x.len();
    let half = (w / 2) as isize;
    let scale = 1.0 / w as f64;
    (0..n as isize)
        .map(|i| {
            let mut acc = crate::signal::CompensatedSum::default();
            for j in -half..=half {
                acc.add(x[(i + j).rem_euclid(n as isize) as usize]);
            }
            acc.value() * scale
        })
        .collect()
}

/// Which filter to use at each decomposition stage, with one parameter per stage.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterSpec {
    /// Gaussian low-pass, `sigma` in DFT-bin units per stage.
    GaussianLowpass { sigmas: Vec<f64> },
    /// Brick-wall low-pass, normalized cutoff in `[0, 0.5]` per stage.
    IdealLowpass { cutoffs: Vec<f64> },
    /// Centered circular moving average, odd window per stage.
    MovingAverage { windows: Vec<usize> },
}

impl FilterSpec {
    /// Gaussian schedule halving from `sigma0`.
    pub fn gaussian_halving(sigma0: f64, stages: usize) -> Self {
        let sigmas = (0..stages).map(|i| sigma0 / 2f64.powi(i as i32)).collect();
        FilterSpec::GaussianLowpass { sigmas }
    }

    /// Gaussian schedule starting at `N / 8`, `N` the largest dimension.
    pub fn default_gaussian(shape: Shape, stages: usize) -> Self {
        FilterSpec::gaussian_halving(shape.max_dim() as f64 / 8.0, stages)
    }

    /// Ideal cutoffs `0.25, 0.125, ...`.
    pub fn default_ideal(stages: usize) -> Self {
        let cutoffs = (1..=stages).map(|i| 0.5 / 2f64.powi(i as i32)).collect();
        FilterSpec::IdealLowpass { cutoffs }
    }

    /// Windows `3, 5, 9, 17, ...` (`2^i + 1`).
    pub fn default_moving_average(stages: usize) -> Self {
        let windows = (1..=stages).map(|i| (1usize << i) + 1).collect();
        FilterSpec::MovingAverage { windows }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FilterSpec::GaussianLowpass { .. } => "gaussian_lowpass",
            FilterSpec::IdealLowpass { .. } => "ideal_lowpass",
            FilterSpec::MovingAverage { .. } => "moving_average",
        }
    }

    pub fn stages(&self) -> usize {
        match self {
            FilterSpec::GaussianLowpass { sigmas } => sigmas.len(),
            FilterSpec::IdealLowpass { cutoffs } => cutoffs.len(),
            FilterSpec::MovingAverage { windows } => windows.len(),
        }
    }

    /// Schedule as reals, for reports.
    pub fn schedule(&self) -> Vec<f64> {
        match self {
            FilterSpec::GaussianLowpass { sigmas } => sigmas.clone(),
            FilterSpec::IdealLowpass { cutoffs } => cutoffs.clone(),
            FilterSpec::MovingAverage { windows } => windows.iter().map(|&w| w as f64).collect(),
        }
    }

    /// Checks the schedule against a stage count and signal shape.
    pub fn validate(&self, stages: usize, shape: Shape) -> Result<()> {
        if stages == 0 {
            return Err(Error::InvalidParameter("stage count must be at least 1".into()));
        }
        if self.stages() != stages {
            return Err(Error::InvalidParameter(format!(
                "filter schedule has {} entries for {stages} stages",
                self.stages()
            )));
        }
        match self {
            FilterSpec::GaussianLowpass { sigmas } => {
                if let Some(s) = sigmas.iter().find(|s| !s.is_finite() || **s <= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "gaussian sigma must be positive, got {s}"
                    )));
                }
            }
            FilterSpec::IdealLowpass { cutoffs } => {
                if let Some(c) = cutoffs.iter().find(|c| !(0.0..=0.5).contains(*c)) {
                    return Err(Error::InvalidParameter(format!(
                        "ideal cutoff must lie in [0, 0.5], got {c}"
                    )));
                }
                let decreasing = cutoffs.windows(2).all(|p| p[1] < p[0]);
                let increasing = cutoffs.windows(2).all(|p| p[1] > p[0]);
                if !decreasing && !increasing {
                    return Err(Error::InvalidParameter(
                        "ideal cutoffs must be strictly monotone across stages".into(),
                    ));
                }
            }
            FilterSpec::MovingAverage { windows } => {
                let limit = match shape {
                    Shape::D1(n) => n,
                    Shape::D2 { rows, cols } => rows.min(cols),
                };
                if let Some(w) = windows.iter().find(|w| **w == 0 || w.is_multiple_of(2) || **w > limit) {
                    return Err(Error::InvalidParameter(format!(
                        "moving-average window must be odd and in 1..={limit}, got {w}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies the filter of `stage` (0-based).
    pub fn apply_stage(&self, stage: usize, x: &Signal) -> Result<Signal> {
        let missing = || Error::InvalidParameter(format!("no filter for stage {}", stage + 1));
        match self {
            FilterSpec::GaussianLowpass { sigmas } => {
                let sigma = *sigmas.get(stage).ok_or_else(missing)?;
                apply_zero_phase(x, &gaussian_response(x.shape(), sigma)?)
            }
            FilterSpec::IdealLowpass { cutoffs } => {
                let cutoff = *cutoffs.get(stage).ok_or_else(missing)?;
                apply_zero_phase(x, &ideal_response(x.shape(), cutoff)?)
            }
            FilterSpec::MovingAverage { windows } => {
                let w = *windows.get(stage).ok_or_else(missing)?;
                moving_average(x, w)
            }
        }
    }
}
