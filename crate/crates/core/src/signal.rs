//! Sample-array signals and the inner-product algebra over them.
//!
//! Every signal is stored as complex samples, real inputs simply carry zero
//! imaginary parts. The inner product is `<f, g> = sum f_i * conj(g_i)` over
//! all sample positions (a double sum for images), the norm is the induced
//! one and the energy is the squared norm.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative orthogonality tolerance used when none is given.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-9;

/// Dimensions of a signal: a series of `n` samples or a `rows x cols` image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    D1(usize),
    D2 { rows: usize, cols: usize },
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::D1(n) => n,
            Shape::D2 { rows, cols } => rows * cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimensions as a list, outermost first.
    pub fn dims(&self) -> Vec<usize> {
        match *self {
            Shape::D1(n) => vec![n],
            Shape::D2 { rows, cols } => vec![rows, cols],
        }
    }

    /// Largest dimension.
    pub fn max_dim(&self) -> usize {
        match *self {
            Shape::D1(n) => n,
            Shape::D2 { rows, cols } => rows.max(cols),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::D1(n) => write!(f, "({n})"),
            Shape::D2 { rows, cols } => write!(f, "({rows}x{cols})"),
        }
    }
}

/// A finite, non-empty array of complex samples with a 1D or 2D shape.
/// 2D samples are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    shape: Shape,
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(shape: Shape, samples: Vec<Complex64>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::Empty);
        }
        if samples.len() != shape.len() {
            return Err(Error::SampleCount {
                shape,
                samples: samples.len(),
            });
        }
        if let Some(index) = samples
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Signal { shape, samples })
    }

    pub fn from_real(shape: Shape, samples: &[f64]) -> Result<Self> {
        Signal::new(
            shape,
            samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// A real 1D signal.
    pub fn real_1d(samples: &[f64]) -> Result<Self> {
        Signal::from_real(Shape::D1(samples.len()), samples)
    }

    /// A real row-major image.
    pub fn real_2d(rows: usize, cols: usize, samples: &[f64]) -> Result<Self> {
        Signal::from_real(Shape::D2 { rows, cols }, samples)
    }

    /// The all-zero signal of a non-empty shape.
    pub fn zeros(shape: Shape) -> Result<Self> {
        Signal::new(shape, vec![Complex64::new(0.0, 0.0); shape.len()])
    }

    pub(crate) fn from_parts_unchecked(shape: Shape, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(shape.len(), samples.len());
        Signal { shape, samples }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im == 0.0)
    }

    /// Real parts of the samples.
    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    fn check_shape(&self, other: &Signal) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                left: self.shape,
                right: other.shape,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Signal, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Signal> {
        self.check_shape(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Signal::new(self.shape, samples)
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self - k * other`.
    pub fn sub_scaled(&self, k: f64, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a - b * k)
    }

    pub fn scale(&self, k: f64) -> Result<Signal> {
        Signal::new(self.shape, self.samples.iter().map(|&z| z * k).collect())
    }

    /// Circular delay of a 1D signal: `out[i] = x[(i - tau) mod n]`.
    pub fn shifted(&self, tau: i64) -> Result<Signal> {
        let n = match self.shape {
            Shape::D1(n) => n,
            other => return Err(Error::NotOneDimensional(other)),
        };
        let k = tau.rem_euclid(n as i64) as usize;
        let mut samples = self.samples.clone();
        samples.rotate_right(k);
        Ok(Signal::from_parts_unchecked(self.shape, samples))
    }

    /// Sum of a non-empty list of same-shape signals.
    pub fn sum_all(signals: &[Signal]) -> Result<Signal> {
        let first = signals.first().ok_or(Error::Empty)?;
        let mut acc = vec![CompensatedSum::default(); first.len()];
        for s in signals {
            first.check_shape(s)?;
            for (a, z) in acc.iter_mut().zip(&s.samples) {
                a.add(*z);
            }
        }
        Signal::new(first.shape, acc.iter().map(CompensatedSum::value).collect())
    }
}

/// Neumaier-compensated accumulator over complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: Neumaier,
    im: Neumaier,
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of reals.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// `sum f_i * conj(g_i)` over all sample positions.
pub fn inner_product(f: &Signal, g: &Signal) -> Result<Complex64> {
    f.check_shape(g)?;
    let mut acc = CompensatedSum::default();
    for (a, b) in f.samples.iter().zip(&g.samples) {
        acc.add(a * b.conj());
    }
    Ok(acc.value())
}

/// Squared norm, the real part of the self inner product.
pub fn energy(f: &Signal) -> f64 {
    // <f, f> is exactly real: a*conj(a) has a zero imaginary part in IEEE arithmetic.
    inner_product(f, f).map(|z| z.re).unwrap_or(0.0)
}

pub fn norm(f: &Signal) -> f64 {
    energy(f).sqrt()
}

/// `|<a, b>| / (||a|| ||b||)`, or 0 when either vector is zero.
pub fn normalized_inner(a: &Signal, b: &Signal) -> Result<f64> {
    let ip = inner_product(a, b)?;
    let denom = norm(a) * norm(b);
    Ok(if denom == 0.0 { 0.0 } else { ip.norm() / denom })
}

/// Orthogonality at relative tolerance: `|<a, b>| <= tol * ||a|| * ||b||`.
pub fn is_orthogonal(a: &Signal, b: &Signal, tol: f64) -> Result<bool> {
    let ip = inner_product(a, b)?;
    Ok(ip.norm() <= tol * norm(a) * norm(b))
}

/// Percentage error in energy: `(total - sum(parts)) / total * 100`.
pub fn pee(total: f64, parts: &[f64]) -> Result<f64> {
    if total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "total energy must be positive, got {total}"
        )));
    }
    let sum = compensated_sum(parts.iter().copied());
    Ok((total - sum) / total * 100.0)
}

/// Energy bookkeeping for one decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    /// Energy of the decomposed input, computed from the input itself.
    pub total_energy: f64,
    pub component_energies: Vec<f64>,
    /// Percentage error in energy; defined as 0 for a zero-energy input.
    pub pee_percent: f64,
}

impl EnergyLedger {
    pub fn new(input: &Signal, components: &[Signal]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("no components".into()));
        }
        for c in components {
            input.check_shape(c)?;
        }
        let total_energy = energy(input);
        let component_energies: Vec<f64> = components.iter().map(energy).collect();
        let pee_percent = if total_energy > 0.0 {
            pee(total_energy, &component_energies)?
        } else {
            0.0
        };
        Ok(EnergyLedger {
            total_energy,
            component_energies,
            pee_percent,
        })
    }

    pub fn component_sum(&self) -> f64 {
        compensated_sum(self.component_energies.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let a = Signal::real_1d(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(inner_product(&a, &a).unwrap(), c(14.0, 0.0));

        let p = Signal::real_1d(&[1.0, 1.0]).unwrap();
        let q = Signal::real_1d(&[1.0, -1.0]).unwrap();
        assert_eq!(inner_product(&p, &q).unwrap(), c(0.0, 0.0));

        let i = Signal::new(Shape::D1(1), vec![c(0.0, 1.0)]).unwrap();
        let one = Signal::new(Shape::D1(1), vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(inner_product(&i, &one).unwrap(), c(0.0, 1.0));
    }

    #[test]
    fn inner_product_shape_mismatch() {
        let a = Signal::real_1d(&[1.0, 2.0]).unwrap();
        let b = Signal::real_1d(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            inner_product(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
        let img = Signal::real_2d(1, 2, &[1.0, 2.0]).unwrap();
        assert!(inner_product(&a, &img).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(Signal::real_1d(&[]), Err(Error::Empty));
        assert_eq!(
            Signal::real_1d(&[1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(matches!(
            Signal::real_2d(2, 2, &[1.0, 2.0, 3.0]),
            Err(Error::SampleCount { .. })
        ));
        assert_eq!(Signal::real_2d(0, 3, &[]), Err(Error::Empty));
    }

    #[test]
    fn norm_and_energy_examples() {
        assert_eq!(norm(&Signal::real_1d(&[3.0, 4.0]).unwrap()), 5.0);
        let img = Signal::real_2d(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_relative_eq!(norm(&img), 30f64.sqrt());
        assert_eq!(energy(&img), 30.0);
        assert_eq!(norm(&Signal::real_1d(&[0.0; 3]).unwrap()), 0.0);
        assert_eq!(energy(&Signal::real_1d(&[1.0; 4]).unwrap()), 4.0);
        let f = Signal::real_1d(&[1.0, 2.0]).unwrap();
        assert_eq!(energy(&f.scale(3.0).unwrap()), 45.0);
    }

    #[test]
    fn pee_examples() {
        assert_eq!(pee(100.0, &[60.0, 40.0]).unwrap(), 0.0);
        assert_eq!(pee(4.0, &[2.0, 2.0]).unwrap(), 0.0);
        // Six-component plain decomposition of an image, energies rounded to 4 digits.
        let parts = [5.7088e8, 0.0760e8, 0.0167e8, 0.0068e8, 0.0038e8, 0.1080e8];
        let p = pee(665156949.0, &parts).unwrap();
        assert!((p - 10.9967).abs() < 5e-4, "{p}");
        assert!(pee(0.0, &[1.0]).is_err());
        assert!(pee(-1.0, &[]).is_err());
    }

    #[test]
    fn ledger_examples() {
        let x = Signal::real_1d(&[2.0, 0.0]).unwrap();
        let split = [
            Signal::real_1d(&[1.0, -1.0]).unwrap(),
            Signal::real_1d(&[1.0, 1.0]).unwrap(),
        ];
        let l = EnergyLedger::new(&x, &split).unwrap();
        assert_eq!(l.total_energy, 4.0);
        assert_eq!(l.component_energies, vec![2.0, 2.0]);
        assert_eq!(l.pee_percent, 0.0);

        let redundant = [
            Signal::real_1d(&[1.0, 0.0]).unwrap(),
            Signal::real_1d(&[1.0, 0.0]).unwrap(),
        ];
        let l = EnergyLedger::new(&x, &redundant).unwrap();
        assert_eq!(l.component_energies, vec![1.0, 1.0]);
        assert_eq!(l.pee_percent, 50.0);

        let zero = Signal::real_1d(&[0.0, 0.0]).unwrap();
        let l = EnergyLedger::new(&zero, std::slice::from_ref(&zero)).unwrap();
        assert_eq!(l.pee_percent, 0.0);
    }

    #[test]
    fn shift_wraps() {
        let x = Signal::real_1d(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(x.shifted(1).unwrap().real_parts(), vec![4.0, 1.0, 2.0, 3.0]);
        assert_eq!(x.shifted(-1).unwrap().real_parts(), vec![2.0, 3.0, 4.0, 1.0]);
        assert_eq!(x.shifted(4).unwrap(), x);
        let img = Signal::real_2d(1, 1, &[1.0]).unwrap();
        assert!(img.shifted(1).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn orthogonality_is_relative() {
        let a = Signal::real_1d(&[1e6, 0.0]).unwrap();
        let b = Signal::real_1d(&[1e-6, 1e6]).unwrap();
        assert!(is_orthogonal(&a, &b, 1e-9).unwrap());
        assert!(!is_orthogonal(&a, &b, 1e-15).unwrap());
    }
}
