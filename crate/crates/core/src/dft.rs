//! Discrete Fourier transforms for 1D and 2D signals.
//!
//! The forward transform is unnormalized, the inverse carries the `1/N`
//! (or `1/(MN)`) factor. Power-of-two lengths go through an iterative radix-2
//! transform, other lengths through the direct O(N^2) sum.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::signal::{CompensatedSum, Shape, Signal};

/// DFT bins of a signal, same shape as the source.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    shape: Shape,
    bins: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(shape: Shape, bins: Vec<Complex64>) -> Result<Self> {
        // Same invariants as a signal.
        let s = Signal::new(shape, bins)?;
        Ok(Spectrum {
            shape,
            bins: s.into_samples(),
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn bins_mut(&mut self) -> &mut [Complex64] {
        &mut self.bins
    }

    /// Sum of squared bin magnitudes. Parseval: equals `N * energy(signal)`.
    pub fn energy(&self) -> f64 {
        crate::signal::compensated_sum(self.bins.iter().map(|z| z.norm_sqr()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

/// Forward DFT; 2D is a row transform followed by a column transform.
pub fn dft_forward(x: &Signal) -> Spectrum {
    let mut bins = x.samples().to_vec();
    transform(x.shape(), &mut bins, Direction::Forward);
    Spectrum {
        shape: x.shape(),
        bins,
    }
}

/// Inverse DFT, exact inverse of [`dft_forward`].
pub fn dft_inverse(spectrum: &Spectrum) -> Signal {
    let mut samples = spectrum.bins.clone();
    transform(spectrum.shape, &mut samples, Direction::Inverse);
    let scale = 1.0 / spectrum.shape.len() as f64;
    for z in &mut samples {
        *z *= scale;
    }
    Signal::from_parts_unchecked(spectrum.shape, samples)
}

fn transform(shape: Shape, data: &mut [Complex64], dir: Direction) {
    match shape {
        Shape::D1(n) => Plan::new(n, dir).run(data),
        Shape::D2 { rows, cols } => {
            let row_plan = Plan::new(cols, dir);
            for row in data.chunks_exact_mut(cols) {
                row_plan.run(row);
            }
            let col_plan = Plan::new(rows, dir);
            let mut column = vec![Complex64::new(0.0, 0.0); rows];
            for c in 0..cols {
                for r in 0..rows {
                    column[r] = data[r * cols + c];
                }
                col_plan.run(&mut column);
                for r in 0..rows {
                    data[r * cols + c] = column[r];
                }
            }
        }
    }
}

/// Twiddle table `w[k] = exp(-+ 2 pi i k / n)` plus the chosen algorithm.
struct Plan {
    n: usize,
    twiddles: Vec<Complex64>,
    radix2: bool,
}

impl Plan {
    fn new(n: usize, dir: Direction) -> Self {
        let sign = match dir {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        };
        let twiddles = (0..n)
            .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64))
            .collect();
        Plan {
            n,
            twiddles,
            radix2: n.is_power_of_two(),
        }
    }

    fn run(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        if self.n <= 1 {
            return;
        }
        if self.radix2 {
            self.radix2_in_place(data);
        } else {
            self.direct(data);
        }
    }

    fn direct(&self, data: &mut [Complex64]) {
        let n = self.n;
        let out: Vec<Complex64> = (0..n)
            .map(|k| {
                let mut acc = CompensatedSum::default();
                for (j, &x) in data.iter().enumerate() {
                    acc.add(x * self.twiddles[(k * j) % n]);
                }
                acc.value()
            })
            .collect();
        data.copy_from_slice(&out);
    }

    fn radix2_in_place(&self, data: &mut [Complex64]) {
        let n = self.n;
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::energy;

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    /// Textbook O(N^2) DFT with angles evaluated per term.
    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * j) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn impulse_and_dc() {
        let impulse = Signal::real_1d(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(dft_forward(&impulse).bins(), &reals(&[1.0; 4]), 1e-15));
        let dc = Signal::real_1d(&[1.0; 4]).unwrap();
        assert!(close(dft_forward(&dc).bins(), &reals(&[4.0, 0.0, 0.0, 0.0]), 1e-15));
    }

    #[test]
    fn inverse_examples() {
        let s = Spectrum::new(Shape::D1(4), reals(&[4.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(close(dft_inverse(&s).samples(), &reals(&[1.0; 4]), 1e-15));
        let z = Spectrum::new(Shape::D1(4), reals(&[0.0; 4])).unwrap();
        assert!(dft_inverse(&z).is_zero());
    }

    #[test]
    fn parseval_small() {
        let x = Signal::real_1d(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let spec = dft_forward(&x);
        assert!((spec.energy() / 4.0 - 30.0).abs() < 1e-12);
        assert_eq!(energy(&x), 30.0);
    }

    #[test]
    fn round_trip_non_power_of_two() {
        let v = [0.3, -1.2, 2.5, 0.0, 7.1, -3.3, 1.0];
        let x = Signal::real_1d(&v).unwrap();
        let back = dft_inverse(&dft_forward(&x));
        assert!(close(back.samples(), x.samples(), 1e-12));
    }

    #[test]
    fn radix2_and_direct_agree_with_naive() {
        for n in [1usize, 2, 8, 64, 6, 15, 100] {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let sig = Signal::new(Shape::D1(n), x.clone()).unwrap();
            let fast = dft_forward(&sig);
            assert!(close(fast.bins(), &naive_dft(&x), 1e-9 * n as f64), "n = {n}");
        }
    }

    #[test]
    fn two_d_is_rows_then_columns() {
        // 2x2: F[k,l] = sum x[r,c] (-1)^(kr + lc)
        let x = Signal::real_2d(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let got = dft_forward(&x);
        assert!(close(got.bins(), &reals(&[10.0, -2.0, -4.0, 0.0]), 1e-14));
        let back = dft_inverse(&got);
        assert!(close(back.samples(), x.samples(), 1e-14));
    }
}
