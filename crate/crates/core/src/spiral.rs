//! Discrete spirals of Theodorus.
//!
//! `T_l = x_1 + ... + x_l` with unit steps `x_l`, each step orthogonal to the
//! vertex it leaves from (`T_l` orthogonal to `x_{l+1}`). Read backwards the
//! steps form an energy-preserving sequence, so `||T_l||^2 = l` in any
//! dimension regardless of how the perpendicular direction is chosen.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signal::Signal;

const DEGENERATE: f64 = 1e-12;

/// Default one-time out-of-plane tilt for 3D spirals, in radians.
pub const DEFAULT_TILT: f64 = -std::f64::consts::PI / 720.0;
/// Default vertex after which the tilt is applied.
pub const DEFAULT_TILT_STEP: usize = 18;

#[derive(Debug, Clone, PartialEq)]
pub struct SpiralPath {
    pub dim: usize,
    /// `T_0 .. T_L`, `T_0` the origin.
    pub vertices: Vec<Vec<f64>>,
    /// Unit steps `x_1 .. x_L`.
    pub steps: Vec<Vec<f64>>,
    /// `Phi_1 .. Phi_L` in radians for planar spirals, empty otherwise.
    pub angles: Vec<f64>,
    pub warnings: Vec<String>,
}

impl SpiralPath {
    /// Number of steps `L`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `||T_l||` for `l = 0..=L`.
    pub fn norms(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| dot(v, v).sqrt()).collect()
    }

    /// Angle between `+z` and `T_l` for `l = 1..=L` (3D and up).
    pub fn polar_angles(&self) -> Vec<f64> {
        self.vertices[1..]
            .iter()
            .map(|v| (v[2] / dot(v, v).sqrt()).clamp(-1.0, 1.0).acos())
            .collect()
    }

    /// The steps as real 1D signals of length `dim`.
    pub fn step_signals(&self) -> Result<Vec<Signal>> {
        self.steps.iter().map(|s| Signal::real_1d(s)).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Removes the component of `v` along `t`.
fn reject(v: &[f64], t: &[f64]) -> Vec<f64> {
    let k = dot(v, t) / dot(t, t);
    v.iter().zip(t).map(|(a, b)| a - k * b).collect()
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = dot(v, v).sqrt();
    (n > 0.0).then(|| v.iter().map(|a| a / n).collect())
}

/// Unit vector orthogonal to `t` from a candidate direction: projected, then
/// projected again and normalized.
fn perpendicular(candidate: &[f64], t: &[f64]) -> Option<Vec<f64>> {
    let scale = dot(candidate, candidate).sqrt();
    let p = reject(candidate, t);
    if dot(&p, &p).sqrt() < DEGENERATE * scale || scale == 0.0 {
        return None;
    }
    normalized(&reject(&p, t))
}

struct Builder {
    vertices: Vec<Vec<f64>>,
    steps: Vec<Vec<f64>>,
}

impl Builder {
    fn new(dim: usize) -> Self {
        let mut first = vec![0.0; dim];
        first[0] = 1.0;
        Builder {
            vertices: vec![vec![0.0; dim], first.clone()],
            steps: vec![first],
        }
    }

    fn last(&self) -> &[f64] {
        self.vertices.last().expect("spiral has at least T_0")
    }

    fn push(&mut self, step: Vec<f64>) {
        let next = self.last().iter().zip(&step).map(|(a, b)| a + b).collect();
        self.vertices.push(next);
        self.steps.push(step);
    }

    fn finish(self, angles: Vec<f64>, warnings: Vec<String>) -> SpiralPath {
        SpiralPath {
            dim: self.steps[0].len(),
            vertices: self.vertices,
            steps: self.steps,
            angles,
            warnings,
        }
    }
}

fn check_len(steps: usize) -> Result<()> {
    if steps < 1 {
        return Err(Error::InvalidParameter("spiral needs at least one step".into()));
    }
    Ok(())
}

/// `Phi_1 .. Phi_L` with `Phi_1 = 0`, `Phi_{l+1} = Phi_l + atan(1/sqrt(l))`.
pub fn theodorus_angles(steps: usize) -> Vec<f64> {
    let mut angles = Vec::with_capacity(steps);
    let mut phi = 0.0;
    for l in 1..=steps {
        angles.push(phi);
        phi += (1.0 / (l as f64).sqrt()).atan();
    }
    angles
}

/// The planar spiral: `x_1 = [1, 0]`, `x_{l+1} = [-sin Phi_l, cos Phi_l]`.
pub fn theodorus_2d(steps: usize) -> Result<SpiralPath> {
    check_len(steps)?;
    let angles = theodorus_angles(steps);
    let mut b = Builder::new(2);
    for &phi in &angles[..steps - 1] {
        b.push(vec![-phi.sin(), phi.cos()]);
    }
    Ok(b.finish(angles, Vec::new()))
}

/// A 3D spiral that leaves the `z = 0` plane once.
///
/// Steps `x_1 .. x_K` (`K = tilt_step`) are the planar spiral. Every later
/// step is built in the local frame of the vertex it leaves: `u`, the
/// horizontal direction of rotation (`e_z x T_l`), and `w`, the unit vector
/// orthogonal to `T_l` pointing towards `+z`. The step is
/// `cos(b) u + sin(b) w` with the fixed elevation `b = -tilt`, so a negative
/// tilt makes the angle between `+z` and `T_l` fall steadily from `T_{K+1}` on
/// and a positive tilt makes it rise.
pub fn theodorus_3d(steps: usize, tilt: f64, tilt_step: usize) -> Result<SpiralPath> {
    check_len(steps)?;
    if !tilt.is_finite() || tilt.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidParameter(format!(
            "tilt must satisfy |tilt| < pi/2, got {tilt}"
        )));
    }
    if tilt_step < 1 {
        return Err(Error::InvalidParameter("tilt step must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    if tilt_step >= steps && tilt != 0.0 {
        warnings.push(format!(
            "tilt step {tilt_step} leaves no step to tilt in a {steps}-step spiral; path is planar"
        ));
    }

    let angles = theodorus_angles(steps);
    let elevation = -tilt;
    let mut b = Builder::new(3);
    for l in 1..steps {
        if l < tilt_step || elevation == 0.0 {
            let phi = angles[l - 1];
            b.push(vec![-phi.sin(), phi.cos(), 0.0]);
            continue;
        }
        let t = b.last().to_vec();
        let u = normalized(&[-t[1], t[0], 0.0]).ok_or(Error::DegenerateSteering { step: l + 1 })?;
        let w = perpendicular(&[0.0, 0.0, 1.0], &t).ok_or(Error::DegenerateSteering { step: l + 1 })?;
        let (s, c) = elevation.sin_cos();
        let raw: Vec<f64> = u.iter().zip(&w).map(|(a, b)| c * a + s * b).collect();
        let step = perpendicular(&raw, &t).ok_or(Error::DegenerateSteering { step: l + 1 })?;
        b.push(step);
    }
    let planar_angles = if elevation == 0.0 || tilt_step >= steps {
        angles
    } else {
        Vec::new()
    };
    Ok(b.finish(planar_angles, warnings))
}

/// How `theodorus_nd` picks each new step within the orthogonal complement
/// of the current vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum Steering {
    /// Project the previous step. Reproduces the planar spiral for `d = 2`.
    PreviousStep,
    /// Project a fresh uniform random direction from a seeded ChaCha8 stream.
    Random { seed: u64 },
    /// Project the given directions in turn, cycling; no fallback.
    Reference(Vec<Vec<f64>>),
}

/// General `d`-dimensional construction. When a projected candidate
/// degenerates, the standard basis vector with the largest projection is
/// used instead (except for [`Steering::Reference`], which errors).
pub fn theodorus_nd(steps: usize, dim: usize, steering: &Steering) -> Result<SpiralPath> {
    check_len(steps)?;
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "spiral dimension must be at least 2, got {dim}"
        )));
    }
    if let Steering::Reference(dirs) = steering {
        if dirs.is_empty() || dirs.iter().any(|d| d.len() != dim) {
            return Err(Error::InvalidParameter(format!(
                "reference directions must be non-empty and {dim}-dimensional"
            )));
        }
    }
    let mut rng = match steering {
        Steering::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };

    let mut b = Builder::new(dim);
    for l in 1..steps {
        let t = b.last().to_vec();
        let candidate = match steering {
            Steering::PreviousStep => b.steps[l - 1].clone(),
            Steering::Random { .. } => {
                let rng = rng.as_mut().expect("seeded above");
                (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
            }
            Steering::Reference(dirs) => dirs[(l - 1) % dirs.len()].clone(),
        };
        let step = match perpendicular(&candidate, &t) {
            Some(s) => s,
            None if matches!(steering, Steering::Reference(_)) => {
                return Err(Error::DegenerateSteering { step: l + 1 });
            }
            None => basis_fallback(&t).ok_or(Error::DegenerateSteering { step: l + 1 })?,
        };
        b.push(step);
    }
    Ok(b.finish(Vec::new(), Vec::new()))
}

fn basis_fallback(t: &[f64]) -> Option<Vec<f64>> {
    let dim = t.len();
    let best = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            let p = reject(&e, t);
            (dot(&p, &p), e)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))?;
    perpendicular(&best.1, t)
}
