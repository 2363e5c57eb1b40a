//! Probe inputs. Each fixture is a pair `(x1, x2)` sampled on `t = k / n`.

use std::f64::consts::TAU;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// `sin(2 pi 5 t)` and `sin(2 pi 50 t)`.
    Twotone,
    /// `(21 - l) sin(2 pi l t)` summed over `l = 1..=10` and `l = 11..=20`.
    Multitone,
    /// Uniform samples in `[-1, 1)` from ChaCha8 seeded with `--seed`.
    Random,
}

impl Fixture {
    pub fn name(self) -> &'static str {
        match self {
            Fixture::Twotone => "twotone",
            Fixture::Multitone => "multitone",
            Fixture::Random => "random",
        }
    }
}

fn tones(n: usize, terms: impl Iterator<Item = (f64, f64)> + Clone) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            terms.clone().map(|(amp, cycles)| amp * (TAU * cycles * t).sin()).sum()
        })
        .collect()
}

pub fn generate(fixture: Fixture, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    match fixture {
        Fixture::Twotone => (tones(n, [(1.0, 5.0)].into_iter()), tones(n, [(1.0, 50.0)].into_iter())),
        Fixture::Multitone => {
            let term = |l: u32| ((21 - l) as f64, l as f64);
            (tones(n, (1..=10).map(term)), tones(n, (11..=20).map(term)))
        }
        Fixture::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x1 = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x2 = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (x1, x2)
        }
    }
}
