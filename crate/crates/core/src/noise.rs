//! Noise models, per-qubit priors and seeded error sampling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliConfig};

/// Distribution over `{I, X, Y, Z}` for a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    pub p_i: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl Prior {
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let prior = Prior { p_i, p_x, p_y, p_z };
        prior.validate()?;
        Ok(prior)
    }

    /// Independent X and Z flips with rates `px`, `pz`.
    pub fn product(px: f64, pz: f64) -> Result<Self> {
        for p in [px, pz] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Prior::new(
            (1.0 - px) * (1.0 - pz),
            px * (1.0 - pz),
            px * pz,
            (1.0 - px) * pz,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let ps = self.as_array();
        if ps.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidPrior(format!(
                "negative or non-finite entry in {ps:?}"
            )));
        }
        let total: f64 = ps.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPrior(format!("entries sum to {total}")));
        }
        Ok(())
    }

    /// `[p_I, p_X, p_Y, p_Z]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }

    /// `psi(x, z)`.
    pub fn psi(&self, x: bool, z: bool) -> f64 {
        match Pauli::from_bits(x, z) {
            Pauli::I => self.p_i,
            Pauli::X => self.p_x,
            Pauli::Y => self.p_y,
            Pauli::Z => self.p_z,
        }
    }

    /// Marginal probability of an X component.
    pub fn marginal_x(&self) -> f64 {
        self.p_x + self.p_y
    }

    pub fn marginal_z(&self) -> f64 {
        self.p_z + self.p_y
    }

    pub fn xz_coupling(&self) -> f64 {
        xz_coupling(self)
    }
}

/// `kappa = p_Y - (p_X + p_Y)(p_Z + p_Y)`, the covariance of the X and Z bits.
pub fn xz_coupling(prior: &Prior) -> f64 {
    prior.p_y - prior.marginal_x() * prior.marginal_z()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseKind {
    SingleX,
    Depolarizing,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::SingleX => "single-x",
            NoiseKind::Depolarizing => "depolarizing",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "single-x" | "singlex" | "x" | "bitflip" | "bit-flip" => Ok(NoiseKind::SingleX),
            "depolarizing" | "depol" | "dep" => Ok(NoiseKind::Depolarizing),
            other => Err(Error::Parse(format!("unknown noise model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        Ok(NoiseModel { kind, p })
    }

    pub fn single_x(p: f64) -> Result<Self> {
        NoiseModel::new(NoiseKind::SingleX, p)
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        NoiseModel::new(NoiseKind::Depolarizing, p)
    }

    pub fn prior(&self) -> Result<Prior> {
        prior_of(self)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PauliConfig> {
        Ok(sample_prior(&self.prior()?, n, rng))
    }
}

pub fn prior_of(model: &NoiseModel) -> Result<Prior> {
    let p = model.p;
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    let prior = match model.kind {
        NoiseKind::SingleX => Prior {
            p_i: 1.0 - p,
            p_x: p,
            p_y: 0.0,
            p_z: 0.0,
        },
        NoiseKind::Depolarizing => Prior {
            p_i: 1.0 - p,
            p_x: p / 3.0,
            p_y: p / 3.0,
            p_z: p / 3.0,
        },
    };
    Ok(prior)
}

/// Draw one Pauli by comparing a uniform variate against the cumulative
/// distribution in the order I, X, Y, Z.
pub fn sample_one<R: Rng + ?Sized>(prior: &Prior, rng: &mut R) -> Pauli {
    let u: f64 = rng.random();
    let mut acc = prior.p_i;
    if u < acc {
        return Pauli::I;
    }
    acc += prior.p_x;
    if u < acc {
        return Pauli::X;
    }
    acc += prior.p_y;
    if u < acc {
        return Pauli::Y;
    }
    if prior.p_z > 0.0 {
        return Pauli::Z;
    }
    // rounding slack at the top of the range; fall back to the last non-empty outcome
    [Pauli::Y, Pauli::X, Pauli::I]
        .into_iter()
        .find(|p| prior.psi(p.bits().0, p.bits().1) > 0.0)
        .unwrap_or(Pauli::I)
}

pub fn sample_prior<R: Rng + ?Sized>(prior: &Prior, n: usize, rng: &mut R) -> PauliConfig {
    let mut e = PauliConfig::identity(n);
    for q in 0..n {
        e.set(q, sample_one(prior, rng));
    }
    e
}

/// i.i.d. sample of `n` qubits from `model` using a generator seeded with `seed`.
pub fn sample(model: &NoiseModel, n: usize, seed: u64) -> Result<PauliConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    model.sample(n, &mut rng)
}

/// Per-trial seed derived from a master seed with the SplitMix64 finalizer.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    let mut z = master_seed
        ^ trial_index
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master_seed, trial_index))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn priors() {
        let p = prior_of(&NoiseModel::single_x(0.1).unwrap()).unwrap();
        assert!(close(p.p_i, 0.9) && close(p.p_x, 0.1) && p.p_y == 0.0 && p.p_z == 0.0);
        let p = prior_of(&NoiseModel::depolarizing(0.09).unwrap()).unwrap();
        assert!(
            close(p.p_i, 0.91) && close(p.p_x, 0.03) && close(p.p_y, 0.03) && close(p.p_z, 0.03)
        );
        let p = prior_of(&NoiseModel::depolarizing(0.0).unwrap()).unwrap();
        assert_eq!(p.as_array(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            NoiseModel::depolarizing(1.5),
            Err(Error::InvalidProbability(1.5))
        );
        assert!(NoiseModel::single_x(-0.1).is_err());
    }

    #[test]
    fn coupling_matches_enumerated_covariance() {
        let k = xz_coupling(&prior_of(&NoiseModel::depolarizing(0.1).unwrap()).unwrap());
        assert!((k - (0.1 / 3.0 - (0.2f64 / 3.0).powi(2))).abs() < 1e-15);
        assert!((k - 0.028_888_888_888_888_9).abs() < 1e-12);
        for p in [0.01, 0.05, 0.1, 0.3] {
            for kind in [NoiseKind::SingleX, NoiseKind::Depolarizing] {
                let prior = prior_of(&NoiseModel::new(kind, p).unwrap()).unwrap();
                let mut ex = 0.0;
                let mut ez = 0.0;
                let mut exz = 0.0;
                for x in [false, true] {
                    for z in [false, true] {
                        let w = prior.psi(x, z);
                        ex += w * x as u8 as f64;
                        ez += w * z as u8 as f64;
                        exz += w * (x && z) as u8 as f64;
                    }
                }
                assert!((exz - ex * ez - xz_coupling(&prior)).abs() < 1e-12);
            }
        }
        let prod = Prior::product(0.07, 0.2).unwrap();
        assert!(xz_coupling(&prod).abs() < 1e-15);
    }

    #[test]
    fn sampler_edges_and_determinism() {
        let e = sample(&NoiseModel::depolarizing(0.0).unwrap(), 100, 3).unwrap();
        assert!(e.is_identity());
        let e = sample(&NoiseModel::single_x(1.0).unwrap(), 100, 3).unwrap();
        assert!(e.x.iter().all(|&b| b) && e.z.iter().all(|&b| !b));
        let a = sample(&NoiseModel::depolarizing(0.2).unwrap(), 500, 42).unwrap();
        let b = sample(&NoiseModel::depolarizing(0.2).unwrap(), 500, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(
            a,
            sample(&NoiseModel::depolarizing(0.2).unwrap(), 500, 43).unwrap()
        );
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| trial_seed(7, i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn chi_square_four_categories() {
        let n = 1_000_000;
        let prior = prior_of(&NoiseModel::depolarizing(0.3).unwrap()).unwrap();
        let e = sample(&NoiseModel::depolarizing(0.3).unwrap(), n, 2024).unwrap();
        let mut counts = [0usize; 4];
        for q in 0..n {
            let idx = match e.get(q) {
                Pauli::I => 0,
                Pauli::X => 1,
                Pauli::Y => 2,
                Pauli::Z => 3,
            };
            counts[idx] += 1;
        }
        let expected = prior.as_array();
        let chi2: f64 = counts
            .iter()
            .zip(expected)
            .map(|(&c, p)| {
                let m = p * n as f64;
                (c as f64 - m).powi(2) / m
            })
            .sum();
        // 3 degrees of freedom, 0.999 quantile
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn single_x_frequency_within_three_sigma() {
        let n = 1_000_000;
        let e = sample(&NoiseModel::single_x(0.1).unwrap(), n, 99).unwrap();
        let k = e.x.iter().filter(|&&b| b).count() as f64;
        let sigma = (n as f64 * 0.1 * 0.9).sqrt();
        assert!((k - 0.1 * n as f64).abs() < 3.0 * sigma);
    }
}
