use alloc::format;
use alloc::vec::Vec;

use libm::sqrt;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{mass_spectrum, FieldParams, Mat2};
use crate::error::FieldError;

/// `k² ∈ {0, 0.25, 0.5, 1, 2}`
pub fn default_k_grid() -> Vec<f64> {
    alloc::vec![0.0, 0.25, 0.5, 1.0, 2.0]
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub k_grid: Vec<f64>,
    pub dtau: f64,
    /// Total steps, burn-in included.
    pub n_steps: usize,
    pub n_burnin: usize,
    pub seed: u64,
    pub n_batches: usize,
}

impl SimConfig {
    pub fn new(k_grid: Vec<f64>, dtau: f64, n_steps: usize, n_burnin: usize, seed: u64) -> Self {
        Self {
            k_grid,
            dtau,
            n_steps,
            n_burnin,
            seed,
            n_batches: 20,
        }
    }

    /// Default grid, `dtau = 0.003`, `10⁵` steps with `5·10³` burn-in.
    pub fn with_seed(seed: u64) -> Self {
        Self::new(default_k_grid(), 0.003, 100_000, 5_000, seed)
    }

    /// `1/(k²_max + m₊²)`
    pub fn stability_bound(&self, p: &FieldParams) -> f64 {
        let kmax = self.k_grid.iter().copied().fold(0.0, f64::max);
        1.0 / (kmax + mass_spectrum(p).mplussq)
    }

    pub fn validate(&self, p: &FieldParams) -> Result<(), FieldError> {
        if self.k_grid.is_empty() {
            return Err(FieldError::InvalidConfig("empty k grid".into()));
        }
        if let Some(k) = self.k_grid.iter().find(|k| !k.is_finite() || **k < 0.0) {
            return Err(FieldError::InvalidConfig(format!(
                "k^2 = {k} must be finite and nonnegative"
            )));
        }
        if self.dtau.is_nan() || self.dtau <= 0.0 {
            return Err(FieldError::InvalidConfig(format!(
                "dtau = {} must be positive",
                self.dtau
            )));
        }
        let bound = self.stability_bound(p);
        if self.dtau >= bound {
            return Err(FieldError::Unstable { dtau: self.dtau, bound });
        }
        if self.n_steps <= self.n_burnin {
            return Err(FieldError::InvalidConfig(format!(
                "n_steps = {} must exceed n_burnin = {}",
                self.n_steps, self.n_burnin
            )));
        }
        if self.n_batches < 2 || self.n_steps - self.n_burnin < self.n_batches {
            return Err(FieldError::InvalidConfig(format!(
                "need at least 2 batches and one sample per batch, got {} batches",
                self.n_batches
            )));
        }
        Ok(())
    }
}

/// Time averages of one mode with batch-means standard errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeEstimate {
    pub ksq: f64,
    pub mean: [f64; 2],
    pub mean_se: [f64; 2],
    pub cov: Mat2,
    pub cov_se: Mat2,
    /// Connected four-point function `⟨φᵢ⁴⟩ - 3⟨φᵢ²⟩²` (central moments) per component.
    pub connected4: [f64; 2],
    pub connected4_se: [f64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub modes: Vec<ModeEstimate>,
}

/// Euler–Maruyama for `dΦ = -M(k) Φ dτ + √(2 diag(ħ₁,ħ₂)) dW` from `Φ = 0`.
///
/// Mode `index` draws from stream `index` of a ChaCha generator keyed by
/// `cfg.seed`, so modes can be run in any order or in parallel.
pub fn simulate_mode(p: &FieldParams, cfg: &SimConfig, index: usize) -> Result<ModeEstimate, FieldError> {
    cfg.validate(p)?;
    let ksq = *cfg
        .k_grid
        .get(index)
        .ok_or_else(|| FieldError::InvalidConfig(format!("mode {index} out of range")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);

    let m = p.mass_matrix(ksq);
    let dt = cfg.dtau;
    let a = Mat2::identity() - m * dt;
    let noise = [sqrt(2.0 * p.hbar1() * dt), sqrt(2.0 * p.hbar2() * dt)];

    let samples = cfg.n_steps - cfg.n_burnin;
    let batch_len = samples / cfg.n_batches;
    let used = batch_len * cfg.n_batches;

    let (mut f0, mut f1) = (0.0f64, 0.0f64);
    // per batch means of φ₀, φ₁, φ₀², φ₀φ₁, φ₁², φ₀³, φ₁³, φ₀⁴, φ₁⁴
    let mut batches: Vec<[f64; 9]> = Vec::with_capacity(cfg.n_batches);
    let mut acc = [0.0f64; 9];
    let mut in_batch = 0usize;
    for step in 0..cfg.n_burnin + used {
        let z0: f64 = rng.sample(StandardNormal);
        let z1: f64 = rng.sample(StandardNormal);
        let n0 = a[(0, 0)] * f0 + a[(0, 1)] * f1 + noise[0] * z0;
        let n1 = a[(1, 0)] * f0 + a[(1, 1)] * f1 + noise[1] * z1;
        f0 = n0;
        f1 = n1;
        if step < cfg.n_burnin {
            continue;
        }
        let (s0, s1) = (f0 * f0, f1 * f1);
        acc[0] += f0;
        acc[1] += f1;
        acc[2] += s0;
        acc[3] += f0 * f1;
        acc[4] += s1;
        acc[5] += s0 * f0;
        acc[6] += s1 * f1;
        acc[7] += s0 * s0;
        acc[8] += s1 * s1;
        in_batch += 1;
        if in_batch == batch_len {
            batches.push(acc.map(|x| x / batch_len as f64));
            acc = [0.0; 9];
            in_batch = 0;
        }
    }

    let nb = batches.len() as f64;
    let mut mean = [0.0f64; 9];
    for b in &batches {
        for (m, x) in mean.iter_mut().zip(b) {
            *m += x / nb;
        }
    }
    let mut var = [0.0f64; 9];
    for b in &batches {
        for ((v, x), m) in var.iter_mut().zip(b).zip(&mean) {
            *v += (x - m) * (x - m) / (nb - 1.0);
        }
    }
    let se = var.map(|v| sqrt(v / nb));

    // cumulant from the grand means, error from a leave-one-batch-out jackknife
    let kappa = |m: &[f64; 9]| [cumulant4(m[0], m[2], m[5], m[7]), cumulant4(m[1], m[4], m[6], m[8])];
    let connected4 = kappa(&mean);
    let jack: Vec<[f64; 2]> = batches
        .iter()
        .map(|b| {
            let mut loo = [0.0; 9];
            for ((l, m), x) in loo.iter_mut().zip(&mean).zip(b) {
                *l = (nb * m - x) / (nb - 1.0);
            }
            kappa(&loo)
        })
        .collect();
    let mut connected4_se = [0.0; 2];
    for (i, se) in connected4_se.iter_mut().enumerate() {
        let jm = jack.iter().map(|j| j[i]).sum::<f64>() / nb;
        let ss: f64 = jack.iter().map(|j| (j[i] - jm) * (j[i] - jm)).sum();
        *se = sqrt((nb - 1.0) / nb * ss);
    }
    Ok(ModeEstimate {
        ksq,
        mean: [mean[0], mean[1]],
        mean_se: [se[0], se[1]],
        cov: Mat2::new(mean[2], mean[3], mean[3], mean[4]),
        cov_se: Mat2::new(se[2], se[3], se[3], se[4]),
        connected4,
        connected4_se,
    })
}

/// `μ₄ - 3μ₂²` from raw moments `E φ`, `E φ²`, `E φ³`, `E φ⁴`.
fn cumulant4(m1: f64, m2: f64, m3: f64, m4: f64) -> f64 {
    let mu2 = m2 - m1 * m1;
    let mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    mu4 - 3.0 * mu2 * mu2
}

/// All modes of the grid, in grid order.
pub fn langevin_simulate(p: &FieldParams, cfg: &SimConfig) -> Result<SimReport, FieldError> {
    cfg.validate(p)?;
    let modes = (0..cfg.k_grid.len())
        .map(|i| simulate_mode(p, cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimReport { modes })
}

/// Stationary covariance of the discretized chain,
/// `C = (I - dτ M) C (I - dτ M) + 2 dτ diag(ħ₁, ħ₂)`.
pub fn euler_maruyama_covariance(p: &FieldParams, ksq: f64, dtau: f64) -> Result<Mat2, FieldError> {
    let a = Mat2::identity() - p.mass_matrix(ksq) * dtau;
    let (al, be, de) = (a[(0, 0)], a[(0, 1)], a[(1, 1)]);
    let lhs = Matrix3::new(
        1.0 - al * al,
        -2.0 * al * be,
        -be * be,
        -al * be,
        1.0 - (al * de + be * be),
        -be * de,
        -be * be,
        -2.0 * be * de,
        1.0 - de * de,
    );
    let rhs = Vector3::new(2.0 * dtau * p.hbar1(), 0.0, 2.0 * dtau * p.hbar2());
    let c = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| FieldError::Matrix("singular discrete stationarity system".into()))?;
    Ok(Mat2::new(c[0], c[1], c[1], c[2]))
}

/// Per mode, the covariance change when `dτ` is halved at fixed total
/// simulation time, and the combined standard error of that difference.
pub fn discretization_bias(p: &FieldParams, cfg: &SimConfig) -> Result<Vec<(Mat2, Mat2)>, FieldError> {
    let coarse = langevin_simulate(p, cfg)?;
    let fine_cfg = SimConfig {
        dtau: cfg.dtau / 2.0,
        n_steps: cfg.n_steps * 2,
        n_burnin: cfg.n_burnin * 2,
        seed: cfg.seed ^ 0x9e37_79b9_7f4a_7c15,
        ..cfg.clone()
    };
    let fine = langevin_simulate(p, &fine_cfg)?;
    Ok(coarse
        .modes
        .iter()
        .zip(&fine.modes)
        .map(|(c, f)| {
            let se = c.cov_se.zip_map(&f.cov_se, |a, b| sqrt(a * a + b * b));
            (c.cov - f.cov, se)
        })
        .collect())
}
