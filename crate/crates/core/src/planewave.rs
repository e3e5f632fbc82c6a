//! Plane-wave structure functions `F_rs = F(u_rs, v_rs)` and their
//! functional Jacobi identity, evaluated in binary64.

use alloc::vec::Vec;
use core::ops::Add;

use libm::{cos, fabs, sin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_f1e1_d000;
pub const DIFF_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WaveVector {
    pub q: f64,
    pub p: f64,
    pub x: f64,
    pub k: f64,
}

impl WaveVector {
    pub const fn new(q: f64, p: f64, x: f64, k: f64) -> Self {
        Self { q, p, x, k }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite() && self.x.is_finite() && self.k.is_finite()
    }

    /// Uniform on `[-2, 2]^4`.
    pub fn sample<G: Rng + ?Sized>(rng: &mut G) -> Self {
        let mut c = || rng.random_range(-2.0..=2.0);
        Self::new(c(), c(), c(), c())
    }

    /// Uniform on `[-2, 2]^2` in the quantum labels, zero classical labels.
    pub fn sample_quantum<G: Rng + ?Sized>(rng: &mut G) -> Self {
        let mut c = || rng.random_range(-2.0..=2.0);
        Self::new(c(), c(), 0.0, 0.0)
    }
}

impl Add for WaveVector {
    type Output = WaveVector;

    fn add(self, o: Self) -> Self {
        Self::new(self.q + o.q, self.p + o.p, self.x + o.x, self.k + o.k)
    }
}

/// `u_rs = p_r q_s - q_r p_s`, `v_rs = k_r x_s - x_r k_s`
pub fn uv(r: &WaveVector, s: &WaveVector) -> (f64, f64) {
    (r.p * s.q - r.q * s.p, r.k * s.x - r.x * s.k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FKind {
    /// `v`
    Classical,
    /// `2 sin(u/2)`
    Quantum,
    /// `2 sin(u/2) + v cos(u/2)`
    StandardS,
    /// `2 sin((u+v)/2)`
    QuantumQuantum,
    /// `sin(h(u+v))/h`, equal to `Linear` at `h = 0`
    SineFamily(f64),
    /// `u + v`
    Linear,
}

impl FKind {
    /// `SineFamily(0)` is folded into `Linear`.
    pub fn normalized(self) -> Self {
        match self {
            FKind::SineFamily(0.0) => FKind::Linear,
            k => k,
        }
    }

    /// Profile `f(t) = F(t, 0)` with its first two derivatives.
    fn profile(self, t: f64) -> (f64, f64, f64) {
        match self.normalized() {
            FKind::Classical => (0.0, 0.0, 0.0),
            FKind::Quantum | FKind::StandardS | FKind::QuantumQuantum => sine_profile(0.5, t),
            FKind::SineFamily(h) => sine_profile(h, t),
            FKind::Linear => (t, 1.0, 0.0),
        }
    }
}

fn sine_profile(h: f64, t: f64) -> (f64, f64, f64) {
    (sin(h * t) / h, cos(h * t), -h * sin(h * t))
}

pub fn f_eval(kind: FKind, u: f64, v: f64) -> f64 {
    match kind.normalized() {
        FKind::Classical => v,
        FKind::Quantum => 2.0 * sin(u / 2.0),
        FKind::StandardS => 2.0 * sin(u / 2.0) + v * cos(u / 2.0),
        FKind::QuantumQuantum => 2.0 * sin((u + v) / 2.0),
        FKind::SineFamily(h) => sin(h * (u + v)) / h,
        FKind::Linear => u + v,
    }
}

fn f_pair(kind: FKind, r: &WaveVector, s: &WaveVector) -> f64 {
    let (u, v) = uv(r, s);
    f_eval(kind, u, v)
}

/// `F_rs F_{r+s,t} + F_st F_{s+t,r} + F_tr F_{t+r,s}`
pub fn jacobi_residual(kind: FKind, r: &WaveVector, s: &WaveVector, t: &WaveVector) -> f64 {
    f_pair(kind, r, s) * f_pair(kind, &(*r + *s), t)
        + f_pair(kind, s, t) * f_pair(kind, &(*s + *t), r)
        + f_pair(kind, t, r) * f_pair(kind, &(*t + *r), s)
}

/// `f f'' + f'(0)^2 - f'^2` on the profile `f(t) = F(t, 0)`.
pub fn ode_residual(kind: FKind, x: f64) -> f64 {
    let (f, d1, d2) = kind.profile(x);
    let (_, d0, _) = kind.profile(0.0);
    f * d2 + d0 * d0 - d1 * d1
}

/// Same residual for an arbitrary profile, with central differences.
pub fn ode_residual_with<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = DIFF_STEP;
    let d1 = |t: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    let d0 = d1(0.0);
    f(x) * d2 + d0 * d0 - d1(x) * d1(x)
}

pub type WaveTriple = [WaveVector; 3];

/// Largest residual over `n` random triples.
pub fn max_jacobi_residual(kind: FKind, n: usize, seed: u64) -> (f64, Option<WaveTriple>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0, None);
    for _ in 0..n {
        let t = [
            WaveVector::sample(&mut rng),
            WaveVector::sample(&mut rng),
            WaveVector::sample(&mut rng),
        ];
        let r = fabs(jacobi_residual(kind, &t[0], &t[1], &t[2]));
        if r > worst.0 || worst.1.is_none() {
            worst = (r, Some(t));
        }
    }
    worst
}

/// First random triple whose residual exceeds `threshold`.
pub fn find_jacobi_witness(kind: FKind, threshold: f64, max_tries: usize, seed: u64) -> Option<(WaveTriple, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..max_tries).find_map(|_| {
        let t = [
            WaveVector::sample(&mut rng),
            WaveVector::sample(&mut rng),
            WaveVector::sample(&mut rng),
        ];
        let r = jacobi_residual(kind, &t[0], &t[1], &t[2]);
        (fabs(r) > threshold).then_some((t, r))
    })
}

/// One member of the scanned family; `h = None` is the linear member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub h: Option<f64>,
    /// `sup |F(u,0) - 2 sin(u/2)|` over the sampled `u`.
    pub err_u: f64,
    /// `sup |F(0,v) - v|` over the sampled `v`.
    pub err_v: f64,
}

impl ScanRow {
    pub fn worst(&self) -> f64 {
        self.err_u.max(self.err_v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub samples: usize,
    pub min_max_error: f64,
    pub best: ScanRow,
}

impl ScanReport {
    /// No member meets both boundary postulates within `tol`.
    pub fn incompatible(&self, tol: f64) -> bool {
        self.min_max_error > tol
    }
}

/// The default grid `0.05, 0.10, ..., 2.00`.
pub fn default_h_grid() -> Vec<f64> {
    (1..=40).map(|i| i as f64 * 0.05).collect()
}

/// Compare every `sin(h(u+v))/h`, and the linear member, against the two
/// boundary postulates on `samples` equispaced points of `[-π, π]`.
pub fn postulate_scan(h_grid: &[f64], samples: usize) -> ScanReport {
    let samples = samples.max(2);
    let pts: Vec<f64> = (0..samples)
        .map(|i| -core::f64::consts::PI + 2.0 * core::f64::consts::PI * i as f64 / (samples - 1) as f64)
        .collect();
    let row = |kind: FKind, h: Option<f64>| {
        let mut err_u: f64 = 0.0;
        let mut err_v: f64 = 0.0;
        for &t in &pts {
            err_u = err_u.max(fabs(f_eval(kind, t, 0.0) - 2.0 * sin(t / 2.0)));
            err_v = err_v.max(fabs(f_eval(kind, 0.0, t) - t));
        }
        ScanRow { h, err_u, err_v }
    };
    let mut rows: Vec<ScanRow> = h_grid
        .iter()
        .map(|&h| {
            let kind = FKind::SineFamily(h).normalized();
            row(kind, (kind != FKind::Linear).then_some(h))
        })
        .collect();
    rows.push(row(FKind::Linear, None));
    let best = *rows
        .iter()
        .min_by(|a, b| a.worst().total_cmp(&b.worst()))
        .expect("nonempty");
    ScanReport {
        min_max_error: best.worst(),
        samples,
        best,
        rows,
    }
}
