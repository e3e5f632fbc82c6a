//! Two scalar fields with a quadratic Euclidean action and per-field
//! Planck constants `ħ₁`, `ħ₂`.
//!
//! In momentum space the action is `½ Φᵀ M(k) Φ` with
//! `M(k) = [[k²+m₁², g], [g, k²+m₂²]]` and the Langevin noise strength of
//! field `i` is `ħ_i`.

mod ground;
mod langevin;

use alloc::format;
use libm::sqrt;
use nalgebra::{Matrix2, Matrix3, SymmetricEigen, Vector2, Vector3};

use crate::error::FieldError;

pub use ground::{ground_state_check, GroundStateCheck};
pub use langevin::{
    default_k_grid, discretization_bias, euler_maruyama_covariance, langevin_simulate, simulate_mode, ModeEstimate,
    SimConfig, SimReport,
};

pub type Mat2 = Matrix2<f64>;

/// Eigenvalue threshold for the PSD tests.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldParams {
    m1sq: f64,
    m2sq: f64,
    g: f64,
    hbar1: f64,
    hbar2: f64,
}

fn invalid(param: &'static str, reason: &str) -> FieldError {
    FieldError::InvalidParameter {
        param,
        reason: reason.into(),
    }
}

impl FieldParams {
    pub fn new(m1sq: f64, m2sq: f64, g: f64, hbar1: f64, hbar2: f64) -> Result<Self, FieldError> {
        for (name, v) in [
            ("m1sq", m1sq),
            ("m2sq", m2sq),
            ("g", g),
            ("hbar1", hbar1),
            ("hbar2", hbar2),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if m1sq <= 0.0 {
            return Err(invalid("m1sq", "must be positive"));
        }
        if m2sq <= 0.0 {
            return Err(invalid("m2sq", "must be positive"));
        }
        if m1sq * m2sq <= g * g {
            return Err(FieldError::InvalidParameter {
                param: "g",
                reason: format!("g^2 = {} must be below m1sq*m2sq = {}", g * g, m1sq * m2sq),
            });
        }
        if hbar1 < 0.0 {
            return Err(invalid("hbar1", "must be nonnegative"));
        }
        if hbar2 < 0.0 {
            return Err(invalid("hbar2", "must be nonnegative"));
        }
        Ok(Self {
            m1sq,
            m2sq,
            g,
            hbar1,
            hbar2,
        })
    }

    pub fn m1sq(&self) -> f64 {
        self.m1sq
    }
    pub fn m2sq(&self) -> f64 {
        self.m2sq
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn hbar1(&self) -> f64 {
        self.hbar1
    }
    pub fn hbar2(&self) -> f64 {
        self.hbar2
    }

    pub fn mass_matrix(&self, ksq: f64) -> Mat2 {
        Mat2::new(ksq + self.m1sq, self.g, self.g, ksq + self.m2sq)
    }

    /// `diag(ħ₁, ħ₂)`
    pub fn hbar_matrix(&self) -> Mat2 {
        Mat2::new(self.hbar1, 0.0, 0.0, self.hbar2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassSpectrum {
    pub r: f64,
    pub mplussq: f64,
    pub mminussq: f64,
    pub m3sq: f64,
}

pub fn mass_spectrum(p: &FieldParams) -> MassSpectrum {
    let d = p.m1sq - p.m2sq;
    let r = sqrt(d * d + 4.0 * p.g * p.g);
    let s = p.m1sq + p.m2sq;
    MassSpectrum {
        r,
        mplussq: 0.5 * (s + r),
        mminussq: 0.5 * (s - r),
        m3sq: 0.5 * s,
    }
}

/// `W(k) = [ħ₂a + ħ₁b]/(a+b) · M(k)⁻¹ + (ħ₁-ħ₂)/(a+b) · σ_z` with
/// `a = k²+m₁²`, `b = k²+m₂²`.
pub fn propagator(p: &FieldParams, ksq: f64) -> Mat2 {
    let m = p.mass_matrix(ksq);
    let (a, b) = (m[(0, 0)], m[(1, 1)]);
    let det = a * b - p.g * p.g;
    let wq = Mat2::new(b, -p.g, -p.g, a) / det;
    let sigma_z = Mat2::new(1.0, 0.0, 0.0, -1.0);
    wq * ((p.hbar2 * a + p.hbar1 * b) / (a + b)) + sigma_z * ((p.hbar1 - p.hbar2) / (a + b))
}

/// Masses and residue matrices of
/// `W(k) = Q₊/(k²+m₊²) + Q₋/(k²+m₋²) + Q₃/(k²+m₃²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralData {
    pub spectrum: MassSpectrum,
    pub qplus: Mat2,
    pub qminus: Mat2,
    pub q3: Mat2,
    /// `m₁² = m₂²` and `g = 0`: projectors undefined, decoupled form used.
    pub degenerate: bool,
}

impl SpectralData {
    pub fn reconstruct(&self, ksq: f64) -> Mat2 {
        let s = &self.spectrum;
        self.qplus / (ksq + s.mplussq) + self.qminus / (ksq + s.mminussq) + self.q3 / (ksq + s.m3sq)
    }
}

pub fn residues(p: &FieldParams) -> SpectralData {
    let spectrum = mass_spectrum(p);
    let r = spectrum.r;
    if r == 0.0 {
        return SpectralData {
            spectrum,
            qplus: Mat2::new(p.hbar1, 0.0, 0.0, 0.0),
            qminus: Mat2::new(0.0, 0.0, 0.0, p.hbar2),
            q3: Mat2::zeros(),
            degenerate: true,
        };
    }
    let m0 = p.mass_matrix(0.0);
    let id = Mat2::identity();
    let pplus = (m0 - id * spectrum.mminussq) / r;
    let pminus = (id * spectrum.mplussq - m0) / r;
    let c = (p.m1sq - p.m2sq) / r;
    let avg = 0.5 * (p.hbar1 + p.hbar2);
    let diff = 0.5 * (p.hbar1 - p.hbar2);
    let sigma_z = Mat2::new(1.0, 0.0, 0.0, -1.0);
    SpectralData {
        spectrum,
        qplus: pplus * (avg + diff * c),
        qminus: pminus * (avg - diff * c),
        q3: (sigma_z - (pplus - pminus) * c) * diff,
        degenerate: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residue {
    Plus,
    Minus,
    Three,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivityWitness {
    pub residue: Residue,
    pub matrix: Mat2,
    pub eigenvalue: f64,
    pub eigenvector: Vector2<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Positivity {
    Positive,
    NotPositive(PositivityWitness),
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive)
    }
}

/// Smallest eigenpair of a symmetric 2×2 matrix.
pub fn min_eigen(m: &Mat2) -> (f64, Vector2<f64>) {
    let e = SymmetricEigen::new(*m);
    let i = if e.eigenvalues[0] <= e.eigenvalues[1] { 0 } else { 1 };
    (e.eigenvalues[i], e.eigenvectors.column(i).into_owned())
}

/// Every residue matrix must be positive semidefinite.
pub fn reflection_positivity(p: &FieldParams) -> Positivity {
    let sd = residues(p);
    for (residue, matrix) in [
        (Residue::Plus, sd.qplus),
        (Residue::Minus, sd.qminus),
        (Residue::Three, sd.q3),
    ] {
        let (eigenvalue, eigenvector) = min_eigen(&matrix);
        if eigenvalue < -PSD_TOL {
            return Positivity::NotPositive(PositivityWitness {
                residue,
                matrix,
                eigenvalue,
                eigenvector,
            });
        }
    }
    Positivity::Positive
}

/// Symmetric solution of `M C + C M = 2 diag(ħ₁, ħ₂)`, solved as a 3×3
/// linear system in `(c₁₁, c₁₂, c₂₂)`.
pub fn lyapunov_covariance(p: &FieldParams, ksq: f64) -> Result<Mat2, FieldError> {
    let m = p.mass_matrix(ksq);
    let (a, g, b) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let lhs = Matrix3::new(a, g, 0.0, g, a + b, g, 0.0, g, b);
    let rhs = Vector3::new(p.hbar1, 0.0, p.hbar2);
    let c = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| FieldError::Matrix("singular stationarity system".into()))?;
    Ok(Mat2::new(c[0], c[1], c[1], c[2]))
}
