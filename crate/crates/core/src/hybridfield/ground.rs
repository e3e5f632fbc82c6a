use nalgebra::{Complex, ComplexField, DMatrix, SymmetricEigen};

use crate::error::FieldError;

/// Relative gap below which the ground state counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundStateCheck {
    /// `⟨ψ₀| A (H - E₀) A |ψ₀⟩`
    pub value: f64,
    /// `⟨A²⟩ - ⟨A⟩²` in `ψ₀`
    pub dispersion: f64,
    pub e0: f64,
    pub gap: f64,
    pub degenerate: bool,
}

fn hermitian(m: &DMatrix<Complex<f64>>, tol: f64) -> bool {
    let scale = m.iter().map(|z| z.modulus()).fold(1.0, f64::max);
    (m - m.adjoint()).iter().all(|z| z.modulus() <= tol * scale)
}

/// Diagonalize `H` and evaluate the positivity functional on its ground state.
pub fn ground_state_check(
    h: &DMatrix<Complex<f64>>,
    a: &DMatrix<Complex<f64>>,
) -> Result<GroundStateCheck, FieldError> {
    let d = h.nrows();
    if d < 2 || !h.is_square() || a.shape() != h.shape() {
        return Err(FieldError::Matrix("H and A must be square, equal size, d >= 2".into()));
    }
    if !hermitian(h, 1e-12) || !hermitian(a, 1e-12) {
        return Err(FieldError::Matrix("H and A must be Hermitian".into()));
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: alloc::vec::Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let e0 = eig.eigenvalues[order[0]];
    let gap = eig.eigenvalues[order[1]] - e0;
    let spread = eig.eigenvalues[order[d - 1]] - e0;
    let psi = eig.eigenvectors.column(order[0]).into_owned();

    let shifted = h - DMatrix::<Complex<f64>>::identity(d, d) * Complex::new(e0, 0.0);
    let apsi = a * &psi;
    let value = apsi.dotc(&(&shifted * &apsi)).re;
    let mean = psi.dotc(&apsi).re;
    let dispersion = apsi.dotc(&apsi).re - mean * mean;
    Ok(GroundStateCheck {
        value,
        dispersion,
        e0,
        gap,
        degenerate: gap <= DEGENERACY_TOL * spread.max(1.0),
    })
}
