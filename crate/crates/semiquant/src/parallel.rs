use rayon::prelude::*;
use semiquant_core::hybridfield::{simulate_mode, FieldParams, SimConfig, SimReport};
use semiquant_core::FieldError;

/// Modes run on the rayon pool. Each mode owns its random stream, so the
/// result equals the sequential one bit for bit.
pub fn simulate_parallel(p: &FieldParams, cfg: &SimConfig) -> Result<SimReport, FieldError> {
    cfg.validate(p)?;
    let modes = (0..cfg.k_grid.len())
        .into_par_iter()
        .map(|i| simulate_mode(p, cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimReport { modes })
}
