use serde::{Deserialize, Serialize};

/// Every numerical threshold in the crate, relative to the largest magnitude involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Admissible `‖A − Aᴴ‖_F / ‖A‖_F` for symmetric inputs.
    pub sym: f64,
    /// Reconstruction/orthonormality residual of decompositions.
    pub eigen: f64,
    /// Eigenvalues below `rank * λ_max` count as zero.
    pub rank: f64,
    /// Spread below which two subspaces are declared exactly isoclinic.
    pub iso: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-10,
            eigen: 1e-10,
            rank: 1e-12,
            iso: 1e-10,
        }
    }
}
