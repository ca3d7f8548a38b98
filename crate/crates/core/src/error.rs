use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode {mode} is out of range for a basis with {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("cannot build a sector with {n_particles} particles in {n_modes} modes")]
    InvalidSector { n_modes: usize, n_particles: usize },
    #[error("operands live on different bases")]
    BasisMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("input is symmetric, antisymmetrization gives the zero vector")]
    ZeroAfterAntisymmetrization,
    #[error("orbitals are not orthonormal (overlap = {overlap:e})")]
    NonOrthonormalOrbitals { overlap: f64 },
    #[error("expected a {expected}-particle state, got {got}")]
    WrongParticleNumber { expected: usize, got: usize },
    #[error("observable is not Hermitian (deviation = {deviation:e})")]
    NonHermitianObservable { deviation: f64 },
    #[error("amplitude matrix is not antisymmetric (deviation = {deviation:e})")]
    NotAntisymmetric { deviation: f64 },
    #[error("joint density {density:e} at cells ({k}, {k_prime}) is too small to condition on")]
    ZeroDensity {
        k: usize,
        k_prime: usize,
        density: f64,
    },
    #[error("cell {cell} is out of range for a grid with {n_cells} cells")]
    CellOutOfRange { cell: usize, n_cells: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
