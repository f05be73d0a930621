use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("axis {axis} has {points} points, at least {required} are needed")]
    GridTooSmall {
        axis: usize,
        points: usize,
        required: usize,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("operation requires a {required}D grid, got {found}D")]
    WrongDimension { required: usize, found: usize },

    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("gamma must be non-zero for vortex or electromagnetic quantities")]
    ZeroGamma,

    #[error("density is negative ({value:e}) at node {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("density {value:e} at node {index} is below the floor {floor:e}")]
    DensityBelowFloor { index: usize, value: f64, floor: f64 },

    #[error("|psi| = {magnitude:e} at node {index} is below the floor {floor:e}")]
    VanishingWavefunction {
        index: usize,
        magnitude: f64,
        floor: f64,
    },

    #[error("periodic Poisson source has non-zero mean {mean:e}")]
    PoissonSolvability { mean: f64 },

    #[error("uniform component {mean:?} cannot be the curl of a periodic field")]
    UniformCurlOnPeriodicGrid { mean: [f64; 3] },

    #[error("input field is not solenoidal (max |div| = {max_div:e})")]
    NonSolenoidal { max_div: f64 },

    #[error("iterative solver stopped after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("boundary values reach {ratio:e} of the interior maximum; the field does not decay")]
    BoundaryFloor { ratio: f64 },

    #[error("operation requires a {0:?} boundary")]
    WrongBoundary(crate::fields::Boundary),

    #[error("charged sphere parameters are not repulsive (gamma_bar = {gamma_bar:e})")]
    NonRepulsive { gamma_bar: f64 },

    #[error("radius {r} is below the initial radius {r0}")]
    RadiusBelowInitial { r: f64, r0: f64 },

    #[error("grid node at distance {distance} lies outside the sphere of radius {radius}")]
    OutsideSphere { distance: f64, radius: f64 },

    #[error("constants do not match the physical preset (alpha must equal -1/(2 m beta))")]
    NonPhysicalConstants,

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
