use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive density {rho} at r = {r}")]
    NonPositiveDensity { rho: f64, r: f64 },
    #[error("vacuum state: w = {w} is not above z = {z}")]
    VacuumState { w: f64, z: f64 },
    #[error("sonic degeneracy: c1 = {c1}, c3 = {c3} (floor {floor})")]
    SonicDegeneracy { c1: f64, c3: f64, floor: f64 },
    #[error("non-positive radius {r}")]
    NonPositiveRadius { r: f64 },
    #[error("invalid gas parameters: {0}")]
    InvalidGas(String),
    #[error("invalid interval [{b1}, {b2}]")]
    InvalidInterval { b1: f64, b2: f64 },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("initial data not supersonic: z0 = {z} at r = {r}")]
    NonSupersonicData { z: f64, r: f64 },
    #[error("time step {dt} exceeds CFL limit {dt_max}")]
    CflViolation { dt: f64, dt_max: f64 },
    #[error("supersonic regime lost at t = {t}, r = {r} (c1 = {c1}, h = {h})")]
    RegimeLoss { t: f64, r: f64, c1: f64, h: f64 },
    #[error("gradient blowup at t = {t}, r = {r} (|grad| = {magnitude})")]
    BlowupDetected { t: f64, r: f64, magnitude: f64 },
    #[error("start point (r = {r}, t = {t}) outside the computed domain")]
    StartOutsideDomain { r: f64, t: f64 },
    #[error("finite-volume positivity lost in cell {cell} (q0 = {q0})")]
    PositivityLoss { cell: usize, q0: f64 },
    #[error("steady profile passes through the sonic point near r = {r}")]
    SonicPassage { r: f64 },
    #[error("solutions do not overlap at t = {t}")]
    NoOverlap { t: f64 },
    #[error("horizon T = {t} outside (0, {t0}]")]
    InvalidHorizon { t: f64, t0: f64 },
    #[error("expected a negative initial value, got {value}")]
    NonNegativeInput { value: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("ODE integration failed: {0}")]
    Integration(String),
    #[error("config error at `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
