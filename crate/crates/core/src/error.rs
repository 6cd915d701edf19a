use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (relative residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("moments of inertia are not {shape}: {inertia:?}")]
    NotSymmetric { shape: &'static str, inertia: [f64; 3] },

    #[error("bad quantum numbers: {0}")]
    BadQuantumNumbers(String),

    #[error("negative discriminant {0:e} in the kinetic eigenvalue formula")]
    NegativeDiscriminant(f64),

    #[error("energy is zero; spinor is undefined")]
    DegenerateEnergy,

    #[error("velocity {speed:e} is not below the speed of light {c:e}")]
    SuperluminalVelocity { speed: f64, c: f64 },

    #[error("four-vector is not timelike (norm {norm:e})")]
    NotTimelike { norm: f64 },

    #[error("inertia tensor is degenerate (principal moment {moment:e} below {threshold:e})")]
    DegenerateInertia { moment: f64, threshold: f64 },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
