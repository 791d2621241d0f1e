use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("residue factorization mismatch: -g~_- conj(g~_+) differs from 2*pi*i*r1 by {residual:.3e} (relative)")]
    Factorization { residual: f64 },

    #[error("step size too large: h * max|F| = {product:.3e} exceeds {limit}")]
    StepSize { product: f64, limit: f64 },

    #[error("spectral function is negative ({value:.3e}) at omega = {omega}")]
    NegativeSpectrum { omega: f64, value: f64 },

    #[error("t_max = {t_max} exceeds the recurrence guard pi/d_omega = {guard}")]
    Recurrence { t_max: f64, guard: f64 },

    #[error("invalid density matrix: {0}")]
    DensityMatrix(String),

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter { name, reason: format!("must be finite, got {value}") })
    }
}

pub(crate) fn require_positive_step(h: f64, t_max: f64) -> Result<usize> {
    require_finite("h", h)?;
    require_finite("t_max", t_max)?;
    if h <= 0.0 {
        return Err(Error::Parameter { name: "h", reason: format!("must be positive, got {h}") });
    }
    if t_max < h {
        return Err(Error::Parameter {
            name: "t_max",
            reason: format!("must be at least one step ({h}), got {t_max}"),
        });
    }
    let steps = (t_max / h).round();
    if (steps * h - t_max).abs() > 1e-9 * t_max.max(1.0) {
        return Err(Error::Parameter {
            name: "t_max",
            reason: format!("must be an integer multiple of h = {h}, got {t_max}"),
        });
    }
    Ok(steps as usize)
}
