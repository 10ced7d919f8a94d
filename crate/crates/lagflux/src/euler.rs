//! State vectors and ideal-gas thermodynamics for the 1D compressible Euler
//! equations.
//!
//! The conserved vector is U = (ρ, ρu, ρE) with E = e + u²/2 the specific
//! total energy; primitives are W = (ρ, u, p) with the ideal-gas closure
//! p = (γ − 1)ρe. The entropy pair used by the scheme's diagnostics is
//! η(U) = −ρ·log(s) with s = p/ρ^γ, paired with the entropy flux η·u.
//!
//! All operations reject non-physical inputs (ρ ≤ 0, p ≤ 0, NaN/∞) with an
//! error instead of clamping: a vacuum-adjacent state is a failure of the
//! run, not something to paper over.

use thiserror::Error;

/// Errors raised when a state leaves the admissible region ρ > 0, p > 0.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EulerError {
    #[error("non-positive density rho = {rho}")]
    NonPositiveDensity { rho: f64 },
    #[error("non-positive pressure p = {p} at rho = {rho}")]
    NonPositivePressure { rho: f64, p: f64 },
    #[error("non-finite component in state")]
    NonFiniteState,
    #[error("adiabatic exponent gamma = {gamma} outside (1, 3]")]
    InvalidGamma { gamma: f64 },
}

/// Ideal-gas model, parameterized by the adiabatic exponent γ ∈ (1, 3].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
}

impl GasModel {
    /// Builds a gas model, rejecting γ outside (1, 3] (γ → 1 degenerates the
    /// pressure law, and nothing physical lives beyond monatomic-plus).
    pub fn new(gamma: f64) -> Result<Self, EulerError> {
        if !(gamma > 1.0 && gamma <= 3.0) {
            return Err(EulerError::InvalidGamma { gamma });
        }
        Ok(GasModel { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Volume densities of the conserved quantities: mass, momentum, total energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeState {
    pub rho: f64,
    /// ρu
    pub momentum: f64,
    /// ρE = ρe + ρu²/2
    pub energy: f64,
}

/// Primitive variables (ρ, u, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimitiveState {
    fn validate(&self) -> Result<(), EulerError> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(EulerError::NonPositiveDensity { rho: self.rho });
        }
        if !self.u.is_finite() {
            return Err(EulerError::NonFiniteState);
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(EulerError::NonPositivePressure {
                rho: self.rho,
                p: self.p,
            });
        }
        Ok(())
    }
}

/// Flux of the conserved quantities through a point: (mass, momentum, energy).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Flux {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

/// Recovers (ρ, u, p) from (ρ, ρu, ρE); errors on ρ ≤ 0 or the derived p ≤ 0.
pub fn primitive_from_conservative(
    u: &ConservativeState,
    gas: &GasModel,
) -> Result<PrimitiveState, EulerError> {
    if !(u.rho > 0.0 && u.rho.is_finite()) {
        return Err(EulerError::NonPositiveDensity { rho: u.rho });
    }
    if !(u.momentum.is_finite() && u.energy.is_finite()) {
        return Err(EulerError::NonFiniteState);
    }
    let vel = u.momentum / u.rho;
    let internal = u.energy / u.rho - 0.5 * vel * vel;
    let p = (gas.gamma() - 1.0) * u.rho * internal;
    if !(p > 0.0 && p.is_finite()) {
        return Err(EulerError::NonPositivePressure { rho: u.rho, p });
    }
    Ok(PrimitiveState { rho: u.rho, u: vel, p })
}

/// Builds (ρ, ρu, ρE) from (ρ, u, p); errors on ρ ≤ 0 or p ≤ 0.
pub fn conservative_from_primitive(
    w: &PrimitiveState,
    gas: &GasModel,
) -> Result<ConservativeState, EulerError> {
    w.validate()?;
    let internal = w.p / ((gas.gamma() - 1.0) * w.rho);
    Ok(ConservativeState {
        rho: w.rho,
        momentum: w.rho * w.u,
        energy: w.rho * (internal + 0.5 * w.u * w.u),
    })
}

/// Speed of sound c = √(γp/ρ).
pub fn sound_speed(w: &PrimitiveState, gas: &GasModel) -> Result<f64, EulerError> {
    w.validate()?;
    Ok((gas.gamma() * w.p / w.rho).sqrt())
}

/// Specific entropy function s = p/ρ^γ (constant along smooth characteristics,
/// jumps only across shocks).
pub fn specific_entropy(w: &PrimitiveState, gas: &GasModel) -> Result<f64, EulerError> {
    w.validate()?;
    Ok(w.p / w.rho.powf(gas.gamma()))
}

/// log(s) = log(p) − γ·log(ρ), evaluated without forming ρ^γ so that extreme
/// density ratios cannot overflow.
pub fn log_specific_entropy(w: &PrimitiveState, gas: &GasModel) -> Result<f64, EulerError> {
    w.validate()?;
    Ok(w.p.ln() - gas.gamma() * w.rho.ln())
}

/// Convex entropy η(U) = −ρ·log(s). Its cell values enter the per-step
/// entropy-residual diagnostic.
pub fn entropy_eta(u: &ConservativeState, gas: &GasModel) -> Result<f64, EulerError> {
    let w = primitive_from_conservative(u, gas)?;
    Ok(-w.rho * (w.p.ln() - gas.gamma() * w.rho.ln()))
}

/// Physical flux F(U) = (ρu, ρu² + p, (ρE + p)u).
pub fn physical_flux(u: &ConservativeState, gas: &GasModel) -> Result<Flux, EulerError> {
    let w = primitive_from_conservative(u, gas)?;
    Ok(Flux {
        mass: u.momentum,
        momentum: u.momentum * w.u + w.p,
        energy: (u.energy + w.p) * w.u,
    })
}
