//! The Lagrange-flux interface resolution and the numerical flux built on it.
//!
//! At an interface between states W_L and W_R the scheme prescribes, in
//! closed form:
//!
//! * an interface velocity `u* = (u_L + u_R)/2`;
//! * half-cell interface pressures `p̃₊ = (p_L + p*)/2 + V_L` and
//!   `p̃₋ = (p_R + p*)/2 + V_R`, coupled through `p* = (p̃₊ + p̃₋)/2`, where
//!   V is a pseudo-viscosity increment that is active only under compression
//!   (δ = (u_R − u_L)/2 < 0): `V = −(α·ρc + β·ρ|δ|)·min(δ, 0)`;
//! * an interface energy rate `q*` chosen so that the pressure work done on
//!   the two half-cells closes exactly: `p̃₊(u* − u_L) + p̃₋(u_R − u*) =
//!   p*(u_R − u_L)`;
//! * entropy production rates `π₊ = (α·ρ_L c_L + β·ρ_L|δ|)·min(δ,0)²` (and
//!   mirrored `π₋`), non-negative by construction — the scheme's
//!   entropy-stability certificate.
//!
//! Substituting the p̃ expressions into `p* = (p̃₊ + p̃₋)/2` collapses the
//! coupling to `p* = (p_L + p_R)/2 + V_L + V_R`, which is what
//! [`resolve_interface`] evaluates. The numerical flux is then upwinding of
//! the conserved quantities by the sign of `u*` plus the pressure terms:
//! `Φ = U_upw·u* + (0, p*, q*)`.

use crate::euler::{
    primitive_from_conservative, sound_speed, ConservativeState, EulerError, Flux, GasModel,
    PrimitiveState,
};

/// Pseudo-viscosity coefficients. `alpha` scales the acoustic (ρc, linear in
/// the velocity jump) part, `beta` the quadratic ρ|δ| part; both must be
/// non-negative or the entropy-production guarantee is lost. Callers are
/// expected to validate once at configuration time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityParams {
    pub alpha: f64,
    pub beta: f64,
}

impl ViscosityParams {
    pub fn is_valid(&self) -> bool {
        self.alpha >= 0.0
            && self.beta >= 0.0
            && self.alpha.is_finite()
            && self.beta.is_finite()
    }
}

/// Everything the scheme needs at one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceResolution {
    /// Interface velocity u* = (u_L + u_R)/2.
    pub u_star: f64,
    /// Interface pressure seen by the right half of the left cell.
    pub p_tilde_plus: f64,
    /// Interface pressure seen by the left half of the right cell.
    pub p_tilde_minus: f64,
    /// Mean interface pressure, (p̃₊ + p̃₋)/2 in closed form.
    pub p_star: f64,
    /// Interface energy rate entering the energy flux.
    pub q_star: f64,
    /// Entropy production rate on the left side; ≥ 0 always.
    pub pi_plus: f64,
    /// Entropy production rate on the right side; ≥ 0 always.
    pub pi_minus: f64,
}

/// Residuals of the two closure identities the resolution must satisfy:
/// `work` is the half-cell pressure-work balance, `energy` the difference
/// between evaluating q* from the left and from the right half-cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityResiduals {
    pub work: f64,
    pub energy: f64,
}

/// Interface velocity: the arithmetic mean of the two cell velocities.
pub fn interface_velocity(u_left: f64, u_right: f64) -> f64 {
    0.5 * (u_left + u_right)
}

/// Pseudo-viscosity increment V = −(α·ρc + β·ρ|δ|)·min(δ, 0) for one side of
/// the interface; zero when δ ≥ 0 (expansion), positive under compression.
pub fn viscosity_increment(
    w: &PrimitiveState,
    delta: f64,
    params: &ViscosityParams,
    gas: &GasModel,
) -> Result<f64, EulerError> {
    debug_assert!(params.is_valid(), "viscosity coefficients must be >= 0");
    let compression = (-delta).max(0.0);
    let rho_c = w.rho * sound_speed(w, gas)?;
    Ok((params.alpha * rho_c + params.beta * w.rho * delta.abs()) * compression)
}

/// Resolves one interface from the adjacent primitive states.
pub fn resolve_interface(
    left: &PrimitiveState,
    right: &PrimitiveState,
    params: &ViscosityParams,
    gas: &GasModel,
) -> Result<InterfaceResolution, EulerError> {
    let u_star = interface_velocity(left.u, right.u);
    // Both half-cells see the same velocity increment:
    // δ = u* − u_L = u_R − u* = (u_R − u_L)/2.
    let delta = 0.5 * (right.u - left.u);
    let v_left = viscosity_increment(left, delta, params, gas)?;
    let v_right = viscosity_increment(right, delta, params, gas)?;

    let p_star = 0.5 * (left.p + right.p) + v_left + v_right;
    let p_tilde_plus = 0.5 * (left.p + p_star) + v_left;
    let p_tilde_minus = 0.5 * (right.p + p_star) + v_right;

    // Energy closure from the left half-cell; the right half-cell evaluation
    // agrees by construction (see `compatibility_residuals`).
    let q_star = left.p * left.u + p_tilde_plus * (u_star - left.u) + left.u * (p_star - left.p);

    // π = (α·ρc + β·ρ|δ|)·min(δ,0)² = V·max(−δ, 0): a product of
    // non-negative factors, so non-negativity survives rounding.
    let compression = (-delta).max(0.0);
    let pi_plus = v_left * compression;
    let pi_minus = v_right * compression;

    Ok(InterfaceResolution {
        u_star,
        p_tilde_plus,
        p_tilde_minus,
        p_star,
        q_star,
        pi_plus,
        pi_minus,
    })
}

/// Evaluates the two closure identities on a finished resolution. Both are
/// zero in exact arithmetic; in floats they sit at round-off level.
pub fn compatibility_residuals(
    left: &PrimitiveState,
    right: &PrimitiveState,
    res: &InterfaceResolution,
) -> CompatibilityResiduals {
    let work = res.p_tilde_plus * (res.u_star - left.u)
        + res.p_tilde_minus * (right.u - res.u_star)
        - res.p_star * (right.u - left.u);
    let q_from_left =
        left.p * left.u + res.p_tilde_plus * (res.u_star - left.u) + left.u * (res.p_star - left.p);
    let q_from_right = right.p * right.u
        - res.p_tilde_minus * (right.u - res.u_star)
        - right.u * (right.p - res.p_star);
    CompatibilityResiduals { work, energy: q_from_left - q_from_right }
}

/// Assembles the numerical flux Φ = U_upw·u* + (0, p*, q*) from a finished
/// resolution. Ties at u* = 0 take the left state (the convective part
/// vanishes there anyway).
pub fn flux_from_resolution(
    left: &ConservativeState,
    right: &ConservativeState,
    res: &InterfaceResolution,
) -> Flux {
    let upwind = if res.u_star >= 0.0 { left } else { right };
    Flux {
        mass: upwind.rho * res.u_star,
        momentum: upwind.momentum * res.u_star + res.p_star,
        energy: upwind.energy * res.u_star + res.q_star,
    }
}

/// Numerical flux between two cells given by their conserved states.
/// Consistent: Φ(U, U) = F(U).
pub fn numerical_flux(
    left: &ConservativeState,
    right: &ConservativeState,
    params: &ViscosityParams,
    gas: &GasModel,
) -> Result<Flux, EulerError> {
    let w_left = primitive_from_conservative(left, gas)?;
    let w_right = primitive_from_conservative(right, gas)?;
    let res = resolve_interface(&w_left, &w_right, params, gas)?;
    Ok(flux_from_resolution(left, right, &res))
}
