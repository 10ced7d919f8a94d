//! Exact solver for the Riemann problem of the 1D Euler equations with an
//! ideal gas, used as the reference ("oracle") solution for shock-tube runs
//! and convergence studies.
//!
//! The star-region pressure solves f(p) = f_L(p) + f_R(p) + (u_R − u_L) = 0,
//! where f_K is the shock (Rankine–Hugoniot) branch for p > p_K and the
//! rarefaction (isentrope) branch otherwise — the classical construction of
//! Toro, *Riemann Solvers and Numerical Methods for Fluid Dynamics*, ch. 4.
//! Newton iteration starts from the two-rarefaction approximation and is run
//! to a residual below [`PRESSURE_RESIDUAL_TOL`]; the solution is then
//! sampled self-similarly in ξ = x/t.

use crate::euler::{EulerError, GasModel, PrimitiveState};
use thiserror::Error;

/// Convergence target for |f(p*)| in the star-pressure iteration.
pub const PRESSURE_RESIDUAL_TOL: f64 = 1e-12;

const MAX_NEWTON_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RiemannError {
    /// The pressure positivity (no-vacuum) condition
    /// 2c_L/(γ−1) + 2c_R/(γ−1) > u_R − u_L fails: the data generate vacuum
    /// and no star state with positive pressure exists.
    #[error("initial states generate vacuum (velocity divergence {du} exceeds {limit})")]
    VacuumGenerated { du: f64, limit: f64 },
    #[error("invalid input state: {0}")]
    InvalidState(#[from] EulerError),
    /// Safety valve; unreachable for admissible inputs.
    #[error("star-pressure iteration failed to reach residual {tol} (best |f| = {residual})")]
    NoConvergence { residual: f64, tol: f64 },
}

/// The constant state between the two nonlinear waves: pressure and velocity
/// are continuous across the contact, density jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarRegion {
    pub p_star: f64,
    pub u_star: f64,
    /// Density between the left wave and the contact.
    pub rho_star_left: f64,
    /// Density between the contact and the right wave.
    pub rho_star_right: f64,
}

/// A solved Riemann problem, ready for self-similar sampling.
#[derive(Debug, Clone)]
pub struct ExactRiemannSolution {
    left: PrimitiveState,
    right: PrimitiveState,
    gas: GasModel,
    c_left: f64,
    c_right: f64,
    star: StarRegion,
}

/// Shock/rarefaction branches of the pressure function for one side, and its
/// p-derivative. `w` is the outer state, `c` its sound speed.
fn pressure_function(p: f64, w: &PrimitiveState, c: f64, gamma: f64) -> (f64, f64) {
    if p > w.p {
        // Shock branch.
        let a = 2.0 / ((gamma + 1.0) * w.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * w.p;
        let root = (a / (p + b)).sqrt();
        let f = (p - w.p) * root;
        let df = root * (1.0 - 0.5 * (p - w.p) / (b + p));
        (f, df)
    } else {
        // Rarefaction branch.
        let exponent = (gamma - 1.0) / (2.0 * gamma);
        let ratio = p / w.p;
        let f = 2.0 * c / (gamma - 1.0) * (ratio.powf(exponent) - 1.0);
        let df = ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (w.rho * c);
        (f, df)
    }
}

/// Two-rarefaction approximation: exact when both waves are rarefactions,
/// a positive and well-behaved Newton seed otherwise.
fn two_rarefaction_guess(
    left: &PrimitiveState,
    right: &PrimitiveState,
    c_left: f64,
    c_right: f64,
    gamma: f64,
) -> f64 {
    let z = (gamma - 1.0) / (2.0 * gamma);
    let numerator = c_left + c_right - 0.5 * (gamma - 1.0) * (right.u - left.u);
    let denominator = c_left / left.p.powf(z) + c_right / right.p.powf(z);
    (numerator / denominator).powf(1.0 / z)
}

/// Density adjacent to the contact on one side, for star pressure `p_star`.
fn star_density(w: &PrimitiveState, p_star: f64, gamma: f64) -> f64 {
    let ratio = p_star / w.p;
    if p_star > w.p {
        // Shock: Rankine–Hugoniot density jump.
        let g = (gamma - 1.0) / (gamma + 1.0);
        w.rho * (ratio + g) / (g * ratio + 1.0)
    } else {
        // Rarefaction: isentrope.
        w.rho * ratio.powf(1.0 / gamma)
    }
}

impl ExactRiemannSolution {
    /// Solves the star region for the data `(left, right)`.
    pub fn solve(
        left: PrimitiveState,
        right: PrimitiveState,
        gas: GasModel,
    ) -> Result<Self, RiemannError> {
        let gamma = gas.gamma();
        let c_left = crate::euler::sound_speed(&left, &gas)?;
        let c_right = crate::euler::sound_speed(&right, &gas)?;

        // Positivity condition: the two rarefactions must not empty the gas.
        let du = right.u - left.u;
        let limit = 2.0 * (c_left + c_right) / (gamma - 1.0);
        if du >= limit {
            return Err(RiemannError::VacuumGenerated { du, limit });
        }

        let mut p = two_rarefaction_guess(&left, &right, c_left, c_right, gamma).max(1e-300);
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let (f_left, df_left) = pressure_function(p, &left, c_left, gamma);
            let (f_right, df_right) = pressure_function(p, &right, c_right, gamma);
            residual = f_left + f_right + du;
            if residual.abs() <= PRESSURE_RESIDUAL_TOL {
                break;
            }
            let step = residual / (df_left + df_right);
            // Keep the iterate in the positive-pressure domain.
            p = (p - step).max(1e-14 * p);
        }
        // A NaN residual (from degenerate inputs) must also count as failure.
        if residual.is_nan() || residual.abs() > PRESSURE_RESIDUAL_TOL {
            return Err(RiemannError::NoConvergence {
                residual: residual.abs(),
                tol: PRESSURE_RESIDUAL_TOL,
            });
        }

        let (f_left, _) = pressure_function(p, &left, c_left, gamma);
        let (f_right, _) = pressure_function(p, &right, c_right, gamma);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (f_right - f_left);

        let star = StarRegion {
            p_star: p,
            u_star,
            rho_star_left: star_density(&left, p, gamma),
            rho_star_right: star_density(&right, p, gamma),
        };
        Ok(ExactRiemannSolution { left, right, gas, c_left, c_right, star })
    }

    pub fn star(&self) -> &StarRegion {
        &self.star
    }

    pub fn left(&self) -> &PrimitiveState {
        &self.left
    }

    pub fn right(&self) -> &PrimitiveState {
        &self.right
    }

    /// Speed of the left wave front: shock speed, or rarefaction head speed.
    pub fn left_wave_speed(&self) -> f64 {
        let gamma = self.gas.gamma();
        if self.star.p_star > self.left.p {
            let ratio = self.star.p_star / self.left.p;
            self.left.u
                - self.c_left
                    * ((gamma + 1.0) / (2.0 * gamma) * ratio + (gamma - 1.0) / (2.0 * gamma)).sqrt()
        } else {
            self.left.u - self.c_left
        }
    }

    /// Speed of the right wave front: shock speed, or rarefaction head speed.
    pub fn right_wave_speed(&self) -> f64 {
        let gamma = self.gas.gamma();
        if self.star.p_star > self.right.p {
            let ratio = self.star.p_star / self.right.p;
            self.right.u
                + self.c_right
                    * ((gamma + 1.0) / (2.0 * gamma) * ratio + (gamma - 1.0) / (2.0 * gamma)).sqrt()
        } else {
            self.right.u + self.c_right
        }
    }

    /// Samples the self-similar solution at ξ = x/t.
    pub fn sample(&self, xi: f64) -> PrimitiveState {
        let gamma = self.gas.gamma();
        let star = &self.star;
        if xi <= star.u_star {
            // Left of the contact.
            let w = &self.left;
            if star.p_star > w.p {
                // Left shock.
                if xi <= self.left_wave_speed() {
                    *w
                } else {
                    PrimitiveState { rho: star.rho_star_left, u: star.u_star, p: star.p_star }
                }
            } else {
                // Left rarefaction: head w.u − c, tail u* − c*.
                let c_star = self.c_left * (star.p_star / w.p).powf((gamma - 1.0) / (2.0 * gamma));
                if xi <= w.u - self.c_left {
                    *w
                } else if xi >= star.u_star - c_star {
                    PrimitiveState { rho: star.rho_star_left, u: star.u_star, p: star.p_star }
                } else {
                    // Inside the fan: u − 2c/(γ−1) and s are constant.
                    let factor = 2.0 / (gamma + 1.0)
                        + (gamma - 1.0) / ((gamma + 1.0) * self.c_left) * (w.u - xi);
                    PrimitiveState {
                        rho: w.rho * factor.powf(2.0 / (gamma - 1.0)),
                        u: 2.0 / (gamma + 1.0)
                            * (self.c_left + 0.5 * (gamma - 1.0) * w.u + xi),
                        p: w.p * factor.powf(2.0 * gamma / (gamma - 1.0)),
                    }
                }
            }
        } else {
            // Right of the contact (mirror image).
            let w = &self.right;
            if star.p_star > w.p {
                // Right shock.
                if xi >= self.right_wave_speed() {
                    *w
                } else {
                    PrimitiveState { rho: star.rho_star_right, u: star.u_star, p: star.p_star }
                }
            } else {
                let c_star =
                    self.c_right * (star.p_star / w.p).powf((gamma - 1.0) / (2.0 * gamma));
                if xi >= w.u + self.c_right {
                    *w
                } else if xi <= star.u_star + c_star {
                    PrimitiveState { rho: star.rho_star_right, u: star.u_star, p: star.p_star }
                } else {
                    let factor = 2.0 / (gamma + 1.0)
                        - (gamma - 1.0) / ((gamma + 1.0) * self.c_right) * (w.u - xi);
                    PrimitiveState {
                        rho: w.rho * factor.powf(2.0 / (gamma - 1.0)),
                        u: 2.0 / (gamma + 1.0)
                            * (-self.c_right + 0.5 * (gamma - 1.0) * w.u + xi),
                        p: w.p * factor.powf(2.0 * gamma / (gamma - 1.0)),
                    }
                }
            }
        }
    }
}

/// Exact solution at the given cell centers and time for a diaphragm at
/// `x_diaphragm`. At t = 0 this degenerates to the piecewise initial data.
pub fn reference_profile(
    left: PrimitiveState,
    right: PrimitiveState,
    x_diaphragm: f64,
    gas: GasModel,
    centers: &[f64],
    t: f64,
) -> Result<Vec<PrimitiveState>, RiemannError> {
    if t <= 0.0 {
        return Ok(centers
            .iter()
            .map(|&x| if x < x_diaphragm { left } else { right })
            .collect());
    }
    let solution = ExactRiemannSolution::solve(left, right, gas)?;
    Ok(centers
        .iter()
        .map(|&x| solution.sample((x - x_diaphragm) / t))
        .collect())
}

/// L1 errors h·Σ|v_num − v_ref| for v ∈ {ρ, u, p}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Errors {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

/// Discrete L1 distance between two cell-sampled profiles on a grid of
/// spacing `h`. Panics if the profiles have different lengths.
pub fn l1_errors(numerical: &[PrimitiveState], reference: &[PrimitiveState], h: f64) -> L1Errors {
    assert_eq!(
        numerical.len(),
        reference.len(),
        "profiles must be sampled on the same grid"
    );
    let mut err = L1Errors { rho: 0.0, u: 0.0, p: 0.0 };
    for (a, b) in numerical.iter().zip(reference) {
        err.rho += (a.rho - b.rho).abs();
        err.u += (a.u - b.u).abs();
        err.p += (a.p - b.p).abs();
    }
    err.rho *= h;
    err.u *= h;
    err.p *= h;
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{conservative_from_primitive, physical_flux, specific_entropy};

    fn gas() -> GasModel {
        GasModel::new(1.4).unwrap()
    }

    fn sod() -> (PrimitiveState, PrimitiveState) {
        (
            PrimitiveState { rho: 1.0, u: 0.0, p: 1.0 },
            PrimitiveState { rho: 0.125, u: 0.0, p: 0.1 },
        )
    }

    #[test]
    fn sod_star_state_matches_reference_values() {
        let (l, r) = sod();
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        let star = sol.star();
        assert!((star.p_star - 0.303_130_178_050_646_8).abs() < 1e-9);
        assert!((star.u_star - 0.927_452_620_048_949_9).abs() < 1e-9);
        assert!((star.rho_star_left - 0.426_319_428_178_495_16).abs() < 1e-9);
        assert!((star.rho_star_right - 0.265_573_711_705_307).abs() < 1e-9);
    }

    #[test]
    fn sod_shock_reaches_x_090_at_t_023() {
        let (l, r) = sod();
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        let shock_x = 0.5 + sol.right_wave_speed() * 0.23;
        assert!((shock_x - 0.902_995_818_366_940_9).abs() < 1e-9);
    }

    #[test]
    fn sampling_recovers_the_four_constant_regions() {
        let (l, r) = sod();
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        let star = *sol.star();

        // Ahead of the waves the data are untouched.
        assert_eq!(sol.sample(-2.0), l);
        assert_eq!(sol.sample(3.0), r);

        // Between rarefaction tail (ξ ≈ −0.0703) and contact (ξ ≈ 0.9275).
        let plateau_left = sol.sample(0.4);
        assert!((plateau_left.rho - star.rho_star_left).abs() < 1e-12);
        assert!((plateau_left.u - star.u_star).abs() < 1e-12);
        assert!((plateau_left.p - star.p_star).abs() < 1e-12);

        // Between contact and shock (ξ ≈ 1.7522).
        let plateau_right = sol.sample(1.2);
        assert!((plateau_right.rho - star.rho_star_right).abs() < 1e-12);
        assert!((plateau_right.u - star.u_star).abs() < 1e-12);
        assert!((plateau_right.p - star.p_star).abs() < 1e-12);
    }

    #[test]
    fn rarefaction_fan_preserves_the_riemann_invariants() {
        let (l, r) = sod();
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        let g = gas();
        let c_left = crate::euler::sound_speed(&l, &g).unwrap();
        let invariant_ref = l.u + 2.0 * c_left / 0.4;
        let s_ref = specific_entropy(&l, &g).unwrap();
        // Head at ξ = −1.1832, tail at ξ = −0.0703: sweep the interior.
        for k in 0..50 {
            let xi = -1.18 + 1.1 * (k as f64) / 49.0;
            let w = sol.sample(xi);
            let c = crate::euler::sound_speed(&w, &g).unwrap();
            assert!(
                ((w.u + 2.0 * c / 0.4) - invariant_ref).abs() < 1e-8,
                "u + 2c/(gamma-1) drifted at xi = {xi}"
            );
            assert!(
                (specific_entropy(&w, &g).unwrap() - s_ref).abs() < 1e-8,
                "entropy drifted at xi = {xi}"
            );
        }
    }

    #[test]
    fn rankine_hugoniot_holds_across_the_sampled_shock() {
        let (l, r) = sod();
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        let g = gas();
        let s = sol.right_wave_speed();
        let ahead = conservative_from_primitive(&r, &g).unwrap();
        let behind = conservative_from_primitive(
            &PrimitiveState {
                rho: sol.star().rho_star_right,
                u: sol.star().u_star,
                p: sol.star().p_star,
            },
            &g,
        )
        .unwrap();
        let f_ahead = physical_flux(&ahead, &g).unwrap();
        let f_behind = physical_flux(&behind, &g).unwrap();
        assert!((f_ahead.mass - f_behind.mass - s * (ahead.rho - behind.rho)).abs() < 1e-10);
        assert!(
            (f_ahead.momentum - f_behind.momentum - s * (ahead.momentum - behind.momentum)).abs()
                < 1e-10
        );
        assert!(
            (f_ahead.energy - f_behind.energy - s * (ahead.energy - behind.energy)).abs() < 1e-10
        );
    }

    #[test]
    fn entropy_rises_through_the_shock() {
        let (l, r) = sod();
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        let post = PrimitiveState {
            rho: sol.star().rho_star_right,
            u: sol.star().u_star,
            p: sol.star().p_star,
        };
        assert!(
            specific_entropy(&post, &gas()).unwrap() > specific_entropy(&r, &gas()).unwrap(),
            "gas crossing the shock must gain entropy"
        );
    }

    #[test]
    fn symmetric_compression_has_zero_contact_velocity() {
        let l = PrimitiveState { rho: 1.0, u: 1.0, p: 1.0 };
        let r = PrimitiveState { rho: 1.0, u: -1.0, p: 1.0 };
        let sol = ExactRiemannSolution::solve(l, r, gas()).unwrap();
        assert_eq!(sol.star().u_star, 0.0);
        assert!(sol.star().p_star > 1.0, "head-on collision must compress");
    }

    #[test]
    fn equal_states_solve_to_themselves() {
        let w = PrimitiveState { rho: 0.7, u: 0.4, p: 0.2 };
        let sol = ExactRiemannSolution::solve(w, w, gas()).unwrap();
        assert!((sol.star().p_star - w.p).abs() < 1e-11);
        assert!((sol.star().u_star - w.u).abs() < 1e-11);
        assert!((sol.sample(0.4).rho - w.rho).abs() < 1e-11);
    }

    #[test]
    fn vacuum_forming_data_are_rejected() {
        let l = PrimitiveState { rho: 1.0, u: -5.0, p: 0.01 };
        let r = PrimitiveState { rho: 1.0, u: 5.0, p: 0.01 };
        assert!(matches!(
            ExactRiemannSolution::solve(l, r, gas()),
            Err(RiemannError::VacuumGenerated { .. })
        ));
    }

    #[test]
    fn invalid_input_states_are_rejected() {
        let bad = PrimitiveState { rho: -1.0, u: 0.0, p: 1.0 };
        let ok = PrimitiveState { rho: 1.0, u: 0.0, p: 1.0 };
        assert!(matches!(
            ExactRiemannSolution::solve(bad, ok, gas()),
            Err(RiemannError::InvalidState(_))
        ));
    }

    #[test]
    fn reference_profile_at_t_zero_is_the_initial_data() {
        let (l, r) = sod();
        let centers = [0.1, 0.3, 0.499, 0.501, 0.9];
        let profile = reference_profile(l, r, 0.5, gas(), &centers, 0.0).unwrap();
        assert_eq!(profile[0], l);
        assert_eq!(profile[2], l);
        assert_eq!(profile[3], r);
        assert_eq!(profile[4], r);
    }

    #[test]
    fn l1_errors_accumulate_componentwise() {
        let a = [
            PrimitiveState { rho: 1.0, u: 0.0, p: 1.0 },
            PrimitiveState { rho: 2.0, u: 1.0, p: 3.0 },
        ];
        let b = [
            PrimitiveState { rho: 1.5, u: 0.0, p: 1.0 },
            PrimitiveState { rho: 2.0, u: 0.0, p: 2.5 },
        ];
        let err = l1_errors(&a, &b, 0.1);
        assert!((err.rho - 0.05).abs() < 1e-15);
        assert!((err.u - 0.1).abs() < 1e-15);
        assert!((err.p - 0.05).abs() < 1e-15);
    }

    #[test]
    fn identical_profiles_have_zero_error() {
        let a = [PrimitiveState { rho: 1.0, u: 2.0, p: 3.0 }];
        let err = l1_errors(&a, &a, 0.25);
        assert_eq!(err.rho, 0.0);
        assert_eq!(err.u, 0.0);
        assert_eq!(err.p, 0.0);
    }
}
