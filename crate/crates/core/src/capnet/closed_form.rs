//! Closed-form minimum energy U(n_a, n_b) of the symmetric network.
//!
//! The symmetric network is invariant under the exchange (A, B, V_a) ↔
//! (C, D, V_b), so the 4×4 dot capacitance matrix splits into a common
//! mode (n_a + n_b, V⁺) and a difference mode (n_a − n_b, V⁻), each a 2×2
//! block. C_A, C_B are the diagonal entries of the common-mode block and
//! C_C, C_D those of the difference-mode block; C_a and C_b are the mode
//! charging capacitances.

use super::{CapacitanceSet, GateBias, Occupation};
use crate::error::Result;
use crate::scalar::Real;

/// ϱ = 2√2 + 1, the weight of C3 in the difference-mode dot capacitances
/// (C3 plus the two diagonal couplings 2·C1 = 2√2·C3).
pub const RHO: f64 = 2.0 * std::f64::consts::SQRT_2 + 1.0;

/// Mode capacitances of a symmetric set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCapacitances<T: Real = f64> {
    /// C_A = C3 + C5 + C6
    pub c_a_mode: T,
    /// C_B = C3 + C6 + C7
    pub c_b_mode: T,
    /// C_C = ϱC3 + C5 + C6
    pub c_c_mode: T,
    /// C_D = ϱC3 + C6 + C7
    pub c_d_mode: T,
    /// 1/C_a, common-mode inverse charging capacitance.
    pub inv_c_common: T,
    /// 1/C_b, difference-mode inverse charging capacitance.
    pub inv_c_difference: T,
    /// C_A·C_B − (C3 + C6)²
    pub det_common: T,
    /// C_C·C_D − (C6 − C3)²
    pub det_difference: T,
}

impl<T: Real> ModeCapacitances<T> {
    pub fn new(caps: &CapacitanceSet<T>) -> Result<Self> {
        caps.require_symmetric()?;
        let (c3, c5, c6, c7) = (caps.c(3), caps.c(5), caps.c(6), caps.c(7));
        let rho = T::lit(RHO);
        let c_a_mode = c3 + c5 + c6;
        let c_b_mode = c3 + c6 + c7;
        let c_c_mode = rho * c3 + c5 + c6;
        let c_d_mode = rho * c3 + c6 + c7;
        let det_common = c_a_mode * c_b_mode - (c3 + c6) * (c3 + c6);
        let det_difference = c_c_mode * c_d_mode - (c6 - c3) * (c6 - c3);
        let inv_c_common = (c5 + c7) / ((c5 + c7) * (c3 + c6) + c5 * c7);
        let two = T::lit(2.0);
        let inv_c_difference = (c5 + c7 + two * (rho + T::one()) * c3) / det_difference;
        Ok(Self {
            c_a_mode,
            c_b_mode,
            c_c_mode,
            c_d_mode,
            inv_c_common,
            inv_c_difference,
            det_common,
            det_difference,
        })
    }

    /// Hessian of U in (n_a, n_b): ∂²U/∂n_a², ∂²U/∂n_a∂n_b, ∂²U/∂n_b².
    pub fn hessian(&self) -> [[T; 2]; 2] {
        let eighth = T::lit(0.125);
        let diag = eighth * (self.inv_c_common + self.inv_c_difference);
        let off = eighth * (self.inv_c_common - self.inv_c_difference);
        [[diag, off], [off, diag]]
    }

    /// Coefficient of n_a·n_b: (1/C_a − 1/C_b)/8.
    pub fn cross_coefficient(&self) -> T {
        T::lit(0.125) * (self.inv_c_common - self.inv_c_difference)
    }
}

/// Minimum network energy as a polynomial in (n_a, n_b) with N and the
/// gate voltages as parameters:
///
/// ```text
/// U = (1/16)(1/C_a + 1/C_b)(n_a² + n_b²) + (1/8)(1/C_a − 1/C_b) n_a n_b
///   + (1/4)(L⁺ + L⁻) n_a + (1/4)(L⁺ − L⁻) n_b
///   + N²/(4C_A) + C_A/(4D⁺)·[(C3 + C6 + C_A)N/C_A + C7V⁺]²
///   + C_C/(4D⁻)·(C7V⁻)² − (C7/2)(V_a² + V_b²)
///
/// L⁺ = [(C7 − C5)N − C5C7V⁺]/D⁺,  L⁻ = (C6 − C3 − C_C)·C7V⁻/D⁻
/// ```
///
/// with D⁺ = C_A C_B − (C3 + C6)² and D⁻ = C_C C_D − (C6 − C3)². The final
/// term is the work done by the gate sources and makes this equal to the
/// constrained minimum of the raw energy, not only up to a constant.
pub fn closed_form_energy<T: Real>(
    caps: &CapacitanceSet<T>,
    occupation: &Occupation<T>,
    bias: &GateBias<T>,
) -> Result<T> {
    bias.validate()?;
    let m = ModeCapacitances::new(caps)?;
    let (c3, c5, c6, c7) = (caps.c(3), caps.c(5), caps.c(6), caps.c(7));
    let Occupation { n_a, n_b, total } = *occupation;
    let (vp, vm) = (bias.v_plus(), bias.v_minus());
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);

    let lin_common = ((c7 - c5) * total - c7 * c5 * vp) / m.det_common;
    let lin_difference = (c6 - c3 - m.c_c_mode) * c7 * vm / m.det_difference;

    let quadratic = T::lit(1.0 / 16.0) * (m.inv_c_common + m.inv_c_difference) * (n_a * n_a + n_b * n_b)
        + m.cross_coefficient() * n_a * n_b;
    let linear = quarter * (lin_common + lin_difference) * n_a + quarter * (lin_common - lin_difference) * n_b;

    let bracket = (c3 + c6 + m.c_a_mode) * total / m.c_a_mode + c7 * vp;
    let constant = total * total / (T::lit(4.0) * m.c_a_mode)
        + m.c_a_mode / (T::lit(4.0) * m.det_common) * bracket * bracket
        + m.c_c_mode / (T::lit(4.0) * m.det_difference) * (c7 * vm) * (c7 * vm)
        - half * c7 * (bias.va * bias.va + bias.vb * bias.vb);

    Ok(quadratic + linear + constant)
}
