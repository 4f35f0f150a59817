//! Small-C3 expansion of the network energy and the two-level parameters
//! derived from it.

use super::{check_weak_coupling, CapacitanceSet, GateBias, Occupation, DEFAULT_WEAK_COUPLING_THRESHOLD};
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Two-level parameters of the coupled qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams<T: Real = f64> {
    /// Charging energy E_c.
    pub e_c: T,
    /// Inter-qubit coupling η.
    pub eta: T,
    pub eps_a: T,
    pub eps_b: T,
    /// Tunneling amplitude of qubit a (σ_x coefficient).
    pub omega_a: T,
    pub omega_b: T,
}

impl<T: Real> QubitParams<T> {
    /// Parameters given directly, bypassing the capacitance network.
    pub fn new(e_c: T, eta: T, eps_a: T, eps_b: T, omega_a: T, omega_b: T) -> Self {
        Self {
            e_c,
            eta,
            eps_a,
            eps_b,
            omega_a,
            omega_b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.e_c, self.eta, self.eps_a, self.eps_b, self.omega_a, self.omega_b];
        if all.iter().any(|x| !x.is_finite_real()) {
            return domain("qubit parameters must be finite");
        }
        if self.omega_a < T::zero() || self.omega_b < T::zero() {
            return domain("tunneling amplitudes must be non-negative");
        }
        Ok(())
    }
}

/// E_c = (C5 + C7) / (8(C5C6 + C6C7 + C7C5)).
pub fn charging_energy<T: Real>(caps: &CapacitanceSet<T>) -> T {
    let (c5, c6, c7) = (caps.c(5), caps.c(6), caps.c(7));
    (c5 + c7) / (T::lit(8.0) * (c5 * c6 + c6 * c7 + c7 * c5))
}

/// η = √2(C5² + C7² − √2C5C7) / (4(C5C6 + C6C7 + C7C5)²) · C3.
pub fn coupling<T: Real>(caps: &CapacitanceSet<T>) -> T {
    let (c3, c5, c6, c7) = (caps.c(3), caps.c(5), caps.c(6), caps.c(7));
    let sqrt2 = T::lit(std::f64::consts::SQRT_2);
    let s = c5 * c6 + c6 * c7 + c7 * c5;
    sqrt2 * (c5 * c5 + c7 * c7 - sqrt2 * c5 * c7) / (T::lit(4.0) * s * s) * c3
}

/// Offset (C7 − C5)N/(C5 + C7) and lever arm 2C5C7/(C5 + C7) of the
/// single-qubit bias.
fn bias_terms<T: Real>(caps: &CapacitanceSet<T>, total: T) -> (T, T) {
    let (c5, c7) = (caps.c(5), caps.c(7));
    let offset = (c7 - c5) * total / (c5 + c7);
    let lever = T::lit(2.0) * c5 * c7 / (c5 + c7);
    (offset, lever)
}

/// ε(V) = E_c(1/2 + [(C7 − C5)N − 2C5C7V]/(C5 + C7)) for either qubit.
pub fn bias_energy<T: Real>(caps: &CapacitanceSet<T>, total: T, voltage: T) -> T {
    let (offset, lever) = bias_terms(caps, total);
    charging_energy(caps) * (T::lit(0.5) + offset - lever * voltage)
}

/// Inverse of [`bias_energy`]: the gate voltage at which ε = `eps`.
pub fn voltage_for_bias_energy<T: Real>(caps: &CapacitanceSet<T>, total: T, eps: T) -> T {
    let (offset, lever) = bias_terms(caps, total);
    (T::lit(0.5) + offset - eps / charging_energy(caps)) / lever
}

/// Extracts E_c, η, ε_a, ε_b; the tunneling amplitudes are passed through.
pub fn qubit_parameters<T: Real>(
    caps: &CapacitanceSet<T>,
    total: T,
    bias: &GateBias<T>,
    omega_a: T,
    omega_b: T,
) -> Result<QubitParams<T>> {
    caps.require_symmetric()?;
    bias.validate()?;
    let p = QubitParams {
        e_c: charging_energy(caps),
        eta: coupling(caps),
        eps_a: bias_energy(caps, total, bias.va),
        eps_b: bias_energy(caps, total, bias.vb),
        omega_a,
        omega_b,
    };
    p.validate()?;
    Ok(p)
}

/// Completed-square energy to first order in C3:
///
/// ```text
/// U ≈ E_c[n_a + (η/2E_c)n_b + (C7−C5)N/(C5+C7) − 2C5C7V_a/(C5+C7)]²
///   + E_c[n_b + (C7−C5)N/(C5+C7) − 2C5C7V_b/(C5+C7)]²
/// ```
///
/// The n-independent constants of the full energy are absent, so compare
/// it to other energies only through differences.
pub fn expanded_energy<T: Real>(caps: &CapacitanceSet<T>, occupation: &Occupation<T>, bias: &GateBias<T>) -> Result<T> {
    caps.require_symmetric()?;
    bias.validate()?;
    let weak = check_weak_coupling(caps, T::lit(DEFAULT_WEAK_COUPLING_THRESHOLD));
    if !weak.satisfied {
        log::warn!(
            "weak-coupling ratio {} exceeds {}; small-C3 expansion is inaccurate",
            weak.ratio,
            weak.threshold
        );
    }
    let e_c = charging_energy(caps);
    let eta = coupling(caps);
    let (offset, lever) = bias_terms(caps, occupation.total);
    let first = occupation.n_a + eta / (T::lit(2.0) * e_c) * occupation.n_b + offset - lever * bias.va;
    let second = occupation.n_b + offset - lever * bias.vb;
    Ok(e_c * (first * first + second * second))
}
