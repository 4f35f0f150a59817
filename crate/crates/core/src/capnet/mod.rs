//! Electrostatics of the ten-capacitor two-qubit network.
//!
//! Qubit a is the dot pair A–B, qubit b the pair C–D. Each pair has one dot
//! tied to ground (C5 on A, C8 on C), an inter-dot junction (C6 for A–B, C9
//! for C–D) and one dot tied to its gate electrode (C7 on B to V_a, C10 on D
//! to V_b). The pairs couple through C1 (A–C), C2 (B–D), C3 (A–D) and
//! C4 (B–C).
//!
//! Sign convention for the junction charges q1…q10: each q is the charge
//! that has left the first-named node. The dot charges then satisfy
//!
//! ```text
//! −N_A = q1 + q3 + q5 + q6
//! −N_B = q2 + q4 − q6 + q7
//! −N_C = −q1 − q4 + q8 + q9
//! −N_D = −q2 − q3 − q9 + q10
//! ```

mod closed_form;
mod energy;
mod expansion;
mod geometry;

pub use closed_form::{closed_form_energy, ModeCapacitances, RHO};
pub use energy::{minimize_energy, raw_energy, EnergyMinimum, CONSTRAINT_ROWS};
pub use expansion::{
    bias_energy, charging_energy, coupling, expanded_energy, qubit_parameters, voltage_for_bias_energy, QubitParams,
};
pub use geometry::{estimate_capacitance, DotGeometry};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Relative tolerance used to flag a set as satisfying the symmetric
/// constraints.
pub const SYMMETRY_RTOL: f64 = 1e-12;

/// Default bound on max(C1..C4)/min(C5..C7) for the weak inter-qubit
/// coupling regime.
pub const DEFAULT_WEAK_COUPLING_THRESHOLD: f64 = 0.1;

/// The ten capacitances C1…C10 of the network.
///
/// C5…C10 must be strictly positive. The inter-qubit capacitors C1…C4 may
/// be zero, which decouples the qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceSet<T: Real = f64> {
    values: [T; 10],
    symmetric: bool,
}

impl<T: Real> CapacitanceSet<T> {
    /// Builds a set from C1…C10 in order.
    pub fn new(values: [T; 10]) -> Result<Self> {
        for (i, &c) in values.iter().enumerate() {
            if !c.is_finite_real() {
                return domain(format!("C{} is not finite", i + 1));
            }
            if i < 4 && c < T::zero() {
                return domain(format!("C{} must be non-negative, got {c}", i + 1));
            }
            if i >= 4 && c <= T::zero() {
                return domain(format!("C{} must be positive, got {c}", i + 1));
            }
        }
        let symmetric = Self::check_symmetric(&values);
        Ok(Self { values, symmetric })
    }

    /// Builds the symmetric set C1 = C2 = √2·C3 = √2·C4, C8 = C5, C9 = C6,
    /// C10 = C7.
    pub fn symmetric(c3: T, c5: T, c6: T, c7: T) -> Result<Self> {
        let c12 = T::lit(std::f64::consts::SQRT_2) * c3;
        let set = Self::new([c12, c12, c3, c3, c5, c6, c7, c5, c6, c7])?;
        debug_assert!(set.symmetric);
        Ok(set)
    }

    fn check_symmetric(v: &[T; 10]) -> bool {
        let rtol = T::tol(SYMMETRY_RTOL);
        let close = |a: T, b: T| {
            let scale = a.abs().max(b.abs());
            (a - b).abs() <= rtol * scale
        };
        let sqrt2 = T::lit(std::f64::consts::SQRT_2);
        close(v[0], v[1])
            && close(v[0], sqrt2 * v[2])
            && close(v[0], sqrt2 * v[3])
            && close(v[7], v[4])
            && close(v[8], v[5])
            && close(v[9], v[6])
    }

    /// Capacitance C_i, 1-based as in the network labels.
    ///
    /// # Panics
    /// Panics when `i` is outside 1..=10.
    #[inline]
    pub fn c(&self, i: usize) -> T {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[T; 10] {
        &self.values
    }

    /// Whether the set satisfies the symmetric constraints to relative 1e−12.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub(crate) fn require_symmetric(&self) -> Result<()> {
        if self.symmetric {
            Ok(())
        } else {
            Err(Error::Constraint(
                "capacitance set must satisfy C1=C2=√2C3=√2C4, C8=C5, C9=C6, C10=C7".into(),
            ))
        }
    }

    /// Same set with C3 (and the tied C1, C2, C4) replaced.
    pub fn with_c3(&self, c3: T) -> Result<Self> {
        self.require_symmetric()?;
        Self::symmetric(c3, self.c(5), self.c(6), self.c(7))
    }
}

/// Result of [`check_weak_coupling`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCoupling<T: Real = f64> {
    /// max(C1..C4) / min(C5..C7).
    pub ratio: T,
    pub threshold: T,
    pub satisfied: bool,
}

/// Checks the weak inter-qubit coupling hierarchy C1..C4 ≪ C5, C6, C7.
pub fn check_weak_coupling<T: Real>(caps: &CapacitanceSet<T>, threshold: T) -> WeakCoupling<T> {
    let v = caps.values();
    let num = v[..4].iter().copied().fold(T::zero(), T::max);
    let den = v[4..7].iter().copied().fold(v[4], T::min);
    let ratio = num / den;
    WeakCoupling {
        ratio,
        threshold,
        satisfied: ratio < threshold,
    }
}

/// Integer dot occupations N_A…N_D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChargeConfig {
    pub n_a_dot: i64,
    pub n_b_dot: i64,
    pub n_c_dot: i64,
    pub n_d_dot: i64,
}

impl ChargeConfig {
    pub fn new(n_a_dot: i64, n_b_dot: i64, n_c_dot: i64, n_d_dot: i64) -> Result<Self> {
        if n_a_dot + n_b_dot != n_c_dot + n_d_dot {
            return domain(format!(
                "pair totals differ: N_A+N_B = {} but N_C+N_D = {}",
                n_a_dot + n_b_dot,
                n_c_dot + n_d_dot
            ));
        }
        Ok(Self {
            n_a_dot,
            n_b_dot,
            n_c_dot,
            n_d_dot,
        })
    }

    /// From the reduced coordinates; requires n_a ≡ n_b ≡ N (mod 2).
    pub fn from_reduced(n_a: i64, n_b: i64, total: i64) -> Result<Self> {
        if (total + n_a) % 2 != 0 || (total + n_b) % 2 != 0 {
            return domain(format!(
                "(n_a, n_b, N) = ({n_a}, {n_b}, {total}) gives half-integer dot occupations"
            ));
        }
        Self::new(
            (total + n_a) / 2,
            (total - n_a) / 2,
            (total + n_b) / 2,
            (total - n_b) / 2,
        )
    }

    pub fn n_a(&self) -> i64 {
        self.n_a_dot - self.n_b_dot
    }

    pub fn n_b(&self) -> i64 {
        self.n_c_dot - self.n_d_dot
    }

    pub fn total(&self) -> i64 {
        self.n_a_dot + self.n_b_dot
    }

    pub fn occupation<T: Real>(&self) -> Occupation<T> {
        Occupation::from_ints(self.n_a(), self.n_b(), self.total())
    }
}

/// Reduced charge coordinates (n_a, n_b, N), allowed to take real values.
///
/// The energies are quadratic polynomials in these, so evaluating them off
/// the integer lattice is meaningful (finite differences, Hessians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupation<T: Real = f64> {
    pub n_a: T,
    pub n_b: T,
    pub total: T,
}

impl<T: Real> Occupation<T> {
    pub fn new(n_a: T, n_b: T, total: T) -> Self {
        Self { n_a, n_b, total }
    }

    pub fn from_ints(n_a: i64, n_b: i64, total: i64) -> Self {
        Self::new(T::from_int(n_a), T::from_int(n_b), T::from_int(total))
    }

    /// Dot charges (N_A, N_B, N_C, N_D).
    pub fn dot_charges(&self) -> [T; 4] {
        let half = T::lit(0.5);
        [
            half * (self.total + self.n_a),
            half * (self.total - self.n_a),
            half * (self.total + self.n_b),
            half * (self.total - self.n_b),
        ]
    }

    /// Exchanges the roles of the two qubits.
    pub fn swapped(&self) -> Self {
        Self::new(self.n_b, self.n_a, self.total)
    }
}

impl<T: Real> From<ChargeConfig> for Occupation<T> {
    fn from(c: ChargeConfig) -> Self {
        c.occupation()
    }
}

/// Gate voltages V_a (on dot B) and V_b (on dot D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateBias<T: Real = f64> {
    pub va: T,
    pub vb: T,
}

impl<T: Real> GateBias<T> {
    pub fn new(va: T, vb: T) -> Self {
        Self { va, vb }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if self.va.is_finite_real() && self.vb.is_finite_real() {
            Ok(())
        } else {
            domain("gate voltages must be finite")
        }
    }

    /// V⁺ = V_a + V_b.
    pub fn v_plus(&self) -> T {
        self.va + self.vb
    }

    /// V⁻ = V_a − V_b.
    pub fn v_minus(&self) -> T {
        self.va - self.vb
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.vb, self.va)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_constructor_sets_flag() {
        let caps: CapacitanceSet = CapacitanceSet::symmetric(0.01, 1.0, 1.2, 0.9).unwrap();
        assert!(caps.is_symmetric());
        assert_eq!(caps.c(8), caps.c(5));
        assert!((caps.c(1) - 2f64.sqrt() * 0.01).abs() < 1e-18);

        let mut v = *caps.values();
        v[9] *= 1.0 + 1e-9;
        assert!(!CapacitanceSet::new(v).unwrap().is_symmetric());
        v[9] = caps.c(10) * (1.0 + 1e-14);
        assert!(CapacitanceSet::new(v).unwrap().is_symmetric());
    }

    #[test]
    fn rejects_bad_capacitances() {
        assert!(CapacitanceSet::symmetric(0.01, 0.0, 1.0, 1.0).is_err());
        assert!(CapacitanceSet::symmetric(-0.01, 1.0, 1.0, 1.0).is_err());
        assert!(CapacitanceSet::symmetric(f64::NAN, 1.0, 1.0, 1.0).is_err());
        assert!(CapacitanceSet::symmetric(0.0, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn weak_coupling_ratio() {
        let caps: CapacitanceSet = CapacitanceSet::symmetric(0.01, 1.0, 1.0, 1.0).unwrap();
        let w = check_weak_coupling(&caps, 0.1);
        assert!((w.ratio - 0.01 * 2f64.sqrt()).abs() < 1e-15);
        assert!(w.satisfied);

        let caps: CapacitanceSet = CapacitanceSet::symmetric(1.0, 1.0, 1.0, 1.0).unwrap();
        let w = check_weak_coupling(&caps, 0.1);
        assert!((w.ratio - 2f64.sqrt()).abs() < 1e-15);
        assert!(!w.satisfied);

        let caps: CapacitanceSet = CapacitanceSet::symmetric(0.0, 1.0, 2.0, 3.0).unwrap();
        let w = check_weak_coupling(&caps, 0.1);
        assert_eq!(w.ratio, 0.0);
        assert!(w.satisfied);
    }

    #[test]
    fn charge_config_reduced_coordinates() {
        let c = ChargeConfig::new(2, 1, 3, 0).unwrap();
        assert_eq!((c.n_a(), c.n_b(), c.total()), (1, 3, 3));
        assert!(ChargeConfig::new(1, 0, 1, 1).is_err());
        assert_eq!(ChargeConfig::from_reduced(1, 3, 3).unwrap(), c);
        assert!(ChargeConfig::from_reduced(1, 0, 1).is_err());
        let occ: Occupation = c.into();
        assert_eq!(occ.dot_charges(), [2.0, 1.0, 3.0, 0.0]);
    }
}
