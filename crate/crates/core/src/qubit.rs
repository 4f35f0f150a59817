//! Two-qubit Hamiltonian
//!
//! ```text
//! H = ε_a σ_z⊗I + ε_b I⊗σ_z + Ω_a σ_x⊗I + Ω_b I⊗σ_x − (η/4) σ_z⊗σ_z
//! ```
//!
//! Basis convention, used everywhere in the crate: qubit a is the first
//! tensor factor and the basis is ordered |n_a n_b⟩ = |00⟩, |01⟩, |10⟩, |11⟩
//! (index 2·n_a + n_b). The charge state n = 0 is the σ_z = +1 eigenstate
//! and n = 1 the σ_z = −1 eigenstate.

use nalgebra::{Matrix4, Vector4};

use crate::capnet::{charging_energy, coupling, voltage_for_bias_energy, CapacitanceSet, QubitParams};
use crate::error::{domain, Result};
use crate::scalar::{cplx, re, Real, C};

/// Charge state of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChargeState {
    Zero,
    One,
}

impl ChargeState {
    pub fn from_bit(n: u8) -> Result<Self> {
        match n {
            0 => Ok(Self::Zero),
            1 => Ok(Self::One),
            _ => domain(format!("charge state must be 0 or 1, got {n}")),
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Self::Zero => 0,
            Self::One => 1,
        }
    }

    /// σ_z eigenvalue of this state.
    pub fn sigma_z<T: Real>(self) -> T {
        match self {
            Self::Zero => T::one(),
            Self::One => -T::one(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Zero => Self::One,
            Self::One => Self::Zero,
        }
    }
}

/// Index of |n_a n_b⟩ in the register basis.
pub fn basis_index(a: ChargeState, b: ChargeState) -> usize {
    2 * a.bit() + b.bit()
}

/// Labels of the basis states in order.
pub const BASIS_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// σ_z of qubit a and qubit b on each basis state.
pub(crate) fn sigma_z_diagonals<T: Real>() -> ([T; 4], [T; 4]) {
    let (p, m) = (T::one(), -T::one());
    ([p, p, m, m], [p, m, p, m])
}

/// Hermitian 4×4 Hamiltonian of the register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitHamiltonian<T: Real = f64> {
    h: Matrix4<C<T>>,
}

impl<T: Real> TwoQubitHamiltonian<T> {
    pub fn build(p: &QubitParams<T>) -> Self {
        let (za, zb) = sigma_z_diagonals::<T>();
        let quarter_eta = p.eta * T::lit(0.25);
        let mut h = Matrix4::<C<T>>::zeros();
        for i in 0..4 {
            h[(i, i)] = re(p.eps_a * za[i] + p.eps_b * zb[i] - quarter_eta * za[i] * zb[i]);
        }
        // σ_x on qubit a flips bit 1 of the index, on qubit b bit 0.
        for i in 0..4 {
            h[(i, i ^ 2)] += re(p.omega_a);
            h[(i, i ^ 1)] += re(p.omega_b);
        }
        Self { h }
    }

    /// Wraps an arbitrary matrix, checking Hermiticity to 1e−12.
    pub fn from_matrix(h: Matrix4<C<T>>) -> Result<Self> {
        let scale = T::one().max(h.norm());
        let dev = (h - h.adjoint()).norm();
        if dev > T::tol(1e-12) * scale {
            return domain(format!("matrix is not Hermitian (‖H − H†‖ = {dev})"));
        }
        Ok(Self { h })
    }

    pub fn matrix(&self) -> &Matrix4<C<T>> {
        &self.h
    }

    /// Expectation value ⟨ψ|H|ψ⟩.
    pub fn expectation(&self, psi: &Vector4<C<T>>) -> T {
        psi.dotc(&(self.h * psi)).re
    }

    pub fn eigensystem(&self) -> Eigensystem<T> {
        let eig = self.h.symmetric_eigen();
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .expect("finite eigenvalues")
        });
        let values = order.map(|i| eig.eigenvalues[i]);
        let mut vectors = Matrix4::<C<T>>::zeros();
        for (k, &i) in order.iter().enumerate() {
            vectors.set_column(k, &eig.eigenvectors.column(i));
        }
        Eigensystem { values, vectors }
    }
}

/// Eigenvalues in ascending order with their eigenvectors as columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<T: Real = f64> {
    pub values: [T; 4],
    pub vectors: Matrix4<C<T>>,
}

impl<T: Real> Eigensystem<T> {
    /// exp(−iHt) = V·diag(e^{−iλt})·V†.
    pub fn propagator(&self, t: T) -> Matrix4<C<T>> {
        let mut scaled = self.vectors;
        for (k, &lambda) in self.values.iter().enumerate() {
            let phase = -lambda * t;
            let f = cplx(phase.cos(), phase.sin());
            for r in 0..4 {
                scaled[(r, k)] *= f;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Gate voltage V_a at which qubit a is at resonance given qubit b in
/// `control`: ε_a − (η/4)·σ_z(control) = 0.
pub fn level_crossing_voltage<T: Real>(caps: &CapacitanceSet<T>, total: T, control: ChargeState) -> Result<T> {
    caps.require_symmetric()?;
    let shift = coupling(caps) * T::lit(0.25) * control.sigma_z::<T>();
    Ok(voltage_for_bias_energy(caps, total, shift))
}

/// V_a*(n_b = 1) − V_a*(n_b = 0) = η / (2·E_c·2C5C7/(C5 + C7)).
pub fn crossing_separation<T: Real>(caps: &CapacitanceSet<T>) -> Result<T> {
    caps.require_symmetric()?;
    let (c5, c7) = (caps.c(5), caps.c(7));
    let lever = T::lit(2.0) * c5 * c7 / (c5 + c7);
    Ok(coupling(caps) / (T::lit(2.0) * charging_energy(caps) * lever))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capnet::{bias_energy, qubit_parameters, GateBias};
    use proptest::prelude::*;

    fn params(eps_a: f64, eps_b: f64, om_a: f64, om_b: f64, eta: f64) -> QubitParams {
        QubitParams::new(1.0, eta, eps_a, eps_b, om_a, om_b)
    }

    fn residual_ok(h: &TwoQubitHamiltonian, es: &Eigensystem) {
        let scale = h.matrix().norm().max(1e-300);
        for k in 0..4 {
            let v = es.vectors.column(k);
            let r = (h.matrix() * v - v * re(es.values[k])).norm();
            assert!(r < 1e-10 * scale.max(1.0), "residual {r}");
        }
        let gram = es.vectors.adjoint() * es.vectors;
        assert!((gram - Matrix4::identity()).norm() < 1e-10);
    }

    #[test]
    fn zero_parameters_zero_matrix() {
        let h = TwoQubitHamiltonian::build(&params(0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(*h.matrix(), Matrix4::zeros());
        assert_eq!(h.eigensystem().values, [0.0; 4]);
    }

    #[test]
    fn diagonal_coupling_pattern() {
        let eta = 0.4;
        let h = TwoQubitHamiltonian::build(&params(0.3, -0.2, 0.0, 0.0, eta));
        let expect = [0.3 - 0.2 - 0.1, 0.3 + 0.2 + 0.1, -0.3 - 0.2 + 0.1, -0.3 + 0.2 - 0.1];
        for i in 0..4 {
            assert!((h.matrix()[(i, i)].re - expect[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn single_qubit_block() {
        let h = TwoQubitHamiltonian::build(&params(0.3, 0.0, 0.4, 0.0, 0.0));
        let v = h.eigensystem().values;
        for (got, want) in v.iter().zip([-0.5, -0.5, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn decoupled_spectrum_is_tensor_sum() {
        let (ea, eb, oa, ob) = (0.31, -0.7, 0.12, 0.45);
        let h = TwoQubitHamiltonian::build(&params(ea, eb, oa, ob, 0.0));
        let es = h.eigensystem();
        residual_ok(&h, &es);
        let (ra, rb) = (f64::hypot(ea, oa), f64::hypot(eb, ob));
        let mut expect = [-ra - rb, -ra + rb, ra - rb, ra + rb];
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in es.values.iter().zip(expect) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_is_unitary() {
        let h = TwoQubitHamiltonian::build(&params(0.31, -0.7, 0.12, 0.45, 0.2));
        let u = h.eigensystem().propagator(17.3);
        assert!((u.adjoint() * u - Matrix4::identity()).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = *TwoQubitHamiltonian::build(&params(0.3, 0.1, 0.2, 0.1, 0.1)).matrix();
        m[(0, 1)] = cplx(0.0, 1.0);
        assert!(TwoQubitHamiltonian::from_matrix(m).is_err());
    }

    #[test]
    fn crossing_voltages() {
        let caps: CapacitanceSet = CapacitanceSet::symmetric(0.0, 0.8, 1.2, 0.8).unwrap();
        let v0 = level_crossing_voltage(&caps, 0.0, ChargeState::Zero).unwrap();
        let v1 = level_crossing_voltage(&caps, 0.0, ChargeState::One).unwrap();
        assert_eq!(v0, v1);
        assert!((v0 - 1.0 / (2.0 * 0.8)).abs() < 1e-14);

        let caps: CapacitanceSet = CapacitanceSet::symmetric(0.02, 1.0, 1.3, 0.7).unwrap();
        for control in [ChargeState::Zero, ChargeState::One] {
            let v = level_crossing_voltage(&caps, 3.0, control).unwrap();
            let p = qubit_parameters(&caps, 3.0, &GateBias::new(v, 0.0), 0.0, 0.0).unwrap();
            let eff = p.eps_a - p.eta / 4.0 * control.sigma_z::<f64>();
            assert!(eff.abs() < 1e-10 * p.e_c);
        }
        let v0 = level_crossing_voltage(&caps, 3.0, ChargeState::Zero).unwrap();
        let v1 = level_crossing_voltage(&caps, 3.0, ChargeState::One).unwrap();
        assert!((v1 - v0 - crossing_separation(&caps).unwrap()).abs() < 1e-13);
        // Same separation expressed through the bias energy: Δε_a = η/2.
        let de = bias_energy(&caps, 3.0, v0) - bias_energy(&caps, 3.0, v1);
        assert!((de - coupling(&caps) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn separation_grows_with_eta() {
        let base: CapacitanceSet = CapacitanceSet::symmetric(0.0, 1.0, 1.3, 0.7).unwrap();
        let mut prev = crossing_separation(&base).unwrap();
        assert_eq!(prev, 0.0);
        for c3 in [1e-4, 1e-3, 1e-2, 5e-2] {
            let s = crossing_separation(&base.with_c3(c3).unwrap()).unwrap();
            assert!(s > prev);
            prev = s;
        }
    }

    proptest! {
        #[test]
        fn swap_covariance(ea in -1.0..1.0f64, eb in -1.0..1.0f64, oa in 0.0..1.0f64, ob in 0.0..1.0f64, eta in 0.0..1.0f64) {
            let h = TwoQubitHamiltonian::build(&params(ea, eb, oa, ob, eta));
            let hs = TwoQubitHamiltonian::build(&params(eb, ea, ob, oa, eta));
            let swap = [0usize, 2, 1, 3];
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((h.matrix()[(i, j)] - hs.matrix()[(swap[i], swap[j])]).norm() < 1e-15);
                }
            }
        }

        #[test]
        fn eigensystem_residual_and_trace(ea in -1.0..1.0f64, eb in -1.0..1.0f64, oa in 0.0..1.0f64, ob in 0.0..1.0f64, eta in 0.0..1.0f64) {
            let h = TwoQubitHamiltonian::build(&params(ea, eb, oa, ob, eta));
            prop_assert!((*h.matrix() - h.matrix().adjoint()).norm() < 1e-12);
            let es = h.eigensystem();
            residual_ok(&h, &es);
            prop_assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
            let tr: f64 = (0..4).map(|i| h.matrix()[(i, i)].re).sum();
            prop_assert!((tr - es.values.iter().sum::<f64>()).abs() < 1e-10);
        }

        #[test]
        fn eigenvalues_are_lipschitz(ea in -1.0..1.0f64, oa in 0.0..1.0f64, eta in 0.0..1.0f64, d in -1e-3..1e-3f64) {
            let h1 = TwoQubitHamiltonian::build(&params(ea, 0.2, oa, 0.3, eta));
            let h2 = TwoQubitHamiltonian::build(&params(ea + d, 0.2, oa, 0.3, eta));
            let dn = (*h1.matrix() - *h2.matrix()).norm();
            let (v1, v2) = (h1.eigensystem().values, h2.eigensystem().values);
            for k in 0..4 {
                prop_assert!((v1[k] - v2[k]).abs() <= dn + 1e-12);
            }
        }
    }
}
