//! Long-channel MOSFET readout.
//!
//! The channel under N qubits is a series of N segments of equal length.
//! Segment i between nodes V_{i−1} and V_i carries
//!
//! ```text
//! I = β₀ (V_G′ (V_i − V_{i−1}) − (α/2)(V_i² − V_{i−1}²))
//! ```
//!
//! with V_G′ the local gate overdrive V_G − V_th − ΔV_th^(i). The qubit
//! charge above a segment shifts its threshold by ΔV_th^(i). Qubit a sits
//! over the source-side segment 1 and qubit b over segment 2.

mod series;

pub use series::{solve_series, ChannelSolution, NewtonOptions};

use crate::error::{domain, Result};
use crate::qubit::BASIS_LABELS;
use crate::scalar::Real;

/// Whether the quadratic (body-charge) term of the segment current is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SegmentModel {
    #[default]
    Quadratic,
    /// Pure linear region: the α term is dropped.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T: Real = f64> {
    /// Channel width Z.
    pub width: T,
    /// Mobility μ₀.
    pub mobility: T,
    /// Oxide capacitance per area C₀.
    pub c_ox: T,
    /// Length of one segment L_i.
    pub segment_length: T,
    /// Fermi-level to intrinsic-level potential φ_B.
    pub phi_b: T,
    /// Depletion charge per area Q_B.
    pub q_b: T,
    /// Flat-band voltage.
    pub v_fb: T,
    pub model: SegmentModel,
}

impl<T: Real> ChannelParams<T> {
    pub fn new(width: T, mobility: T, c_ox: T, segment_length: T, phi_b: T, q_b: T, v_fb: T) -> Result<Self> {
        let p = Self {
            width,
            mobility,
            c_ox,
            segment_length,
            phi_b,
            q_b,
            v_fb,
            model: SegmentModel::Quadratic,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with the given β₀ and α and zero threshold voltage, for
    /// working directly in overdrive units.
    pub fn normalized(beta0: T, alpha: T) -> Result<Self> {
        let q_b = T::lit(4.0) * (alpha - T::one());
        let two = T::lit(2.0);
        Self::new(beta0, T::one(), T::one(), T::one(), T::one(), q_b, -(two + q_b))
    }

    pub fn with_model(mut self, model: SegmentModel) -> Self {
        self.model = model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("width", self.width),
            ("mobility", self.mobility),
            ("c_ox", self.c_ox),
            ("segment_length", self.segment_length),
            ("phi_b", self.phi_b),
        ];
        for (name, v) in positive {
            if !(v > T::zero() && v.is_finite_real()) {
                return domain(format!("channel {name} must be positive, got {v}"));
            }
        }
        if !(self.q_b >= T::zero() && self.q_b.is_finite_real()) {
            return domain(format!("depletion charge must be non-negative, got {}", self.q_b));
        }
        if !self.v_fb.is_finite_real() {
            return domain("flat-band voltage must be finite");
        }
        Ok(())
    }

    /// β₀ = Z μ₀ C₀ / L_i.
    pub fn beta0(&self) -> T {
        self.width * self.mobility * self.c_ox / self.segment_length
    }

    /// α = 1 + Q_B / (4 φ_B C₀).
    pub fn alpha(&self) -> T {
        T::one() + self.q_b / (T::lit(4.0) * self.phi_b * self.c_ox)
    }

    /// α as it enters the current: zero in the linear model.
    pub fn alpha_term(&self) -> T {
        match self.model {
            SegmentModel::Quadratic => self.alpha(),
            SegmentModel::Linear => T::zero(),
        }
    }

    /// V_th = V_FB + 2φ_B + Q_B/C₀.
    pub fn threshold(&self) -> T {
        self.v_fb + T::lit(2.0) * self.phi_b + self.q_b / self.c_ox
    }
}

/// Current through one segment with overdrive `v_g_eff` between `v_lo` and
/// `v_hi`.
pub fn segment_current<T: Real>(p: &ChannelParams<T>, v_g_eff: T, v_lo: T, v_hi: T) -> T {
    let a = p.alpha_term();
    if a > T::zero() && a * v_hi.max(v_lo) > v_g_eff {
        log::warn!(
            "segment beyond pinch-off: α·V = {} > V_G′ = {v_g_eff}",
            a * v_hi.max(v_lo)
        );
    }
    p.beta0() * (v_g_eff * (v_hi - v_lo) - T::lit(0.5) * a * (v_hi * v_hi - v_lo * v_lo))
}

/// Closed-form two-segment current
/// I = β₀/(V_G1 + V_G2)·(V_G1 V_G2 V_D − (α V_G1/2) V_D²),
/// valid for V_Gi ≫ V_D.
pub fn two_qubit_current<T: Real>(p: &ChannelParams<T>, v_g1: T, v_g2: T, v_d: T) -> Result<T> {
    let sum = v_g1 + v_g2;
    if sum == T::zero() {
        return domain("V_G1 + V_G2 must be non-zero");
    }
    if v_d.abs() * T::lit(10.0) > v_g1.min(v_g2) {
        log::warn!("two-segment closed form used outside V_G ≫ V_D (V_D = {v_d})");
    }
    let a = p.alpha_term();
    Ok(p.beta0() / sum * (v_g1 * v_g2 * v_d - T::lit(0.5) * a * v_g1 * v_d * v_d))
}

/// Current contrast between a threshold shift on qubit 1 and the same
/// shift on qubit 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentContrast<T: Real = f64> {
    /// β₀α ΔV_th V_D² / (2(2V_g − ΔV_th)).
    pub formula: T,
    /// I(shift on segment 1) − I(shift on segment 2) from the series solver.
    pub series: T,
}

pub fn delta_current_two_qubit<T: Real>(p: &ChannelParams<T>, v_g: T, dv_th: T, v_d: T) -> Result<CurrentContrast<T>> {
    if !(dv_th >= T::zero() && dv_th < v_g) {
        return domain(format!("need 0 ≤ ΔV_th < V_g, got ΔV_th = {dv_th}, V_g = {v_g}"));
    }
    let formula = p.beta0() * p.alpha_term() / (T::lit(2.0) * (T::lit(2.0) * v_g - dv_th)) * dv_th * v_d * v_d;
    let opts = NewtonOptions::default();
    let first = solve_series(p, &[v_g - dv_th, v_g], v_d, &opts)?;
    let second = solve_series(p, &[v_g, v_g - dv_th], v_d, &opts)?;
    Ok(CurrentContrast {
        formula,
        series: first.current - second.current,
    })
}

/// Per-segment threshold shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitThresholdMap<T: Real = f64> {
    pub shifts: Vec<T>,
}

impl<T: Real> QubitThresholdMap<T> {
    pub fn new(shifts: Vec<T>) -> Self {
        Self { shifts }
    }

    /// Two-qubit map for basis state |n_a n_b⟩: qubit j contributes
    /// `shift_when_charged[j]` when its n = 1.
    pub fn for_basis_state(index: usize, shift_when_charged: [T; 2]) -> Self {
        let n_a = index >> 1 & 1;
        let n_b = index & 1;
        let pick = |n: usize, s: T| if n == 1 { s } else { T::zero() };
        Self::new(vec![pick(n_a, shift_when_charged[0]), pick(n_b, shift_when_charged[1])])
    }

    /// Local overdrives V_G − V_th − ΔV_th^(i).
    pub fn overdrives(&self, p: &ChannelParams<T>, v_gate: T) -> Vec<T> {
        let base = v_gate - p.threshold();
        self.shifts.iter().map(|&s| base - s).collect()
    }
}

/// Threshold shift from a dot charge coupled to the channel with lever arm
/// κ through a segment gate capacitance C_g (aF): ΔV_th = κ·q/C_g in e/aF.
///
/// A first-order capacitive-divider estimate; the readout model itself
/// takes ΔV_th as an input.
pub fn lever_arm_threshold_shift<T: Real>(charge: T, lever_arm: T, gate_capacitance: T) -> Result<T> {
    if gate_capacitance <= T::zero() || !gate_capacitance.is_finite_real() {
        return domain("gate capacitance must be positive");
    }
    Ok(lever_arm * charge / gate_capacitance)
}

/// Expected channel current for each basis state of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutMap<T: Real = f64> {
    pub currents: [T; 4],
    pub populations: [T; 4],
    /// Σ_s p_s·I_D(s).
    pub mean: T,
}

impl<T: Real> ReadoutMap<T> {
    pub fn labels() -> [&'static str; 4] {
        BASIS_LABELS
    }
}

pub fn readout_map<T: Real>(
    p: &ChannelParams<T>,
    v_gate: T,
    v_ds: T,
    shift_when_charged: [T; 2],
    populations: [T; 4],
) -> Result<ReadoutMap<T>> {
    if populations.iter().any(|&x| x < -T::tol(1e-12)) {
        return domain("populations must be non-negative");
    }
    let total = populations.iter().fold(T::zero(), |a, &x| a + x);
    if (total - T::one()).abs() > T::tol(1e-9) {
        return domain(format!("populations must sum to 1, got {total}"));
    }
    let opts = NewtonOptions::default();
    let mut currents = [T::zero(); 4];
    for (s, current) in currents.iter_mut().enumerate() {
        let map = QubitThresholdMap::for_basis_state(s, shift_when_charged);
        *current = solve_series(p, &map.overdrives(p, v_gate), v_ds, &opts)?.current;
    }
    let mean = (0..4).fold(T::zero(), |a, s| a + populations[s] * currents[s]);
    Ok(ReadoutMap {
        currents,
        populations,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ChannelParams {
        ChannelParams::normalized(2.0, 1.3).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p: ChannelParams = ChannelParams::new(10.0, 0.05, 3.0, 2.0, 0.4, 0.6, -0.9).unwrap();
        assert!((p.beta0() - 0.75).abs() < 1e-15);
        assert!((p.alpha() - (1.0 + 0.6 / (4.0 * 0.4 * 3.0))).abs() < 1e-15);
        assert!((p.threshold() - (-0.9 + 0.8 + 0.2)).abs() < 1e-15);
        let n = params();
        assert!(n.threshold().abs() < 1e-15);
        assert!((n.alpha() - 1.3).abs() < 1e-15);
        assert!(ChannelParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn segment_current_basics() {
        let p = params();
        assert_eq!(segment_current(&p, 1.0, 0.3, 0.3), 0.0);
        let fwd = segment_current(&p, 1.0, 0.01, 0.05);
        let rev = segment_current(&p, 1.0, 0.05, 0.01);
        assert!((fwd + rev).abs() < 1e-18);
        let small = segment_current(&p, 1.0, 0.0, 1e-6);
        assert!((small / (2.0 * 1.0 * 1e-6) - 1.0).abs() < 1e-5);
        let lin = p.with_model(SegmentModel::Linear);
        assert_eq!(segment_current(&lin, 1.0, 0.0, 0.5), 1.0);
    }

    #[test]
    fn two_qubit_closed_form() {
        let p = params();
        assert_eq!(two_qubit_current(&p, 1.0, 0.8, 0.0).unwrap(), 0.0);
        let (vg, vd) = (1.2, 0.05);
        let i = two_qubit_current(&p, vg, vg, vd).unwrap();
        assert!((i - 2.0 * (vg * vd - 0.65 * vd * vd) / 2.0).abs() < 1e-15);
        assert!(two_qubit_current(&p, 1.0, -1.0, 0.1).is_err());
    }

    #[test]
    fn contrast_formula() {
        let p = params();
        let c = delta_current_two_qubit(&p, 1.0, 0.0, 0.05).unwrap();
        assert_eq!(c.formula, 0.0);
        assert!(c.series.abs() < 1e-15);
        let a = delta_current_two_qubit(&p, 1.0, 0.05, 0.05).unwrap().formula;
        let b = delta_current_two_qubit(&p, 1.0, 0.05, 0.1).unwrap().formula;
        assert!((b / a - 4.0).abs() < 1e-14);
        assert!(delta_current_two_qubit(&p, 1.0, 1.0, 0.05).is_err());
    }

    #[test]
    fn basis_state_shift_pattern() {
        let s = [0.05, 0.07];
        assert_eq!(QubitThresholdMap::for_basis_state(0, s).shifts, vec![0.0, 0.0]);
        assert_eq!(QubitThresholdMap::for_basis_state(1, s).shifts, vec![0.0, 0.07]);
        assert_eq!(QubitThresholdMap::for_basis_state(2, s).shifts, vec![0.05, 0.0]);
        assert_eq!(QubitThresholdMap::for_basis_state(3, s).shifts, vec![0.05, 0.07]);
    }

    #[test]
    fn readout_map_weighting() {
        let p = params();
        let base = readout_map(&p, 1.0, 0.05, [0.0, 0.0], [1.0, 0.0, 0.0, 0.0]).unwrap();
        let baseline = solve_series(&p, &[1.0, 1.0], 0.05, &NewtonOptions::default())
            .unwrap()
            .current;
        assert!((base.mean - baseline).abs() < 1e-15);

        let eq = readout_map(&p, 1.0, 0.05, [0.05, 0.05], [0.25; 4]).unwrap();
        // Equal shifts on both qubits: |01⟩ and |10⟩ differ only through the α term.
        assert!(eq.currents[0] > eq.currents[1] && eq.currents[1] > eq.currents[3]);

        let pops = [0.1, 0.2, 0.3, 0.4];
        let m = readout_map(&p, 1.0, 0.05, [0.05, 0.03], pops).unwrap();
        let mut expect = 0.0;
        for s in 0..4 {
            let map = QubitThresholdMap::for_basis_state(s, [0.05, 0.03]);
            let i = solve_series(&p, &map.overdrives(&p, 1.0), 0.05, &NewtonOptions::default())
                .unwrap()
                .current;
            expect += pops[s] * i;
        }
        assert!((m.mean - expect).abs() < 1e-15);
        assert!(readout_map(&p, 1.0, 0.05, [0.05, 0.03], [0.5, 0.6, 0.0, 0.0]).is_err());
    }

    #[test]
    fn equal_shift_degenerate_map() {
        let p = params();
        let m = readout_map(&p, 1.0, 0.05, [0.04, 0.04], [0.0, 0.5, 0.5, 0.0]).unwrap();
        let lin = readout_map(
            &p.with_model(SegmentModel::Linear),
            1.0,
            0.05,
            [0.04, 0.04],
            [0.0, 0.5, 0.5, 0.0],
        )
        .unwrap();
        assert!((lin.currents[1] - lin.currents[2]).abs() <= 1e-12 * lin.currents[1]);
        assert!((lin.mean - lin.currents[1]).abs() <= 1e-12 * lin.mean);
        assert!(m.currents[2] > m.currents[1]);
    }

    #[test]
    fn lever_arm_estimate() {
        assert!((lever_arm_threshold_shift(1.0_f64, 0.2, 4.0).unwrap() - 0.05).abs() < 1e-16);
        assert!(lever_arm_threshold_shift(1.0, 0.2, 0.0).is_err());
    }
}
