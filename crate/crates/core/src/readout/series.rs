use nalgebra::{DMatrix, DVector};

use super::{segment_current, ChannelParams};
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions<T: Real = f64> {
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Converged when max residual < rtol·|I_D|.
    pub rtol: T,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            max_halvings: 8,
            rtol: T::tol(1e-12),
        }
    }
}

/// Self-consistent state of a series channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSolution<T: Real = f64> {
    /// Node voltages V_0 = 0, V_1, …, V_N = V_DS.
    pub node_voltages: Vec<T>,
    pub current: T,
    pub iterations: usize,
    /// Final max residual relative to |I_D|.
    pub residual: T,
    pub warnings: Vec<String>,
}

impl<T: Real> ChannelSolution<T> {
    pub fn segment_currents(&self, p: &ChannelParams<T>, overdrives: &[T]) -> Vec<T> {
        overdrives
            .iter()
            .enumerate()
            .map(|(i, &vg)| segment_current(p, vg, self.node_voltages[i], self.node_voltages[i + 1]))
            .collect()
    }
}

/// Solves for the interior node voltages and the common current of N
/// segments in series by damped Newton iteration.
pub fn solve_series<T: Real>(
    p: &ChannelParams<T>,
    overdrives: &[T],
    v_ds: T,
    opts: &NewtonOptions<T>,
) -> Result<ChannelSolution<T>> {
    p.validate()?;
    let n = overdrives.len();
    if n == 0 {
        return domain("channel needs at least one segment");
    }
    if !(v_ds >= T::zero() && v_ds.is_finite_real()) {
        return domain(format!("V_DS must be finite and non-negative, got {v_ds}"));
    }
    if let Some(vg) = overdrives.iter().find(|v| !(**v > T::zero() && v.is_finite_real())) {
        return Err(Error::Validity(format!("segment overdrive {vg} ≤ 0: channel is off")));
    }
    let alpha = p.alpha_term();
    let mut warnings = Vec::new();
    for (i, &vg) in overdrives.iter().enumerate() {
        if vg <= alpha * v_ds {
            let w = format!("segment {} overdrive {vg} ≤ α·V_DS: outside the linear region", i + 1);
            log::warn!("{w}");
            warnings.push(w);
        }
    }

    let beta = p.beta0();
    let mut v: Vec<T> = (0..=n)
        .map(|i| v_ds * T::from_int(i as i64) / T::from_int(n as i64))
        .collect();
    let mut current = (0..n)
        .map(|i| segment_current(p, overdrives[i], v[i], v[i + 1]))
        .fold(T::zero(), |a, x| a + x)
        / T::from_int(n as i64);

    let residuals = |v: &[T], current: T| -> Vec<T> {
        (0..n)
            .map(|i| segment_current(p, overdrives[i], v[i], v[i + 1]) - current)
            .collect()
    };
    let max_abs = |r: &[T]| r.iter().fold(T::zero(), |a, x| a.max(x.abs()));

    let mut r = residuals(&v, current);
    let mut iterations = 0;
    loop {
        let scale = current.abs().max(T::min_positive());
        let rel = max_abs(&r) / scale;
        if rel < opts.rtol || v_ds == T::zero() {
            check_ordering(&v)?;
            log::debug!("series channel converged in {iterations} iterations, residual {rel}");
            return Ok(ChannelSolution {
                node_voltages: v,
                current,
                iterations,
                residual: rel,
                warnings,
            });
        }
        if iterations >= opts.max_iterations {
            if let Some(i) = pinched_segment(p, overdrives, &v, current) {
                return Err(Error::Validity(format!(
                    "segment {} pinched off: cannot carry I = {current}",
                    i + 1
                )));
            }
            return Err(Error::NonConvergence {
                iterations,
                residual: rel.as_f64(),
            });
        }
        iterations += 1;

        // Unknowns: V_1 … V_{N−1}, then I.
        let mut jac = DMatrix::<T>::zeros(n, n);
        for i in 0..n {
            let vg = overdrives[i];
            if i > 0 {
                jac[(i, i - 1)] = -beta * (vg - alpha * v[i]);
            }
            if i + 1 < n {
                jac[(i, i)] = beta * (vg - alpha * v[i + 1]);
            }
            jac[(i, n - 1)] = -T::one();
        }
        let rhs = DVector::from_iterator(n, r.iter().map(|&x| -x));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("singular Jacobian in series channel solve".into()))?;

        let r_norm = max_abs(&r);
        let mut lambda = T::one();
        let mut trial_v = v.clone();
        let mut trial_i;
        let mut trial_r;
        let mut halvings = 0;
        loop {
            for k in 1..n {
                trial_v[k] = v[k] + lambda * step[k - 1];
            }
            trial_i = current + lambda * step[n - 1];
            trial_r = residuals(&trial_v, trial_i);
            if max_abs(&trial_r) < r_norm || halvings >= opts.max_halvings {
                break;
            }
            lambda *= T::lit(0.5);
            halvings += 1;
        }
        log::debug!(
            "newton iteration {iterations}: λ = {lambda}, residual {}",
            max_abs(&trial_r) / scale
        );
        v = trial_v;
        current = trial_i;
        r = trial_r;
    }
}

fn check_ordering<T: Real>(v: &[T]) -> Result<()> {
    if v.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Validity(
            "node voltages are not monotone from source to drain".into(),
        ));
    }
    Ok(())
}

/// First segment whose quadratic has no real root for the required current.
fn pinched_segment<T: Real>(p: &ChannelParams<T>, overdrives: &[T], v: &[T], current: T) -> Option<usize> {
    let alpha = p.alpha_term();
    if alpha == T::zero() {
        return None;
    }
    (0..overdrives.len()).find(|&i| {
        let d = overdrives[i] - alpha * v[i];
        d * d - T::lit(2.0) * alpha * current / p.beta0() < T::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::readout::{two_qubit_current, SegmentModel};
    use proptest::prelude::*;

    fn params() -> ChannelParams {
        ChannelParams::normalized(1.5, 1.2).unwrap()
    }

    #[test]
    fn single_segment_is_direct() {
        let p = params();
        let s = solve_series(&p, &[0.8], 0.1, &NewtonOptions::default()).unwrap();
        assert_eq!(s.current, segment_current(&p, 0.8, 0.0, 0.1));
        assert_eq!(s.node_voltages, vec![0.0, 0.1]);
    }

    #[test]
    fn zero_bias_gives_zero_current() {
        let s = solve_series(&params(), &[1.0, 0.9, 1.1], 0.0, &NewtonOptions::default()).unwrap();
        assert_eq!(s.current, 0.0);
        assert!(s.node_voltages.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn uniform_channel_matches_one_long_segment() {
        let p = params();
        let s = solve_series(&p, &[1.0; 4], 0.2, &NewtonOptions::default()).unwrap();
        let long = segment_current(&p, 1.0, 0.0, 0.2) / 4.0;
        assert!((s.current - long).abs() < 1e-13 * long);
    }

    #[test]
    fn two_segments_near_closed_form() {
        let p = params();
        let (vg1, vg2, vd) = (1.0, 0.95, 0.02);
        let s = solve_series(&p, &[vg1, vg2], vd, &NewtonOptions::default()).unwrap();
        let approx = two_qubit_current(&p, vg1, vg2, vd).unwrap();
        assert!(((s.current - approx) / s.current).abs() < 0.01);
        let currents = s.segment_currents(&p, &[vg1, vg2]);
        assert!((currents[0] - currents[1]).abs() < 1e-12 * s.current);
    }

    #[test]
    fn linear_model_swap_symmetry() {
        let p = params().with_model(SegmentModel::Linear);
        let a = solve_series(&p, &[1.0, 0.9], 0.1, &NewtonOptions::default()).unwrap();
        let b = solve_series(&p, &[0.9, 1.0], 0.1, &NewtonOptions::default()).unwrap();
        assert!((a.current - b.current).abs() < 1e-12 * a.current);
        // Linear series resistors: I = β V_DS / Σ 1/V_G.
        let exact = 1.5 * 0.1 / (1.0 / 1.0 + 1.0 / 0.9);
        assert!((a.current - exact).abs() < 1e-13);
    }

    #[test]
    fn off_segment_rejected() {
        let err = solve_series(&params(), &[1.0, -0.1], 0.1, &NewtonOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Validity(_)));
        assert!(solve_series(&params(), &[], 0.1, &NewtonOptions::default()).is_err());
        assert!(solve_series(&params(), &[1.0], -0.1, &NewtonOptions::default()).is_err());
    }

    #[test]
    fn saturation_warns() {
        let s = solve_series(&params(), &[1.0, 0.1], 0.1, &NewtonOptions::default());
        match s {
            Ok(s) => assert!(!s.warnings.is_empty()),
            Err(e) => assert!(matches!(e, Error::Validity(_) | Error::NonConvergence { .. })),
        }
    }

    #[test]
    fn iteration_cap_reported() {
        let opts = NewtonOptions {
            max_iterations: 0,
            ..NewtonOptions::default()
        };
        let err = solve_series(&params(), &[1.0, 0.7, 0.9], 0.1, &opts).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 0, .. }));
    }

    proptest! {
        #[test]
        fn converges_with_ordered_nodes(
            n in 1usize..=16,
            base in 0.5f64..2.0,
            seed in proptest::collection::vec(0.0f64..0.1, 16),
            frac in 0.001f64..0.1,
        ) {
            let p = params();
            let vg: Vec<f64> = (0..n).map(|i| base * (1.0 - seed[i])).collect();
            let v_ds = frac * base;
            let s = solve_series(&p, &vg, v_ds, &NewtonOptions::default()).unwrap();
            prop_assert!(s.iterations <= 100);
            prop_assert!(s.residual < 1e-12);
            prop_assert!(s.node_voltages.windows(2).all(|w| w[0] <= w[1]));
            let currents = s.segment_currents(&p, &vg);
            for c in &currents {
                prop_assert!((c - s.current).abs() <= 1e-10 * s.current);
            }
        }

        #[test]
        fn current_increases_with_gate_and_drain(
            vg in 0.5f64..2.0,
            dv in 0.0f64..0.05,
            vd in 0.001f64..0.05,
        ) {
            let p = params();
            let o = NewtonOptions::default();
            let i = solve_series(&p, &[vg, vg - dv], vd, &o).unwrap().current;
            let i_gate = solve_series(&p, &[vg + 0.01, vg - dv + 0.01], vd, &o).unwrap().current;
            let i_drain = solve_series(&p, &[vg, vg - dv], vd * 1.1, &o).unwrap().current;
            prop_assert!(i_gate > i);
            prop_assert!(i_drain > i);
        }
    }
}
