use nalgebra::{DMatrix, DVector};

use super::{CapacitanceSet, GateBias, Occupation};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Incidence of q1…q10 in the dot-charge relations, rows A, B, C, D.
/// Row r reads −N_r = Σ_i CONSTRAINT_ROWS[r][i]·q_i.
pub const CONSTRAINT_ROWS: [[i8; 10]; 4] = [
    [1, 0, 1, 0, 1, 1, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, -1, 1, 0, 0, 0],
    [-1, 0, 0, -1, 0, 0, 0, 1, 1, 0],
    [0, -1, -1, 0, 0, 0, 0, 0, -1, 1],
];

/// Total electrostatic energy Σ qᵢ²/(2Cᵢ) − q7·V_a − q10·V_b.
///
/// A zero capacitor contributes nothing when its charge is zero and an
/// infinite energy otherwise.
pub fn raw_energy<T: Real>(caps: &CapacitanceSet<T>, q: &[T; 10], bias: &GateBias<T>) -> T {
    let half = T::lit(0.5);
    let stored = caps.values().iter().zip(q).fold(T::zero(), |acc, (&c, &qi)| {
        if c == T::zero() {
            if qi == T::zero() {
                acc
            } else {
                T::max_value().unwrap_or_else(T::one)
            }
        } else {
            acc + half * qi * qi / c
        }
    });
    stored - q[6] * bias.va - q[9] * bias.vb
}

/// Minimum of [`raw_energy`] at fixed dot charges, with the junction
/// charges that attain it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMinimum<T: Real = f64> {
    pub energy: T,
    pub charges: [T; 10],
}

/// Minimizes the network energy over q1…q10 subject to the four dot-charge
/// relations, by solving the KKT system
///
/// ```text
/// [ diag(1/C)  Aᵀ ] [ q ]   [ g  ]
/// [ A          0  ] [ λ ] = [ −n ]
/// ```
///
/// where g carries the gate voltages on q7 and q10. Capacitors with C = 0
/// are removed from the system (their charge is pinned to zero).
pub fn minimize_energy<T: Real>(
    caps: &CapacitanceSet<T>,
    occupation: &Occupation<T>,
    bias: &GateBias<T>,
) -> Result<EnergyMinimum<T>> {
    bias.validate()?;
    let active: Vec<usize> = (0..10).filter(|&i| caps.values()[i] > T::zero()).collect();
    let m = active.len();
    let dim = m + 4;

    let mut kkt = DMatrix::<T>::zeros(dim, dim);
    let mut rhs = DVector::<T>::zeros(dim);
    for (k, &i) in active.iter().enumerate() {
        kkt[(k, k)] = T::one() / caps.values()[i];
        for (r, row) in CONSTRAINT_ROWS.iter().enumerate() {
            let a = T::from_int(row[i] as i64);
            kkt[(k, m + r)] = a;
            kkt[(m + r, k)] = a;
        }
        rhs[k] = match i {
            6 => bias.va,
            9 => bias.vb,
            _ => T::zero(),
        };
    }
    for (r, n) in occupation.dot_charges().into_iter().enumerate() {
        rhs[m + r] = -n;
    }

    let sol = kkt
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular KKT system in energy minimization".into()))?;
    if sol.iter().any(|x| !x.is_finite_real()) {
        return Err(Error::Numerical("non-finite KKT solution".into()));
    }

    let mut charges = [T::zero(); 10];
    for (k, &i) in active.iter().enumerate() {
        charges[i] = sol[k];
    }
    Ok(EnergyMinimum {
        energy: raw_energy(caps, &charges, bias),
        charges,
    })
}
