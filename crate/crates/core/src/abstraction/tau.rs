use serde::{Deserialize, Serialize};

use super::{boundary_distance, AbstractionError, SystemSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauValidation {
    pub v_max: f64,
    /// Boundary distance of each pair of distinct propositions.
    pub distances: Vec<(String, String, f64)>,
    /// Infinite when there are fewer than two propositions.
    pub tau_max: f64,
    pub tau: f64,
    pub pass: bool,
}

/// Checks that within one period no trajectory can go from the boundary
/// of one region to the boundary of another: the period must not exceed
/// every pairwise boundary distance divided by the largest speed. Only the
/// listed propositions are considered.
pub fn validate_tau(spec: &SystemSpec, aps: &[String]) -> Result<TauValidation, AbstractionError> {
    let regions = aps.iter().map(|p| spec.region(p)).collect::<Result<Vec<_>, _>>()?;
    let v_max = spec.max_speed();
    let mut distances = Vec::new();
    let mut tau_max = f64::INFINITY;
    for i in 0..aps.len() {
        for j in i + 1..aps.len() {
            let d = boundary_distance(&spec.domain, regions[i], regions[j]);
            if d <= 0.0 {
                return Err(AbstractionError::NotSeparated(aps[i].clone(), aps[j].clone()));
            }
            if v_max > 0.0 {
                tau_max = tau_max.min(d / v_max);
            }
            distances.push((aps[i].clone(), aps[j].clone(), d));
        }
    }
    let v = TauValidation {
        v_max,
        distances,
        tau_max,
        tau: spec.tau,
        pass: spec.tau <= tau_max,
    };
    if !v.pass {
        return Err(AbstractionError::TauTooLarge { tau: spec.tau, tau_max });
    }
    Ok(v)
}
