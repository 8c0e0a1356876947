//! Matching shadowable sets of `f` and `f^k` across scales.

use serde::Serialize;

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rational::Rational;

use super::{ShadowConfig, Shadowing};

/// At scale `eps`, `Sh_f(eps, delta) = Sh_{f^k}(eps, delta_power)`, with
/// `delta_power` the largest positive candidate of `f^k` achieving equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleMatch {
    #[serde(with = "crate::rational::serde_pq")]
    pub eps: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub delta: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub delta_power: Rational,
    #[serde(skip)]
    pub shadowable: PointSet,
}

/// Result of [`power_scale_matches`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerScan {
    pub matches: Vec<ScaleMatch>,
    /// Cells of `f` whose automaton exceeded the state cap.
    pub unresolved: usize,
}

/// Sweeps both systems over their candidate grids (positive `delta` only) and
/// records every scale where the shadowable sets can be matched. Cells of
/// either system that exceed the state cap take no part in the matching.
pub fn power_scale_matches(sys: &DynSystem, k: i64, config: ShadowConfig) -> Result<PowerScan> {
    let power = sys.power(k)?;
    let eps_grid = sys.space().candidate_distances().to_vec();
    let deltas: Vec<Rational> = sys.candidate_deltas().into_iter().skip(1).collect();
    let power_deltas: Vec<Rational> = power.candidate_deltas().into_iter().skip(1).collect();
    let base = Shadowing::with_config(sys, config).grid(&eps_grid, &deltas);
    let powered = Shadowing::with_config(&power, config).grid(&eps_grid, &power_deltas);
    let mut matches = Vec::new();
    let mut unresolved = 0;
    for (i, eps) in eps_grid.iter().enumerate() {
        for (j, delta) in deltas.iter().enumerate() {
            let sh = match &base[i][j] {
                Ok(sh) => sh,
                Err(Error::StateCapExceeded { .. }) => {
                    unresolved += 1;
                    continue;
                }
                Err(e) => return Err(e.clone()),
            };
            let mut best = None;
            for (jj, dp) in power_deltas.iter().enumerate() {
                match &powered[i][jj] {
                    Ok(p) if p == sh => best = Some(*dp),
                    Ok(_) | Err(Error::StateCapExceeded { .. }) => {}
                    Err(e) => return Err(e.clone()),
                }
            }
            if let Some(delta_power) = best {
                matches.push(ScaleMatch { eps: *eps, delta: *delta, delta_power, shadowable: sh.clone() });
            }
        }
    }
    Ok(PowerScan { matches, unresolved })
}
