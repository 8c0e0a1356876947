//! Shadowability decisions and the objects built around them.

mod automaton;
mod certificate;
pub mod oracle;
mod power;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rational::Rational;

pub use automaton::SubsetAutomaton;
pub use certificate::{clopen_shadow_certificate, CertificateTrace, ClopenCertificate};
pub use oracle::{brute_force_shadowable, oracle_shadowable};
pub use power::{power_scale_matches, PowerScan, ScaleMatch};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShadowConfig {
    pub state_cap: usize,
    /// Skip building the automaton when `delta` is below every positive
    /// `d(f(u), v)`; pseudo-orbits are then true orbits.
    pub short_circuit: bool,
}

impl Default for ShadowConfig {
    fn default() -> Self {
        Self { state_cap: DEFAULT_STATE_CAP, short_circuit: true }
    }
}

/// A finite walk in the pseudo-orbit graph with no tracking orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadWindow {
    pub walk: Vec<usize>,
    /// Index of the queried point inside `walk`.
    pub center: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowVerdict {
    pub point: usize,
    pub shadowable: bool,
    pub witness: Option<BadWindow>,
}

pub(crate) fn check_scales(eps: &Rational, delta: &Rational) -> Result<()> {
    for r in [eps, delta] {
        if r.is_negative() {
            return Err(Error::NegativeScale(*r));
        }
    }
    Ok(())
}

/// Shadowing queries against one system under a fixed configuration.
#[derive(Clone, Copy, Debug)]
pub struct Shadowing<'a> {
    sys: &'a DynSystem,
    config: ShadowConfig,
}

impl<'a> Shadowing<'a> {
    pub fn new(sys: &'a DynSystem) -> Self {
        Self { sys, config: ShadowConfig::default() }
    }

    pub fn with_config(sys: &'a DynSystem, config: ShadowConfig) -> Self {
        Self { sys, config }
    }

    pub fn system(&self) -> &'a DynSystem {
        self.sys
    }

    pub fn config(&self) -> &ShadowConfig {
        &self.config
    }

    pub fn automaton(&self, eps: &Rational, delta: &Rational) -> Result<SubsetAutomaton> {
        SubsetAutomaton::build(self.sys, eps, delta, &self.config)
    }

    pub fn shadowable_points(&self, eps: &Rational, delta: &Rational) -> Result<PointSet> {
        Ok(self.automaton(eps, delta)?.shadowable_points().clone())
    }

    pub fn is_shadowable(&self, x: usize, eps: &Rational, delta: &Rational) -> Result<ShadowVerdict> {
        self.sys.space().check_point(x)?;
        Ok(self.automaton(eps, delta)?.verdict(x))
    }

    /// Largest candidate `delta` at which each point is shadowable; 0 when only
    /// `delta = 0` works.
    ///
    /// Shadowability is antitone in `delta`, so every `delta` strictly below
    /// the next candidate above the returned value works as well.
    pub fn pointwise_moduli(&self, eps: &Rational) -> Result<Vec<Rational>> {
        let deltas = self.sys.candidate_deltas();
        let mut moduli = vec![deltas[0]; self.sys.len()];
        for delta in &deltas[1..] {
            let sh = self.shadowable_points(eps, delta)?;
            if sh.is_empty() {
                break;
            }
            for x in sh.iter() {
                moduli[x] = *delta;
            }
        }
        Ok(moduli)
    }

    pub fn pointwise_modulus(&self, x: usize, eps: &Rational) -> Result<Rational> {
        self.sys.space().check_point(x)?;
        let deltas = self.sys.candidate_deltas();
        // Binary search for the last candidate at which x is shadowable.
        let (mut lo, mut hi) = (0usize, deltas.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.shadowable_points(eps, &deltas[mid])?.contains(x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(deltas[lo])
    }

    /// Largest candidate `delta` at which every point is shadowable.
    pub fn potp_modulus(&self, eps: &Rational) -> Result<Rational> {
        let deltas = self.sys.candidate_deltas();
        let (mut lo, mut hi) = (0usize, deltas.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.shadowable_points(eps, &deltas[mid])?.is_full() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(deltas[lo])
    }

    /// Shadowable sets over a grid, `result[i][j]` at `(eps_grid[i], delta_grid[j])`.
    /// Cells are independent and evaluated in parallel.
    pub fn grid(&self, eps_grid: &[Rational], delta_grid: &[Rational]) -> Vec<Vec<Result<PointSet>>> {
        let cells: Vec<(usize, usize)> =
            (0..eps_grid.len()).flat_map(|i| (0..delta_grid.len()).map(move |j| (i, j))).collect();
        let results: Vec<Result<PointSet>> =
            cells.par_iter().map(|&(i, j)| self.shadowable_points(&eps_grid[i], &delta_grid[j])).collect();
        let mut rows: Vec<Vec<Result<PointSet>>> = Vec::with_capacity(eps_grid.len());
        let mut it = results.into_iter();
        for _ in 0..eps_grid.len() {
            rows.push(it.by_ref().take(delta_grid.len()).collect());
        }
        rows
    }

    /// Every pseudo-orbit starting in `k` is shadowed.
    pub fn shadowable_through_set(&self, k: &PointSet, eps: &Rational, delta: &Rational) -> Result<bool> {
        if k.is_empty() {
            return Err(Error::EmptyArgument("shadowable_through_set needs a nonempty set"));
        }
        Ok(k.is_subset(&self.shadowable_points(eps, delta)?))
    }
}

pub fn shadowable_points(sys: &DynSystem, eps: &Rational, delta: &Rational) -> Result<PointSet> {
    Shadowing::new(sys).shadowable_points(eps, delta)
}

pub fn is_shadowable(sys: &DynSystem, x: usize, eps: &Rational, delta: &Rational) -> Result<ShadowVerdict> {
    Shadowing::new(sys).is_shadowable(x, eps, delta)
}

pub fn pointwise_modulus(sys: &DynSystem, x: usize, eps: &Rational) -> Result<Rational> {
    Shadowing::new(sys).pointwise_modulus(x, eps)
}

pub fn potp_modulus(sys: &DynSystem, eps: &Rational) -> Result<Rational> {
    Shadowing::new(sys).potp_modulus(eps)
}

pub fn shadowable_through_set(sys: &DynSystem, k: &PointSet, eps: &Rational, delta: &Rational) -> Result<bool> {
    Shadowing::new(sys).shadowable_through_set(k, eps, delta)
}

/// Forward propagation `S_0 = B[w_0, eps]`, `S_{i+1} = f(S_i) ∩ B[w_{i+1}, eps]`.
/// Returns a point whose orbit stays within `eps` of the whole window, as seen
/// at the window's first index.
pub fn lift_exists(sys: &DynSystem, window: &[usize], eps: &Rational, delta: &Rational) -> Result<Option<usize>> {
    check_scales(eps, delta)?;
    let Some(&first) = window.first() else {
        return Err(Error::EmptyArgument("lift_exists needs a nonempty window"));
    };
    for &w in window {
        sys.space().check_point(w)?;
    }
    for (step, pair) in window.windows(2).enumerate() {
        if sys.space().d(sys.f(pair[0]), pair[1]) > *delta {
            return Err(Error::NotAWalk { step, from: pair[0], to: pair[1] });
        }
    }
    let mut candidates = sys.ball(first, eps);
    for &w in &window[1..] {
        candidates = candidates.image(sys.fwd());
        candidates.intersect_with(&sys.ball(w, eps));
        if candidates.is_empty() {
            return Ok(None);
        }
    }
    let m = window.len() as i64 - 1;
    Ok(candidates.first().map(|z| sys.iterate(z, -m)))
}

/// First `(k, y)` such that the whole `f^k`-orbit of `y` lies in
/// `B[z, eps]`. Smallest `k` wins; among trackers `z` itself comes first,
/// then index order.
pub fn periodic_tracker(sys: &DynSystem, z: usize, eps: &Rational, delta: &Rational) -> Result<Option<(usize, usize)>> {
    sys.space().check_point(z)?;
    check_scales(eps, delta)?;
    let ball = sys.ball(z, eps);
    // A minimal k always divides some cycle length: the f^k-orbit of y equals
    // its f^gcd(k, period(y))-orbit.
    let mut ks = BTreeSet::new();
    for cycle in sys.cycles() {
        let len = cycle.len();
        for d in 1..=len {
            if len % d == 0 {
                ks.insert(d);
            }
        }
    }
    for k in ks {
        for y in std::iter::once(z).chain(ball.iter().filter(|&y| y != z)) {
            let steps = sys.period(y) / k.gcd(&sys.period(y));
            if (0..steps).all(|j| ball.contains(sys.iterate(y, (j * k) as i64))) {
                return Ok(Some((k, y)));
            }
        }
    }
    Ok(None)
}

/// Return witness for a shadowable point on a pseudo-orbit cycle.
///
/// Builds the periodic pseudo-orbit that repeats a shortest cycle through `x`
/// in the pseudo-orbit graph, finds an orbit `eps`-tracking it, and reports
/// the cycle length `k` with the tracking point `y`; then `y` and `f^k(y)`
/// both lie in `B[x, eps]`. `None` when `x` is on no cycle or no orbit tracks
/// the periodic pseudo-orbit.
pub fn recurrent_return_witness(
    sys: &DynSystem,
    x: usize,
    eps: &Rational,
    delta: &Rational,
) -> Result<Option<(usize, usize)>> {
    sys.space().check_point(x)?;
    check_scales(eps, delta)?;
    let graph = sys.pseudo_orbit_graph(delta);
    let Some(cycle) = graph.shortest_cycle_through(x) else {
        return Ok(None);
    };
    let k = cycle.len();
    for y in sys.ball(x, eps).iter() {
        let span = k.lcm(&sys.period(y));
        let tracks = (0..span).all(|t| sys.space().d(sys.iterate(y, t as i64), cycle[t % k]) <= *eps);
        if tracks {
            return Ok(Some((k, y)));
        }
    }
    Ok(None)
}
