//! Constructive shadowing certificates for points with a small clopen
//! neighbourhood, for systems whose pair orbits stay close.
//!
//! If `U ∋ p` has diameter at most `eps'`, where `d(a, b) <= eps'` keeps the
//! pair orbit of `(a, b)` within `eps`, and every pair at distance `<= delta`
//! keeps its orbit within `delta' < dist(U, X \ U)`, then for any
//! `delta`-pseudo-orbit `ξ` through `p` the points `f^{-n}(ξ_n)` move by at most
//! `delta'` per step and so never leave `U`. Hence the orbit of `p` itself
//! `eps`-shadows `ξ`.

use std::collections::{HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::dynamics::DynSystem;
use crate::pointset::PointSet;
use crate::rational::Rational;

/// Upper bound on `points * order` for the exhaustive confinement check.
const CONFINEMENT_LIMIT: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClopenCertificate {
    pub point: usize,
    pub eps: Rational,
    /// Pairs at distance `<= eps_prime` stay within `eps` along their orbits.
    pub eps_prime: Rational,
    /// Proximity gap whose component around the point is `clopen`.
    pub gap: Rational,
    pub clopen: PointSet,
    /// `dist(U, X \ U)`; `None` when `U` is the whole space.
    pub separation: Option<Rational>,
    pub delta: Rational,
    /// Largest orbit-wise distance among pairs at distance `<= delta`.
    pub delta_prime: Rational,
    pub trace: CertificateTrace,
}

/// Individually re-checkable facts behind a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTrace {
    pub point_in_clopen: bool,
    pub diameter_within_eps_prime: bool,
    pub eps_prime_orbits_within_eps: bool,
    pub delta_orbits_within_delta_prime: bool,
    pub delta_prime_below_separation: bool,
    pub delta_positive: bool,
    /// Exhaustive check that `f^{-n}(ξ_n) ∈ U` along every pseudo-orbit
    /// through the point; `None` when the system is too large to enumerate.
    pub orbit_confinement: Option<bool>,
}

impl CertificateTrace {
    pub fn all_hold(&self) -> bool {
        self.point_in_clopen
            && self.diameter_within_eps_prime
            && self.eps_prime_orbits_within_eps
            && self.delta_orbits_within_delta_prime
            && self.delta_prime_below_separation
            && self.delta_positive
            && self.orbit_confinement != Some(false)
    }
}

impl ClopenCertificate {
    /// Recomputes every trace item from scratch.
    pub fn verify(&self, sys: &DynSystem) -> CertificateTrace {
        build_trace(
            sys,
            self.point,
            &self.eps,
            &self.eps_prime,
            &self.clopen,
            self.separation.as_ref(),
            &self.delta,
            &self.delta_prime,
        )
    }
}

pub fn clopen_shadow_certificate(sys: &DynSystem, p: usize, eps: &Rational) -> Option<ClopenCertificate> {
    let space = sys.space();
    if p >= sys.len() || eps.is_negative() {
        return None;
    }
    let maxima = sys.pair_maxima();
    let eps_prime = maxima.equicontinuity_modulus(space, eps);

    let mut candidates: Vec<(Rational, PointSet)> = Vec::new();
    for gap in space.candidate_distances() {
        let u = space.component_of(p, gap);
        if space.diameter(&u).expect("component contains p") > eps_prime {
            break;
        }
        if candidates.last().is_some_and(|(_, prev)| *prev == u) {
            candidates.last_mut().expect("nonempty").0 = *gap;
        } else {
            candidates.push((*gap, u));
        }
    }
    let mut options: Vec<(Rational, PointSet, Option<Rational>)> = candidates
        .into_iter()
        .map(|(gap, u)| {
            let rest = u.complement();
            let sep = (!rest.is_empty()).then(|| space.set_distance(&u, &rest).expect("nonempty sets"));
            (gap, u, sep)
        })
        .collect();
    // Largest gap first; equal gaps cannot occur, but prefer wider separation.
    options.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| sep_key(&b.2).cmp(&sep_key(&a.2))));

    for (gap, clopen, separation) in options {
        let delta = maxima.strict_modulus(space, separation.as_ref());
        if delta.is_zero() {
            continue;
        }
        let mut delta_prime = Rational::zero();
        for a in 0..sys.len() {
            for b in a + 1..sys.len() {
                if space.d(a, b) <= delta {
                    delta_prime = delta_prime.max(maxima.get(a, b));
                }
            }
        }
        let trace = build_trace(sys, p, eps, &eps_prime, &clopen, separation.as_ref(), &delta, &delta_prime);
        return Some(ClopenCertificate {
            point: p,
            eps: *eps,
            eps_prime,
            gap,
            clopen,
            separation,
            delta,
            delta_prime,
            trace,
        });
    }
    None
}

fn sep_key(sep: &Option<Rational>) -> (bool, Rational) {
    match sep {
        None => (true, Rational::zero()),
        Some(s) => (false, *s),
    }
}

#[allow(clippy::too_many_arguments)]
fn build_trace(
    sys: &DynSystem,
    p: usize,
    eps: &Rational,
    eps_prime: &Rational,
    clopen: &PointSet,
    separation: Option<&Rational>,
    delta: &Rational,
    delta_prime: &Rational,
) -> CertificateTrace {
    let space = sys.space();
    let n = sys.len();
    let pairs_within = |radius: &Rational, bound: &Rational| {
        (0..n).all(|a| (a + 1..n).all(|b| space.d(a, b) > *radius || sys.pair_orbit_extremes(a, b).max_dist <= *bound))
    };
    let rest = clopen.complement();
    let actual_sep =
        (!rest.is_empty() && !clopen.is_empty()).then(|| space.set_distance(clopen, &rest).expect("nonempty"));
    let orbit_confinement = confinement(sys, p, delta, clopen);
    CertificateTrace {
        point_in_clopen: clopen.contains(p),
        diameter_within_eps_prime: !clopen.is_empty() && space.diameter(clopen).expect("nonempty") <= *eps_prime,
        eps_prime_orbits_within_eps: pairs_within(eps_prime, eps),
        delta_orbits_within_delta_prime: pairs_within(delta, delta_prime),
        delta_prime_below_separation: actual_sep.as_ref() == separation && actual_sep.is_none_or(|s| *delta_prime < s),
        delta_positive: delta.is_positive(),
        orbit_confinement,
    }
}

/// Explores `(ξ_n, n mod order)` over all `delta`-pseudo-orbits with `ξ_0 = p`,
/// in both time directions, checking `f^{-n}(ξ_n) ∈ U`.
fn confinement(sys: &DynSystem, p: usize, delta: &Rational, clopen: &PointSet) -> Option<bool> {
    let order = sys.order();
    if (sys.len() as u64).saturating_mul(order) > CONFINEMENT_LIMIT {
        return None;
    }
    let graph = sys.pseudo_orbit_graph(delta);
    let mut seen: HashSet<(usize, u64, bool)> = HashSet::new();
    let mut queue = VecDeque::new();
    for forward in [true, false] {
        seen.insert((p, 0, forward));
        queue.push_back((p, 0u64, forward));
    }
    while let Some((u, t, forward)) = queue.pop_front() {
        let time = if forward { t as i64 } else { -(t as i64) };
        if !clopen.contains(sys.iterate(u, -time)) {
            return Some(false);
        }
        let nexts = if forward { &graph.successors[u] } else { &graph.predecessors[u] };
        let t_next = (t + 1) % order;
        for &v in nexts {
            if seen.insert((v, t_next, forward)) {
                queue.push_back((v, t_next, forward));
            }
        }
    }
    Some(true)
}
