//! Exhaustive window semantics, independent of the subset automaton.
//!
//! A point `x` fails to be shadowable iff some finite walk through `x` in the
//! pseudo-orbit graph has no tracking orbit. Splitting such a window at `x`,
//! the left half constrains the time-0 candidates to a set `A` and the right
//! half to a set `B`; the window lifts iff `A ∩ B ≠ ∅`. The oracle enumerates
//! every left and right half up to the requested length, grouped into
//! `(endpoint, candidate set)` classes, and looks for a disjoint pair of
//! time-0 sets.

use std::collections::{HashMap, HashSet};

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rational::Rational;

use super::lift_exists;

/// Default cap on the total number of enumerated half-window classes.
pub const DEFAULT_BUDGET: usize = 50_000_000;

pub fn oracle_shadowable(
    sys: &DynSystem,
    x: usize,
    eps: &Rational,
    delta: &Rational,
    max_window: usize,
    budget: usize,
) -> Result<bool> {
    sys.space().check_point(x)?;
    super::check_scales(eps, delta)?;
    if max_window == 0 {
        return Err(Error::BadParams("max_window must be at least 1".into()));
    }
    let mut spent = 0usize;
    let left = half_windows(sys, x, eps, delta, max_window, Side::Past, budget, &mut spent)?;
    let right = half_windows(sys, x, eps, delta, max_window, Side::Future, budget, &mut spent)?;
    let left = minimal_sets(left);
    let right = minimal_sets(right);
    Ok(left.iter().all(|a| right.iter().all(|b| !a.is_disjoint(b))))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Past,
    Future,
}

/// Distinct time-0 candidate sets over all half-walks of length `<= depth`.
#[allow(clippy::too_many_arguments)]
fn half_windows(
    sys: &DynSystem,
    x: usize,
    eps: &Rational,
    delta: &Rational,
    depth: usize,
    side: Side,
    budget: usize,
    spent: &mut usize,
) -> Result<HashSet<PointSet>> {
    let space = sys.space();
    let n = sys.len();
    // Neighbours are recomputed from the metric here rather than taken from
    // the pseudo-orbit graph.
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|w| match side {
            Side::Past => (0..n).filter(|&p| space.d(sys.f(p), w) <= *delta).collect(),
            Side::Future => (0..n).filter(|&s| space.d(sys.f(w), s) <= *delta).collect(),
        })
        .collect();
    let balls: Vec<PointSet> = (0..n).map(|w| space.ball(w, eps)).collect();
    // `step` moves candidates one time unit along the walk; `back` returns
    // them to time 0.
    let (step, back): (Vec<usize>, Vec<usize>) = match side {
        Side::Past => (sys.inv().to_vec(), sys.fwd().to_vec()),
        Side::Future => (sys.fwd().to_vec(), sys.inv().to_vec()),
    };
    let order = sys.order();

    // Successors of a class depend only on the endpoint, the candidate set
    // and the depth modulo the order of f, and they shrink with the set. A
    // class containing one already seen with the same endpoint and phase
    // yields no new minimal time-0 sets, so it is not expanded.
    let mut family = HashSet::new();
    let mut seen: HashMap<(usize, u64), Vec<PointSet>> = HashMap::new();
    let mut frontier: Vec<(usize, PointSet)> = vec![(x, balls[x].clone())];
    seen.insert((x, 0), vec![balls[x].clone()]);
    let mut to_time_zero: Vec<usize> = (0..n).collect();
    for level in 0..=depth {
        for (_, c) in &frontier {
            family.insert(c.image(&to_time_zero));
        }
        if level == depth || frontier.is_empty() {
            break;
        }
        let phase = (level as u64 + 1) % order;
        let mut next = Vec::new();
        for (w, c) in &frontier {
            let moved = c.image(&step);
            for &v in &neighbours[*w] {
                let class = (v, moved.intersection(&balls[v]));
                *spent += 1;
                if *spent > budget {
                    return Err(Error::ExplosionGuard { budget });
                }
                let known = seen.entry((class.0, phase)).or_default();
                if !known.iter().any(|k| k.is_subset(&class.1)) {
                    known.push(class.1.clone());
                    next.push(class);
                }
            }
        }
        frontier = next;
        to_time_zero = (0..n).map(|p| to_time_zero[back[p]]).collect();
    }
    Ok(family)
}

fn minimal_sets(family: HashSet<PointSet>) -> Vec<PointSet> {
    let mut sets: Vec<PointSet> = family.into_iter().collect();
    sets.sort_by_key(|s| (s.len(), s.clone()));
    let mut kept: Vec<PointSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept
}

/// Literal enumeration of every walk of length `2 * half_width + 1` centred at
/// `x`, each checked with [`lift_exists`]. Exponential; meant for tiny cases.
pub fn brute_force_shadowable(
    sys: &DynSystem,
    x: usize,
    eps: &Rational,
    delta: &Rational,
    half_width: usize,
    budget: usize,
) -> Result<bool> {
    let space = sys.space();
    let n = sys.len();
    let succ: Vec<Vec<usize>> = (0..n).map(|u| (0..n).filter(|&v| space.d(sys.f(u), v) <= *delta).collect()).collect();
    let pred: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&u| space.d(sys.f(u), v) <= *delta).collect()).collect();
    let lefts = paths(&pred, x, half_width, budget)?;
    let rights = paths(&succ, x, half_width, budget)?;
    let mut checked = 0usize;
    for l in &lefts {
        for r in &rights {
            checked += 1;
            if checked > budget {
                return Err(Error::ExplosionGuard { budget });
            }
            let window: Vec<usize> = l.iter().rev().chain(r.iter().skip(1)).copied().collect();
            if lift_exists(sys, &window, eps, delta)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn paths(adj: &[Vec<usize>], start: usize, len: usize, budget: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![vec![start]];
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &out {
            for &v in &adj[*p.last().expect("nonempty")] {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
                if next.len() > budget {
                    return Err(Error::ExplosionGuard { budget });
                }
            }
        }
        out = next;
    }
    Ok(out)
}
