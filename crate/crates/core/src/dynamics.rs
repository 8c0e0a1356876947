//! Permutations of finite metric spaces and their orbit-level invariants.

use num_integer::Integer;
use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::pointset::PointSet;
use crate::rational::Rational;

/// A homeomorphism of a finite metric space, i.e. a permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynSystem {
    space: FiniteMetricSpace,
    fwd: Vec<usize>,
    inv: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    cycle_of: Vec<usize>,
    pos_in_cycle: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Extremes of `d(f^n(x), f^n(y))` over one joint period.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairOrbitSummary {
    pub min_dist: Rational,
    pub max_dist: Rational,
    pub period: u64,
}

/// Directed graph with `u -> v` iff `d(f(u), v) <= delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoOrbitGraph {
    pub delta: Rational,
    pub successors: Vec<Vec<usize>>,
    pub predecessors: Vec<Vec<usize>>,
}

impl PseudoOrbitGraph {
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.successors[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn is_subgraph_of(&self, other: &PseudoOrbitGraph) -> bool {
        self.successors.iter().enumerate().all(|(u, succ)| succ.iter().all(|&v| other.has_edge(u, v)))
    }

    /// Shortest cycle through `x` as a vertex sequence starting at `x`
    /// (the closing return to `x` is implicit).
    pub fn shortest_cycle_through(&self, x: usize) -> Option<Vec<usize>> {
        let n = self.successors.len();
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &v in &self.successors[x] {
            if v == x {
                return Some(vec![x]);
            }
            if parent[v] == usize::MAX {
                parent[v] = x;
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.successors[u] {
                if v == x {
                    let mut path = vec![u];
                    let mut cur = u;
                    while parent[cur] != x {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.push(x);
                    path.reverse();
                    return Some(path);
                }
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Strongly connected components of the pseudo-orbit graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainClasses {
    /// Each class sorted; classes ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Whether the point's class carries a cycle.
    pub chain_recurrent: Vec<bool>,
}

impl DynSystem {
    pub fn new(space: FiniteMetricSpace, fwd: Vec<usize>) -> Result<Self> {
        let n = space.len();
        if fwd.len() != n {
            return Err(Error::NotAPermutation { reason: format!("map has {} entries for {n} points", fwd.len()) });
        }
        let mut inv = vec![usize::MAX; n];
        for (x, &y) in fwd.iter().enumerate() {
            if y >= n {
                return Err(Error::NotAPermutation { reason: format!("index {y} out of range") });
            }
            if inv[y] != usize::MAX {
                return Err(Error::NotAPermutation { reason: format!("index {y} repeated") });
            }
            inv[y] = x;
        }
        let mut cycle_of = vec![usize::MAX; n];
        let mut pos_in_cycle = vec![0; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            loop {
                cycle_of[x] = cycles.len();
                pos_in_cycle[x] = cycle.len();
                cycle.push(x);
                x = fwd[x];
                if x == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Ok(Self { space, fwd, inv, cycles, cycle_of, pos_in_cycle })
    }

    pub fn identity(space: FiniteMetricSpace) -> Self {
        let fwd = (0..space.len()).collect();
        Self::new(space, fwd).expect("identity is a permutation")
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn fwd(&self) -> &[usize] {
        &self.fwd
    }

    pub fn inv(&self) -> &[usize] {
        &self.inv
    }

    #[inline]
    pub fn f(&self, x: usize) -> usize {
        self.fwd[x]
    }

    #[inline]
    pub fn f_inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// `f^k(x)` for any integer `k`.
    pub fn iterate(&self, x: usize, k: i64) -> usize {
        let cycle = &self.cycles[self.cycle_of[x]];
        let len = cycle.len() as i64;
        let pos = (self.pos_in_cycle[x] as i64 + k.rem_euclid(len)) % len;
        cycle[pos as usize]
    }

    pub fn period(&self, x: usize) -> usize {
        self.cycles[self.cycle_of[x]].len()
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Order of the permutation (lcm of cycle lengths), saturating at `u64::MAX`.
    pub fn order(&self) -> u64 {
        self.cycles.iter().fold(1u64, |acc, c| {
            let len = c.len() as u64;
            let g = acc.gcd(&len);
            (acc / g).saturating_mul(len)
        })
    }

    /// The cycle of `x`, starting at `x`, and its length.
    pub fn orbit(&self, x: usize) -> (Vec<usize>, usize) {
        let cycle = &self.cycles[self.cycle_of[x]];
        let p = self.pos_in_cycle[x];
        let list: Vec<usize> = cycle[p..].iter().chain(&cycle[..p]).copied().collect();
        let len = list.len();
        (list, len)
    }

    /// On a permutation every point is periodic, so the omega-limit set is the orbit.
    pub fn omega_limit(&self, x: usize) -> PointSet {
        PointSet::from_indices(self.len(), self.cycles[self.cycle_of[x]].iter().copied())
    }

    pub fn pair_orbit_extremes(&self, x: usize, y: usize) -> PairOrbitSummary {
        let px = self.period(x) as u64;
        let py = self.period(y) as u64;
        let period = px.lcm(&py);
        let (mut a, mut b) = (x, y);
        let mut min_dist = self.space.d(a, b);
        let mut max_dist = min_dist;
        for _ in 1..period {
            a = self.fwd[a];
            b = self.fwd[b];
            let d = self.space.d_ref(a, b);
            if *d < min_dist {
                min_dist = *d;
            }
            if *d > max_dist {
                max_dist = *d;
            }
        }
        PairOrbitSummary { min_dist, max_dist, period }
    }

    /// Smallest orbit-wise distance over distinct pairs, with the first
    /// pair (lexicographically) attaining it.
    pub fn distality_margin(&self) -> Result<(Rational, (usize, usize))> {
        let n = self.len();
        if n < 2 {
            return Err(Error::SingletonSpace);
        }
        let mut best: Option<(Rational, (usize, usize))> = None;
        for x in 0..n {
            for y in x + 1..n {
                let m = self.pair_orbit_extremes(x, y).min_dist;
                if best.as_ref().is_none_or(|(b, _)| m < *b) {
                    best = Some((m, (x, y)));
                }
            }
        }
        Ok(best.expect("n >= 2"))
    }

    /// Per-pair orbit maxima, computed once for repeated modulus queries.
    pub fn pair_maxima(&self) -> PairMaxima {
        let n = self.len();
        let mut max = vec![Rational::zero(); n * n];
        for x in 0..n {
            for y in x + 1..n {
                let m = self.pair_orbit_extremes(x, y).max_dist;
                max[x * n + y] = m;
                max[y * n + x] = m;
            }
        }
        PairMaxima { n, max }
    }

    /// Largest candidate distance `beta` such that `d(x, y) <= beta` keeps
    /// the whole pair orbit within `alpha`. Zero means no positive candidate
    /// qualifies.
    pub fn equicontinuity_modulus(&self, alpha: &Rational) -> Rational {
        self.pair_maxima().equicontinuity_modulus(&self.space, alpha)
    }

    /// One-step modulus `max { d(g(a), g(b)) : d(a, b) <= t }` with `g = f` or `f^-1`.
    pub fn continuity_modulus(&self, direction: Direction, t: &Rational) -> Rational {
        let map = match direction {
            Direction::Forward => &self.fwd,
            Direction::Inverse => &self.inv,
        };
        let n = self.len();
        let mut best = Rational::zero();
        for a in 0..n {
            for b in a + 1..n {
                if self.space.d_ref(a, b) <= t {
                    best = best.max(self.space.d(map[a], map[b]));
                }
            }
        }
        best
    }

    pub fn is_isometry(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| self.space.d_ref(a, b) == self.space.d_ref(self.fwd[a], self.fwd[b])))
    }

    /// Minimal `k >= 1` with `f^k(B[x, eps])` meeting `B[x, eps]`, and a point `y`
    /// of the ball whose `k`-th image returns to it.
    pub fn nonwandering_return_witness(&self, x: usize, eps: &Rational) -> (usize, usize) {
        let ball = self.space.ball(x, eps);
        let pts = ball.to_vec();
        for k in 1..=self.period(x) {
            if let Some(&y) = pts.iter().find(|&&y| ball.contains(self.iterate(y, k as i64))) {
                return (k, y);
            }
        }
        unreachable!("x returns to itself after one period")
    }

    pub fn nonwandering_return(&self, x: usize, eps: &Rational) -> usize {
        self.nonwandering_return_witness(x, eps).0
    }

    /// Sorted distinct values of `d(f(u), v)`.
    pub fn candidate_deltas(&self) -> Vec<Rational> {
        let n = self.len();
        let mut out: Vec<Rational> =
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| self.space.d(self.fwd[u], v)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Below this scale pseudo-orbits are genuine orbits.
    pub fn functional_threshold(&self) -> Option<Rational> {
        self.candidate_deltas().get(1).copied()
    }

    pub fn pseudo_orbit_graph(&self, delta: &Rational) -> PseudoOrbitGraph {
        let n = self.len();
        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for u in 0..n {
            let fu = self.fwd[u];
            for v in 0..n {
                if self.space.d_ref(fu, v) <= delta {
                    successors[u].push(v);
                    predecessors[v].push(u);
                }
            }
        }
        PseudoOrbitGraph { delta: *delta, successors, predecessors }
    }

    pub fn chain_classes(&self, delta: &Rational) -> ChainClasses {
        let g = self.pseudo_orbit_graph(delta);
        let n = self.len();
        let mut graph = DiGraph::<(), ()>::with_capacity(n, g.edge_count());
        let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
        for (u, succ) in g.successors.iter().enumerate() {
            for &v in succ {
                graph.add_edge(nodes[u], nodes[v], ());
            }
        }
        let mut classes: Vec<Vec<usize>> = tarjan_scc(&graph)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|i| i.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        let chain_recurrent = (0..n).map(|x| classes[class_of[x]].len() > 1 || g.has_edge(x, x)).collect();
        ChainClasses { classes, class_of, chain_recurrent }
    }

    pub fn is_minimal(&self) -> bool {
        self.cycles.len() == 1
    }

    /// Same space with the map `f^k`.
    pub fn power(&self, k: i64) -> Result<DynSystem> {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let fwd = (0..self.len()).map(|x| self.iterate(x, k)).collect();
        DynSystem::new(self.space.clone(), fwd)
    }

    pub fn ball(&self, x: usize, r: &Rational) -> PointSet {
        self.space.ball(x, r)
    }
}

/// Cached `max_n d(f^n(x), f^n(y))` for all pairs.
#[derive(Clone, Debug)]
pub struct PairMaxima {
    n: usize,
    max: Vec<Rational>,
}

impl PairMaxima {
    pub fn get(&self, x: usize, y: usize) -> Rational {
        self.max[x * self.n + y]
    }

    pub fn equicontinuity_modulus(&self, space: &FiniteMetricSpace, alpha: &Rational) -> Rational {
        self.modulus_where(space, |m| m > alpha)
    }

    /// Largest candidate distance `beta` with every pair at distance `<= beta`
    /// having orbit maximum strictly below `bound` (`None` = unbounded).
    pub fn strict_modulus(&self, space: &FiniteMetricSpace, bound: Option<&Rational>) -> Rational {
        match bound {
            None => space.space_diameter(),
            Some(bound) => self.modulus_where(space, |m| m >= bound),
        }
    }

    /// Largest candidate distance strictly below the closest pair whose
    /// orbit maximum is `bad`.
    fn modulus_where(&self, space: &FiniteMetricSpace, bad: impl Fn(&Rational) -> bool) -> Rational {
        let mut first_bad: Option<Rational> = None;
        for x in 0..self.n {
            for y in x..self.n {
                if bad(&self.max[x * self.n + y]) {
                    let d = space.d(x, y);
                    if first_bad.is_none_or(|b| d < b) {
                        first_bad = Some(d);
                    }
                }
            }
        }
        let cands = space.candidate_distances();
        match first_bad {
            None => space.space_diameter(),
            Some(bad) => {
                let idx = cands.partition_point(|c| *c < bad);
                idx.checked_sub(1).map(|i| cands[i]).unwrap_or_else(Rational::zero)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::circle_space;
    use crate::rational::{int, ratio};

    fn rotation(n: i64, k: usize) -> DynSystem {
        let fwd = (0..n as usize).map(|i| (i + k) % n as usize).collect();
        DynSystem::new(circle_space(n), fwd).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(matches!(DynSystem::new(circle_space(3), vec![0, 0, 1]), Err(Error::NotAPermutation { .. })));
        assert!(matches!(DynSystem::new(circle_space(3), vec![0, 1]), Err(Error::NotAPermutation { .. })));
        assert!(matches!(DynSystem::new(circle_space(3), vec![0, 1, 7]), Err(Error::NotAPermutation { .. })));
    }

    #[test]
    fn orbits_and_powers() {
        let id = rotation(4, 0);
        assert_eq!(id.orbit(2), (vec![2], 1));
        assert_eq!(rotation(4, 2).orbit(0), (vec![0, 2], 2));
        assert_eq!(rotation(4, 1).omega_limit(0).len(), 4);
        let r = rotation(4, 1);
        assert_eq!(r.power(2).unwrap(), rotation(4, 2));
        assert_eq!(r.power(1).unwrap(), r);
        assert_eq!(r.power(-1).unwrap().fwd(), r.inv());
        assert_eq!(r.power(0), Err(Error::ZeroExponent));
        assert_eq!(r.iterate(1, -3), 2);
        assert_eq!(rotation(6, 2).order(), 3);
    }

    #[test]
    fn minimality() {
        assert!(!rotation(4, 0).is_minimal());
        assert!(!rotation(4, 2).is_minimal());
        assert!(rotation(5, 2).is_minimal());
    }

    #[test]
    fn isometric_pairs_and_moduli() {
        let r = rotation(6, 1);
        let s = r.pair_orbit_extremes(0, 2);
        assert_eq!((s.min_dist, s.max_dist), (ratio(1, 3), ratio(1, 3)));
        assert_eq!(r.pair_orbit_extremes(3, 3).max_dist, int(0));
        assert_eq!(r.distality_margin().unwrap(), (ratio(1, 6), (0, 1)));
        assert_eq!(r.equicontinuity_modulus(&ratio(1, 4)), ratio(1, 6));
        assert_eq!(r.equicontinuity_modulus(&int(1)), ratio(1, 2));
        assert_eq!(r.continuity_modulus(Direction::Forward, &ratio(1, 4)), ratio(1, 6));
        assert_eq!(r.continuity_modulus(Direction::Inverse, &int(0)), int(0));
        assert!(r.is_isometry());
    }

    #[test]
    fn singleton_margin_errors() {
        let one = DynSystem::identity(FiniteMetricSpace::validate_unlabeled(vec![vec![int(0)]]).unwrap());
        assert_eq!(one.distality_margin(), Err(Error::SingletonSpace));
    }

    #[test]
    fn returns_and_graphs() {
        let r = rotation(8, 3);
        assert_eq!(r.nonwandering_return(0, &int(0)), 8);
        assert_eq!(r.nonwandering_return(0, &ratio(1, 2)), 1);
        assert_eq!(rotation(4, 0).nonwandering_return(1, &int(0)), 1);

        let id = rotation(4, 0);
        let g0 = id.pseudo_orbit_graph(&int(0));
        assert_eq!(g0.successors, vec![vec![0], vec![1], vec![2], vec![3]]);
        let g = id.pseudo_orbit_graph(&ratio(1, 4));
        assert_eq!(g.successors[0], vec![0, 1, 3]);
        assert!(g0.is_subgraph_of(&g));
        assert_eq!(id.pseudo_orbit_graph(&ratio(1, 2)).edge_count(), 16);
        assert_eq!(g.shortest_cycle_through(2), Some(vec![2]));
        assert_eq!(rotation(4, 1).pseudo_orbit_graph(&int(0)).shortest_cycle_through(1), Some(vec![1, 2, 3, 0]));
    }

    #[test]
    fn chain_classes_on_circle() {
        let r = rotation(4, 2);
        let c = r.chain_classes(&int(0));
        assert_eq!(c.classes, vec![vec![0, 2], vec![1, 3]]);
        assert!(c.chain_recurrent.iter().all(|&b| b));
        assert_eq!(r.chain_classes(&ratio(1, 4)).classes.len(), 1);
    }
}
