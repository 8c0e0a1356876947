//! Subset automaton deciding `(eps, delta)`-shadowability.
//!
//! A state `(u, S)` records the current position `u` of a pseudo-orbit and the
//! set `S ⊆ B[u, eps]` of points whose orbit has tracked every position seen
//! so far. Initial states `(v, B[v, eps])` start a window anywhere, and the
//! edge `u -> u'` of the pseudo-orbit graph maps `S` to `f(S) ∩ B[u', eps]`.
//! A point `x` is shadowable iff no reachable state at `x` can reach a state
//! with `S = ∅`.

use std::collections::{HashMap, VecDeque};

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rational::Rational;

use super::{BadWindow, ShadowConfig, ShadowVerdict};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SubsetAutomaton {
    eps: Rational,
    delta: Rational,
    n: usize,
    sets: Vec<PointSet>,
    /// `(point, interned set)` per state.
    states: Vec<(u32, u32)>,
    /// Transition list per state (targets), in successor order.
    transitions: Vec<Vec<u32>>,
    /// BFS parent from the initial states; `NONE` for initial states.
    parent: Vec<u32>,
    depth: Vec<u32>,
    /// Next state on a shortest path to an empty state; `NONE` if not doomed
    /// (or already empty).
    toward_empty: Vec<u32>,
    distance_to_empty: Vec<u32>,
    shadowable: PointSet,
    /// Built without states because `delta` is below every positive `d(f(u), v)`.
    functional: bool,
}

impl SubsetAutomaton {
    pub fn build(sys: &DynSystem, eps: &Rational, delta: &Rational, config: &ShadowConfig) -> Result<Self> {
        super::check_scales(eps, delta)?;
        let n = sys.len();
        let mut automaton = Self {
            eps: *eps,
            delta: *delta,
            n,
            sets: Vec::new(),
            states: Vec::new(),
            transitions: Vec::new(),
            parent: Vec::new(),
            depth: Vec::new(),
            toward_empty: Vec::new(),
            distance_to_empty: Vec::new(),
            shadowable: PointSet::full(n),
            functional: false,
        };
        let below_threshold = sys.functional_threshold().is_none_or(|t| *delta < t);
        if config.short_circuit && below_threshold {
            automaton.functional = true;
            return Ok(automaton);
        }

        let graph = sys.pseudo_orbit_graph(delta);
        let mut set_ids: HashMap<PointSet, u32> = HashMap::new();
        let mut state_ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();

        let mut intern_set = |sets: &mut Vec<PointSet>, s: PointSet| -> u32 {
            if let Some(&id) = set_ids.get(&s) {
                return id;
            }
            let id = sets.len() as u32;
            sets.push(s.clone());
            set_ids.insert(s, id);
            id
        };

        let balls: Vec<PointSet> = (0..n).map(|v| sys.ball(v, eps)).collect();
        for (v, ball) in balls.iter().enumerate() {
            let sid = intern_set(&mut automaton.sets, ball.clone());
            let key = (v as u32, sid);
            if let std::collections::hash_map::Entry::Vacant(e) = state_ids.entry(key) {
                let id = automaton.states.len() as u32;
                e.insert(id);
                automaton.states.push(key);
                automaton.parent.push(NONE);
                automaton.depth.push(0);
                queue.push_back(id);
            }
        }
        if automaton.states.len() > config.state_cap {
            return Err(Error::StateCapExceeded { cap: config.state_cap, reached: automaton.states.len() });
        }

        while let Some(id) = queue.pop_front() {
            let (u, sid) = automaton.states[id as usize];
            let image = automaton.sets[sid as usize].image(sys.fwd());
            let mut out = Vec::with_capacity(graph.successors[u as usize].len());
            for &next in &graph.successors[u as usize] {
                let target_set = image.intersection(&balls[next]);
                let tid = intern_set(&mut automaton.sets, target_set);
                let key = (next as u32, tid);
                let target = match state_ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = automaton.states.len() as u32;
                        if automaton.states.len() >= config.state_cap {
                            return Err(Error::StateCapExceeded {
                                cap: config.state_cap,
                                reached: automaton.states.len() + 1,
                            });
                        }
                        state_ids.insert(key, t);
                        automaton.states.push(key);
                        automaton.parent.push(id);
                        automaton.depth.push(automaton.depth[id as usize] + 1);
                        queue.push_back(t);
                        t
                    }
                };
                out.push(target);
            }
            if automaton.transitions.len() <= id as usize {
                automaton.transitions.resize(id as usize + 1, Vec::new());
            }
            automaton.transitions[id as usize] = out;
        }
        automaton.transitions.resize(automaton.states.len(), Vec::new());
        automaton.close_doomed();
        Ok(automaton)
    }

    /// Backward closure from the empty-set states.
    fn close_doomed(&mut self) {
        let count = self.states.len();
        let mut reverse: Vec<Vec<u32>> = vec![Vec::new(); count];
        for (s, outs) in self.transitions.iter().enumerate() {
            for &t in outs {
                reverse[t as usize].push(s as u32);
            }
        }
        self.toward_empty = vec![NONE; count];
        self.distance_to_empty = vec![NONE; count];
        let mut queue = VecDeque::new();
        for (s, &(_, sid)) in self.states.iter().enumerate() {
            if self.sets[sid as usize].is_empty() {
                self.distance_to_empty[s] = 0;
                queue.push_back(s as u32);
            }
        }
        while let Some(t) = queue.pop_front() {
            for &s in &reverse[t as usize] {
                if self.distance_to_empty[s as usize] == NONE {
                    self.distance_to_empty[s as usize] = self.distance_to_empty[t as usize] + 1;
                    self.toward_empty[s as usize] = t;
                    queue.push_back(s);
                }
            }
        }
        let mut shadowable = PointSet::full(self.n);
        for (s, &(u, _)) in self.states.iter().enumerate() {
            if self.distance_to_empty[s] != NONE {
                shadowable.remove(u as usize);
            }
        }
        self.shadowable = shadowable;
    }

    pub fn eps(&self) -> Rational {
        self.eps
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// True when `delta` was below the functional threshold and no states were built.
    pub fn is_functional(&self) -> bool {
        self.functional
    }

    pub fn states(&self) -> impl Iterator<Item = (usize, &PointSet)> + '_ {
        self.states.iter().map(|&(u, sid)| (u as usize, &self.sets[sid as usize]))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(s, outs)| outs.iter().map(move |&t| (s, t as usize)))
    }

    pub fn state(&self, id: usize) -> (usize, &PointSet) {
        let (u, sid) = self.states[id];
        (u as usize, &self.sets[sid as usize])
    }

    pub fn has_empty_state(&self) -> bool {
        self.distance_to_empty.contains(&0)
    }

    pub fn shadowable_points(&self) -> &PointSet {
        &self.shadowable
    }

    pub fn verdict(&self, x: usize) -> ShadowVerdict {
        if self.shadowable.contains(x) {
            return ShadowVerdict { point: x, shadowable: true, witness: None };
        }
        let best = (0..self.states.len())
            .filter(|&s| self.states[s].0 as usize == x && self.distance_to_empty[s] != NONE)
            .min_by_key(|&s| (self.depth[s] + self.distance_to_empty[s], s))
            .expect("non-shadowable point has a doomed state");
        ShadowVerdict { point: x, shadowable: false, witness: Some(self.bad_window(best)) }
    }

    fn bad_window(&self, state: usize) -> BadWindow {
        let mut prefix = Vec::new();
        let mut cur = state as u32;
        while cur != NONE {
            prefix.push(self.states[cur as usize].0 as usize);
            cur = self.parent[cur as usize];
        }
        prefix.reverse();
        let center = prefix.len() - 1;
        let mut walk = prefix;
        let mut cur = self.toward_empty[state];
        while cur != NONE {
            walk.push(self.states[cur as usize].0 as usize);
            cur = self.toward_empty[cur as usize];
        }
        BadWindow { walk, center }
    }
}
