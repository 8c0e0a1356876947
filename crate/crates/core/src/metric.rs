//! Finite metric spaces with exact rational distances.

use num_traits::{CheckedAdd, Signed, Zero};
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rational::Rational;

/// `n` labeled points and a validated distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
    n: usize,
    /// Sorted distinct matrix entries, starting with 0.
    candidates: Vec<Rational>,
}

impl FiniteMetricSpace {
    /// Checks the metric axioms and builds the space.
    ///
    /// Violations are reported for the first offending pair or triple in
    /// lexicographic index order.
    pub fn validate(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if labels.len() != n {
            return Err(Error::BadParams(format!("{} labels for {n} points", labels.len())));
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), expected: n });
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(Error::NonZeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::NonSymmetric { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !matrix[i][j].is_positive() {
                    return Err(Error::NegativeOrZeroOffDiagonal { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let Some(via) = matrix[i][j].checked_add(&matrix[j][k]) else {
                        return Err(Error::Overflow { i, j, k });
                    };
                    if matrix[i][k] > via {
                        return Err(Error::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        let dist: Vec<Rational> = matrix.into_iter().flatten().collect();
        let mut candidates = dist.clone();
        candidates.sort();
        candidates.dedup();
        Ok(Self { labels, dist, n, candidates })
    }

    /// Same as [`validate`](Self::validate) with labels `"0".."n-1"`.
    pub fn validate_unlabeled(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::validate(labels, matrix)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> Rational {
        self.dist[i * self.n + j]
    }

    #[inline]
    pub(crate) fn d_ref(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.n + j]
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Sorted distinct distances, including 0.
    pub fn candidate_distances(&self) -> &[Rational] {
        &self.candidates
    }

    pub fn min_positive_distance(&self) -> Option<Rational> {
        self.candidates.get(1).copied()
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { index: x, n: self.n })
        }
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// Closed ball `{y : d(x, y) <= r}`.
    pub fn ball(&self, x: usize, r: &Rational) -> PointSet {
        let row = &self.dist[x * self.n..(x + 1) * self.n];
        PointSet::from_indices(self.n, (0..self.n).filter(|&y| row[y] <= *r))
    }

    /// Closed `r`-neighbourhood of a set.
    pub fn ball_around(&self, set: &PointSet, r: &Rational) -> PointSet {
        let mut out = PointSet::empty(self.n);
        for x in set.iter() {
            out.union_with(&self.ball(x, r));
        }
        out
    }

    pub fn proximity_graph(&self, gap: &Rational) -> ProximityGraph {
        let mut adjacency = vec![Vec::new(); self.n];
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.d_ref(u, v) <= gap {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        ProximityGraph { adjacency }
    }

    /// Connected components of the proximity graph at `gap`, each sorted,
    /// listed in order of their smallest point.
    pub fn components(&self, gap: &Rational) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.d_ref(u, v) <= gap {
                    uf.union(u, v);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut slot_of_root = vec![usize::MAX; self.n];
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for (x, &root) in labels.iter().enumerate() {
            if slot_of_root[root] == usize::MAX {
                slot_of_root[root] = parts.len();
                parts.push(Vec::new());
            }
            parts[slot_of_root[root]].push(x);
        }
        parts
    }

    pub fn component_of(&self, x: usize, gap: &Rational) -> PointSet {
        let part = self.components(gap).into_iter().find(|c| c.contains(&x)).unwrap_or_default();
        PointSet::from_indices(self.n, part)
    }

    /// Points whose `gap`-component is a singleton.
    pub fn deg_points(&self, gap: &Rational) -> PointSet {
        PointSet::from_indices(self.n, (0..self.n).filter(|&x| (0..self.n).all(|y| y == x || self.d_ref(x, y) > gap)))
    }

    pub fn set_distance(&self, a: &PointSet, b: &PointSet) -> Result<Rational> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyArgument("set_distance needs nonempty sets"));
        }
        let mut best: Option<Rational> = None;
        for x in a.iter() {
            for y in b.iter() {
                let d = self.d(x, y);
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
        Ok(best.expect("nonempty"))
    }

    pub fn diameter(&self, a: &PointSet) -> Result<Rational> {
        if a.is_empty() {
            return Err(Error::EmptyArgument("diameter needs a nonempty set"));
        }
        let pts = a.to_vec();
        let mut best = Rational::zero();
        for (idx, &x) in pts.iter().enumerate() {
            for &y in &pts[idx + 1..] {
                best = best.max(self.d(x, y));
            }
        }
        Ok(best)
    }

    pub fn space_diameter(&self) -> Rational {
        *self.candidates.last().expect("nonempty space")
    }
}

/// Undirected graph joining points at distance at most the gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityGraph {
    pub adjacency: Vec<Vec<usize>>,
}

impl ProximityGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }
}
