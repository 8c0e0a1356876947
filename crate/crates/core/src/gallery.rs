//! Deterministic generators for the standard example systems.
//!
//! Canonical scale pairs (see [`GallerySpec::canonical_scales`]):
//!
//! * circle rotation on `N` points: `delta = 1/N`, `eps = j/N` for `1 <= j <= N/2`;
//! * odometer with `L` levels: `eps = delta = 2^-j` for `0 <= j <= L`;
//! * cat map on `(Z/N)^2`: `eps = delta = 1/N`;
//! * Cantor endpoints plus an interval grid (identity map): `eps = delta = 1/(grid-1)`,
//!   the grid step. At this gap the interval block absorbs every Cantor point
//!   within one step of it; the remaining Cantor points form small separated
//!   clusters.

use num_integer::Roots;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::{self, Rational};

/// Hard cap on generated point counts.
pub const MAX_POINTS: usize = 4096;

/// Denominator used when rounding Euclidean distances up to rationals.
pub const EUCLIDEAN_DENOMINATOR: u64 = 1_000_000;
/// Random Euclidean points live on the integer grid `[0, COORD_GRID]^2 / COORD_GRID`.
pub const COORD_GRID: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomMetric {
    EuclideanSquare,
    RandomTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GallerySpec {
    CircleRotation {
        n: usize,
        k: usize,
    },
    /// Identity of a circle grid.
    IdentityCircle {
        n: usize,
    },
    Odometer {
        levels: u32,
    },
    CatMap {
        n: usize,
    },
    /// Identity of the Cantor-endpoints-plus-interval space.
    CantorPlusInterval {
        level: u32,
        grid: usize,
    },
    RandomSystem {
        n: usize,
        seed: u64,
        metric: RandomMetric,
    },
}

impl GallerySpec {
    pub fn build(&self) -> Result<DynSystem> {
        match *self {
            GallerySpec::CircleRotation { n, k } => circle_rotation(n, k),
            GallerySpec::IdentityCircle { n } => circle_rotation(n, 0),
            GallerySpec::Odometer { levels } => odometer(levels),
            GallerySpec::CatMap { n } => cat_map(n),
            GallerySpec::CantorPlusInterval { level, grid } => Ok(identity_on(cantor_plus_interval(level, grid)?)),
            GallerySpec::RandomSystem { n, seed, metric } => random_system(n, seed, metric),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            GallerySpec::CircleRotation { n, k } => format!("circle_rotation_n{n}_k{k}"),
            GallerySpec::IdentityCircle { n } => format!("identity_circle_n{n}"),
            GallerySpec::Odometer { levels } => format!("odometer_l{levels}"),
            GallerySpec::CatMap { n } => format!("cat_map_n{n}"),
            GallerySpec::CantorPlusInterval { level, grid } => format!("cantor_plus_interval_l{level}_g{grid}"),
            GallerySpec::RandomSystem { n, seed, metric } => {
                let m = match metric {
                    RandomMetric::EuclideanSquare => "euclidean",
                    RandomMetric::RandomTree => "tree",
                };
                format!("random_{m}_n{n}_s{seed}")
            }
        }
    }

    /// Documented `(eps, delta)` pairs for the generator.
    pub fn canonical_scales(&self) -> Vec<(Rational, Rational)> {
        match *self {
            GallerySpec::CircleRotation { n, .. } | GallerySpec::IdentityCircle { n } => {
                let step = rational::ratio(1, n as i64);
                (1..=n / 2).map(|j| (rational::ratio(j as i64, n as i64), step)).collect()
            }
            GallerySpec::Odometer { levels } => (0..=levels)
                .map(|j| {
                    let r = rational::ratio(1, 1i64 << j);
                    (r, r)
                })
                .collect(),
            GallerySpec::CatMap { n } => {
                let r = rational::ratio(1, n as i64);
                vec![(r, r)]
            }
            GallerySpec::CantorPlusInterval { grid, .. } => {
                let r = cantor_merge_gap(grid);
                vec![(r, r)]
            }
            GallerySpec::RandomSystem { .. } => Vec::new(),
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_POINTS {
        return Err(Error::BadParams(format!("{n} points exceeds the limit of {MAX_POINTS}")));
    }
    Ok(())
}

fn circle_distance(i: usize, j: usize, n: usize) -> Rational {
    let diff = i.abs_diff(j);
    rational::ratio(diff.min(n - diff) as i64, n as i64)
}

pub fn circle_space(n: usize) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::BadParams(format!("circle needs n >= 2, got {n}")));
    }
    check_size(n)?;
    let matrix = (0..n).map(|i| (0..n).map(|j| circle_distance(i, j, n)).collect()).collect();
    FiniteMetricSpace::validate((0..n).map(|i| i.to_string()).collect(), matrix)
}

/// `i -> i + k mod n` on the `n`-point circle with the arc-length metric.
pub fn circle_rotation(n: usize, k: usize) -> Result<DynSystem> {
    if k >= n.max(1) {
        return Err(Error::BadParams(format!("rotation needs 0 <= k < n, got k={k}, n={n}")));
    }
    let space = circle_space(n)?;
    DynSystem::new(space, (0..n).map(|i| (i + k) % n).collect())
}

pub fn identity_on(space: FiniteMetricSpace) -> DynSystem {
    DynSystem::identity(space)
}

/// Labels list bit 0 (the bit flipped by every step) first.
pub fn two_adic_space(levels: u32) -> Result<FiniteMetricSpace> {
    if levels == 0 || levels > 12 {
        return Err(Error::BadParams(format!("odometer needs 1 <= levels <= 12, got {levels}")));
    }
    let n = 1usize << levels;
    let labels = (0..n).map(|i| (0..levels).map(|b| if i >> b & 1 == 1 { '1' } else { '0' }).collect()).collect();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::from_integer(0)
                    } else {
                        rational::ratio(1, 1i64 << (i ^ j).trailing_zeros())
                    }
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::validate(labels, matrix)
}

/// Binary adding machine: `+1` with carry on `levels`-bit strings.
pub fn odometer(levels: u32) -> Result<DynSystem> {
    let space = two_adic_space(levels)?;
    let n = space.len();
    DynSystem::new(space, (0..n).map(|i| (i + 1) % n).collect())
}

/// `(x, y) -> (2x + y, x + y) mod n` with the max of the two circle metrics.
pub fn cat_map(n: usize) -> Result<DynSystem> {
    if n < 2 {
        return Err(Error::BadParams(format!("cat map needs n >= 2, got {n}")));
    }
    check_size(n.saturating_mul(n))?;
    let count = n * n;
    let labels = (0..count).map(|i| format!("{},{}", i / n, i % n)).collect();
    let matrix = (0..count)
        .map(|a| (0..count).map(|b| circle_distance(a / n, b / n, n).max(circle_distance(a % n, b % n, n))).collect())
        .collect();
    let space = FiniteMetricSpace::validate(labels, matrix)?;
    let fwd = (0..count)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            ((2 * x + y) % n) * n + (x + y) % n
        })
        .collect();
    DynSystem::new(space, fwd)
}

pub fn cantor_merge_gap(grid: usize) -> Rational {
    rational::ratio(1, grid as i64 - 1)
}

/// Left endpoints of the level-`level` ternary Cantor intervals, the point 1,
/// and `grid` equally spaced points on `[1, 2]` (1 shared), in increasing order.
pub fn cantor_plus_interval_points(level: u32, grid: usize) -> Result<Vec<Rational>> {
    if level == 0 || grid < 2 {
        return Err(Error::BadParams(format!("need level >= 1 and grid >= 2, got level={level}, grid={grid}")));
    }
    if level > 10 {
        return Err(Error::BadParams(format!("level {level} too deep (max 10)")));
    }
    check_size((1usize << level) + grid)?;
    let denom = 3i64.pow(level);
    let mut points: Vec<Rational> = (0..1i64 << level)
        .map(|mask| {
            let numer: i64 = (0..level).filter(|b| mask >> b & 1 == 1).map(|b| 2 * 3i64.pow(level - 1 - b)).sum();
            rational::ratio(numer, denom)
        })
        .collect();
    points.extend((0..grid).map(|i| Rational::from_integer(1) + rational::ratio(i as i64, grid as i64 - 1)));
    points.sort();
    points.dedup();
    Ok(points)
}

pub fn cantor_plus_interval(level: u32, grid: usize) -> Result<FiniteMetricSpace> {
    let points = cantor_plus_interval_points(level, grid)?;
    let labels = points.iter().map(rational::format).collect();
    let matrix = points.iter().map(|a| points.iter().map(|b| (a - b).abs()).collect()).collect();
    FiniteMetricSpace::validate(labels, matrix)
}

/// `ceil(D * sqrt(dx^2 + dy^2)) / D` for rational offsets, exact.
pub fn euclidean_distance_ceil(dx: &Rational, dy: &Rational, denominator: u64) -> Result<Rational> {
    let overflow = || Error::Parse("coordinate magnitudes too large for exact distances".into());
    // dist^2 = N / M with N, M coprime-ish integers.
    let sq = dx.checked_mul(dx).and_then(|a| dy.checked_mul(dy).and_then(|b| a.checked_add(&b)));
    let sq = sq.ok_or_else(overflow)?;
    let (num, den) = (*sq.numer() as u128, *sq.denom() as u128);
    let d = denominator as u128;
    // D * sqrt(N/M) = sqrt(D^2 N M) / M
    let q = d.checked_mul(d).and_then(|v| v.checked_mul(num)).and_then(|v| v.checked_mul(den)).ok_or_else(overflow)?;
    let floor = q.sqrt();
    let ceil_sqrt = if floor * floor < q { floor + 1 } else { floor };
    let t = ceil_sqrt.div_ceil(den);
    let t = i64::try_from(t).map_err(|_| overflow())?;
    let denom = i64::try_from(denominator).map_err(|_| overflow())?;
    Ok(rational::ratio(t, denom))
}

pub fn euclidean_space(
    labels: Vec<String>,
    coords: &[(Rational, Rational)],
    denominator: u64,
) -> Result<FiniteMetricSpace> {
    if denominator == 0 {
        return Err(Error::BadParams("scale_denominator must be positive".into()));
    }
    check_size(coords.len())?;
    let mut matrix = vec![vec![Rational::from_integer(0); coords.len()]; coords.len()];
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let overflow = || Error::Parse("coordinate magnitudes too large for exact distances".into());
            let dx = coords[i].0.checked_sub(&coords[j].0).ok_or_else(overflow)?;
            let dy = coords[i].1.checked_sub(&coords[j].1).ok_or_else(overflow)?;
            let d = euclidean_distance_ceil(&dx, &dy, denominator)?;
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    FiniteMetricSpace::validate(labels, matrix)
}

/// Coordinates sampled by [`random_system`] for the Euclidean metric.
pub fn random_coords(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Rational, Rational)> {
    let mut used = std::collections::HashSet::new();
    let mut coords = Vec::with_capacity(n);
    while coords.len() < n {
        let a = rng.gen_range(0..=COORD_GRID);
        let b = rng.gen_range(0..=COORD_GRID);
        if used.insert((a, b)) {
            coords.push((rational::ratio(a, COORD_GRID), rational::ratio(b, COORD_GRID)));
        }
    }
    coords
}

/// Everything needed to re-serialize a random system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomDraw {
    pub coords: Option<Vec<(Rational, Rational)>>,
    pub system: DynSystem,
}

pub fn random_draw(n: usize, seed: u64, metric: RandomMetric) -> Result<RandomDraw> {
    if n == 0 {
        return Err(Error::BadParams("random system needs n >= 1".into()));
    }
    check_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let (space, coords) = match metric {
        RandomMetric::EuclideanSquare => {
            let coords = random_coords(n, &mut rng);
            (euclidean_space(labels, &coords, EUCLIDEAN_DENOMINATOR)?, Some(coords))
        }
        RandomMetric::RandomTree => (random_tree_space(labels, &mut rng)?, None),
    };
    let mut fwd: Vec<usize> = (0..n).collect();
    fwd.shuffle(&mut rng);
    Ok(RandomDraw { coords, system: DynSystem::new(space, fwd)? })
}

pub fn random_system(n: usize, seed: u64, metric: RandomMetric) -> Result<DynSystem> {
    Ok(random_draw(n, seed, metric)?.system)
}

/// Path metric of a random weighted tree; node `i > 0` hangs off a uniformly
/// chosen earlier node with edge weight in `{1/10, ..., 10/10}`.
fn random_tree_space(labels: Vec<String>, rng: &mut ChaCha8Rng) -> Result<FiniteMetricSpace> {
    let n = labels.len();
    let mut dist = vec![vec![Rational::from_integer(0); n]; n];
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        let w = rational::ratio(rng.gen_range(1..=10), 10);
        for j in 0..i {
            let d = dist[parent][j] + w;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    FiniteMetricSpace::validate(labels, dist)
}
