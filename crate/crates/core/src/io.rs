//! The system JSON file format.
//!
//! ```json
//! {
//!   "name": "odometer_l2",
//!   "points": ["00", "10", "01", "11"],
//!   "metric": { "kind": "two_adic", "levels": 2 },
//!   "map": [1, 2, 3, 0]
//! }
//! ```
//!
//! Metric kinds: `matrix` (integer entries over a positive
//! `scale_denominator`), `euclidean` (`"p/q"` coordinate pairs; distances are
//! rounded up to multiples of `1/scale_denominator`, default 10^6), `circle`
//! (`n` points, arc metric) and `two_adic` (`2^levels` points, first
//! differing bit metric).

use std::path::Path;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::gallery::{self, GallerySpec, EUCLIDEAN_DENOMINATOR, MAX_POINTS};
use crate::metric::FiniteMetricSpace;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub name: String,
    pub points: Vec<String>,
    pub metric: MetricSpec,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    Matrix {
        scale_denominator: u64,
        entries: Vec<Vec<i64>>,
    },
    Euclidean {
        coords: Vec<(String, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale_denominator: Option<u64>,
    },
    Circle {
        n: usize,
    },
    TwoAdic {
        levels: u32,
    },
}

/// Failure to load a system file, split the way the CLI reports it.
#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    Invalid(Error),
}

impl From<Error> for LoadError {
    fn from(e: Error) -> Self {
        LoadError::Invalid(e)
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse_bytes(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> std::result::Result<Self, LoadError> {
        let text = std::fs::read(path).map_err(LoadError::Io)?;
        Ok(Self::parse_bytes(&text)?)
    }

    /// Pretty JSON with a trailing newline; byte-stable for equal inputs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("system files serialize");
        s.push('\n');
        s
    }

    pub fn space(&self) -> Result<FiniteMetricSpace> {
        let n = self.points.len();
        if n > MAX_POINTS {
            return Err(Error::BadParams(format!("{n} points exceeds the limit of {MAX_POINTS}")));
        }
        let space = match &self.metric {
            MetricSpec::Matrix { scale_denominator, entries } => {
                let denom = i64::try_from(*scale_denominator)
                    .ok()
                    .filter(|d| *d > 0)
                    .ok_or_else(|| Error::BadParams("scale_denominator must be a positive 63-bit integer".into()))?;
                if entries.len() != n {
                    return Err(Error::BadParams(format!("{} matrix rows for {n} points", entries.len())));
                }
                let matrix =
                    entries.iter().map(|row| row.iter().map(|&e| rational::ratio(e, denom)).collect()).collect();
                FiniteMetricSpace::validate(self.points.clone(), matrix)?
            }
            MetricSpec::Euclidean { coords, scale_denominator } => {
                if coords.len() != n {
                    return Err(Error::BadParams(format!("{} coordinates for {n} points", coords.len())));
                }
                let parsed = coords
                    .iter()
                    .map(|(x, y)| Ok((rational::parse(x)?, rational::parse(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                gallery::euclidean_space(
                    self.points.clone(),
                    &parsed,
                    scale_denominator.unwrap_or(EUCLIDEAN_DENOMINATOR),
                )?
            }
            MetricSpec::Circle { n: size } => {
                if *size != n {
                    return Err(Error::BadParams(format!("circle of {size} points but {n} labels")));
                }
                relabel(gallery::circle_space(*size)?, &self.points)?
            }
            MetricSpec::TwoAdic { levels } => {
                let space = gallery::two_adic_space(*levels)?;
                if space.len() != n {
                    return Err(Error::BadParams(format!(
                        "two_adic levels={levels} needs {} labels, got {n}",
                        space.len()
                    )));
                }
                relabel(space, &self.points)?
            }
        };
        Ok(space)
    }

    pub fn to_system(&self) -> Result<DynSystem> {
        let space = self.space()?;
        let mut labels: Vec<&String> = self.points.iter().collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadParams("duplicate point labels".into()));
        }
        DynSystem::new(space, self.map.clone())
    }

    /// File for a gallery system, choosing the most compact metric kind.
    pub fn from_gallery(spec: &GallerySpec) -> Result<Self> {
        let name = spec.name();
        match *spec {
            GallerySpec::CircleRotation { n, .. } | GallerySpec::IdentityCircle { n } => {
                let sys = spec.build()?;
                Ok(Self {
                    name,
                    points: sys.space().labels().to_vec(),
                    metric: MetricSpec::Circle { n },
                    map: sys.fwd().to_vec(),
                })
            }
            GallerySpec::Odometer { levels } => {
                let sys = spec.build()?;
                Ok(Self {
                    name,
                    points: sys.space().labels().to_vec(),
                    metric: MetricSpec::TwoAdic { levels },
                    map: sys.fwd().to_vec(),
                })
            }
            GallerySpec::RandomSystem { n, seed, metric } => {
                let draw = gallery::random_draw(n, seed, metric)?;
                let sys = &draw.system;
                let metric = match draw.coords {
                    Some(coords) => MetricSpec::Euclidean {
                        coords: coords.iter().map(|(x, y)| (rational::format(x), rational::format(y))).collect(),
                        scale_denominator: Some(EUCLIDEAN_DENOMINATOR),
                    },
                    None => matrix_spec(sys.space())?,
                };
                Ok(Self { name, points: sys.space().labels().to_vec(), metric, map: sys.fwd().to_vec() })
            }
            GallerySpec::CatMap { .. } | GallerySpec::CantorPlusInterval { .. } => {
                let sys = spec.build()?;
                Self::from_system(name, &sys)
            }
        }
    }

    /// Matrix-kind file for any system.
    pub fn from_system(name: String, sys: &DynSystem) -> Result<Self> {
        Ok(Self {
            name,
            points: sys.space().labels().to_vec(),
            metric: matrix_spec(sys.space())?,
            map: sys.fwd().to_vec(),
        })
    }
}

fn relabel(space: FiniteMetricSpace, labels: &[String]) -> Result<FiniteMetricSpace> {
    FiniteMetricSpace::validate(labels.to_vec(), space.matrix())
}

/// Integer matrix over the least common denominator.
fn matrix_spec(space: &FiniteMetricSpace) -> Result<MetricSpec> {
    let too_big = || Error::BadParams("distances need a common denominator beyond 63 bits".into());
    let mut denom: i64 = 1;
    for d in space.candidate_distances() {
        let g = denom.gcd(d.denom());
        denom = (denom / g).checked_mul(*d.denom()).ok_or_else(too_big)?;
    }
    let scale = Rational::from_integer(denom);
    let entries = space
        .matrix()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| {
                    let v = d * scale;
                    debug_assert!(v.is_integer());
                    Ok(v.to_integer())
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricSpec::Matrix { scale_denominator: denom as u64, entries })
}
