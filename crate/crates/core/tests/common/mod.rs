#![allow(dead_code)]

use shadowable::gallery::{self, GallerySpec, RandomMetric};
use shadowable::DynSystem;

pub struct Named {
    pub name: String,
    pub sys: DynSystem,
}

/// Seeded random systems, both metric families, sizes 3 through `max_n`.
pub fn random_corpus(count: u64, max_n: usize) -> Vec<Named> {
    (0..count)
        .map(|seed| {
            let n = 3 + (seed as usize % (max_n - 2));
            let metric = if seed % 2 == 0 { RandomMetric::EuclideanSquare } else { RandomMetric::RandomTree };
            let sys = gallery::random_system(n, 1000 + seed, metric).expect("random system");
            Named { name: format!("random(n={n}, seed={}, {metric:?})", 1000 + seed), sys }
        })
        .collect()
}

/// Small members of every gallery family.
pub fn gallery_corpus() -> Vec<Named> {
    let specs = [
        GallerySpec::IdentityCircle { n: 6 },
        GallerySpec::CircleRotation { n: 8, k: 1 },
        GallerySpec::CircleRotation { n: 8, k: 3 },
        GallerySpec::CircleRotation { n: 9, k: 3 },
        GallerySpec::Odometer { levels: 2 },
        GallerySpec::Odometer { levels: 3 },
        GallerySpec::CatMap { n: 3 },
        GallerySpec::CantorPlusInterval { level: 2, grid: 5 },
    ];
    specs.into_iter().map(|spec| Named { name: spec.name(), sys: spec.build().expect("gallery system") }).collect()
}

pub fn full_corpus(random: u64, max_n: usize) -> Vec<Named> {
    let mut all = random_corpus(random, max_n);
    all.extend(gallery_corpus());
    all
}
