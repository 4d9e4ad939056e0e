//! Seeded fixtures shared by the benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sge_core::{Drawing, Instance, PathGraph, Point, RootedTree};

/// Random recursive tree, random spanning path, and distinct random integer
/// points in a square of side `4n`.
pub fn random_case(n: usize, seed: u64) -> (Instance, Drawing) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents = (0..n).map(|v| (v > 0).then(|| rng.random_range(0..v))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let side = 4 * n as i64;
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point::int(rng.random_range(0..side), rng.random_range(0..side));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let i = Instance::new(RootedTree::from_parents(parents), PathGraph::new(order));
    (i, Drawing::new(pts).expect("points are distinct"))
}
