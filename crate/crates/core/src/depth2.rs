//! Simultaneous embedding of a tree of depth at most two and a path.
//!
//! The root sits at the origin. Each root subtree gets its own wedge of the
//! right half-plane between slopes `1` and `-1`, and every other vertex gets
//! an x-rank: the path leaving the root on one side is laid out left to right,
//! the other side right to left beyond it.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{orient, Orientation, Point, Scalar, Wedge};
use crate::model::{tree_depth, validate_instance, Drawing, Instance, ModelError, PathGraph, RootedTree, VertexId, Violation};
use crate::planarity::{check_simultaneous, PlanarityError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Depth2Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Planarity(#[from] PlanarityError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// Wedges and x-ranks chosen for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgePlan {
    pub root: VertexId,
    /// Number of root subtrees.
    pub t: usize,
    /// `(lower slope, upper slope)` per wedge, top wedge first.
    pub wedges: Vec<(Scalar, Scalar)>,
    /// Wedge index of every non-root vertex.
    pub wedge_of: Vec<Option<usize>>,
    /// x-rank in `1..n` of every non-root vertex.
    pub rank: Vec<Option<usize>>,
    /// First vertices after the root on the two sides of the path.
    pub u: Option<VertexId>,
    pub v: Option<VertexId>,
    /// Vertices of the two sides in path order away from the root.
    pub p1: Vec<VertexId>,
    pub p2: Vec<VertexId>,
}

pub fn plan_depth2(i: &Instance) -> Result<WedgePlan, Depth2Error> {
    let report = validate_instance(i);
    if let Some(v) = report.violations.first() {
        return Err(Depth2Error::InvalidInstance(v.to_string()));
    }
    let depth = tree_depth(&i.tree);
    if depth > 2 {
        return Err(ModelError::DepthExceeded { depth, limit: 2 }.into());
    }
    let n = i.len();
    let root = i.tree.root().expect("valid tree");
    let order = i.path.order();
    let at = order.iter().position(|&x| x == root).expect("spanning path");
    let mut p1: Vec<VertexId> = order[..at].iter().rev().copied().collect();
    let mut p2: Vec<VertexId> = order[at + 1..].to_vec();
    if p1.is_empty() {
        std::mem::swap(&mut p1, &mut p2);
    }
    let u = p1.first().copied();
    // With the root at an end of the path, v is the far end of the only side.
    let v = p2.first().copied().or(p1.last().copied());

    let mut rank = vec![None; n];
    for (k, &x) in p1.iter().enumerate() {
        rank[x] = Some(k + 1);
    }
    for (k, &x) in p2.iter().enumerate() {
        rank[x] = Some(n - 1 - k);
    }

    let children = i.tree.children();
    let top = |x: VertexId| if i.tree.parent(x) == Some(root) { x } else { i.tree.parent(x).expect("non-root") };
    let mut subtrees: Vec<VertexId> = children[root].clone();
    if let (Some(u), Some(v)) = (u, v) {
        let (su, sv) = (top(u), top(v));
        subtrees.retain(|&c| c != su && c != sv);
        if su != sv {
            subtrees.insert(0, su);
        }
        subtrees.push(sv);
    }
    let t = subtrees.len();
    let wedges = (1..=t as i64)
        .map(|j| {
            let t = t as i64;
            (Scalar::from_ratio(t - 2 * j, t), Scalar::from_ratio(t - 2 * (j - 1), t))
        })
        .collect();
    let mut wedge_of = vec![None; n];
    for (j, &c) in subtrees.iter().enumerate() {
        wedge_of[c] = Some(j);
        for &g in &children[c] {
            wedge_of[g] = Some(j);
        }
    }
    Ok(WedgePlan { root, t, wedges, wedge_of, rank, u, v, p1, p2 })
}

/// Realize a plan. A vertex of rank `k` in a wedge with upper slope `hi` and
/// width `w` goes to `(k, k (hi - w/4) - k^2 w / (2n))`: each wedge's vertices
/// lie on a strictly concave parabola through the root, so no three vertices
/// are collinear, and every slope stays inside `(hi - 3w/4, hi - w/4]`.
/// Denominators divide `2 t n <= 2 n^2`.
pub fn realize(plan: &WedgePlan, n: usize) -> Result<Drawing, Depth2Error> {
    let mut pos = vec![Point::int(0, 0); n];
    if plan.t > 0 {
        let w = Scalar::from_ratio(2, plan.t as i64);
        let quarter = &w / &Scalar::from_int(4);
        let bend = &w / &Scalar::from_int(2 * n as i64);
        for x in 0..n {
            let (Some(k), Some(j)) = (plan.rank[x], plan.wedge_of[x]) else { continue };
            let k = Scalar::from_int(k as i64);
            let hi = &plan.wedges[j].1;
            let y = &(&k * &(hi - &quarter)) - &(&(&k * &k) * &bend);
            pos[x] = Point::new(k, y);
        }
    }
    Ok(Drawing::new(pos)?)
}

pub fn embed_depth2(i: &Instance) -> Result<Drawing, Depth2Error> {
    let plan = plan_depth2(i)?;
    realize(&plan, i.len())
}

/// The placement conditions checked directly on coordinates, independent of
/// any crossing test.
pub fn check_conditions(plan: &WedgePlan, d: &Drawing) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = d.len();
    let p = |x: VertexId| &d.points()[x];
    if !p(plan.root).is_origin() {
        out.push(Violation::new("root-not-origin", format!("root at {}", p(plan.root))));
    }
    let x_of = |x: VertexId| p(x).x.clone();
    let mut ranks: Vec<usize> = plan.rank.iter().flatten().copied().collect();
    ranks.sort_unstable();
    if ranks != (1..n).collect::<Vec<_>>() {
        out.push(Violation::new("ranks", "ranks are not a permutation of 1..n-1"));
    }
    for (j, (lo, hi)) in plan.wedges.iter().enumerate() {
        match Wedge::from_slopes(lo, hi) {
            Ok(w) => {
                for x in (0..n).filter(|&x| plan.wedge_of[x] == Some(j)) {
                    if !w.contains_strictly(p(x)) {
                        out.push(Violation::new("wedge", format!("vertex {x} outside wedge {}", j + 1)));
                    }
                }
            }
            Err(e) => out.push(Violation::new("wedge", e.to_string())),
        }
    }
    let others = || (0..n).filter(|&x| x != plan.root);
    if let Some(u) = plan.u {
        if others().any(|x| x != u && x_of(x) <= x_of(u)) {
            out.push(Violation::new("cond-1", format!("u = {u} is not leftmost")));
        }
    }
    if plan.p1.windows(2).any(|w| x_of(w[0]) >= x_of(w[1])) {
        out.push(Violation::new("cond-2", "first side not x-increasing"));
    }
    if let Some(v) = plan.v {
        if others().any(|x| x != v && x_of(x) >= x_of(v)) {
            out.push(Violation::new("cond-3", format!("v = {v} is not rightmost")));
        }
        if others().any(|x| x != v && orient(p(plan.root), p(v), p(x)) != Orientation::Ccw) {
            out.push(Violation::new("cond-5", "a vertex lies on or below segment rv"));
        }
    }
    if plan.p2.windows(2).any(|w| x_of(w[0]) <= x_of(w[1])) {
        out.push(Violation::new("cond-4", "second side not x-decreasing"));
    }
    if let (Some(a), Some(b)) = (plan.p1.iter().map(|&x| x_of(x)).max(), plan.p2.iter().map(|&x| x_of(x)).min()) {
        if b <= a {
            out.push(Violation::new("cond-4", "sides overlap in x"));
        }
    }
    out
}

/// One representative per isomorphism class of rooted trees of depth at
/// most two on `n` vertices: a partition of `n - 1` into subtree sizes.
pub fn depth2_trees(n: usize) -> Vec<RootedTree> {
    if n == 0 {
        return Vec::new();
    }
    partitions(n - 1, n - 1)
        .into_iter()
        .map(|parts| {
            let mut parent = vec![None];
            for size in parts {
                let c = parent.len();
                parent.push(Some(0));
                parent.extend(std::iter::repeat_n(Some(c), size - 1));
            }
            RootedTree::from_parents(parent)
        })
        .collect()
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteRow {
    pub n: usize,
    pub trees: usize,
    pub paths_per_tree: usize,
    pub exhaustive: bool,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
    /// Failing instances with the reason.
    pub failures: Vec<(Instance, String)>,
}

impl SuiteReport {
    pub fn instances(&self) -> usize {
        self.rows.iter().map(|r| r.instances).sum()
    }
}

/// Largest `n` whose spanning paths are enumerated exhaustively.
pub const EXHAUSTIVE_MAX: usize = 7;

/// Run [`embed_depth2`] and the checks on every depth-2 tree with up to
/// `n_max` vertices, crossed with every path (one per reversal pair) for
/// `n <= EXHAUSTIVE_MAX` and `trials` seeded random paths beyond.
pub fn enumerate_depth2_suite(n_max: usize, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let trees = depth2_trees(n);
        let exhaustive = n <= EXHAUSTIVE_MAX;
        let paths: Vec<Vec<VertexId>> = if exhaustive {
            (0..n).permutations(n).filter(|p| n < 2 || p[0] < p[n - 1]).collect()
        } else {
            (0..trials)
                .map(|_| {
                    let mut p: Vec<VertexId> = (0..n).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect()
        };
        let cases: Vec<Instance> = trees
            .iter()
            .flat_map(|t| paths.iter().map(move |p| Instance::new(t.clone(), PathGraph::new(p.clone()))))
            .collect();
        let results: Vec<Option<String>> = cases.par_iter().map(run_case).collect();
        failures.extend(cases.iter().zip(results).filter_map(|(c, r)| r.map(|r| (c.clone(), r))));
        rows.push(SuiteRow { n, trees: trees.len(), paths_per_tree: paths.len(), exhaustive, instances: cases.len() });
    }
    SuiteReport { rows, failures }
}

fn run_case(i: &Instance) -> Option<String> {
    let plan = match plan_depth2(i) {
        Ok(p) => p,
        Err(e) => return Some(e.to_string()),
    };
    let d = match realize(&plan, i.len()) {
        Ok(d) => d,
        Err(e) => return Some(e.to_string()),
    };
    if let Some(v) = check_conditions(&plan, &d).first() {
        return Some(v.to_string());
    }
    match check_simultaneous(i, &d) {
        Ok((t, p)) if t.planar && p.planar => None,
        Ok(_) => Some("drawing is not planar".into()),
        Err(e) => Some(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::is_simultaneous_embedding;

    fn inst(parents: Vec<Option<usize>>, path: Vec<usize>) -> Instance {
        Instance::new(RootedTree::from_parents(parents), PathGraph::new(path))
    }

    #[test]
    fn cherry_with_root_in_the_middle() {
        let i = inst(vec![None, Some(0), Some(0)], vec![1, 0, 2]);
        let d = embed_depth2(&i).unwrap();
        assert_eq!(d.points()[1].x, Scalar::from_int(1));
        assert_eq!(d.points()[2].x, Scalar::from_int(2));
        assert!(is_simultaneous_embedding(&i, &d).unwrap());
    }

    #[test]
    fn star_with_root_at_path_end() {
        let i = inst(vec![None, Some(0), Some(0), Some(0), Some(0), Some(0)], vec![0, 1, 2, 3, 4, 5]);
        let plan = plan_depth2(&i).unwrap();
        assert_eq!(plan.v, Some(5));
        let d = realize(&plan, 6).unwrap();
        assert!(check_conditions(&plan, &d).is_empty());
        assert!(is_simultaneous_embedding(&i, &d).unwrap());
    }

    #[test]
    fn zigzag_over_two_cherries() {
        let i = inst(vec![None, Some(0), Some(0), Some(1), Some(1), Some(2), Some(2)], vec![3, 5, 0, 4, 6, 1, 2]);
        let d = embed_depth2(&i).unwrap();
        assert!(is_simultaneous_embedding(&i, &d).unwrap());
    }

    #[test]
    fn u_and_v_in_one_subtree() {
        // Both path neighbours of the root hang below child 1.
        let i = inst(vec![None, Some(0), Some(1), Some(1), Some(0)], vec![2, 0, 3, 1, 4]);
        let plan = plan_depth2(&i).unwrap();
        assert_eq!(plan.wedge_of[2], plan.wedge_of[3]);
        let d = realize(&plan, 5).unwrap();
        assert!(check_conditions(&plan, &d).is_empty());
        assert!(is_simultaneous_embedding(&i, &d).unwrap());
    }

    #[test]
    fn deep_trees_refused() {
        let i = inst(vec![None, Some(0), Some(1), Some(2)], vec![0, 1, 2, 3]);
        assert_eq!(embed_depth2(&i), Err(ModelError::DepthExceeded { depth: 3, limit: 2 }.into()));
    }

    #[test]
    fn single_vertex() {
        let d = embed_depth2(&inst(vec![None], vec![0])).unwrap();
        assert!(d.points()[0].is_origin());
    }

    #[test]
    fn tree_counts_are_partition_numbers() {
        let counts: Vec<usize> = (1..=8).map(|n| depth2_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn denominators_stay_small() {
        let i = inst(vec![None, Some(0), Some(0), Some(0), Some(1), Some(2), Some(3)], vec![4, 1, 5, 0, 6, 2, 3]);
        let d = embed_depth2(&i).unwrap();
        let bound = num_bigint::BigInt::from(2 * 7 * 7);
        assert!(d.points().iter().all(|p| *p.y.denom() <= bound && p.x.is_integer()));
    }

    #[test]
    fn deterministic() {
        let i = inst(vec![None, Some(0), Some(0), Some(1)], vec![3, 2, 0, 1]);
        assert_eq!(embed_depth2(&i).unwrap(), embed_depth2(&i).unwrap());
    }

    #[test]
    fn small_suite_is_clean() {
        let r = enumerate_depth2_suite(5, 10, 1);
        assert!(r.failures.is_empty(), "{:?}", r.failures.first());
        assert_eq!(r.rows[4].instances, 5 * 60);
    }
}
