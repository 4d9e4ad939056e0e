//! Exact planarity checks for straight-line drawings and a brute-force
//! simultaneous embedding oracle for small instances.

use thiserror::Error;

use crate::geom::int;
use crate::geom::{point_on_segment, segment_relation, Point, Relation, Segment};
use crate::model::{validate_instance, Drawing, Edge, Instance, ModelError, VertexId};
use crate::search::{solve, Outcome, Problem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("edge ({0}, {1}) has zero length")]
    ZeroLengthEdge(VertexId, VertexId),
    #[error("instance is invalid: {0}")]
    InvalidInstance(String),
    #[error("fewer candidate points ({points}) than vertices ({vertices})")]
    TooFewPoints { points: usize, vertices: usize },
    #[error("search returned a drawing that fails re-verification")]
    Unverified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// All pairs; the reference oracle.
    Naive,
    /// Sweep over x-extents; exact, identical output to `Naive`.
    Sweep,
}

/// Violations of a straight-line drawing of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    /// Offending edge pairs `(e, f, relation)` with `e` listed before `f` in the input.
    pub crossings: Vec<(Edge, Edge, Relation)>,
    /// Vertices lying on a non-incident edge.
    pub vertex_on_edge: Vec<(VertexId, Edge)>,
    pub planar: bool,
}

impl CrossingReport {
    fn from_parts(mut pairs: Vec<(usize, usize, Relation)>, mut hits: Vec<(VertexId, usize)>, edges: &[Edge]) -> Self {
        pairs.sort();
        hits.sort();
        let planar = pairs.is_empty() && hits.is_empty();
        CrossingReport {
            crossings: pairs.into_iter().map(|(i, j, r)| (edges[i], edges[j], r)).collect(),
            vertex_on_edge: hits.into_iter().map(|(v, e)| (v, edges[e])).collect(),
            planar,
        }
    }
}

fn segments(edges: &[Edge], d: &Drawing) -> Result<Vec<Segment>, PlanarityError> {
    edges
        .iter()
        .map(|&(u, v)| {
            let a = d.point(u)?.clone();
            let b = d.point(v)?.clone();
            Segment::new(a, b).map_err(|_| PlanarityError::ZeroLengthEdge(u, v))
        })
        .collect()
}

pub fn check_drawing(edges: &[Edge], d: &Drawing, strategy: Strategy) -> Result<CrossingReport, PlanarityError> {
    let segs = segments(edges, d)?;
    let (pairs, hits) = match strategy {
        Strategy::Naive => naive(edges, &segs, d),
        Strategy::Sweep => sweep(edges, &segs, d),
    };
    Ok(CrossingReport::from_parts(pairs, hits, edges))
}

type Findings = (Vec<(usize, usize, Relation)>, Vec<(VertexId, usize)>);

fn naive(edges: &[Edge], segs: &[Segment], d: &Drawing) -> Findings {
    let mut pairs = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let r = segment_relation(&segs[i], &segs[j]);
            if r.is_violation() {
                pairs.push((i, j, r));
            }
        }
    }
    let mut hits = Vec::new();
    for (v, p) in d.points().iter().enumerate() {
        for (k, &(a, b)) in edges.iter().enumerate() {
            if v != a && v != b && point_on_segment(p, segs[k].a(), segs[k].b()) {
                hits.push((v, k));
            }
        }
    }
    (pairs, hits)
}

fn x_extent(s: &Segment) -> (&crate::geom::Scalar, &crate::geom::Scalar) {
    if s.a().x <= s.b().x {
        (&s.a().x, &s.b().x)
    } else {
        (&s.b().x, &s.a().x)
    }
}

fn sweep(edges: &[Edge], segs: &[Segment], d: &Drawing) -> Findings {
    // Edges enter the active set at their left x and leave once the sweep
    // passes their right x; only x-overlapping pairs are ever compared.
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&i, &j| x_extent(&segs[i]).0.cmp(x_extent(&segs[j]).0).then(i.cmp(&j)));
    let mut active: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for &i in &order {
        let left = x_extent(&segs[i]).0;
        active.retain(|&j| x_extent(&segs[j]).1 >= left);
        for &j in &active {
            let r = segment_relation(&segs[i], &segs[j]);
            if r.is_violation() {
                pairs.push((i.min(j), i.max(j), r));
            }
        }
        active.push(i);
    }

    let mut by_x: Vec<VertexId> = (0..d.len()).collect();
    by_x.sort_by(|&a, &b| d.points()[a].x.cmp(&d.points()[b].x));
    let xs: Vec<&crate::geom::Scalar> = by_x.iter().map(|&v| &d.points()[v].x).collect();
    let mut hits = Vec::new();
    for (k, &(a, b)) in edges.iter().enumerate() {
        let (lo, hi) = x_extent(&segs[k]);
        let start = xs.partition_point(|x| *x < lo);
        let end = xs.partition_point(|x| *x <= hi);
        for &v in &by_x[start..end] {
            if v != a && v != b && point_on_segment(&d.points()[v], segs[k].a(), segs[k].b()) {
                hits.push((v, k));
            }
        }
    }
    (pairs, hits)
}

/// Planarity of the tree and of the path on one shared placement.
pub fn check_simultaneous(i: &Instance, d: &Drawing) -> Result<(CrossingReport, CrossingReport), PlanarityError> {
    if d.len() < i.len() {
        return Err(ModelError::UndrawnVertex(d.len()).into());
    }
    let tree = check_drawing(&i.tree.edges(), d, Strategy::Sweep)?;
    let path = check_drawing(&i.path.edges(), d, Strategy::Sweep)?;
    Ok((tree, path))
}

pub fn is_simultaneous_embedding(i: &Instance, d: &Drawing) -> Result<bool, PlanarityError> {
    let (t, p) = check_simultaneous(i, d)?;
    Ok(t.planar && p.planar)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Drawing),
    /// Every assignment was explored; none is a simultaneous embedding.
    Exhausted,
    /// The node limit was hit before the search finished.
    BudgetExceeded,
}

fn dedup_points(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

/// Exhaustive search for a simultaneous embedding on the given candidate points.
///
/// Partial placements with a violation are pruned, and after every placement
/// the candidates left for unplaced vertices are filtered against it.
/// `budget` limits the placements tried below each choice for the first
/// vertex, so the outcome does not depend on thread count. The returned
/// drawing is the first found in exploration order and is re-verified.
pub fn search_embedding(i: &Instance, candidate_points: &[Point], budget: u64) -> Result<SearchOutcome, PlanarityError> {
    let report = validate_instance(i);
    if !report.is_clean() {
        return Err(PlanarityError::InvalidInstance(report.violations[0].to_string()));
    }
    let cands = dedup_points(candidate_points);
    let n = i.len();
    if cands.len() < n {
        return Err(PlanarityError::TooFewPoints { points: cands.len(), vertices: n });
    }
    let ipts = int::scale_to_integers(&cands).ok_or(PlanarityError::InvalidInstance(
        "candidate coordinates too large for the search kernel".into(),
    ))?;
    let problem = Problem {
        pts: &ipts,
        domains: vec![(0..cands.len() as u32).collect(); n],
        graphs: vec![i.tree.edges(), i.path.edges()],
        mirror: None,
    };
    match solve(&problem, budget) {
        Outcome::Found(assign) => {
            let d = Drawing::new(assign.iter().map(|&c| cands[c as usize].clone()).collect())?;
            if !is_simultaneous_embedding(i, &d)? {
                return Err(PlanarityError::Unverified);
            }
            Ok(SearchOutcome::Found(d))
        }
        Outcome::Exhausted { .. } => Ok(SearchOutcome::Exhausted),
        Outcome::BudgetExceeded => Ok(SearchOutcome::BudgetExceeded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PathGraph, RootedTree};

    fn drawing(pts: &[(i64, i64)]) -> Drawing {
        Drawing::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap()
    }

    #[test]
    fn square_diagonals_cross_once() {
        let d = drawing(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let edges = vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)];
        for s in [Strategy::Naive, Strategy::Sweep] {
            let r = check_drawing(&edges, &d, s).unwrap();
            assert_eq!(r.crossings, vec![((0, 2), (1, 3), Relation::ProperCrossing)]);
            assert!(!r.planar);
        }
    }

    #[test]
    fn monotone_path_is_planar() {
        let d = drawing(&[(0, 0), (1, 3), (2, -1), (3, 2)]);
        let r = check_drawing(&[(0, 1), (1, 2), (2, 3)], &d, Strategy::Sweep).unwrap();
        assert!(r.planar);
    }

    #[test]
    fn vertex_on_edge_detected() {
        let d = drawing(&[(0, 0), (2, 0), (1, 0)]);
        for s in [Strategy::Naive, Strategy::Sweep] {
            let r = check_drawing(&[(0, 1)], &d, s).unwrap();
            assert_eq!(r.vertex_on_edge, vec![(2, (0, 1))]);
            assert!(!r.planar);
        }
    }

    #[test]
    fn undrawn_vertex_is_an_error() {
        let d = drawing(&[(0, 0), (2, 0)]);
        assert_eq!(
            check_drawing(&[(0, 5)], &d, Strategy::Naive),
            Err(PlanarityError::Model(ModelError::UndrawnVertex(5)))
        );
    }

    #[test]
    fn same_three_path_on_a_triangle() {
        let i = Instance::new(RootedTree::path(3), PathGraph::identity(3));
        let d = drawing(&[(0, 0), (2, 0), (1, 1)]);
        let (t, p) = check_simultaneous(&i, &d).unwrap();
        assert!(t.planar && p.planar);
    }

    #[test]
    fn search_small_cases() {
        let i = Instance::new(RootedTree::path(3), PathGraph::identity(3));
        let pts = vec![Point::int(0, 0), Point::int(3, 1), Point::int(1, 4)];
        assert!(matches!(search_embedding(&i, &pts, 1000).unwrap(), SearchOutcome::Found(_)));
        let one = Instance::new(RootedTree::from_parents(vec![None]), PathGraph::identity(1));
        assert!(matches!(search_embedding(&one, &[Point::int(5, 5)], 10).unwrap(), SearchOutcome::Found(_)));
    }

    #[test]
    fn search_on_collinear_points_is_exhausted() {
        // Star with three leaves on four collinear points: some edge always covers a vertex.
        let i = Instance::new(RootedTree::star(3), PathGraph::identity(4));
        let pts: Vec<Point> = (0..4).map(|k| Point::int(k, 0)).collect();
        assert_eq!(search_embedding(&i, &pts, 1_000_000).unwrap(), SearchOutcome::Exhausted);
        assert_eq!(search_embedding(&i, &pts, 1).unwrap(), SearchOutcome::BudgetExceeded);
    }
}
