//! Geometric predicates on concrete drawings: passages, doors, channels,
//! cuts and connections between channel segments.

mod channel;
mod region;
pub mod witness;

use std::collections::HashSet;

use itertools::Itertools;
use thiserror::Error;

use crate::counterexample::SequencePlan;
use crate::geom::{
    convex_hull, linear_separator, point_in_convex_polygon, point_in_triangle, point_on_segment, segment_relation,
    GeomError, Point, Position, Relation, Segment,
};
use crate::model::{Drawing, Edge, Instance, ModelError, Role, VertexId};

pub use channel::{
    classify_connections, compute_channels, detect_cuts, intersections_disjoint, property5, Channel,
    ChannelSegment, Connection, ConnectionEntry, CutEvent, CutKind, Property5,
};
pub use region::{Bound, HalfPlane, Interval, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzerError {
    #[error("plan does not match instance: {0}")]
    PlanMismatch(String),
    #[error("passage joints cannot be ordered: {0:?}")]
    UnorderableJoints([usize; 4]),
    #[error("channels need at least 3 joints, got {0}")]
    TooFewJoints(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A cell: its joint (index into [`CellIndex::joints`]) and its vertices
/// in path order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRef {
    pub joint: usize,
    pub vertices: Vec<VertexId>,
}

/// Joints in their order around the root, and the cells attached to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellIndex {
    pub joints: Vec<VertexId>,
    pub cells: Vec<CellRef>,
}

/// Joints are the `Joint`-labelled vertices in increasing id order; cells
/// are the plan's path ranges.
pub fn index_from_plan(i: &Instance, plan: &SequencePlan) -> Result<CellIndex, AnalyzerError> {
    let joints: Vec<VertexId> = (0..i.len()).filter(|&v| i.tree.role(v) == Role::Joint).collect();
    if joints.len() as u64 != plan.params.q {
        return Err(AnalyzerError::PlanMismatch(format!(
            "{} joints in instance, {} in plan",
            joints.len(),
            plan.params.q
        )));
    }
    let order = i.path.order();
    let mut used = vec![false; order.len()];
    let mut cells = Vec::with_capacity(plan.cells.len());
    for (k, c) in plan.cells.iter().enumerate() {
        if c.start >= c.end || c.end > order.len() || c.joint >= joints.len() {
            return Err(AnalyzerError::PlanMismatch(format!("cell {k} has range {}..{}", c.start, c.end)));
        }
        if used[c.start..c.end].iter().any(|u| *u) {
            return Err(AnalyzerError::PlanMismatch(format!("cell {k} overlaps another cell")));
        }
        used[c.start..c.end].iter_mut().for_each(|u| *u = true);
        cells.push(CellRef { joint: c.joint, vertices: order[c.start..c.end].to_vec() });
    }
    Ok(CellIndex { joints, cells })
}

fn points(d: &Drawing, vs: &[VertexId]) -> Result<Vec<Point>, AnalyzerError> {
    vs.iter().map(|&v| d.point(v).cloned().map_err(AnalyzerError::from)).collect()
}

fn segment(d: &Drawing, e: Edge) -> Result<Segment, AnalyzerError> {
    Ok(Segment::new(d.point(e.0)?.clone(), d.point(e.1)?.clone())?)
}

fn crosses(r: Relation) -> bool {
    matches!(r, Relation::ProperCrossing | Relation::Touching | Relation::Overlapping)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Passage {
    pub c1: usize,
    pub c2: usize,
    pub c_sep: usize,
    pub joint: usize,
    pub sep_joint: usize,
    /// Path edges of the separating cell crossed by tree edges inside the
    /// subtree spanned by `c1`, `c2` and their joint.
    pub crossed_path_edges: Vec<Edge>,
}

impl Passage {
    /// At least two path edges of the separating cell are crossed by tree
    /// edges joining the two cells.
    pub fn two_edges_crossed(&self) -> bool {
        self.crossed_path_edges.len() >= 2
    }
}

fn polyline(cell: &CellRef) -> Vec<Edge> {
    cell.vertices.iter().copied().tuple_windows().collect()
}

/// Every straight segment from a vertex of `a` to a vertex of `b` meets
/// the polyline.
fn separates(d: &Drawing, line: &[VertexId], a: &[VertexId], b: &[VertexId]) -> Result<bool, AnalyzerError> {
    let poly: Vec<Segment> =
        line.iter().copied().tuple_windows().map(|e| segment(d, e)).collect::<Result<_, _>>()?;
    let single = if line.len() == 1 { Some(d.point(line[0])?.clone()) } else { None };
    for &u in a {
        for &w in b {
            let s = segment(d, (u, w))?;
            let meets = match &single {
                Some(p) => point_on_segment(p, s.a(), s.b()),
                None => poly.iter().any(|e| segment_relation(&s, e) != Relation::Disjoint),
            };
            if !meets {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All triples `(c1, c2, c')` where `c1`, `c2` share a joint, cannot be
/// split by a line, and the path through `c'` (another joint) separates
/// them. Output is ordered by `(c1, c2, c')`.
pub fn detect_passages(i: &Instance, d: &Drawing, idx: &CellIndex) -> Result<Vec<Passage>, AnalyzerError> {
    let tree_edges = i.tree.edges();
    let mut out = Vec::new();
    for (c1, c2) in (0..idx.cells.len()).tuple_combinations() {
        let (a, b) = (&idx.cells[c1], &idx.cells[c2]);
        if a.joint != b.joint {
            continue;
        }
        if linear_separator(&points(d, &a.vertices)?, &points(d, &b.vertices)?)?.is_some() {
            continue;
        }
        let joint_v = idx.joints[a.joint];
        let span: HashSet<VertexId> = a.vertices.iter().chain(&b.vertices).copied().chain([joint_v]).collect();
        let links: Vec<Segment> = tree_edges
            .iter()
            .filter(|(u, v)| span.contains(u) && span.contains(v))
            .map(|&e| segment(d, e))
            .collect::<Result<_, _>>()?;
        for (c_sep, sep) in idx.cells.iter().enumerate() {
            if sep.joint == a.joint || !separates(d, &sep.vertices, &a.vertices, &b.vertices)? {
                continue;
            }
            let mut crossed = Vec::new();
            for e in polyline(sep) {
                let s = segment(d, e)?;
                if links.iter().any(|l| crosses(segment_relation(&s, l))) {
                    crossed.push(e);
                }
            }
            out.push(Passage { c1, c2, c_sep, joint: a.joint, sep_joint: sep.joint, crossed_path_edges: crossed });
        }
    }
    Ok(out)
}

/// Re-checks the premise that the two cells are not linearly separable.
pub fn passage_premise_holds(p: &Passage, d: &Drawing, idx: &CellIndex) -> Result<bool, AnalyzerError> {
    let a = points(d, &idx.cells[p.c1].vertices)?;
    let b = points(d, &idx.cells[p.c2].vertices)?;
    Ok(linear_separator(&a, &b)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoorStatus {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Door {
    pub apex: VertexId,
    /// One vertex of each of the two cells.
    pub base: (VertexId, VertexId),
    pub status: DoorStatus,
}

/// Triangles with apex a vertex `v'` of the separating cell strictly
/// inside the hull of the two cells, and base one vertex from each cell,
/// whose interior holds no other vertex of the two cells and no vertex of
/// the separating cell nearer (in the tree) to its joint than `v'`. A door
/// is closed when a tree edge at `v'` meets the base.
pub fn enumerate_doors(p: &Passage, i: &Instance, d: &Drawing, idx: &CellIndex) -> Result<Vec<Door>, AnalyzerError> {
    let (a, b, sep) = (&idx.cells[p.c1], &idx.cells[p.c2], &idx.cells[p.c_sep]);
    let both: Vec<VertexId> = a.vertices.iter().chain(&b.vertices).copied().collect();
    let hull = convex_hull(&points(d, &both)?);
    let depth = i.tree.depths();
    let tree_edges = i.tree.edges();
    let mut out = Vec::new();
    for &apex in &sep.vertices {
        let pa = d.point(apex)?;
        if point_in_convex_polygon(&hull, pa) != Position::Inside {
            continue;
        }
        let nearer: Vec<VertexId> = sep.vertices.iter().copied().filter(|&u| depth[u] < depth[apex]).collect();
        let incident: Vec<Segment> = tree_edges
            .iter()
            .filter(|(u, v)| *u == apex || *v == apex)
            .map(|&e| segment(d, e))
            .collect::<Result<_, _>>()?;
        for (&w1, &w2) in a.vertices.iter().cartesian_product(&b.vertices) {
            let (p1, p2) = (d.point(w1)?, d.point(w2)?);
            let tri = (pa, p1, p2);
            if point_in_triangle(pa, (p1, p2, pa)).is_err() {
                continue;
            }
            let mut blocked = false;
            for &u in both.iter().filter(|&&u| u != w1 && u != w2).chain(&nearer) {
                if point_in_triangle(d.point(u)?, tri)? == Position::Inside {
                    blocked = true;
                    break;
                }
            }
            if blocked {
                continue;
            }
            let base = Segment::new(p1.clone(), p2.clone())?;
            let closed = incident.iter().any(|e| {
                let r = segment_relation(e, &base);
                crosses(r) && !(e.has_endpoint(p1) || e.has_endpoint(p2))
            });
            out.push(Door { apex, base: (w1, w2), status: if closed { DoorStatus::Closed } else { DoorStatus::Open } });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairClass {
    Independent,
    Nested,
    Interconnected,
}

/// Classifies two passages given as joint index pairs `(h, h')`. Each pair
/// is put in increasing order and the pair with the smaller first index
/// goes first; all four indices must differ.
pub fn classify_passage_pair(p1: (usize, usize), p2: (usize, usize)) -> Result<PairClass, AnalyzerError> {
    let sort = |(a, b): (usize, usize)| if a < b { (a, b) } else { (b, a) };
    let (mut p, mut q) = (sort(p1), sort(p2));
    if q.0 < p.0 {
        std::mem::swap(&mut p, &mut q);
    }
    let all = [p.0, p.1, q.0, q.1];
    if !all.iter().all_unique() {
        return Err(AnalyzerError::UnorderableJoints(all));
    }
    let ((h1, h1s), (h2, h2s)) = (p, q);
    Ok(if h1s < h2 {
        PairClass::Independent
    } else if h2s < h1s {
        PairClass::Nested
    } else {
        debug_assert!(h2 < h1s && h1s < h2s);
        let _ = h1;
        PairClass::Interconnected
    })
}

/// Everything the analyzer reports for one drawing.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub passages: Vec<Passage>,
    pub doors: Vec<Vec<Door>>,
    pub channels: Vec<Channel>,
    pub cuts: Vec<CutEvent>,
    pub connections: Vec<ConnectionEntry>,
}

pub fn analyze(
    i: &Instance,
    d: &Drawing,
    idx: &CellIndex,
    plan: Option<&SequencePlan>,
) -> Result<AnalysisReport, AnalyzerError> {
    let passages = detect_passages(i, d, idx)?;
    let doors = passages.iter().map(|p| enumerate_doors(p, i, d, idx)).collect::<Result<_, _>>()?;
    let channels = if idx.joints.len() >= 3 { compute_channels(i, d, &idx.joints)? } else { Vec::new() };
    let ef_of = plan.map(|p| ef_of_vertex(i, p));
    let cuts = detect_cuts(i, d, &channels, ef_of.as_deref())?;
    let connections = classify_connections(&channels);
    Ok(AnalysisReport { passages, doors, channels, cuts, connections })
}

/// Extended formation of each vertex visited inside a planned cell.
pub fn ef_of_vertex(i: &Instance, plan: &SequencePlan) -> Vec<Option<usize>> {
    let mut out = vec![None; i.len()];
    let order = i.path.order();
    for f in &plan.formations {
        for &c in &f.cells {
            let rec = &plan.cells[c];
            for &v in order.get(rec.start..rec.end).unwrap_or(&[]) {
                out[v] = Some(f.ef);
            }
        }
    }
    out
}

impl AnalysisReport {
    pub fn closed_door_counts(&self) -> Vec<usize> {
        self.doors.iter().map(|ds| ds.iter().filter(|d| d.status == DoorStatus::Closed).count()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("passages: {}\n", self.passages.len()));
        for (p, doors) in self.passages.iter().zip(&self.doors) {
            let closed = doors.iter().filter(|d| d.status == DoorStatus::Closed).count();
            out.push_str(&format!(
                "  cells {} {} sep {} (joints {} / {}): {} crossed path edges, {} doors ({} closed)\n",
                p.c1,
                p.c2,
                p.c_sep,
                p.joint,
                p.sep_joint,
                p.crossed_path_edges.len(),
                doors.len(),
                closed
            ));
        }
        out.push_str(&format!("channels: {}\n", self.channels.len()));
        for c in &self.channels {
            out.push_str(&format!("  joint {}: {}-channel, {} segments\n", c.joint, c.x, c.segments.len()));
        }
        out.push_str(&format!("cuts: {}\n", self.cuts.len()));
        for c in &self.cuts {
            out.push_str(&format!(
                "  {:?} edge ({}, {}) channel {} segments {:?}\n",
                c.kind, c.edge.0, c.edge.1, c.channel, c.segments
            ));
        }
        let two_side = self.connections.iter().filter(|c| c.kind != Connection::OneSide).count();
        out.push_str(&format!("connections: {} ({} two-side)\n", self.connections.len(), two_side));
        out
    }

    /// One whitespace-separated record per line.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for (k, (p, doors)) in self.passages.iter().zip(&self.doors).enumerate() {
            out.push_str(&format!(
                "passage {k} {} {} {} {} {} {}\n",
                p.c1,
                p.c2,
                p.c_sep,
                p.joint,
                p.sep_joint,
                p.crossed_path_edges.len()
            ));
            for door in doors {
                let s = match door.status {
                    DoorStatus::Open => "open",
                    DoorStatus::Closed => "closed",
                };
                out.push_str(&format!("door {k} {} {} {} {s}\n", door.apex, door.base.0, door.base.1));
            }
        }
        for c in &self.channels {
            out.push_str(&format!("channel {} {} {}\n", c.joint, c.x, c.segments.len()));
        }
        for c in &self.cuts {
            let kind = match c.kind {
                CutKind::BlockingCut => "blocking",
                CutKind::DoubleCutSimple => "double-simple",
                CutKind::DoubleCutNonSimple => "double-non-simple",
            };
            out.push_str(&format!(
                "cut {kind} {} {} {} {} {} {}\n",
                c.edge.0,
                c.edge.1,
                c.channel,
                c.segments.0,
                c.segments.1,
                u8::from(c.extremal)
            ));
        }
        for c in &self.connections {
            let kind = match c.kind {
                Connection::OneSide => "one-side",
                Connection::TwoSideLow => "two-side-low",
                Connection::TwoSideHigh => "two-side-high",
            };
            out.push_str(&format!("connection {} {} {} {kind}\n", c.channel, c.a, c.b));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_classes() {
        assert_eq!(classify_passage_pair((1, 2), (3, 4)).unwrap(), PairClass::Independent);
        assert_eq!(classify_passage_pair((1, 4), (2, 3)).unwrap(), PairClass::Nested);
        assert_eq!(classify_passage_pair((1, 3), (2, 4)).unwrap(), PairClass::Interconnected);
        assert_eq!(classify_passage_pair((4, 2), (3, 1)).unwrap(), PairClass::Interconnected);
        assert!(classify_passage_pair((1, 2), (2, 3)).is_err());
    }

    #[test]
    fn pair_classes_are_exhaustive() {
        for quad in (0..6).permutations(4) {
            let c = classify_passage_pair((quad[0], quad[1]), (quad[2], quad[3])).unwrap();
            let swapped = classify_passage_pair((quad[2], quad[3]), (quad[1], quad[0])).unwrap();
            assert_eq!(c, swapped);
        }
    }
}
