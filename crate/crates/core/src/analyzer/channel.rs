//! Channels between the root paths of neighbouring joints, their
//! segments, cuts by path edges, and connections between segments.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::geom::{point_in_triangle, Point, Position};
use crate::model::{Drawing, Edge, Instance, ModelError, VertexId};

use super::region::{components, ray_interval, remains, segment_interval, HalfPlane, Interval, Region};
use super::AnalyzerError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSegment {
    /// 1-based position along the channel.
    pub index: usize,
    pub region: Region,
    /// Rays continuing the two sides past the segment's far bend, as
    /// `(start, direction)`; `None` for the last segment.
    pub elongation: Option<[(Point, Point); 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    /// Position of the joint in the order around the root.
    pub position: usize,
    pub joint: VertexId,
    /// Root paths through the previous and the next joint.
    pub paths: (Vec<VertexId>, Vec<VertexId>),
    /// Path indices at which one path's bend encloses the other's.
    pub bends: Vec<usize>,
    pub x: usize,
    pub segments: Vec<ChannelSegment>,
    pub root: Point,
}

impl Channel {
    fn inside(&self, h: usize, p: &Point) -> bool {
        self.segments[h].region.contains(p) && !self.segments[..h].iter().any(|s| s.region.contains(p))
    }

    /// 1-based segment containing `p` in its interior.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        (0..self.segments.len()).find(|&h| self.inside(h, p)).map(|h| h + 1)
    }

    fn clip(&self, h: usize, origin: &Point, dir: &Point, iv: &Interval) -> Interval {
        self.segments[h].region.clip(origin, dir, iv.clone())
    }

    /// `origin + t * dir`, `t` in `iv`, passes through the interior of
    /// segment `h` (0-based).
    fn meets(&self, h: usize, origin: &Point, dir: &Point, iv: &Interval) -> bool {
        let base = self.clip(h, origin, dir, iv);
        let earlier: Vec<Interval> = (0..h).map(|g| self.clip(g, origin, dir, iv)).collect();
        remains(&base, &earlier)
    }

    /// Segments (1-based) whose interior the segment `a`-`b` meets.
    pub fn segments_met(&self, a: &Point, b: &Point) -> Vec<usize> {
        let dir = b.sub(a);
        (0..self.segments.len()).filter(|&h| self.meets(h, a, &dir, &segment_interval())).map(|h| h + 1).collect()
    }

    /// Number of separate pieces in which the segment `a`-`b` runs
    /// through the channel.
    pub fn pieces(&self, a: &Point, b: &Point) -> usize {
        let dir = b.sub(a);
        let parts: Vec<Interval> = (0..self.segments.len()).map(|h| self.clip(h, a, &dir, &segment_interval())).collect();
        components(&parts)
    }
}

fn root_paths(children: &[Vec<VertexId>], root: VertexId, joint: VertexId) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![root, joint]];
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap_or(&joint);
        if children[last].is_empty() {
            out.push(p);
        } else {
            for &c in children[last].iter().rev() {
                let mut q = p.clone();
                q.push(c);
                stack.push(q);
            }
        }
    }
    out.sort();
    out
}

/// Bend `v` of `p` (with neighbours `u`, `w`) encloses `q` when `q` lies
/// strictly inside the triangle `u v w`.
fn encloses(u: &Point, v: &Point, w: &Point, q: &Point) -> bool {
    matches!(point_in_triangle(q, (u, v, w)), Ok(Position::Inside))
}

fn enclosing_bends(a: &[Point], b: &[Point]) -> Vec<usize> {
    let n = a.len().min(b.len());
    (1..n.saturating_sub(1))
        .filter(|&k| encloses(&a[k - 1], &a[k], &a[k + 1], &b[k]) || encloses(&b[k - 1], &b[k], &b[k + 1], &a[k]))
        .collect()
}

fn plane(a: &Point, b: &Point, refs: &[&Point]) -> Option<HalfPlane> {
    refs.iter().find_map(|r| HalfPlane::through(a, b, r))
}

fn build_segments(a: &[Point], b: &[Point], bends: &[usize]) -> Vec<ChannelSegment> {
    let starts: Vec<usize> = std::iter::once(0).chain(bends.iter().copied()).collect();
    let x = bends.len();
    (0..=x)
        .map(|h| {
            let s = starts[h];
            let (p, q) = (&a[s], &b[s]);
            let mut planes = Vec::new();
            let (ra, rb) = if h == 0 { (&b[1], &a[1]) } else { (q, p) };
            planes.extend(plane(p, &a[s + 1], &[ra, &b[s + 1]]));
            planes.extend(plane(q, &b[s + 1], &[rb, &a[s + 1]]));
            if h > 0 {
                planes.extend(plane(p, q, &[&a[s + 1], &b[s + 1]]));
            }
            let elongation = (h < x).then(|| {
                let e = bends[h];
                planes.extend(plane(&a[e], &b[e], &[p, q]));
                [(a[e].clone(), a[e].sub(&a[e - 1])), (b[e].clone(), b[e].sub(&b[e - 1]))]
            });
            ChannelSegment { index: h + 1, region: Region { planes }, elongation }
        })
        .collect()
}

/// Channels of the interior joints of `joints` (given in their order
/// around the root). Among all pairs of root paths through the two
/// neighbouring joints, the pair with the most enclosing bends is used;
/// ties go to the lexicographically least pair.
pub fn compute_channels(i: &Instance, d: &Drawing, joints: &[VertexId]) -> Result<Vec<Channel>, AnalyzerError> {
    if joints.len() < 3 {
        return Err(AnalyzerError::TooFewJoints(joints.len()));
    }
    let root = i.tree.root().ok_or_else(|| ModelError::InvalidInstance("tree has no root".into()))?;
    let children = i.tree.children();
    let pts = |p: &[VertexId]| -> Result<Vec<Point>, AnalyzerError> {
        p.iter().map(|&v| d.point(v).cloned().map_err(AnalyzerError::from)).collect()
    };
    let paths: Vec<Vec<Vec<VertexId>>> = joints.iter().map(|&j| root_paths(&children, root, j)).collect();
    let mut out = Vec::new();
    for pos in 1..joints.len() - 1 {
        let mut best: Option<(Vec<usize>, &Vec<VertexId>, &Vec<VertexId>)> = None;
        for (p1, p2) in paths[pos - 1].iter().cartesian_product(&paths[pos + 1]) {
            let bends = enclosing_bends(&pts(p1)?, &pts(p2)?);
            if best.as_ref().is_none_or(|(b, _, _)| bends.len() > b.len()) {
                best = Some((bends, p1, p2));
            }
        }
        let Some((bends, p1, p2)) = best else { continue };
        let segments = build_segments(&pts(p1)?, &pts(p2)?, &bends);
        out.push(Channel {
            position: pos,
            joint: joints[pos],
            paths: (p1.clone(), p2.clone()),
            x: bends.len(),
            bends,
            segments,
            root: d.point(root)?.clone(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutKind {
    BlockingCut,
    DoubleCutSimple,
    DoubleCutNonSimple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutEvent {
    pub kind: CutKind,
    pub edge: Edge,
    /// Index into the channel list.
    pub channel: usize,
    /// Consecutive 1-based segments involved.
    pub segments: (usize, usize),
    /// Blocking cuts: the other channels the edge runs through twice.
    pub cut_twice: Vec<usize>,
    /// Double cuts: segment whose border the edge crosses.
    pub crossed: usize,
    /// Double cuts: no double cut of the same extended formation at the
    /// same place is closer to the bend between the two segments.
    pub extremal: bool,
}

/// Classifies every path edge against every channel.
///
/// Blocking cut: the edge joins consecutive segments of one channel and
/// runs through some other channel in two separate pieces. Double cut:
/// the edge crosses into one of two consecutive segments and one of its
/// two elongations (rays beyond its endpoints) enters the other; simple
/// when the edge itself stays out of that other segment. `ef_of` maps
/// vertices to extended formations for the extremality flag.
pub fn detect_cuts(
    i: &Instance,
    d: &Drawing,
    channels: &[Channel],
    ef_of: Option<&[Option<usize>]>,
) -> Result<Vec<CutEvent>, AnalyzerError> {
    let mut out = Vec::new();
    for (u, v) in i.path.edges() {
        let (pu, pv) = (d.point(u)?, d.point(v)?);
        let dir = pv.sub(pu);
        let back = pu.sub(pv);
        let twice: Vec<usize> = (0..channels.len()).filter(|&c| channels[c].pieces(pu, pv) >= 2).collect();
        for (ci, ch) in channels.iter().enumerate() {
            if let (Some(a), Some(b)) = (ch.locate(pu), ch.locate(pv)) {
                let others: Vec<usize> = twice.iter().copied().filter(|&c| c != ci).collect();
                if a.abs_diff(b) == 1 && !others.is_empty() {
                    out.push(CutEvent {
                        kind: CutKind::BlockingCut,
                        edge: (u, v),
                        channel: ci,
                        segments: (a.min(b), a.max(b)),
                        cut_twice: others,
                        crossed: 0,
                        extremal: false,
                    });
                }
            }
            for h in 0..ch.segments.len().saturating_sub(1) {
                for (crossed, elong) in [(h, h + 1), (h + 1, h)] {
                    let border = ch.meets(crossed, pu, &dir, &segment_interval())
                        && !(ch.inside(crossed, pu) && ch.inside(crossed, pv));
                    let hit = ch.meets(elong, pv, &dir, &ray_interval()) || ch.meets(elong, pu, &back, &ray_interval());
                    if border && hit {
                        let simple = !ch.meets(elong, pu, &dir, &segment_interval());
                        out.push(CutEvent {
                            kind: if simple { CutKind::DoubleCutSimple } else { CutKind::DoubleCutNonSimple },
                            edge: (u, v),
                            channel: ci,
                            segments: (h + 1, h + 2),
                            cut_twice: Vec::new(),
                            crossed: crossed + 1,
                            extremal: false,
                        });
                        break;
                    }
                }
            }
        }
    }
    mark_extremal(d, channels, &mut out, ef_of)?;
    Ok(out)
}

fn mark_extremal(
    d: &Drawing,
    channels: &[Channel],
    cuts: &mut [CutEvent],
    ef_of: Option<&[Option<usize>]>,
) -> Result<(), AnalyzerError> {
    let mut groups: BTreeMap<(Option<usize>, usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, c) in cuts.iter().enumerate() {
        if c.kind != CutKind::BlockingCut {
            let ef = ef_of.and_then(|m| m.get(c.edge.0).copied().flatten());
            groups.entry((ef, c.channel, c.segments.0)).or_default().push(k);
        }
    }
    for ((_, ch, seg), members) in groups {
        let Some([(a, _), (b, _)]) = &channels[ch].segments[seg - 1].elongation else { continue };
        let mid = a.midpoint(b);
        let mut dist = Vec::with_capacity(members.len());
        for &k in &members {
            let (u, v) = cuts[k].edge;
            dist.push(d.point(u)?.dist2(&mid).min(d.point(v)?.dist2(&mid)));
        }
        if let Some(best) = dist.iter().min().cloned() {
            for (&k, dk) in members.iter().zip(&dist) {
                cuts[k].extremal = *dk == best;
            }
        }
    }
    Ok(())
}

/// Third-segment occupancy for one channel run through twice by a
/// blocking cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property5 {
    pub channel: usize,
    pub cut_segments: Vec<usize>,
    pub occupied: Vec<usize>,
    /// The channel has vertices in every segment the edge runs through.
    pub premise: bool,
    /// If the premise holds, some vertex lies in yet another segment.
    pub holds: bool,
}

fn subtree(children: &[Vec<VertexId>], v: VertexId) -> Vec<VertexId> {
    let mut out = vec![v];
    let mut k = 0;
    while k < out.len() {
        out.extend_from_slice(&children[out[k]]);
        k += 1;
    }
    out
}

/// Segments of each channel occupied by the subtree of its joint.
pub fn occupancy(i: &Instance, d: &Drawing, ch: &Channel) -> Result<Vec<usize>, AnalyzerError> {
    let children = i.tree.children();
    let mut occ = Vec::new();
    for v in subtree(&children, ch.joint) {
        occ.extend(ch.locate(d.point(v)?));
    }
    Ok(occ.into_iter().sorted().dedup().collect())
}

pub fn property5(ev: &CutEvent, channels: &[Channel], i: &Instance, d: &Drawing) -> Result<Vec<Property5>, AnalyzerError> {
    let (pu, pv) = (d.point(ev.edge.0)?, d.point(ev.edge.1)?);
    let mut out = Vec::new();
    for &c in &ev.cut_twice {
        let ch = &channels[c];
        let cut_segments = ch.segments_met(pu, pv);
        let occupied = occupancy(i, d, ch)?;
        let premise = cut_segments.len() >= 2 && cut_segments.iter().all(|s| occupied.contains(s));
        let holds = !premise || occupied.iter().any(|s| !cut_segments.contains(s));
        out.push(Property5 { channel: c, cut_segments, occupied, premise, holds });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connection {
    OneSide,
    TwoSideLow,
    TwoSideHigh,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionEntry {
    pub channel: usize,
    pub a: usize,
    pub b: usize,
    pub kind: Connection,
}

/// For every ordered pair of distinct segments `(a, b)` of each channel:
/// two-side when an elongation of segment `a` enters segment `b`, low when
/// the entering elongation starts at the bendpoint nearer to the root.
/// Consecutive segments always count as one-side.
pub fn classify_connections(channels: &[Channel]) -> Vec<ConnectionEntry> {
    let mut out = Vec::new();
    for (ci, ch) in channels.iter().enumerate() {
        let n = ch.segments.len();
        for (a, b) in (0..n).cartesian_product(0..n).filter(|(a, b)| a != b) {
            let kind = match (&ch.segments[a].elongation, a.abs_diff(b)) {
                (Some(rays), gap) if gap >= 2 => {
                    let hit: Vec<bool> = rays.iter().map(|(s, dir)| ch.meets(b, s, dir, &ray_interval())).collect();
                    let near = usize::from(rays[1].0.dist2(&ch.root) < rays[0].0.dist2(&ch.root));
                    if hit[near] {
                        Connection::TwoSideLow
                    } else if hit[1 - near] {
                        Connection::TwoSideHigh
                    } else {
                        Connection::OneSide
                    }
                }
                _ => Connection::OneSide,
            };
            out.push(ConnectionEntry { channel: ci, a: a + 1, b: b + 1, kind });
        }
    }
    out
}

/// `I(a,b)` and `I(c,d)` are disjoint when `a, d` are in `{1, 2}` and
/// `b, c` in `{3, 4}`.
pub fn intersections_disjoint(first: (usize, usize), second: (usize, usize)) -> bool {
    let low = |v: usize| v == 1 || v == 2;
    let high = |v: usize| v == 3 || v == 4;
    low(first.0) && low(second.1) && high(first.1) && high(second.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjointness_rule() {
        assert!(intersections_disjoint((1, 3), (4, 2)));
        assert!(!intersections_disjoint((1, 3), (2, 4)));
        assert!(intersections_disjoint((2, 4), (3, 1)));
    }
}
