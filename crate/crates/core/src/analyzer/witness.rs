//! Hand-built drawings exhibiting each analyzer predicate, with exact
//! integer coordinates.

use crate::geom::Point;
use crate::model::{Drawing, Instance, PathGraph, RootedTree, VertexId};

use super::{CellIndex, CellRef};

#[derive(Debug, Clone)]
pub struct Witness {
    pub name: &'static str,
    pub instance: Instance,
    pub drawing: Drawing,
    pub cells: CellIndex,
}

struct Builder {
    parent: Vec<Option<VertexId>>,
    pos: Vec<Point>,
    joints: Vec<VertexId>,
    cells: Vec<CellRef>,
    /// Path prefix; remaining vertices follow in id order.
    path: Vec<VertexId>,
}

impl Builder {
    fn new(root: (i64, i64)) -> Self {
        Builder {
            parent: vec![None],
            pos: vec![Point::int(root.0, root.1)],
            joints: Vec::new(),
            cells: Vec::new(),
            path: Vec::new(),
        }
    }

    fn add(&mut self, parent: VertexId, p: (i64, i64)) -> VertexId {
        self.parent.push(Some(parent));
        self.pos.push(Point::int(p.0, p.1));
        self.parent.len() - 1
    }

    fn joint(&mut self, p: (i64, i64)) -> VertexId {
        let j = self.add(0, p);
        self.joints.push(j);
        j
    }

    /// A joint followed by a chain of descendants.
    fn root_path(&mut self, pts: &[(i64, i64)]) -> Vec<VertexId> {
        let mut out = vec![self.joint(pts[0])];
        for &p in &pts[1..] {
            let last = out[out.len() - 1];
            out.push(self.add(last, p));
        }
        out
    }

    fn cell(&mut self, joint: usize, vertices: Vec<VertexId>) {
        self.path.extend_from_slice(&vertices);
        self.cells.push(CellRef { joint, vertices });
    }

    fn finish(self, name: &'static str) -> Witness {
        let n = self.parent.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for &v in &self.path {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
        order.extend((0..n).filter(|&v| !seen[v]));
        let instance = Instance::new(RootedTree::from_parents(self.parent), PathGraph::new(order));
        let drawing = Drawing::new(self.pos).expect("witness points are distinct");
        Witness { name, instance, drawing, cells: CellIndex { joints: self.joints, cells: self.cells } }
    }
}

/// Two cells of joint `h` that no line separates, and a cell of joint
/// `sep` whose path winds around both vertices of the second cell.
fn passage_gadget(b: &mut Builder, h: usize, sep: usize, dx: i64) {
    let (jh, js) = (b.joints[h], b.joints[sep]);
    let at = |x: i64, y: i64| (x + dx, y);
    let l = b.add(jh, at(-10, 0));
    let r = b.add(jh, at(10, 0));
    let up = b.add(l, at(0, 5));
    let down = b.add(r, at(0, -15));
    b.cell(h, vec![l, r]);
    b.cell(h, vec![up, down]);
    let inner = b.add(js, at(5, 2));
    let ring = [(-5, 15), (-5, 2), (5, 2), (5, 15), (20, 15), (20, -20), (5, -20), (5, -10), (-5, -10), (-5, -20)];
    let mut sep_cell = Vec::new();
    for (x, y) in ring {
        let v = if (x, y) == (5, 2) {
            inner
        } else if (x, y) == (-5, 2) {
            b.add(inner, at(x, y))
        } else {
            b.add(js, at(x, y))
        };
        sep_cell.push(v);
    }
    b.cell(sep, sep_cell);
}

/// One passage: cells 0 and 1 on the first joint, separated by cell 2 on
/// the second. The separating path has apexes with open and closed doors.
pub fn passage() -> Witness {
    let mut b = Builder::new((0, -40));
    b.joint((-30, -30));
    b.joint((10, 20));
    passage_gadget(&mut b, 0, 1, 0);
    b.finish("passage")
}

/// Two passages on four joints; `pairs` gives (joint, separating joint)
/// for each.
pub fn passage_pair(name: &'static str, pairs: [(usize, usize); 2]) -> Witness {
    let mut b = Builder::new((0, -100));
    for k in 0..4 {
        b.joint((-60 + 40 * k, -60));
    }
    passage_gadget(&mut b, pairs[0].0, pairs[0].1, 0);
    passage_gadget(&mut b, pairs[1].0, pairs[1].1, 100);
    b.finish(name)
}

/// Three cells, every two of them split by a line.
pub fn separable_cells() -> Witness {
    let mut b = Builder::new((0, -40));
    let j0 = b.joint((-20, -20));
    let j1 = b.joint((20, -20));
    let a: Vec<VertexId> = [(-10, 0), (-8, 4)].iter().map(|&p| b.add(j0, p)).collect();
    let c: Vec<VertexId> = [(10, 0), (8, 4)].iter().map(|&p| b.add(j0, p)).collect();
    let s: Vec<VertexId> = [(0, -5), (0, 10)].iter().map(|&p| b.add(j1, p)).collect();
    b.cell(0, a);
    b.cell(0, c);
    b.cell(1, s);
    b.finish("separable-cells")
}

/// Root at the origin and three joints whose root paths are given; the
/// middle one owns the channel.
pub fn channel_witness(name: &'static str, paths: [&[(i64, i64)]; 3]) -> Witness {
    let mut b = Builder::new((0, 0));
    for p in paths {
        b.root_path(p);
    }
    b.finish(name)
}

/// Two neighbouring paths that spiral with three enclosing bends.
pub fn three_channel() -> Witness {
    channel_witness(
        "three-channel",
        [
            &[(20, 0), (20, 20), (0, 20), (0, 8)],
            &[(16, 1), (18, 18), (2, 18), (2, 9)],
            &[(16, 2), (16, 16), (4, 16), (4, 10)],
        ],
    )
}

/// Straight root paths: no enclosing bend.
pub fn straight_channel() -> Witness {
    channel_witness("straight-channel", [&[(10, 0), (20, 0)], &[(10, 5), (20, 10)], &[(10, 10), (20, 20)]])
}

/// Five nested hooks (out, up, left); returns the builder and the joints.
fn hooks(b: &mut Builder) -> Vec<Vec<VertexId>> {
    (1..=5)
        .map(|k: i64| {
            let (jx, jy, top) = if k % 2 == 1 { (40 - 4 * k, 4 * k, 60 - 4 * k) } else { (41 - 4 * k, 4 * k + 1, 60 - 4 * k) };
            b.root_path(&[(jx, jy), (jx, top), (0, top)])
        })
        .collect()
}

/// Nested hooks plus one path edge `s`-`t` between two leaves of the
/// second joint, visited first.
pub fn hooks_with_edge(name: &'static str, s: (i64, i64), t: (i64, i64), extra: &[(usize, (i64, i64))]) -> Witness {
    let mut b = Builder::new((0, 0));
    let paths = hooks(&mut b);
    for &(k, p) in extra {
        b.add(paths[k][0], p);
    }
    let s = b.add(paths[1][0], s);
    let t = b.add(paths[1][0], t);
    b.path.extend([s, t]);
    b.finish(name)
}

/// A path edge from the first to the second segment of the outermost
/// inner channel that cuts across the corner of the two channels inside
/// it, each of which has vertices in all three of its segments.
pub fn blocking_cut() -> Witness {
    hooks_with_edge("blocking-cut", (9, 2), (32, 45), &[(2, (29, 30)), (3, (20, 12))])
}

/// Hooks only: the channel segments connect on one side.
pub fn one_side() -> Witness {
    let mut b = Builder::new((0, 0));
    hooks(&mut b);
    b.finish("one-side")
}

pub fn independent_passages() -> Witness {
    passage_pair("independent-passages", [(0, 1), (2, 3)])
}

pub fn nested_passages() -> Witness {
    passage_pair("nested-passages", [(0, 3), (1, 2)])
}

pub fn interconnected_passages() -> Witness {
    passage_pair("interconnected-passages", [(0, 2), (1, 3)])
}

/// An edge that crosses into the first segment and whose elongation
/// enters the second, while the edge itself stays out of it.
pub fn simple_double_cut() -> Witness {
    hooks_with_edge("simple-double-cut", (16, 6), (3, 2), &[])
}

/// An edge that crosses the border of the second segment and also runs
/// through the first.
pub fn non_simple_double_cut() -> Witness {
    hooks_with_edge("non-simple-double-cut", (39, 8), (26, 3), &[])
}

/// The ray from the bendpoint nearer to the root enters the third segment.
pub fn low_intersection() -> Witness {
    channel_witness(
        "low-intersection",
        [
            &[(-12, -4), (-10, -9), (12, -10), (-5, -11)],
            &[(-10, 3), (8, -2), (-4, 6), (-7, 9)],
            &[(-6, -4), (-11, -6), (2, -5), (-10, -7)],
        ],
    )
}

/// Only the ray from the farther bendpoint enters the third segment.
pub fn high_intersection() -> Witness {
    channel_witness(
        "high-intersection",
        [
            &[(6, 9), (-3, 8), (-9, -1), (-9, 5)],
            &[(-6, -12), (8, 12), (3, -6), (9, 4)],
            &[(-9, -12), (-3, 6), (-10, -8), (-12, 11)],
        ],
    )
}

pub fn corpus() -> Vec<Witness> {
    vec![
        passage(),
        independent_passages(),
        nested_passages(),
        interconnected_passages(),
        separable_cells(),
        three_channel(),
        straight_channel(),
        blocking_cut(),
        one_side(),
        simple_double_cut(),
        non_simple_double_cut(),
        low_intersection(),
        high_intersection(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::{
        analyze, classify_passage_pair, compute_channels, detect_cuts, detect_passages, enumerate_doors,
        passage_premise_holds, property5, Connection, CutKind, DoorStatus, PairClass,
    };
    use crate::geom::Scalar;
    use crate::model::tree_depth;
    use itertools::Itertools;

    fn last_edge(w: &Witness) -> (VertexId, VertexId) {
        let n = w.instance.len();
        (n - 2, n - 1)
    }

    #[test]
    fn corpus_names_are_unique() {
        let names: Vec<&str> = corpus().iter().map(|w| w.name).collect();
        assert!(names.iter().all_unique());
        for w in corpus() {
            analyze(&w.instance, &w.drawing, &w.cells, None).unwrap();
        }
    }

    #[test]
    fn passage_has_open_and_closed_doors() {
        let w = passage();
        let ps = detect_passages(&w.instance, &w.drawing, &w.cells).unwrap();
        assert_eq!(ps.len(), 1);
        let p = &ps[0];
        assert_eq!((p.c1, p.c2, p.c_sep, p.joint, p.sep_joint), (0, 1, 2, 0, 1));
        assert!(passage_premise_holds(p, &w.drawing, &w.cells).unwrap());
        assert!(p.two_edges_crossed());
        let doors = enumerate_doors(p, &w.instance, &w.drawing, &w.cells).unwrap();
        let closed: Vec<_> = doors.iter().filter(|d| d.status == DoorStatus::Closed).collect();
        assert!(!closed.is_empty());
        assert!(doors.iter().any(|d| d.status == DoorStatus::Open));
        // apex (5, 2) over the base from (10, 0) to (0, 5)
        assert!(closed.iter().any(|d| d.apex == 7 && d.base == (4, 5)));
    }

    #[test]
    fn separable_cells_give_no_passage() {
        let w = separable_cells();
        assert!(detect_passages(&w.instance, &w.drawing, &w.cells).unwrap().is_empty());
    }

    #[test]
    fn passage_pairs_classify_by_joint_order() {
        for (w, class) in [
            (independent_passages(), PairClass::Independent),
            (nested_passages(), PairClass::Nested),
            (interconnected_passages(), PairClass::Interconnected),
        ] {
            let ps = detect_passages(&w.instance, &w.drawing, &w.cells).unwrap();
            assert_eq!(ps.len(), 2, "{}", w.name);
            let got = classify_passage_pair((ps[0].joint, ps[0].sep_joint), (ps[1].joint, ps[1].sep_joint)).unwrap();
            assert_eq!(got, class, "{}", w.name);
            for p in &ps {
                let doors = enumerate_doors(p, &w.instance, &w.drawing, &w.cells).unwrap();
                assert!(doors.iter().any(|d| d.status == DoorStatus::Closed), "{}", w.name);
            }
        }
    }

    #[test]
    fn doors_survive_orientation_preserving_affine_maps() {
        let w = passage();
        let base = detect_passages(&w.instance, &w.drawing, &w.cells).unwrap();
        let doors = enumerate_doors(&base[0], &w.instance, &w.drawing, &w.cells).unwrap();
        for (a, b, c, dd) in [(2, 1, 1, 3), (1, 0, 0, 1), (3, -1, 2, 1)] {
            let pts: Vec<Point> = (0..w.instance.len())
                .map(|v| {
                    let p = w.drawing.point(v).unwrap();
                    let x = p.x.clone() * Scalar::from_int(a) + p.y.clone() * Scalar::from_int(b) + Scalar::from_int(7);
                    let y = p.x.clone() * Scalar::from_int(c) + p.y.clone() * Scalar::from_int(dd) - Scalar::from_int(3);
                    Point { x, y }
                })
                .collect();
            let moved = Drawing::new(pts).unwrap();
            let ps = detect_passages(&w.instance, &moved, &w.cells).unwrap();
            assert_eq!(ps, base);
            assert_eq!(enumerate_doors(&ps[0], &w.instance, &moved, &w.cells).unwrap(), doors);
        }
    }

    #[test]
    fn channel_counts() {
        for (w, x) in [(three_channel(), 3), (straight_channel(), 0), (one_side(), 2)] {
            let ch = compute_channels(&w.instance, &w.drawing, &w.cells.joints).unwrap();
            assert_eq!(ch[0].x, x, "{}", w.name);
            assert_eq!(ch[0].segments.len(), x + 1);
            assert!(ch.iter().all(|c| c.x + 1 <= tree_depth(&w.instance.tree)), "{}", w.name);
        }
    }

    #[test]
    fn blocking_cut_runs_through_two_channels() {
        let w = blocking_cut();
        let ch = compute_channels(&w.instance, &w.drawing, &w.cells.joints).unwrap();
        let cuts = detect_cuts(&w.instance, &w.drawing, &ch, None).unwrap();
        let e = last_edge(&w);
        let ev = cuts.iter().find(|c| c.kind == CutKind::BlockingCut && c.edge == e).expect("blocking cut");
        assert_eq!(ev.channel, 0);
        assert_eq!(ev.segments, (1, 2));
        assert_eq!(ev.cut_twice, vec![1, 2]);
        let p5 = property5(ev, &ch, &w.instance, &w.drawing).unwrap();
        assert!(p5.iter().any(|r| r.premise && r.holds));
        assert!(p5.iter().all(|r| !r.premise || r.holds));
    }

    #[test]
    fn double_cuts() {
        for (w, kind) in [(simple_double_cut(), CutKind::DoubleCutSimple), (non_simple_double_cut(), CutKind::DoubleCutNonSimple)] {
            let ch = compute_channels(&w.instance, &w.drawing, &w.cells.joints).unwrap();
            let cuts = detect_cuts(&w.instance, &w.drawing, &ch, None).unwrap();
            let e = last_edge(&w);
            let mine: Vec<_> = cuts.iter().filter(|c| c.edge == e).collect();
            assert_eq!(mine.len(), 1, "{}", w.name);
            assert_eq!(mine[0].kind, kind);
            assert_eq!((mine[0].channel, mine[0].segments), (0, (1, 2)));
            assert!(mine[0].extremal);
        }
    }

    #[test]
    fn connections() {
        let kinds = |w: &Witness| {
            let ch = compute_channels(&w.instance, &w.drawing, &w.cells.joints).unwrap();
            crate::analyzer::classify_connections(&ch)
        };
        assert!(kinds(&one_side()).iter().all(|c| c.kind == Connection::OneSide));
        let low = kinds(&low_intersection());
        assert!(low.iter().any(|c| (c.a, c.b, c.kind) == (1, 3, Connection::TwoSideLow)));
        let high = kinds(&high_intersection());
        assert!(high.iter().any(|c| (c.a, c.b, c.kind) == (1, 3, Connection::TwoSideHigh)));
        for set in [&low, &high] {
            assert!(set.iter().filter(|c| c.a.abs_diff(c.b) == 1).all(|c| c.kind == Connection::OneSide));
        }
    }
}
