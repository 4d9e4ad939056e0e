use proptest::prelude::*;
use sge_core::counterexample::{build_desk, size_report, CounterexampleParams};
use sge_core::depth2::embed_depth2;
use sge_core::format::{parse_drawing, parse_instance, write_drawing, write_instance};
use sge_core::geom::{convex_hull, linear_separator, point_in_convex_polygon, segment_relation, Position, Segment};
use sge_core::leveltree::{level_planar_by_orders, search_level_planar, LevelOutcome, LevelTree};
use sge_core::model::validate_instance;
use sge_core::planarity::{check_drawing, check_simultaneous, search_embedding, SearchOutcome, Strategy as Check};
use sge_core::{orient, Drawing, Instance, PathGraph, Point, RootedTree, Scalar};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

fn point() -> impl Strategy<Value = Point> {
    (scalar(), scalar()).prop_map(|(x, y)| Point::new(x, y))
}

fn distinct_points(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::btree_set((-30i64..=30, -30i64..=30), n).prop_map(|s| s.into_iter().map(|(x, y)| Point::int(x, y)).collect())
}

/// Random recursive tree and a random spanning path on `n` vertices.
fn instance(n: usize) -> impl Strategy<Value = Instance> {
    let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
    (parents, Just((0..n).collect::<Vec<usize>>()).prop_shuffle()).prop_map(move |(ps, order)| {
        let parent = std::iter::once(None).chain(ps.into_iter().map(Some)).collect();
        Instance::new(RootedTree::from_parents(parent), PathGraph::new(order))
    })
}

fn drawn_instance(max_n: usize) -> impl Strategy<Value = (Instance, Drawing)> {
    (1..=max_n).prop_flat_map(|n| {
        (instance(n), distinct_points(n)).prop_map(|(i, pts)| (i, Drawing::new(pts).unwrap()))
    })
}

/// Depth-2 tree: every vertex hangs off the root or off a child of the root.
fn depth2_instance(max_n: usize) -> impl Strategy<Value = Instance> {
    (2..=max_n).prop_flat_map(|n| {
        let choice = prop::collection::vec(any::<prop::sample::Index>(), n);
        (choice, Just((0..n).collect::<Vec<usize>>()).prop_shuffle()).prop_map(move |(idx, order)| {
            let mut parent = vec![None; n];
            let mut firsts = Vec::new();
            for v in 1..n {
                let p = if firsts.is_empty() || idx[v].index(2) == 0 { 0 } else { firsts[idx[v].index(firsts.len())] };
                if p == 0 {
                    firsts.push(v);
                }
                parent[v] = Some(p);
            }
            Instance::new(RootedTree::from_parents(parent), PathGraph::new(order))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn orient_is_antisymmetric(p in point(), q in point(), r in point()) {
        prop_assert_eq!(orient(&p, &q, &r), orient(&p, &r, &q).reversed());
        prop_assert_eq!(orient(&p, &q, &r), orient(&q, &r, &p));
    }

    #[test]
    fn relation_is_symmetric(a in point(), b in point(), c in point(), d in point()) {
        prop_assume!(a != b && c != d);
        let s = Segment::new(a.clone(), b.clone()).unwrap();
        let t = Segment::new(c, d).unwrap();
        prop_assert_eq!(segment_relation(&s, &t), segment_relation(&t, &s));
        let rev = Segment::new(b, a).unwrap();
        prop_assert_eq!(segment_relation(&s, &t), segment_relation(&rev, &t));
    }

    #[test]
    fn hull_is_idempotent_and_covers(pts in prop::collection::vec(point(), 1..12)) {
        let h = convex_hull(&pts);
        prop_assert_eq!(convex_hull(&h), h.clone());
        for p in &pts {
            prop_assert_ne!(point_in_convex_polygon(&h, p), Position::Outside);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn separator_is_sound(a in prop::collection::vec(point(), 1..6), b in prop::collection::vec(point(), 1..6)) {
        prop_assume!(a.iter().all(|p| !b.contains(p)));
        if let Some(l) = linear_separator(&a, &b).unwrap() {
            let sa: Vec<i8> = a.iter().map(|p| l.side(p)).collect();
            let sb: Vec<i8> = b.iter().map(|p| l.side(p)).collect();
            prop_assert!(sa.iter().all(|&s| s != 0 && s == sa[0]));
            prop_assert!(sb.iter().all(|&s| s == -sa[0]));
        }
    }

    #[test]
    fn naive_and_sweep_agree((i, d) in drawn_instance(12)) {
        for edges in [i.tree.edges(), i.path.edges()] {
            let naive = check_drawing(&edges, &d, Check::Naive).unwrap();
            let sweep = check_drawing(&edges, &d, Check::Sweep).unwrap();
            prop_assert_eq!(naive, sweep);
        }
    }

    #[test]
    fn affine_maps_keep_planarity((i, d) in drawn_instance(9), a in 1i64..4, b in -3i64..4, c in -3i64..4, e in 1i64..4) {
        prop_assume!(a * e - b * c > 0);
        let (a, b, c, e) = (Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c), Scalar::from_int(e));
        let moved = d.map_points(|p| Point::new(&(&a * &p.x) + &(&b * &p.y) + Scalar::from_ratio(1, 3), &(&c * &p.x) + &(&e * &p.y))).unwrap();
        let before = check_simultaneous(&i, &d).unwrap();
        let after = check_simultaneous(&i, &moved).unwrap();
        prop_assert_eq!(before.0.planar, after.0.planar);
        prop_assert_eq!(before.1.planar, after.1.planar);
    }

    #[test]
    fn files_round_trip((i, _) in drawn_instance(12), pts in prop::collection::btree_set((scalar(), scalar()), 1..12)) {
        prop_assert_eq!(parse_instance(&write_instance(&i)).unwrap(), i);
        let d = Drawing::new(pts.into_iter().map(|(x, y)| Point::new(x, y)).collect()).unwrap();
        prop_assert_eq!(parse_drawing(&write_drawing(&d)).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn depth2_embeddings_check(i in depth2_instance(12)) {
        prop_assert!(validate_instance(&i).is_clean());
        let d = embed_depth2(&i).unwrap();
        let (t, p) = check_simultaneous(&i, &d).unwrap();
        prop_assert!(t.planar && p.planar);
    }

    #[test]
    fn proper_level_search_matches_orders(parent_gaps in prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), 1..7)) {
        let mut parent = vec![None];
        let mut phi = vec![2usize];
        for (idx, up) in parent_gaps {
            let p = idx.index(parent.len());
            let l = if up && phi[p] > 1 { phi[p] - 1 } else { phi[p] + 1 };
            parent.push(Some(p));
            phi.push(l);
        }
        let k = *phi.iter().max().unwrap();
        let t = LevelTree::new(RootedTree::from_parents(parent), phi, k).unwrap();
        let width = t.levels().iter().map(Vec::len).max().unwrap();
        let found = matches!(search_level_planar(&t, width, u64::MAX).unwrap(), LevelOutcome::Found(_));
        prop_assert_eq!(found, level_planar_by_orders(&t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// A drawing found on a subset is also available on the full set, and an
    /// exhausted search on the full set stays exhausted on any subset.
    #[test]
    fn search_is_monotone_and_verified(i in instance(5), pts in distinct_points(7), drop in any::<prop::sample::Index>()) {
        let full = search_embedding(&i, &pts, u64::MAX).unwrap();
        let mut sub = pts.clone();
        sub.remove(drop.index(sub.len()));
        let part = search_embedding(&i, &sub, u64::MAX).unwrap();
        if let SearchOutcome::Found(d) = &full {
            let (t, p) = check_simultaneous(&i, d).unwrap();
            prop_assert!(t.planar && p.planar);
        }
        if full == SearchOutcome::Exhausted {
            prop_assert_eq!(part.clone(), SearchOutcome::Exhausted);
        }
        if let SearchOutcome::Found(_) = part {
            prop_assert!(matches!(full, SearchOutcome::Found(_)));
        }
    }
}

#[test]
fn counterexample_is_deterministic_and_sizes_grow() {
    let a = build_desk(&CounterexampleParams::reduced(2, 1)).unwrap();
    let b = build_desk(&CounterexampleParams::reduced(2, 1)).unwrap();
    assert_eq!(a.instance, b.instance);
    assert_eq!(a.plan, b.plan);
    let size = |s, x| size_report(&CounterexampleParams::reduced(s, x)).unwrap().vertices;
    assert!(size(2, 1) < size(3, 1) && size(3, 1) < size(4, 1));
    assert!(size(2, 1) < size(2, 2) && size(3, 1) < size(3, 2));
    assert_eq!(size(2, 1), (a.instance.len() as u64).into());
}
