use super::{orient_sign, point_on_segment, segment_relation, GeomError, Line, Point, Position, Relation, Scalar, Segment};

/// Extreme points in counter-clockwise order starting at the lexicographically
/// least point. Collinear boundary points are dropped; duplicates are merged.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient_sign(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient_sign(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Position of `p` relative to a hull as returned by [`convex_hull`]
/// (which may also be a single point or a segment).
pub fn point_in_convex_polygon(hull: &[Point], p: &Point) -> Position {
    match hull.len() {
        0 => Position::Outside,
        1 => {
            if &hull[0] == p {
                Position::Boundary
            } else {
                Position::Outside
            }
        }
        2 => {
            if point_on_segment(p, &hull[0], &hull[1]) {
                Position::Boundary
            } else {
                Position::Outside
            }
        }
        n => {
            let mut on_edge = false;
            for i in 0..n {
                let s = orient_sign(&hull[i], &hull[(i + 1) % n], p);
                if s < 0 {
                    return Position::Outside;
                }
                if s == 0 {
                    on_edge = true;
                }
            }
            if on_edge {
                Position::Boundary
            } else {
                Position::Inside
            }
        }
    }
}

fn hull_edges(hull: &[Point]) -> Vec<Segment> {
    match hull.len() {
        0 | 1 => Vec::new(),
        2 => vec![Segment::new(hull[0].clone(), hull[1].clone()).expect("distinct hull points")],
        n => (0..n)
            .map(|i| Segment::new(hull[i].clone(), hull[(i + 1) % n].clone()).expect("distinct hull points"))
            .collect(),
    }
}

fn hulls_meet(ha: &[Point], hb: &[Point]) -> bool {
    if ha.iter().any(|p| point_in_convex_polygon(hb, p) != Position::Outside) {
        return true;
    }
    if hb.iter().any(|p| point_in_convex_polygon(ha, p) != Position::Outside) {
        return true;
    }
    let eb = hull_edges(hb);
    hull_edges(ha)
        .iter()
        .any(|e| eb.iter().any(|f| segment_relation(e, f) != Relation::Disjoint))
}

/// Closest point of segment `ab` to `p` (exact) and its squared distance.
pub(crate) fn closest_on_segment(p: &Point, a: &Point, b: &Point) -> (Point, Scalar) {
    let d = b.sub(a);
    let len2 = d.dot(&d);
    let t = &p.sub(a).dot(&d) / &len2;
    let q = if t.signum() <= 0 {
        a.clone()
    } else if t >= Scalar::one() {
        b.clone()
    } else {
        a.add(&d.scale(&t))
    };
    let dist = q.dist2(p);
    (q, dist)
}

fn closest_to_hull(p: &Point, hull: &[Point]) -> (Point, Scalar) {
    if hull.len() == 1 {
        return (hull[0].clone(), hull[0].dist2(p));
    }
    hull_edges(hull)
        .iter()
        .map(|e| closest_on_segment(p, e.a(), e.b()))
        .min_by(|x, y| x.1.cmp(&y.1))
        .expect("hull has at least one edge")
}

/// A line strictly separating `set_a` from `set_b`, if one exists.
///
/// Decided by hull disjointness; the returned line is the perpendicular
/// bisector of a closest pair of hull points. Hulls that touch are not
/// separable.
pub fn linear_separator(set_a: &[Point], set_b: &[Point]) -> Result<Option<Line>, GeomError> {
    if set_a.is_empty() || set_b.is_empty() {
        return Err(GeomError::EmptySet);
    }
    if set_a.iter().any(|p| set_b.contains(p)) {
        return Err(GeomError::SharedPoint);
    }
    let ha = convex_hull(set_a);
    let hb = convex_hull(set_b);
    if hulls_meet(&ha, &hb) {
        return Ok(None);
    }
    let mut best: Option<(Point, Point, Scalar)> = None;
    let mut consider = |p: Point, q: Point, d: Scalar| {
        if best.as_ref().is_none_or(|b| d < b.2) {
            best = Some((p, q, d));
        }
    };
    for p in &ha {
        let (q, d) = closest_to_hull(p, &hb);
        consider(p.clone(), q, d);
    }
    for q in &hb {
        let (p, d) = closest_to_hull(q, &ha);
        consider(p, q.clone(), d);
    }
    let (p, q, _) = best.expect("nonempty hulls");
    let n = q.sub(&p);
    let c = n.dot(&p.midpoint(&q));
    Ok(Some(Line::new(n.x, n.y, c)?))
}
