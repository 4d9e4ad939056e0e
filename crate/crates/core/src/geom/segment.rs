use super::{orient_sign, GeomError, Point};

/// Closed straight-line segment with distinct endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn has_endpoint(&self, p: &Point) -> bool {
        &self.a == p || &self.b == p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Disjoint,
    SharedEndpointOnly,
    ProperCrossing,
    Touching,
    Overlapping,
}

impl Relation {
    /// Everything except `Disjoint` and `SharedEndpointOnly` breaks planarity.
    pub fn is_violation(self) -> bool {
        matches!(self, Relation::ProperCrossing | Relation::Touching | Relation::Overlapping)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    Inside,
    Boundary,
    Outside,
}

/// `p` lies on the closed segment `ab` (assumes `a != b`).
pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient_sign(a, b, p) == 0 && within_box(p, a, b)
}

fn within_box(p: &Point, a: &Point, b: &Point) -> bool {
    let (xlo, xhi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    xlo <= &p.x && &p.x <= xhi && ylo <= &p.y && &p.y <= yhi
}

pub fn segment_relation(s1: &Segment, s2: &Segment) -> Relation {
    let (a1, b1, a2, b2) = (&s1.a, &s1.b, &s2.a, &s2.b);
    let o1 = orient_sign(a1, b1, a2);
    let o2 = orient_sign(a1, b1, b2);
    if o1 == 0 && o2 == 0 {
        return collinear_relation(s1, s2);
    }
    if o1 * o2 > 0 {
        return Relation::Disjoint;
    }
    let o3 = orient_sign(a2, b2, a1);
    let o4 = orient_sign(a2, b2, b1);
    if o3 * o4 > 0 {
        return Relation::Disjoint;
    }
    // The supporting lines meet in exactly one point, which lies on both segments.
    let meet = if o1 == 0 {
        Some((a2, s1))
    } else if o2 == 0 {
        Some((b2, s1))
    } else if o3 == 0 {
        Some((a1, s2))
    } else if o4 == 0 {
        Some((b1, s2))
    } else {
        None
    };
    match meet {
        None => Relation::ProperCrossing,
        Some((p, other)) if other.has_endpoint(p) => Relation::SharedEndpointOnly,
        Some(_) => Relation::Touching,
    }
}

fn collinear_relation(s1: &Segment, s2: &Segment) -> Relation {
    // Lexicographic order on points is a total order along any line.
    let (lo1, hi1) = if s1.a <= s1.b { (&s1.a, &s1.b) } else { (&s1.b, &s1.a) };
    let (lo2, hi2) = if s2.a <= s2.b { (&s2.a, &s2.b) } else { (&s2.b, &s2.a) };
    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    if lo < hi {
        Relation::Overlapping
    } else if lo == hi {
        // A single common point that is an endpoint of both.
        Relation::SharedEndpointOnly
    } else {
        Relation::Disjoint
    }
}

pub fn point_in_triangle(p: &Point, t: (&Point, &Point, &Point)) -> Result<Position, GeomError> {
    let (a, b, c) = t;
    let turn = orient_sign(a, b, c);
    if turn == 0 {
        return Err(GeomError::DegenerateTriangle);
    }
    let s = [orient_sign(a, b, p), orient_sign(b, c, p), orient_sign(c, a, p)];
    if s.iter().any(|&v| v == -turn) {
        Ok(Position::Outside)
    } else if s.iter().any(|&v| v == 0) {
        Ok(Position::Boundary)
    } else {
        Ok(Position::Inside)
    }
}
