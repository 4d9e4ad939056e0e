//! Exact rational 2D geometry kernel.
//!
//! Every predicate here is decided with exact arithmetic. Coordinates are
//! [`Scalar`]s (arbitrary precision rationals); small integer inputs take an
//! `i128` fast path that is exact as well.

pub mod int;
mod hull;
mod line;
mod scalar;
mod segment;

use std::fmt;

use thiserror::Error;

pub use hull::{convex_hull, linear_separator, point_in_convex_polygon};
pub use line::{Line, Wedge};
pub use scalar::Scalar;
pub use segment::{point_in_triangle, point_on_segment, segment_relation, Position, Relation, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("triangle vertices are collinear")]
    DegenerateTriangle,
    #[error("line coefficients A and B are both zero")]
    DegenerateLine,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("wedge rays must be strictly clockwise with angle below pi")]
    BadWedge,
    #[error("point sets share a point")]
    SharedPoint,
    #[error("point set is empty")]
    EmptySet,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: Scalar::from_int(x), y: Scalar::from_int(y) }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point { x: Scalar::from_ratio(xn, xd), y: Scalar::from_ratio(yn, yd) }
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point { x: &self.x - &other.x, y: &self.y - &other.y }
    }

    pub fn add(&self, other: &Point) -> Point {
        Point { x: &self.x + &other.x, y: &self.y + &other.y }
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point { x: &self.x * k, y: &self.y * k }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = Scalar::from_ratio(1, 2);
        Point { x: &(&self.x + &other.x) * &half, y: &(&self.y + &other.y) * &half }
    }

    pub fn dot(&self, other: &Point) -> Scalar {
        &(&self.x * &other.x) + &(&self.y * &other.y)
    }

    pub fn cross(&self, other: &Point) -> Scalar {
        &(&self.x * &other.y) - &(&self.y * &other.x)
    }

    pub fn dist2(&self, other: &Point) -> Scalar {
        let d = self.sub(other);
        d.dot(&d)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn as_small(&self) -> Option<(i64, i64)> {
        const LIMIT: i64 = 1 << 60;
        let x = self.x.as_i64()?;
        let y = self.y.as_i64()?;
        (x.abs() < LIMIT && y.abs() < LIMIT).then_some((x, y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Ccw => 1,
            Orientation::Cw => -1,
            Orientation::Collinear => 0,
        }
    }

    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    fn from_sign(s: i8) -> Orientation {
        match s {
            1 => Orientation::Ccw,
            -1 => Orientation::Cw,
            _ => Orientation::Collinear,
        }
    }
}

/// Sign of the cross product `(q - p) x (r - p)`.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    Orientation::from_sign(orient_sign(p, q, r))
}

pub(crate) fn orient_sign(p: &Point, q: &Point, r: &Point) -> i8 {
    if let (Some(a), Some(b), Some(c)) = (p.as_small(), q.as_small(), r.as_small()) {
        return orient_i64(a, b, c);
    }
    q.sub(p).cross(&r.sub(p)).signum()
}

/// Exact orientation for integer coordinates below 2^60 in magnitude.
#[inline]
pub fn orient_i64(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> i8 {
    let ux = q.0 as i128 - p.0 as i128;
    let uy = q.1 as i128 - p.1 as i128;
    let vx = r.0 as i128 - p.0 as i128;
    let vy = r.1 as i128 - p.1 as i128;
    let c = ux * vy - uy * vx;
    c.signum() as i8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orient_examples() {
        let o = Point::int(0, 0);
        assert_eq!(orient(&o, &Point::int(1, 0), &Point::int(0, 1)), Orientation::Ccw);
        assert_eq!(orient(&o, &Point::int(1, 1), &Point::int(2, 2)), Orientation::Collinear);
        assert_eq!(orient(&o, &Point::int(0, 1), &Point::int(1, 0)), Orientation::Cw);
    }

    #[test]
    fn orient_rational_and_huge() {
        let p = Point::ratio(1, 3, 1, 7);
        let q = Point::ratio(2, 3, 2, 7);
        let r = Point::ratio(1, 1, 3, 7);
        assert_eq!(orient(&p, &q, &r), Orientation::Collinear);
        let big = Scalar::from_int(i64::MAX);
        let a = Point::new(big.clone(), big.clone());
        let b = Point::new(&big + &Scalar::one(), &big + &Scalar::one());
        let c = Point::new(&big + &Scalar::from_int(2), &big + &Scalar::from_int(3));
        assert_eq!(orient(&a, &b, &c), Orientation::Ccw);
    }
}
