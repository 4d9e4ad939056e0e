use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{GeomError, Point, Scalar};

/// Line `A*x + B*y = C`, normalized to coprime integer coefficients with the
/// leading nonzero coefficient of `(A, B)` positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    a: Scalar,
    b: Scalar,
    c: Scalar,
}

impl Line {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<Self, GeomError> {
        if a.is_zero() && b.is_zero() {
            return Err(GeomError::DegenerateLine);
        }
        let lcm = [&a, &b, &c].iter().fold(BigInt::from(1), |acc, s| acc.lcm(s.denom()));
        let ints: Vec<BigInt> = [&a, &b, &c].iter().map(|s| s.numer() * (&lcm / s.denom())).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let lead = if !ints[0].is_zero() { &ints[0] } else { &ints[1] };
        if lead.is_negative() {
            g = -g;
        }
        let mk = |v: &BigInt| Scalar::new(v / &g, 1).expect("nonzero denominator");
        Ok(Line { a: mk(&ints[0]), b: mk(&ints[1]), c: mk(&ints[2]) })
    }

    pub fn through(p: &Point, q: &Point) -> Result<Self, GeomError> {
        if p == q {
            return Err(GeomError::DegenerateSegment);
        }
        // (y_q - y_p) x - (x_q - x_p) y = (y_q - y_p) x_p - (x_q - x_p) y_p
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = &(&a * &p.x) + &(&b * &p.y);
        Line::new(a, b, c)
    }

    /// Horizontal line `y = c`.
    pub fn horizontal(c: Scalar) -> Self {
        Line::new(Scalar::zero(), Scalar::one(), c).expect("B is nonzero")
    }

    pub fn coefficients(&self) -> (&Scalar, &Scalar, &Scalar) {
        (&self.a, &self.b, &self.c)
    }

    /// Sign of `A*x + B*y - C` at `p`.
    pub fn side(&self, p: &Point) -> i8 {
        (&(&(&self.a * &p.x) + &(&self.b * &p.y)) - &self.c).signum()
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        (&(&self.a * &other.b) - &(&self.b * &other.a)).is_zero()
    }

    pub fn intersection(&self, other: &Line) -> Option<Point> {
        let det = &(&self.a * &other.b) - &(&self.b * &other.a);
        if det.is_zero() {
            return None;
        }
        let x = &(&(&self.c * &other.b) - &(&self.b * &other.c)) / &det;
        let y = &(&(&self.a * &other.c) - &(&self.c * &other.a)) / &det;
        Some(Point::new(x, y))
    }
}

/// Open convex wedge at `apex` between two rays; `ray_hi` is counter-clockwise
/// of `ray_lo` by an angle strictly between 0 and pi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wedge {
    apex: Point,
    ray_lo: Point,
    ray_hi: Point,
}

impl Wedge {
    pub fn new(apex: Point, ray_lo: Point, ray_hi: Point) -> Result<Self, GeomError> {
        if ray_lo.is_origin() || ray_hi.is_origin() {
            return Err(GeomError::ZeroDirection);
        }
        if ray_lo.cross(&ray_hi).signum() <= 0 {
            return Err(GeomError::BadWedge);
        }
        Ok(Wedge { apex, ray_lo, ray_hi })
    }

    /// Wedge at the origin between the rays of slope `lo` and `hi` in the right half-plane.
    pub fn from_slopes(lo: &Scalar, hi: &Scalar) -> Result<Self, GeomError> {
        let origin = Point::int(0, 0);
        Wedge::new(origin, Point::new(Scalar::one(), lo.clone()), Point::new(Scalar::one(), hi.clone()))
    }

    pub fn apex(&self) -> &Point {
        &self.apex
    }

    pub fn contains_strictly(&self, p: &Point) -> bool {
        let d = p.sub(&self.apex);
        self.ray_lo.cross(&d).signum() > 0 && d.cross(&self.ray_hi).signum() > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_canonical() {
        let l1 = Line::new(Scalar::from_int(-2), Scalar::zero(), Scalar::from_int(-2)).unwrap();
        let l2 = Line::new(Scalar::from_ratio(1, 3), Scalar::zero(), Scalar::from_ratio(1, 3)).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(l1.coefficients().0, &Scalar::one());
        assert_eq!(l1.coefficients().2, &Scalar::one());
        let l3 = Line::through(&Point::int(0, 0), &Point::int(2, 4)).unwrap();
        let l4 = Line::through(&Point::int(3, 6), &Point::int(1, 2)).unwrap();
        assert_eq!(l3, l4);
    }

    #[test]
    fn degenerate_line_rejected() {
        assert_eq!(Line::new(Scalar::zero(), Scalar::zero(), Scalar::one()), Err(GeomError::DegenerateLine));
    }

    #[test]
    fn side_and_intersection() {
        let l = Line::horizontal(Scalar::from_int(2));
        assert_eq!(l.side(&Point::int(5, 3)), 1);
        assert_eq!(l.side(&Point::int(5, 2)), 0);
        let v = Line::new(Scalar::one(), Scalar::zero(), Scalar::from_int(7)).unwrap();
        assert_eq!(l.intersection(&v), Some(Point::int(7, 2)));
        assert!(l.intersection(&Line::horizontal(Scalar::zero())).is_none());
    }

    #[test]
    fn wedge_membership() {
        let w = Wedge::from_slopes(&Scalar::from_int(-1), &Scalar::one()).unwrap();
        assert!(w.contains_strictly(&Point::int(2, 1)));
        assert!(!w.contains_strictly(&Point::int(1, 1)));
        assert!(!w.contains_strictly(&Point::int(-1, 0)));
        assert!(Wedge::from_slopes(&Scalar::one(), &Scalar::zero()).is_err());
    }
}
