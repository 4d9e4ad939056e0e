//! Integer fast path for the search oracles: rational point sets are scaled
//! by the common denominator, which preserves every orientation sign.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{orient_i64, Point, Relation};

pub type IPoint = (i64, i64);

const LIMIT: i64 = 1 << 60;

/// Scale all points by the least common denominator. `None` when the scaled
/// coordinates do not fit comfortably in `i64`.
pub fn scale_to_integers(points: &[Point]) -> Option<Vec<IPoint>> {
    let lcm = points
        .iter()
        .fold(BigInt::from(1), |acc, p| acc.lcm(p.x.denom()).lcm(p.y.denom()));
    let conv = |n: &BigInt, d: &BigInt| -> Option<i64> {
        let v = (n * (&lcm / d)).to_i64()?;
        (v.abs() < LIMIT).then_some(v)
    };
    points
        .iter()
        .map(|p| Some((conv(p.x.numer(), p.x.denom())?, conv(p.y.numer(), p.y.denom())?)))
        .collect()
}

#[inline]
fn in_box(p: IPoint, a: IPoint, b: IPoint) -> bool {
    a.0.min(b.0) <= p.0 && p.0 <= a.0.max(b.0) && a.1.min(b.1) <= p.1 && p.1 <= a.1.max(b.1)
}

#[inline]
pub fn on_segment(p: IPoint, a: IPoint, b: IPoint) -> bool {
    orient_i64(a, b, p) == 0 && in_box(p, a, b)
}

/// Same classification as [`super::segment_relation`] on integer points.
pub fn relation(a1: IPoint, b1: IPoint, a2: IPoint, b2: IPoint) -> Relation {
    let o1 = orient_i64(a1, b1, a2);
    let o2 = orient_i64(a1, b1, b2);
    if o1 == 0 && o2 == 0 {
        let (lo1, hi1) = if a1 <= b1 { (a1, b1) } else { (b1, a1) };
        let (lo2, hi2) = if a2 <= b2 { (a2, b2) } else { (b2, a2) };
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        return if lo < hi {
            Relation::Overlapping
        } else if lo == hi {
            Relation::SharedEndpointOnly
        } else {
            Relation::Disjoint
        };
    }
    if o1 * o2 > 0 {
        return Relation::Disjoint;
    }
    let o3 = orient_i64(a2, b2, a1);
    let o4 = orient_i64(a2, b2, b1);
    if o3 * o4 > 0 {
        return Relation::Disjoint;
    }
    let (p, oa, ob) = if o1 == 0 {
        (a2, a1, b1)
    } else if o2 == 0 {
        (b2, a1, b1)
    } else if o3 == 0 {
        (a1, a2, b2)
    } else if o4 == 0 {
        (b1, a2, b2)
    } else {
        return Relation::ProperCrossing;
    };
    if p == oa || p == ob {
        Relation::SharedEndpointOnly
    } else {
        Relation::Touching
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{segment_relation, Segment};

    #[test]
    fn scaling_preserves_relations() {
        let pts = vec![Point::ratio(1, 2, 0, 1), Point::ratio(3, 2, 1, 3), Point::ratio(1, 2, 1, 3), Point::ratio(3, 2, 0, 1)];
        let ip = scale_to_integers(&pts).unwrap();
        assert_eq!(ip[0], (3, 0));
        let exact = segment_relation(
            &Segment::new(pts[0].clone(), pts[1].clone()).unwrap(),
            &Segment::new(pts[2].clone(), pts[3].clone()).unwrap(),
        );
        assert_eq!(relation(ip[0], ip[1], ip[2], ip[3]), exact);
        assert_eq!(exact, Relation::ProperCrossing);
    }
}
