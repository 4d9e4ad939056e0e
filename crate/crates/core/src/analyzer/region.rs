//! Open convex regions given by half-planes, and exact clipping of
//! segments and rays against them.

use std::cmp::Ordering;

use crate::geom::{Point, Scalar};

/// `{ z : side * cross(dir, z - origin) > 0 }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlane {
    pub origin: Point,
    pub dir: Point,
    pub side: i8,
}

impl HalfPlane {
    /// Half-plane bounded by the line through `a` and `b` that contains
    /// `inside`; `None` when `inside` is on that line or `a == b`.
    pub fn through(a: &Point, b: &Point, inside: &Point) -> Option<HalfPlane> {
        let dir = b.sub(a);
        let side = dir.cross(&inside.sub(a)).signum();
        (side != 0).then(|| HalfPlane { origin: a.clone(), dir, side })
    }

    fn eval(&self, z: &Point) -> Scalar {
        let v = self.dir.cross(&z.sub(&self.origin));
        if self.side > 0 {
            v
        } else {
            -v
        }
    }

    pub fn contains(&self, z: &Point) -> bool {
        self.eval(z).signum() > 0
    }
}

/// Upper end of a parameter interval.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    At(Scalar),
    Infinite,
}

/// Open parameter interval `(lo, hi)` on `origin + t * dir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Bound,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        match &self.hi {
            Bound::At(h) => h <= &self.lo,
            Bound::Infinite => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub planes: Vec<HalfPlane>,
}

impl Region {
    pub fn contains(&self, z: &Point) -> bool {
        self.planes.iter().all(|h| h.contains(z))
    }

    /// Part of the open interval `(lo, hi)` of `origin + t * dir` inside
    /// the region.
    pub fn clip(&self, origin: &Point, dir: &Point, mut iv: Interval) -> Interval {
        for h in &self.planes {
            let f0 = h.eval(origin);
            let f1 = {
                let v = h.dir.cross(dir);
                if h.side > 0 {
                    v
                } else {
                    -v
                }
            };
            match f1.signum().cmp(&0) {
                Ordering::Equal => {
                    if f0.signum() <= 0 {
                        iv.hi = Bound::At(iv.lo.clone());
                    }
                }
                Ordering::Greater => {
                    let t = -f0 / &f1;
                    if t > iv.lo {
                        iv.lo = t;
                    }
                }
                Ordering::Less => {
                    let t = Bound::At(-f0 / &f1);
                    if t < iv.hi {
                        iv.hi = t;
                    }
                }
            }
            if iv.is_empty() {
                break;
            }
        }
        iv
    }
}

/// Whether `base` keeps a piece of positive length after removing all of
/// `removed`.
pub fn remains(base: &Interval, removed: &[Interval]) -> bool {
    if base.is_empty() {
        return false;
    }
    let mut parts: Vec<&Interval> = removed.iter().filter(|r| !r.is_empty()).collect();
    parts.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut cursor = base.lo.clone();
    for r in parts {
        let gap_end = match &base.hi {
            Bound::At(h) if h < &r.lo => h.clone(),
            _ => r.lo.clone(),
        };
        if gap_end > cursor {
            return true;
        }
        match &r.hi {
            Bound::Infinite => return false,
            Bound::At(h) => {
                if h > &cursor {
                    cursor = h.clone();
                }
            }
        }
        if Bound::At(cursor.clone()) >= base.hi {
            return false;
        }
    }
    Bound::At(cursor) < base.hi
}

/// Number of connected pieces of a union of open intervals; intervals
/// that touch count as one piece.
pub fn components(parts: &[Interval]) -> usize {
    let mut parts: Vec<&Interval> = parts.iter().filter(|r| !r.is_empty()).collect();
    parts.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut count = 0;
    let mut reach: Option<Bound> = None;
    for r in parts {
        let joined = matches!(&reach, Some(b) if *b >= Bound::At(r.lo.clone()));
        if !joined {
            count += 1;
        }
        reach = Some(match reach {
            Some(b) if joined && b > r.hi => b,
            _ => r.hi.clone(),
        });
    }
    count
}

pub fn segment_interval() -> Interval {
    Interval { lo: Scalar::zero(), hi: Bound::At(Scalar::one()) }
}

pub fn ray_interval() -> Interval {
    Interval { lo: Scalar::zero(), hi: Bound::Infinite }
}
