//! Integer rectilinear geometry.
//!
//! All coordinates are integer grid units. A floorplan declares how many grid
//! units make one layout unit, so abutment tests are exact.

use serde::Serialize;

pub type Coord = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub const fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Axis-aligned closed rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Rect {
    pub x0: Coord,
    pub y0: Coord,
    pub x1: Coord,
    pub y1: Coord,
}

impl Rect {
    pub const fn new(x: Coord, y: Coord, w: Coord, h: Coord) -> Self {
        Rect {
            x0: x,
            y0: y,
            x1: x + w,
            y1: y + h,
        }
    }

    pub const fn width(&self) -> Coord {
        self.x1 - self.x0
    }

    pub const fn height(&self) -> Coord {
        self.y1 - self.y0
    }

    pub fn area(&self) -> i128 {
        self.width() as i128 * self.height() as i128
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.x0 <= p.x && p.x <= self.x1 && self.y0 <= p.y && p.y <= self.y1
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.x0 <= o.x0 && o.x1 <= self.x1 && self.y0 <= o.y0 && o.y1 <= self.y1
    }

    /// True when the interiors intersect.
    pub fn overlaps(&self, o: &Rect) -> bool {
        overlap_len(self.x0, self.x1, o.x0, o.x1) > 0 && overlap_len(self.y0, self.y1, o.y0, o.y1) > 0
    }

    /// Center in doubled coordinates, which keeps it on the integer grid.
    pub fn center2(&self) -> Point {
        Point::new(self.x0 + self.x1, self.y0 + self.y1)
    }

    pub fn top_left(&self) -> Point {
        Point::new(self.x0, self.y1)
    }
    pub fn top_right(&self) -> Point {
        Point::new(self.x1, self.y1)
    }
    pub fn bottom_left(&self) -> Point {
        Point::new(self.x0, self.y0)
    }
    pub fn bottom_right(&self) -> Point {
        Point::new(self.x1, self.y0)
    }

    /// L-infinity distance from the rectangle to a point (0 when inside).
    pub fn linf_distance(&self, p: Point) -> Coord {
        let dx = (self.x0 - p.x).max(p.x - self.x1).max(0);
        let dy = (self.y0 - p.y).max(p.y - self.y1).max(0);
        dx.max(dy)
    }

    pub fn bounding<'a>(rects: impl IntoIterator<Item = &'a Rect>) -> Option<Rect> {
        rects.into_iter().fold(None, |acc, r| {
            Some(match acc {
                None => *r,
                Some(a) => Rect {
                    x0: a.x0.min(r.x0),
                    y0: a.y0.min(r.y0),
                    x1: a.x1.max(r.x1),
                    y1: a.y1.max(r.y1),
                },
            })
        })
    }
}

pub(crate) fn overlap_len(a0: Coord, a1: Coord, b0: Coord, b1: Coord) -> Coord {
    a1.min(b1) - a0.max(b0)
}

/// Axis-aligned segment. Degenerate (zero length) segments are never produced
/// by the boundary code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        debug_assert!(a.x == b.x || a.y == b.y, "segment must be axis-aligned");
        Segment { a, b }
    }

    pub fn orientation(&self) -> Orientation {
        if self.a.y == self.b.y {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    pub fn len(&self) -> Coord {
        (self.a.x - self.b.x).abs() + (self.a.y - self.b.y).abs()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn reversed(&self) -> Self {
        Segment {
            a: self.b,
            b: self.a,
        }
    }

    /// True when `p` lies on the segment strictly between its endpoints.
    pub fn contains_interior(&self, p: Point) -> bool {
        match self.orientation() {
            Orientation::Horizontal => {
                p.y == self.a.y && p.x > self.a.x.min(self.b.x) && p.x < self.a.x.max(self.b.x)
            }
            Orientation::Vertical => {
                p.x == self.a.x && p.y > self.a.y.min(self.b.y) && p.y < self.a.y.max(self.b.y)
            }
        }
    }
}

/// Side of `a` on which `b` touches it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
    Above,
    Below,
}

/// Shared boundary between two rectangles, if they abut along a segment
/// longer than `eps`. Gaps up to `eps` between the facing edges are tolerated;
/// the returned segment sits on `a`'s edge.
pub fn shared_boundary(a: &Rect, b: &Rect, eps: Coord) -> Option<(Side, Segment)> {
    let yo = overlap_len(a.y0, a.y1, b.y0, b.y1);
    if yo > eps.max(0) {
        let (lo, hi) = (a.y0.max(b.y0), a.y1.min(b.y1));
        if (b.x0 - a.x1).abs() <= eps {
            return Some((Side::Right, Segment::new(Point::new(a.x1, hi), Point::new(a.x1, lo))));
        }
        if (a.x0 - b.x1).abs() <= eps {
            return Some((Side::Left, Segment::new(Point::new(a.x0, hi), Point::new(a.x0, lo))));
        }
    }
    let xo = overlap_len(a.x0, a.x1, b.x0, b.x1);
    if xo > eps.max(0) {
        let (lo, hi) = (a.x0.max(b.x0), a.x1.min(b.x1));
        if (a.y0 - b.y1).abs() <= eps {
            return Some((Side::Below, Segment::new(Point::new(lo, a.y0), Point::new(hi, a.y0))));
        }
        if (b.y0 - a.y1).abs() <= eps {
            return Some((Side::Above, Segment::new(Point::new(lo, a.y1), Point::new(hi, a.y1))));
        }
    }
    None
}
