//! Planar points and the few polygon predicates the tilings and oracles need.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Point::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn distance_sqr(self, other: Point) -> f64 {
        (self - other).norm_sqr()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::new(z.re, z.im)
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        p.to_complex()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Signed area of a simple polygon (positive for counter-clockwise order).
pub fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
        * 0.5
}

/// Point-in-convex-polygon test with an absolute tolerance on the edge
/// half-planes. Works for either winding order.
pub fn convex_contains(vertices: &[Point], p: Point, tol: f64) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let orientation = signed_area(vertices).signum();
    (0..n).all(|i| {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let edge = b - a;
        let len = edge.norm();
        orientation * edge.cross(p - a) >= -tol * len
    })
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sqr = ab.norm_sqr();
    if len_sqr == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sqr).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Distance from `p` to a closed convex polygon (zero when inside).
pub fn convex_distance(vertices: &[Point], p: Point) -> f64 {
    if convex_contains(vertices, p, 0.0) {
        return 0.0;
    }
    let n = vertices.len();
    (0..n)
        .map(|i| segment_distance(p, vertices[i], vertices[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}
