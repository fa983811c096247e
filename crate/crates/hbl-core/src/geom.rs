//! Small planar-geometry helpers shared by the continuum and cluster code.

use num_complex::Complex64;

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sqr();
    if len_sq == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len_sq;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Maximum pairwise distance between the vertices of a polyline.
pub fn polyline_diameter(vertices: &[Complex64]) -> f64 {
    let mut d = 0.0f64;
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Distance from a point to a polyline, measured over its segments
/// (a single vertex counts as a degenerate segment).
pub fn point_polyline_distance(p: Complex64, vertices: &[Complex64]) -> f64 {
    if vertices.is_empty() {
        return f64::INFINITY;
    }
    if vertices.len() == 1 {
        return (p - vertices[0]).norm();
    }
    vertices
        .windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Distance between two segments `[a1,b1]` and `[a2,b2]`.
pub fn segment_segment_distance(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> f64 {
    if segments_intersect(a1, b1, a2, b2) {
        return 0.0;
    }
    point_segment_distance(a1, a2, b2)
        .min(point_segment_distance(b1, a2, b2))
        .min(point_segment_distance(a2, a1, b1))
        .min(point_segment_distance(b2, a1, b1))
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_intersect(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> bool {
    let d1 = orient(a2, b2, a1);
    let d2 = orient(a2, b2, b1);
    let d3 = orient(a1, b1, a2);
    let d4 = orient(a1, b1, b2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// All components finite (no NaN / infinity).
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `e^{i·theta}`.
pub fn unit(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}
