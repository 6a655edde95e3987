//! Small 2D polygon utilities used by room validation and position generation.

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// 2D point on the floor plan.
pub type Point2 = [f64; 2];

/// Signed area of a polygon (positive for counter-clockwise winding).
pub fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        let [x1, y1] = vertices[i];
        let [x2, y2] = vertices[(i + 1) % n];
        acc += x1 * y2 - x2 * y1;
    }
    acc / 2.0
}

/// Proper-intersection test for segments (a,b) and (c,d), excluding shared
/// endpoints. Used by the simple-polygon check.
fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    fn orient(p: Point2, q: Point2, r: Point2) -> f64 {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    }
    fn on_segment(p: Point2, q: Point2, r: Point2) -> bool {
        r[0] >= p[0].min(q[0]) - 1e-12
            && r[0] <= p[0].max(q[0]) + 1e-12
            && r[1] >= p[1].min(q[1]) - 1e-12
            && r[1] <= p[1].max(q[1]) + 1e-12
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    // Collinear overlap counts as intersection.
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// True if the polygon has no self-intersections. Adjacent edges may share
/// their common vertex only.
pub fn is_simple_polygon(vertices: &[Point2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Strict point-in-polygon test by ray casting; boundary points are outside.
pub fn point_in_polygon(p: Point2, vertices: &[Point2]) -> bool {
    if distance_to_boundary(p, vertices) < 1e-12 {
        return false;
    }
    let n = vertices.len();
    let mut inside = false;
    let [px, py] = p;
    let mut j = n - 1;
    for i in 0..n {
        let [xi, yi] = vertices[i];
        let [xj, yj] = vertices[j];
        if (yi > py) != (yj > py) {
            let x_cross = xi + (py - yi) / (yj - yi) * (xj - xi);
            if px < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Minimum distance from a point to the polygon outline.
pub fn distance_to_boundary(p: Point2, vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        best = best.min(point_segment_distance(p, a, b));
    }
    best
}

fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let vx = b[0] - a[0];
    let vy = b[1] - a[1];
    let wx = p[0] - a[0];
    let wy = p[1] - a[1];
    let len2 = vx * vx + vy * vy;
    let t = if len2 > 0.0 {
        ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dx = p[0] - (a[0] + t * vx);
    let dy = p[1] - (a[1] + t * vy);
    (dx * dx + dy * dy).sqrt()
}

/// Axis-aligned bounding box of the polygon as (min, max) corners.
pub fn bounding_box(vertices: &[Point2]) -> (Point2, Point2) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in vertices {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    (lo, hi)
}

/// True if the polygon is an axis-aligned rectangle (any vertex order).
pub fn is_axis_aligned_rectangle(vertices: &[Point2]) -> bool {
    if vertices.len() != 4 {
        return false;
    }
    let (lo, hi) = bounding_box(vertices);
    let corners = [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
    corners.iter().all(|c| {
        vertices
            .iter()
            .any(|v| (v[0] - c[0]).abs() < 1e-12 && (v[1] - c[1]).abs() < 1e-12)
    }) && (hi[0] - lo[0]) > 0.0
        && (hi[1] - lo[1]) > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point2> {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn square_area_and_simplicity() {
        let sq = unit_square();
        assert!((signed_area(&sq) - 1.0).abs() < 1e-12);
        assert!(is_simple_polygon(&sq));
        assert!(is_axis_aligned_rectangle(&sq));
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(!is_simple_polygon(&bowtie));
    }

    #[test]
    fn point_in_polygon_strict_boundary() {
        let sq = unit_square();
        assert!(point_in_polygon([0.5, 0.5], &sq));
        assert!(!point_in_polygon([0.5, 1.0], &sq));
        assert!(!point_in_polygon([1.5, 0.5], &sq));
    }

    #[test]
    fn l_shape_contains_second_lobe() {
        let l = vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
        ];
        assert!(point_in_polygon([1.5, 0.5], &l));
        assert!(!point_in_polygon([1.5, 1.5], &l));
    }
}
