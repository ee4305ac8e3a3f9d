//! Planar polygon geometry: areas, centroids, simplicity, the kernel of a
//! polygon and the largest disc inscribed in it.

use nalgebra::{Matrix3, Point2, Vector2, Vector3};

fn cross(a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Shoelace signed area; positive for counterclockwise polygons.
pub fn signed_area(points: &[Point2<f64>]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Area centroid of a simple polygon.
pub fn centroid(points: &[Point2<f64>]) -> Point2<f64> {
    let n = points.len();
    let a = signed_area(points);
    let mut c = Vector2::zeros();
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        let w = p.x * q.y - q.x * p.y;
        c += (p.coords + q.coords) * w;
    }
    Point2::from(c / (6.0 * a))
}

/// Largest pairwise vertex distance.
pub fn diameter(points: &[Point2<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}

pub fn min_edge_length(points: &[Point2<f64>]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| (points[(i + 1) % n] - points[i]).norm())
        .fold(f64::INFINITY, f64::min)
}

fn segments_touch(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>, d: Point2<f64>, tol: f64) -> bool {
    let orient = |p: Point2<f64>, q: Point2<f64>, r: Point2<f64>| {
        let v = cross(q - p, r - p);
        let scale = (q - p).norm().max(1e-300);
        if v / scale > tol {
            1
        } else if v / scale < -tol {
            -1
        } else {
            0
        }
    };
    let on_segment = |p: Point2<f64>, q: Point2<f64>, r: Point2<f64>| {
        r.x >= p.x.min(q.x) - tol && r.x <= p.x.max(q.x) + tol && r.y >= p.y.min(q.y) - tol && r.y <= p.y.max(q.y) + tol
    };
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Checks that the closed polyline is a simple polygon. Returns a
/// description of the first defect found.
pub fn simplicity_defect(points: &[Point2<f64>], tol: f64) -> Option<String> {
    let n = points.len();
    if n < 3 {
        return Some(format!("{n} vertices"));
    }
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        if (b - a).norm() <= tol {
            return Some(format!("edge {i} has zero length"));
        }
        let c = points[(i + 2) % n];
        let (u, v) = (b - a, c - b);
        if cross(u, v).abs() <= tol * u.norm().max(v.norm()) && u.dot(&v) < 0.0 {
            return Some(format!("edges {i} and {} fold back onto each other", (i + 1) % n));
        }
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (points[i], points[(i + 1) % n]);
            let (c, d) = (points[j], points[(j + 1) % n]);
            if segments_touch(a, b, c, d, tol) {
                return Some(format!("edges {i} and {j} intersect"));
            }
        }
    }
    None
}

/// The kernel of a counterclockwise polygon: the convex set of points from
/// which the whole polygon is visible, obtained by clipping the bounding
/// box against the inner half-plane of every edge. Empty when the polygon
/// is not star-shaped.
pub fn kernel(points: &[Point2<f64>]) -> Vec<Point2<f64>> {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let mut poly = vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    let n = points.len();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        let t = b - a;
        let side = |p: &Point2<f64>| cross(t, p - a);
        let mut out = Vec::with_capacity(poly.len() + 1);
        for j in 0..poly.len() {
            let (p, q) = (poly[j], poly[(j + 1) % poly.len()]);
            let (sp, sq) = (side(&p), side(&q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let s = sp / (sp - sq);
                out.push(p + (q - p) * s);
            }
        }
        poly = out;
        if poly.is_empty() {
            break;
        }
    }
    poly
}

/// Center and radius of the largest disc contained in the kernel, i.e. the
/// maximizer of `r` subject to `n_e · c + r ≤ n_e · a_e` for every edge
/// `e` (outward unit normal `n_e`, any point `a_e` on `e`). The linear
/// program has three unknowns, so its optimum sits on a vertex defined by
/// three active constraints; all triples are enumerated. Returns `None`
/// when no disc of positive radius fits.
pub fn chebyshev_center(points: &[Point2<f64>], tol: f64) -> Option<(Point2<f64>, f64)> {
    let n = points.len();
    let rows: Vec<(Vector2<f64>, f64)> = (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            let t = (b - a).normalize();
            let normal = Vector2::new(t.y, -t.x);
            (normal, normal.dot(&a.coords))
        })
        .collect();
    let mut best: Option<(Point2<f64>, f64)> = None;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = Matrix3::new(
                    rows[i].0.x, rows[i].0.y, 1.0, //
                    rows[j].0.x, rows[j].0.y, 1.0, //
                    rows[k].0.x, rows[k].0.y, 1.0,
                );
                let Some(inv) = m.try_inverse() else { continue };
                if m.determinant().abs() < 1e-12 {
                    continue;
                }
                let sol = inv * Vector3::new(rows[i].1, rows[j].1, rows[k].1);
                let (c, r) = (Vector2::new(sol.x, sol.y), sol.z);
                if best.is_some_and(|(_, rb)| r <= rb) {
                    continue;
                }
                if rows.iter().all(|(nrm, d)| nrm.dot(&c) + r <= d + tol) {
                    best = Some((Point2::from(c), r));
                }
            }
        }
    }
    best.filter(|(_, r)| *r > tol)
}

/// Whether `p` lies in the kernel at distance at least `margin` from every
/// edge line.
pub fn in_kernel(points: &[Point2<f64>], p: &Point2<f64>, margin: f64) -> bool {
    let n = points.len();
    (0..n).all(|i| {
        let (a, b) = (points[i], points[(i + 1) % n]);
        let t = (b - a).normalize();
        cross(t, p - a) >= margin
    })
}

/// Derived geometric data of one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellGeometry {
    /// `h_D`: largest vertex-to-vertex distance.
    pub diameter: f64,
    /// `x_D`: area centroid.
    pub centroid: Point2<f64>,
    pub area: f64,
    /// Apex of the quadrature fan; `None` when the cell is not star-shaped
    /// with respect to any disc.
    pub star_center: Option<Point2<f64>>,
    /// Radius of the largest disc in the kernel divided by `h_D`.
    pub rho_star: f64,
    /// Shortest edge divided by `h_D`.
    pub rho_edge: f64,
}

impl CellGeometry {
    /// Geometry of a counterclockwise simple polygon. `tol` is an absolute
    /// length tolerance.
    pub fn compute(points: &[Point2<f64>], tol: f64) -> Self {
        let diameter = diameter(points);
        let centroid = centroid(points);
        let area = signed_area(points);
        let rho_edge = min_edge_length(points) / diameter;
        let cheb = chebyshev_center(points, tol);
        let (star_center, rho_star) = match cheb {
            Some((c, r)) => {
                let apex = if in_kernel(points, &centroid, tol) { centroid } else { c };
                (Some(apex), r / diameter)
            }
            None => (None, 0.0),
        };
        Self {
            diameter,
            centroid,
            area,
            star_center,
            rho_star,
            rho_edge,
        }
    }
}
