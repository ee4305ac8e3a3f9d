//! Gauss rules on edges, triangles and star-center fans of polygons.

use nalgebra::{Point2, Vector2};

use crate::error::{Result, VemError};
use crate::polynomial::EdgeFrame;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "a Gauss rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Number of Gauss points exact for polynomials of degree `d`.
pub fn points_for_degree(d: usize) -> usize {
    d / 2 + 1
}

/// Quadrature rule on a cell (global coordinates, area weights).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<Point2<f64>>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(&Point2<f64>) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Quadrature rule on an edge. `arc` holds arc-length coordinates measured
/// from the edge midpoint along the edge tangent; `points` the same nodes in
/// global coordinates.
#[derive(Clone, Debug)]
pub struct EdgeRule {
    pub arc: Vec<f64>,
    pub points: Vec<Point2<f64>>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl EdgeRule {
    pub fn integrate<F: FnMut(f64, &Point2<f64>) -> f64>(&self, mut f: F) -> f64 {
        self.arc
            .iter()
            .zip(&self.points)
            .zip(&self.weights)
            .map(|((s, p), w)| w * f(*s, p))
            .sum()
    }
}

/// Gauss–Legendre rule with `⌈(d+1)/2⌉` nodes mapped to `edge`.
pub fn edge_rule(edge: &EdgeFrame, degree: usize) -> EdgeRule {
    let (x, w) = gauss_legendre(points_for_degree(degree));
    let len = edge.length();
    let arc: Vec<f64> = x.iter().map(|xi| 0.5 * len * xi).collect();
    let points = arc.iter().map(|s| edge.point_at(s / len)).collect();
    let weights = w.iter().map(|wi| 0.5 * len * wi).collect();
    EdgeRule {
        arc,
        points,
        weights,
        degree,
    }
}

/// Collapsed (Duffy) tensor Gauss rule on the triangle `(a, b, c)`, exact
/// for polynomials of total degree `degree`. All weights are positive for a
/// counterclockwise triangle.
pub fn triangle_rule(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>, degree: usize) -> QuadratureRule {
    let mut rule = QuadratureRule {
        points: Vec::new(),
        weights: Vec::new(),
        degree,
    };
    append_triangle(&mut rule, a, b, c, degree);
    rule
}

fn append_triangle(rule: &mut QuadratureRule, a: Point2<f64>, b: Point2<f64>, c: Point2<f64>, degree: usize) {
    // x(ξ, η) = a + ξ (b - a) + ξ η (c - b), Jacobian 2|T| ξ
    let (xr, wr) = gauss_legendre(points_for_degree(degree + 1));
    let (xs, ws) = gauss_legendre(points_for_degree(degree));
    let ab: Vector2<f64> = b - a;
    let bc: Vector2<f64> = c - b;
    let twice_area = ab.x * bc.y - ab.y * bc.x;
    for (xi, wi) in xr.iter().zip(&wr) {
        let r = 0.5 * (xi + 1.0);
        for (eta, we) in xs.iter().zip(&ws) {
            let s = 0.5 * (eta + 1.0);
            rule.points.push(a + r * ab + r * s * bc);
            rule.weights.push(0.25 * wi * we * twice_area * r);
        }
    }
}

/// Fan rule on a star-shaped polygon: one triangle `(apex, v_i, v_{i+1})`
/// per edge, each integrated exactly to `degree`.
pub fn fan_rule(vertices: &[Point2<f64>], apex: Point2<f64>, degree: usize) -> QuadratureRule {
    let mut rule = QuadratureRule {
        points: Vec::new(),
        weights: Vec::new(),
        degree,
    };
    let n = vertices.len();
    for i in 0..n {
        append_triangle(&mut rule, apex, vertices[i], vertices[(i + 1) % n], degree);
    }
    rule
}

/// Fan rule for `cell` of `mesh`, with the apex at the cell's star center.
pub fn polygon_rule(mesh: &crate::mesh::PolygonalMesh, cell: usize, degree: usize) -> Result<QuadratureRule> {
    let geometry = mesh.geometry(cell);
    let apex = geometry.star_center.ok_or(VemError::NotStarShaped {
        cell,
        rho_star: geometry.rho_star,
    })?;
    Ok(fan_rule(&mesh.cell_points(cell), apex, degree))
}
