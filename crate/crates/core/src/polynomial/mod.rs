//! Scaled monomial bases on cells and edges, exact differentiation on
//! coefficient vectors, and the plate boundary operators (bending moment,
//! twisting moment, shear force) restricted to edges.
//!
//! Cell polynomials are stored as coefficients over
//! `((x - x_D) / h_D)^α`, `|α| ≤ k`, in graded order: degree by degree, and
//! within a degree `(d,0), (d-1,1), …, (0,d)`. Edge polynomials are stored
//! over `ξ^j` with `ξ = s / h_e ∈ [-1/2, 1/2]` the normalized arc length
//! measured from the edge midpoint.

mod edge;

pub use edge::{edge_monomial_integral, EdgeFrame, EdgeMonomialBasis, EdgePoly};

use nalgebra::{DMatrix, DVector, Point2, Vector2};

use crate::quadrature::QuadratureRule;

/// `dim P_k = (k+1)(k+2)/2`.
pub fn dim(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// `dim P_k` with the convention `P_{-k} = {0}`.
pub fn dim_signed(k: isize) -> usize {
    if k < 0 {
        0
    } else {
        dim(k as usize)
    }
}

/// Position of the multi-index `(a1, a2)` in the graded ordering.
pub fn monomial_index(a1: usize, a2: usize) -> usize {
    let d = a1 + a2;
    d * (d + 1) / 2 + a2
}

/// Multi-indices of `M_k` in basis order.
pub fn exponents(k: usize) -> Vec<(usize, usize)> {
    (0..=k)
        .flat_map(|d| (0..=d).map(move |a2| (d - a2, a2)))
        .collect()
}

/// Cell reference data: the monomial center `x_D` and the scale `h_D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellFrame {
    pub center: Point2<f64>,
    pub diameter: f64,
}

impl CellFrame {
    pub fn new(center: Point2<f64>, diameter: f64) -> Self {
        Self { center, diameter }
    }

    /// `(x - x_D) / h_D`.
    pub fn local(&self, p: &Point2<f64>) -> Vector2<f64> {
        (p - self.center) / self.diameter
    }
}

/// The set `M_i^D` of scaled monomials on a cell.
#[derive(Clone, Copy, Debug)]
pub struct ScaledMonomialBasis {
    pub frame: CellFrame,
    pub degree: usize,
}

impl ScaledMonomialBasis {
    pub fn new(frame: CellFrame, degree: usize) -> Self {
        Self { frame, degree }
    }

    pub fn len(&self) -> usize {
        dim(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values of all basis functions at `p`.
    pub fn eval_at(&self, p: &Point2<f64>) -> Vec<f64> {
        monomial_values(self.frame.local(p), self.degree)
    }

    /// Matrix with one row per point and one column per basis function.
    pub fn eval(&self, points: &[Point2<f64>]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(points.len(), self.len());
        for (i, p) in points.iter().enumerate() {
            for (j, v) in self.eval_at(p).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }
}

/// Values of the graded monomials of degree `≤ k` at the scaled point `x`.
pub fn monomial_values(x: Vector2<f64>, k: usize) -> Vec<f64> {
    let mut px = vec![1.0; k + 1];
    let mut py = vec![1.0; k + 1];
    for i in 1..=k {
        px[i] = px[i - 1] * x.x;
        py[i] = py[i - 1] * x.y;
    }
    exponents(k).into_iter().map(|(a, b)| px[a] * py[b]).collect()
}

/// A polynomial on a cell, stored over the scaled monomials of its frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CellPoly {
    pub frame: CellFrame,
    pub degree: usize,
    pub coeffs: DVector<f64>,
}

impl CellPoly {
    pub fn zero(frame: CellFrame, degree: usize) -> Self {
        Self {
            frame,
            degree,
            coeffs: DVector::zeros(dim(degree)),
        }
    }

    pub fn from_coeffs(frame: CellFrame, degree: usize, coeffs: DVector<f64>) -> Self {
        assert_eq!(coeffs.len(), dim(degree), "coefficient length must match the basis");
        Self { frame, degree, coeffs }
    }

    /// The `index`-th basis monomial as a polynomial of degree `degree`.
    pub fn monomial(frame: CellFrame, degree: usize, index: usize) -> Self {
        let mut p = Self::zero(frame, degree);
        p.coeffs[index] = 1.0;
        p
    }

    pub fn eval(&self, p: &Point2<f64>) -> f64 {
        monomial_values(self.frame.local(p), self.degree)
            .iter()
            .zip(self.coeffs.iter())
            .map(|(m, c)| m * c)
            .sum()
    }

    pub fn gradient(&self, p: &Point2<f64>) -> Vector2<f64> {
        Vector2::new(self.dx().eval(p), self.dy().eval(p))
    }

    pub fn dx(&self) -> Self {
        self.derivative(0)
    }

    pub fn dy(&self) -> Self {
        self.derivative(1)
    }

    /// Exact partial derivative in direction `axis` (0 = x, 1 = y). The
    /// result has degree `max(k - 1, 0)` and carries the `1/h_D` factor.
    pub fn derivative(&self, axis: usize) -> Self {
        let out_degree = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.frame, out_degree);
        if self.degree == 0 {
            return out;
        }
        let inv_h = 1.0 / self.frame.diameter;
        for (j, (a1, a2)) in exponents(self.degree).into_iter().enumerate() {
            let c = self.coeffs[j];
            if c == 0.0 {
                continue;
            }
            match axis {
                0 if a1 > 0 => out.coeffs[monomial_index(a1 - 1, a2)] += c * a1 as f64 * inv_h,
                1 if a2 > 0 => out.coeffs[monomial_index(a1, a2 - 1)] += c * a2 as f64 * inv_h,
                _ => {}
            }
        }
        out
    }

    pub fn hessian(&self) -> HessianQuad {
        let dx = self.dx();
        let dy = self.dy();
        let u12 = dx.dy();
        HessianQuad {
            u11: dx.dx(),
            u22: dy.dy(),
            u21: u12.clone(),
            u12,
        }
    }

    pub fn laplacian(&self) -> Self {
        let h = self.hessian();
        h.u11.add(&h.u22)
    }

    /// `Δ²p = p_xxxx + 2 p_xxyy + p_yyyy`, of degree `max(k - 4, 0)`;
    /// identically zero when `k < 4`.
    pub fn bilaplacian(&self) -> Self {
        self.laplacian().laplacian()
    }

    /// Sum of two polynomials in the same frame; the result has the larger degree.
    pub fn add(&self, other: &Self) -> Self {
        let degree = self.degree.max(other.degree);
        let mut out = self.with_degree(degree);
        let o = other.with_degree(degree);
        out.coeffs += o.coeffs;
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            frame: self.frame,
            degree: self.degree,
            coeffs: &self.coeffs * s,
        }
    }

    /// Re-expresses the polynomial with a larger basis, or truncates
    /// coefficients above `degree`.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut out = Self::zero(self.frame, degree);
        let n = dim(degree.min(self.degree));
        out.coeffs.rows_mut(0, n).copy_from(&self.coeffs.rows(0, n));
        out
    }

    /// Exact restriction to `edge`, as a polynomial in `ξ`.
    pub fn restrict(&self, edge: &EdgeFrame) -> EdgePoly {
        let offset = self.frame.local(&edge.midpoint());
        let slope = edge.tangent() * (edge.length() / self.frame.diameter);
        let k = self.degree;
        let mut px: Vec<Vec<f64>> = vec![vec![1.0]];
        let mut py: Vec<Vec<f64>> = vec![vec![1.0]];
        for i in 1..=k {
            px.push(edge::poly_mul(&px[i - 1], &[offset.x, slope.x]));
            py.push(edge::poly_mul(&py[i - 1], &[offset.y, slope.y]));
        }
        let mut out = vec![0.0; k + 1];
        for (j, (a1, a2)) in exponents(k).into_iter().enumerate() {
            let c = self.coeffs[j];
            if c == 0.0 {
                continue;
            }
            for (i, v) in edge::poly_mul(&px[a1], &py[a2]).into_iter().enumerate() {
                out[i] += c * v;
            }
        }
        EdgePoly::new(out)
    }
}

/// `D²u = (u11, u22, u12, u21)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianQuad {
    pub u11: CellPoly,
    pub u22: CellPoly,
    pub u12: CellPoly,
    pub u21: CellPoly,
}

impl HessianQuad {
    /// Matrix `[[u11, u12], [u21, u22]]` evaluated at `p`.
    pub fn eval(&self, p: &Point2<f64>) -> [[f64; 2]; 2] {
        [
            [self.u11.eval(p), self.u12.eval(p)],
            [self.u21.eval(p), self.u22.eval(p)],
        ]
    }
}

/// Plate boundary operators of a polynomial restricted to an edge, each as
/// a polynomial in the edge coordinate `ξ` of the edge frame.
#[derive(Clone, Debug)]
pub struct BoundaryTraces {
    /// Normal bending moment `Σ u_ij n_i n_j`.
    pub unn: EdgePoly,
    /// Twisting moment `Σ u_ij n_i t_j`.
    pub unt: EdgePoly,
    /// Normal shear force `Σ ∂_i u_ij n_j`.
    pub qn: EdgePoly,
    /// Arc-length derivative of the twisting moment along `t`.
    pub dunt_dt: EdgePoly,
}

/// Evaluates the boundary operators of `p` on `edge` for the unit normal
/// `n` and unit tangent `t`. The tangent may point either way along the
/// edge frame; `∂/∂t` accounts for the orientation.
pub fn boundary_operators(p: &CellPoly, edge: &EdgeFrame, n: Vector2<f64>, t: Vector2<f64>) -> BoundaryTraces {
    let h = p.hessian();
    let u11 = h.u11.restrict(edge);
    let u22 = h.u22.restrict(edge);
    let u12 = h.u12.restrict(edge);
    let u21 = h.u21.restrict(edge);

    let unn = u11
        .scale(n.x * n.x)
        .add(&u12.scale(n.x * n.y))
        .add(&u21.scale(n.y * n.x))
        .add(&u22.scale(n.y * n.y));
    let unt = u11
        .scale(n.x * t.x)
        .add(&u12.scale(n.x * t.y))
        .add(&u21.scale(n.y * t.x))
        .add(&u22.scale(n.y * t.y));

    let sx = h.u11.dx().add(&h.u21.dy()).restrict(edge);
    let sy = h.u12.dx().add(&h.u22.dy()).restrict(edge);
    let qn = sx.scale(n.x).add(&sy.scale(n.y));

    let orientation = t.dot(&edge.tangent());
    let dunt_dt = unt.derivative().scale(orientation / edge.length());

    BoundaryTraces { unn, unt, qn, dunt_dt }
}

/// `∫_D m_a m_b dx` for `m_a ∈ basis_a`, `m_b ∈ basis_b`. The rule must be
/// exact to degree `basis_a.degree + basis_b.degree`.
pub fn mass_matrix(basis_a: &ScaledMonomialBasis, basis_b: &ScaledMonomialBasis, rule: &QuadratureRule) -> DMatrix<f64> {
    debug_assert!(rule.degree >= basis_a.degree + basis_b.degree);
    let mut m = DMatrix::zeros(basis_a.len(), basis_b.len());
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let va = basis_a.eval_at(p);
        let vb = basis_b.eval_at(p);
        for (i, a) in va.iter().enumerate() {
            for (j, b) in vb.iter().enumerate() {
                m[(i, j)] += w * a * b;
            }
        }
    }
    m
}
