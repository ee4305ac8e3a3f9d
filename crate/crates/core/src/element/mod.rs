//! The local virtual element `Q^k(D)`: degrees of freedom, edge-trace
//! reconstruction, the energy projector `Π^Δ`, the `L²` projectors,
//! stabilizations, local stiffness and load.
//!
//! Everything is expressed as dense matrices acting on the local DOF vector,
//! so a cell is processed once and the result reused for any DOF data.

mod layout;
mod matrices;
mod projectors;

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Point2, Vector2};

pub use layout::DofLayout;
pub use matrices::LocalMatrices;
pub use projectors::LocalProjectors;

use crate::error::{Result, VemError};
use crate::mesh::PolygonalMesh;
use crate::polynomial::{dim, edge_monomial_integral, CellFrame, CellPoly, EdgeFrame, ScaledMonomialBasis};
use crate::quadrature::{fan_rule, QuadratureRule};

/// Rank-fixing constraints that pin the `P_1` part of `Π^Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ConstraintMode {
    /// Boundary integrals of `∇v` and of `v`.
    #[default]
    Boundary,
    /// Volume integral of `∇v` (evaluated as `∫_∂D v n ds`) and boundary
    /// integral of `v`.
    VolumeGradient,
    /// Volume integrals of `∇v` and of `v`; needs interior moments (`k ≥ 4`).
    VolumeMean,
}

/// Stabilization bilinear form `S^D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Stabilization {
    /// `h⁻⁴ (Π⁰_{k-4}w, Π⁰_{k-4}v)_D + h⁻³ Σ_e (w, v)_e + h⁻¹ Σ_e Σ_i (∂_i w, ∂_i v)_e`.
    #[default]
    Dof,
    /// `h⁻³ (w, v)_∂D + h⁻¹ (∂_n w, ∂_n v)_∂D`.
    BoundaryN,
    /// `h⁻¹ (∂_t w, ∂_t v)_∂D + h⁻¹ (∂_n w, ∂_n v)_∂D`.
    BoundaryTn,
}

macro_rules! named_enum {
    ($ty:ty, $what:literal, [$($variant:ident => $name:literal),+]) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$(<$ty>::$variant),+];

            pub fn name(&self) -> &'static str {
                match self {
                    $(<$ty>::$variant => $name),+
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = VemError;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(<$ty>::$variant),)+
                    _ => Err(VemError::InvalidOption(format!(concat!("unknown ", $what, " '{}'"), s))),
                }
            }
        }
    };
}

named_enum!(ConstraintMode, "constraint mode", [
    Boundary => "boundary",
    VolumeGradient => "volume-gradient",
    VolumeMean => "volume-mean"
]);

named_enum!(Stabilization, "stabilization", [
    Dof => "dof",
    BoundaryN => "boundary-n",
    BoundaryTn => "boundary-tn"
]);

/// Element-level choices shared by every cell of a discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ElementOptions {
    pub constraints: ConstraintMode,
    pub stabilization: Stabilization,
}

/// Reconstructed traces on one edge, as linear maps from the local DOF
/// vector to coefficients over `ξ^j` in the canonical edge coordinate.
#[derive(Clone, Debug)]
pub struct EdgeTraces {
    /// `v|_e ∈ P_r`, `(r + 1) × N`.
    pub value: DMatrix<f64>,
    /// Outward normal derivative `∂v/∂n ∈ P_s`, `(s + 1) × N`.
    pub normal: DMatrix<f64>,
}

#[derive(Clone, Debug)]
struct LocalEdge {
    /// Canonically oriented frame.
    frame: EdgeFrame,
    /// Outward normal = `sign` × canonical normal.
    sign: f64,
    /// Local vertex indices at the canonical start and end.
    start: usize,
    end: usize,
    /// `v|_e` over `ξ^j`, `(r + 1) × N`.
    value: DMatrix<f64>,
    /// `∂v/∂n_c` (canonical normal) over `ξ^j`, `(s + 1) × N`.
    normal_c: DMatrix<f64>,
}

/// Geometry and DOF-to-trace maps of one polygonal cell.
#[derive(Clone, Debug)]
pub struct LocalElement {
    cell: usize,
    layout: DofLayout,
    points: Vec<Point2<f64>>,
    apex: Point2<f64>,
    frame: CellFrame,
    area: f64,
    perimeter: f64,
    edges: Vec<LocalEdge>,
    /// Fan rule exact to degree `2k`.
    rule: QuadratureRule,
}

impl LocalElement {
    /// Builds cell `cell` of `mesh`, using the mesh's canonical edge
    /// orientations so that edge DOFs agree between neighbors.
    pub fn from_mesh(mesh: &PolygonalMesh, cell: usize, k: usize) -> Result<Self> {
        let vertices = mesh.cell(cell);
        let layout = DofLayout::new(k, vertices.len())?;
        let geometry = mesh.geometry(cell);
        let apex = geometry.star_center.ok_or(VemError::NotStarShaped {
            cell,
            rho_star: geometry.rho_star,
        })?;
        let points = mesh.cell_points(cell);
        let n = points.len();
        let edges = mesh
            .cell_edges(cell)
            .iter()
            .enumerate()
            .map(|(i, ce)| {
                let frame = mesh.edge_frame(ce.edge);
                let (start, end) = if ce.sign > 0.0 { (i, (i + 1) % n) } else { ((i + 1) % n, i) };
                let (value, normal_c) = reconstruct_traces(&layout, &frame, i, start, end);
                LocalEdge {
                    frame,
                    sign: ce.sign,
                    start,
                    end,
                    value,
                    normal_c,
                }
            })
            .collect::<Vec<_>>();
        let perimeter = edges.iter().map(|e| e.frame.length()).sum();
        Ok(Self {
            cell,
            layout,
            rule: fan_rule(&points, apex, 2 * k),
            frame: CellFrame::new(geometry.centroid, geometry.diameter),
            area: geometry.area,
            perimeter,
            apex,
            points,
            edges,
        })
    }

    /// Builds a stand-alone element on the polygon `points` (counterclockwise
    /// or clockwise). Edges are oriented from the lower to the higher vertex
    /// position, exactly as in a one-cell mesh.
    pub fn from_polygon(points: &[Point2<f64>], k: usize) -> Result<Self> {
        let mesh = PolygonalMesh::new(points.to_vec(), vec![(0..points.len()).collect()])?;
        Self::from_mesh(&mesh, 0, k)
    }

    pub fn cell(&self) -> usize {
        self.cell
    }

    pub fn layout(&self) -> &DofLayout {
        &self.layout
    }

    pub fn k(&self) -> usize {
        self.layout.k
    }

    pub fn n_dofs(&self) -> usize {
        self.layout.n_dofs()
    }

    pub fn frame(&self) -> CellFrame {
        self.frame
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn diameter(&self) -> f64 {
        self.frame.diameter
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn points(&self) -> &[Point2<f64>] {
        &self.points
    }

    /// Fan rule on the cell exact to `degree`.
    pub fn rule(&self, degree: usize) -> QuadratureRule {
        if degree == self.rule.degree {
            self.rule.clone()
        } else {
            fan_rule(&self.points, self.apex, degree)
        }
    }

    /// Canonical frame of local edge `i`.
    pub fn edge_frame(&self, i: usize) -> EdgeFrame {
        self.edges[i].frame
    }

    /// `+1` if the counterclockwise traversal of local edge `i` agrees with
    /// its canonical orientation, `-1` otherwise.
    pub fn edge_sign(&self, i: usize) -> f64 {
        self.edges[i].sign
    }

    pub fn outward_normal(&self, i: usize) -> Vector2<f64> {
        self.edges[i].frame.normal() * self.edges[i].sign
    }

    /// Trace maps of local edge `i`, with the normal derivative taken along
    /// the outward normal of this cell.
    pub fn edge_traces(&self, i: usize) -> EdgeTraces {
        let e = &self.edges[i];
        EdgeTraces {
            value: e.value.clone(),
            normal: &e.normal_c * e.sign,
        }
    }

    /// Cartesian gradient traces `(∂v/∂x, ∂v/∂y)` on local edge `i`, both of
    /// degree `r - 1` in `ξ`.
    fn gradient_traces(&self, i: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        let e = &self.edges[i];
        let t = e.frame.tangent();
        let nc = e.frame.normal();
        let dt = self.tangential_derivative(i);
        let mut gx = &dt * t.x;
        let mut gy = &dt * t.y;
        let rows = e.normal_c.nrows();
        gx.rows_mut(0, rows).add_assign(&(&e.normal_c * nc.x));
        gy.rows_mut(0, rows).add_assign(&(&e.normal_c * nc.y));
        (gx, gy)
    }

    /// Arc-length derivative of `v|_e` along the canonical tangent, `r × N`.
    fn tangential_derivative(&self, i: usize) -> DMatrix<f64> {
        let e = &self.edges[i];
        let r = self.layout.r;
        let inv_len = 1.0 / e.frame.length();
        DMatrix::from_fn(r, self.n_dofs(), |j, c| (j + 1) as f64 * e.value[(j + 1, c)] * inv_len)
    }

    /// Local DOF values of a polynomial (any degree up to `k`).
    pub fn dofs_of(&self, q: &CellPoly) -> DVector<f64> {
        let l = &self.layout;
        let mut d = DVector::zeros(l.n_dofs());
        let (qx, qy) = (q.dx(), q.dy());
        for (i, p) in self.points.iter().enumerate() {
            d[l.vertex_dof(i, 0)] = q.eval(p);
            d[l.vertex_dof(i, 1)] = qx.eval(p);
            d[l.vertex_dof(i, 2)] = qy.eval(p);
        }
        for (i, e) in self.edges.iter().enumerate() {
            let off = l.edge_offset(i);
            let trace = q.restrict(&e.frame);
            for j in 0..l.edge_value_moments() {
                d[off + j] = moment(trace.coeffs(), j);
            }
            let nc = e.frame.normal();
            let dn = qx.scale(nc.x).add(&qy.scale(nc.y)).restrict(&e.frame);
            for j in 0..l.edge_normal_moments() {
                d[off + l.edge_value_moments() + j] = moment(dn.coeffs(), j);
            }
        }
        if l.n_interior() > 0 {
            let basis = ScaledMonomialBasis::new(self.frame, l.m as usize);
            let off = l.interior_offset();
            for (p, w) in self.rule.points.iter().zip(&self.rule.weights) {
                let qv = q.eval(p) * w / self.area;
                for (b, m) in basis.eval_at(p).into_iter().enumerate() {
                    d[off + b] += m * qv;
                }
            }
        }
        d
    }

    /// `Ddof`: column `j` holds the DOFs of the `j`-th monomial of `M_k`.
    pub fn monomial_dofs(&self) -> DMatrix<f64> {
        let k = self.k();
        let mut out = DMatrix::zeros(self.n_dofs(), dim(k));
        for j in 0..dim(k) {
            out.set_column(j, &self.dofs_of(&CellPoly::monomial(self.frame, k, j)));
        }
        out
    }

    /// Polynomial in this cell's frame; the degree is inferred from the
    /// coefficient count.
    pub fn poly(&self, coeffs: DVector<f64>) -> CellPoly {
        let k = (0..=8).find(|&d| dim(d) == coeffs.len()).expect("coefficient length must be dim P_d");
        CellPoly::from_coeffs(self.frame, k, coeffs)
    }

    /// Rows selecting the interior-moment DOFs, `dim P_{k-4} × N`.
    fn interior_selector(&self) -> DMatrix<f64> {
        let l = &self.layout;
        let mut sel = DMatrix::zeros(l.n_interior(), l.n_dofs());
        for b in 0..l.n_interior() {
            sel[(b, l.interior_offset() + b)] = 1.0;
        }
        sel
    }

    /// `∫_e p(ξ) ξ^i ds` for each `i < rows`, i.e. the row vector that turns a
    /// trace map into `∫_e p · trace ds`.
    fn edge_weights(&self, i: usize, p: &[f64], rows: usize) -> DVector<f64> {
        let len = self.edges[i].frame.length();
        DVector::from_fn(rows, |j, _| len * p.iter().enumerate().map(|(a, c)| c * edge_monomial_integral(a + j)).sum::<f64>())
    }
}

/// `∫_{-1/2}^{1/2} p(ξ) ξ^j dξ`.
fn moment(p: &[f64], j: usize) -> f64 {
    p.iter().enumerate().map(|(a, c)| c * edge_monomial_integral(a + j)).sum()
}

/// Edge mass matrix `L ∫ ξ^{i+j} dξ` of size `n × n`.
fn edge_mass(len: f64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| len * edge_monomial_integral(i + j))
}

/// Hermite-type reconstruction of `v|_e ∈ P_r` and `∂v/∂n_c|_e ∈ P_s` on
/// local edge `local` from endpoint data and edge moments.
fn reconstruct_traces(
    layout: &DofLayout,
    frame: &EdgeFrame,
    local: usize,
    start: usize,
    end: usize,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let n_dofs = layout.n_dofs();
    let len = frame.length();
    let t = frame.tangent();
    let nc = frame.normal();
    let off = layout.edge_offset(local);

    let r = layout.r;
    let mut a = DMatrix::zeros(r + 1, r + 1);
    let mut data = DMatrix::zeros(r + 1, n_dofs);
    for (row, (xi, vertex)) in [(-0.5f64, start), (0.5, end)].into_iter().enumerate() {
        for i in 0..=r {
            a[(row, i)] = xi.powi(i as i32);
            if i > 0 {
                a[(row + 2, i)] = i as f64 * xi.powi(i as i32 - 1);
            }
        }
        data[(row, layout.vertex_dof(vertex, 0))] = 1.0;
        data[(row + 2, layout.vertex_dof(vertex, 1))] = len * t.x;
        data[(row + 2, layout.vertex_dof(vertex, 2))] = len * t.y;
    }
    for j in 0..layout.edge_value_moments() {
        for i in 0..=r {
            a[(4 + j, i)] = edge_monomial_integral(i + j);
        }
        data[(4 + j, off + j)] = 1.0;
    }

    let s = layout.s;
    let mut b = DMatrix::zeros(s + 1, s + 1);
    let mut ndata = DMatrix::zeros(s + 1, n_dofs);
    for (row, (xi, vertex)) in [(-0.5f64, start), (0.5, end)].into_iter().enumerate() {
        for i in 0..=s {
            b[(row, i)] = xi.powi(i as i32);
        }
        ndata[(row, layout.vertex_dof(vertex, 1))] = nc.x;
        ndata[(row, layout.vertex_dof(vertex, 2))] = nc.y;
    }
    for j in 0..layout.edge_normal_moments() {
        for i in 0..=s {
            b[(2 + j, i)] = edge_monomial_integral(i + j);
        }
        ndata[(2 + j, off + layout.edge_value_moments() + j)] = 1.0;
    }

    let a_inv = a.try_inverse().expect("edge reconstruction system is nonsingular for distinct endpoints");
    let b_inv = b.try_inverse().expect("edge reconstruction system is nonsingular for distinct endpoints");
    (a_inv * data, b_inv * ndata)
}
