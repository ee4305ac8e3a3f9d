use nalgebra::DVector;
use rayon::prelude::*;

use super::ManufacturedCase;
use crate::error::Result;
use crate::mesh::PolygonalMesh;
use crate::polynomial::{ScaledMonomialBasis, CellFrame};
use crate::quadrature::{edge_rule, polygon_rule};
use crate::system::{Discretization, GlobalDofMap};

/// The six computable errors, for `Π^Δ u_h` and `Π⁰ u_h`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorNorms {
    pub h2_pd: f64,
    pub h1_pd: f64,
    pub l2_pd: f64,
    pub h2_p0: f64,
    pub h1_p0: f64,
    pub l2_p0: f64,
}

impl ErrorNorms {
    pub const LABELS: [&'static str; 6] = ["h2_pd", "h1_pd", "l2_pd", "h2_p0", "h1_p0", "l2_p0"];

    pub fn as_array(&self) -> [f64; 6] {
        [self.h2_pd, self.h1_pd, self.l2_pd, self.h2_p0, self.h1_p0, self.l2_p0]
    }

    fn from_squares(s: [f64; 6]) -> Self {
        let s = s.map(f64::sqrt);
        Self {
            h2_pd: s[0],
            h1_pd: s[1],
            l2_pd: s[2],
            h2_p0: s[3],
            h1_p0: s[4],
            l2_p0: s[5],
        }
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }
}

/// Degree of the quadrature used for interpolation and error integrals.
fn study_degree(k: usize) -> usize {
    2 * k + 4
}

/// DOF vector of the interpolant `I_{k,h} u`: point values and gradients at
/// vertices, Gauss-integrated edge moments of `u` and `∂u/∂n` (canonical
/// normal), and polygon-integrated interior moments.
pub fn interpolate_dofs(mesh: &PolygonalMesh, k: usize, case: &ManufacturedCase) -> Result<DVector<f64>> {
    let map = GlobalDofMap::new(mesh, k)?;
    let degree = study_degree(k);
    let mut dofs = DVector::zeros(map.n_dofs());
    for (v, p) in mesh.vertices().iter().enumerate() {
        let g = case.gradient(p);
        dofs[map.vertex_dof(v, 0)] = case.value(p);
        dofs[map.vertex_dof(v, 1)] = g.x;
        dofs[map.vertex_dof(v, 2)] = g.y;
    }
    let n_value = k.max(3) - 3;
    let n_normal = k - 2;
    for e in 0..mesh.num_edges() {
        let frame = mesh.edge_frame(e);
        let len = frame.length();
        let nc = frame.normal();
        let rule = edge_rule(&frame, degree);
        for j in 0..n_value {
            dofs[map.edge_dof(e, j)] = rule.integrate(|s, p| (s / len).powi(j as i32) * case.value(p)) / len;
        }
        for j in 0..n_normal {
            dofs[map.edge_dof(e, n_value + j)] =
                rule.integrate(|s, p| (s / len).powi(j as i32) * case.gradient(p).dot(&nc)) / len;
        }
    }
    if k >= 4 {
        for c in 0..mesh.num_cells() {
            let geometry = mesh.geometry(c);
            let basis = ScaledMonomialBasis::new(CellFrame::new(geometry.centroid, geometry.diameter), k - 4);
            let rule = polygon_rule(mesh, c, degree)?;
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let u = case.value(p) * w / geometry.area;
                for (b, m) in basis.eval_at(p).into_iter().enumerate() {
                    dofs[map.cell_dof(c, b)] += m * u;
                }
            }
        }
    }
    Ok(dofs)
}

/// Broken `H²`, `H¹` semi-norms and `L²` norm of `u - Π^Δ u_h` and
/// `u - Π⁰ u_h` for the global DOF vector `dofs`.
pub fn error_norms(disc: &Discretization, dofs: &DVector<f64>, case: &ManufacturedCase) -> ErrorNorms {
    let degree = study_degree(disc.k);
    let per_cell: Vec<[f64; 6]> = disc
        .cells
        .par_iter()
        .enumerate()
        .map(|(c, ops)| {
            let el = &ops.element;
            let local = disc.local_dofs(c, dofs);
            let pd = el.poly(&ops.projectors.pi_delta * &local);
            let p0 = el.poly(&ops.projectors.pi0k * &local);
            let (pd_h, p0_h) = (pd.hessian(), p0.hessian());
            let rule = el.rule(degree);
            let mut acc = [0.0; 6];
            for (x, w) in rule.points.iter().zip(&rule.weights) {
                let (u, gu, hu) = (case.value(x), case.gradient(x), case.hessian(x));
                for (offset, p, h) in [(0, &pd, &pd_h), (3, &p0, &p0_h)] {
                    let hp = h.eval(x);
                    let mut h2 = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            h2 += (hu[(i, j)] - hp[i][j]).powi(2);
                        }
                    }
                    acc[offset] += w * h2;
                    acc[offset + 1] += w * (gu - p.gradient(x)).norm_squared();
                    acc[offset + 2] += w * (u - p.eval(x)).powi(2);
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; 6];
    for acc in per_cell {
        for (t, a) in total.iter_mut().zip(acc) {
            *t += a;
        }
    }
    ErrorNorms::from_squares(total)
}

/// `(‖u‖_{L²}, |u|_{H¹}, |u|_{H²})` by the same quadrature as [`error_norms`].
pub fn solution_norms(disc: &Discretization, case: &ManufacturedCase) -> (f64, f64, f64) {
    let e = error_norms(disc, &DVector::zeros(disc.dof_map.n_dofs()), case);
    (e.l2_pd, e.h1_pd, e.h2_pd)
}
