use std::ops::AddAssign;

use nalgebra::{DMatrix, FullPivLU};

use super::{ConstraintMode, LocalElement};
use crate::error::{Result, VemError};
use crate::polynomial::{dim, mass_matrix, CellPoly, ScaledMonomialBasis};

/// Projector matrices of one cell, all acting on the local DOF vector.
#[derive(Clone, Debug)]
pub struct LocalProjectors {
    /// Coefficients of `Π^Δ v` over `M_k`, `dim P_k × N`.
    pub pi_delta: DMatrix<f64>,
    /// DOFs of `Π^Δ v`, `N × N`.
    pub pi_delta_dof: DMatrix<f64>,
    /// Coefficients of `Π⁰_k v` over `M_k`.
    pub pi0k: DMatrix<f64>,
    /// Coefficients of `Π⁰_{k-4} v` over `M_{k-4}` (no rows for `k < 4`).
    pub pi0km4: DMatrix<f64>,
    /// Energy Gram matrix `((m_i, m_j))_D` of `M_k`.
    pub gram: DMatrix<f64>,
}

impl LocalElement {
    /// `((m_i, m_j))_D = ∫_D Σ_ij ∂_ij m_i ∂_ij m_j` over `M_k`.
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.k();
        let n = dim(k);
        let low = ScaledMonomialBasis::new(self.frame, k - 2);
        let mass = mass_matrix(&low, &low, &self.rule);
        let mut h11 = DMatrix::zeros(dim(k - 2), n);
        let mut h22 = h11.clone();
        let mut h12 = h11.clone();
        for j in 0..n {
            let h = CellPoly::monomial(self.frame, k, j).hessian();
            h11.set_column(j, &h.u11.coeffs);
            h22.set_column(j, &h.u22.coeffs);
            h12.set_column(j, &h.u12.coeffs);
        }
        let g = h11.transpose() * &mass * &h11 + h22.transpose() * &mass * &h22 + (h12.transpose() * &mass * &h12) * 2.0;
        (&g + g.transpose()) * 0.5
    }

    /// Right-hand side `((v, m_j))_D` as a `dim P_k × N` map, evaluated by
    /// integrating by parts twice. On a polygon the twisting-moment term
    /// leaves a jump `[U_nt v]` at every corner, which is included.
    pub(crate) fn energy_rhs(&self) -> DMatrix<f64> {
        let k = self.k();
        let l = self.layout;
        let mut b = DMatrix::zeros(dim(k), l.n_dofs());
        let interior = self.interior_selector();
        for j in 0..dim(k) {
            let mj = CellPoly::monomial(self.frame, k, j);
            let mut row = b.row_mut(j);
            if k >= 4 {
                let bl = mj.bilaplacian();
                for (beta, c) in bl.coeffs.iter().enumerate() {
                    row += interior.row(beta) * (self.area * c);
                }
            }
            for (i, e) in self.edges.iter().enumerate() {
                let n = e.frame.normal() * e.sign;
                let t = e.frame.tangent() * e.sign;
                let ops = crate::polynomial::boundary_operators(&mj, &e.frame, n, t);
                let wn = self.edge_weights(i, ops.unn.coeffs(), l.s + 1) * e.sign;
                row += wn.transpose() * &e.normal_c;
                let shear = ops.qn.add(&ops.dunt_dt);
                let wv = self.edge_weights(i, shear.coeffs(), l.r + 1);
                row -= wv.transpose() * &e.value;
                row[l.vertex_dof(e.end, 0)] += e.sign * ops.unt.eval(0.5);
                row[l.vertex_dof(e.start, 0)] -= e.sign * ops.unt.eval(-0.5);
            }
        }
        b
    }

    /// The three rank-fixing functionals as rows over the DOFs, normalized
    /// to be dimensionless.
    pub fn constraint_rows(&self, mode: ConstraintMode) -> Result<DMatrix<f64>> {
        let l = self.layout;
        let h = self.diameter();
        let mut c = DMatrix::zeros(3, l.n_dofs());
        if mode == ConstraintMode::VolumeMean && l.n_interior() == 0 {
            return Err(VemError::InvalidOption(format!(
                "volume-mean constraints need interior moments (k >= 4), got k = {}",
                l.k
            )));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let wv = self.edge_weights(i, &[1.0], l.r + 1);
            let int_v = wv.transpose() * &e.value;
            match mode {
                ConstraintMode::Boundary => {
                    let (gx, gy) = self.gradient_traces(i);
                    let wg = self.edge_weights(i, &[1.0], l.r);
                    c.row_mut(0).add_assign(&((wg.transpose() * gx) * (h / self.perimeter)));
                    c.row_mut(1).add_assign(&((wg.transpose() * gy) * (h / self.perimeter)));
                }
                ConstraintMode::VolumeGradient | ConstraintMode::VolumeMean => {
                    let n = e.frame.normal() * e.sign;
                    c.row_mut(0).add_assign(&(&int_v * (h * n.x / self.area)));
                    c.row_mut(1).add_assign(&(&int_v * (h * n.y / self.area)));
                }
            }
            if mode != ConstraintMode::VolumeMean {
                c.row_mut(2).add_assign(&(&int_v * (1.0 / self.perimeter)));
            }
        }
        if mode == ConstraintMode::VolumeMean {
            // ∫_D v = |D| × (moment against the constant monomial)
            c[(2, l.interior_offset())] = 1.0;
        }
        Ok(c)
    }

    /// `Π^Δ` from the constrained energy system
    /// `[G Cᵀ; C 0] [c; λ] = [b(v); C_dof v]`; returns `(PiDelta, PiDeltaDof)`.
    pub fn projector_delta(&self, mode: ConstraintMode) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let (pi, pi_dof, _) = self.projector_delta_with_gram(mode)?;
        Ok((pi, pi_dof))
    }

    fn projector_delta_with_gram(&self, mode: ConstraintMode) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
        let n = dim(self.k());
        let n_dofs = self.n_dofs();
        let gram = self.gram();
        let ddof = self.monomial_dofs();
        let c_dof = self.constraint_rows(mode)?;
        let c_poly = &c_dof * &ddof;
        // Symmetric diagonal equilibration of the energy block; the affine
        // monomials have zero energy and keep unit scale.
        let scale: Vec<f64> = (0..n)
            .map(|i| if gram[(i, i)] > 0.0 { gram[(i, i)].sqrt().recip() } else { 1.0 })
            .collect();
        let mut system = DMatrix::zeros(n + 3, n + 3);
        for i in 0..n {
            for j in 0..n {
                system[(i, j)] = scale[i] * gram[(i, j)] * scale[j];
            }
            for c in 0..3 {
                system[(i, n + c)] = scale[i] * c_poly[(c, i)];
                system[(n + c, i)] = scale[i] * c_poly[(c, i)];
            }
        }
        let mut rhs = DMatrix::zeros(n + 3, n_dofs);
        let b = self.energy_rhs();
        for (i, si) in scale.iter().enumerate() {
            rhs.row_mut(i).copy_from(&(b.row(i) * *si));
        }
        rhs.view_mut((n, 0), (3, n_dofs)).copy_from(&c_dof);

        let singular = |what: &str| VemError::SingularLocalSystem {
            cell: self.cell,
            what: what.to_string(),
        };
        let lu = FullPivLU::new(system);
        let sol = lu.solve(&rhs).ok_or_else(|| singular("energy projector saddle system"))?;
        let mut pi = sol.rows(0, n).into_owned();
        for (i, si) in scale.iter().enumerate() {
            pi.row_mut(i).scale_mut(*si);
        }
        let defect = (&pi * &ddof - DMatrix::<f64>::identity(n, n)).amax();
        if !defect.is_finite() || defect > 1e-6 {
            return Err(singular(&format!("energy projector fails to reproduce P_k (defect {defect:e})")));
        }
        let pi_dof = &ddof * &pi;
        Ok((pi, pi_dof, gram))
    }

    /// `L²` projectors from `Π^Δ` and the enhancement
    /// `Π⁰_k v - Π^Δ v ∈ P_{k-4}`; returns `(Pi0k, Pi0km4)`.
    pub fn projector_l2(&self, pi_delta: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let l = self.layout;
        if l.m < 0 {
            return (pi_delta.clone(), DMatrix::zeros(0, l.n_dofs()));
        }
        let low = ScaledMonomialBasis::new(self.frame, l.m as usize);
        let full = ScaledMonomialBasis::new(self.frame, l.k);
        let h0 = mass_matrix(&low, &low, &self.rule);
        let hx = mass_matrix(&low, &full, &self.rule);
        let h0_chol = h0.cholesky().expect("interior mass matrix is positive definite");
        let pi0km4 = h0_chol.solve(&(self.interior_selector() * self.area));
        let rho = &pi0km4 - h0_chol.solve(&(hx * pi_delta));
        let mut pi0k = pi_delta.clone();
        let mut head = pi0k.rows_mut(0, low.len());
        head += rho;
        (pi0k, pi0km4)
    }

    pub fn projectors(&self, mode: ConstraintMode) -> Result<LocalProjectors> {
        let (pi_delta, pi_delta_dof, gram) = self.projector_delta_with_gram(mode)?;
        let (pi0k, pi0km4) = self.projector_l2(&pi_delta);
        Ok(LocalProjectors {
            pi_delta,
            pi_delta_dof,
            pi0k,
            pi0km4,
            gram,
        })
    }
}
