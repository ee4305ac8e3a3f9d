use nalgebra::{DMatrix, DVector, Point2};

use super::{edge_mass, LocalElement, LocalProjectors, Stabilization};
use crate::polynomial::{dim, mass_matrix, ScaledMonomialBasis};

/// Local stiffness split into consistency and stabilization parts.
#[derive(Clone, Debug)]
pub struct LocalMatrices {
    /// `PiDeltaᵀ G PiDelta`.
    pub consistency: DMatrix<f64>,
    /// `(I - PiDeltaDof)ᵀ S (I - PiDeltaDof)`.
    pub stabilization: DMatrix<f64>,
    /// Sum of the two, symmetrized.
    pub stiffness: DMatrix<f64>,
}

impl LocalElement {
    /// Gram matrix of `Π⁰_{k-4}` in `L²(D)`: `|D|² Selᵀ H₀⁻¹ Sel`.
    fn interior_energy(&self) -> DMatrix<f64> {
        let l = self.layout;
        if l.m < 0 {
            return DMatrix::zeros(l.n_dofs(), l.n_dofs());
        }
        let low = ScaledMonomialBasis::new(self.frame, l.m as usize);
        let h0 = mass_matrix(&low, &low, &self.rule);
        let sel = self.interior_selector() * self.area;
        let solved = h0.cholesky().expect("interior mass matrix is positive definite").solve(&sel);
        sel.transpose() * solved
    }

    /// Sums `Σ_e Tᵀ M_e T` over the edges for the trace maps produced by `f`.
    fn edge_sum<F: Fn(usize) -> Vec<DMatrix<f64>>>(&self, f: F) -> DMatrix<f64> {
        let n = self.n_dofs();
        let mut out = DMatrix::zeros(n, n);
        for (i, e) in self.edges.iter().enumerate() {
            for t in f(i) {
                let m = edge_mass(e.frame.length(), t.nrows());
                out += t.transpose() * m * &t;
            }
        }
        out
    }

    /// Matrix `N` with `vᵀ N v = ‖Π⁰_{k-4}v‖²_D + h Σ_e ‖v‖²_e + h³ Σ_e Σ_i ‖∂_i v‖²_e`.
    pub fn semi_norm_matrix(&self) -> DMatrix<f64> {
        let h = self.diameter();
        self.interior_energy()
            + self.edge_sum(|i| vec![self.edges[i].value.clone()]) * h
            + self.edge_sum(|i| {
                let (gx, gy) = self.gradient_traces(i);
                vec![gx, gy]
            }) * h.powi(3)
    }

    pub fn semi_norm(&self, dofs: &DVector<f64>) -> f64 {
        dofs.dot(&(self.semi_norm_matrix() * dofs)).max(0.0).sqrt()
    }

    /// The stabilization form as a matrix on raw (unfiltered) DOF vectors.
    pub fn stabilization(&self, variant: Stabilization) -> DMatrix<f64> {
        let h = self.diameter();
        let normal = self.edge_sum(|i| vec![self.edges[i].normal_c.clone()]);
        let s = match variant {
            Stabilization::Dof => self.semi_norm_matrix() * h.powi(-4),
            Stabilization::BoundaryN => {
                self.edge_sum(|i| vec![self.edges[i].value.clone()]) * h.powi(-3) + normal / h
            }
            Stabilization::BoundaryTn => (self.edge_sum(|i| vec![self.tangential_derivative(i)]) + normal) / h,
        };
        (&s + s.transpose()) * 0.5
    }

    pub fn local_stiffness(&self, projectors: &LocalProjectors, variant: Stabilization) -> LocalMatrices {
        let n = self.n_dofs();
        let p = &projectors.pi_delta;
        let consistency = p.transpose() * &projectors.gram * p;
        let filter = DMatrix::<f64>::identity(n, n) - &projectors.pi_delta_dof;
        let stabilization = filter.transpose() * self.stabilization(variant) * &filter;
        let k = &consistency + &stabilization;
        LocalMatrices {
            stiffness: (&k + k.transpose()) * 0.5,
            consistency,
            stabilization,
        }
    }

    /// The load projector `Ξ` as coefficients over `M_j`: `Π⁰_k` for
    /// `k ≤ 3`, and for `k ≥ 4` the `L²` projection of `Π⁰_k v` onto
    /// `P_{k-1}`.
    pub fn load_projector(&self, projectors: &LocalProjectors) -> DMatrix<f64> {
        let k = self.k();
        if k <= 3 {
            return projectors.pi0k.clone();
        }
        let low = ScaledMonomialBasis::new(self.frame, k - 1);
        let full = ScaledMonomialBasis::new(self.frame, k);
        let h_low = mass_matrix(&low, &low, &self.rule);
        let h_cross = mass_matrix(&low, &full, &self.rule);
        h_low
            .cholesky()
            .expect("mass matrix is positive definite")
            .solve(&(h_cross * &projectors.pi0k))
    }

    /// `f_loc = Ξᵀ F` with `F_j = ∫_D f m_j` by a fan rule of degree `2k + 4`.
    pub fn local_load<F: Fn(&Point2<f64>) -> f64>(&self, projectors: &LocalProjectors, f: F) -> DVector<f64> {
        let xi = self.load_projector(projectors);
        let degree = (0..=8).find(|&d| dim(d) == xi.nrows()).expect("load projector rows are dim P_d");
        let basis = ScaledMonomialBasis::new(self.frame, degree);
        let rule = self.rule(2 * self.k() + 4);
        let mut moments = DVector::zeros(basis.len());
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let fw = f(p) * w;
            if fw == 0.0 {
                continue;
            }
            for (j, m) in basis.eval_at(p).into_iter().enumerate() {
                moments[j] += fw * m;
            }
        }
        xi.transpose() * moments
    }
}
