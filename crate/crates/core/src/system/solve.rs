use nalgebra::DVector;
use sprs::{CsMat, FillInReduction, SymmetryCheck};
use sprs_ldl::Ldl;

use super::GlobalSystem;
use crate::error::{Result, VemError};

/// System on the free DOFs after eliminating the clamped ones.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    /// `A_ff`, CSR.
    pub matrix: CsMat<f64>,
    /// `b_f - A_fc g`.
    pub rhs: DVector<f64>,
    /// Global indices of the free DOFs, ascending.
    pub free: Vec<usize>,
    /// Full-length vector holding the prescribed values `g` (zero on free DOFs).
    pub prescribed: DVector<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolveMethod {
    /// Jacobi-scaled sparse `LDLᵀ` with reverse Cuthill–McKee ordering and
    /// iterative refinement; falls back to conjugate gradients if the
    /// residual target is missed.
    #[default]
    Direct,
    /// Jacobi-preconditioned conjugate gradients.
    ConjugateGradient,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub method: SolveMethod,
    /// Target relative residual `‖A x - b‖ / ‖b‖`.
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: SolveMethod::Direct,
            tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveReport {
    /// Method that produced the accepted solution.
    pub method: SolveMethod,
    /// Refinement steps (direct) or CG iterations.
    pub iterations: usize,
    pub residual: f64,
    pub n_free: usize,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Full-length DOF vector with the prescribed values re-inserted.
    pub dofs: DVector<f64>,
    pub report: SolveReport,
}

/// Eliminates the constrained DOFs. `lifting` supplies their values (for
/// instance the interpolant of a non-homogeneous exact solution); `None`
/// means homogeneous clamped conditions.
pub fn apply_clamped_bc(system: &GlobalSystem, lifting: Option<&DVector<f64>>) -> Result<ReducedSystem> {
    let n = system.n_dofs();
    let mut prescribed = DVector::zeros(n);
    if let Some(g) = lifting {
        if g.len() != n {
            return Err(VemError::LiftingLength {
                got: g.len(),
                expected: n,
            });
        }
        for i in (0..n).filter(|&i| system.constrained[i]) {
            prescribed[i] = g[i];
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| !system.constrained[i]).collect();
    let mut position = vec![usize::MAX; n];
    for (fi, &g) in free.iter().enumerate() {
        position[g] = fi;
    }

    let mut indptr = Vec::with_capacity(free.len() + 1);
    let mut indices = Vec::new();
    let mut data = Vec::new();
    let mut rhs = DVector::zeros(free.len());
    indptr.push(0);
    for (fi, &g) in free.iter().enumerate() {
        rhs[fi] = system.rhs[g];
        let row = system.matrix.outer_view(g).expect("row index in range");
        for (j, &v) in row.iter() {
            if system.constrained[j] {
                rhs[fi] -= v * prescribed[j];
            } else {
                indices.push(position[j]);
                data.push(v);
            }
        }
        indptr.push(indices.len());
    }
    let matrix = CsMat::new((free.len(), free.len()), indptr, indices, data);
    Ok(ReducedSystem {
        matrix,
        rhs,
        free,
        prescribed,
    })
}

fn spmv(a: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    a.outer_iterator()
        .map(|row| row.iter().map(|(j, v)| v * x[j]).sum())
        .collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn residual(a: &CsMat<f64>, x: &[f64], b: &[f64]) -> Vec<f64> {
    spmv(a, x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

fn diagonal(a: &CsMat<f64>) -> Result<Vec<f64>> {
    (0..a.rows())
        .map(|i| {
            let d = a.get(i, i).copied().unwrap_or(0.0);
            if d > 0.0 {
                Ok(d)
            } else {
                Err(VemError::NotPositiveDefinite { pivot: i, value: d })
            }
        })
        .collect()
}

/// Solves the reduced system and re-inserts the prescribed values.
pub fn solve(system: &ReducedSystem, options: &SolverOptions) -> Result<Solution> {
    let nf = system.free.len();
    let b: Vec<f64> = system.rhs.iter().copied().collect();
    let b_norm = norm(&b);
    let (x, report) = if nf == 0 || b_norm == 0.0 {
        if nf > 0 {
            diagonal(&system.matrix)?;
        }
        let report = SolveReport {
            method: options.method,
            iterations: 0,
            residual: 0.0,
            n_free: nf,
        };
        (vec![0.0; nf], report)
    } else {
        match options.method {
            SolveMethod::Direct => solve_direct(&system.matrix, &b, options.tolerance)?,
            SolveMethod::ConjugateGradient => {
                conjugate_gradient(&system.matrix, &b, vec![0.0; nf], options.tolerance)?
            }
        }
    };
    let mut dofs = system.prescribed.clone();
    for (fi, &g) in system.free.iter().enumerate() {
        dofs[g] = x[fi];
    }
    Ok(Solution { dofs, report })
}

fn solve_direct(a: &CsMat<f64>, b: &[f64], tolerance: f64) -> Result<(Vec<f64>, SolveReport)> {
    let n = b.len();
    let scale: Vec<f64> = diagonal(a)?.iter().map(|d| d.sqrt().recip()).collect();
    let mut scaled = a.clone();
    for (i, mut row) in scaled.outer_iterator_mut().enumerate() {
        for (j, v) in row.iter_mut() {
            *v *= scale[i] * scale[j];
        }
    }
    let ldl = Ldl::new()
        .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
        .check_symmetry(SymmetryCheck::DontCheckSymmetry)
        .numeric(scaled.view())
        .map_err(|_| VemError::NotPositiveDefinite { pivot: 0, value: 0.0 })?;
    if let Some((pivot, &value)) = ldl.d().iter().enumerate().find(|(_, d)| d.is_nan() || **d <= 0.0) {
        return Err(VemError::NotPositiveDefinite { pivot, value });
    }
    let apply = |r: &[f64]| -> Vec<f64> {
        let rs: Vec<f64> = r.iter().zip(&scale).map(|(ri, si)| ri * si).collect();
        ldl.solve(&rs).iter().zip(&scale).map(|(yi, si)| yi * si).collect()
    };

    let b_norm = norm(b);
    let mut x = apply(b);
    let mut r = residual(a, &x, b);
    let mut rel = norm(&r) / b_norm;
    let mut steps = 0;
    while rel > tolerance && steps < 3 {
        let dx = apply(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        r = residual(a, &x, b);
        rel = norm(&r) / b_norm;
        steps += 1;
    }
    if rel <= tolerance {
        let report = SolveReport {
            method: SolveMethod::Direct,
            iterations: steps,
            residual: rel,
            n_free: n,
        };
        return Ok((x, report));
    }
    conjugate_gradient(a, b, x, tolerance)
}

fn conjugate_gradient(a: &CsMat<f64>, b: &[f64], mut x: Vec<f64>, tolerance: f64) -> Result<(Vec<f64>, SolveReport)> {
    let n = b.len();
    let inv_diag: Vec<f64> = diagonal(a)?.iter().map(|d| d.recip()).collect();
    let b_norm = norm(b);
    let mut r = residual(a, &x, b);
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let max_iterations = 10 * n;
    let mut rel = norm(&r) / b_norm;
    let mut iterations = 0;
    while rel > tolerance {
        if iterations == max_iterations {
            return Err(VemError::NoConvergence {
                iterations,
                residual: rel,
            });
        }
        let ap = spmv(a, &p);
        let curvature: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if curvature.is_nan() || curvature <= 0.0 {
            return Err(VemError::NotPositiveDefinite {
                pivot: iterations,
                value: curvature,
            });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        if iterations % 50 == 0 {
            // guard against drift of the recursively updated residual
            r = residual(a, &x, b);
        }
        rel = norm(&r) / b_norm;
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = norm(&residual(a, &x, b)) / b_norm;
    if rel > tolerance {
        return Err(VemError::InaccurateSolve(rel));
    }
    Ok((
        x,
        SolveReport {
            method: SolveMethod::ConjugateGradient,
            iterations,
            residual: rel,
            n_free: n,
        },
    ))
}
