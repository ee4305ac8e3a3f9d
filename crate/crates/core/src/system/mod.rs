//! Global DOF numbering, assembly, clamped boundary conditions and the
//! sparse symmetric solve.

mod dofmap;
mod solve;

pub use dofmap::GlobalDofMap;
pub use solve::{apply_clamped_bc, solve, ReducedSystem, Solution, SolveMethod, SolveReport, SolverOptions};

use nalgebra::{DMatrix, DVector, Point2};
use rayon::prelude::*;
use sprs::{CsMat, TriMat};

use crate::element::{ElementOptions, LocalElement, LocalProjectors};
use crate::error::Result;
use crate::mesh::PolygonalMesh;

/// Per-cell operators kept after assembly for post-processing.
#[derive(Clone, Debug)]
pub struct CellOperators {
    pub element: LocalElement,
    pub projectors: LocalProjectors,
    pub stiffness: DMatrix<f64>,
    pub load: DVector<f64>,
}

/// Assembled (unconstrained) global system.
#[derive(Clone, Debug)]
pub struct GlobalSystem {
    /// Full symmetric stiffness matrix, CSR.
    pub matrix: CsMat<f64>,
    pub rhs: DVector<f64>,
    /// `true` for DOFs fixed by the clamped condition.
    pub constrained: Vec<bool>,
}

impl GlobalSystem {
    pub fn n_dofs(&self) -> usize {
        self.rhs.len()
    }
}

/// A mesh, its numbering, the per-cell operators and the assembled system.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub k: usize,
    pub options: ElementOptions,
    pub dof_map: GlobalDofMap,
    pub cells: Vec<CellOperators>,
    pub system: GlobalSystem,
}

impl Discretization {
    /// Local DOF vector of `cell` extracted from a global vector.
    pub fn local_dofs(&self, cell: usize, global: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.dof_map.cell_dofs(cell).len(),
            self.dof_map.cell_dofs(cell).iter().map(|&g| global[g]),
        )
    }
}

/// Builds every cell's operators (in parallel) and scatters them into the
/// global matrix and load vector in ascending cell order.
pub fn assemble<F>(mesh: &PolygonalMesh, k: usize, options: ElementOptions, f: F) -> Result<Discretization>
where
    F: Fn(&Point2<f64>) -> f64 + Sync,
{
    let dof_map = GlobalDofMap::new(mesh, k)?;
    let cells = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let element = LocalElement::from_mesh(mesh, c, k)?;
            let projectors = element.projectors(options.constraints)?;
            let stiffness = element.local_stiffness(&projectors, options.stabilization).stiffness;
            let load = element.local_load(&projectors, &f);
            Ok(CellOperators {
                element,
                projectors,
                stiffness,
                load,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = dof_map.n_dofs();
    let nnz: usize = cells.iter().map(|c| c.stiffness.len()).sum();
    let mut triplets = TriMat::with_capacity((n, n), nnz);
    let mut rhs = DVector::zeros(n);
    for (c, ops) in cells.iter().enumerate() {
        let map = dof_map.cell_dofs(c);
        for (a, &ga) in map.iter().enumerate() {
            rhs[ga] += ops.load[a];
            for (b, &gb) in map.iter().enumerate() {
                let v = ops.stiffness[(a, b)];
                if v != 0.0 {
                    triplets.add_triplet(ga, gb, v);
                }
            }
        }
    }
    let system = GlobalSystem {
        matrix: triplets.to_csr(),
        rhs,
        constrained: dof_map.constrained().to_vec(),
    };
    Ok(Discretization {
        k,
        options,
        dof_map,
        cells,
        system,
    })
}
