use crate::element::DofLayout;
use crate::error::Result;
use crate::mesh::PolygonalMesh;

/// Global numbering: vertex triples `3v + {0, 1, 2}`, then one block per
/// edge, then one block per cell interior.
///
/// Edge moments are stored against the canonical edge coordinate and
/// normal both locally and globally, so the local-to-global map needs no
/// sign changes.
#[derive(Clone, Debug)]
pub struct GlobalDofMap {
    k: usize,
    n_vertices: usize,
    n_edges: usize,
    per_edge: usize,
    per_cell: usize,
    cell_dofs: Vec<Vec<usize>>,
    constrained: Vec<bool>,
}

impl GlobalDofMap {
    pub fn new(mesh: &PolygonalMesh, k: usize) -> Result<Self> {
        // per-edge and per-cell block sizes do not depend on the polygon
        let probe = DofLayout::new(k, 3)?;
        let per_edge = probe.per_edge();
        let per_cell = probe.n_interior();
        let (nv, ne) = (mesh.num_vertices(), mesh.num_edges());
        let edge_base = 3 * nv;
        let cell_base = edge_base + ne * per_edge;
        let n = cell_base + mesh.num_cells() * per_cell;

        let cell_dofs = (0..mesh.num_cells())
            .map(|c| {
                let layout = DofLayout::new(k, mesh.cell(c).len())?;
                let mut map = vec![0; layout.n_dofs()];
                for (i, &v) in mesh.cell(c).iter().enumerate() {
                    for comp in 0..3 {
                        map[layout.vertex_dof(i, comp)] = 3 * v + comp;
                    }
                }
                for (i, ce) in mesh.cell_edges(c).iter().enumerate() {
                    for j in 0..per_edge {
                        map[layout.edge_offset(i) + j] = edge_base + ce.edge * per_edge + j;
                    }
                }
                for j in 0..per_cell {
                    map[layout.interior_offset() + j] = cell_base + c * per_cell + j;
                }
                Ok(map)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut constrained = vec![false; n];
        for v in (0..nv).filter(|&v| mesh.is_boundary_vertex(v)) {
            constrained[3 * v..3 * v + 3].fill(true);
        }
        for (e, edge) in mesh.edges().iter().enumerate() {
            if edge.is_boundary() {
                constrained[edge_base + e * per_edge..edge_base + (e + 1) * per_edge].fill(true);
            }
        }
        Ok(Self {
            k,
            n_vertices: nv,
            n_edges: ne,
            per_edge,
            per_cell,
            cell_dofs,
            constrained,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_dofs(&self) -> usize {
        self.constrained.len()
    }

    pub fn n_free(&self) -> usize {
        self.constrained.iter().filter(|c| !**c).count()
    }

    pub fn cell_dofs(&self, cell: usize) -> &[usize] {
        &self.cell_dofs[cell]
    }

    pub fn constrained(&self) -> &[bool] {
        &self.constrained
    }

    pub fn vertex_dof(&self, vertex: usize, component: usize) -> usize {
        3 * vertex + component
    }

    pub fn edge_dof(&self, edge: usize, j: usize) -> usize {
        3 * self.n_vertices + edge * self.per_edge + j
    }

    pub fn cell_dof(&self, cell: usize, j: usize) -> usize {
        3 * self.n_vertices + self.n_edges * self.per_edge + cell * self.per_cell + j
    }

    pub fn per_edge(&self) -> usize {
        self.per_edge
    }

    pub fn per_cell(&self) -> usize {
        self.per_cell
    }
}
