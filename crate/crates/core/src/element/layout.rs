use crate::error::{Result, VemError};
use crate::polynomial::dim_signed;

/// Local degrees of freedom of the order-`k` element on a polygon with
/// `n_vertices` vertices (and as many edges).
///
/// Order: per vertex `(v, ∂v/∂x, ∂v/∂y)`; per edge the `r - 3` moments
/// `∫ ξ^j v dξ` followed by the `s - 1` moments `∫ ξ^j ∂v/∂n dξ` (canonical
/// edge normal and coordinate); then the interior moments
/// `(1/|D|) ∫_D m_β v` for `m_β ∈ M_{k-4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DofLayout {
    pub k: usize,
    /// Degree of the edge trace of `v`: `max(3, k)`.
    pub r: usize,
    /// Degree of the edge trace of `∂v/∂n`: `k - 1`.
    pub s: usize,
    /// Interior moment degree `k - 4` (negative when there are none).
    pub m: isize,
    pub n_vertices: usize,
}

impl DofLayout {
    pub fn new(k: usize, n_vertices: usize) -> Result<Self> {
        if !(2..=4).contains(&k) {
            return Err(VemError::UnsupportedOrder(k));
        }
        if n_vertices < 3 {
            return Err(VemError::InvalidOption(format!("a cell needs at least 3 vertices, got {n_vertices}")));
        }
        Ok(Self {
            k,
            r: k.max(3),
            s: k - 1,
            m: k as isize - 4,
            n_vertices,
        })
    }

    pub fn n_edges(&self) -> usize {
        self.n_vertices
    }

    /// Number of `v`-moments per edge.
    pub fn edge_value_moments(&self) -> usize {
        self.r - 3
    }

    /// Number of `∂v/∂n`-moments per edge.
    pub fn edge_normal_moments(&self) -> usize {
        self.s - 1
    }

    pub fn per_edge(&self) -> usize {
        self.edge_value_moments() + self.edge_normal_moments()
    }

    pub fn n_interior(&self) -> usize {
        dim_signed(self.m)
    }

    pub fn vertex_dof(&self, vertex: usize, component: usize) -> usize {
        debug_assert!(component < 3);
        3 * vertex + component
    }

    pub fn edge_offset(&self, edge: usize) -> usize {
        3 * self.n_vertices + edge * self.per_edge()
    }

    pub fn interior_offset(&self) -> usize {
        3 * self.n_vertices + self.n_edges() * self.per_edge()
    }

    pub fn n_dofs(&self) -> usize {
        self.interior_offset() + self.n_interior()
    }
}
