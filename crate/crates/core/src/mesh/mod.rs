//! Conforming polygonal meshes of planar domains.

mod generate;
pub mod geometry;
mod io;
mod regularity;

pub use generate::{generate_mesh, MeshFamily};
pub use geometry::CellGeometry;
pub use io::{load_mesh, MeshFile};
pub use regularity::{check_regularity, CellRegularity, RegularityReport};

use std::collections::HashMap;

use nalgebra::{Point2, Vector2};

use crate::error::{Result, VemError};
use crate::polynomial::EdgeFrame;

/// An edge stored with its canonical orientation `vertices[0] < vertices[1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub vertices: [usize; 2],
    /// Incident cells in ascending order (one for boundary edges, two otherwise).
    pub cells: Vec<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() == 1
    }
}

/// Local edge `i` of a cell runs from `cell[i]` to `cell[i + 1]`. `sign` is
/// `+1` when that counterclockwise traversal agrees with the canonical edge
/// orientation and `-1` otherwise; the outward normal of the cell on this
/// edge is `sign` times the canonical normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellEdge {
    pub edge: usize,
    pub sign: f64,
}

/// A validated conforming partition of a polygonal domain into simple,
/// counterclockwise polygons.
#[derive(Clone, Debug)]
pub struct PolygonalMesh {
    vertices: Vec<Point2<f64>>,
    cells: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    cell_edges: Vec<Vec<CellEdge>>,
    boundary_vertex: Vec<bool>,
    geometry: Vec<CellGeometry>,
    tolerance: f64,
}

impl PolygonalMesh {
    /// Validates and builds a mesh. Clockwise cells are reversed.
    pub fn new(vertices: Vec<Point2<f64>>, cells: Vec<Vec<usize>>) -> Result<Self> {
        if vertices.is_empty() || cells.is_empty() {
            return Err(VemError::MalformedMesh("mesh has no vertices or no cells".into()));
        }
        let tolerance = 1e-12 * bounding_box_diameter(&vertices);
        check_duplicates(&vertices, tolerance)?;

        let mut used = vec![false; vertices.len()];
        let mut cells = cells;
        for (c, cell) in cells.iter_mut().enumerate() {
            if cell.len() < 3 {
                return Err(VemError::NonSimplePolygon {
                    cell: c,
                    reason: format!("{} vertices", cell.len()),
                });
            }
            for &v in cell.iter() {
                if v >= vertices.len() {
                    return Err(VemError::MalformedMesh(format!("cell {c} references vertex {v} out of range")));
                }
                used[v] = true;
            }
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(VemError::NonSimplePolygon {
                    cell: c,
                    reason: "repeated vertex".into(),
                });
            }
            let pts: Vec<Point2<f64>> = cell.iter().map(|&v| vertices[v]).collect();
            if let Some(reason) = geometry::simplicity_defect(&pts, tolerance) {
                return Err(VemError::NonSimplePolygon { cell: c, reason });
            }
            if geometry::signed_area(&pts) < 0.0 {
                cell.reverse();
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(VemError::MalformedMesh(format!("vertex {v} is not used by any cell")));
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cell_edges = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let n = cell.len();
            let mut local = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (cell[i], cell[(i + 1) % n]);
                let key = (a.min(b), a.max(b));
                let sign = if a < b { 1.0 } else { -1.0 };
                let e = *lookup.entry(key).or_insert_with(|| {
                    edges.push(Edge {
                        vertices: [key.0, key.1],
                        cells: Vec::new(),
                    });
                    edges.len() - 1
                });
                edges[e].cells.push(c);
                local.push(CellEdge { edge: e, sign });
            }
            cell_edges.push(local);
        }
        for (e, edge) in edges.iter().enumerate() {
            if edge.cells.len() > 2 {
                return Err(VemError::NonConforming(format!(
                    "edge {e} ({}, {}) is shared by {} cells",
                    edge.vertices[0],
                    edge.vertices[1],
                    edge.cells.len()
                )));
            }
            if edge.cells.len() == 2 {
                let s: Vec<f64> = edge
                    .cells
                    .iter()
                    .map(|&c| cell_edges[c].iter().find(|ce| ce.edge == e).unwrap().sign)
                    .collect();
                if s[0] == s[1] {
                    return Err(VemError::NonConforming(format!(
                        "cells {} and {} traverse edge {e} in the same direction (overlap)",
                        edge.cells[0], edge.cells[1]
                    )));
                }
            }
        }

        // A vertex strictly inside an edge that has a single incident cell
        // is a hanging node of a neighbour.
        for (e, edge) in edges.iter().enumerate().filter(|(_, e)| e.is_boundary()) {
            let (a, b) = (vertices[edge.vertices[0]], vertices[edge.vertices[1]]);
            let ab = b - a;
            let len2 = ab.norm_squared();
            let (lo, hi) = (a.coords.inf(&b.coords), a.coords.sup(&b.coords));
            for (v, p) in vertices.iter().enumerate() {
                if v == edge.vertices[0] || v == edge.vertices[1] {
                    continue;
                }
                if p.x < lo.x - tolerance || p.x > hi.x + tolerance || p.y < lo.y - tolerance || p.y > hi.y + tolerance {
                    continue;
                }
                let s = (p - a).dot(&ab) / len2;
                let dist = ((p - a) - ab * s).norm();
                if s > 0.0 && s < 1.0 && dist <= tolerance {
                    return Err(VemError::NonConforming(format!(
                        "vertex {v} lies inside edge {e} ({}, {}) without splitting it",
                        edge.vertices[0], edge.vertices[1]
                    )));
                }
            }
        }

        let mut boundary_vertex = vec![false; vertices.len()];
        for edge in edges.iter().filter(|e| e.is_boundary()) {
            boundary_vertex[edge.vertices[0]] = true;
            boundary_vertex[edge.vertices[1]] = true;
        }

        let geometry = cells
            .iter()
            .map(|cell| {
                let pts: Vec<Point2<f64>> = cell.iter().map(|&v| vertices[v]).collect();
                CellGeometry::compute(&pts, tolerance)
            })
            .collect();

        Ok(Self {
            vertices,
            cells,
            edges,
            cell_edges,
            boundary_vertex,
            geometry,
            tolerance,
        })
    }

    pub fn vertices(&self) -> &[Point2<f64>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn cell_points(&self, c: usize) -> Vec<Point2<f64>> {
        self.cells[c].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell_edges(&self, c: usize) -> &[CellEdge] {
        &self.cell_edges[c]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn geometry(&self, c: usize) -> &CellGeometry {
        &self.geometry[c]
    }

    /// Canonically oriented frame of edge `e`.
    pub fn edge_frame(&self, e: usize) -> EdgeFrame {
        let [a, b] = self.edges[e].vertices;
        EdgeFrame::new(self.vertices[a], self.vertices[b])
    }

    /// Canonical unit normal of edge `e` (its direction rotated by −90°).
    pub fn edge_normal(&self, e: usize) -> Vector2<f64> {
        self.edge_frame(e).normal()
    }

    /// `h = max_D h_D`.
    pub fn mesh_size(&self) -> f64 {
        self.geometry.iter().map(|g| g.diameter).fold(0.0, f64::max)
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    /// Absolute geometric tolerance (1e-12 of the bounding-box diameter).
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Uniformly scaled copy of the mesh.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.vertices.iter().map(|p| Point2::from(p.coords * factor)).collect(),
            self.cells.clone(),
        )
    }
}

fn bounding_box_diameter(vertices: &[Point2<f64>]) -> f64 {
    let (mut lo, mut hi) = (vertices[0].coords, vertices[0].coords);
    for p in vertices {
        lo = lo.inf(&p.coords);
        hi = hi.sup(&p.coords);
    }
    (hi - lo).norm()
}

fn check_duplicates(vertices: &[Point2<f64>], tol: f64) -> Result<()> {
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a].x.total_cmp(&vertices[b].x));
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            if vertices[b].x - vertices[a].x > tol {
                break;
            }
            if (vertices[b] - vertices[a]).norm() <= tol {
                return Err(VemError::DuplicateVertex {
                    first: a.min(b),
                    second: a.max(b),
                    tol,
                });
            }
        }
    }
    Ok(())
}
