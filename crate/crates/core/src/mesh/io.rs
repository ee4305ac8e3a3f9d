use nalgebra::Point2;
use serde::{Deserialize, Serialize};

use super::PolygonalMesh;
use crate::error::{Result, VemError};

/// On-disk mesh schema: `{"vertices": [[x, y], ...], "cells": [[i0, i1, ...], ...]}`
/// with 0-based vertex indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<Vec<usize>>,
}

impl From<&PolygonalMesh> for MeshFile {
    fn from(mesh: &PolygonalMesh) -> Self {
        Self {
            vertices: mesh.vertices().iter().map(|p| [p.x, p.y]).collect(),
            cells: mesh.cells().to_vec(),
        }
    }
}

impl PolygonalMesh {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MeshFile::from(self)).expect("mesh serialization cannot fail")
    }
}

/// Parses and validates a JSON mesh file.
pub fn load_mesh(bytes: &[u8]) -> Result<PolygonalMesh> {
    let file: MeshFile = serde_json::from_slice(bytes).map_err(|e| VemError::MalformedMesh(e.to_string()))?;
    if let Some(i) = file.vertices.iter().position(|v| !v[0].is_finite() || !v[1].is_finite()) {
        return Err(VemError::MalformedMesh(format!("vertex {i} has non-finite coordinates")));
    }
    PolygonalMesh::new(
        file.vertices.into_iter().map(|[x, y]| Point2::new(x, y)).collect(),
        file.cells,
    )
}
