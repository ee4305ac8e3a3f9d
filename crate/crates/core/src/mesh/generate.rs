use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PolygonalMesh;
use crate::error::{Result, VemError};

const PERTURBATION_SEED: u64 = 0x5eed_2017;

/// Mesh families on the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeshFamily {
    /// `n × n` squares.
    UniformQuad,
    /// `n × n` squares, each split into two triangles.
    UniformTriangle,
    /// `n × n` quadrilaterals with interior vertices moved by a seeded
    /// random offset of at most `0.2 / n` per coordinate.
    PerturbedQuad,
    /// Perturbed grid mixing triangles, quadrilaterals, pentagons and
    /// hexagons (some non-convex), built by inserting kinked vertices on a
    /// pattern of interior edges and splitting a pattern of the remaining
    /// quadrilaterals.
    Mixed,
}

impl MeshFamily {
    pub const ALL: [MeshFamily; 4] = [Self::UniformQuad, Self::UniformTriangle, Self::PerturbedQuad, Self::Mixed];

    pub fn name(&self) -> &'static str {
        match self {
            Self::UniformQuad => "uniform-quad",
            Self::UniformTriangle => "uniform-triangle",
            Self::PerturbedQuad => "perturbed-quad",
            Self::Mixed => "mixed",
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshFamily {
    type Err = VemError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| VemError::InvalidOption(format!("unknown mesh family '{s}'")))
    }
}

/// Builds the level-`n` member of `family` on the unit square.
pub fn generate_mesh(family: MeshFamily, n: usize) -> Result<PolygonalMesh> {
    if n == 0 {
        return Err(VemError::InvalidOption("mesh level must be at least 1".into()));
    }
    let h = 1.0 / n as f64;
    let index = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices: Vec<Point2<f64>> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| Point2::new(i as f64 * h, j as f64 * h)))
        .collect();

    let amplitude = match family {
        MeshFamily::PerturbedQuad => 0.2 * h,
        MeshFamily::Mixed => 0.1 * h,
        _ => 0.0,
    };
    if amplitude > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
        for j in 1..n {
            for i in 1..n {
                let dx = rng.random_range(-amplitude..=amplitude);
                let dy = rng.random_range(-amplitude..=amplitude);
                vertices[index(i, j)] += Vector2::new(dx, dy);
            }
        }
    }

    let mut cells = Vec::new();
    match family {
        MeshFamily::UniformQuad | MeshFamily::PerturbedQuad => {
            for j in 0..n {
                for i in 0..n {
                    cells.push(vec![index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)]);
                }
            }
        }
        MeshFamily::UniformTriangle => {
            for j in 0..n {
                for i in 0..n {
                    cells.push(vec![index(i, j), index(i + 1, j), index(i + 1, j + 1)]);
                    cells.push(vec![index(i, j), index(i + 1, j + 1), index(i, j + 1)]);
                }
            }
        }
        MeshFamily::Mixed => {
            let kink = 0.12 * h;
            // vertical interior edge at column line `i`, row `j`
            let mut vertical: HashMap<(usize, usize), usize> = HashMap::new();
            for j in 0..n {
                for i in 1..n {
                    if (i + 2 * j) % 3 == 0 {
                        let mid = nalgebra::center(&vertices[index(i, j)], &vertices[index(i, j + 1)]);
                        vertices.push(mid + Vector2::new(kink, 0.0));
                        vertical.insert((i, j), vertices.len() - 1);
                    }
                }
            }
            // horizontal interior edge at row line `j`, column `i`
            let mut horizontal: HashMap<(usize, usize), usize> = HashMap::new();
            for j in 1..n {
                for i in 0..n {
                    if (2 * i + j) % 4 == 1 {
                        let mid = nalgebra::center(&vertices[index(i, j)], &vertices[index(i + 1, j)]);
                        vertices.push(mid + Vector2::new(0.0, kink));
                        horizontal.insert((i, j), vertices.len() - 1);
                    }
                }
            }
            for j in 0..n {
                for i in 0..n {
                    let mut cell = vec![index(i, j)];
                    cell.extend(horizontal.get(&(i, j)));
                    cell.push(index(i + 1, j));
                    cell.extend(vertical.get(&(i + 1, j)));
                    cell.push(index(i + 1, j + 1));
                    cell.extend(horizontal.get(&(i, j + 1)));
                    cell.push(index(i, j + 1));
                    cell.extend(vertical.get(&(i, j)));
                    if cell.len() == 4 && (i + j) % 2 == 0 {
                        cells.push(vec![cell[0], cell[1], cell[2]]);
                        cells.push(vec![cell[0], cell[2], cell[3]]);
                    } else {
                        cells.push(cell);
                    }
                }
            }
        }
    }
    let mesh = PolygonalMesh::new(vertices, cells)?;
    assert!(
        (0..mesh.num_cells()).all(|c| mesh.geometry(c).star_center.is_some()),
        "generated {family} mesh has a cell that is not star-shaped"
    );
    Ok(mesh)
}
