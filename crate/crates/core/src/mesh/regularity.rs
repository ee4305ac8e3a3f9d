use std::fmt;

use super::PolygonalMesh;
use crate::error::{Result, VemError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellRegularity {
    pub rho_edge: f64,
    pub rho_star: f64,
}

impl CellRegularity {
    pub fn star_shaped(&self) -> bool {
        self.rho_star > 0.0
    }
}

/// Shape-regularity audit: `|e| ≥ ρ h_D` for every edge and star-shapedness
/// with respect to a disc of radius `ρ h_D`.
#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub cells: Vec<CellRegularity>,
    /// `min_D min(rho_edge, rho_star)`.
    pub rho: f64,
    pub rho_min: f64,
}

impl RegularityReport {
    pub fn passed(&self) -> bool {
        self.rho >= self.rho_min
    }

    /// Cells that are not star-shaped with respect to any disc.
    pub fn non_star_shaped(&self) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.star_shaped())
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>8}  {:>12}  {:>12}  status", "cell", "rho_edge", "rho_star")?;
        for (i, c) in self.cells.iter().enumerate() {
            let status = if !c.star_shaped() {
                "NOT STAR-SHAPED"
            } else if c.rho_edge.min(c.rho_star) < self.rho_min {
                "below threshold"
            } else {
                "ok"
            };
            writeln!(f, "{i:>8}  {:>12.6}  {:>12.6}  {status}", c.rho_edge, c.rho_star)?;
        }
        writeln!(
            f,
            "mesh rho = {:.6} (threshold {:.6}): {}",
            self.rho,
            self.rho_min,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Audits every cell. Fails the report iff the mesh-wide `rho` is below
/// `rho_min`.
pub fn check_regularity(mesh: &PolygonalMesh, rho_min: f64) -> Result<RegularityReport> {
    if !(rho_min > 0.0 && rho_min < 1.0) {
        return Err(VemError::InvalidOption(format!("rho_min must lie in (0, 1), got {rho_min}")));
    }
    let cells: Vec<CellRegularity> = (0..mesh.num_cells())
        .map(|c| {
            let g = mesh.geometry(c);
            CellRegularity {
                rho_edge: g.rho_edge,
                rho_star: g.rho_star,
            }
        })
        .collect();
    let rho = cells.iter().map(|c| c.rho_edge.min(c.rho_star)).fold(f64::INFINITY, f64::min);
    Ok(RegularityReport { cells, rho, rho_min })
}
