use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::{error_norms, interpolate_dofs, ErrorNorms, ManufacturedCase};
use crate::element::ElementOptions;
use crate::error::{Result, VemError};
use crate::mesh::{generate_mesh, MeshFamily, PolygonalMesh};
use crate::system::{apply_clamped_bc, assemble, solve, SolveReport, SolverOptions};

/// Element order, element variants and solver settings of a study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyOptions {
    pub k: usize,
    pub element: ElementOptions,
    pub solver: SolverOptions,
}

impl StudyOptions {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            element: ElementOptions::default(),
            solver: SolverOptions::default(),
        }
    }
}

/// Result of one solve.
#[derive(Clone, Debug)]
pub struct LevelResult {
    /// Generator level, or 0 for a mesh read from file.
    pub n: usize,
    /// Largest cell diameter.
    pub h: f64,
    /// Total number of global DOFs, constrained ones included.
    pub ndof: usize,
    pub n_free: usize,
    pub errors: ErrorNorms,
    pub solver: SolveReport,
}

/// Assembles, solves with the interpolant of `u` as boundary lifting and
/// measures the six errors.
pub fn solve_case(mesh: &PolygonalMesh, case: &ManufacturedCase, options: &StudyOptions) -> Result<LevelResult> {
    let disc = assemble(mesh, options.k, options.element, |p| case.load(p))?;
    let lifting = interpolate_dofs(mesh, options.k, case)?;
    let reduced = apply_clamped_bc(&disc.system, Some(&lifting))?;
    let solution = solve(&reduced, &options.solver)?;
    Ok(LevelResult {
        n: 0,
        h: mesh.mesh_size(),
        ndof: disc.dof_map.n_dofs(),
        n_free: reduced.free.len(),
        errors: error_norms(&disc, &solution.dofs, case),
        solver: solution.report,
    })
}

/// Experimental order of convergence between two levels.
pub fn eoc(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub case: String,
    pub family: String,
    pub options: StudyOptions,
    pub levels: Vec<LevelResult>,
    /// The exact solution lies in `P_k`: errors sit at round-off and the
    /// EOC columns carry no information.
    pub exact: bool,
}

#[derive(Serialize)]
struct CsvRow {
    h: f64,
    ndof: usize,
    e_h2_pd: f64,
    e_h1_pd: f64,
    e_l2_pd: f64,
    e_h2_p0: f64,
    e_h1_p0: f64,
    e_l2_p0: f64,
    eoc_h2_pd: Option<f64>,
    eoc_h1_pd: Option<f64>,
    eoc_l2_pd: Option<f64>,
    eoc_h2_p0: Option<f64>,
    eoc_h1_p0: Option<f64>,
    eoc_l2_p0: Option<f64>,
}

impl ConvergenceReport {
    /// EOCs of the six errors for each consecutive pair of levels.
    pub fn eocs(&self) -> Vec<[f64; 6]> {
        self.levels
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].errors.as_array(), w[1].errors.as_array());
                std::array::from_fn(|i| eoc(a[i], b[i], w[0].h, w[1].h))
            })
            .collect()
    }

    /// EOCs between the two finest levels.
    pub fn final_eoc(&self) -> Option<[f64; 6]> {
        self.eocs().last().copied()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        let eocs = self.eocs();
        for (i, level) in self.levels.iter().enumerate() {
            let e = level.errors;
            let r = if i == 0 { None } else { Some(eocs[i - 1]) };
            let pick = |j: usize| r.map(|r| r[j]);
            csv.serialize(CsvRow {
                h: level.h,
                ndof: level.ndof,
                e_h2_pd: e.h2_pd,
                e_h1_pd: e.h1_pd,
                e_l2_pd: e.l2_pd,
                e_h2_p0: e.h2_p0,
                e_h1_p0: e.h1_p0,
                e_l2_p0: e.l2_p0,
                eoc_h2_pd: pick(0),
                eoc_h1_pd: pick(1),
                eoc_l2_pd: pick(2),
                eoc_h2_p0: pick(3),
                eoc_h1_p0: pick(4),
                eoc_l2_p0: pick(5),
            })?;
        }
        csv.flush()?;
        Ok(())
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "case {} on {} meshes, k = {}, stabilization {}, constraints {}",
            self.case, self.family, self.options.k, self.options.element.stabilization, self.options.element.constraints
        )?;
        write!(f, "{:>5} {:>10} {:>8}", "n", "h", "ndof")?;
        for label in ErrorNorms::LABELS {
            write!(f, " {:>10} {:>5}", label, "eoc")?;
        }
        writeln!(f)?;
        let eocs = self.eocs();
        for (i, level) in self.levels.iter().enumerate() {
            write!(f, "{:>5} {:>10.4e} {:>8}", level.n, level.h, level.ndof)?;
            for (j, e) in level.errors.as_array().into_iter().enumerate() {
                write!(f, " {:>10.3e}", e)?;
                match (i, self.exact) {
                    (0, _) | (_, true) => write!(f, " {:>5}", "-")?,
                    _ => write!(f, " {:>5.2}", eocs[i - 1][j])?,
                }
            }
            writeln!(f)?;
        }
        if self.exact {
            writeln!(f, "exact: the solution lies in P_k, errors are at round-off level")?;
        }
        Ok(())
    }
}

/// Runs `case` on `family` at each level in `levels` (at least three, with
/// strictly decreasing mesh size).
pub fn run_convergence(
    case: &ManufacturedCase,
    family: MeshFamily,
    levels: &[usize],
    options: &StudyOptions,
) -> Result<ConvergenceReport> {
    if levels.len() < 3 {
        return Err(VemError::InvalidOption(format!(
            "a convergence study needs at least 3 levels, got {}",
            levels.len()
        )));
    }
    let mut results: Vec<LevelResult> = Vec::with_capacity(levels.len());
    for &n in levels {
        let mesh = generate_mesh(family, n)?;
        if let Some(prev) = results.last() {
            if mesh.mesh_size() >= prev.h {
                return Err(VemError::InvalidOption(format!(
                    "mesh size must decrease across levels (level {n} after {})",
                    prev.n
                )));
            }
        }
        let mut result = solve_case(&mesh, case, options)?;
        result.n = n;
        results.push(result);
    }
    Ok(ConvergenceReport {
        case: case.name().to_string(),
        family: family.name().to_string(),
        options: *options,
        levels: results,
        exact: case.polynomial_degree().is_some_and(|d| d <= options.k),
    })
}
