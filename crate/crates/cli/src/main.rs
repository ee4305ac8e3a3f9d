use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vem_core::element::{ConstraintMode, ElementOptions, Stabilization};
use vem_core::mesh::{check_regularity, generate_mesh, load_mesh, MeshFamily, PolygonalMesh};
use vem_core::study::{run_convergence, solve_case, ConvergenceReport, ManufacturedCase, StudyOptions};
use vem_core::{Result, VemError};

/// Conforming virtual element solver for the clamped Kirchhoff plate
/// `Δ²u = f`, `u = ∂u/∂n = 0` on polygonal meshes.
#[derive(Parser, Debug)]
#[command(name = "vem-plate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one manufactured case on one mesh and report the six errors.
    Solve(SolveArgs),
    /// Run a convergence study over generated mesh levels.
    Converge(ConvergeArgs),
    /// Audit the shape regularity of a mesh file.
    CheckMesh(CheckMeshArgs),
}

#[derive(Args, Debug)]
struct Discretization {
    /// Element order (2, 3 or 4).
    #[arg(long)]
    k: usize,
    /// Manufactured case: zero, poly, bump or sinsq.
    #[arg(long, default_value = "sinsq")]
    case: String,
    /// Stabilization: dof, boundary-n or boundary-tn.
    #[arg(long, default_value = "dof")]
    stab: Stabilization,
    /// Projector constraints: boundary, volume-gradient or volume-mean.
    #[arg(long, default_value = "boundary")]
    constraints: ConstraintMode,
    /// Write the results as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// JSON mesh file.
    #[arg(long, conflicts_with_all = ["family", "n"], required_unless_present = "family")]
    mesh: Option<PathBuf>,
    /// Generated mesh family: uniform-quad, uniform-triangle, perturbed-quad or mixed.
    #[arg(long, requires = "n")]
    family: Option<MeshFamily>,
    /// Level of the generated mesh (cells per side).
    #[arg(long)]
    n: Option<usize>,
    /// Reject the mesh if its regularity falls below this threshold.
    #[arg(long)]
    rho: Option<f64>,
    #[command(flatten)]
    disc: Discretization,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    /// Generated mesh family: uniform-quad, uniform-triangle, perturbed-quad or mixed.
    #[arg(long)]
    family: MeshFamily,
    /// Comma-separated mesh levels, coarse to fine.
    #[arg(long, value_delimiter = ',', required = true)]
    levels: Vec<usize>,
    #[command(flatten)]
    disc: Discretization,
}

#[derive(Args, Debug)]
struct CheckMeshArgs {
    /// JSON mesh file.
    #[arg(long)]
    mesh: PathBuf,
    /// Regularity threshold in (0, 1).
    #[arg(long)]
    rho: f64,
}

fn read_mesh(path: &Path) -> Result<PolygonalMesh> {
    load_mesh(&std::fs::read(path)?)
}

fn study_options(disc: &Discretization) -> StudyOptions {
    let mut options = StudyOptions::new(disc.k);
    options.element = ElementOptions {
        constraints: disc.constraints,
        stabilization: disc.stab,
    };
    options
}

fn emit(report: &ConvergenceReport, csv: Option<&Path>) -> Result<()> {
    print!("{report}");
    if let Some(path) = csv {
        report.write_csv(File::create(path)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<()> {
    let (mesh, family, n) = match (&args.mesh, args.family, args.n) {
        (Some(path), _, _) => (read_mesh(path)?, path.display().to_string(), 0),
        (None, Some(family), Some(n)) => (generate_mesh(family, n)?, family.to_string(), n),
        _ => return Err(VemError::InvalidOption("give either --mesh or --family with --n".into())),
    };
    if let Some(rho_min) = args.rho {
        let report = check_regularity(&mesh, rho_min)?;
        if !report.passed() {
            return Err(VemError::Regularity {
                rho: report.rho,
                rho_min,
            });
        }
    }
    let case = ManufacturedCase::by_name(&args.disc.case, args.disc.k)?;
    let options = study_options(&args.disc);
    let mut level = solve_case(&mesh, &case, &options)?;
    level.n = n;
    println!(
        "{} cells, {} DOFs ({} free); solver {:?}: {} iterations, relative residual {:.2e}",
        mesh.num_cells(),
        level.ndof,
        level.n_free,
        level.solver.method,
        level.solver.iterations,
        level.solver.residual
    );
    let report = ConvergenceReport {
        case: case.name().to_string(),
        family,
        options,
        levels: vec![level],
        exact: case.polynomial_degree().is_some_and(|d| d <= args.disc.k),
    };
    emit(&report, args.disc.csv.as_deref())
}

fn converge(args: ConvergeArgs) -> Result<()> {
    let case = ManufacturedCase::by_name(&args.disc.case, args.disc.k)?;
    let report = run_convergence(&case, args.family, &args.levels, &study_options(&args.disc))?;
    emit(&report, args.disc.csv.as_deref())
}

fn check_mesh(args: CheckMeshArgs) -> Result<bool> {
    let mesh = read_mesh(&args.mesh)?;
    let report = check_regularity(&mesh, args.rho)?;
    print!("{report}");
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args).map(|_| true),
        Command::Converge(args) => converge(args).map(|_| true),
        Command::CheckMesh(args) => check_mesh(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
