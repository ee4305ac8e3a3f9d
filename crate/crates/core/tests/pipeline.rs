use vem_core::element::{ConstraintMode, ElementOptions, Stabilization};
use vem_core::mesh::{generate_mesh, load_mesh, MeshFamily};
use vem_core::study::{solve_case, ManufacturedCase, StudyOptions};
use vem_core::system::{SolveMethod, SolverOptions};

#[test]
fn json_round_trip_gives_identical_solution() {
    let mesh = generate_mesh(MeshFamily::Mixed, 3).unwrap();
    let reloaded = load_mesh(mesh.to_json().as_bytes()).unwrap();
    let case = ManufacturedCase::sinsq();
    let options = StudyOptions::new(3);
    let a = solve_case(&mesh, &case, &options).unwrap();
    let b = solve_case(&reloaded, &case, &options).unwrap();
    assert_eq!(a.errors, b.errors);
    assert_eq!(a.ndof, b.ndof);
}

#[test]
fn direct_and_iterative_solvers_agree() {
    let mesh = generate_mesh(MeshFamily::PerturbedQuad, 6).unwrap();
    let case = ManufacturedCase::bump();
    let direct = solve_case(&mesh, &case, &StudyOptions::new(2)).unwrap();
    let mut options = StudyOptions::new(2);
    options.solver = SolverOptions {
        method: SolveMethod::ConjugateGradient,
        tolerance: 1e-12,
    };
    let cg = solve_case(&mesh, &case, &options).unwrap();
    assert_eq!(cg.solver.method, SolveMethod::ConjugateGradient);
    assert!(cg.solver.iterations > 0);
    assert!((direct.errors.h2_pd - cg.errors.h2_pd).abs() <= 1e-6 * direct.errors.h2_pd);
}

#[test]
fn constraint_modes_agree_at_fine_level() {
    let mesh = generate_mesh(MeshFamily::UniformQuad, 16).unwrap();
    let case = ManufacturedCase::sinsq();
    let run = |constraints| {
        let mut options = StudyOptions::new(4);
        options.element = ElementOptions {
            constraints,
            stabilization: Stabilization::Dof,
        };
        solve_case(&mesh, &case, &options).unwrap().errors.as_array()
    };
    let reference = run(ConstraintMode::Boundary);
    for mode in [ConstraintMode::VolumeGradient, ConstraintMode::VolumeMean] {
        for (a, b) in reference.iter().zip(run(mode)) {
            assert!((a - b).abs() < 0.1 * a, "{mode}: {a:e} vs {b:e}");
        }
    }
}

#[test]
fn triangle_meshes_converge() {
    let case = ManufacturedCase::sinsq();
    let options = StudyOptions::new(2);
    let coarse = solve_case(&generate_mesh(MeshFamily::UniformTriangle, 8).unwrap(), &case, &options).unwrap();
    let fine = solve_case(&generate_mesh(MeshFamily::UniformTriangle, 16).unwrap(), &case, &options).unwrap();
    assert!(fine.errors.h2_pd < 0.6 * coarse.errors.h2_pd);
    assert!(fine.errors.l2_pd < 0.35 * coarse.errors.l2_pd);
}
