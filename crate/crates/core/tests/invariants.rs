use std::f64::consts::PI;

use nalgebra::{DVector, Point2, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vem_core::element::{ConstraintMode, ElementOptions, LocalElement, Stabilization};
use vem_core::mesh::{check_regularity, generate_mesh, MeshFamily, PolygonalMesh};
use vem_core::polynomial::{dim, CellPoly};
use vem_core::quadrature::fan_rule;
use vem_core::system::{apply_clamped_bc, assemble};

/// Star-shaped polygon around `(cx, cy)` with jittered radii and angles.
fn star_polygon() -> impl Strategy<Value = Vec<Point2<f64>>> {
    (3usize..=8, -2.0..2.0f64, -2.0..2.0f64, 0.05..3.0f64).prop_flat_map(|(n, cx, cy, size)| {
        (
            prop::collection::vec(0.6..1.3f64, n),
            prop::collection::vec(-0.3..0.3f64, n),
        )
            .prop_map(move |(radii, jitter)| {
                (0..n)
                    .map(|i| {
                        let a = 2.0 * PI * (i as f64 + jitter[i]) / n as f64;
                        Point2::new(cx + size * radii[i] * a.cos(), cy + size * radii[i] * a.sin())
                    })
                    .collect()
            })
    })
}

fn shoelace(p: &[Point2<f64>]) -> f64 {
    let n = p.len();
    0.5 * (0..n).map(|i| p[i].x * p[(i + 1) % n].y - p[(i + 1) % n].x * p[i].y).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fan_rule_measures_area(points in star_polygon()) {
        let mesh = PolygonalMesh::new(points.clone(), vec![(0..points.len()).collect()]).unwrap();
        let apex = mesh.geometry(0).star_center.unwrap();
        let rule = fan_rule(&points, apex, 0);
        prop_assert!((rule.total_weight() - shoelace(&points)).abs() <= 1e-12 * shoelace(&points));
    }

    #[test]
    fn energy_projector_reproduces_polynomials(points in star_polygon(), k in 2usize..=4, seed in any::<u64>()) {
        let el = LocalElement::from_polygon(&points, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = DVector::from_fn(dim(k), |_, _| rng.random_range(-1.0..1.0));
        let q = CellPoly::from_coeffs(el.frame(), k, coeffs);
        let d = el.dofs_of(&q);
        let rule = el.rule(2 * k);
        let norm = rule.integrate(|x| q.eval(x).powi(2)).sqrt();
        for mode in ConstraintMode::ALL.iter().copied().filter(|m| k == 4 || *m != ConstraintMode::VolumeMean) {
            let proj = el.projectors(mode).unwrap();
            for pi in [&proj.pi_delta, &proj.pi0k] {
                let p = el.poly(pi * &d);
                let err = rule.integrate(|x| (p.eval(x) - q.eval(x)).powi(2)).sqrt();
                prop_assert!(err <= 1e-10 * norm, "{mode}: {err:e} vs {norm:e}");
            }
        }
    }

    #[test]
    fn local_stiffness_is_symmetric_psd(points in star_polygon(), k in 2usize..=4, variant in 0usize..3) {
        let el = LocalElement::from_polygon(&points, k).unwrap();
        let proj = el.projectors(ConstraintMode::Boundary).unwrap();
        let stiff = el.local_stiffness(&proj, Stabilization::ALL[variant]).stiffness;
        prop_assert!((&stiff - stiff.transpose()).amax() <= 1e-13 * stiff.amax());
        let eig = SymmetricEigen::new(stiff).eigenvalues;
        prop_assert!(eig.min() >= -1e-10 * eig.max());
        let null = eig.iter().filter(|&&l| l.abs() < 1e-9 * eig.max()).count();
        prop_assert_eq!(null, 3);
    }

    #[test]
    fn regularity_is_scale_invariant(points in star_polygon(), factor in 1e-3..1e3f64) {
        let mesh = PolygonalMesh::new(points.clone(), vec![(0..points.len()).collect()]).unwrap();
        let a = check_regularity(&mesh, 0.01).unwrap().cells[0];
        let b = check_regularity(&mesh.scaled(factor).unwrap(), 0.01).unwrap().cells[0];
        prop_assert!((a.rho_edge - b.rho_edge).abs() <= 1e-9);
        prop_assert!((a.rho_star - b.rho_star).abs() <= 1e-9);
    }

    #[test]
    fn reduced_energy_is_positive(seed in any::<u64>(), k in 2usize..=4) {
        let mesh = generate_mesh(MeshFamily::Mixed, 2).unwrap();
        let disc = assemble(&mesh, k, ElementOptions::default(), |_| 0.0).unwrap();
        let reduced = apply_clamped_bc(&disc.system, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..reduced.free.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let energy: f64 = reduced
            .matrix
            .outer_iterator()
            .enumerate()
            .map(|(i, row)| v[i] * row.iter().map(|(j, a)| a * v[j]).sum::<f64>())
            .sum();
        prop_assert!(energy > 0.0);
    }
}

#[test]
fn generated_meshes_are_regular() {
    for family in MeshFamily::ALL {
        for n in [2, 5, 9] {
            let mesh = generate_mesh(family, n).unwrap();
            let report = check_regularity(&mesh, 0.05).unwrap();
            assert!(report.passed(), "{family} n = {n}: rho = {}", report.rho);
        }
    }
}
