use std::f64::consts::PI;

use nalgebra::{DVector, Matrix2, Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, VemError};
use crate::polynomial::{dim, CellFrame, CellPoly};

/// Seed of the random polynomial in the `poly` case.
pub const POLY_SEED: u64 = 0x0b1a_2017;

#[derive(Clone, Debug)]
enum Kind {
    Zero,
    Poly(CellPoly),
    Bump,
    Sinsq,
}

/// A closed-form solution of the clamped plate problem on the unit square
/// together with its derivatives and load `f = Δ²u`.
#[derive(Clone, Debug)]
pub struct ManufacturedCase {
    kind: Kind,
}

/// `g(t) = t²(1-t)²` and its derivatives up to order four.
fn bump_1d(t: f64) -> [f64; 5] {
    let s = 1.0 - t;
    [t * t * s * s, 2.0 * t * s * (1.0 - 2.0 * t), 12.0 * t * t - 12.0 * t + 2.0, 24.0 * t - 12.0, 24.0]
}

/// `S(t) = sin²(πt)` and its derivatives up to order four.
fn sinsq_1d(t: f64) -> [f64; 5] {
    let s = (PI * t).sin();
    let (s2, c2) = (2.0 * PI * t).sin_cos();
    let p2 = PI * PI;
    [s * s, PI * s2, 2.0 * p2 * c2, -4.0 * p2 * PI * s2, -8.0 * p2 * p2 * c2]
}

impl ManufacturedCase {
    pub const NAMES: [&'static str; 4] = ["zero", "poly", "bump", "sinsq"];

    pub fn zero() -> Self {
        Self { kind: Kind::Zero }
    }

    /// Random polynomial of degree `degree` with coefficients in `[-1, 1)`
    /// over the scaled monomials centered at `(1/2, 1/2)`.
    pub fn poly(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = DVector::from_fn(dim(degree), |_, _| rng.random_range(-1.0..1.0));
        let frame = CellFrame::new(Point2::new(0.5, 0.5), 1.0);
        Self {
            kind: Kind::Poly(CellPoly::from_coeffs(frame, degree, coeffs)),
        }
    }

    pub fn from_poly(p: CellPoly) -> Self {
        Self { kind: Kind::Poly(p) }
    }

    /// `u = x²(1-x)²y²(1-y)²`.
    pub fn bump() -> Self {
        Self { kind: Kind::Bump }
    }

    /// `u = (sin πx sin πy)²`.
    pub fn sinsq() -> Self {
        Self { kind: Kind::Sinsq }
    }

    /// Looks a case up by name; `poly` has degree `k`.
    pub fn by_name(name: &str, k: usize) -> Result<Self> {
        match name {
            "zero" => Ok(Self::zero()),
            "poly" => Ok(Self::poly(k, POLY_SEED)),
            "bump" => Ok(Self::bump()),
            "sinsq" => Ok(Self::sinsq()),
            _ => Err(VemError::InvalidOption(format!(
                "unknown case '{name}' (expected one of {})",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Zero => "zero",
            Kind::Poly(_) => "poly",
            Kind::Bump => "bump",
            Kind::Sinsq => "sinsq",
        }
    }

    pub fn domain(&self) -> &'static str {
        "unit square (0,1)²"
    }

    pub fn regularity(&self) -> &'static str {
        match self.kind {
            Kind::Zero | Kind::Bump | Kind::Sinsq => "C∞, in H²₀(Ω)",
            Kind::Poly(_) => "polynomial, not in H²₀(Ω); needs a boundary lifting",
        }
    }

    /// Degree of the solution if it is a polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Zero => Some(0),
            Kind::Poly(p) => Some(p.degree),
            _ => None,
        }
    }

    fn separable(&self, p: &Point2<f64>) -> Option<([f64; 5], [f64; 5])> {
        match self.kind {
            Kind::Bump => Some((bump_1d(p.x), bump_1d(p.y))),
            Kind::Sinsq => Some((sinsq_1d(p.x), sinsq_1d(p.y))),
            _ => None,
        }
    }

    pub fn value(&self, p: &Point2<f64>) -> f64 {
        match &self.kind {
            Kind::Zero => 0.0,
            Kind::Poly(q) => q.eval(p),
            _ => {
                let (a, b) = self.separable(p).unwrap();
                a[0] * b[0]
            }
        }
    }

    pub fn gradient(&self, p: &Point2<f64>) -> Vector2<f64> {
        match &self.kind {
            Kind::Zero => Vector2::zeros(),
            Kind::Poly(q) => q.gradient(p),
            _ => {
                let (a, b) = self.separable(p).unwrap();
                Vector2::new(a[1] * b[0], a[0] * b[1])
            }
        }
    }

    pub fn hessian(&self, p: &Point2<f64>) -> Matrix2<f64> {
        match &self.kind {
            Kind::Zero => Matrix2::zeros(),
            Kind::Poly(q) => {
                let h = q.hessian().eval(p);
                Matrix2::new(h[0][0], h[0][1], h[1][0], h[1][1])
            }
            _ => {
                let (a, b) = self.separable(p).unwrap();
                let xy = a[1] * b[1];
                Matrix2::new(a[2] * b[0], xy, xy, a[0] * b[2])
            }
        }
    }

    /// `f = Δ²u`.
    pub fn load(&self, p: &Point2<f64>) -> f64 {
        match &self.kind {
            Kind::Zero => 0.0,
            Kind::Poly(q) => q.bilaplacian().eval(p),
            _ => {
                let (a, b) = self.separable(p).unwrap();
                a[4] * b[0] + 2.0 * a[2] * b[2] + a[0] * b[4]
            }
        }
    }

    /// Largest discrepancy between `f` and a five-point finite-difference
    /// Laplacian of the closed-form `Δu` over `samples` seeded random points
    /// of the unit square, relative to the largest `|f|` seen.
    pub fn load_discrepancy(&self, samples: usize, step: f64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(samples as u64);
        let lap = |p: Point2<f64>| self.hessian(&p).trace();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for _ in 0..samples {
            let p = Point2::new(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
            let dx = Vector2::new(step, 0.0);
            let dy = Vector2::new(0.0, step);
            let fd = (lap(p + dx) + lap(p - dx) + lap(p + dy) + lap(p - dy) - 4.0 * lap(p)) / (step * step);
            let f = self.load(&p);
            worst = worst.max((fd - f).abs());
            scale = scale.max(f.abs());
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }
}
